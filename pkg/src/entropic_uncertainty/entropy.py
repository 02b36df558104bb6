"""Shannon entropies of binned and continuous densities, in nats."""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from ._numerics import as_domain
from .binning import BinGrid, DiscreteDistribution, bin_probabilities
from .states import Density

CONTINUOUS = "continuous"
DISCRETE_FULL = "discrete_full"
DISCRETE_FINITE = "discrete_finite"


@dataclass(frozen=True)
class EntropyValue:
    value: float
    kind: str
    window: int | None = None
    truncation_bound: float = 0.0

    def __float__(self):
        return self.value

    def as_dict(self) -> dict:
        return {"value": self.value, "kind": self.kind, "window": self.window,
                "truncation_bound": self.truncation_bound}


def shannon_entropy(probs: Iterable[float]) -> float:
    """``-sum p ln p`` with ``0 ln 0 = 0``, summed with :func:`math.fsum`."""
    terms = []
    for p in probs:
        p = float(p)
        if p > 0.0:
            terms.append(-p * math.log(p))
    return math.fsum(terms)


def discrete_entropy(dist: DiscreteDistribution) -> EntropyValue:
    """Entropy of the listed bins; the tail mass is not counted.

    For a full-line grid ``truncation_bound`` bounds what the uncovered
    mass ``t`` could add if it were spread over as many bins as are
    listed: ``-t ln t + t ln n``. It is a diagnostic, not a correction.
    """
    order = np.argsort(np.abs(dist.ks), kind="stable")
    value = shannon_entropy(dist.probs[order])
    if dist.grid.is_finite:
        return EntropyValue(value, DISCRETE_FINITE, dist.grid.window, 0.0)
    t = dist.tail_mass
    bound = 0.0 if t <= 0 else -t * math.log(t) + t * math.log(max(dist.probs.size, 1))
    return EntropyValue(value, DISCRETE_FULL, None, max(bound, 0.0))


def coarse_entropy(density: Density, grid: BinGrid) -> EntropyValue:
    return discrete_entropy(bin_probabilities(density, grid))


def continuous_entropy(density: Density, domain=None) -> float:
    """``-int_domain rho ln rho``; the integrand is taken as 0 where rho = 0."""
    return math.fsum(density.integrate(lambda x: entr(density.pdf(x)), a, b)
                     for a, b in as_domain(domain))


def large_delta_limit_probe(density: Density, convention: str, delta: float) -> EntropyValue:
    """Full-line coarse-grained entropy at a (large) bin width ``delta``.

    As ``delta`` grows the border convention leaves a state-dependent value
    (``ln 2`` for a symmetric state) while the midpoint convention tends to 0.
    """
    return coarse_entropy(density, BinGrid.from_convention(convention, delta))

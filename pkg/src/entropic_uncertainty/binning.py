"""Coarse graining of a density into equal-width bins.

Bin ``k`` covers ``[xi0 + k*delta, xi0 + (k+1)*delta]``. Two offsets matter:

* border convention, ``xi0 = 0``: the origin sits on a bin edge;
* midpoint convention, ``xi0 = -delta/2``: the origin sits at the centre of
  bin 0, which then spans ``[-delta/2, delta/2]``.

A grid either covers the whole line (bins are added until the uncovered mass
drops below :data:`EPS_TRUNC`) or a finite detector window ``k = -M..M``.
Finite windows always use the midpoint convention, so the window edges are
``+-(M + 1/2) delta``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO

import numpy as np

from ._numerics import outside_window
from .errors import DegenerateTailError, DomainError, TruncationError
from .states import Density, moment

BORDER = "border"
MIDPOINT = "midpoint"

#: Uncovered mass tolerated by a full-line grid.
EPS_TRUNC = 1e-12
#: Most bins a full-line grid may use.
INDEX_CAP = 1_000_000
#: Bin probabilities below this are stored as exact zeros.
TINY_PROB = 1e-300


@dataclass(frozen=True)
class BinGrid:
    delta: float
    xi0: float = 0.0
    window: int | None = None

    def __post_init__(self):
        if not self.delta > 0 or not math.isfinite(self.delta):
            raise DomainError(f"bin width must be positive, got {self.delta}")
        if self.window is not None:
            if int(self.window) != self.window or self.window < 0:
                raise DomainError(f"window must be a nonnegative integer, got {self.window}")
            if not math.isclose(self.xi0, -self.delta / 2, rel_tol=1e-12, abs_tol=0.0):
                raise DomainError("finite windows use the midpoint convention (xi0 = -delta/2)")

    @classmethod
    def border(cls, delta: float) -> BinGrid:
        return cls(delta, 0.0, None)

    @classmethod
    def midpoint(cls, delta: float, window: int | None = None) -> BinGrid:
        return cls(delta, -delta / 2, window)

    @classmethod
    def from_convention(cls, convention: str, delta: float, window: int | None = None) -> BinGrid:
        if convention == MIDPOINT:
            return cls.midpoint(delta, window)
        if convention == BORDER:
            if window is not None:
                raise DomainError("finite windows use the midpoint convention")
            return cls.border(delta)
        raise DomainError(f"unknown convention {convention!r}")

    @property
    def is_finite(self) -> bool:
        return self.window is not None

    @property
    def half_width(self) -> float:
        """Distance from the origin to the window edge, ``(M + 1/2) delta``."""
        if self.window is None:
            return math.inf
        return (self.window + 0.5) * self.delta

    def edge(self, k):
        return self.xi0 + np.asarray(k) * self.delta


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Bin probabilities for ``k = k_min .. k_min + len(probs) - 1``.

    ``tail_mass`` is the probability outside the listed bins, computed by
    its own integrals so that ``covered_mass + tail_mass = 1`` is a check,
    not an identity.
    """

    probs: np.ndarray
    k_min: int
    grid: BinGrid
    tail_mass: float

    @property
    def covered_mass(self) -> float:
        return math.fsum(self.probs)

    @property
    def ks(self) -> np.ndarray:
        return self.k_min + np.arange(self.probs.size)

    @property
    def edges(self) -> np.ndarray:
        return self.grid.edge(self.k_min + np.arange(self.probs.size + 1))

    def write_csv(self, target: str | Path | IO[str]) -> None:
        """Write columns ``k, lower_edge, upper_edge, prob``."""
        if isinstance(target, (str, Path)):
            with open(target, "w", newline="") as fh:
                self.write_csv(fh)
            return
        writer = csv.writer(target, lineterminator="\n")
        writer.writerow(["k", "lower_edge", "upper_edge", "prob"])
        edges = self.edges
        for i, k in enumerate(self.ks):
            writer.writerow([int(k), f"{edges[i]:.17g}", f"{edges[i + 1]:.17g}",
                             f"{self.probs[i]:.17g}"])


def _clean(probs: np.ndarray) -> np.ndarray:
    probs = np.clip(np.asarray(probs, dtype=float), 0.0, 1.0)
    probs[probs < TINY_PROB] = 0.0
    probs.setflags(write=False)
    return probs


def _quantile_edge(density: Density, lo: float, hi: float, target: float, upper: bool) -> float:
    """Outermost x in [lo, hi] whose outer tail still holds at most ``target``."""
    def outer(x):
        return density.mass(x, math.inf) if upper else density.mass(-math.inf, x)

    inside, outside = (lo, hi) if upper else (hi, lo)
    # outer(outside) == 0 <= target by construction of the support
    for _ in range(200):
        mid = 0.5 * (inside + outside)
        if mid in (inside, outside):
            break
        if outer(mid) <= target:
            outside = mid
        else:
            inside = mid
    return outside


def bin_probabilities(density: Density, grid: BinGrid) -> DiscreteDistribution:
    """Coarse-grain ``density`` on ``grid``."""
    if grid.is_finite:
        m = grid.window
        edges = grid.edge(np.arange(-m, m + 2))
        probs = density.bin_masses(edges)
        tail = density.mass(-math.inf, edges[0]) + density.mass(edges[-1], math.inf)
        return DiscreteDistribution(_clean(probs), -m, grid, tail)

    lo, hi = density.support()
    x_lo = _quantile_edge(density, lo, hi, EPS_TRUNC / 2, upper=False)
    x_hi = _quantile_edge(density, lo, hi, EPS_TRUNC / 2, upper=True)
    k_lo = math.floor((x_lo - grid.xi0) / grid.delta)
    k_hi = math.floor((x_hi - grid.xi0) / grid.delta)
    if k_hi - k_lo + 1 > INDEX_CAP:
        centre = (k_lo + k_hi) // 2
        k_lo, k_hi = centre - INDEX_CAP // 2, centre + INDEX_CAP // 2 - 1
        achieved = (density.mass(-math.inf, float(grid.edge(k_lo)))
                    + density.mass(float(grid.edge(k_hi + 1)), math.inf))
        raise TruncationError(f"full-line grid needs more than {INDEX_CAP} bins", achieved)
    edges = grid.edge(np.arange(k_lo, k_hi + 2))
    probs = density.bin_masses(edges)
    tail = density.mass(-math.inf, edges[0]) + density.mass(edges[-1], math.inf)
    return DiscreteDistribution(_clean(probs), k_lo, grid, tail)


def _require_window(grid: BinGrid) -> float:
    if not grid.is_finite:
        raise DomainError("tail moments need a finite detector window")
    return grid.half_width


def tail_mass(density: Density, grid: BinGrid) -> float:
    """Mass outside the detector window, ``q_inf``."""
    return moment(density, 0, outside_window(_require_window(grid)))


def tail_second_moment(density: Density, grid: BinGrid) -> float:
    """``int_{|x| >= (M+1/2) delta} x^2 rho(x) dx``; zero for a negligible tail."""
    region = outside_window(_require_window(grid))
    if moment(density, 0, region) < EPS_TRUNC:
        return 0.0
    return moment(density, 2, region)


def tail_variance(density: Density, grid: BinGrid) -> float:
    """Variance of the density conditioned on lying outside the window."""
    region = outside_window(_require_window(grid))
    q = moment(density, 0, region)
    if q <= EPS_TRUNC:
        raise DegenerateTailError(f"tail mass {q:.3e} is below {EPS_TRUNC:.0e}")
    mean = moment(density, 1, region) / q
    return moment(density, 2, region) / q - mean**2

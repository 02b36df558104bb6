"""Quadrature and interval helpers.

Integrals over analytic densities use QUADPACK's adaptive Gauss-Kronrod rule
(``scipy.integrate.quad``). Infinite endpoints are first clipped to the
density's numerical support, outside of which the density underflows to
zero in double precision; the remaining finite pieces are integrated
adaptively. Grid densities use composite Gauss-Legendre on the knot cells.
"""

from __future__ import annotations

import math
import os
from collections.abc import Callable, Iterable, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, NumericError

#: Relative quadrature tolerance. ``ENTROPIC_UR_QUAD_EPSREL`` overrides it
#: for diagnostic runs only.
EPSREL = float(os.environ.get("ENTROPIC_UR_QUAD_EPSREL", "1e-10"))
EPSABS = 1e-14
QUAD_LIMIT = 200

Interval = tuple[float, float]
Domain = tuple[Interval, ...]

FULL_LINE: Domain = ((-math.inf, math.inf),)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def as_domain(domain: Iterable[Sequence[float]] | None) -> Domain:
    """Validate and sort a finite union of disjoint intervals."""
    if domain is None:
        return FULL_LINE
    out = []
    for piece in domain:
        a, b = float(piece[0]), float(piece[1])
        if math.isnan(a) or math.isnan(b) or not a < b:
            raise DomainError(f"invalid interval ({a}, {b})")
        out.append((a, b))
    if not out:
        raise DomainError("empty domain")
    out.sort()
    for (_, b0), (a1, _) in zip(out, out[1:]):
        if a1 < b0:
            raise DomainError("domain intervals overlap")
    return tuple(out)


def outside_window(half_width: float) -> Domain:
    """The region ``|x| >= half_width`` as a two-piece domain."""
    return ((-math.inf, -half_width), (half_width, math.inf))


def adaptive(func: Callable[[float], float], a: float, b: float,
             breakpoints: Iterable[float] = ()) -> float:
    """Integrate ``func`` over the finite interval [a, b].

    The interval is split at the breakpoints that fall inside it and each
    piece goes to QUADPACK with the package tolerances.
    """
    if not a < b:
        return 0.0
    inner = sorted({p for p in breakpoints if a < p < b})
    edges = [a, *inner, b]
    total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        res = quad(func, lo, hi, epsabs=EPSABS, epsrel=EPSREL,
                   limit=QUAD_LIMIT, full_output=1)
        val, err = res[0], res[1]
        # QUADPACK flags roundoff on integrals that are already at machine
        # precision; only a large error estimate is a real failure.
        if len(res) > 3 and err > max(1e-12, 1e-8 * abs(val)):
            raise NumericError(f"quadrature failed on [{lo}, {hi}]: {res[3]}", err)
        total += val
    return total


def gauss_legendre(func: Callable[[np.ndarray], np.ndarray],
                   lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Eight-point Gauss-Legendre integral of ``func`` on each [lo_i, hi_i].

    ``func`` must be vectorised. Exact for polynomials of degree 15.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    mid = 0.5 * (hi + lo)
    half = 0.5 * (hi - lo)
    x = mid[..., None] + half[..., None] * _GL_NODES
    vals = np.asarray(func(x), dtype=float)
    return half * (vals @ _GL_WEIGHTS)

"""Prolate spheroidal functions of order m = n = 0.

The angular function is expanded in Legendre polynomials,
``S00(c, eta) = sum_r d_r P_r(eta)`` over even ``r``, with the three-term
recurrence

    a_r d_{r+2} + (b_r - lam) d_r + g_r d_{r-2} = 0,

    a_r = (r+1)(r+2) c^2 / ((2r+3)(2r+5))
    b_r = r(r+1) + (2r(r+1) - 1) c^2 / ((2r-1)(2r+3))
    g_r = r(r-1) c^2 / ((2r-3)(2r-1))

Rescaling ``d_r = sqrt(2r+1) e_r`` turns it into a symmetric tridiagonal
eigenproblem whose smallest eigenvalue is ``lam00(c)``. Coefficients are
normalised so that ``sum_r d_r = S00(c, 1) = 1``.

The radial function of the first kind is

    R00(c, xi) = sum_r (-1)^(r/2) d_r j_r(c xi) / sum_r d_r,

which tends to ``sin(c)/c`` at ``xi = 1`` for small ``c`` and to 1 at
``c = 0``. At ``xi = 1`` a cancellation-free equivalent is used (see
:func:`radial_s1_at_one`).
"""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, NumericError

C_MAX = 50.0
RESIDUAL_TOL = 1e-12
_MAX_TERMS = 4096


def spherical_bessel_j(nmax: int, x: float) -> np.ndarray:
    """``j_0(x) .. j_nmax(x)`` for ``x >= 0``.

    Orders up to ``x`` come from the upward recurrence, which is stable
    there. Higher orders come from Miller's downward recurrence, scaled with
    the identity ``sum_n (2n+1) j_n(x)^2 = 1``.
    """
    if nmax < 0:
        raise DomainError("nmax must be nonnegative")
    if x < 0:
        raise DomainError("x must be nonnegative")
    out = np.zeros(nmax + 1)
    if x == 0.0:
        out[0] = 1.0
        return out

    s, c = math.sin(x), math.cos(x)
    j0 = s / x
    j1 = s / x**2 - c / x
    n_up = min(nmax, int(x))

    # downward recurrence from well above both nmax and x
    top = max(nmax, int(x)) + 20 + int(math.sqrt(40 * (max(nmax, x) + 1)))
    seq = np.zeros(top + 2)
    seq[top] = 1e-300
    for n in range(top, 0, -1):
        seq[n - 1] = (2 * n + 1) / x * seq[n] - seq[n + 1]
        if abs(seq[n - 1]) > 1e250:
            seq[n - 1:] *= 1e-250
    seq /= np.max(np.abs(seq))
    seq /= math.sqrt(math.fsum((2 * np.arange(top + 2) + 1) * seq**2))
    ref, est = (j0, seq[0]) if abs(j0) >= abs(j1) else (j1, seq[1])
    if (ref < 0) != (est < 0):
        seq = -seq
    out[:] = seq[:nmax + 1]

    up = np.empty(n_up + 1)
    up[0] = j0
    if n_up >= 1:
        up[1] = j1
    for n in range(1, n_up):
        up[n + 1] = (2 * n + 1) / x * up[n] - up[n - 1]
    out[:n_up + 1] = up
    return out


@dataclass(frozen=True, eq=False)
class SpheroidalSolution:
    """Eigenpair of the m = n = 0 prolate problem.

    ``coeffs[i]`` is ``d_{2i}``, normalised to ``sum d_r = 1``. The terms
    alternate in sign and grow with ``c``, so that sum is exact only to
    rounding on the scale of ``sum |d_r|``.
    ``residual`` is the size of the neglected coupling ``a_r d_r`` at the
    truncation edge relative to ``max |d_r|``.
    """

    c: float
    eigenvalue: float
    coeffs: np.ndarray
    truncation: int
    residual: float


def _recurrence(c: float, terms: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    r = 2.0 * np.arange(terms)
    c2 = c * c
    diag = r * (r + 1) + (2 * r * (r + 1) - 1) * c2 / ((2 * r - 1) * (2 * r + 3))
    rr = r[:-1]
    off = (rr + 1) * (rr + 2) * c2 / ((2 * rr + 3) * np.sqrt((2 * rr + 1) * (2 * rr + 5)))
    return r, diag, off


def _solve(c: float, terms: int) -> SpheroidalSolution:
    r, diag, off = _recurrence(c, terms)
    w, v = eigh_tridiagonal(diag, off, lapack_driver="stev")
    d = v[:, 0] * np.sqrt(2 * r + 1)
    d = d / math.fsum(d)
    last = r[-1]
    coupling = (last + 1) * (last + 2) * c * c / ((2 * last + 3) * (2 * last + 5))
    residual = abs(coupling * d[-1]) / np.max(np.abs(d))
    d.setflags(write=False)
    return SpheroidalSolution(c, float(w[0]), d, terms, float(residual))


def default_truncation(c: float) -> int:
    """Starting number of even Legendre terms, ``2c + 30``."""
    return int(2 * c + 30)


def _check_c(c: float) -> float:
    c = float(c)
    if not 0.0 <= c <= C_MAX:
        raise DomainError(f"spheroidicity c={c} outside the supported range [0, {C_MAX}]")
    return c


@functools.lru_cache(maxsize=4096)
def spheroidal_eigensystem(c: float, truncation: int | None = None) -> SpheroidalSolution:
    """Solve for ``lam00(c)`` and the Legendre coefficients ``d_r``.

    Without an explicit ``truncation`` the number of even terms starts at
    ``2c + 30`` and doubles until the residual is below ``RESIDUAL_TOL``.
    """
    c = _check_c(c)
    if c == 0.0:
        return SpheroidalSolution(0.0, 0.0, np.ones(1), 1, 0.0)
    if truncation is not None:
        return _solve(c, int(truncation))
    terms = default_truncation(c)
    while True:
        sol = _solve(c, terms)
        if sol.residual < RESIDUAL_TOL:
            return sol
        if terms >= _MAX_TERMS:
            raise NumericError(f"spheroidal expansion did not converge for c={c}", sol.residual)
        terms *= 2


def _legendre_at_zero(count: int) -> np.ndarray:
    """``P_0(0), P_2(0), ..., P_{2(count-1)}(0)``."""
    out = np.empty(count)
    out[0] = 1.0
    for i in range(1, count):
        r = 2 * i
        out[i] = -(r - 1) / r * out[i - 1]
    return out


def radial_s1_at_one(c: float, truncation: int | None = None) -> float:
    """``R00(c, 1)``, the m = n = 0 radial prolate function of the first kind at 1.

    Evaluated as ``d_0 / S00(c, 0)``, which follows from
    ``int_{-1}^{1} exp(i c x t) S00(c, t) dt = 2 R00(c, 1) S00(c, x)`` at
    ``x = 0``. Every term of ``S00(c, 0) = sum d_r P_r(0)`` has the same
    sign, so unlike the Bessel series (whose normaliser ``sum d_r`` is
    exponentially small in ``c``) nothing cancels.
    """
    sol = spheroidal_eigensystem(_check_c(c), truncation)
    if sol.c == 0.0:
        return 1.0
    at_zero = math.fsum(sol.coeffs * _legendre_at_zero(sol.coeffs.size))
    return float(sol.coeffs[0] / at_zero)


def radial_s1_bessel_series(c: float, xi: float = 1.0, truncation: int | None = None) -> float:
    """``R00(c, xi) = sum_r (-1)^(r/2) d_r j_r(c xi) / sum_r d_r``.

    The textbook expansion. It loses roughly ``c / ln 10`` digits to
    cancellation, so it serves as a cross-check at moderate ``c`` only.
    """
    sol = spheroidal_eigensystem(_check_c(c), truncation)
    if sol.c == 0.0:
        return 1.0
    orders = 2 * np.arange(sol.coeffs.size)
    jr = spherical_bessel_j(int(orders[-1]), sol.c * xi)[orders]
    signs = np.where(np.arange(sol.coeffs.size) % 2 == 0, 1.0, -1.0)
    return math.fsum(signs * sol.coeffs * jr) / math.fsum(sol.coeffs)


def write_table(path: str | Path, cs) -> None:
    """CSV with columns ``c, eigenvalue, R00_at_1``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["c", "eigenvalue", "R00_at_1"])
        for c in cs:
            sol = spheroidal_eigensystem(float(c))
            writer.writerow([f"{float(c):.17g}", f"{sol.eigenvalue:.17g}",
                             f"{radial_s1_at_one(float(c)):.17g}"])

"""One-dimensional pure states and the densities derived from them.

Every object here is a :class:`Density`: something that can be evaluated
pointwise and integrated against a weight. Quantum states additionally carry
a complex amplitude and an ``hbar`` convention. Instances are immutable once
built, so they can be shared between worker processes.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import make_interp_spline
from scipy.special import ndtr

from ._numerics import FULL_LINE, Domain, adaptive, as_domain, gauss_legendre
from .errors import DomainError, RangeError

# Half-width of the numerical support of a Gaussian density in units of its
# width parameter: exp(-28**2) underflows to zero in double precision.
_GAUSS_REACH = 28.0

# A cubic amplitude spline drifts ~1e-9 from the Riemann norm on typical
# grids; quintic stays at roundoff.
_SPLINE_DEGREE = 5


class Density:
    """An integrable density on the real line.

    Subclasses provide :meth:`pdf` (vectorised), a finite numerical
    :meth:`support` outside of which the density is zero to double
    precision, and optional :meth:`breakpoints` that help the quadrature.
    """

    def pdf(self, x):
        raise NotImplementedError

    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def integrate(self, func: Callable, a: float = -math.inf, b: float = math.inf) -> float:
        """Integrate ``func(x)`` over [a, b] intersected with the support."""
        lo, hi = self.support()
        a, b = max(a, lo), min(b, hi)
        if not a < b:
            return 0.0
        return adaptive(func, a, b, self.breakpoints())

    def mass(self, a: float = -math.inf, b: float = math.inf) -> float:
        return self.integrate(self.pdf, a, b)

    def bin_masses(self, edges: Sequence[float]) -> np.ndarray:
        """Probability of each cell between consecutive ``edges``."""
        edges = np.asarray(edges, dtype=float)
        return np.array([self.mass(a, b) for a, b in zip(edges[:-1], edges[1:])])

    def expect(self, weight: Callable, domain: Iterable | None = None) -> float:
        """Integral of ``weight(x) * pdf(x)`` over a union of intervals."""
        return sum(self.integrate(lambda x: weight(x) * self.pdf(x), a, b)
                   for a, b in as_domain(domain))


class QuantumState(Density):
    """A normalised pure state ``psi`` with density ``|psi|**2``."""

    hbar: float

    def amplitude(self, x):
        raise NotImplementedError

    def pdf(self, x):
        return np.abs(self.amplitude(x)) ** 2


def _check_hbar(hbar: float) -> None:
    if not hbar > 0 or not math.isfinite(hbar):
        raise DomainError(f"hbar must be positive, got {hbar}")


@dataclass(frozen=True)
class GaussianState(QuantumState):
    """Displaced minimum-uncertainty Gaussian.

    ``psi(x) = (pi sigma^2)^(-1/4) exp(i p0 (x - x0/2)/hbar) exp(-(x-x0)^2 / 2 sigma^2)``

    so the position density has mean ``x0`` and variance ``sigma**2 / 2``.
    The momentum-space wavefunction is a member of the same family (see
    :func:`entropic_uncertainty.fourier.to_momentum`).
    """

    sigma: float
    x0: float = 0.0
    p0: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0 or not math.isfinite(self.sigma):
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        _check_hbar(self.hbar)

    def amplitude(self, x):
        x = np.asarray(x, dtype=float)
        norm = (math.pi * self.sigma**2) ** -0.25
        phase = np.exp(1j * self.p0 * (x - self.x0 / 2) / self.hbar)
        return norm * phase * np.exp(-((x - self.x0) ** 2) / (2 * self.sigma**2))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-((x - self.x0) ** 2) / self.sigma**2) / (math.sqrt(math.pi) * self.sigma)

    def support(self):
        r = _GAUSS_REACH * self.sigma
        return (self.x0 - r, self.x0 + r)

    def breakpoints(self):
        return tuple(self.x0 + k * self.sigma for k in (-8, -4, -2, -1, 0, 1, 2, 4, 8))

    def _tail_above(self, x):
        # P(X > x) for the density N(x0, sigma^2/2)
        return ndtr(-(np.asarray(x, dtype=float) - self.x0) * math.sqrt(2) / self.sigma)

    def bin_masses(self, edges):
        edges = np.asarray(edges, dtype=float)
        a, b = edges[:-1], edges[1:]
        upper = self._tail_above(a) - self._tail_above(b)
        lower = self._tail_above(2 * self.x0 - b) - self._tail_above(2 * self.x0 - a)
        # Difference the tail on the side away from the centre to keep
        # relative accuracy in far bins.
        return np.where(a >= self.x0, upper, lower)

    def mass(self, a=-math.inf, b=math.inf):
        if not a < b:
            return 0.0
        return float(self.bin_masses([a, b])[0])


@dataclass(frozen=True)
class GaussianSuperposition(QuantumState):
    """Normalised coherent sum ``sum_i w_i psi_i`` of :class:`GaussianState` s."""

    components: tuple[GaussianState, ...]
    weights: tuple[complex, ...]
    _scale: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.components or len(self.components) != len(self.weights):
            raise DomainError("components and weights must be non-empty and of equal length")
        hbars = {c.hbar for c in self.components}
        if len(hbars) != 1:
            raise DomainError("all components must share one hbar")
        object.__setattr__(self, "_scale", 1.0)
        norm = Density.integrate(self, self.pdf)
        if not norm > 0:
            raise DomainError("superposition has zero norm")
        object.__setattr__(self, "_scale", 1.0 / math.sqrt(norm))

    @property
    def hbar(self) -> float:
        return self.components[0].hbar

    def amplitude(self, x):
        total = sum(complex(w) * c.amplitude(x) for w, c in zip(self.weights, self.components))
        return self._scale * total

    def support(self):
        lows, highs = zip(*(c.support() for c in self.components))
        return (min(lows), max(highs))

    def breakpoints(self):
        return tuple(sorted({p for c in self.components for p in c.breakpoints()}))

    def bin_masses(self, edges):
        # Composite Gauss-Legendre on sub-cells no wider than a quarter of the
        # narrowest lobe; the density is entire, so this is at roundoff.
        edges = np.asarray(edges, dtype=float)
        lo, hi = self.support()
        a = np.clip(edges[:-1], lo, hi)
        b = np.clip(edges[1:], lo, hi)
        width = np.maximum(b - a, 0.0)
        h = min(c.sigma for c in self.components) / 4
        counts = np.maximum(np.ceil(width / h).astype(int), 1)
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
        sub = np.arange(counts.sum()) - np.repeat(starts, counts)
        step = np.repeat(width / counts, counts)
        left = np.repeat(a, counts) + sub * step
        cells = gauss_legendre(self.pdf, left, left + step)
        return np.add.reduceat(cells, starts)

    def mass(self, a=-math.inf, b=math.inf):
        if not a < b:
            return 0.0
        return float(self.bin_masses([a, b])[0])


def even_superposition(sigma: float, separation: float, hbar: float = 1.0) -> GaussianSuperposition:
    """Even two-lobe state with lobes centred at ``+-separation/2``."""
    half = separation / 2
    return GaussianSuperposition(
        (GaussianState(sigma, -half, 0.0, hbar), GaussianState(sigma, half, 0.0, hbar)),
        (1.0, 1.0),
    )


class GridState(QuantumState):
    """State given by complex samples on a uniform grid.

    Samples are normalised at construction so that the Riemann sum
    ``sum |psi_j|^2 dx`` equals one; the sum before normalisation is kept as
    :attr:`input_norm`. Samples are taken to be amplitudes of a normalised
    wavefunction, so a deficit in ``input_norm`` measures mass that lies
    outside the grid.

    Between samples the amplitude (not the density) is interpolated with a
    quintic spline; outside ``[x_min, x_max]`` it is zero. The density is then
    a piecewise polynomial of degree 10, which the eight-point Gauss-Legendre
    cell rule integrates exactly (also after multiplying by ``x**2``).
    """

    def __init__(self, samples, x_min: float, dx: float, hbar: float = 1.0,
                 normalize: bool = True):
        samples = np.array(samples, dtype=complex)
        if samples.ndim != 1 or samples.size < 2:
            raise DomainError("a grid state needs at least two samples")
        if not dx > 0:
            raise DomainError(f"grid spacing must be positive, got {dx}")
        _check_hbar(hbar)
        self.x_min = float(x_min)
        self.dx = float(dx)
        self.hbar = float(hbar)
        self.input_norm = float(np.sum(np.abs(samples) ** 2) * dx)
        if normalize:
            if not self.input_norm > 0:
                raise DomainError("grid samples are identically zero")
            samples = samples / math.sqrt(self.input_norm)
        samples.setflags(write=False)
        self.samples = samples
        self._spline = make_interp_spline(self.x, samples, k=min(_SPLINE_DEGREE, self.n - 1))
        cells = gauss_legendre(self.pdf, self.x[:-1], self.x[1:])
        self._cumulative = np.concatenate(([0.0], np.cumsum(cells)))

    def __repr__(self):
        return (f"GridState(n={self.n}, x_min={self.x_min!r}, dx={self.dx!r}, "
                f"hbar={self.hbar!r})")

    def __getstate__(self):
        return {"samples": self.samples, "x_min": self.x_min, "dx": self.dx,
                "hbar": self.hbar, "input_norm": self.input_norm}

    def __setstate__(self, state):
        self.__init__(state["samples"], state["x_min"], state["dx"], state["hbar"],
                      normalize=False)
        self.input_norm = state["input_norm"]

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def x_max(self) -> float:
        return self.x_min + self.dx * (self.n - 1)

    def amplitude(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.x_min) & (x <= self.x_max)
        return np.where(inside, self._spline(np.clip(x, self.x_min, self.x_max)), 0.0)

    def support(self):
        return (self.x_min, self.x_max)

    def integrate(self, func, a=-math.inf, b=math.inf):
        a, b = max(a, self.x_min), min(b, self.x_max)
        if not a < b:
            return 0.0
        knots = self.x
        inner = knots[(knots > a) & (knots < b)]
        edges = np.concatenate(([a], inner, [b]))
        return float(np.sum(gauss_legendre(func, edges[:-1], edges[1:])))

    def _cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), self.x_min, self.x_max)
        j = np.clip(np.floor((x - self.x_min) / self.dx).astype(int), 0, self.n - 2)
        left = self.x_min + j * self.dx
        return self._cumulative[j] + gauss_legendre(self.pdf, left, x)

    def bin_masses(self, edges):
        cdf = self._cdf(edges)
        return np.maximum(np.diff(cdf), 0.0)

    def mass(self, a=-math.inf, b=math.inf):
        if not a < b:
            return 0.0
        return float(self.bin_masses([a, b])[0])


@dataclass(frozen=True)
class UniformDensity(Density):
    """Flat density on [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError("uniform density needs lo < hi")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.lo) & (x <= self.hi), 1.0 / (self.hi - self.lo), 0.0)

    def support(self):
        return (self.lo, self.hi)

    def breakpoints(self):
        return (self.lo, self.hi)


class RestrictedDensity(Density):
    """``base`` restricted to ``domain`` and renormalised there."""

    def __init__(self, base: Density, domain):
        self.base = base
        self.domain: Domain = as_domain(domain)
        self.base_mass = sum(base.mass(a, b) for a, b in self.domain)
        if not self.base_mass > 0:
            raise DomainError("restriction carries no probability mass")

    def _inside(self, x):
        x = np.asarray(x, dtype=float)
        hit = np.zeros(x.shape, dtype=bool)
        for a, b in self.domain:
            hit |= (x >= a) & (x <= b)
        return hit

    def pdf(self, x):
        return np.where(self._inside(x), self.base.pdf(x), 0.0) / self.base_mass

    def support(self):
        return self.base.support()

    def breakpoints(self):
        ends = [e for piece in self.domain for e in piece if math.isfinite(e)]
        return tuple(sorted({*self.base.breakpoints(), *ends}))

    def integrate(self, func, a=-math.inf, b=math.inf):
        # The base integrator sees each domain piece separately, so the
        # indicator in pdf never puts a kink inside a quadrature panel.
        total = 0.0
        for lo, hi in self.domain:
            lo, hi = max(lo, a), min(hi, b)
            if lo < hi:
                total += self.base.integrate(func, lo, hi)
        return total


def make_gaussian(sigma: float, x0: float = 0.0, p0: float = 0.0, hbar: float = 1.0) -> GaussianState:
    return GaussianState(sigma, x0, p0, hbar)


def density_at(state: Density, x: float) -> float:
    """Position density at ``x``; grid states raise outside their grid."""
    if isinstance(state, GridState) and not state.x_min <= x <= state.x_max:
        raise RangeError(f"x={x} outside grid [{state.x_min}, {state.x_max}]")
    return float(state.pdf(x))


def moment(state: Density, order: int, domain=None) -> float:
    """``int_domain x**order rho(x) dx`` for order 0, 1 or 2."""
    if order not in (0, 1, 2):
        raise DomainError(f"moment order must be 0, 1 or 2, got {order}")
    return state.expect(lambda x: np.asarray(x, dtype=float) ** order, domain)


def variance(state: Density, domain=None) -> float:
    """Variance of the density restricted to ``domain`` and renormalised."""
    q = moment(state, 0, domain)
    mean = moment(state, 1, domain) / q
    return moment(state, 2, domain) / q - mean**2


def sample_function(func: Callable, x_min: float, x_max: float, n: int,
                    hbar: float = 1.0) -> GridState:
    """Grid state from samples of a wavefunction assumed normalised on the line."""
    x = np.linspace(x_min, x_max, n)
    return GridState(func(x), x_min, (x_max - x_min) / (n - 1), hbar)


def _normalised(func: Callable, lo: float, hi: float) -> Callable:
    norm = adaptive(lambda x: abs(func(x)) ** 2, lo, hi, (0.0,))
    return lambda x: func(x) / math.sqrt(norm)


def bump_state(width: float = 1.0, half_range: float = 2.0, n: int = 4096,
               hbar: float = 1.0) -> GridState:
    """Smooth compactly supported state ``exp(-1/(1-(x/width)^2))`` on ``|x| < width``."""

    def bump(x):
        x = np.asarray(x, dtype=float)
        u = np.clip((x / width) ** 2, 0.0, 1.0)
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(u < 1.0, np.exp(-1.0 / (1.0 - u)), 0.0)

    return sample_function(_normalised(bump, -width, width), -half_range, half_range, n, hbar)


def quartic_state(scale: float = 1.0, half_range: float = 8.0, n: int = 4096,
                  hbar: float = 1.0) -> GridState:
    """Even non-Gaussian state ``exp(-(x/scale)^4 / 4)``."""
    func = _normalised(lambda x: np.exp(-((np.asarray(x) / scale) ** 4) / 4), -8 * scale, 8 * scale)
    return sample_function(func, -half_range, half_range, n, hbar)


def load_grid_state(path: str | Path, hbar: float = 1.0, normalize: bool = True) -> GridState:
    """Read a grid state from whitespace-separated columns ``x Re[psi] [Im[psi]]``."""
    data = np.loadtxt(path, ndmin=2)
    if data.shape[1] not in (2, 3):
        raise DomainError(f"expected 2 or 3 columns, found {data.shape[1]}")
    x = data[:, 0]
    amp = data[:, 1] + (1j * data[:, 2] if data.shape[1] == 3 else 0.0)
    steps = np.diff(x)
    if x.size < 2 or np.any(steps <= 0):
        raise DomainError("x column must be strictly increasing")
    dx = (x[-1] - x[0]) / (x.size - 1)
    if not np.allclose(steps, dx, rtol=1e-9, atol=0.0):
        raise DomainError("x column must be uniformly spaced")
    return GridState(amp, x[0], dx, hbar, normalize=normalize)


def save_grid_state(state: GridState, path: str | Path) -> None:
    """Write ``x Re Im`` columns readable by :func:`load_grid_state`."""
    cols = np.column_stack([state.x, state.samples.real, state.samples.imag])
    np.savetxt(path, cols, fmt="%.17g")

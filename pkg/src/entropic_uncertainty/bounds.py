"""Entropic lower bounds for position and momentum, and their verification.

All bounds are in nats. ``gamma = dx * dp / hbar`` is the dimensionless
product of the two detector resolutions.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from ._numerics import outside_window
from .binning import EPS_TRUNC, BinGrid, tail_mass, tail_second_moment
from .entropy import EntropyValue, coarse_entropy, continuous_entropy
from .errors import DomainError, EntropicError
from .fourier import plancherel_check, to_momentum
from .specfun import radial_s1_at_one
from .states import Density, QuantumState, moment, variance

#: Absolute slack on every inequality margin.
TOL_REPORT = 1e-9
#: Largest gamma accepted by :func:`bound_r`.
GAMMA_MAX_R = 50.0
#: Plancherel defect above which a state's momentum side is not trusted.
PLANCHEREL_TOL = 1e-9

SATISFIED = "satisfied"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"

E = math.e


@dataclass(frozen=True)
class Accuracies:
    """Detector resolutions ``dx`` (position) and ``dp`` (momentum)."""

    dx: float
    dp: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("dx", "dp", "hbar"):
            v = getattr(self, name)
            if not v > 0 or not math.isfinite(v):
                raise DomainError(f"{name} must be positive, got {v}")

    @classmethod
    def from_gamma(cls, gamma: float, hbar: float = 1.0, ratio: float = 1.0) -> Accuracies:
        """Split ``gamma`` into ``dx = sqrt(gamma hbar ratio)``, ``dp = sqrt(gamma hbar / ratio)``."""
        return cls(math.sqrt(gamma * hbar * ratio), math.sqrt(gamma * hbar / ratio), hbar)

    @property
    def gamma(self) -> float:
        return self.dx * self.dp / self.hbar


@dataclass(frozen=True)
class TailData:
    """Tail masses and second moments outside the detector windows."""

    x2_tail: float = 0.0
    p2_tail: float = 0.0
    qx_tail: float = 0.0
    qp_tail: float = 0.0

    def __post_init__(self):
        if min(self.x2_tail, self.p2_tail) < 0:
            raise DomainError("tail second moments must be nonnegative")
        if not (0 <= self.qx_tail <= 1 and 0 <= self.qp_tail <= 1):
            raise DomainError("tail masses must lie in [0, 1]")

    @property
    def x2_effective(self) -> float:
        return 0.0 if self.qx_tail <= EPS_TRUNC else self.x2_tail

    @property
    def p2_effective(self) -> float:
        return 0.0 if self.qp_tail <= EPS_TRUNC else self.p2_tail

    @classmethod
    def from_densities(cls, position: Density, momentum: Density, acc: Accuracies,
                       m: int, n: int) -> TailData:
        gx = BinGrid.midpoint(acc.dx, m)
        gp = BinGrid.midpoint(acc.dp, n)
        return cls(tail_second_moment(position, gx), tail_second_moment(momentum, gp),
                   min(max(tail_mass(position, gx), 0.0), 1.0),
                   min(max(tail_mass(momentum, gp), 0.0), 1.0))


def _gamma(acc) -> float:
    return acc.gamma if isinstance(acc, Accuracies) else float(acc)


def bound_bbm(hbar: float = 1.0) -> float:
    """``1 + ln(pi hbar)``: lower bound on the sum of continuous entropies."""
    if not hbar > 0:
        raise DomainError("hbar must be positive")
    return 1.0 + math.log(math.pi * hbar)


def strengthened_heisenberg_rhs(sx_entropy: float, sp_entropy: float, hbar: float = 1.0) -> float:
    """``(hbar/2) exp(Sx + Sp - 1 - ln(pi hbar))``, a lower bound on ``sigma_x sigma_p``."""
    return hbar / 2 * math.exp(sx_entropy + sp_entropy - bound_bbm(hbar))


def bound_b(acc: Accuracies | float) -> float:
    """``-ln(gamma / (e pi))``. Accepts :class:`Accuracies` or ``gamma`` itself."""
    return -math.log(_gamma(acc) / (E * math.pi))


def bound_r(acc: Accuracies | float, truncation: int | None = None) -> float:
    """``-2 ln[sqrt(gamma / 2pi) R00(gamma/4, 1)]``, positive for every gamma.

    ``truncation`` pins the number of Legendre terms (for convergence studies).
    """
    gamma = _gamma(acc)
    if not 0 < gamma <= GAMMA_MAX_R:
        raise DomainError(f"bound R is supported for 0 < gamma <= {GAMMA_MAX_R}, got {gamma}")
    r00 = radial_s1_at_one(gamma / 4, truncation)
    return -math.log(gamma / (2 * math.pi)) - 2 * math.log(r00)


def bound_max_br(acc: Accuracies | float) -> float:
    return max(bound_b(acc), bound_r(acc))


def r_correction(eta: float, lam: float, delta: float) -> float:
    """``(eta/2) ln(delta^2 eta^3 / (2 pi e lam))``.

    ``eta = 0`` gives 0; ``lam = 0`` with ``eta > 0`` gives ``+inf``, the
    caller's cue to treat the tail as empty.
    """
    if not 0 <= eta <= 1:
        raise DomainError(f"eta must lie in [0, 1], got {eta}")
    if lam < 0 or not delta > 0:
        raise DomainError("need lam >= 0 and delta > 0")
    if eta == 0:
        return 0.0
    if lam == 0:
        return math.inf
    return eta / 2 * math.log(delta**2 * eta**3 / (2 * math.pi * E * lam))


def eta_min(lam: float, delta: float) -> float:
    """Minimiser of :func:`r_correction` over ``eta`` in [0, 1]."""
    if lam < 0 or not delta > 0:
        raise DomainError("need lam >= 0 and delta > 0")
    if 2 * math.pi * lam >= (E * delta) ** 2:
        return 1.0
    return (math.sqrt(2 * math.pi * lam) / (E * delta)) ** (2 / 3)


def tail_threshold(delta: float) -> float:
    """``(e delta)^2 / 2pi``: tail second moment at which ``eta_min`` reaches 1."""
    return (E * delta) ** 2 / (2 * math.pi)


def _interior_term(lam: float, delta: float) -> float:
    return -3 * (math.sqrt(math.pi * lam) / (2 * E * delta)) ** (2 / 3)


def bound_l_case(acc: Accuracies, tails: TailData) -> int:
    """Which of the four branches of L applies (1-4)."""
    x_small = tails.x2_effective < tail_threshold(acc.dx)
    p_small = tails.p2_effective < tail_threshold(acc.dp)
    return {(True, True): 1, (True, False): 2, (False, True): 3, (False, False): 4}[(x_small, p_small)]


def bound_l_formula(case: int, acc: Accuracies, x2: float, p2: float) -> float:
    """Branch ``case`` of L evaluated at tail moments ``x2``, ``p2``."""
    dx, dp, hbar = acc.dx, acc.dp, acc.hbar
    if case == 1:
        return bound_b(acc) + _interior_term(x2, dx) + _interior_term(p2, dp)
    if case == 2:
        return _interior_term(x2, dx) - math.log(dx * math.sqrt(2 * p2) / (math.sqrt(E * math.pi) * hbar))
    if case == 3:
        return _interior_term(p2, dp) - math.log(dp * math.sqrt(2 * x2) / (math.sqrt(E * math.pi) * hbar))
    if case == 4:
        return -math.log(2 * math.sqrt(x2 * p2) / hbar)
    raise DomainError(f"case must be 1-4, got {case}")


def bound_l(acc: Accuracies, tails: TailData) -> float:
    """State-dependent lower bound on ``H_M^(x) + H_N^(p)``.

    Tails whose mass is at most ``EPS_TRUNC`` count as empty.
    """
    return bound_l_formula(bound_l_case(acc, tails), acc, tails.x2_effective, tails.p2_effective)


def jensen_diagnostic(density: Density, acc: Accuracies, m: int) -> float:
    """``H_M^(x)`` minus its Jensen lower bound.

    The bound is ``B_x + q_inf ln dx + int_tails rho ln rho`` with
    ``B_x = S^(x) - ln dx``; the result should never be negative.
    """
    grid = BinGrid.midpoint(acc.dx, m)
    h_m = coarse_entropy(density, grid).value
    tails = outside_window(grid.half_width)
    q_inf = moment(density, 0, tails)
    b_x = continuous_entropy(density) - math.log(acc.dx)
    tail_rho_log_rho = -continuous_entropy(density, tails)
    return h_m - (b_x + q_inf * math.log(acc.dx) + tail_rho_log_rho)


def reversed_log_sobolev_check(density: Density, domain=None) -> float:
    """``int f ln f + (1/2) ln(2 pi e var)`` over ``domain``; nonnegative.

    ``density`` must already be normalised on ``domain`` (see
    :class:`~entropic_uncertainty.states.RestrictedDensity`).
    """
    var = variance(density, domain)
    if not var > 0:
        raise DomainError("density has zero variance on the domain")
    lhs = -continuous_entropy(density, domain)
    return lhs + 0.5 * math.log(2 * math.pi * E * var)


@dataclass
class BoundReport:
    """Everything computed for one (state, accuracies, window) point.

    ``margins[name]`` is lhs - rhs of inequality ``name``; its verdict is
    satisfied when the margin is at least ``-TOL_REPORT``.
    """

    state: dict
    accuracies: dict
    convention: str
    window: tuple[int, int] | None
    entropies: dict[str, EntropyValue] = field(default_factory=dict)
    bound_BBM: float | None = None
    bound_B: float | None = None
    bound_R: float | None = None
    bound_L: float | None = None
    bound_L_case: int | None = None
    heisenberg_rhs: float | None = None
    variances: dict[str, float] = field(default_factory=dict)
    tails: dict[str, float] | None = None
    plancherel: float | None = None
    margins: dict[str, float] = field(default_factory=dict)
    verdicts: dict[str, str] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    def check(self, name: str, lhs: float, rhs: float, applicable: bool = True) -> None:
        margin = lhs - rhs
        self.margins[name] = margin
        if not applicable:
            self.verdicts[name] = NOT_APPLICABLE
        else:
            self.verdicts[name] = SATISFIED if margin >= -TOL_REPORT else VIOLATED

    @property
    def ok(self) -> bool:
        return not self.errors and VIOLATED not in self.verdicts.values()

    def to_dict(self) -> dict:
        out = asdict(self)
        out["entropies"] = {k: v.as_dict() for k, v in self.entropies.items()}
        out["window"] = list(self.window) if self.window is not None else None
        return out


INEQUALITIES = ("bbm", "heisenberg", "heisenberg_floor", "B", "R", "max_BR", "L")


def evaluate_bounds(state: QuantumState, acc: Accuracies, window: tuple[int, int] | None = None,
                    convention: str = "midpoint", label: dict | None = None) -> BoundReport:
    """Compute entropies and check every inequality for one point.

    Module errors are recorded in ``report.errors`` instead of propagating.
    """
    report = BoundReport(label or {"repr": repr(state)}, asdict(acc), convention,
                         tuple(window) if window is not None else None)
    hbar = acc.hbar
    if not math.isclose(state.hbar, hbar):
        report.errors.append(f"state hbar {state.hbar} differs from accuracies hbar {hbar}")
        return report
    try:
        report.plancherel = plancherel_check(state)
        momentum = to_momentum(state)
    except EntropicError as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
        report.diagnostics.append("momentum representation unavailable; verdicts not applicable")
        for name in INEQUALITIES:
            report.verdicts[name] = NOT_APPLICABLE
        return report
    trusted = report.plancherel <= PLANCHEREL_TOL
    if not trusted:
        report.diagnostics.append(
            f"Plancherel defect {report.plancherel:.3e} exceeds {PLANCHEREL_TOL:.0e}; "
            "verdicts not applicable")

    try:
        _fill(report, state, momentum, acc, window, convention, trusted)
    except EntropicError as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
    return report


def _fill(report, state, momentum, acc, window, convention, trusted):
    hbar = acc.hbar
    s_x = continuous_entropy(state)
    s_p = continuous_entropy(momentum)
    report.entropies["S_x"] = EntropyValue(s_x, "continuous")
    report.entropies["S_p"] = EntropyValue(s_p, "continuous")
    var_x, var_p = variance(state), variance(momentum)
    report.variances = {"sigma_x2": var_x, "sigma_p2": var_p}

    report.bound_BBM = bound_bbm(hbar)
    report.check("bbm", s_x + s_p, report.bound_BBM, trusted)
    report.heisenberg_rhs = strengthened_heisenberg_rhs(s_x, s_p, hbar)
    report.check("heisenberg", math.sqrt(var_x * var_p), report.heisenberg_rhs, trusted)
    report.check("heisenberg_floor", report.heisenberg_rhs, hbar / 2, trusted)

    h_x = coarse_entropy(state, BinGrid.from_convention(convention, acc.dx))
    h_p = coarse_entropy(momentum, BinGrid.from_convention(convention, acc.dp))
    report.entropies["H_x"] = h_x
    report.entropies["H_p"] = h_p
    total = h_x.value + h_p.value

    report.bound_B = bound_b(acc)
    report.check("B", total, report.bound_B, trusted)
    if report.bound_B < 0:
        report.diagnostics.append(
            f"bound B = {report.bound_B:.6g} is negative (gamma >= e*pi); trivially satisfied")
    try:
        report.bound_R = bound_r(acc)
    except DomainError as exc:
        report.errors.append(f"DomainError: {exc}")
        report.verdicts["R"] = report.verdicts["max_BR"] = NOT_APPLICABLE
    else:
        report.check("R", total, report.bound_R, trusted)
        report.check("max_BR", total, max(report.bound_B, report.bound_R), trusted)

    if window is None:
        report.verdicts["L"] = NOT_APPLICABLE
        return
    m, n = window
    h_m = coarse_entropy(state, BinGrid.midpoint(acc.dx, m))
    h_n = coarse_entropy(momentum, BinGrid.midpoint(acc.dp, n))
    report.entropies["H_M_x"] = h_m
    report.entropies["H_N_p"] = h_n
    tails = TailData.from_densities(state, momentum, acc, m, n)
    report.tails = asdict(tails)
    report.bound_L_case = bound_l_case(acc, tails)
    report.bound_L = bound_l(acc, tails)

    centred = True
    mean_x, mean_p = moment(state, 1), moment(momentum, 1)
    if abs(mean_x) > (m + 0.5) * acc.dx / 10 or abs(mean_p) > (n + 0.5) * acc.dp / 10:
        centred = False
        report.diagnostics.append(
            f"centroid (<x>={mean_x:.3g}, <p>={mean_p:.3g}) is not small against the detector "
            "windows; re-centre the coordinates before relying on bound L")
    report.check("L", h_m.value + h_n.value, report.bound_L, trusted and centred)

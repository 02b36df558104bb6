"""Verification sweeps, the B/R crossover and the bound-comparison table."""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from .bounds import Accuracies, BoundReport, NOT_APPLICABLE, INEQUALITIES, bound_b, bound_r, evaluate_bounds
from .errors import DomainError, EntropicError, NumericError
from .specfun import default_truncation
from .states import (GaussianState, bump_state, even_superposition, load_grid_state,
                     quartic_state)

# Battery of test states and gammas used when no config is given.
BATTERY_GAMMAS = (0.1, 0.425, 1.0, 7.167, 8.54, 20.0)


def battery_specs() -> list[dict]:
    specs = [{"family": "gaussian", "sigma": s, "x0": x0, "p0": p0}
             for s, x0, p0 in product((0.25, 1.0, 4.0), (0.0, 0.3), (0.0, 0.5))]
    specs.append({"family": "even_superposition", "sigma": 1.0, "separation": 3.0})
    specs.append({"family": "bump", "width": 1.0})
    return specs


def build_state(spec: dict, hbar: float = 1.0):
    """Instantiate a state from a JSON-style description."""
    spec = dict(spec)
    family = spec.pop("family")
    if family == "gaussian":
        return GaussianState(float(spec.get("sigma", 1.0)), float(spec.get("x0", 0.0)),
                             float(spec.get("p0", 0.0)), hbar)
    if family == "even_superposition":
        return even_superposition(float(spec.get("sigma", 1.0)), float(spec.get("separation", 3.0)), hbar)
    if family == "bump":
        return bump_state(hbar=hbar, **spec)
    if family == "quartic":
        return quartic_state(hbar=hbar, **spec)
    if family == "grid":
        return load_grid_state(spec["path"], hbar, bool(spec.get("normalize", True)))
    raise DomainError(f"unknown state family {family!r}")


def parse_state_arg(text: str) -> dict:
    """``gaussian:sigma,x0,p0`` (trailing values optional) to a spec dict."""
    family, _, args = text.partition(":")
    values = [float(v) for v in args.split(",") if v.strip()]
    if family == "gaussian":
        return dict(zip(("sigma", "x0", "p0"), values), family="gaussian")
    if family == "even_superposition":
        return dict(zip(("sigma", "separation"), values), family=family)
    if family == "bump":
        return dict(zip(("width",), values), family=family)
    if family == "quartic":
        return dict(zip(("scale",), values), family=family)
    if family == "grid":
        return {"family": "grid", "path": args}
    raise DomainError(f"unknown state family {family!r}")


@dataclass
class SweepConfig:
    state_specs: list[dict] = field(default_factory=battery_specs)
    gamma_grid: list[float] | None = field(default_factory=lambda: list(BATTERY_GAMMAS))
    dx_grid: list[float] | None = None
    dp_grid: list[float] | None = None
    windows: list[tuple[int, int]] = field(default_factory=lambda: [(2, 2)])
    conventions: list[str] = field(default_factory=lambda: ["midpoint"])
    hbar: float = 1.0
    output_path: str | None = None
    workers: int = 1

    def __post_init__(self):
        if not self.state_specs:
            raise DomainError("no states in sweep")
        if self.gamma_grid is None and (not self.dx_grid or not self.dp_grid):
            raise DomainError("give gamma_grid or both dx_grid and dp_grid")
        grids = [g for g in (self.gamma_grid, self.dx_grid, self.dp_grid) if g is not None]
        if any(not g for g in grids) or any(not v > 0 for g in grids for v in g):
            raise DomainError("accuracy grids must be nonempty and positive")
        if not self.hbar > 0:
            raise DomainError("hbar must be positive")
        self.windows = [tuple(int(v) for v in w) for w in self.windows]

    @classmethod
    def from_dict(cls, data: dict) -> SweepConfig:
        data = dict(data)
        if "states" in data:
            data["state_specs"] = data.pop("states")
        if "dx_grid" in data and "gamma_grid" not in data:
            data["gamma_grid"] = None
        return cls(**data)

    @classmethod
    def from_json(cls, path: str | Path) -> SweepConfig:
        return cls.from_dict(json.loads(Path(path).read_text()))

    def accuracies(self) -> list[Accuracies]:
        if self.gamma_grid is not None:
            return [Accuracies.from_gamma(g, self.hbar) for g in self.gamma_grid]
        return [Accuracies(dx, dp, self.hbar) for dx, dp in product(self.dx_grid, self.dp_grid)]

    def points(self) -> list[tuple]:
        windows = self.windows or [None]
        return [(spec, acc, window, conv)
                for spec in self.state_specs
                for acc in self.accuracies()
                for window in windows
                for conv in self.conventions]

    def as_dict(self) -> dict:
        return {"states": self.state_specs, "gamma_grid": self.gamma_grid, "dx_grid": self.dx_grid,
                "dp_grid": self.dp_grid, "windows": [list(w) for w in self.windows],
                "conventions": self.conventions, "hbar": self.hbar}


def _evaluate_point(point: tuple, hbar: float) -> BoundReport:
    spec, acc, window, conv = point
    try:
        state = build_state(spec, hbar)
    except (EntropicError, OSError, TypeError, KeyError) as exc:
        report = BoundReport(spec, {"dx": acc.dx, "dp": acc.dp, "hbar": acc.hbar}, conv, window)
        report.errors.append(f"{type(exc).__name__}: {exc}")
        report.verdicts = {name: NOT_APPLICABLE for name in INEQUALITIES}
        return report
    return evaluate_bounds(state, acc, window, conv, label=spec)


def run_verify(config: SweepConfig) -> list[BoundReport]:
    """One report per (state, accuracies, window, convention), in config order."""
    points = config.points()
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(_evaluate_point, points, [config.hbar] * len(points)))
    return [_evaluate_point(p, config.hbar) for p in points]


def summarize(reports: list[BoundReport]) -> dict:
    violations = sum(1 for r in reports for v in r.verdicts.values() if v == "violated")
    errors = sum(len(r.errors) for r in reports)
    return {"reports": len(reports), "violations": violations, "errors": errors,
            "ok": violations == 0 and errors == 0}


def write_reports(reports: list[BoundReport], config: SweepConfig, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "reports.json"
    payload = {"config": config.as_dict(), "summary": summarize(reports),
               "reports": [r.to_dict() for r in reports]}
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path


@dataclass(frozen=True)
class CrossoverResult:
    gamma_star: float
    bracket: tuple[float, float]
    residual: float


def find_crossover(lo: float = 1.0, hi: float = 20.0, xtol: float = 1e-10,
                   truncation_scale: int = 1) -> CrossoverResult:
    """Bisect ``bound_b - bound_r`` on ``[lo, hi]``.

    ``truncation_scale`` multiplies the default Legendre truncation, for
    checking that the root does not move with the expansion length.
    """
    def gap(g):
        trunc = None if truncation_scale == 1 else truncation_scale * default_truncation(g / 4)
        return bound_b(g) - bound_r(g, trunc)

    f_lo, f_hi = gap(lo), gap(hi)
    if f_lo * f_hi > 0:
        raise NumericError(f"bound_b - bound_r keeps its sign on [{lo}, {hi}]",
                           min(abs(f_lo), abs(f_hi)))
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        f_mid = gap(mid)
        if f_mid == 0:
            lo = hi = mid
            break
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    star = 0.5 * (lo + hi)
    return CrossoverResult(star, (lo, hi), gap(star))


_PLOT_SCRIPT = '''"""Plot bounds B and R against gamma from {csv_name}."""
import csv

import matplotlib.pyplot as plt

with open("{csv_name}") as fh:
    rows = [r for r in csv.DictReader(fh) if not r["gamma"].startswith("#")]
gamma = [float(r["gamma"]) for r in rows]
plt.semilogx(gamma, [float(r["B"]) for r in rows], "r--", label="B")
plt.semilogx(gamma, [float(r["R"]) for r in rows], "g-", label="R")
plt.axhline(0.0, color="k", lw=0.5)
plt.xlabel("gamma = dx dp / hbar")
plt.ylabel("lower bound [nats]")
plt.legend()
plt.savefig("{png_name}", dpi=150)
'''


def emit_fig2_data(gamma_lo: float, gamma_hi: float, n: int, out: str | Path) -> list[tuple[float, float, float]]:
    """Write ``gamma, B, R`` rows on a log-spaced grid plus a plotting script.

    If R fails part-way the rows computed so far are kept, followed by a
    ``#PARTIAL`` marker line, and the error propagates.
    """
    if not 0 < gamma_lo < gamma_hi or n < 2:
        raise DomainError("need 0 < gamma_lo < gamma_hi and n >= 2")
    out = Path(out)
    rows = []
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["gamma", "B", "R"])
        for g in np.geomspace(gamma_lo, gamma_hi, n):
            g = float(g)
            try:
                r = bound_r(g)
            except EntropicError as exc:
                fh.write(f"#PARTIAL {type(exc).__name__}: {exc}\n")
                raise
            b = bound_b(g)
            rows.append((g, b, r))
            writer.writerow([f"{g:.17g}", f"{b:.17g}", f"{r:.17g}"])
    script = out.with_name(out.stem + "_plot.py")
    script.write_text(_PLOT_SCRIPT.format(csv_name=out.name, png_name=out.stem + ".png"))
    return rows


def gamma_log_grid(lo: float, hi: float, n: int) -> list[float]:
    return [float(g) for g in np.geomspace(lo, hi, n)]


__all__ = ["SweepConfig", "CrossoverResult", "run_verify", "find_crossover", "emit_fig2_data",
           "build_state", "parse_state_arg", "battery_specs", "summarize", "write_reports",
           "gamma_log_grid"]

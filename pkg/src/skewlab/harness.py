"""Experiment driver: runs named checks for a (command, gauge, dim, seed) and collects a report."""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from . import fixtures
from .errors import ConfigError
from .extraction import c2_dichotomy_report, extract_generator, make_commutator, verify_commutator
from .gauge import (ExpPowerOrlicz, LogPsi, Lorentz, Lp, Marcinkiewicz, Orlicz, SymmetricGauge,
                    dual_norm_grid, hlp_majorizes, kothe_dual_norm, parse_gauge)
from .spectral import matrix_to_json
from .support import SKEW_TOL, SuperOp, is_skew_hermitian, projection_pairing

__all__ = ["COMMANDS", "DEFAULT_GAUGES", "RunConfig", "CheckRecord", "Report", "run",
           "ones_norm_closed_form"]

COMMANDS = ("norms", "duals", "skewcheck", "extract", "dichotomy", "all")
DEFAULT_GAUGES = (
    "lp:1", "lp:1.5", "lp:2", "lp:4", "lp:inf",
    "orlicz:pow:3", "orlicz:exppow:2",
    "lorentz:pow:0.5", "lorentz:log",
    "marcinkiewicz:pow:0.5", "marcinkiewicz:log",
)
MAX_DIM = 32


@dataclass(frozen=True)
class RunConfig:
    command: str = "all"
    gauge: str = "lp:4"
    dim: int = 3
    trials: int = 20
    seed: int = 0
    tolerance: float | None = None
    vector: tuple[float, ...] | None = None

    def validate(self) -> SymmetricGauge:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        low = 1 if self.command in ("norms", "duals") else 2
        if not (low <= self.dim <= MAX_DIM):
            raise ConfigError(f"dim must lie in {low}..{MAX_DIM} for {self.command}, got {self.dim}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not (0 <= self.seed < 2**64):
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.tolerance is not None and not (self.tolerance > 0):
            raise ConfigError("tolerance override must be positive")
        if self.vector is not None and self.command == "norms" and len(self.vector) != self.dim:
            raise ConfigError("fixture vector length must equal dim")
        return parse_gauge(self.gauge)


@dataclass
class CheckRecord:
    command: str
    gauge: str
    index: int
    name: str
    verdict: bool
    value: float
    tolerance: float
    bound: str
    seconds: float = 0.0
    expected: float | None = None
    witness: Any = None

    def to_json(self, timing: bool = True) -> dict:
        out = {k: v for k, v in asdict(self).items() if v is not None}
        if not timing:
            out.pop("seconds")
        return out


@dataclass
class Report:
    config: RunConfig
    records: list[CheckRecord] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.verdict for r in self.records)

    def to_json(self, timing: bool = True) -> dict:
        return {
            "config": asdict(self.config),
            "passed": self.passed,
            "records": [r.to_json(timing) for r in self.records],
            **self.extras,
        }

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), indent=2, allow_nan=True)

    def write_csv(self, path) -> None:
        cols = ["command", "gauge", "index", "name", "verdict", "value", "tolerance", "bound",
                "expected", "seconds"]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            for r in self.records:
                w.writerow([getattr(r, c) if getattr(r, c) is not None else "" for c in cols])

    def table(self) -> str:
        lines = [f"{'command':<10} {'gauge':<22} {'check':<30} {'value':>12} {'tol':>9}  verdict"]
        for r in self.records:
            lines.append(f"{r.command:<10} {r.gauge:<22} {r.name:<30} {r.value:>12.4e} "
                         f"{r.tolerance:>9.1e}  {'PASS' if r.verdict else 'FAIL'}")
        lines.append(f"{sum(r.verdict for r in self.records)}/{len(self.records)} checks passed")
        return "\n".join(lines)


def ones_norm_closed_form(g: SymmetricGauge, n: int) -> float:
    """``||(1, ..., 1)||_E`` in dimension n from each family's defining formula."""
    if isinstance(g, Lp):
        return 1.0 if math.isinf(g.p) else n ** (1.0 / g.p)
    if isinstance(g, Lorentz):
        return float(g.psi(n))
    if isinstance(g, Marcinkiewicz):
        return n / float(g.psi(n))
    if isinstance(g, Orlicz):
        # Σ Φ(1/a) = 1  <=>  a = 1 / Φ⁻¹(1/n)
        if isinstance(g.phi, ExpPowerOrlicz):
            return 1.0 / math.log1p(1.0 / n) ** (1.0 / g.phi.p)
        return n ** (1.0 / g.phi.p)
    raise TypeError(type(g))


class _Recorder:
    def __init__(self, report: Report, command: str, gauge: str, override: float | None):
        self.report = report
        self.command = command
        self.gauge = gauge
        self.override = override
        self.index = 0

    def check(self, name, fn, tol, bound="upper", expected=None):
        if self.override is not None and bound == "upper":
            tol = self.override
        start = time.perf_counter()
        out = fn()
        seconds = time.perf_counter() - start
        value, witness = out if isinstance(out, tuple) else (out, None)
        value = float(value)
        if bound == "upper":
            verdict = value <= tol
        elif bound == "lower":
            verdict = value >= tol
        else:
            verdict = abs(value - expected) <= tol * max(1.0, abs(expected))
        if not math.isfinite(value):
            verdict = False
        self.report.records.append(CheckRecord(
            self.command, self.gauge, self.index, name, bool(verdict), value, float(tol), bound,
            seconds, expected, None if witness is None else matrix_to_json(witness)))
        self.index += 1


def _majorized_pair(n, seed, *keys):
    """Random ``(x, y)`` with ``x ≺≺ y``: a shrunken convex mix of permutations of ``y``."""
    rng = fixtures.stream(seed, *keys)
    y = rng.normal(size=n) * rng.exponential(2.0)
    weights = rng.dirichlet(np.ones(3))
    x = sum(w * rng.permutation(np.abs(y)) for w in weights)
    x = x * rng.uniform(0.5, 1.0) * rng.choice([-1.0, 1.0], size=n)
    return x, y


def _norm_checks(rec, g, cfg):
    n, T, seed = cfg.dim, cfg.trials, cfg.seed
    ones = np.ones(n)
    expected = ones_norm_closed_form(g, n)
    rec.check("ones-closed-form", lambda: g.norm(ones), 1e-12, "match", expected)
    if cfg.vector is not None:
        v = np.asarray(cfg.vector, dtype=float)
        rec.check("fixture", lambda: g.norm(v), 1e-12, "match", float(g.norm(np.sort(np.abs(v)))))

    def symmetry():
        worst = 0.0
        for t in range(T):
            rng = fixtures.stream(seed, "symmetry", t)
            x = rng.normal(size=n)
            y = rng.permutation(x) * rng.choice([-1.0, 1.0], size=n)
            worst = max(worst, abs(g.norm(x) - g.norm(y)) / max(1.0, g.norm(x)))
        return worst

    def majorization():
        bad = 0
        for t in range(T):
            x, y = _majorized_pair(n, seed, "majorization", t)
            if not hlp_majorizes(x, y, tol=1e-12) or g.norm(x) > g.norm(y) * (1 + 1e-12):
                bad += 1
        return bad

    def triangle():
        worst = -math.inf
        for t in range(T):
            rng = fixtures.stream(seed, "triangle", t)
            x, y = rng.normal(size=(2, n)) * rng.exponential(3.0, size=(2, 1))
            worst = max(worst, g.norm(x + y) - g.norm(x) - g.norm(y))
        return max(worst, 0.0)

    def homogeneity():
        worst = 0.0
        for t in range(T):
            rng = fixtures.stream(seed, "homogeneity", t)
            x = rng.normal(size=n)
            a = rng.normal() * 5
            worst = max(worst, abs(g.norm(a * x) - abs(a) * g.norm(x)) / max(1.0, g.norm(a * x)))
        return worst

    def sandwich():
        e1 = g.norm(np.eye(n)[0])
        bad = 0
        for t in range(T):
            x = fixtures.random_vector(n, seed, "sandwich", t)
            v = g.norm(x)
            if not (np.max(np.abs(x)) * e1 <= v * (1 + 1e-12) and v <= np.sum(np.abs(x)) * e1 * (1 + 1e-12)):
                bad += 1
        return bad

    rec.check("symmetry", symmetry, 1e-12)
    rec.check("majorization-violations", majorization, 0.0)
    rec.check("triangle-excess", triangle, 1e-10)
    rec.check("homogeneity", homogeneity, 1e-10)
    rec.check("sandwich-violations", sandwich, 0.0)


def _dual_checks(rec, g, cfg):
    n, T, seed = cfg.dim, cfg.trials, cfg.seed
    m = min(n, 3)

    def grid():
        worst = 0.0
        for t in range(min(T, 5)):
            x = fixtures.random_vector(m, seed, "dual-grid", t)
            worst = max(worst, abs(kothe_dual_norm(g, x, m) - dual_norm_grid(g, x)))
        return worst

    def holder():
        worst = -math.inf
        for t in range(T):
            rng = fixtures.stream(seed, "holder", t)
            x, y = rng.normal(size=(2, n))
            worst = max(worst, np.sum(np.abs(x * y)) - kothe_dual_norm(g, x) * g.norm(y))
        return max(worst, 0.0)

    def attainment():
        worst = 0.0
        for t in range(T):
            x = fixtures.random_vector(n, seed, "subgradient", t)
            w = g.subgradient(x)
            worst = max(worst, abs(kothe_dual_norm(g, w) - 1.0), abs(w @ x - g.norm(x)))
        return worst

    rec.check("dual-vs-grid", grid, 1e-3)
    rec.check("holder-excess", holder, 1e-9)
    rec.check("subgradient-attainment", attainment, 1e-9)


def _skew_checks(rec, g, cfg):
    n, T, seed = cfg.dim, cfg.trials, cfg.seed
    H = make_commutator(fixtures.random_traceless_hermitian(n, seed, "skewcheck"))

    def verdict_of(op):
        c = is_skew_hermitian(g, op, T, seed)
        return c.worst_value, c.worst_witness

    rec.check("commutator", lambda: verdict_of(H), SKEW_TOL)
    rec.check("identity-rejected", lambda: verdict_of(SuperOp.identity(n)), 0.5, "lower")
    u = fixtures.random_unitary(n, seed, "conjugation")
    rec.check("conjugated-commutator", lambda: verdict_of(H.conjugate(u)), SKEW_TOL)

    def orthogonality():
        worst = 0.0
        for t in range(T):
            q = fixtures.random_orthonormal(n, 2, seed, "orthogonality", t)
            worst = max(worst, abs(projection_pairing(H, q[:, 0], q[:, 1])))
        return worst

    rec.check("rank-one-orthogonality", orthogonality, 1e-9)


def _extract_checks(rec, g, cfg):
    n, T, seed = cfg.dim, cfg.trials, cfg.seed
    stats = {"err": 0.0, "res": 0.0, "herm": 0.0, "verify": 0.0}

    def roundtrip():
        for t in range(T):
            b = fixtures.random_traceless_hermitian(n, seed, "extract", t)
            H = make_commutator(b)
            gen = extract_generator(H)
            stats["err"] = max(stats["err"], float(np.max(np.abs(gen.b - b))))
            stats["res"] = max(stats["res"], gen.residual)
            stats["herm"] = max(stats["herm"], gen.hermitian_part_norm)
            stats["verify"] = max(stats["verify"], verify_commutator(H, gen.b, g))
        return stats["err"]

    rec.check("round-trip-entrywise", roundtrip, 1e-8)
    rec.check("round-trip-residual", lambda: stats["res"], 1e-8)
    rec.check("hermitian-part", lambda: stats["herm"], 1e-9)
    rec.check("verify-commutator", lambda: stats["verify"], 1e-8)


def _dichotomy_checks(report, cfg):
    rep = c2_dichotomy_report(cfg.dim, cfg.trials, cfg.seed)
    counters: dict[str, int] = {}
    for row in rep.rows:
        idx = counters.get(row["gauge"], 0)
        counters[row["gauge"]] = idx + 1
        bound = "lower" if row["name"] in ("rotation/non-commutator", "rotation/rejected") else "upper"
        tol = {"rotation/non-commutator": 0.4, "rotation/rejected": 1e-3,
               "commutator/round-trip": 1e-8}.get(row["name"], SKEW_TOL)
        report.records.append(CheckRecord(
            "dichotomy", row["gauge"], idx, row["name"], bool(row["verdict"]), float(row["value"]), tol, bound,
            0.0, None, None if row.get("witness") is None else matrix_to_json(row["witness"])))
    report.extras["dichotomy"] = rep.to_json()


_RUNNERS = {"norms": _norm_checks, "duals": _dual_checks, "skewcheck": _skew_checks,
            "extract": _extract_checks}


def run(config: RunConfig) -> Report:
    """Execute ``config.command`` deterministically and return the report."""
    gauge = config.validate()
    report = Report(config)
    if config.command == "all":
        names = [str(gauge)] + [s for s in DEFAULT_GAUGES if str(parse_gauge(s)) != str(gauge)]
        commands = ("norms", "duals", "skewcheck", "extract")
    else:
        names = [str(gauge)]
        commands = (config.command,) if config.command != "dichotomy" else ()
    for command in commands:
        for name in names:
            rec = _Recorder(report, command, name, config.tolerance)
            _RUNNERS[command](rec, parse_gauge(name), config)
    if config.command in ("dichotomy", "all"):
        start = time.perf_counter()
        _dichotomy_checks(report, config)
        elapsed = time.perf_counter() - start
        dich = [r for r in report.records if r.command == "dichotomy"]
        for r in dich:
            r.seconds = elapsed / len(dich)
    order = {c: i for i, c in enumerate(COMMANDS)}
    report.records.sort(key=lambda r: (order[r.command], r.gauge, r.index))
    return report

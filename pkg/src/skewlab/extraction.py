"""Recovering the commutator generator of a skew-Hermitian super-operator.

Canonical form: ``H(x) = i(xb - bx)`` with ``b`` Hermitian and trace zero.

Extraction probes ``H`` with rank-one projections ``η⊗η``.  For a
skew-Hermitian ``H`` each image has the form ``η⊗f + f⊗η`` with ``(η, f) = 0``,
and ``a(η) = f(η) + c(η) η`` for the operator ``a = -ib``.  Standard basis
probes give ``a`` up to its diagonal; the probes ``(e_1 + e_k)/√2`` fix the
diagonal up to a common constant, which the trace-zero normalization removes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import fixtures
from .gauge import Lp, SymmetricGauge, parse_gauge
from .spectral import check_hermitian, ideal_norm, matrix_to_json
from .support import SuperOp, hermitian_basis, is_skew_hermitian, support_representatives, trace_pair

__all__ = [
    "Generator", "RankOneStructure", "make_commutator", "rank_one_image_structure",
    "extract_generator", "verify_commutator", "rotation_witness", "diagonal_witness_search",
    "DichotomyReport", "c2_dichotomy_report", "DICHOTOMY_GAUGES",
]

DICHOTOMY_GAUGES = (
    "lp:1", "lp:1.5", "lp:4", "lp:inf",
    "lorentz:pow:0.5", "marcinkiewicz:pow:0.5", "orlicz:exppow:2",
)

_LINF = Lp(math.inf)


def make_commutator(b) -> SuperOp:
    """Super-operator ``x ↦ i(xb - bx)``."""
    b = check_hermitian(b)
    basis = hermitian_basis(b.shape[-1])
    return SuperOp(1j * (basis @ b - b @ basis))


@dataclass(frozen=True, eq=False)
class RankOneStructure:
    f: np.ndarray
    residual: float


def rank_one_image_structure(H: SuperOp, eta) -> RankOneStructure:
    """Fit ``H(η⊗η) ≈ η⊗f + f⊗η`` with ``(η, f) = 0``.

    ``f`` is the part of ``H(η⊗η) η`` orthogonal to ``η``; the Frobenius
    residual equals ``sqrt(α² + ||(1-p) H(p) (1-p)||²)`` with ``α = Tr(H(p) p)``,
    so it vanishes exactly when both defects do.
    """
    eta = np.asarray(eta, dtype=complex)
    if not math.isclose(np.linalg.norm(eta), 1.0, rel_tol=1e-12):
        raise ValueError("η must be a unit vector")
    image = H(np.outer(eta, eta.conj()))
    v = image @ eta
    f = v - np.vdot(eta, v) * eta
    fit = np.outer(eta, f.conj()) + np.outer(f, eta.conj())
    return RankOneStructure(f, float(np.linalg.norm(image - fit)))


@dataclass(frozen=True, eq=False)
class Generator:
    """Recovered ``b`` with ``H(x) ≈ i(xb - bx)``.

    ``residual`` is the worst ℓ∞ ideal-norm mismatch over the Hermitian basis,
    or the Frobenius norm of the Hermitian part of ``a`` if that is larger.
    """

    b: np.ndarray
    residual: float
    a: np.ndarray = field(repr=False)
    hermitian_part_norm: float
    probe_residual: float


def extract_generator(H: SuperOp) -> Generator:
    n = H.dim
    eye = np.eye(n, dtype=complex)
    probes = [rank_one_image_structure(H, eye[i]) for i in range(n)]
    f = np.array([p.f for p in probes]).T
    shift = np.zeros(n, dtype=complex)
    worst_probe = max(p.residual for p in probes)
    for k in range(1, n):
        eta = (eye[0] + eye[k]) / math.sqrt(2.0)
        pair = rank_one_image_structure(H, eta)
        worst_probe = max(worst_probe, pair.residual)
        shift[k] = (math.sqrt(2.0) * (pair.f[k] - pair.f[0]) + f[0, k] - f[k, 0])
    a = f + np.diag(shift)
    a1 = 0.5 * (a + a.conj().T)
    a2 = (a - a.conj().T) / 2j
    b = -a2
    b = b - np.trace(b).real / n * eye
    b = 0.5 * (b + b.conj().T)
    herm = float(np.linalg.norm(a1))
    mismatch = verify_commutator(H, b, _LINF)
    return Generator(b=b, residual=max(mismatch, herm), a=a, hermitian_part_norm=herm,
                     probe_residual=worst_probe)


def verify_commutator(H: SuperOp, b, g: SymmetricGauge) -> float:
    """``max_k ||H(B_k) - i(B_k b - b B_k)||_{C_E}`` over :func:`hermitian_basis`."""
    b = check_hermitian(b)
    if b.shape[-1] != H.dim:
        raise ValueError("generator and operator dimensions differ")
    basis = hermitian_basis(H.dim)
    diff = H.images - 1j * (basis @ b - b @ basis)
    return float(np.max(ideal_norm(g, diff)))


def rotation_witness(n: int = 2) -> SuperOp:
    """``E11 ↦ E22``, ``E22 ↦ -E11``, zero on the rest of the basis."""
    if n < 2:
        raise ValueError("rotation witness needs n >= 2")
    images = np.zeros((n * n, n, n), dtype=complex)
    images[0, 1, 1] = 1.0
    images[1, 0, 0] = -1.0
    return SuperOp(images)


def diagonal_witness_search(g: SymmetricGauge, H: SuperOp, points: int = 1000):
    """Scan ``x = E11 + δ E22`` over ``points`` values of δ in [-1, 1].

    Returns ``(witness, value)`` maximizing ``|[H(x), x]|``.
    """
    n = H.dim
    deltas = np.linspace(-1.0, 1.0, points)
    xs = np.zeros((points, n, n), dtype=complex)
    xs[:, 0, 0] = 1.0
    xs[:, 1, 1] = deltas
    reps, _ = support_representatives(g, xs)
    values = np.abs(np.real(trace_pair(H(xs), reps)))
    k = int(np.argmax(values))
    return xs[k], float(values[k])


@dataclass
class DichotomyReport:
    dim: int
    rows: list[dict]

    @property
    def passed(self) -> bool:
        return all(r["verdict"] for r in self.rows)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "gauge": [r["gauge"] for r in self.rows],
            "checks": [r["name"] for r in self.rows],
            "verdicts": [r["verdict"] for r in self.rows],
            "residuals": [r["value"] for r in self.rows],
            "witnesses": [None if r.get("witness") is None else matrix_to_json(r["witness"])
                          for r in self.rows],
        }

    def table(self) -> str:
        lines = [f"{'check':<34} {'gauge':<22} {'value':>12}  verdict"]
        for r in self.rows:
            lines.append(f"{r['name']:<34} {r['gauge']:<22} {r['value']:>12.4e}  "
                         f"{'PASS' if r['verdict'] else 'FAIL'}")
        return "\n".join(lines)


def c2_dichotomy_report(n: int = 2, trials: int = 20, seed=0,
                        gauges=DICHOTOMY_GAUGES) -> DichotomyReport:
    """The rotation witness is skew-Hermitian only under the Hilbert-Schmidt norm.

    (a) under ``lp:2`` it passes the skew test yet is far from every commutator;
    (b) under the other gauges it fails with an explicit witness;
    (c) random commutators pass under every gauge and round-trip through extraction.
    """
    if n < 2:
        raise ValueError("dichotomy needs n >= 2")
    H2 = rotation_witness(n)
    hs = Lp(2.0)
    rows = []
    check = is_skew_hermitian(hs, H2, trials, seed)
    rows.append(dict(name="rotation/skew-hermitian", gauge=str(hs), verdict=check.verdict,
                     value=check.worst_value, witness=check.worst_witness))
    gen = extract_generator(H2)
    rows.append(dict(name="rotation/non-commutator", gauge="none", verdict=gen.residual >= 0.4,
                     value=gen.residual, witness=None))
    for text in gauges:
        g = parse_gauge(text)
        check = is_skew_hermitian(g, H2, trials, seed)
        witness, value = diagonal_witness_search(g, H2)
        rows.append(dict(name="rotation/rejected", gauge=str(g), verdict=(not check.verdict) and value >= 1e-3,
                         value=value, witness=witness))
    b = fixtures.random_traceless_hermitian(n, seed, "dichotomy")
    H = make_commutator(b)
    gen = extract_generator(H)
    err = float(np.max(np.abs(gen.b - b)))
    rows.append(dict(name="commutator/round-trip", gauge="none", verdict=err < 1e-8 and gen.residual < 1e-8,
                     value=max(err, gen.residual), witness=None))
    for text in (str(hs),) + tuple(gauges):
        g = parse_gauge(text)
        check = is_skew_hermitian(g, H, trials, seed)
        rows.append(dict(name="commutator/skew-hermitian", gauge=str(g), verdict=check.verdict,
                         value=check.worst_value, witness=check.worst_witness))
    return DichotomyReport(n, rows)

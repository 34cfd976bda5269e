"""Support functionals, semi-inner products and the skew-Hermitian test on Hermitian matrices.

The real space of ``n x n`` Hermitian matrices is identified with R^(n²)
through :func:`hermitian_basis`, which is orthonormal for ``Re Tr(y* x)``.
A :class:`SuperOp` is a real-linear map on that space stored as its images
of the basis.

The semi-inner product is ``[x, y] = φ_y(x)`` where ``φ_y`` is the canonical
support functional at ``y``: diagonalize ``y = u diag(λ) u*``, take the gauge
subgradient ``w`` of ``λ``, average ``w`` over groups of equal ``|λ|`` and
represent ``φ_y`` by ``||y|| u diag(w) u*``.  The averaging makes ``φ_y`` a
function of ``y`` alone (not of the eigenvectors picked inside a degenerate
eigenspace), so it is unitarily covariant and odd in ``y``.  Eigenvalues
below ``TIE_RTOL`` times the largest are treated as exact zeros.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import fixtures
from .errors import ZeroElement
from .gauge import SymmetricGauge
from .spectral import check_hermitian, eigh, matrix_from_json, matrix_to_json, trace_pair

__all__ = [
    "SKEW_TOL", "hermitian_basis", "SuperOp", "SupportFunctional", "support_functional",
    "support_representatives", "semi_inner", "two_projection_coefficients",
    "SkewCheck", "is_skew_hermitian", "projection_pairing",
]

SKEW_TOL = 1e-7
TIE_RTOL = 1e-10


@functools.lru_cache(maxsize=None)
def _basis(n: int) -> np.ndarray:
    mats = []
    for j in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[j, j] = 1.0
        mats.append(e)
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    r = 1.0 / math.sqrt(2.0)
    for j, k in pairs:
        e = np.zeros((n, n), dtype=complex)
        e[j, k] = e[k, j] = r
        mats.append(e)
    for j, k in pairs:
        e = np.zeros((n, n), dtype=complex)
        e[j, k] = 1j * r
        e[k, j] = -1j * r
        mats.append(e)
    out = np.array(mats)
    out.flags.writeable = False
    return out


def hermitian_basis(n: int) -> np.ndarray:
    """Trace-orthonormal basis of the n x n Hermitian matrices, shape ``(n², n, n)``.

    Order: diagonal units ``E_jj``; symmetric pairs ``(E_jk + E_kj)/√2``;
    antisymmetric pairs ``i(E_jk - E_kj)/√2`` (pairs ``j < k`` in row order).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _basis(int(n))


def coordinates(x) -> np.ndarray:
    """Real coordinates of Hermitian ``x`` (or a stack) in :func:`hermitian_basis`."""
    x = np.asarray(x, dtype=complex)
    basis = hermitian_basis(x.shape[-1])
    return np.einsum("kij,...ij->...k", basis.conj(), x).real


@dataclass(frozen=True, eq=False)
class SuperOp:
    """Real-linear map on Hermitian matrices given by its images of :func:`hermitian_basis`."""

    images: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        images = check_hermitian(self.images)
        n = images.shape[-1]
        if images.shape != (n * n, n, n):
            raise ValueError(f"need {n * n} images of shape {(n, n)}, got {images.shape}")
        images.flags.writeable = False
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "dim", n)

    @classmethod
    def from_function(cls, n: int, fn: Callable[[np.ndarray], np.ndarray]) -> "SuperOp":
        return cls(np.array([fn(b) for b in hermitian_basis(n)]))

    @classmethod
    def identity(cls, n: int) -> "SuperOp":
        return cls(hermitian_basis(n).copy())

    @classmethod
    def zero(cls, n: int) -> "SuperOp":
        return cls(np.zeros((n * n, n, n), dtype=complex))

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if x.shape[-1] != self.dim:
            raise ValueError(f"operator acts on {self.dim}x{self.dim} matrices")
        return np.einsum("...k,kij->...ij", coordinates(x), self.images)

    def matrix(self) -> np.ndarray:
        """Real ``n² x n²`` matrix ``M[j, k] = <B_j, H(B_k)>``."""
        return coordinates(self.images).T

    def conjugate(self, u) -> "SuperOp":
        """``x ↦ u H(u* x u) u*`` for a unitary ``u``."""
        u = np.asarray(u, dtype=complex)
        uh = u.conj().T
        return SuperOp.from_function(self.dim, lambda b: u @ self(uh @ b @ u) @ uh)

    def operator_norm_estimate(self) -> float:
        """``max_k ||H(B_k)||_F`` over the unit-Frobenius basis."""
        return float(np.max(np.linalg.norm(self.images, axis=(1, 2))))

    def to_json(self) -> dict:
        return {"dim": self.dim, "images": [matrix_to_json(m) for m in self.images]}

    @classmethod
    def from_json(cls, data: dict) -> "SuperOp":
        op = cls(np.array([matrix_from_json(m) for m in data["images"]]))
        if op.dim != int(data["dim"]):
            raise ValueError("dim field does not match the images")
        return op


def _tie_average(values: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Average ``|w|`` over groups of equal ``|values|`` in each row, keeping ``sign(values)``."""
    absval = np.abs(values)
    out = np.abs(w).copy()
    flat_v = absval.reshape(-1, absval.shape[-1])
    flat_w = out.reshape(-1, out.shape[-1])
    for v, m in zip(flat_v, flat_w):
        order = np.argsort(-v, kind="stable")
        tol = TIE_RTOL * max(v[order[0]], np.finfo(float).tiny)
        start = 0
        for i in range(1, len(order) + 1):
            if i == len(order) or v[order[start]] - v[order[i]] > tol:
                if i - start > 1:
                    m[order[start:i]] = m[order[start:i]].mean()
                start = i
    return np.sign(values) * out


def support_representatives(g: SymmetricGauge, x):
    """Canonical support-functional representatives for Hermitian ``x`` (or a stack).

    Returns ``(reps, norms)`` with ``Tr(reps x) = norms²``; zero matrices get a
    zero representative.
    """
    values, vectors = eigh(x)
    norms = np.asarray(g.norm(values))
    # eigenvalues at rounding level are zero; their sign is noise
    top = np.max(np.abs(values), axis=-1, keepdims=True)
    clean = np.where(np.abs(values) <= TIE_RTOL * top, 0.0, values)
    w = _tie_average(clean, g.subgradient(clean))
    reps = (vectors * w[..., None, :]) @ np.swapaxes(vectors, -1, -2).conj()
    return reps * norms[..., None, None], norms


@dataclass(frozen=True, eq=False)
class SupportFunctional:
    """``φ(z) = Re Tr(rep z)`` with ``||φ|| = ||base||`` and ``φ(base) = ||base||²``."""

    base: np.ndarray
    rep: np.ndarray
    norm: float

    def __call__(self, z):
        return np.real(trace_pair(z, self.rep))


def support_functional(g: SymmetricGauge, x) -> SupportFunctional:
    x = check_hermitian(x)
    if x.ndim != 2:
        raise ValueError("support_functional takes a single matrix")
    rep, nrm = support_representatives(g, x)
    if float(nrm) == 0.0:
        raise ZeroElement("support functional is undefined at 0")
    return SupportFunctional(base=x, rep=rep, norm=float(nrm))


def semi_inner(g: SymmetricGauge, x, y) -> float:
    """``[x, y] = φ_y(x)``; zero when ``y = 0``."""
    y = check_hermitian(y)
    rep, _ = support_representatives(g, y)
    return float(np.real(trace_pair(x, rep)))


def two_projection_coefficients(g: SymmetricGauge) -> tuple[float, float]:
    """Positive ``(ξ1, ξ2)`` on the unit sphere of ``g`` in R² where the Euclidean
    functional is a (scaled) support functional.

    The diagonal point qualifies for every symmetric norm: the subdifferential
    there is swap-invariant and convex, so it contains a multiple of ``(1, 1)``.
    """
    s = 1.0 / g.norm(np.ones(2))
    return s, s


@dataclass(frozen=True, eq=False)
class SkewCheck:
    verdict: bool
    worst_value: float
    worst_witness: np.ndarray
    worst_family: str
    witnesses: int
    tolerance: float

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "worst_value": self.worst_value,
            "worst_family": self.worst_family,
            "witnesses": self.witnesses,
            "tolerance": self.tolerance,
            "worst_witness": matrix_to_json(self.worst_witness),
        }


def witness_set(g: SymmetricGauge, n: int, trials: int, seed) -> dict[str, np.ndarray]:
    """Rank-one projections, two-projection elements ``ξ1 p + ξ2 q`` and random Hermitian matrices."""
    eta = fixtures.random_unit_vector(n, seed, "skew", "rank-one", size=trials)
    fams = {"rank-one": np.einsum("ti,tj->tij", eta, eta.conj())}
    if n >= 2:
        c1, c2 = two_projection_coefficients(g)
        pairs = [fixtures.random_orthonormal(n, 2, seed, "skew", "two-projection", t) for t in range(trials)]
        fams["two-projection"] = np.array(
            [c1 * np.outer(q[:, 0], q[:, 0].conj()) + c2 * np.outer(q[:, 1], q[:, 1].conj()) for q in pairs]
        )
    fams["random"] = np.array([fixtures.random_hermitian(n, seed, "skew", t) for t in range(trials)])
    return fams


def is_skew_hermitian(g: SymmetricGauge, H: SuperOp, trials: int = 70, seed=0,
                      tol: float = SKEW_TOL) -> SkewCheck:
    """Sampled test of ``[H(x), x] = 0`` over the witness families of :func:`witness_set`."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    best = (-1.0, None, "")
    count = 0
    for family, xs in witness_set(g, H.dim, trials, seed).items():
        reps, _ = support_representatives(g, xs)
        values = np.abs(np.real(trace_pair(H(xs), reps)))
        k = int(np.argmax(values))
        count += len(xs)
        if values[k] > best[0]:
            best = (float(values[k]), xs[k], family)
    value, witness, family = best
    return SkewCheck(value < tol, value, witness, family, count, tol)


def projection_pairing(H: SuperOp, eta, xi) -> float:
    """``<H(η⊗η), ξ⊗ξ> = (H(η⊗η) ξ, ξ)``."""
    eta = np.asarray(eta, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    image = H(np.outer(eta, eta.conj()))
    return float(np.real(trace_pair(image, np.outer(xi, xi.conj()))))

"""Dense Hermitian linear algebra: Jacobi eigensolver, singular values, dyads, trace pairing.

Matrices are plain complex numpy arrays.  Functions that take matrices accept
stacks ``(..., n, n)`` and work matrix-by-matrix along the leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence
from .gauge import SymmetricGauge

__all__ = [
    "HERMITIAN_ATOL", "check_hermitian", "is_hermitian", "eigh", "singular_values",
    "ideal_norm", "trace_pair", "Dyad", "matrix_to_json", "matrix_from_json",
]

HERMITIAN_ATOL = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60


def _as_square(x) -> np.ndarray:
    a = np.asarray(x, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def _hermitian_gap(a: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    return float(np.max(np.abs(a - np.swapaxes(a, -1, -2).conj()), initial=0.0)) / scale


def is_hermitian(x, atol: float = HERMITIAN_ATOL) -> bool:
    return _hermitian_gap(_as_square(x)) <= atol


def check_hermitian(x, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Validate ``x = x*`` elementwise (relative to ``max(1, max|x|)``) and return it symmetrized."""
    a = _as_square(x)
    gap = _hermitian_gap(a)
    if gap > atol:
        raise ValueError(f"matrix is not Hermitian (max |x - x*| = {gap:.3g})")
    return 0.5 * (a + np.swapaxes(a, -1, -2).conj())


def eigh(x, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigendecomposition of Hermitian matrices by cyclic complex Jacobi sweeps.

    Returns ``(values, vectors)`` with ``x = vectors @ diag(values) @ vectors^H``.
    Values are sorted non-increasing; ties keep the order in which they appear
    on the converged diagonal.  Sweeps stop once the off-diagonal Frobenius
    mass is below ``tol`` times the Frobenius norm of ``x``.
    """
    a = check_hermitian(x)
    batch = a.shape[:-2]
    n = a.shape[-1]
    a = a.reshape((-1, n, n)).copy()
    m = a.shape[0]
    v = np.broadcast_to(np.eye(n, dtype=complex), (m, n, n)).copy()
    fro = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps + 1):
        off = np.sqrt(np.sum(np.abs(a[:, offdiag]) ** 2, axis=1))
        if np.all(off <= tol * fro):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(a, v, p, q)
    else:
        raise NonConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    values = np.real(np.diagonal(a, axis1=1, axis2=2))
    order = np.argsort(-values, axis=1, kind="stable")
    values = np.take_along_axis(values, order, 1)
    v = np.take_along_axis(v, order[:, None, :], 2)
    return values.reshape(batch + (n,)), v.reshape(batch + (n, n))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annihilate ``a[:, p, q]`` in place for every matrix of the stack."""
    apq = a[:, p, q]
    mag = np.abs(apq)
    if not np.any(mag > 0):
        return
    live = mag > 0
    safe = np.where(live, mag, 1.0)
    tau = (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe)
    sgn = np.where(tau >= 0, 1.0, -1.0)
    t = np.where(live, sgn / (np.abs(tau) + np.hypot(1.0, tau)), 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    phase = np.where(live, apq / safe, 1.0).conj()
    # R = diag(1, phase) @ [[c, s], [-s, c]]
    r00, r01 = c, s
    r10, r11 = -s * phase, c * phase
    col_p, col_q = a[:, :, p].copy(), a[:, :, q].copy()
    a[:, :, p] = col_p * r00[:, None] + col_q * r10[:, None]
    a[:, :, q] = col_p * r01[:, None] + col_q * r11[:, None]
    row_p, row_q = a[:, p, :].copy(), a[:, q, :].copy()
    a[:, p, :] = r00[:, None] * row_p + np.conj(r10)[:, None] * row_q
    a[:, q, :] = r01[:, None] * row_p + np.conj(r11)[:, None] * row_q
    a[:, p, q] = 0.0
    a[:, q, p] = 0.0
    a[:, p, p] = a[:, p, p].real
    a[:, q, q] = a[:, q, q].real
    vp, vq = v[:, :, p].copy(), v[:, :, q].copy()
    v[:, :, p] = vp * r00[:, None] + vq * r10[:, None]
    v[:, :, q] = vp * r01[:, None] + vq * r11[:, None]


def singular_values(x) -> np.ndarray:
    """Singular values ``μ(1,x) >= μ(2,x) >= ...`` of square matrices.

    Hermitian input uses ``|eigenvalues|`` directly; otherwise the Hermitian
    dilation ``[[0, x], [x*, 0]]`` is diagonalized, which keeps small singular
    values accurate to ``eps * ||x||`` instead of ``sqrt(eps) * ||x||``.
    """
    a = _as_square(x)
    n = a.shape[-1]
    if _hermitian_gap(a) <= HERMITIAN_ATOL:
        values, _ = eigh(a)
        return -np.sort(-np.abs(values), axis=-1)
    dil = np.zeros(a.shape[:-2] + (2 * n, 2 * n), dtype=complex)
    dil[..., :n, n:] = a
    dil[..., n:, :n] = np.swapaxes(a, -1, -2).conj()
    values, _ = eigh(dil)
    return np.clip(values[..., :n], 0.0, None)


def ideal_norm(g: SymmetricGauge, x):
    """``||x||_{C_E} = ||μ(x)||_E``."""
    return g.norm(singular_values(x))


def trace_pair(x, y):
    """``Tr(y* x)``, taken over the last two axes."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape[-2:] != y.shape[-2:]:
        raise ValueError(f"dimension mismatch {x.shape} vs {y.shape}")
    out = np.sum(np.conj(y) * x, axis=(-2, -1))
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class Dyad:
    """Rank-one operator ``ξ⊗η: h ↦ (h, η) ξ``."""

    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "left", np.asarray(self.left, dtype=complex))
        object.__setattr__(self, "right", np.asarray(self.right, dtype=complex))
        if self.left.shape != self.right.shape or self.left.ndim != 1:
            raise ValueError("dyad factors must be vectors of equal length")

    @classmethod
    def projection(cls, eta) -> "Dyad":
        return cls(eta, eta)

    @property
    def matrix(self) -> np.ndarray:
        return np.outer(self.left, self.right.conj())

    def __call__(self, h):
        return np.vdot(self.right, h) * self.left


def matrix_to_json(x) -> list:
    """Row-major nested list of ``[re, im]`` pairs."""
    a = np.asarray(x, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("expected an n x n array of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]

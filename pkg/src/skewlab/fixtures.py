"""Seeded random fixtures.

All randomness goes through :func:`stream`, a Philox (counter-based, 64-bit)
generator keyed by ``(seed, *keys)``.  Independent substreams come from
distinct keys, so a witness family or trial index always sees the same
numbers regardless of what else ran before it.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = [
    "stream", "random_vector", "random_unit_vector", "random_orthonormal",
    "random_hermitian", "random_traceless_hermitian", "random_unitary",
]


def _key(k) -> int:
    if isinstance(k, (int, np.integer)):
        return int(k) & 0xFFFFFFFF
    return zlib.crc32(str(k).encode())


def stream(seed, *keys) -> np.random.Generator:
    """Deterministic Philox generator for ``seed`` and a tuple of substream keys."""
    if isinstance(seed, np.random.Generator):
        return seed
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=tuple(_key(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


def random_vector(n: int, seed, *keys) -> np.ndarray:
    return stream(seed, *keys).normal(size=n)


def random_unit_vector(n: int, seed, *keys, size=None) -> np.ndarray:
    rng = stream(seed, *keys)
    shape = (n,) if size is None else (size, n)
    z = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def random_orthonormal(n: int, k: int, seed, *keys) -> np.ndarray:
    """``n x k`` matrix with orthonormal complex columns."""
    rng = stream(seed, *keys)
    z = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_unitary(n: int, seed, *keys) -> np.ndarray:
    """Haar-distributed unitary (QR of a complex Gaussian with phase correction)."""
    return random_orthonormal(n, n, seed, *keys)


def random_hermitian(n: int, seed, *keys) -> np.ndarray:
    """``(m + m*)/2`` for a complex Gaussian ``m``; bit-identical for equal ``(n, seed, keys)``."""
    rng = stream(seed, "hermitian", n, *keys)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (m + m.conj().T)


def random_traceless_hermitian(n: int, seed, *keys, bound: float = 10.0) -> np.ndarray:
    """Trace-zero Hermitian matrix with operator norm drawn uniformly in ``(0, bound]``."""
    rng = stream(seed, "traceless", n, *keys)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    b = 0.5 * (m + m.conj().T)
    b -= np.trace(b).real / n * np.eye(n)
    top = np.max(np.abs(np.linalg.eigvalsh(b)))
    if top == 0:
        return b
    return b * (bound * (1.0 - rng.random()) / top)

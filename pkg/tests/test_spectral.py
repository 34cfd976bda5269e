import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewlab.errors import NonConvergence
from skewlab.fixtures import random_hermitian, random_unitary
from skewlab.gauge import Lorentz, Lp, PowerPsi, rearrange
from skewlab.spectral import (Dyad, check_hermitian, eigh, ideal_norm, is_hermitian, matrix_from_json,
                              matrix_to_json, singular_values, trace_pair)


def test_eigh_diagonal_and_pauli():
    vals, _ = eigh(np.diag([1.0, 5.0, 3.0]))
    assert np.array_equal(vals, [5.0, 3.0, 1.0])
    vals, _ = eigh([[0, 1], [1, 0]])
    assert np.allclose(vals, [1.0, -1.0], atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16, 32])
def test_eigh_reconstructs_and_matches_lapack(n):
    x = random_hermitian(n, 4)
    vals, u = eigh(x)
    assert np.all(np.diff(vals) <= 0)
    assert np.max(np.abs(u @ np.diag(vals) @ u.conj().T - x)) < 1e-10
    assert np.max(np.abs(u.conj().T @ u - np.eye(n))) < 1e-10
    assert np.allclose(vals, np.linalg.eigvalsh(x)[::-1], atol=1e-11)


def test_eigh_batched_equals_single():
    xs = np.array([random_hermitian(4, 0, k) for k in range(5)])
    vals, vecs = eigh(xs)
    assert vals.shape == (5, 4) and vecs.shape == (5, 4, 4)
    for k in range(5):
        v1, _ = eigh(xs[k])
        assert np.allclose(vals[k], v1, atol=1e-13)


def test_eigh_is_deterministic():
    x = random_hermitian(6, 9)
    a, u = eigh(x)
    b, v = eigh(x)
    assert np.array_equal(a, b) and np.array_equal(u, v)


def test_eigh_rejects_non_hermitian_and_reports_nonconvergence():
    with pytest.raises(ValueError):
        eigh([[0, 1], [0, 0]])
    with pytest.raises(NonConvergence):
        eigh(random_hermitian(6, 1), max_sweeps=0)


def test_eigh_degenerate_spectrum():
    u = random_unitary(4, 2)
    x = u @ np.diag([2.0, 2.0, -1.0, -1.0]) @ u.conj().T
    vals, _ = eigh(x)
    assert np.allclose(vals, [2, 2, -1, -1], atol=1e-12)


def test_singular_values_examples():
    assert np.allclose(singular_values(np.diag([3.0, -1.0])), [3, 1])
    assert np.allclose(singular_values([[0, 2], [0, 0]]), [2, 0], atol=1e-15)


def test_singular_values_of_hermitian_is_rearranged_spectrum():
    x = random_hermitian(5, 3)
    assert np.allclose(singular_values(x), rearrange(eigh(x)[0]), atol=1e-14)


@given(st.integers(0, 10_000), st.integers(1, 6))
@settings(max_examples=25, deadline=None)
def test_singular_values_match_svd(seed, n):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    assert np.allclose(singular_values(x), np.linalg.svd(x, compute_uv=False), atol=1e-12)


def test_ideal_norm_examples():
    assert ideal_norm(Lp(1), np.diag([1.0, 2.0, 3.0])) == pytest.approx(6.0, abs=1e-14)
    assert ideal_norm(Lorentz(PowerPsi(0.5)), np.eye(2)) == pytest.approx(math.sqrt(2), abs=1e-15)
    x = random_hermitian(4, 8)
    u = random_unitary(4, 8)
    assert ideal_norm(Lp(math.inf), u @ x) == pytest.approx(ideal_norm(Lp(math.inf), x), rel=1e-12)


def test_trace_pair_examples():
    assert trace_pair(np.eye(3), np.eye(3)) == 3
    x = random_hermitian(3, 5)
    xi = random_unitary(3, 5)[:, 0]
    q = Dyad.projection(xi).matrix
    assert trace_pair(x, q) == pytest.approx(np.vdot(xi, x @ xi), abs=1e-14)
    b = random_hermitian(3, 6)
    assert abs(trace_pair(1j * (x @ b - b @ x), np.eye(3))) < 1e-13


def test_trace_pair_shape_mismatch():
    with pytest.raises(ValueError):
        trace_pair(np.eye(2), np.eye(3))


def test_dyad_action():
    xi, eta = np.array([1.0, 2j]), np.array([1j, 1.0])
    d = Dyad(xi, eta)
    h = np.array([0.5, -1.0])
    assert np.allclose(d(h), d.matrix @ h)


def test_hermitian_checks():
    assert is_hermitian(random_hermitian(3, 0))
    assert not is_hermitian([[1, 1j], [1j, 1]])
    out = check_hermitian([[1, 1 + 1e-14], [1, 1]])
    assert np.array_equal(out, out.conj().T)


def test_matrix_json_roundtrip():
    x = random_hermitian(3, 2)
    data = matrix_to_json(x)
    assert data[0][1] == [x[0, 1].real, x[0, 1].imag]
    assert np.array_equal(matrix_from_json(data), x)
    with pytest.raises(ValueError):
        matrix_from_json([[1, 2]])


def test_random_hermitian_fixture():
    assert np.array_equal(random_hermitian(4, 123), random_hermitian(4, 123))
    assert not np.array_equal(random_hermitian(4, 123), random_hermitian(4, 124))
    assert is_hermitian(random_hermitian(7, 1))
    one = random_hermitian(1, 5)
    assert one.shape == (1, 1) and one[0, 0].imag == 0

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewlab.errors import ZeroElement
from skewlab.extraction import make_commutator, rotation_witness
from skewlab.fixtures import random_hermitian, random_orthonormal, random_traceless_hermitian, random_unitary
from skewlab.gauge import Lp, parse_gauge
from skewlab.harness import DEFAULT_GAUGES
from skewlab.spectral import ideal_norm, singular_values, trace_pair
from skewlab.support import (SuperOp, coordinates, hermitian_basis, is_skew_hermitian, projection_pairing,
                             semi_inner, support_functional, support_representatives,
                             two_projection_coefficients, witness_set)

GAUGES = [parse_gauge(t) for t in DEFAULT_GAUGES]


def _unit_projection(n, seed):
    eta = random_orthonormal(n, 1, seed)[:, 0]
    return eta, np.outer(eta, eta.conj())


# --- basis and super-operators ----------------------------------------------------

def test_basis_small_cases():
    assert np.array_equal(hermitian_basis(1), [[[1.0]]])
    assert hermitian_basis(2).shape == (4, 2, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_basis_is_trace_orthonormal(n):
    b = hermitian_basis(n)
    gram = np.real(np.einsum("aij,bij->ab", b.conj(), b))
    assert np.allclose(gram, np.eye(n * n), atol=1e-12)
    assert np.allclose(b, np.swapaxes(b, 1, 2).conj())


def test_coordinates_roundtrip():
    x = random_hermitian(4, 1)
    c = coordinates(x)
    assert np.allclose(np.einsum("k,kij->ij", c, hermitian_basis(4)), x, atol=1e-14)


def test_superop_basics():
    x = random_hermitian(3, 2)
    assert np.allclose(SuperOp.identity(3)(x), x, atol=1e-14)
    assert np.all(SuperOp.zero(3)(x) == 0)
    assert np.allclose(SuperOp.identity(3).matrix(), np.eye(9), atol=1e-14)
    with pytest.raises(ValueError):
        SuperOp(np.zeros((3, 2, 2)))
    with pytest.raises(ValueError):
        SuperOp.identity(3)(np.eye(2))


def test_superop_is_real_linear():
    H = make_commutator(random_traceless_hermitian(3, 1))
    x, y = random_hermitian(3, 10), random_hermitian(3, 11)
    assert np.allclose(H(2.5 * x - y), 2.5 * H(x) - H(y), atol=1e-12)


def test_superop_json_roundtrip():
    H = make_commutator(random_traceless_hermitian(2, 3))
    data = H.to_json()
    assert data["dim"] == 2 and len(data["images"]) == 4
    assert np.array_equal(SuperOp.from_json(data).images, H.images)


def test_conjugate_of_identity_is_identity():
    u = random_unitary(3, 0)
    assert np.allclose(SuperOp.identity(3).conjugate(u).images, hermitian_basis(3), atol=1e-13)


# --- support functionals -----------------------------------------------------------

@pytest.mark.parametrize("p", [1, 1.5, 2, 4, math.inf])
def test_rank_one_projection_is_its_own_support(p):
    _, q = _unit_projection(3, 7)
    f = support_functional(Lp(p), q)
    assert np.allclose(f.rep, q, atol=1e-12)
    assert f(q) == pytest.approx(1.0, abs=1e-12)


def test_hilbert_schmidt_representative_is_x():
    x = random_hermitian(4, 3)
    assert np.allclose(support_functional(Lp(2), x).rep, x, atol=1e-12)


def test_trace_norm_example():
    x = np.diag([2.0, -1.0])
    f = support_functional(Lp(1), x)
    assert np.allclose(f.rep, np.diag([3.0, -3.0]), atol=1e-14)
    assert f(x) == pytest.approx(9.0)
    assert Lp(1).dual_norm(singular_values(f.rep)) == pytest.approx(3.0)


def test_zero_has_no_support_functional():
    with pytest.raises(ZeroElement):
        support_functional(Lp(2), np.zeros((2, 2)))
    assert semi_inner(Lp(2), np.eye(2), np.zeros((2, 2))) == 0.0


@pytest.mark.parametrize("g", GAUGES, ids=str)
def test_support_functional_norm_and_value(g):
    for k in range(5):
        x = random_hermitian(4, 30, k)
        f = support_functional(g, x)
        nx = ideal_norm(g, x)
        assert f(x) == pytest.approx(nx**2, rel=1e-10)
        assert g.dual_norm(singular_values(f.rep)) == pytest.approx(nx, rel=1e-9)


@pytest.mark.parametrize("g", GAUGES, ids=str)
def test_representative_is_canonical_on_degenerate_spectrum(g):
    # different eigenbases of the same matrix give the same functional
    u = random_unitary(4, 1)
    x = u @ np.diag([1.0, 1.0, -1.0, 0.5]) @ u.conj().T
    w = random_unitary(2, 2)
    rot = np.eye(4, dtype=complex)
    rot[:2, :2] = w
    v = u @ rot
    y = v @ np.diag([1.0, 1.0, -1.0, 0.5]) @ v.conj().T
    ra, _ = support_representatives(g, x)
    rb, _ = support_representatives(g, y)
    assert np.allclose(ra, rb, atol=1e-10)


@pytest.mark.parametrize("g", GAUGES, ids=str)
def test_representative_is_unitarily_covariant_and_odd(g):
    x = random_hermitian(3, 8)
    u = random_unitary(3, 8)
    rx, _ = support_representatives(g, x)
    ru, _ = support_representatives(g, u @ x @ u.conj().T)
    rm, _ = support_representatives(g, -x)
    assert np.allclose(ru, u @ rx @ u.conj().T, atol=1e-10)
    assert np.allclose(rm, -rx, atol=1e-12)


def test_semi_inner_examples():
    y = random_hermitian(3, 4)
    for g in GAUGES:
        assert semi_inner(g, y, y) == pytest.approx(ideal_norm(g, y) ** 2, rel=1e-10)
        assert semi_inner(g, np.zeros((3, 3)), y) == 0.0
    x = random_hermitian(3, 5)
    hs = Lp(2)
    assert semi_inner(hs, x, y) == pytest.approx(np.real(trace_pair(x, y)), abs=1e-12)
    assert semi_inner(hs, x, y) == pytest.approx(semi_inner(hs, y, x), abs=1e-12)


@pytest.mark.parametrize("g", GAUGES, ids=str)
@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32), a=st.floats(-5, 5, allow_nan=False).filter(lambda v: abs(v) > 1e-3))
def test_semi_inner_axioms(g, seed, a):
    x, y, z = (random_hermitian(3, seed, k) for k in range(3))
    lhs = semi_inner(g, a * x + y, z)
    assert lhs == pytest.approx(a * semi_inner(g, x, z) + semi_inner(g, y, z), abs=1e-8)
    assert semi_inner(g, x, a * y) == pytest.approx(a * semi_inner(g, x, y), rel=1e-9, abs=1e-9)
    assert semi_inner(g, x, x) > 0
    assert semi_inner(g, x, y) ** 2 <= semi_inner(g, x, x) * semi_inner(g, y, y) + 1e-8


@pytest.mark.parametrize("g", GAUGES, ids=str)
def test_two_projection_coefficients_are_dual_attained(g):
    c1, c2 = two_projection_coefficients(g)
    assert c1 > 0 and c2 > 0
    assert g.norm([c1, c2]) == pytest.approx(1.0, rel=1e-13)
    # (1, 1) scaled to dual norm 1 attains the norm at (c1, c2)
    assert (c1 + c2) / g.dual_norm([1.0, 1.0]) == pytest.approx(1.0, rel=1e-9)


# --- skew-Hermitian test -------------------------------------------------------------

def test_commutator_is_skew_hermitian_under_lp4():
    H = make_commutator(random_hermitian(3, 0))
    check = is_skew_hermitian(Lp(4), H)
    assert check.verdict and check.worst_value < 1e-12
    assert check.witnesses == 210


@pytest.mark.parametrize("g", GAUGES, ids=str)
def test_identity_is_rejected(g):
    check = is_skew_hermitian(g, SuperOp.identity(3), trials=10)
    assert not check.verdict
    assert check.worst_value == pytest.approx(ideal_norm(g, check.worst_witness) ** 2, rel=1e-10)


def test_rotation_passes_only_under_hilbert_schmidt():
    H2 = rotation_witness(2)
    assert is_skew_hermitian(Lp(2), H2).worst_value < 1e-12
    assert np.allclose(H2.matrix(), -H2.matrix().T)
    assert not is_skew_hermitian(Lp(4), H2).verdict


def test_worst_witness_reproduces_worst_value():
    g = Lp(1.5)
    H = SuperOp.from_function(2, lambda x: x + 0.2 * np.trace(x) * np.eye(2))
    check = is_skew_hermitian(g, H, trials=5, seed=3)
    w = check.worst_witness
    assert abs(semi_inner(g, H(w), w)) == pytest.approx(check.worst_value, rel=1e-12)
    assert check.to_json()["witnesses"] == 15


def test_witness_set_is_deterministic():
    a = witness_set(Lp(4), 3, 4, 99)
    b = witness_set(Lp(4), 3, 4, 99)
    assert a.keys() == b.keys() == {"rank-one", "two-projection", "random"}
    assert all(np.array_equal(a[k], b[k]) for k in a)


def test_projection_pairing_vanishes_for_commutators():
    H = make_commutator(random_traceless_hermitian(4, 2))
    for t in range(10):
        q = random_orthonormal(4, 2, 5, t)
        assert abs(projection_pairing(H, q[:, 0], q[:, 1])) < 1e-12
    assert projection_pairing(SuperOp.identity(2), [1, 0], [1, 0]) == pytest.approx(1.0)

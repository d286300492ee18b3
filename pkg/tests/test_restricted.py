import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilvar import linalg
from nilvar.classical import Partition, partitions
from nilvar.restricted import (
    RestrictedAlgebra,
    RestrictedError,
    ToralWitness,
    check_eq12_pointwise,
    dim_C_formula,
    dim_C_reg,
    is_nilpotent,
    is_semisimple,
    jacobson_p_power,
    jacobson_terms,
    nilvariety_point_count,
    semisimple_exponent,
    semisimple_index,
    toral_rank_search,
)
from nilvar.rootsys import build_root_system


def matrix_power(m, p):
    out = np.eye(m.shape[0], dtype=np.int64)
    for _ in range(p):
        out = out @ m % p
    return out


@pytest.mark.parametrize("p", [2, 3, 5])
def test_gl3_axioms(p):
    assert all(RestrictedAlgebra.gl(3, p).check_axioms().values())


@pytest.mark.parametrize("p", [2, 3, 5])
def test_jacobson_matches_matrix_power(p):
    L = RestrictedAlgebra.gl(3, p)
    rng = np.random.default_rng(p)
    for x in rng.integers(0, p, size=(100, L.dim)):
        via_jacobson = L.to_matrix(jacobson_p_power(L, x))
        assert np.array_equal(via_jacobson % p, matrix_power(L.to_matrix(x), p))


@given(st.sampled_from([2, 3, 5]), st.integers(0, 2**31))
def test_jacobson_formula_on_matrices(p, seed):
    # (u+v)^p = u^p + v^p + sum_i s_i(u, v) for matrices
    rng = np.random.default_rng(seed)
    u, v = rng.integers(0, p, size=(2, 3, 3))
    br = lambda a, b: (a @ b - b @ a) % p
    terms = sum(jacobson_terms(br, u, v, p)) % p
    lhs = matrix_power((u + v) % p, p)
    assert np.array_equal(lhs, (matrix_power(u, p) + matrix_power(v, p) + terms) % p)


def test_jacobson_p2_is_bracket():
    br = lambda a, b: (a @ b - b @ a) % 2
    u = np.array([[0, 1], [0, 0]])
    v = np.array([[0, 0], [1, 0]])
    assert np.array_equal(jacobson_terms(br, u, v, 2)[0], br(v, u))


def test_json_roundtrip():
    L = RestrictedAlgebra.centralizer(Partition((2, 1)), 3)
    M = RestrictedAlgebra.from_json(L.to_json())
    assert np.array_equal(L.structure, M.structure) and np.array_equal(L.ppowers, M.ppowers)
    x = np.arange(L.dim) % 3
    assert np.array_equal(jacobson_p_power(M, x), L.p_power(x))


def test_inconsistent_shapes_rejected():
    with pytest.raises(RestrictedError):
        RestrictedAlgebra(3, np.zeros((2, 2, 2)), np.zeros((3, 3)))


@pytest.mark.parametrize("p", [2, 3])
def test_nilpotent_elements_of_gl2(p):
    L = RestrictedAlgebra.gl(2, p)
    count = sum(1 for x in L_elements(L) if is_nilpotent(L, x))
    assert count == p ** 2  # q^(n^2 - n)

def L_elements(L):
    return linalg.all_vectors(L.dim, L.p)


@pytest.mark.parametrize("p", [2, 3])
def test_nilpotency_agrees_with_matrices(p):
    L = RestrictedAlgebra.gl(2, p)
    for x in L_elements(L):
        m = L.to_matrix(x)
        assert is_nilpotent(L, x) == (not (m @ m % p).any())


def test_semisimple_identity_and_nilpotent():
    L = RestrictedAlgebra.gl(2, 3)
    one = L.from_matrix(np.eye(2, dtype=np.int64))
    nil = L.from_matrix(np.array([[0, 1], [0, 0]]))
    assert is_semisimple(L, one) and semisimple_index(L, one) == 0
    assert not is_semisimple(L, nil) and semisimple_index(L, nil) == 1


@pytest.mark.parametrize("p", [2, 3])
def test_power_span_exhaustive_gl2(p):
    L = RestrictedAlgebra.gl(2, p)
    s = toral_rank_search(L).size
    e = semisimple_exponent(L)
    assert s == 2 and e == 1
    assert all(check_eq12_pointwise(L, s, e, x) for x in L_elements(L))


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_toral_rank_equals_number_of_parts(n, p):
    for lam in partitions(n):
        L = RestrictedAlgebra.centralizer(lam, p)
        w = toral_rank_search(L)
        assert w.verify(L)
        assert w.size == len(lam), lam


def test_toral_witness_rejects_non_toral():
    L = RestrictedAlgebra.gl(2, 3)
    nil = L.from_matrix(np.array([[0, 1], [0, 0]]))
    assert not ToralWitness([nil], exhaustive=False).verify(L)


@pytest.mark.parametrize("p", [2, 3])
def test_nilvariety_count_and_predicted_exponent(p):
    rep = nilvariety_point_count(RestrictedAlgebra.gl(2, p))
    assert rep.count == p ** 2
    assert rep.extra["predicted_exponent"] == 2


def test_nilvariety_budget():
    with pytest.raises(RestrictedError):
        nilvariety_point_count(RestrictedAlgebra.gl(3, 3), budget=100)


@pytest.mark.parametrize("n", range(1, 7))
def test_dim_C_reg_gl(n):
    assert dim_C_reg(None, n, 1, gl_n=n) == n * n - 1
    if n > 1:
        # gl(n) as A_{n-1} plus a one-dimensional central torus
        assert dim_C_reg(build_root_system("A", n - 1), n, 1, center_rank=1) == n * n - 1


@pytest.mark.parametrize("n", range(1, 6))
def test_dim_C_formula_maximized_at_regular(n):
    vals = {lam: dim_C_formula(lam).value for lam in partitions(n)}
    best = max(vals.values())
    assert [lam for lam, v in vals.items() if v == best] == [Partition((n,))]
    assert best == n * n - 1

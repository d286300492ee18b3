import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilvar import linalg
from nilvar.classical import (
    FormSpec,
    Partition,
    PartitionError,
    build_witness,
    centralizer_basis,
    dominates,
    is_almost_distinguished,
    is_distinguished,
    is_skew_adjoint,
    jordan_basis_with_form,
    jordan_matrix,
    partition_of_nilpotent,
    partitions,
    valid_form_partitions,
    witness_index,
)

partition_st = st.lists(st.integers(1, 5), min_size=1, max_size=5).map(Partition.of)


def test_partition_basics():
    lam = Partition.parse("3,2,2,1")
    assert lam.n == 8 and len(lam) == 4 and str(lam) == "3,2,2,1"
    assert lam.multiplicity(2) == 2
    assert lam.conjugate() == Partition((4, 3, 1))
    with pytest.raises(PartitionError):
        Partition((1, 2))
    with pytest.raises(PartitionError):
        Partition.parse("a,b")
    with pytest.raises(PartitionError):
        Partition((2, 0))


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 3), (4, 5), (5, 7), (6, 11), (8, 22)])
def test_partition_counts(n, count):
    parts = list(partitions(n))
    assert len(parts) == count == len(set(parts))


@given(partition_st)
def test_conjugate_involution(lam):
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().n == lam.n


@given(st.integers(1, 7), st.data())
def test_dominance_reversed_by_conjugation(n, data):
    ps = list(partitions(n))
    a = data.draw(st.sampled_from(ps))
    b = data.draw(st.sampled_from(ps))
    assert dominates(a, b) == dominates(b.conjugate(), a.conjugate())
    if dominates(a, b) and dominates(b, a):
        assert a == b


def test_dominates_needs_equal_sizes():
    with pytest.raises(PartitionError):
        dominates(Partition((2,)), Partition((1,)))


@given(partition_st, st.sampled_from([0, 2, 5]))
def test_jordan_matrix_roundtrip(lam, p):
    e = jordan_matrix(lam, p)
    assert partition_of_nilpotent(e, p) == lam


def test_jordan_matrix_is_lower_shift():
    e = np.asarray(jordan_matrix(Partition((3,)), 5))
    assert e.tolist() == [[0, 0, 0], [1, 0, 0], [0, 1, 0]]


def test_non_nilpotent_rejected():
    with pytest.raises(PartitionError):
        partition_of_nilpotent(np.eye(2, dtype=np.int64), 5)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3).map(Partition.of))
def test_gl_centralizer_dimension(lam):
    # dim z_gl(e) = sum of squares of the conjugate partition
    expected = sum(c * c for c in lam.conjugate().parts)
    assert len(centralizer_basis(jordan_matrix(lam, 0), 0)) == expected


def _form_centralizer_dim(lam, kappa):
    sq = sum(c * c for c in lam.conjugate().parts)
    odd = sum(1 for d in lam.parts if d % 2)
    return (sq - odd) // 2 if kappa == 0 else (sq + odd) // 2


@pytest.mark.parametrize("n,kappa", [(3, 0), (4, 0), (5, 0), (6, 0), (2, 1), (4, 1), (6, 1)])
def test_form_centralizer_dimension(n, kappa):
    for lam in valid_form_partitions(n, kappa):
        e, gram = jordan_basis_with_form(lam, FormSpec(kappa, n), 17)
        assert is_skew_adjoint(e, gram, 17)
        assert partition_of_nilpotent(e, 17) == lam
        assert len(centralizer_basis(e, 17, gram)) == _form_centralizer_dim(lam, kappa)


@pytest.mark.parametrize("n,kappa", [(5, 0), (6, 0), (4, 1), (6, 1)])
def test_gram_is_nondegenerate_with_right_symmetry(n, kappa):
    for lam in valid_form_partitions(n, kappa):
        _, gram = jordan_basis_with_form(lam, FormSpec(kappa, n), 13)
        g = np.asarray(gram) % 13
        assert linalg.rank(g, 13) == n
        sign = 1 if kappa == 0 else -1
        assert not np.any((g.T - sign * g) % 13)


def test_form_spec_validation():
    with pytest.raises(ValueError):
        FormSpec(1, 3)
    with pytest.raises(ValueError):
        FormSpec(2, 4)
    with pytest.raises(PartitionError):
        is_almost_distinguished(Partition((2, 1)), FormSpec(0, 3))


def test_valid_form_partitions():
    assert [str(l) for l in valid_form_partitions(4, 1)] == ["4", "2,2", "2,1,1", "1,1,1,1"]
    assert [str(l) for l in valid_form_partitions(5, 0)] == ["5", "3,1,1", "2,2,1", "1,1,1,1,1"]


@given(st.integers(1, 8), st.data())
def test_distinguished_implies_almost(n, data):
    lam = data.draw(st.sampled_from(list(partitions(n))))
    if is_distinguished(lam):
        assert is_almost_distinguished(lam)
    for kappa in (0, 1):
        if kappa == 1 and n % 2:
            continue
        form = FormSpec(kappa, n)
        try:
            d = is_distinguished(lam, form)
        except PartitionError:
            continue
        if d:
            assert is_almost_distinguished(lam, form)


def test_witness_index_examples():
    assert witness_index(Partition((3, 2, 2))) == 1
    assert witness_index(Partition((3, 2, 1))) is None
    assert witness_index(Partition((3, 3, 3)), FormSpec(0, 9)) == 0
    assert witness_index(Partition((4, 4, 1)), FormSpec(0, 9)) == 0


@pytest.mark.parametrize(
    "parts,kappa,p,target",
    [
        ((2, 2), None, 5, (4,)),
        ((1, 1), None, 17, (2,)),
        ((3, 2, 2), None, 17, (4, 3)),
        ((3, 3, 3), 0, 17, (9,)),
        ((1, 1, 1), 0, 17, (3,)),
        ((2, 2), 0, 5, (3, 1)),
        ((4, 4, 1), 0, 17, (5, 1, 1, 1, 1)),
        ((2, 2, 2, 2), 0, 3, (3, 2, 2, 1)),
        ((1, 1), 1, 17, (2,)),
        ((3, 3), 1, 17, (4, 1, 1)),
    ],
)
def test_witness_examples(parts, kappa, p, target):
    lam = Partition(parts)
    algebra = "gl" if kappa is None else FormSpec(kappa, lam.n)
    cert = build_witness(lam, algebra, p)
    assert cert.passed, cert.checks
    assert tuple(cert.partition_zhat.parts) == target


def test_witness_not_needed():
    assert build_witness(Partition((3, 2, 1))) is None
    assert build_witness(Partition((3, 3, 1)), FormSpec(0, 7)) is None
    # pairs of equal blocks in the pairing-compatible parity are almost distinguished
    assert build_witness(Partition((2, 2)), FormSpec(1, 4)) is None


def test_witness_json():
    cert = build_witness(Partition((2, 2)), "gl", 5)
    data = json.loads(cert.to_json())
    assert set(data) >= {"e", "zhat", "partition_e", "partition_zhat", "p", "checks"}
    assert data["partition_zhat"] == "4" and data["partition_e"] == "2,2"


@pytest.mark.parametrize("n", range(1, 7))
def test_witness_suite_gl(n):
    for lam in partitions(n):
        cert = build_witness(lam, "gl", 17)
        assert (cert is None) == is_almost_distinguished(lam)
        if cert is not None:
            assert cert.passed, (lam, cert.checks)
            assert commutes(cert)


def commutes(cert):
    e, z, p = np.asarray(cert.e), np.asarray(cert.zhat), cert.p
    return not np.any((e @ z - z @ e) % p)


@pytest.mark.parametrize("n,kappa", [(n, 0) for n in range(1, 7)] + [(n, 1) for n in (2, 4, 6)])
def test_witness_suite_forms(n, kappa):
    form = FormSpec(kappa, n)
    for lam in valid_form_partitions(n, kappa):
        cert = build_witness(lam, form, 17)
        assert (cert is None) == is_almost_distinguished(lam, form)
        if cert is None:
            continue
        assert cert.passed, (lam, cert.checks)
        assert is_skew_adjoint(np.asarray(cert.zhat), np.asarray(cert.gram), 17)
        assert not dominates(lam, cert.partition_zhat)

from itertools import product
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilvar.classical import FormSpec, is_distinguished, partitions, valid_form_partitions
from nilvar.rootsys import (
    IntegralityError,
    LeviPair,
    RootSystemError,
    all_levi_pairs,
    build_root_system,
    component_count_and_dim,
    components_json,
    diagram_groups,
    distinguished_pair_violations,
    dominant_reduction,
    enumerate_distinguished,
    eta_level,
    height,
    is_distinguished_parabolic,
    neg,
    parse_cartan_type,
    solve_cocharacter,
    systems_up_to_rank,
    weighted_diagram,
)

# number of positive roots by type, and Lie algebra dimensions
POSITIVE = {"A": lambda l: l * (l + 1) // 2, "B": lambda l: l * l, "C": lambda l: l * l, "D": lambda l: l * (l - 1)}
EXCEPTIONAL_POSITIVE = {"G2": 6, "F4": 24, "E6": 36, "E7": 63, "E8": 120}
DIMENSIONS = {"G2": 14, "F4": 52, "E6": 78, "E7": 133, "E8": 248}
# distinguished nilpotent orbits and all nilpotent orbits in the exceptional types
DISTINGUISHED = {"G2": 2, "F4": 4, "E6": 3, "E7": 6, "E8": 11}
ORBITS = {"G2": 5, "F4": 16, "E6": 21, "E7": 45, "E8": 70}


def small_systems():
    return systems_up_to_rank(4, exceptional=False) + [build_root_system("G2"), build_root_system("F4")]


@pytest.mark.parametrize("S", systems_up_to_rank(8), ids=lambda S: S.cartan_type)
def test_positive_root_counts(S):
    name = S.cartan_type
    expected = EXCEPTIONAL_POSITIVE.get(name) or POSITIVE[S.letter](S.rank)
    assert len(S.positive_roots) == expected
    assert len(set(S.roots)) == 2 * expected
    assert S.dimension == 2 * expected + S.rank


@pytest.mark.parametrize("S", systems_up_to_rank(6), ids=lambda S: S.cartan_type)
def test_root_system_axioms(S):
    roots = set(S.roots)
    simple = [tuple(int(k == i) for k in range(S.rank)) for i in range(S.rank)]
    for r in S.roots:
        assert S.norm(r) > 0 and neg(r) in roots
        for i, a in enumerate(simple, start=1):
            assert S.pairing(r, i) * S.norm(a) == 2 * S.inner(r, a)
    # reflections permute the roots
    for i in range(S.rank):
        a = tuple(int(k == i) for k in range(S.rank))
        for r in S.roots:
            c = 2 * S.inner(r, a) // S.norm(a)
            assert 2 * S.inner(r, a) % S.norm(a) == 0
            assert tuple(x - c * y for x, y in zip(r, a)) in roots


def test_g2_short_simple_root_is_first():
    S = build_root_system("G2")
    a1, a2 = (1, 0), (0, 1)
    assert S.norm(a2) == 3 * S.norm(a1)
    assert S.label(S.highest_root) == "32"


def test_e8_highest_root():
    S = build_root_system("E8")
    assert S.label(S.highest_root) == "23465432"
    assert height(S.highest_root) == 29


@pytest.mark.parametrize("text", ["X3", "D3", "B1", "E9", "G3", "A0", "nonsense"])
def test_invalid_types_rejected(text):
    with pytest.raises(RootSystemError):
        build_root_system(text)


def test_parse_cartan_type():
    assert parse_cartan_type("e8") == ("E", 8)
    assert parse_cartan_type(" B_4 ") == ("B", 4)


def test_levi_pair_requires_containment():
    with pytest.raises(RootSystemError):
        LeviPair({1}, {2})


@pytest.mark.parametrize("S", small_systems(), ids=lambda S: S.cartan_type)
def test_eta_level_is_linear_and_even(S):
    for J in [set(), {1}, set(range(1, S.rank + 1))]:
        for r in S.positive_roots:
            assert eta_level(J, r, S) % 2 == 0
            assert eta_level(J, neg(r), S) == -eta_level(J, r, S)
        for r, s in product(S.positive_roots, repeat=2):
            t = tuple(x + y for x, y in zip(r, s))
            if S.is_root(t):
                assert eta_level(J, t, S) == eta_level(J, r, S) + eta_level(J, s, S)


@pytest.mark.parametrize("S", small_systems(), ids=lambda S: S.cartan_type)
def test_inequality_holds_for_all_pairs(S):
    # is_distinguished_parabolic raises if the inequality fails
    for pair in all_levi_pairs(S):
        is_distinguished_parabolic(pair, S)


def test_cocharacter_pairing_contract():
    S = build_root_system("B3")
    for pair in all_levi_pairs(S):
        try:
            lam = solve_cocharacter(pair, S)
        except IntegralityError:
            continue
        for i in pair.I:
            assert lam.simple_values[i - 1] == (0 if i in pair.J else 2)


def test_cocharacter_integrality_violation():
    S = build_root_system("A2")
    with pytest.raises(IntegralityError):
        solve_cocharacter(LeviPair({1, 2}, {1}), S)


@given(st.sampled_from(["A3", "B3", "C3", "G2", "F4", "D4"]), st.data())
def test_dominant_reduction_is_dominant_and_idempotent(name, data):
    S = build_root_system(name)
    v = data.draw(st.lists(st.integers(-4, 4), min_size=S.rank, max_size=S.rank))
    d = dominant_reduction(v, S)
    assert all(x >= 0 for x in d)
    assert dominant_reduction(d, S) == d


@pytest.mark.parametrize("S", systems_up_to_rank(6), ids=lambda S: S.cartan_type)
def test_regular_diagram_all_twos(S):
    lam = solve_cocharacter(LeviPair(set(range(1, S.rank + 1)), set()), S)
    assert weighted_diagram(lam).values == (2,) * S.rank


@pytest.mark.parametrize("l", range(1, 9))
def test_type_a_single_distinguished(l):
    assert component_count_and_dim(build_root_system("A", l)) == (1, l * (l + 2))


def _classical_algebra(letter, l):
    return {"B": (2 * l + 1, 0), "C": (2 * l, 1), "D": (2 * l, 0)}[letter]


@pytest.mark.parametrize("S", [s for s in systems_up_to_rank(6, exceptional=False) if s.letter != "A"],
                         ids=lambda S: S.cartan_type)
def test_classical_distinguished_counts_match_partitions(S):
    n, kappa = _classical_algebra(S.letter, S.rank)
    expected = sum(1 for lam in valid_form_partitions(n, kappa) if is_distinguished(lam, FormSpec(kappa, n)))
    assert component_count_and_dim(S)[0] == expected


@pytest.mark.parametrize("name", sorted(DISTINGUISHED))
def test_exceptional_distinguished_counts(name):
    S = build_root_system(name)
    assert component_count_and_dim(S) == (DISTINGUISHED[name], DIMENSIONS[name])


@pytest.mark.parametrize("name", ["G2", "F4", "E6", "E7"])
def test_exceptional_orbit_counts(name):
    assert len(diagram_groups(build_root_system(name))) == ORBITS[name]


@pytest.mark.slow
def test_e8_orbit_count():
    assert len(diagram_groups(build_root_system("E8"))) == ORBITS["E8"]


def _classical_orbit_count(letter, l):
    n, kappa = _classical_algebra(letter, l)
    total = 0
    for lam in valid_form_partitions(n, kappa):
        very_even = letter == "D" and all(d % 2 == 0 for d in lam.parts)
        total += 2 if very_even else 1
    return total


@pytest.mark.parametrize("letter,l", [("A", l) for l in range(1, 6)] + [(x, l) for x in "BC" for l in (2, 3, 4)]
                         + [("D", 4), ("D", 5)])
def test_classical_orbit_counts(letter, l):
    S = build_root_system(letter, l)
    expected = sum(1 for _ in partitions(l + 1)) if letter == "A" else _classical_orbit_count(letter, l)
    assert len(diagram_groups(S)) == expected


@pytest.mark.parametrize("S", systems_up_to_rank(6), ids=lambda S: S.cartan_type)
def test_distinguished_levi_pairs_give_distinguished_parabolics(S):
    assert distinguished_pair_violations(S) == []


def test_distinguished_subsets_g2():
    rows = enumerate_distinguished(build_root_system("G2"))
    assert [(sorted(J), str(d)) for J, d in rows] == [([], "22"), ([1], "02")]


def test_components_json_deterministic():
    S = build_root_system("B4")
    a, b = components_json(S), components_json(S)
    assert a == b and '"count": 2' in a and '"dim": 36' in a

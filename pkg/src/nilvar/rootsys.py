"""Root systems of types A-G and Bala-Carter combinatorics.

Roots are integer coefficient vectors over the simple roots (Bourbaki
numbering); all pairings go through the Cartan matrix, no Euclidean embedding
is used.  Indices in the public API are 1-based to match Dynkin labels.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import linalg


class RootSystemError(ValueError):
    pass


class IntegralityError(RootSystemError):
    """A cocharacter that should lie in the coroot lattice came out fractional."""


Root = tuple[int, ...]


def _gram(letter: str, rank: int) -> list[list[int]]:
    """Integer Gram matrix of the simple roots (short roots have norm 2 unless noted)."""
    g = [[0] * rank for _ in range(rank)]

    def link(i, j, v):
        g[i - 1][j - 1] = g[j - 1][i - 1] = v

    if letter == "A":
        for i in range(rank):
            g[i][i] = 2
        for i in range(1, rank):
            link(i, i + 1, -1)
    elif letter == "B":
        for i in range(rank - 1):
            g[i][i] = 4
        g[rank - 1][rank - 1] = 2
        for i in range(1, rank):
            link(i, i + 1, -2)
    elif letter == "C":
        for i in range(rank - 1):
            g[i][i] = 2
        g[rank - 1][rank - 1] = 4
        for i in range(1, rank - 1):
            link(i, i + 1, -1)
        link(rank - 1, rank, -2)
    elif letter == "D":
        for i in range(rank):
            g[i][i] = 2
        for i in range(1, rank - 1):
            link(i, i + 1, -1)
        link(rank - 2, rank, -1)
    elif letter == "E":
        for i in range(rank):
            g[i][i] = 2
        for i, j in [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]:
            if j <= rank:
                link(i, j, -1)
    elif letter == "F":
        g[0][0] = g[1][1] = 4
        g[2][2] = g[3][3] = 2
        link(1, 2, -2)
        link(2, 3, -2)
        link(3, 4, -1)
    elif letter == "G":
        g[0][0], g[1][1] = 2, 6
        link(1, 2, -3)
    return g


_VALID = {
    "A": lambda l: l >= 1,
    "B": lambda l: l >= 2,
    "C": lambda l: l >= 2,
    "D": lambda l: l >= 4,
    "E": lambda l: l in (6, 7, 8),
    "F": lambda l: l == 4,
    "G": lambda l: l == 2,
}

_EXPECTED_POSITIVE = {
    "A": lambda l: l * (l + 1) // 2,
    "B": lambda l: l * l,
    "C": lambda l: l * l,
    "D": lambda l: l * (l - 1),
    "E": lambda l: {6: 36, 7: 63, 8: 120}[l],
    "F": lambda l: 24,
    "G": lambda l: 6,
}


@dataclass(frozen=True)
class RootSystem:
    """Irreducible reduced root system with a fixed basis of simple roots."""

    letter: str
    rank: int
    gram: tuple[tuple[int, ...], ...]
    cartan_matrix: tuple[tuple[int, ...], ...]  # [i][j] = <alpha_j, alpha_i^vee>
    positive_roots: tuple[Root, ...]  # sorted by height, then lexicographically

    @property
    def cartan_type(self) -> str:
        return f"{self.letter}{self.rank}"

    def __repr__(self) -> str:
        return f"RootSystem({self.cartan_type})"

    @cached_property
    def roots(self) -> tuple[Root, ...]:
        return self.positive_roots + tuple(neg(r) for r in self.positive_roots)

    @cached_property
    def root_set(self) -> frozenset[Root]:
        return frozenset(self.roots)

    @cached_property
    def positive_index(self) -> dict[Root, int]:
        return {r: i for i, r in enumerate(self.positive_roots)}

    @cached_property
    def coroot_pairings(self) -> dict[Root, tuple[int, ...]]:
        """``<alpha, alpha_i^vee>`` for every root alpha and simple index i."""
        a = np.array(self.cartan_matrix, dtype=np.int64)
        return {r: tuple(int(v) for v in a @ np.array(r)) for r in self.roots}

    @property
    def dimension(self) -> int:
        return 2 * len(self.positive_roots) + self.rank

    def is_root(self, v) -> bool:
        return tuple(v) in self.root_set

    def norm(self, v) -> int:
        v = np.array(v, dtype=np.int64)
        return int(v @ np.array(self.gram, dtype=np.int64) @ v)

    def inner(self, u, v) -> int:
        return int(np.array(u) @ np.array(self.gram, dtype=np.int64) @ np.array(v))

    def pairing(self, root, i: int) -> int:
        """``<root, alpha_i^vee>`` with 1-based i."""
        return sum(c * self.cartan_matrix[i - 1][j] for j, c in enumerate(root))

    def coroot(self, root) -> tuple[int, ...]:
        """Coefficients of ``root^vee`` over the simple coroots."""
        nr = self.norm(root)
        out = []
        for i, c in enumerate(root):
            val = Fraction(c * self.gram[i][i], nr)
            if val.denominator != 1:
                raise RootSystemError(f"non-integral coroot for {root}")
            out.append(int(val))
        return tuple(out)

    @property
    def highest_root(self) -> Root:
        return self.positive_roots[-1]

    def subsystem_roots(self, subset) -> tuple[Root, ...]:
        """All roots (both signs) supported on the simple indices in ``subset``."""
        allowed = {i - 1 for i in subset}
        return tuple(
            r for r in self.roots if all(c == 0 or i in allowed for i, c in enumerate(r))
        )

    def label(self, root) -> str:
        """Canonical label: coefficient string over alpha_1..alpha_l, '-' for negatives."""
        if any(c < 0 for c in root):
            return "-" + "".join(str(-c) for c in root)
        return "".join(str(c) for c in root)


def neg(r: Root) -> Root:
    return tuple(-c for c in r)


def height(r: Root) -> int:
    return sum(r)


def parse_cartan_type(text: str) -> tuple[str, int]:
    m = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", text)
    if not m:
        raise RootSystemError(f"cannot parse Cartan type {text!r}")
    return m.group(1).upper(), int(m.group(2))


@lru_cache(maxsize=None)
def build_root_system(letter: str, rank: int | None = None) -> RootSystem:
    """Root data for an irreducible Cartan type, e.g. ``build_root_system("E", 8)``.

    A single string such as ``"E8"`` is also accepted.
    """
    if rank is None:
        letter, rank = parse_cartan_type(letter)
    letter = letter.upper()
    if letter not in _VALID or not isinstance(rank, int) or not _VALID[letter](rank):
        raise RootSystemError(f"invalid Cartan type {letter}{rank}")
    gram = _gram(letter, rank)
    cartan = tuple(
        tuple(2 * gram[i][j] // gram[i][i] for j in range(rank)) for i in range(rank)
    )
    a = np.array(cartan, dtype=np.int64)

    simple = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = set()
        for beta in layer:
            pair = a @ np.array(beta)
            for i in range(rank):
                if beta == simple[i]:
                    continue
                # alpha_i-string through beta: p - q = <beta, alpha_i^vee>
                down = 0
                cur = list(beta)
                while True:
                    cur[i] -= 1
                    if tuple(cur) in found:
                        down += 1
                    else:
                        break
                up = down - int(pair[i])
                if up > 0:
                    new = list(beta)
                    new[i] += 1
                    nxt.add(tuple(new))
        nxt -= found
        found |= nxt
        layer = sorted(nxt)
    positive = tuple(sorted(found, key=lambda r: (sum(r), r)))
    system = RootSystem(letter, rank, tuple(map(tuple, gram)), cartan, positive)
    if len(positive) != _EXPECTED_POSITIVE[letter](rank):
        raise RootSystemError(f"closure produced {len(positive)} roots for {letter}{rank}")
    return system


# ---------------------------------------------------------------------------
# Levi pairs, cocharacters, weighted diagrams


@dataclass(frozen=True)
class LeviPair:
    I: frozenset[int]
    J: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "I", frozenset(self.I))
        object.__setattr__(self, "J", frozenset(self.J))
        if not self.J <= self.I:
            raise RootSystemError(f"J={sorted(self.J)} is not contained in I={sorted(self.I)}")

    def __repr__(self) -> str:
        return f"LeviPair(I={sorted(self.I)}, J={sorted(self.J)})"


@dataclass(frozen=True)
class Cocharacter:
    """Integral combination of simple coroots; ``coefficients[i]`` multiplies alpha_{i+1}^vee."""

    system: RootSystem
    coefficients: tuple[int, ...]

    def pairing(self, root) -> int:
        """``alpha(lambda)`` for a root given by simple-root coefficients."""
        return int(np.dot(root, self.simple_values))

    @property
    def simple_values(self) -> tuple[int, ...]:
        """``(alpha_1(lambda), ..., alpha_l(lambda))``."""
        a = np.array(self.system.cartan_matrix, dtype=np.int64)
        return tuple(int(v) for v in a.T @ np.array(self.coefficients, dtype=np.int64))


@dataclass(frozen=True)
class WeightedDynkinDiagram:
    values: tuple[int, ...]

    def __str__(self) -> str:
        return "".join(str(v) for v in self.values)


def eta_level(J, root, system: RootSystem) -> int:
    """Linear level function: 0 on simple roots in J, 2 on the others."""
    js = {j - 1 for j in J}
    return sum(2 * c for i, c in enumerate(root) if i not in js)


def _level_in(pair: LeviPair, root) -> int:
    return sum(2 * c for i, c in enumerate(root) if (i + 1) in pair.I and (i + 1) not in pair.J)


def parabolic_dimensions(pair: LeviPair, system: RootSystem) -> tuple[int, int]:
    """(dim of derived L_I meet L_J, dim of the abelianised unipotent radical of P_{I,J})."""
    phi_j = system.subsystem_roots(pair.J)
    lhs = len(pair.I) + len(phi_j)
    pos_i = [r for r in system.subsystem_roots(pair.I) if height(r) > 0]
    rhs = sum(1 for r in pos_i if _level_in(pair, r) == 2)
    return lhs, rhs


def is_distinguished_parabolic(pair: LeviPair, system: RootSystem) -> bool:
    lhs, rhs = parabolic_dimensions(pair, system)
    if lhs < rhs:
        raise RootSystemError(
            f"inequality dim (L_I,L_I)∩L_J >= dim R_u/(R_u,R_u) fails for {pair} in {system.cartan_type}"
        )
    return lhs == rhs


def all_levi_pairs(system: RootSystem):
    nodes = range(1, system.rank + 1)
    for mask_i in range(1 << system.rank):
        I = frozenset(i for i in nodes if mask_i >> (i - 1) & 1)
        members = sorted(I)
        for r in range(len(members) + 1):
            for J in itertools.combinations(members, r):
                yield LeviPair(I, frozenset(J))


def solve_cocharacter(pair: LeviPair, system: RootSystem) -> Cocharacter:
    """Cocharacter supported on I with alpha_i -> 0 on J and 2 on I minus J."""
    idx = sorted(pair.I)
    coeffs = [0] * system.rank
    if idx:
        sub = np.array([[system.cartan_matrix[j - 1][i - 1] for j in idx] for i in idx], dtype=object)
        target = [0 if i in pair.J else 2 for i in idx]
        sol = linalg.solve(sub, target, 0)
        for i, v in zip(idx, sol):
            if Fraction(v).denominator != 1:
                raise IntegralityError(
                    f"integrality violation: {pair} in {system.cartan_type} gives coefficient {v}"
                )
            coeffs[i - 1] = int(v)
    lam = Cocharacter(system, tuple(coeffs))
    for i in idx:
        expected = 0 if i in pair.J else 2
        if lam.simple_values[i - 1] != expected:
            raise RootSystemError("cocharacter solve failed its pairing contract")
    return lam


def dominant_reduction(values, system: RootSystem) -> tuple[int, ...]:
    """Dominant Weyl-chamber representative of a vector of simple-root values."""
    w = list(values)
    a = system.cartan_matrix
    while True:
        neg_idx = next((i for i, v in enumerate(w) if v < 0), None)
        if neg_idx is None:
            return tuple(w)
        c = w[neg_idx]
        # s_i(lambda) = lambda - alpha_i(lambda) alpha_i^vee
        w = [w[j] - c * a[neg_idx][j] for j in range(len(w))]


def weighted_diagram(cochar: Cocharacter, system: RootSystem | None = None) -> WeightedDynkinDiagram:
    system = system or cochar.system
    return WeightedDynkinDiagram(dominant_reduction(cochar.simple_values, system))


def enumerate_distinguished(system: RootSystem) -> list[tuple[frozenset[int], WeightedDynkinDiagram]]:
    full = frozenset(range(1, system.rank + 1))
    out = []
    for r in range(system.rank + 1):
        for J in itertools.combinations(sorted(full), r):
            pair = LeviPair(full, frozenset(J))
            if is_distinguished_parabolic(pair, system):
                values = tuple(0 if i in J else 2 for i in range(1, system.rank + 1))
                out.append((frozenset(J), WeightedDynkinDiagram(values)))
    out.sort(key=lambda item: (len(item[0]), sorted(item[0])))
    return out


def component_count_and_dim(system: RootSystem) -> tuple[int, int]:
    return len(enumerate_distinguished(system)), 2 * len(system.positive_roots) + system.rank


def enumerate_bala_carter_pairs(system: RootSystem) -> list[tuple[LeviPair, WeightedDynkinDiagram]]:
    """Distinguished Levi pairs with their dominant diagrams, grouped by diagram."""
    rows = []
    for pair in all_levi_pairs(system):
        if is_distinguished_parabolic(pair, system):
            lam = solve_cocharacter(pair, system)
            rows.append((pair, weighted_diagram(lam, system)))
    rows.sort(key=lambda r: (r[1].values, len(r[0].I), sorted(r[0].I), sorted(r[0].J)))
    return rows


def diagram_groups(system: RootSystem) -> dict[tuple[int, ...], list[LeviPair]]:
    groups: dict[tuple[int, ...], list[LeviPair]] = {}
    for pair, diag in enumerate_bala_carter_pairs(system):
        groups.setdefault(diag.values, []).append(pair)
    return groups


def components_rows(system: RootSystem) -> list[dict]:
    """Serializable rows {J, diagram, count, dim}, sorted by J."""
    count, dim = component_count_and_dim(system)
    return [
        {"J": sorted(J), "diagram": list(d.values), "count": count, "dim": dim}
        for J, d in enumerate_distinguished(system)
    ]


def components_json(system: RootSystem) -> str:
    return json.dumps(components_rows(system), sort_keys=True)


def distinguished_pair_violations(system: RootSystem) -> list[LeviPair]:
    """Pairs (I, J) distinguished in L_I whose P_J fails to be distinguished in G."""
    full = frozenset(range(1, system.rank + 1))
    cache: dict[frozenset, bool] = {}
    bad = []
    for pair in all_levi_pairs(system):
        if not is_distinguished_parabolic(pair, system):
            continue
        if pair.J not in cache:
            cache[pair.J] = is_distinguished_parabolic(LeviPair(full, pair.J), system)
        if not cache[pair.J]:
            bad.append(pair)
    return bad


def systems_up_to_rank(max_rank: int, exceptional: bool = True) -> list[RootSystem]:
    """Classical A, B, C, D of rank <= max_rank (in their valid ranges) plus the exceptional types."""
    out = [build_root_system("A", l) for l in range(1, max_rank + 1)]
    out += [build_root_system(x, l) for x in "BC" for l in range(2, max_rank + 1)]
    out += [build_root_system("D", l) for l in range(4, max_rank + 1)]
    if exceptional:
        out += [build_root_system(x) for x in ("G2", "F4", "E6", "E7", "E8")]
    return out

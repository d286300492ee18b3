"""Chevalley-basis Lie algebras over F_p or Q, gradings and centralizers.

Structure constants come from the extraspecial-pair recursion: for each
non-simple positive root xi the pair (alpha, xi - alpha) with alpha minimal in
the (height, lex) order gets N = +(q + 1), where q is the largest integer with
xi - alpha - q*alpha a root; every other constant follows from the standard
identities relating N_{r,s} for triples and quadruples of roots summing to 0.

Basis order: positive roots, then their negatives (same order), then h_1..h_l.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import linalg
from .rootsys import (
    Cocharacter,
    LeviPair,
    RootSystem,
    build_root_system,
    neg,
    parse_cartan_type,
    solve_cocharacter,
)


class ChevalleyError(ValueError):
    pass


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _is_positive(r) -> bool:
    return any(c > 0 for c in r)


@lru_cache(maxsize=None)
def structure_constants(system: RootSystem) -> dict[tuple, int]:
    """N_{r,s} for all pairs of roots with r + s a root."""
    pos = list(system.positive_roots)
    order = {r: k for k, r in enumerate(pos)}
    is_root = system.is_root
    norm = system.norm
    table: dict[tuple, int] = {}

    def n_any(x, y) -> Fraction:
        s = _add(x, y)
        if not is_root(s):
            return Fraction(0)
        xp, yp = _is_positive(x), _is_positive(y)
        if xp and yp:
            return Fraction(table[(x, y)])
        if not xp and not yp:
            return -Fraction(table[(neg(x), neg(y))])
        z = neg(s)
        # x + y + z = 0: N_{x,y}/|z|^2 = N_{y,z}/|x|^2 = N_{z,x}/|y|^2
        if _is_positive(z) == _is_positive(y):
            return n_any(y, z) * norm(z) / norm(x)
        return n_any(z, x) * norm(z) / norm(y)

    for xi in pos:
        pairs = [(r, _sub(xi, r)) for r in pos if _sub(xi, r) in order]
        if not pairs:
            continue
        alpha = min((r for r, _ in pairs), key=order.__getitem__)
        beta = _sub(xi, alpha)
        q = 0
        while is_root(_sub(beta, tuple((q + 1) * c for c in alpha))):
            q += 1
        table[(alpha, beta)] = q + 1
        table[(beta, alpha)] = -(q + 1)
        n_ab = Fraction(q + 1)
        for r, s in pairs:
            if order[r] > order[s] or {r, s} == {alpha, beta}:
                continue
            # r + s - alpha - beta = 0, no two opposite
            total = Fraction(0)
            s_a = _sub(s, alpha)
            if is_root(s_a):
                total += n_any(s, neg(alpha)) * n_any(r, neg(beta)) / norm(s_a)
            r_a = _sub(r, alpha)
            if is_root(r_a):
                total += n_any(neg(alpha), r) * n_any(s, neg(beta)) / norm(r_a)
            val = total * norm(xi) / n_ab  # N_{-alpha,-beta} = -N_{alpha,beta}
            if val.denominator != 1:
                raise ChevalleyError(f"non-integral structure constant for {r}, {s}")
            table[(r, s)] = int(val)
            table[(s, r)] = -int(val)

    full: dict[tuple, int] = {}
    for r in system.roots:
        for s in system.roots:
            if is_root(_add(r, s)):
                v = n_any(r, s)
                full[(r, s)] = int(v)
    return full


@lru_cache(maxsize=None)
def _structure_tensor(system: RootSystem):
    """Integer arrays (i, j, k, c) with [b_i, b_j] = sum c b_k, plus labels."""
    pos = list(system.positive_roots)
    roots = pos + [neg(r) for r in pos]
    l = system.rank
    index = {r: k for k, r in enumerate(roots)}
    n_roots = len(roots)
    consts = structure_constants(system)
    entries: list[tuple[int, int, int, int]] = []
    for (r, s), c in consts.items():
        entries.append((index[r], index[s], index[_add(r, s)], c))
    sq = np.diag(system.gram)
    for r in roots:
        i, j = index[r], index[neg(r)]
        # h_r = sum_k r_k |alpha_k|^2/|r|^2 h_k
        nr = system.norm(r)
        for k in range(l):
            num = r[k] * int(sq[k])
            if num:
                if num % nr:
                    raise ChevalleyError(f"non-integral coroot for {r}")
                entries.append((i, j, n_roots + k, num // nr))
        for k in range(l):
            c = system.pairing(r, k + 1)
            if c:
                entries.append((n_roots + k, i, i, c))
                entries.append((i, n_roots + k, i, -c))
    arr = np.array(entries, dtype=np.int64)
    return arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], tuple(roots)


@dataclass(eq=False)
class ChevalleyAlgebra:
    """Chevalley-basis Lie algebra of a root system over F_p (p > 0) or Q (p == 0)."""

    system: RootSystem
    p: int
    roots: tuple = field(init=False)

    def __post_init__(self):
        i, j, k, c, roots = _structure_tensor(self.system)
        self._i, self._j, self._k, self._c = i, j, k, c
        self.roots = roots
        self._index = {r: n for n, r in enumerate(roots)}
        if self.p:
            self._cp = c % self.p
        else:
            self._cp = np.array([Fraction(int(v)) for v in c], dtype=object)

    @property
    def dim(self) -> int:
        return len(self.roots) + self.system.rank

    @property
    def rank(self) -> int:
        return self.system.rank

    @cached_property
    def labels(self) -> tuple[str, ...]:
        out = [self.system.label(r) for r in self.roots]
        out += [f"h{k + 1}" for k in range(self.rank)]
        return tuple(out)

    def root_of(self, idx: int):
        return self.roots[idx] if idx < len(self.roots) else None

    def index(self, root) -> int:
        return self._index[tuple(root)]

    def h_index(self, i: int) -> int:
        """Basis index of h_i (1-based i)."""
        return len(self.roots) + i - 1

    # elements

    def zero(self) -> np.ndarray:
        return linalg.zeros(self.dim, self.p)

    def basis_vector(self, idx: int) -> np.ndarray:
        v = self.zero()
        v[idx] = 1 if self.p else Fraction(1)
        return v

    def e(self, root) -> np.ndarray:
        return self.basis_vector(self.index(root))

    def h(self, i: int) -> np.ndarray:
        return self.basis_vector(self.h_index(i))

    def simple(self, i: int, sign: int = 1) -> np.ndarray:
        r = tuple(int(k == i - 1) for k in range(self.rank))
        return self.e(r if sign > 0 else neg(r))

    def torus_element(self, cochar: Cocharacter) -> np.ndarray:
        """sum_i c_i h_i, acting on e_alpha by alpha(lambda)."""
        v = self.zero()
        for k, c in enumerate(cochar.coefficients):
            v[self.h_index(k + 1)] = linalg.reduce(c, self.p) if self.p else Fraction(c)
        return v

    def vector(self, terms: dict) -> np.ndarray:
        v = self.zero()
        for key, c in terms.items():
            idx = self.labels.index(key) if isinstance(key, str) else self.index(key)
            v[idx] = v[idx] + c
        return linalg.reduce(v, self.p)

    def to_sparse(self, v) -> dict[str, int]:
        out = {}
        for idx, c in enumerate(v):
            if c != 0:
                out[self.labels[idx]] = int(c) if self.p else str(c)
        return out

    # bracket

    def bracket(self, x, y) -> np.ndarray:
        vals = x[self._i] * y[self._j] * self._cp
        out = self.zero()
        np.add.at(out, self._k, vals)
        return linalg.reduce(out, self.p)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad x (column j is [x, b_j])."""
        m = linalg.zeros((self.dim, self.dim), self.p)
        np.add.at(m, (self._k, self._j), x[self._i] * self._cp)
        return linalg.reduce(m, self.p)

    def ad_power(self, x, k: int, y) -> np.ndarray:
        for _ in range(k):
            y = self.bracket(x, y)
        return y

    def nest(self, ops, y) -> np.ndarray:
        """Apply ad(op) for op in ops from right to left: [o_1 o_2 ... o_m y]."""
        for op in reversed(ops):
            y = self.bracket(op, y)
        return y

    @cached_property
    def center_is_trivial(self) -> bool:
        return self._generator_map_rank() == self.dim

    # [p]-power

    def _generator_map(self):
        """Stacked matrix of y -> ([y, e_{+-alpha_i}])_i."""
        blocks = []
        for i in range(1, self.rank + 1):
            for sign in (1, -1):
                blocks.append(linalg.reduce(-self.ad(self.simple(i, sign)), self.p))
        return np.vstack(blocks)

    def _generator_map_rank(self) -> int:
        return len(self._pivot_data[0])

    @cached_property
    def _pivot_data(self):
        s = self._generator_map()
        _, rows = linalg.rref(s.T, self.p)
        if len(rows) < self.dim:
            return rows, None
        sub = s[rows]
        aug = np.hstack([sub, linalg.eye(self.dim, self.p)])
        r, piv = linalg.rref(aug, self.p)
        return rows, r[:, self.dim:]

    def p_power(self, x, check: bool = True) -> np.ndarray:
        """The unique y with ad y = (ad x)^p, found from its action on generators."""
        if not self.p:
            raise ChevalleyError("the [p]-map needs positive characteristic")
        rows, inv = self._pivot_data
        if inv is None:
            raise ChevalleyError("the centre is nonzero; x^[p] is not determined by ad")
        adx = self.ad(x)
        targets = []
        for i in range(1, self.rank + 1):
            for sign in (1, -1):
                v = self.simple(i, sign)
                for _ in range(self.p):
                    v = adx @ v % self.p
                targets.append(v)
        b = np.concatenate(targets)
        y = inv @ b[rows] % self.p
        if check:
            s = self._generator_map()
            if np.any((s @ y - b) % self.p):
                raise ChevalleyError("(ad x)^p is not an inner derivation on the generators")
        return y

    def check_p_power(self, x, y) -> bool:
        """ad y == (ad x)^p as full matrices."""
        return linalg.is_zero(self.ad(y) - linalg.matpow(self.ad(x), self.p, self.p), self.p)

    # verification

    def check_cartan_action(self) -> bool:
        for i in range(1, self.rank + 1):
            hi = self.h(i)
            for idx, r in enumerate(self.roots):
                want = linalg.reduce(self.system.pairing(r, i) * self.basis_vector(idx), self.p)
                if not linalg.is_zero(self.bracket(hi, self.basis_vector(idx)) - want, self.p):
                    return False
        return True


@lru_cache(maxsize=None)
def _sparse_table(system: RootSystem):
    i, j, k, c, roots = _structure_tensor(system)
    table: dict[tuple[int, int], dict[int, int]] = {}
    for a, b, t, v in zip(i.tolist(), j.tolist(), k.tolist(), c.tolist()):
        table.setdefault((a, b), {})
        table[(a, b)][t] = table[(a, b)].get(t, 0) + v
    return table


def _sparse_bracket(table, x: dict[int, int], y: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for a, ca in x.items():
        for b, cb in y.items():
            for t, v in table.get((a, b), {}).items():
                out[t] = out.get(t, 0) + ca * cb * v
    return {t: v for t, v in out.items() if v}


def jacobi_violations(system: RootSystem, samples: int | None = None, seed: int = 0) -> list:
    """Basis triples violating Jacobi over Z (exhaustive when samples is None)."""
    table = _sparse_table(system)
    dim = len(system.roots) + system.rank
    if samples is None:
        triples = ((a, b, c) for a in range(dim) for b in range(a + 1, dim) for c in range(b + 1, dim))
    else:
        rng = random.Random(seed)
        triples = (tuple(rng.randrange(dim) for _ in range(3)) for _ in range(samples))
    bad = []
    for a, b, c in triples:
        x, y, z = {a: 1}, {b: 1}, {c: 1}
        total: dict[int, int] = {}
        for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
            for t, val in _sparse_bracket(table, u, _sparse_bracket(table, v, w)).items():
                total[t] = total.get(t, 0) + val
        if any(total.values()):
            bad.append((a, b, c))
    return bad


@lru_cache(maxsize=None)
def build_chevalley(system: RootSystem | str, p: int = 0) -> ChevalleyAlgebra:
    if isinstance(system, str):
        system = build_root_system(*parse_cartan_type(system))
    if system.rank > 8:
        raise ChevalleyError("rank above 8 is not supported")
    return ChevalleyAlgebra(system, p)


# ---------------------------------------------------------------------------
# gradings


@dataclass(frozen=True)
class GradedDecomposition:
    degrees: tuple[int, ...]
    pieces: dict[int, tuple[int, ...]]

    @classmethod
    def from_degrees(cls, degrees) -> "GradedDecomposition":
        pieces: dict[int, list[int]] = {}
        for idx, d in enumerate(degrees):
            pieces.setdefault(int(d), []).append(idx)
        return cls(tuple(int(d) for d in degrees), {d: tuple(v) for d, v in sorted(pieces.items())})

    def dim(self, i: int) -> int:
        return len(self.pieces.get(i, ()))

    def dims(self) -> dict[int, int]:
        return {d: len(v) for d, v in self.pieces.items()}

    def degree_of(self, v) -> int | None:
        """Degree of a homogeneous nonzero vector, or None."""
        degs = {self.degrees[i] for i, c in enumerate(v) if c != 0}
        return degs.pop() if len(degs) == 1 else None

    def component(self, v, i: int) -> np.ndarray:
        out = v.copy()
        mask = np.array([d != i for d in self.degrees])
        out[mask] = 0
        return out


def grading_by_weights(g: ChevalleyAlgebra, weights) -> GradedDecomposition:
    """Degree of e_alpha is sum_k alpha_k * weights_k; h_i has degree 0."""
    w = np.asarray(weights, dtype=np.int64)
    degs = [int(np.dot(r, w)) for r in g.roots] + [0] * g.rank
    return GradedDecomposition.from_degrees(degs)


def grading(g: ChevalleyAlgebra, cochar: Cocharacter) -> GradedDecomposition:
    return grading_by_weights(g, cochar.simple_values)


def check_grading_compatible(g: ChevalleyAlgebra, gr: GradedDecomposition, samples: int | None = None, seed: int = 0) -> bool:
    table = _sparse_table(g.system)
    if samples is None:
        keys = list(table)
    else:
        rng = random.Random(seed)
        keys = [(rng.randrange(g.dim), rng.randrange(g.dim)) for _ in range(samples)]
    for a, b in keys:
        for t, v in table.get((a, b), {}).items():
            if (v % g.p if g.p else v) and gr.degrees[t] != gr.degrees[a] + gr.degrees[b]:
                return False
    return True


def _restricted_kernel(g: ChevalleyAlgebra, mat, idxs) -> np.ndarray:
    """Kernel of mat restricted to the coordinate subspace on idxs (rows are full vectors)."""
    idxs = list(idxs)
    if not idxs:
        return linalg.zeros((0, g.dim), g.p)
    ker = linalg.nullspace(mat[:, idxs], g.p)
    out = linalg.zeros((ker.shape[0], g.dim), g.p)
    for r in range(ker.shape[0]):
        out[r, idxs] = ker[r]
    return out


def centralizer_graded(g: ChevalleyAlgebra, e, gr: GradedDecomposition | Cocharacter, strict: bool = True) -> dict[int, np.ndarray]:
    """z(e; i) for every degree i with a nonzero kernel."""
    if isinstance(gr, Cocharacter):
        gr = grading(g, gr)
    ade = g.ad(e)
    out = {}
    for d, idxs in gr.pieces.items():
        ker = _restricted_kernel(g, ade, idxs)
        if ker.shape[0]:
            out[d] = ker
    if strict and any(d < 0 for d in out):
        raise ChevalleyError(f"centralizer has negative-degree part in degrees {sorted(d for d in out if d < 0)}")
    return out


def centralizer_bigraded(g: ChevalleyAlgebra, e, gr1: GradedDecomposition, gr2: GradedDecomposition) -> dict[tuple[int, int], np.ndarray]:
    """z(e) split by two compatible gradings for which e is bihomogeneous."""
    ade = g.ad(e)
    pieces: dict[tuple[int, int], list[int]] = {}
    for idx in range(g.dim):
        pieces.setdefault((gr1.degrees[idx], gr2.degrees[idx]), []).append(idx)
    out = {}
    for key in sorted(pieces):
        ker = _restricted_kernel(g, ade, pieces[key])
        if ker.shape[0]:
            out[key] = ker
    return out


def centralizer(g: ChevalleyAlgebra, e, idxs=None) -> np.ndarray:
    idxs = range(g.dim) if idxs is None else idxs
    return _restricted_kernel(g, g.ad(e), idxs)


def check_ad2_bijective(g: ChevalleyAlgebra, e, gr: GradedDecomposition | Cocharacter) -> bool:
    """(ad e)^2 : g(-2) -> g(2) has full rank."""
    if isinstance(gr, Cocharacter):
        gr = grading(g, gr)
    src, dst = list(gr.pieces.get(-2, ())), list(gr.pieces.get(2, ()))
    if len(src) != len(dst):
        raise ChevalleyError(f"dim g(-2) = {len(src)} differs from dim g(2) = {len(dst)}")
    if not src:
        return True
    ade = g.ad(e)
    sq = linalg.matmul(ade, ade, g.p)
    return linalg.rank(sq[np.ix_(dst, src)], g.p) == len(src)


def complete_sl2(g: ChevalleyAlgebra, e, cochar: Cocharacter):
    """(e, h, f) with h the torus element of cochar and f in degree -2."""
    gr = grading(g, cochar)
    h = g.torus_element(cochar)
    if not linalg.is_zero(g.bracket(h, e) - linalg.reduce(2 * e, g.p), g.p):
        raise ChevalleyError("e is not homogeneous of degree 2 for the cocharacter")
    src = list(gr.pieces.get(-2, ()))
    ade = g.ad(e)
    try:
        coeffs = linalg.solve(ade[:, src], h, g.p)
    except linalg.LinAlgError as exc:
        raise ChevalleyError("no f in degree -2 with [e, f] = h") from exc
    f = g.zero()
    f[src] = coeffs
    if not linalg.is_zero(g.bracket(h, f) + linalg.reduce(2 * f, g.p), g.p):
        raise ChevalleyError("[h, f] != -2f")
    return e, h, f


# ---------------------------------------------------------------------------
# Levi data and the two nilradical checks


def _levi_indices(g: ChevalleyAlgebra, subset) -> tuple[list[int], list[int]]:
    """Root-vector indices of Phi_I and h-indices for I."""
    subset = set(subset)
    roots = [i for i, r in enumerate(g.roots) if all(c == 0 for k, c in enumerate(r) if k + 1 not in subset)]
    hs = [g.h_index(i) for i in sorted(subset)]
    return roots, hs


def richardson_element(g: ChevalleyAlgebra, pair: LeviPair, seed: int = 0, retries: int = 20):
    """Generic degree-2 element of l_I for lambda_{I,J}, checked by bijectivity of
    ad e : l_I(-2) -> [l_I, l_I](0)."""
    cochar = solve_cocharacter(pair, g.system)
    gr = grading(g, cochar)
    roots_i, hs = _levi_indices(g, pair.I)
    deg2 = [i for i in roots_i if gr.degrees[i] == 2]
    src = [i for i in roots_i if gr.degrees[i] == -2]
    dst = [i for i in roots_i if gr.degrees[i] == 0] + hs
    if len(src) != len(dst):
        raise ChevalleyError("dimension mismatch between l_I(-2) and [l_I, l_I](0)")
    rng = random.Random(seed)
    for _ in range(retries):
        e = g.zero()
        for i in deg2:
            e[i] = linalg.reduce(rng.randint(1, 9), g.p) if g.p else Fraction(rng.randint(1, 9))
        if not src:
            return e, cochar
        ade = g.ad(e)
        if linalg.rank(ade[np.ix_(dst, src)], g.p) == len(src) == len(dst):
            return e, cochar
    raise ChevalleyError(f"no Richardson element found for {pair}")


def _nil_centralizer_pieces(g: ChevalleyAlgebra, pair: LeviPair, seed: int = 0):
    e, cochar = richardson_element(g, pair, seed)
    gr = grading(g, cochar)
    lam_j = solve_cocharacter(LeviPair(frozenset(range(1, g.rank + 1)), pair.J), g.system)
    gr_j = grading(g, lam_j)
    big = centralizer_bigraded(g, e, gr, gr_j)
    return e, lam_j, {k: v for k, v in big.items() if k[0] > 0}


def check_lemma23(g: ChevalleyAlgebra, pair: LeviPair, seed: int = 0) -> bool:
    """ad h~ (h~ from lambda_J) is invertible on the positive-degree centralizer of e."""
    e, lam_j, pieces = _nil_centralizer_pieces(g, pair, seed)
    if not pieces:
        return True
    basis = np.vstack(list(pieces.values()))
    ht = g.torus_element(lam_j)
    images = np.vstack([g.bracket(ht, v) for v in basis])
    if linalg.rank(images, g.p) != basis.shape[0]:
        return False
    return all(linalg.in_span(v, basis, g.p) for v in images)


def check_no_zero_weight(g: ChevalleyAlgebra, pair: LeviPair, seed: int = 0) -> bool:
    """lambda_J has no zero weight on the positive-degree centralizer of e."""
    _, _, pieces = _nil_centralizer_pieces(g, pair, seed)
    return not any(k[1] == 0 for k in pieces)

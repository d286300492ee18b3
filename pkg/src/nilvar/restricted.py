"""Restricted Lie algebras over F_p given by structure constants.

An element is a coefficient vector over the basis b_1..b_n.  The [p]-map is
determined by the images b_i^[p] and Jacobson's formula

    (u + v)^[p] = u^[p] + v^[p] + sum_i s_i(u, v),

where i * s_i(u, v) is the coefficient of t^(i-1) in ad(t u + v)^(p-1)(u).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from math import ceil, log

import numpy as np

from . import linalg
from .classical import Partition, centralizer_basis, jordan_matrix
from .ffcount import CountReport
from .rootsys import RootSystem


class RestrictedError(ValueError):
    pass


@dataclass(eq=False)
class RestrictedAlgebra:
    """Structure constants c[i, j, k] with [b_i, b_j] = sum_k c[i, j, k] b_k."""

    p: int
    structure: np.ndarray
    ppowers: np.ndarray
    realization: np.ndarray | None = None  # optional basis matrices (dim, m, m)
    name: str = ""
    _coord: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        self.structure = np.asarray(self.structure, dtype=np.int64) % self.p
        self.ppowers = np.asarray(self.ppowers, dtype=np.int64) % self.p
        n = self.structure.shape[0]
        if self.structure.shape != (n, n, n) or self.ppowers.shape != (n, n):
            raise RestrictedError("inconsistent structure-constant shapes")

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    # construction

    @classmethod
    def from_matrices(cls, basis, p: int, name: str = "") -> "RestrictedAlgebra":
        """Restricted subalgebra of gl(m, F_p) spanned by the given matrices."""
        basis = np.asarray(basis, dtype=np.int64) % p
        n = basis.shape[0]
        flat = basis.reshape(n, -1)
        _, piv = linalg.rref(flat.T, p)
        if len(piv) != n:
            raise RestrictedError("basis matrices are linearly dependent")
        cols = _pivot_columns(flat, p)
        inv = _inverse(flat[:, cols].T, p)

        def coords(mat):
            return inv @ (mat.reshape(-1)[cols] % p) % p

        structure = np.zeros((n, n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                comm = (basis[i] @ basis[j] - basis[j] @ basis[i]) % p
                c = coords(comm)
                if np.any((c @ flat - comm.reshape(-1)) % p):
                    raise RestrictedError("span is not closed under the bracket")
                structure[i, j] = c
        ppowers = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            pw = linalg.matpow(basis[i], p, p)
            c = coords(pw)
            if np.any((c @ flat - pw.reshape(-1)) % p):
                raise RestrictedError("span is not closed under the p-th power")
            ppowers[i] = c
        alg = cls(p, structure, ppowers, basis, name)
        alg._coord = (cols, inv)
        return alg

    @classmethod
    def gl(cls, n: int, p: int) -> "RestrictedAlgebra":
        basis = np.zeros((n * n, n, n), dtype=np.int64)
        for k in range(n * n):
            basis[k, k // n, k % n] = 1
        return cls.from_matrices(basis, p, f"gl({n},F_{p})")

    @classmethod
    def centralizer(cls, lam: Partition, p: int) -> "RestrictedAlgebra":
        """z(e) in gl(n, F_p) for e of Jordan type lam."""
        e = jordan_matrix(lam, p)
        basis = np.array(centralizer_basis(e, p), dtype=np.int64)
        return cls.from_matrices(basis, p, f"z(e_{lam})")

    @classmethod
    def from_json(cls, text: str) -> "RestrictedAlgebra":
        data = json.loads(text)
        p, n = int(data["p"]), int(data["dim"])
        structure = np.zeros((n, n, n), dtype=np.int64)
        for i, j, coeffs in data["brackets"]:
            structure[i, j] = coeffs
            structure[j, i] = [-c for c in coeffs]
        return cls(p, structure, np.array(data["ppowers"], dtype=np.int64))

    def to_json(self) -> str:
        brackets = [
            [i, j, self.structure[i, j].tolist()]
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
            if np.any(self.structure[i, j])
        ]
        return json.dumps({"p": self.p, "dim": self.dim, "brackets": brackets, "ppowers": self.ppowers.tolist()})

    # arithmetic

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.structure) % self.p

    def ad(self, x) -> np.ndarray:
        """Matrix with column j equal to [x, b_j]."""
        return np.einsum("i,ijk->kj", x, self.structure) % self.p

    def to_matrix(self, x) -> np.ndarray:
        if self.realization is None:
            raise RestrictedError("no matrix realization")
        return np.tensordot(x, self.realization, axes=1) % self.p

    def from_matrix(self, m) -> np.ndarray:
        cols, inv = self._coord
        return inv @ (np.asarray(m).reshape(-1)[cols] % self.p) % self.p

    def p_power(self, x) -> np.ndarray:
        """x^[p]; uses the matrix realization when present."""
        if self.realization is not None and self._coord is not None:
            return self.from_matrix(linalg.matpow(self.to_matrix(x), self.p, self.p))
        return jacobson_p_power(self, x)

    def p_iterate(self, x, k: int) -> np.ndarray:
        for _ in range(k):
            x = self.p_power(x)
        return x

    def check_axioms(self) -> dict[str, bool]:
        n, p = self.dim, self.p
        c = self.structure
        antisym = not np.any((c + c.transpose(1, 0, 2)) % p)
        # Jacobi: [b_i,[b_j,b_k]] + cyclic
        inner = np.einsum("jkm,iml->ijkl", c, c) % p
        jac = (inner + inner.transpose(1, 2, 0, 3) + inner.transpose(2, 0, 1, 3)) % p
        ad_ok = True
        for i in range(n):
            e_i = np.zeros(n, dtype=np.int64)
            e_i[i] = 1
            if np.any((self.ad(self.ppowers[i]) - linalg.matpow(self.ad(e_i), p, p)) % p):
                ad_ok = False
                break
        return {"antisymmetric": antisym, "jacobi": not np.any(jac), "ad_p_power": ad_ok}


def _pivot_columns(flat: np.ndarray, p: int) -> list[int]:
    _, piv = linalg.rref(flat, p)
    return piv


def _inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    r, piv = linalg.rref(np.hstack([a % p, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise RestrictedError("singular matrix")
    return r[:, n:]


def jacobson_terms(bracket, u, v, p: int) -> list[np.ndarray]:
    """s_1(u, v), ..., s_{p-1}(u, v) by interpolating ad(t u + v)^(p-1)(u) in t."""
    if p == 2:
        return [bracket(v, u) % p]
    pts = list(range(p - 1))
    values = []
    for t in pts:
        w = (t * u + v) % p
        y = u
        for _ in range(p - 1):
            y = bracket(w, y)
        values.append(y)
    vander = np.array([[pow(t, k, p) for k in range(p - 1)] for t in pts], dtype=np.int64)
    vinv = _inverse(vander, p)
    coeffs = np.tensordot(vinv, np.array(values), axes=1) % p  # coeffs[k]: coefficient of t^k
    return [coeffs[i - 1] * pow(i, -1, p) % p for i in range(1, p)]


def jacobson_p_power(L: RestrictedAlgebra, x) -> np.ndarray:
    """x^[p] from the basis powers by folding Jacobson's formula term by term."""
    p = L.p
    x = np.asarray(x, dtype=np.int64) % p
    acc = np.zeros(L.dim, dtype=np.int64)
    acc_p = np.zeros(L.dim, dtype=np.int64)
    for i in np.nonzero(x)[0]:
        c = int(x[i])
        v = np.zeros(L.dim, dtype=np.int64)
        v[i] = c
        v_p = pow(c, p, p) * L.ppowers[i] % p
        if not acc.any():
            acc, acc_p = v, v_p
            continue
        corr = sum(jacobson_terms(L.bracket, acc, v, p)) % p
        acc_p = (acc_p + v_p + corr) % p
        acc = (acc + v) % p
    return acc_p


# ---------------------------------------------------------------------------
# nilpotent and semisimple elements


def _iteration_bound(L: RestrictedAlgebra) -> int:
    return L.dim + max(1, ceil(log(max(L.dim, 2), L.p)))


def is_nilpotent(L: RestrictedAlgebra, x) -> bool:
    y = np.asarray(x, dtype=np.int64) % L.p
    for _ in range(_iteration_bound(L) + 1):
        if not y.any():
            return True
        y = L.p_power(y)
    return not y.any()


def p_orbit(L: RestrictedAlgebra, x, count: int) -> list[np.ndarray]:
    """[x, x^[p], x^[p]^2, ...] of the given length."""
    out = [np.asarray(x, dtype=np.int64) % L.p]
    for _ in range(count - 1):
        out.append(L.p_power(out[-1]))
    return out


def is_semisimple(L: RestrictedAlgebra, x) -> bool:
    """x lies in the span of its iterated [p]-powers x^[p], x^[p]^2, ..."""
    x = np.asarray(x, dtype=np.int64) % L.p
    if not x.any():
        return True
    powers = p_orbit(L, x, L.dim + 2)[1:]
    return linalg.in_span(x, np.array(powers), L.p)


def semisimple_index(L: RestrictedAlgebra, x) -> int:
    """Least r with x^[p]^r semisimple."""
    y = np.asarray(x, dtype=np.int64) % L.p
    for r in range(_iteration_bound(L) + 1):
        if is_semisimple(L, y):
            return r
        y = L.p_power(y)
    raise RestrictedError("no semisimple [p]-power found within the iteration bound")


def all_elements(L: RestrictedAlgebra) -> np.ndarray:
    return linalg.all_vectors(L.dim, L.p)


def semisimple_exponent(L: RestrictedAlgebra, samples=None, count: int = 200, seed: int = 0) -> int:
    """Max over samples of the semisimple index: an empirical estimate of e(L).

    With ``samples=None`` the whole algebra is used when p^n <= 2^20, otherwise
    ``count`` seeded random elements.
    """
    if samples is None:
        if L.p ** L.dim <= 1 << 20:
            samples = all_elements(L)
        else:
            rng = np.random.default_rng(seed)
            samples = rng.integers(0, L.p, size=(count, L.dim))
    if len(samples) == 0:
        raise RestrictedError("need at least one sample")
    return max(semisimple_index(L, x) for x in samples)


# ---------------------------------------------------------------------------
# toral elements


@dataclass
class ToralWitness:
    elements: list[np.ndarray]
    exhaustive: bool
    complete: bool = True

    @property
    def size(self) -> int:
        return len(self.elements)

    def verify(self, L: RestrictedAlgebra) -> bool:
        els = [np.asarray(t) % L.p for t in self.elements]
        if any(np.any((L.p_power(t) - t) % L.p) for t in els):
            return False
        if any(L.bracket(a, b).any() for a in els for b in els):
            return False
        return not els or linalg.rank(np.array(els), L.p) == len(els)


def _commutant(L: RestrictedAlgebra, torus: list[np.ndarray]) -> np.ndarray:
    """Basis (rows) of the centralizer of the given elements."""
    if not torus:
        return np.eye(L.dim, dtype=np.int64)
    system = np.vstack([L.ad(t) for t in torus])
    return linalg.nullspace(system, L.p)


def _toral_part(L: RestrictedAlgebra, s) -> np.ndarray:
    """Basis of the toral elements in the restricted span of a semisimple s."""
    span = linalg.row_space_basis(np.array(p_orbit(L, s, L.dim + 1)), L.p)
    if span.shape[0] == 0:
        return span
    # on this torus the [p]-map is F_p-linear; toral elements = ker([p] - id)
    images = np.array([(L.p_power(b) - b) % L.p for b in span])
    ker = linalg.nullspace(images.T, L.p)
    return ker @ span % L.p if ker.shape[0] else np.zeros((0, L.dim), dtype=np.int64)


def _exhaustive_toral(L: RestrictedAlgebra, node_budget: int) -> tuple[list[np.ndarray], bool]:
    elems = all_elements(L)
    toral = [x for x in elems[1:] if not np.any((L.p_power(x) - x) % L.p)]
    best: list[np.ndarray] = []
    nodes = 0
    complete = True

    def dfs(chosen, candidates):
        nonlocal best, nodes, complete
        nodes += 1
        if nodes > node_budget:
            complete = False
            return
        if len(chosen) > len(best):
            best = list(chosen)
        if not candidates:
            return
        bound = linalg.rank(np.array(candidates), L.p)
        if len(chosen) + bound <= len(best):
            return
        for k, c in enumerate(candidates):
            new = chosen + [c]
            rest = [
                d for d in candidates[k + 1 :]
                if not L.bracket(c, d).any() and not linalg.in_span(d, np.array(new), L.p)
            ]
            dfs(new, rest)
            if not complete:
                return

    dfs([], toral)
    return best, complete


def toral_rank_search(L: RestrictedAlgebra, budget: int = 1 << 16, seed: int = 0, attempts: int = 40) -> ToralWitness:
    """A commuting, independent set of toral elements (a lower bound for MT(L))."""
    if L.dim * L.p ** L.dim <= budget:
        best, complete = _exhaustive_toral(L, budget)
        return ToralWitness(best, exhaustive=True, complete=complete)
    rng = np.random.default_rng(seed)
    torus: list[np.ndarray] = []
    stale = 0
    while stale < attempts:
        comm = _commutant(L, torus)
        if comm.shape[0] == len(torus):
            break
        y = rng.integers(0, L.p, size=comm.shape[0]) @ comm % L.p
        s = L.p_iterate(y, L.dim)
        found = False
        for t in _toral_part(L, s):
            stacked = np.array(torus + [t]) if torus else t.reshape(1, -1)
            if linalg.rank(stacked, L.p) > len(torus):
                torus.append(t % L.p)
                found = True
        stale = 0 if found else stale + 1
    return ToralWitness(torus, exhaustive=False)


# ---------------------------------------------------------------------------
# point counts and dimension formulas


def check_eq12_pointwise(L: RestrictedAlgebra, s: int, e: int, x) -> bool:
    """x^[p]^(s+e) lies in the span of x^[p]^(i+e), 0 <= i < s."""
    orbit = p_orbit(L, x, s + e + 1)
    target = orbit[s + e]
    span = np.array(orbit[e : e + s]) if s else np.zeros((0, L.dim), dtype=np.int64)
    return linalg.in_span(target, span, L.p)


def nilvariety_point_count(L: RestrictedAlgebra, budget: int = 1 << 24, seed: int = 0) -> CountReport:
    if L.p ** L.dim > budget:
        raise RestrictedError(f"p^n = {L.p ** L.dim} exceeds the enumeration budget {budget}")
    count = sum(1 for x in all_elements(L) if is_nilpotent(L, x))
    witness = toral_rank_search(L, seed=seed)
    return CountReport(
        "nilpotent_elements",
        {"algebra": L.name, "n": L.dim, "q": L.p},
        count,
        extra={"predicted_exponent": L.dim - witness.size, "witness_size": witness.size},
    )


@dataclass(frozen=True)
class DimFormula:
    value: int
    toral_rank: int
    upper_bound: bool  # True when MT is only a lower bound from an incomplete search


def dim_C_formula(lam: Partition, p: int = 3, seed: int = 0) -> DimFormula:
    """n^2 - MT(z(e)) for e of Jordan type lam in gl(n)."""
    L = RestrictedAlgebra.centralizer(lam, p)
    witness = toral_rank_search(L, seed=seed)
    n = lam.n
    return DimFormula(n * n - witness.size, witness.size, not (witness.exhaustive and witness.complete))


def dim_C_reg(system: RootSystem | None, dim_z_ereg: int, dim_center: int, center_rank: int = 0, gl_n: int | None = None) -> int:
    """dim G - rk G + dim z(e_reg) - dim z(g).

    ``center_rank`` adds a central torus to the root datum (1 for gl(n) on top
    of A_{n-1}); ``gl_n`` is a shortcut for that case.
    """
    if gl_n is not None:
        dim_g, rank = gl_n * gl_n, gl_n
    else:
        dim_g = 2 * len(system.positive_roots) + system.rank + center_rank
        rank = system.rank + center_rank
    return dim_g - rank + dim_z_ereg - dim_center

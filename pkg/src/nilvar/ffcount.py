"""Brute-force point counts over prime fields.

Counts nilpotent matrices, commuting nilpotent (and unipotent) pairs, and the
points of the punctual Hilbert scheme realised as GL_r-orbits of triples
(a, b; v) with a, b commuting nilpotent and v cyclic for k[a, b].
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import linalg

DEFAULT_BUDGET = 1 << 26


class CountError(ValueError):
    pass


@dataclass
class CountReport:
    object_kind: str
    params: dict
    count: int
    leading_exponent: int | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.count < 0:
            raise CountError("negative count")

    def to_dict(self) -> dict:
        out = {"object": self.object_kind, "params": dict(self.params), "count": self.count}
        if self.leading_exponent is not None:
            out["leading_exponent"] = self.leading_exponent
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def tsv_row(self) -> str:
        size = self.params.get("n", self.params.get("r", ""))
        exp = "" if self.leading_exponent is None else str(self.leading_exponent)
        return "\t".join([self.object_kind, str(size), str(self.params.get("q", "")), str(self.count), exp])


TSV_HEADER = "object\tn_or_r\tq\tcount\texponent"


def _check_budget(size: int, budget: int | None) -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    if size > budget:
        raise CountError(f"enumeration size {size} exceeds budget {budget}")


def gl_order(n: int, q: int) -> int:
    return math.prod(q**n - q**i for i in range(n))


def nilpotent_matrices(n: int, q: int, budget: int | None = None) -> np.ndarray:
    _check_budget(q ** (n * n), budget)
    found = [m[linalg.batch_is_nilpotent(m, q)] for m in linalg.all_matrices(n, q)]
    return np.concatenate(found)


def count_nilpotent(n: int, q: int, budget: int | None = None) -> CountReport:
    return CountReport("nilpotent_matrices", {"n": n, "q": q}, len(nilpotent_matrices(n, q, budget)))


def _commuting_mask(a_block: np.ndarray, b_all: np.ndarray, q: int) -> np.ndarray:
    ab = np.einsum("aij,bjk->abik", a_block, b_all) % q
    ba = np.einsum("bij,ajk->abik", b_all, a_block) % q
    return ~((ab != ba).reshape(ab.shape[0], ab.shape[1], -1).any(axis=2))


def commuting_nilpotent_pairs(n: int, q: int, budget: int | None = None, block: int = 128):
    """Yield (a, array of b) with b nilpotent and [a, b] = 0, over all nilpotent a."""
    nil = nilpotent_matrices(n, q, budget)
    _check_budget(len(nil) ** 2, budget)
    for start in range(0, len(nil), block):
        a_block = nil[start : start + block]
        mask = _commuting_mask(a_block, nil, q)
        for k, a in enumerate(a_block):
            yield a, nil[mask[k]]


def _centralizer_nilpotents(e: np.ndarray, q: int, budget: int | None) -> np.ndarray:
    from .classical import centralizer_basis

    basis = np.array(centralizer_basis(e, q), dtype=np.int64)
    _check_budget(q ** basis.shape[0], budget)
    elems = linalg.span_elements(basis, q)
    return elems[linalg.batch_is_nilpotent(elems, q)]


def centralizer_group_order(lam, q: int) -> int:
    """|Z_GL(e)(F_q)| = q^(dim z(e) - sum m_i^2) prod |GL_{m_i}(F_q)|."""
    from .classical import Partition

    lam = lam if isinstance(lam, Partition) else Partition.of(lam)
    conj = lam.conjugate().parts
    dim_z = sum(c * c for c in conj)
    mults = Counter(lam.parts).values()
    return q ** (dim_z - sum(m * m for m in mults)) * math.prod(gl_order(m, q) for m in mults)


def orbit_strata(n: int, q: int):
    """(partition, Jordan matrix, orbit size) for every nilpotent orbit of gl(n, F_q)."""
    from .classical import jordan_matrix, partitions

    for lam in partitions(n):
        e = np.asarray(jordan_matrix(lam, q), dtype=np.int64)
        yield lam, e, gl_order(n, q) // centralizer_group_order(lam, q)


def count_commuting_nilpotent_pairs(n: int, q: int, method: str = "naive", budget: int | None = None) -> CountReport:
    if method == "naive":
        count = sum(len(bs) for _, bs in commuting_nilpotent_pairs(n, q, budget))
    elif method == "stratified":
        count = 0
        orbit_total = 0
        for lam, e, size in orbit_strata(n, q):
            count += size * len(_centralizer_nilpotents(e, q, budget))
            orbit_total += size
        if orbit_total != q ** (n * n - n):
            raise CountError(f"orbit sizes sum to {orbit_total}, expected q^(n^2-n)")
    else:
        raise CountError(f"unknown method {method!r}")
    return CountReport("nilpotent_pairs", {"n": n, "q": q, "method": method}, count)


def compare_pair_methods(n: int, q: int, budget: int | None = None) -> tuple[CountReport, CountReport]:
    naive = count_commuting_nilpotent_pairs(n, q, "naive", budget)
    strat = count_commuting_nilpotent_pairs(n, q, "stratified", budget)
    if naive.count != strat.count:
        raise CountError(f"naive count {naive.count} != stratified count {strat.count} for n={n}, q={q}")
    return naive, strat


# ---------------------------------------------------------------------------
# unipotent elements


def adjoint(x: np.ndarray, gram: np.ndarray, q: int) -> np.ndarray:
    """x* = G^{-1} x^T G, so that Psi(xu, v) = Psi(u, x* v)."""
    ginv = _inverse(gram, q)
    return ginv @ x.T % q @ gram % q


def _inverse(a: np.ndarray, q: int) -> np.ndarray:
    n = a.shape[0]
    r, piv = linalg.rref(np.hstack([np.asarray(a) % q, np.eye(n, dtype=np.int64)]), q)
    if piv[:n] != list(range(n)):
        raise CountError("singular Gram matrix")
    return r[:, n:]


def eta_unip_to_nil(u: np.ndarray, q: int, gram: np.ndarray | None = None) -> np.ndarray:
    """u - 1 for GL; the skew-adjoint projection (u - u*)/2 for a form group."""
    u = np.asarray(u, dtype=np.int64) % q
    n = u.shape[0]
    if not linalg.batch_is_nilpotent((u - np.eye(n, dtype=np.int64))[None] % q, q)[0]:
        raise CountError("u is not unipotent")
    if gram is None:
        return (u - np.eye(n, dtype=np.int64)) % q
    if q == 2:
        raise CountError("characteristic 2 is excluded for form groups")
    half = pow(2, -1, q)
    return (u - adjoint(u, gram, q)) * half % q


def unipotent_matrices(n: int, q: int, gram: np.ndarray | None = None, budget: int | None = None) -> np.ndarray:
    """All unipotent elements of GL(n, F_q), or of the isometry group of gram."""
    _check_budget(q ** (n * n), budget)
    eye = np.eye(n, dtype=np.int64)
    found = []
    for m in linalg.all_matrices(n, q):
        keep = linalg.batch_is_nilpotent((m - eye) % q, q)
        if gram is not None:
            g = np.asarray(gram, dtype=np.int64)
            pres = np.einsum("bji,jk,bkl->bil", m, g, m) % q
            keep &= ~((pres != g % q).reshape(len(m), -1).any(axis=1))
        found.append(m[keep])
    return np.concatenate(found)


def form_nilpotents(n: int, q: int, gram: np.ndarray, budget: int | None = None) -> np.ndarray:
    """Nilpotent x with x^T G + G x = 0."""
    g = np.asarray(gram, dtype=np.int64)
    nil = nilpotent_matrices(n, q, budget)
    skew = (np.einsum("bji,jk->bik", nil, g) + np.einsum("ij,bjk->bik", g, nil)) % q
    return nil[~skew.reshape(len(nil), -1).any(axis=1)]


def count_unipotent_commuting_pairs(n: int, q: int, gram: np.ndarray | None = None, budget: int | None = None) -> CountReport:
    us = unipotent_matrices(n, q, gram, budget)
    _check_budget(len(us) ** 2, budget)
    count = 0
    for start in range(0, len(us), 128):
        count += int(_commuting_mask(us[start : start + 128], us, q).sum())
    params = {"n": n, "q": q}
    if gram is not None:
        params["form"] = True
    return CountReport("unipotent_pairs", params, count)


def check_eta_bijective(n: int, q: int, gram: np.ndarray | None = None, samples: int = 100, seed: int = 0) -> dict[str, bool]:
    """eta : U -> N is a bijection and is conjugation-equivariant on samples."""
    us = unipotent_matrices(n, q, gram)
    nil = nilpotent_matrices(n, q) if gram is None else form_nilpotents(n, q, gram)
    images = {eta_unip_to_nil(u, q, gram).tobytes() for u in us}
    targets = {x.tobytes() for x in nil}
    rng = np.random.default_rng(seed)
    if gram is None:
        group = [m for chunk in linalg.all_matrices(n, q) for m in chunk[linalg.batch_det_nonzero(chunk, q)]]
    else:
        g = np.asarray(gram, dtype=np.int64)
        group = [m for chunk in linalg.all_matrices(n, q) for m in chunk if np.array_equal(m.T @ g @ m % q, g % q)]
    equivariant = True
    for _ in range(samples):
        g_el = group[rng.integers(len(group))]
        u = us[rng.integers(len(us))]
        g_inv = _inverse(g_el, q)
        lhs = eta_unip_to_nil(g_el @ u % q @ g_inv % q, q, gram)
        rhs = g_el @ eta_unip_to_nil(u, q, gram) % q @ g_inv % q
        equivariant &= bool(np.array_equal(lhs, rhs))
    return {
        "same_size": len(us) == len(nil),
        "injective": len(images) == len(us),
        "onto_nilpotent": images == targets,
        "equivariant": equivariant,
    }


# ---------------------------------------------------------------------------
# punctual Hilbert scheme


def _word_basis(a: np.ndarray, b: np.ndarray, r: int, q: int) -> np.ndarray:
    """Basis of span{a^i b^j : i + j < r} (as r x r matrices)."""
    words = []
    ai = np.eye(r, dtype=np.int64)
    for i in range(r):
        w = ai
        for j in range(r - i):
            words.append(w)
            w = w @ b % q
        ai = ai @ a % q
    flat = np.array(words).reshape(len(words), -1)
    basis = linalg.row_space_basis(flat, q)
    return basis.reshape(-1, r, r)


def cyclic_vectors(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """Mask over all vectors of F_q^r: True when v generates F_q^r under k[a, b]."""
    r = a.shape[0]
    basis = _word_basis(a, b, r, q)
    vecs = linalg.all_vectors(r, q)
    if basis.shape[0] != r:
        return np.zeros(len(vecs), dtype=bool)
    mats = np.einsum("kij,vj->vik", basis, vecs) % q
    return linalg.batch_det_nonzero(mats, q)


def hilbert_U_count(r: int, q: int, method: str = "stratified", budget: int | None = None) -> int:
    """|U(F_q)| for U = {(a, b; v)} with a, b commuting nilpotent and v cyclic."""
    total = 0
    if method == "naive":
        for a, bs in commuting_nilpotent_pairs(r, q, budget):
            total += sum(int(cyclic_vectors(a, b, q).sum()) for b in bs)
    elif method == "stratified":
        for lam, e, size in orbit_strata(r, q):
            inner = sum(int(cyclic_vectors(e, b, q).sum()) for b in _centralizer_nilpotents(e, q, budget))
            total += size * inner
    else:
        raise CountError(f"unknown method {method!r}")
    return total


def hilbert_point_count(r: int, q: int, method: str = "stratified", budget: int | None = None) -> CountReport:
    u = hilbert_U_count(r, q, method, budget)
    order = gl_order(r, q)
    if u % order:
        raise CountError(f"|GL_{r}(F_{q})| = {order} does not divide |U| = {u}")
    return CountReport("hilbert_points", {"r": r, "q": q, "method": method}, u // order, extra={"U": u, "GL": order})


def ideal_key(a: np.ndarray, b: np.ndarray, v: np.ndarray, q: int) -> bytes:
    """Canonical form of {phi : phi(a, b) v = 0} on monomials of degree < r."""
    r = a.shape[0]
    cols = []
    ai = np.eye(r, dtype=np.int64)
    for i in range(r):
        w = ai
        for j in range(r - i):
            cols.append(w @ v % q)
            w = w @ b % q
        ai = ai @ a % q
    ker = linalg.nullspace(np.array(cols).T, q)
    rr, _ = linalg.rref(ker, q) if ker.shape[0] else (ker, [])
    return np.asarray(rr, dtype=np.int64).tobytes()


def hilbert_points_by_ideals(r: int, q: int) -> int:
    """Number of distinct ideals among all of U (a brute-force cross-check)."""
    keys = set()
    vecs = linalg.all_vectors(r, q)
    for a, bs in commuting_nilpotent_pairs(r, q):
        for b in bs:
            for v in vecs[cyclic_vectors(a, b, q)]:
                keys.add(ideal_key(a, b, v, q))
    return len(keys)


def principal_family(r: int, q: int):
    """Yield (t, a, b, v) with b = J_r, a = sum_k t_k b^k, v = e_1."""
    from .classical import Partition, jordan_matrix

    b = np.asarray(jordan_matrix(Partition((r,)), q), dtype=np.int64)
    powers = [linalg.matpow(b, k, q) for k in range(1, r)]
    v = np.zeros(r, dtype=np.int64)
    v[0] = 1
    for t in linalg.all_vectors(r - 1, q):
        a = sum((int(c) * pk for c, pk in zip(t, powers)), np.zeros((r, r), dtype=np.int64)) % q
        yield tuple(int(c) for c in t), a, b, v


def verify_principal_family(r: int, q: int) -> dict:
    keys = []
    ok_cyclic = True
    for t, a, b, v in principal_family(r, q):
        if np.any((a @ b - b @ a) % q):
            raise CountError("family pair does not commute")
        ok_cyclic &= bool(cyclic_vectors(a, b, q)[int(np.dot(v, q ** np.arange(r - 1, -1, -1)))])
        keys.append(ideal_key(a, b, v, q))
    distinct = len(set(keys))
    if distinct != len(keys):
        raise CountError(f"principal family has collisions: {len(keys) - distinct}")
    return {"family_size": len(keys), "distinct": distinct, "cyclic": ok_cyclic}


# ---------------------------------------------------------------------------
# exponent fitting


@dataclass(frozen=True)
class DimensionEstimate:
    exponent: int | None
    deviation: float
    conclusive: bool


def dimension_estimate(counts: dict[int, int] | list[CountReport], max_exponent: int | None = None) -> DimensionEstimate:
    """Integer d making count / q^d closest to constant across q."""
    if isinstance(counts, list):
        counts = {rep.params["q"]: rep.count for rep in counts}
    if len(counts) < 2:
        raise CountError("need counts for at least two primes")
    if any(c <= 0 for c in counts.values()):
        raise CountError("counts must be positive")
    top = max_exponent if max_exponent is not None else max(math.ceil(math.log(c, q)) + 1 for q, c in counts.items())
    best = None
    for d in range(0, top + 1):
        ratios = [c / q**d for q, c in counts.items()]
        dev = max(ratios) / min(ratios) - 1
        if best is None or dev < best[1]:
            best = (d, dev)
    d, dev = best
    return DimensionEstimate(d if dev <= 0.5 else None, dev, dev <= 0.5)


def with_exponent(reports: list[CountReport]) -> list[CountReport]:
    est = dimension_estimate(reports)
    for rep in reports:
        rep.leading_exponent = est.exponent
    return reports

"""Partition calculus for gl(n) and the form algebras g(Psi).

Matrices are numpy int64 arrays over F_p (``p > 0``) or object arrays of
Fractions over Q (``p == 0``); column ``j`` holds the image of basis vector ``j``.
A nilpotent Jordan block acts on its basis ``v_1, ..., v_d`` by
``v_i -> v_{i+1}``, ``v_d -> 0``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import linalg


class PartitionError(ValueError):
    pass


class WitnessError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x < 1 for x in parts):
            raise PartitionError(f"parts must be positive: {parts}")
        if list(parts) != sorted(parts, reverse=True):
            raise PartitionError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, parts) -> "Partition":
        return cls(tuple(sorted((int(x) for x in parts), reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        try:
            return cls.of(int(x) for x in text.split(",") if x.strip())
        except ValueError as exc:
            raise PartitionError(f"cannot parse partition {text!r}") from exc

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.parts)

    def multiplicity(self, size: int) -> int:
        return self.parts.count(size)

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition(())
        return Partition(tuple(sum(1 for x in self.parts if x > i) for i in range(self.parts[0])))

    def partial_sums(self, length: int) -> list[int]:
        out, acc = [], 0
        for i in range(length):
            acc += self.parts[i] if i < len(self.parts) else 0
            out.append(acc)
        return out


def partitions(n: int):
    """All partitions of n, largest first part first."""

    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for k in range(min(rest, cap), 0, -1):
            for tail in rec(rest - k, k):
                yield (k,) + tail

    for parts in rec(n, n):
        yield Partition(parts)


def dominates(lhs: Partition, rhs: Partition) -> bool:
    """True iff every partial sum of ``lhs`` is at least that of ``rhs``."""
    if lhs.n != rhs.n:
        raise PartitionError(f"dominance needs equal sums, got {lhs.n} and {rhs.n}")
    length = max(len(lhs), len(rhs))
    return all(a >= b for a, b in zip(lhs.partial_sums(length), rhs.partial_sums(length)))


@dataclass(frozen=True)
class FormSpec:
    """Nondegenerate form with Psi(u, v) = (-1)**kappa Psi(v, u)."""

    kappa: int
    dim: int

    def __post_init__(self):
        if self.kappa not in (0, 1):
            raise PartitionError("kappa must be 0 (symmetric) or 1 (alternating)")
        if self.kappa == 1 and self.dim % 2:
            raise PartitionError("an alternating form needs even dimension")


Algebra = Literal["gl"] | FormSpec


# ---------------------------------------------------------------------------
# nilpotent matrices


def jordan_matrix(lam: Partition, p: int = 0) -> np.ndarray:
    """Standard nilpotent matrix of Jordan type ``lam`` (blocks in order of parts)."""
    n = lam.n
    e = linalg.zeros((n, n), p)
    start = 0
    for d in lam.parts:
        for i in range(d - 1):
            e[start + i + 1, start + i] = 1
        start += d
    return e


def block_offsets(lam: Partition) -> list[int]:
    out, acc = [], 0
    for d in lam.parts:
        out.append(acc)
        acc += d
    return out


def partition_of_nilpotent(x: np.ndarray, p: int = 0) -> Partition:
    """Jordan type from the rank sequence of powers of ``x``."""
    x = linalg.asfield(x, p)
    n = x.shape[0]
    ranks = [n]
    power = linalg.eye(n, p)
    for k in range(1, n + 1):
        power = linalg.matmul(power, x, p)
        ranks.append(linalg.rank(power, p))
        if ranks[-1] == ranks[-2]:
            break
    if ranks[-1] != 0:
        raise PartitionError(
            f"matrix is not nilpotent: rank of x^{len(ranks) - 1} stabilises at {ranks[-1]}"
        )
    conj = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks)) if ranks[k - 1] - ranks[k] > 0]
    return Partition(tuple(conj)).conjugate()


def is_skew_adjoint(x: np.ndarray, gram: np.ndarray, p: int) -> bool:
    """Psi(xu, v) + Psi(u, xv) = 0, i.e. x^T G + G x = 0."""
    lhs = linalg.matmul(x.T, gram, p) + linalg.matmul(gram, x, p)
    return linalg.is_zero(linalg.reduce(lhs, p), p)


def centralizer_basis(e: np.ndarray, p: int = 0, gram: np.ndarray | None = None) -> list[np.ndarray]:
    """Basis of {x : [e, x] = 0}, intersected with g(Psi) when a Gram matrix is given."""
    e = linalg.asfield(e, p)
    n = e.shape[0]
    if gram is not None:
        gram = linalg.asfield(gram, p)
        if not is_skew_adjoint(e, gram, p):
            raise PartitionError("e is not in g(Psi) for the given form")
    eye = linalg.eye(n, p)
    # vec(e x - x e) = (I (x) e - e^T (x) I) vec(x), column-major vec
    rows = [np.kron(eye, e) - np.kron(e.T, eye)]
    if gram is not None:
        # vec(x^T G + G x): x^T G entry (i,j) = sum_k x[k,i] G[k,j]
        transpose = linalg.zeros((n * n, n * n), p)
        for i in range(n):
            for j in range(n):
                transpose[i * n + j, j * n + i] = 1
        rows.append(np.kron(gram.T, eye) @ transpose + np.kron(eye, gram))
    system = linalg.reduce(np.vstack(rows), p)
    ker = linalg.nullspace(system, p)
    return [k.reshape(n, n, order="F") for k in ker]


def _check_form_type(lam: Partition, kappa: int) -> None:
    for size, mult in Counter(lam.parts).items():
        if (size + kappa) % 2 == 0 and mult % 2:
            raise PartitionError(
                f"invalid Jordan type {lam} for kappa={kappa}: part {size} needs even multiplicity"
            )


def is_almost_distinguished(lam: Partition, algebra: Algebra = "gl") -> bool:
    counts = Counter(lam.parts)
    if algebra == "gl":
        return all(m == 1 for m in counts.values())
    _check_form_type(lam, algebra.kappa)
    return all((size + algebra.kappa) % 2 == 1 and m <= 2 for size, m in counts.items())


def is_distinguished(lam: Partition, algebra: Algebra = "gl") -> bool:
    counts = Counter(lam.parts)
    if algebra == "gl":
        return len(lam) == 1
    _check_form_type(lam, algebra.kappa)
    return all((size + algebra.kappa) % 2 == 1 and m == 1 for size, m in counts.items())


def valid_form_partitions(n: int, kappa: int):
    for lam in partitions(n):
        try:
            _check_form_type(lam, kappa)
        except PartitionError:
            continue
        yield lam


def witness_index(lam: Partition, algebra: Algebra = "gl") -> int | None:
    """Smallest 0-based block index where a witness construction applies."""
    parts = lam.parts
    counts = Counter(parts)
    for i, d in enumerate(parts):
        if algebra == "gl":
            if i + 1 < len(parts) and parts[i + 1] == d:
                return i
        elif (d + algebra.kappa) % 2 == 1:
            if counts[d] >= 3:
                return i
        else:
            return i
    return None


# ---------------------------------------------------------------------------
# witness constructions


def witness_gl(e: np.ndarray, lam: Partition, j: int, p: int = 0) -> np.ndarray:
    """zhat commuting with e, acting as one Jordan block of order 2d on V_j + V_{j+1}."""
    parts = lam.parts
    if not (0 <= j < len(parts) - 1 and parts[j] == parts[j + 1]):
        raise WitnessError(f"no repeated part at block {j} of {lam}")
    d = parts[j]
    off = block_offsets(lam)
    v = [off[j] + i for i in range(d)]
    w = [off[j + 1] + i for i in range(d)]
    z = linalg.asfield(e, p).copy()
    for idx in v + w:
        z[:, idx] = 0
    for i in range(d):
        z[w[i], v[i]] = 1  # v_i -> w_i
        if i + 1 < d:
            z[v[i + 1], w[i]] = 1  # w_i -> v_{i+1}
    return z


def jordan_basis_with_form(lam: Partition, form: FormSpec, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Nilpotent e of type lam and a Gram matrix making e skew-adjoint.

    Blocks with d + kappa odd carry Psi(m_i, m_k) = (-1)^(i-1) [i = d+1-k];
    blocks with d + kappa even come in consecutive isotropic pairs with
    Psi(v_i, v'_k) = (-1)^(i-1) [i = d+1-k].
    """
    if p == 2:
        raise PartitionError("characteristic 2 is excluded for form algebras")
    if lam.n != form.dim:
        raise PartitionError(f"partition of {lam.n} does not match dim {form.dim}")
    _check_form_type(lam, form.kappa)
    n = lam.n
    e = jordan_matrix(lam, p)
    gram = linalg.zeros((n, n), p)
    off = block_offsets(lam)
    parts = lam.parts
    i = 0
    while i < len(parts):
        d = parts[i]
        a = off[i]
        if (d + form.kappa) % 2 == 1:
            for s in range(d):
                gram[a + s, a + d - 1 - s] = (-1) ** s
            i += 1
        else:
            b = off[i + 1]
            for s in range(d):
                val = (-1) ** s
                gram[a + s, b + d - 1 - s] = val
                gram[b + d - 1 - s, a + s] = val * (-1) ** form.kappa
            i += 2
    return linalg.asfield(e, p), linalg.asfield(gram, p)


def _require_form_witness(lam, form, j, copies, parity):
    parts = lam.parts
    if not (0 <= j and j + copies - 1 < len(parts)):
        raise WitnessError(f"block index {j} out of range for {lam}")
    d = parts[j]
    if any(parts[j + t] != d for t in range(copies)):
        raise WitnessError(f"{lam} has no {copies} equal parts starting at block {j}")
    if (d + form.kappa) % 2 != parity:
        raise WitnessError(f"parity mismatch: d={d}, kappa={form.kappa}")
    return d


def witness_bcd_odd(e: np.ndarray, lam: Partition, form: FormSpec, j: int, p: int) -> np.ndarray:
    """Three equal blocks of size d with d + kappa odd; needs sqrt(2), sqrt(-1) in F_p."""
    d = _require_form_witness(lam, form, j, 3, 1)
    if p == 0:
        raise WitnessError("this construction needs sqrt(2) and sqrt(-1); use F_p with p = 1 mod 8")
    r2, ri = linalg.sqrt_mod(2, p), linalg.sqrt_mod(p - 1, p)
    if r2 is None or ri is None:
        raise WitnessError(f"F_{p} lacks sqrt(2) or sqrt(-1); need p = 1 mod 8")
    inv_r2 = pow(r2, -1, p)
    n = lam.n
    off = block_offsets(lam)
    m = [[off[j + t] + i for i in range(d)] for t in range(3)]
    # columns of P: u_1..u_d, v_1..v_d, w_1..w_d written in the m basis
    cols = 3 * d
    pmat = np.zeros((cols, cols), dtype=np.int64)
    local = {idx: k for k, idx in enumerate(m[0] + m[1] + m[2])}
    for i in range(d):
        pmat[local[m[0][i]], i] = inv_r2
        pmat[local[m[2][i]], i] = ri * inv_r2
        pmat[local[m[1][i]], d + i] = 1
        pmat[local[m[0][i]], 2 * d + i] = -inv_r2
        pmat[local[m[2][i]], 2 * d + i] = ri * inv_r2
    pmat %= p
    zloc = np.zeros((cols, cols), dtype=np.int64)
    for i in range(d):
        zloc[d + i, i] = 1  # u_i -> v_i
        zloc[2 * d + i, d + i] = 1  # v_i -> w_i
        if i + 1 < d:
            zloc[i + 1, 2 * d + i] = 1  # w_i -> u_{i+1}
    pinv = _inverse_mod(pmat, p)
    zm = (pmat @ zloc % p) @ pinv % p
    z = linalg.asfield(e, p).copy()
    idxs = m[0] + m[1] + m[2]
    for idx in idxs:
        z[:, idx] = 0
    for a, ia in enumerate(idxs):
        for b, ib in enumerate(idxs):
            z[ia, ib] = zm[a, b]
    return z % p


def witness_bcd_even(e: np.ndarray, lam: Partition, form: FormSpec, j: int, p: int) -> np.ndarray:
    """Paired blocks of size d with d + kappa even: v_i -> v_{i+1} + v'_{i+2}, v'_i -> v'_{i+1} + v_i."""
    d = _require_form_witness(lam, form, j, 2, 0)
    if p == 2:
        raise WitnessError("characteristic 2 is excluded")
    off = block_offsets(lam)
    v = [off[j] + i for i in range(d)]
    w = [off[j + 1] + i for i in range(d)]
    z = linalg.asfield(e, p).copy()
    for idx in v + w:
        z[:, idx] = 0
    one = 1
    for i in range(d):
        if i + 1 < d:
            z[v[i + 1], v[i]] = one
            z[w[i + 1], w[i]] = one
        if i + 2 < d:
            z[w[i + 2], v[i]] = linalg.reduce(z[w[i + 2], v[i]] + one, p)
        z[v[i], w[i]] = linalg.reduce(z[v[i], w[i]] + one, p)
    return linalg.reduce(z, p)


def _inverse_mod(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    aug = np.hstack([a % p, np.eye(n, dtype=np.int64)])
    r, piv = linalg.rref(aug, p)
    if piv[:n] != list(range(n)):
        raise WitnessError("singular change of basis")
    return r[:, n:]


@dataclass
class WitnessCertificate:
    e: np.ndarray
    zhat: np.ndarray
    partition_e: Partition
    partition_zhat: Partition
    p: int
    checks: dict[str, bool]
    gram: np.ndarray | None = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        out = {
            "e": np.asarray(self.e, dtype=np.int64).tolist(),
            "zhat": np.asarray(self.zhat, dtype=np.int64).tolist(),
            "partition_e": str(self.partition_e),
            "partition_zhat": str(self.partition_zhat),
            "p": self.p,
            "checks": dict(self.checks),
        }
        if self.gram is not None:
            out["gram"] = np.asarray(self.gram, dtype=np.int64).tolist()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def certify(e, zhat, lam: Partition, p: int, gram=None) -> WitnessCertificate:
    comm = linalg.matmul(e, zhat, p) - linalg.matmul(zhat, e, p)
    checks = {"commutes": linalg.is_zero(linalg.reduce(comm, p), p)}
    try:
        mu = partition_of_nilpotent(zhat, p)
        checks["nilpotent"] = True
    except PartitionError:
        mu = Partition(())
        checks["nilpotent"] = False
    checks["not_dominated"] = checks["nilpotent"] and not dominates(lam, mu)
    if gram is not None:
        checks["skew_adjoint"] = is_skew_adjoint(zhat, gram, p)
    return WitnessCertificate(e, zhat, lam, mu, p, checks, gram)


def build_witness(lam: Partition, algebra: Algebra = "gl", p: int = 17, j: int | None = None) -> WitnessCertificate | None:
    """Construct and certify a witness for lam, or None if lam is almost distinguished."""
    if is_almost_distinguished(lam, algebra):
        return None
    if j is None:
        j = witness_index(lam, algebra)
    if algebra == "gl":
        e = linalg.asfield(jordan_matrix(lam, p), p)
        return certify(e, witness_gl(e, lam, j, p), lam, p)
    e, gram = jordan_basis_with_form(lam, algebra, p)
    if (lam.parts[j] + algebra.kappa) % 2 == 1:
        z = witness_bcd_odd(e, lam, algebra, j, p)
    else:
        z = witness_bcd_even(e, lam, algebra, j, p)
    return certify(e, z, lam, p, gram)

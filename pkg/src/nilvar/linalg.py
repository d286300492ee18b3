"""Exact linear algebra over prime fields F_p and over the rationals.

Vectors and matrices are numpy arrays.  Over F_p (``p > 0``) they are int64
arrays with entries reduced to ``[0, p)``; over Q (``p == 0``) they are object
arrays holding :class:`fractions.Fraction` values.  Every routine takes the
characteristic ``p`` explicitly so the two cases share one code path.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


class LinAlgError(ValueError):
    """Raised when a linear system has no (or no unique) solution."""


def asfield(a, p: int) -> np.ndarray:
    """Coerce ``a`` into the canonical array representation for F_p or Q."""
    if p:
        return np.asarray(a, dtype=np.int64) % p
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    flat_in, flat_out = arr.reshape(-1), out.reshape(-1)
    for i, v in enumerate(flat_in):
        flat_out[i] = Fraction(v)
    return out


def zeros(shape, p: int) -> np.ndarray:
    if p:
        return np.zeros(shape, dtype=np.int64)
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def eye(n: int, p: int) -> np.ndarray:
    out = zeros((n, n), p)
    for i in range(n):
        out[i, i] = 1 if p else Fraction(1)
    return out


def reduce(a, p: int):
    return a % p if p else a


def inv_scalar(a, p: int):
    if p:
        a = int(a) % p
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(a, -1, p)
    if a == 0:
        raise ZeroDivisionError("inverse of zero in Q")
    return 1 / Fraction(a)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if p:
        return (a @ b) % p
    return np.dot(a, b)


def matpow(a: np.ndarray, k: int, p: int) -> np.ndarray:
    """``a**k`` by repeated squaring."""
    result = eye(a.shape[0], p)
    base = a
    while k:
        if k & 1:
            result = matmul(result, base, p)
        k >>= 1
        if k:
            base = matmul(base, base, p)
    return result


def is_zero(a, p: int) -> bool:
    if p:
        return not np.any(np.asarray(a) % p)
    return all(v == 0 for v in np.asarray(a, dtype=object).reshape(-1))


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    r = asfield(m, p).copy()
    if r.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        if p:
            nz = np.nonzero(r[row:, col])[0]
        else:
            nz = [i for i, v in enumerate(r[row:, col]) if v != 0]
        if len(nz) == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        inv = inv_scalar(r[row, col], p)
        r[row] = reduce(r[row] * inv, p)
        col_vals = r[:, col].copy()
        col_vals[row] = 0
        if p:
            hit = np.nonzero(col_vals)[0]
            if len(hit):
                r[hit] = (r[hit] - np.outer(col_vals[hit], r[row])) % p
        else:
            for i, v in enumerate(col_vals):
                if v != 0:
                    r[i] = r[i] - v * r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(m: np.ndarray, p: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def nullspace(m: np.ndarray, p: int) -> np.ndarray:
    """Basis of ``{x : m @ x = 0}`` as the rows of the returned array."""
    m = asfield(m, p)
    rows, cols = m.shape
    if rows == 0:
        return eye(cols, p)
    r, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros((len(free), cols), p)
    for k, f in enumerate(free):
        basis[k, f] = 1 if p else Fraction(1)
        for i, pc in enumerate(pivots):
            basis[k, pc] = reduce(-r[i, f], p)
    return basis


def solve(m: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """One solution of ``m @ x = b``; raises LinAlgError when inconsistent."""
    m = asfield(m, p)
    b = asfield(b, p)
    rows, cols = m.shape
    aug = zeros((rows, cols + 1), p)
    aug[:, :cols] = m
    aug[:, cols] = b
    r, pivots = rref(aug, p)
    if cols in pivots:
        raise LinAlgError("inconsistent linear system")
    x = zeros(cols, p)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols]
    return x


def row_space_basis(vectors: np.ndarray, p: int) -> np.ndarray:
    """Rows of the RREF spanning the same space as ``vectors`` (nonzero rows only)."""
    vectors = np.asarray(vectors)
    if vectors.size == 0:
        return vectors.reshape(0, vectors.shape[-1] if vectors.ndim == 2 else 0)
    r, pivots = rref(vectors, p)
    return r[: len(pivots)]


def in_span(v: np.ndarray, basis: np.ndarray, p: int) -> bool:
    basis = np.asarray(basis)
    if basis.size == 0:
        return is_zero(v, p)
    stacked = np.vstack([asfield(basis, p), asfield(v, p).reshape(1, -1)])
    return rank(stacked, p) == rank(basis, p)


def coordinates(v: np.ndarray, basis: np.ndarray, p: int) -> np.ndarray:
    """Coefficients ``c`` with ``c @ basis == v``; basis rows must be independent."""
    return solve(asfield(basis, p).T, v, p)


def intersect(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows) of the intersection of two row spaces."""
    a = asfield(a, p)
    b = asfield(b, p)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return zeros((0, a.shape[1] if a.ndim == 2 else b.shape[1]), p)
    # x @ a == y @ b  <=>  [a; -b]^T [x; y] = 0
    stacked = np.vstack([a, reduce(-b, p)])
    ker = nullspace(stacked.T, p)
    if ker.shape[0] == 0:
        return zeros((0, a.shape[1]), p)
    vecs = matmul(ker[:, : a.shape[0]], a, p)
    return row_space_basis(vecs, p)


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of ``a`` in F_p, or None (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


def batch_det_nonzero(mats: np.ndarray, p: int) -> np.ndarray:
    """Vectorised test ``det(M) != 0 mod p`` for a stack of square matrices."""
    a = np.asarray(mats, dtype=np.int64) % p
    n_batch, n, _ = a.shape
    alive = np.ones(n_batch, dtype=bool)
    inv_table = np.zeros(p, dtype=np.int64)
    for v in range(1, p):
        inv_table[v] = pow(v, -1, p)
    idx = np.arange(n_batch)
    for col in range(n):
        sub = a[:, col:, col]
        has = sub != 0
        any_piv = has.any(axis=1)
        alive &= any_piv
        piv = col + np.argmax(has, axis=1)
        row_c = a[idx, col].copy()
        row_p = a[idx, piv].copy()
        a[idx, col] = row_p
        a[idx, piv] = row_c
        pinv = inv_table[a[:, col, col]]
        for r in range(col + 1, n):
            factor = (a[:, r, col] * pinv) % p
            a[:, r] = (a[:, r] - factor[:, None] * a[:, col]) % p
    return alive


def batch_is_nilpotent(mats: np.ndarray, p: int) -> np.ndarray:
    """Vectorised nilpotency test: ``M**n == 0`` for a stack of n x n matrices."""
    a = np.asarray(mats, dtype=np.int64) % p
    n = a.shape[-1]
    power = a.copy()
    k = 1
    while k < n:
        power = np.matmul(power, power) % p
        k *= 2
    return ~power.reshape(power.shape[0], -1).any(axis=1)


def all_matrices(n: int, q: int, chunk: int = 1 << 18):
    """Yield every n x n matrix over F_q, in chunks, in lexicographic order."""
    total = q ** (n * n)
    digits = q ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        mats = (codes[:, None] // digits[None, :]) % q
        yield mats.reshape(-1, n, n)


def all_vectors(n: int, q: int) -> np.ndarray:
    codes = np.arange(q**n, dtype=np.int64)
    digits = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (codes[:, None] // digits[None, :]) % q


def span_elements(basis: np.ndarray, q: int) -> np.ndarray:
    """All ``q**k`` F_q-linear combinations of the k basis rows."""
    basis = np.asarray(basis, dtype=np.int64)
    k = basis.shape[0]
    if k == 0:
        return np.zeros((1,) + basis.shape[1:], dtype=np.int64)
    coeffs = all_vectors(k, q)
    flat = basis.reshape(k, -1)
    return ((coeffs @ flat) % q).reshape((q**k,) + basis.shape[1:])

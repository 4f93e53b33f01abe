"""Exact integer matrix helpers: products, powers, Smith normal form."""

from __future__ import annotations

from typing import List, Sequence, Tuple

IntMatrix = List[List[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(r) for r in zip(*a)]


def det(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def unimodular_inverse(a: Sequence[Sequence[int]]) -> IntMatrix:
    """Inverse of an integer matrix with determinant +-1."""
    n = len(a)
    d = det(a)
    if abs(d) != 1:
        raise ValueError(f"matrix is not unimodular (det = {d})")
    # Gauss-Jordan over Z works since every pivot can be made +-1 by row ops
    m = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        # Euclid on column c below the diagonal
        while True:
            rows = [i for i in range(c, n) if m[i][c]]
            p = min(rows, key=lambda i: abs(m[i][c]))
            m[c], m[p] = m[p], m[c]
            done = True
            for i in range(c + 1, n):
                if m[i][c]:
                    q = m[i][c] // m[c][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[c])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if m[c][c] < 0:
            m[c] = [-x for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                q = m[i][c]
                m[i] = [x - q * y for x, y in zip(m[i], m[c])]
    return [r[n:] for r in m]


class MatrixPowers:
    """Memoized powers ``A^m`` of a unimodular matrix.

    Powers with ``|m| <= cap`` are cached; larger ones are recomputed by
    repeated squaring.  Filling the cache is idempotent, so concurrent readers
    at worst compute the same entry twice.
    """

    def __init__(self, a: Sequence[Sequence[int]], cap: int = 64):
        self.a = tuple(tuple(int(x) for x in r) for r in a)
        self.n = len(self.a)
        self.cap = cap
        self._inv = tuple(tuple(r) for r in unimodular_inverse(self.a)) if self.n else ()
        self._cache = {0: tuple(tuple(r) for r in identity(self.n)), 1: self.a, -1: self._inv}

    def __call__(self, m: int):
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        base = self.a if m > 0 else self._inv
        k = abs(m)
        if k <= self.cap:
            prev = self(m - 1 if m > 0 else m + 1)
            out = tuple(tuple(r) for r in matmul(prev, base))
            self._cache[m] = out
            return out
        result = identity(self.n)
        sq = [list(r) for r in base]
        while k:
            if k & 1:
                result = matmul(result, sq)
            sq = matmul(sq, sq)
            k >>= 1
        return tuple(tuple(r) for r in result)


def smith_normal_form(m: Sequence[Sequence[int]]):
    """Smith normal form of an integer matrix.

    Returns ``(divisors, L, R)`` with ``L @ m @ R`` diagonal, its nonzero
    diagonal equal to ``divisors`` (positive, ``d1 | d2 | ...``), and ``L``, ``R``
    unimodular.  Pivots are chosen by minimal absolute value.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[int(x) for x in r] for r in m]
    left = identity(rows)
    right = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x - q * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for r in a:
            r[dst] -= q * r[src]
        for r in right:
            r[dst] -= q * r[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        clean = False
            if clean:
                # divisibility: the pivot must divide the whole remaining block
                bad = [(i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]]
                if not bad:
                    break
                i, _ = bad[0]
                add_row(t, i, -1)
                continue
            nz = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            nz += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
            _, pi, pj = min(nz)
            swap_rows(t, pi)
            swap_cols(t, pj)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        t += 1
    divisors = [a[i][i] for i in range(min(rows, cols)) if a[i][i]]
    return divisors, left, right


def complete_to_unimodular(v: Sequence[int]) -> IntMatrix:
    """Unimodular matrix whose last row is the primitive vector ``v``."""
    n = len(v)
    divisors, left, right = smith_normal_form([list(v)])
    if divisors != [1]:
        raise ValueError(f"vector {list(v)} is not primitive")
    # left*v*right = e_1 with left = (+-1), so v = left * e_1 * right^-1
    rinv = unimodular_inverse(right)
    s = left[0][0]
    rows = [list(r) for r in rinv]
    first = [s * x for x in rows[0]]
    out = rows[1:] + [first]
    if det(out) < 0 and n > 1:
        out[0] = [-x for x in out[0]]
    return out


def image_lattice_basis(vectors: Sequence[Sequence[int]], n: int):
    """Basis of the subgroup of Z^n generated by ``vectors``.

    Returns ``(basis, coords)``: ``basis`` is a list of r vectors in Z^n and
    ``coords[i]`` expresses ``vectors[i]`` in that basis.
    """
    if not vectors:
        return [], []
    m = [list(v) for v in vectors]  # rows = generators
    divisors, left, right = smith_normal_form(m)
    r = len(divisors)
    # m = L^-1 D R^-1; rows of D R^-1 span the image, the first r are d_i * (row i of R^-1)
    rinv = unimodular_inverse(right)
    basis = [[divisors[i] * x for x in rinv[i]] for i in range(r)]
    linv = unimodular_inverse(left)
    coords = [[linv[g][i] for i in range(r)] for g in range(len(vectors))]
    return basis, coords

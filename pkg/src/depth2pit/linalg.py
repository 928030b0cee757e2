"""Dense exact linear algebra over F_p on lists of int rows."""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def identity(k: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int) -> Matrix:
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for t, x in enumerate(row):
            if x:
                brow = b[t]
                for j in range(cols):
                    acc[j] += x * brow[j]
        out.append([v % p for v in acc])
    return out


def mat_vec(a: Sequence[Sequence[int]], v: Sequence[int], p: int) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) % p for row in a]


def mat_pow(a: Sequence[Sequence[int]], e: int, p: int) -> Matrix:
    result = identity(len(a))
    base = [list(r) for r in a]
    while e:
        if e & 1:
            result = mat_mul(result, base, p)
        e >>= 1
        if e:
            base = mat_mul(base, base, p)
    return result


def is_zero_matrix(a: Sequence[Sequence[int]]) -> bool:
    return all(not x for row in a for x in row)


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def rref(rows: Sequence[Sequence[int]], p: int) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form; zero rows dropped.

    Pivot search scans columns left to right and takes the lowest-index row
    with a nonzero entry.  Returns ``(nonzero rows, pivot columns)``.
    """
    m = [[x % p for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                ri = m[i]
                rr = m[r]
                m[i] = [(x - f * y) % p for x, y in zip(ri, rr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(rref(rows, p)[1])


def is_singular(a: Sequence[Sequence[int]], p: int) -> bool:
    return rank(a, p) < len(a)


def solve(a: Sequence[Sequence[int]], b: Sequence[int], p: int) -> list[int] | None:
    """One solution x of a x = b (free variables set to 0), or None."""
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(aug, p)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for row, c in zip(red, pivots):
        x[c] = row[ncols]
    return x


def inverse(a: Sequence[Sequence[int]], p: int) -> Matrix | None:
    k = len(a)
    aug = [list(row) + [1 if i == j else 0 for j in range(k)] for i, row in enumerate(a)]
    red, pivots = rref(aug, p)
    if pivots[:k] != list(range(k)) or len(red) < k:
        return None
    return [row[k:] for row in red]


def nullspace(a: Sequence[Sequence[int]], p: int) -> Matrix:
    """Basis of {x : a x = 0}, one vector per free column."""
    if not a:
        return []
    ncols = len(a[0])
    red, pivots = rref(a, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, c in zip(red, pivots):
            x[c] = (-row[f]) % p
        basis.append(x)
    return basis

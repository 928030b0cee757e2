"""Lowering passes between circuit IRs.

* ``sps_to_u2``: depth-3 circuit -> product of 2x2 upper-triangular linear
  matrices whose top-right entry is cert * f, where the certificate cert is a
  product of nonzero linear functions (``l_factors``).
* ``mask_offdiagonal`` / ``u2_to_sps``: the two directions of the PIT equivalence.
* ``homogenize_and_abp``: the lowered sequence as a width-2 planar ABP.
* ``ben_or_cleve``: fan-in-2 formula -> product of 3x3 transvections.
* ``local_ring_reduction``: depth-3 circuit -> depth-2 circuit over a local ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import AlgebraBasis, local_ring, y_element
from .circuits import (
    Abp,
    Add,
    DepthThreeCircuit,
    Formula,
    FormulaCircuit,
    Leaf,
    LinearMatrix,
    LinearMatrixSequence,
    Mul,
    abp_from_sequence,
    normalize_degree,
)
from .field import LinearFunction
from .pit import AlgebraTermCircuit

TOP_LEFT_MASK = ((1, 0), (0, 0))
BOTTOM_RIGHT_MASK = ((0, 0), (0, 1))


class NotUpperTriangular(ValueError):
    pass


class UnsupportedShape(ValueError):
    pass


@dataclass(frozen=True)
class LoweredU2:
    seq: LinearMatrixSequence
    l_factors: tuple[LinearFunction, ...]
    source_stats: tuple[int, int, int]  # (n, d, s)
    syntactic_zero: bool = False

    def size_bound(self) -> int:
        n, d, s = self.source_stats
        return (d + n) * 4 ** math.ceil(math.log2(s)) if s > 1 else d + n

    def within_bound(self) -> bool:
        return len(self.seq) <= self.size_bound()


@dataclass
class _Partial:
    # ``matrices`` multiply out to [[prod(top), prod(cert) * g], [0, prod(bottom)]]
    # where g is the partial sum handled so far
    matrices: list[LinearMatrix]
    top: list[LinearFunction] = field(default_factory=list)
    cert: list[LinearFunction] = field(default_factory=list)
    bottom: list[LinearFunction] = field(default_factory=list)


def _diag(p: int, a: LinearFunction | int, b: LinearFunction | int) -> LinearMatrix:
    return LinearMatrix.diagonal(p, [a, b])


def shear_factors(lf: LinearFunction) -> list[LinearMatrix]:
    """[[1, l], [0, 1]] as a product of single-term shears [[1, c*x_i], [0, 1]]."""
    p = lf.p
    return [LinearMatrix.from_rows(p, [[1, t], [0, 1]]) for t in lf.single_terms()]


def _summand(p: int, factors: Sequence[LinearFunction]) -> _Partial:
    *head, last = factors
    part = _Partial([])
    for lf in head:
        if lf == LinearFunction.const(p, 1):
            continue
        part.matrices.append(_diag(p, lf, 1))
        part.top.append(lf)
    part.matrices.extend(shear_factors(last))
    return part


def _merge(p: int, g: _Partial, h: _Partial) -> _Partial:
    # g-part * diag(u, w) * h-part, with u = cert_g * bottom_h and w = top_g * cert_h,
    # has top-right entry top_g cert_g bottom_h cert_h * (g + h)
    u = g.cert + h.bottom
    w = g.top + h.cert
    one = LinearFunction.const(p, 1)
    middle = [
        _diag(p, u[i] if i < len(u) else one, w[i] if i < len(w) else one) for i in range(max(len(u), len(w)))
    ]
    return _Partial(
        g.matrices + middle + h.matrices,
        top=u + g.top + h.top,
        cert=g.top + g.cert + h.cert + h.bottom,
        bottom=w + g.bottom + h.bottom,
    )


def sps_to_u2(c: DepthThreeCircuit) -> LoweredU2:
    """Lower a depth-3 circuit to a U_2 sequence with top-right entry cert * f."""
    c = normalize_degree(c, max(c.d, 1))
    p = c.p
    stats = (c.num_vars(), c.d, c.s)
    live = [prod for prod in c.products if not any(lf.is_zero() for lf in prod)]
    if not live:
        seq = LinearMatrixSequence(p, 2, (_diag(p, 1, 1),))
        return LoweredU2(seq, (), stats, syntactic_zero=True)
    parts = [_summand(p, prod) for prod in live]
    while len(parts) > 1:
        merged = [_merge(p, parts[i], parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            merged.append(parts[-1])
        parts = merged
    final = parts[0]
    seq = LinearMatrixSequence(p, 2, tuple(final.matrices))
    return LoweredU2(seq, tuple(final.cert), stats)


def mask_offdiagonal(lowered: LoweredU2) -> LinearMatrixSequence:
    """Select the top-right entry: product becomes [[0, cert*f], [0, 0]]."""
    s = lowered.seq
    return LinearMatrixSequence(s.p, 2, s.matrices, TOP_LEFT_MASK, BOTTOM_RIGHT_MASK)


def u2_to_sps(s: LinearMatrixSequence) -> tuple[DepthThreeCircuit, DepthThreeCircuit, DepthThreeCircuit]:
    """Entries (1,1), (2,2), (1,2) of an upper-triangular product as depth-3 circuits."""
    if s.k != 2:
        raise NotUpperTriangular(f"expected 2x2 matrices, got k={s.k}")
    if not s.is_upper_triangular():
        raise NotUpperTriangular("sequence has a nonzero entry below the diagonal")
    if s.left_mask is not None or s.right_mask is not None:
        raise ValueError("u2_to_sps expects an unmasked sequence")
    p = s.p
    a = [m.entries[0][0] for m in s.matrices]
    mid = [m.entries[0][1] for m in s.matrices]
    b = [m.entries[1][1] for m in s.matrices]
    top_left = DepthThreeCircuit(p, (tuple(a),))
    bottom_right = DepthThreeCircuit(p, (tuple(b),))
    off = tuple(tuple(a[:j]) + (mid[j],) + tuple(b[j + 1 :]) for j in range(len(s.matrices)))
    return top_left, bottom_right, DepthThreeCircuit(p, off)


def _homogeneous_shape(m: LinearMatrix) -> LinearMatrix:
    p = m.p
    (a, b), (c, d) = m.entries
    if not c.is_zero():
        raise UnsupportedShape("matrix is not upper triangular")
    if b.is_zero():
        return m.homogenize()
    one = LinearFunction.const(p, 1)
    if a == one and d == one and b.num_terms() == 1:
        return m.homogenize()
    raise UnsupportedShape(f"matrix [[{a}, {b}], [0, {d}]] is neither diagonal nor a single-term shear")


def homogenize_sequence(lowered: LoweredU2) -> LinearMatrixSequence:
    s = lowered.seq
    return LinearMatrixSequence(s.p, 2, tuple(_homogeneous_shape(m) for m in s.matrices))


def homogenize_and_abp(lowered: LoweredU2) -> Abp:
    """Width-2 planar ABP computing the z-homogenization of cert * f.

    Core gap j is the adjacency matrix of the j-th homogenized matrix; a
    single-vertex source feeds row 1 and a single-vertex sink reads column 2.
    """
    return abp_from_sequence(homogenize_sequence(lowered), 0, 1)


# ---------------------------------------------------------------------------
# Ben-Or and Cleve


BOC_TARGET = (2, 0)  # entry (3,1), zero-based


def _transvection(p: int, i: int, j: int, entry: LinearFunction) -> LinearMatrix:
    rows = [[LinearFunction.const(p, 1 if r == c else 0) for c in range(3)] for r in range(3)]
    rows[i][j] = entry
    return LinearMatrix(tuple(tuple(r) for r in rows))


def _boc(e: Formula, p: int, i: int, j: int, sign: int, out: list[LinearMatrix]):
    if isinstance(e, Leaf):
        if e.var is None:
            entry = LinearFunction.const(p, sign * e.c)
        else:
            entry = LinearFunction.var(p, e.var, sign * e.c)
        out.append(_transvection(p, i, j, entry))
    elif isinstance(e, Add):
        _boc(e.left, p, i, j, sign, out)
        _boc(e.right, p, i, j, sign, out)
    else:
        m = 3 - i - j
        _boc(e.right, p, m, j, -1, out)
        _boc(e.left, p, i, m, sign, out)
        _boc(e.right, p, m, j, 1, out)
        _boc(e.left, p, i, m, -sign, out)


def ben_or_cleve(e: Formula | FormulaCircuit, p: int | None = None) -> LinearMatrixSequence:
    """3x3 transvections whose product is I + E at entry (3,1); length <= 4^depth."""
    if isinstance(e, FormulaCircuit):
        p, e = e.p, e.root
    if p is None:
        raise ValueError("field modulus required")
    out: list[LinearMatrix] = []
    _boc(e, p, *BOC_TARGET, 1, out)
    return LinearMatrixSequence(p, 3, tuple(out))


def is_transvection(m: LinearMatrix) -> bool:
    """Identity plus at most one nonzero off-diagonal entry of the form c or c*x_i."""
    one = LinearFunction.const(m.p, 1)
    off = []
    for r in range(m.k):
        for c in range(m.k):
            e = m.entries[r][c]
            if r == c:
                if e != one:
                    return False
            elif not e.is_zero():
                off.append(e)
    return len(off) <= 1 and all(e.num_terms() == 1 for e in off)


# ---------------------------------------------------------------------------
# local ring reduction


def local_ring_reduction(c: DepthThreeCircuit) -> tuple[AlgebraBasis, AlgebraTermCircuit, list[tuple[int, int]]]:
    """Depth-2 circuit over F[y_1..y_s]/I whose product is f * y_1^d.

    Returns the algebra, the term circuit and the basis labels
    (``(i, a)`` for y_i^a, ``(0, 0)`` for 1).
    """
    c = normalize_degree(c, max(c.d, 1))
    p, s, d = c.p, c.s, c.d
    n = c.num_vars()
    basis, labels = local_ring(p, s, d)
    ys = [y_element(basis, labels, i) for i in range(1, s + 1)]
    terms = []
    for j in range(d):
        coeffs = []
        for v in range(n + 1):
            acc = [0] * basis.k
            for i in range(s):
                lf = c.products[i][j]
                a = lf.constant if v == 0 else lf.coeff(v)
                if a:
                    for t, y in enumerate(ys[i]):
                        acc[t] += a * y
            coeffs.append(tuple(x % p for x in acc))
        terms.append(tuple(coeffs))
    return basis, AlgebraTermCircuit(basis, tuple(terms), n), labels

"""Circuit intermediate representations and their expansion/evaluation semantics.

Four IRs are defined:

* :class:`Formula` -- fan-in-2 arithmetic formulas,
* :class:`DepthThreeCircuit` -- sums of products of linear functions,
* :class:`LinearMatrixSequence` -- ordered products of matrices with linear
  entries, i.e. depth-2 circuits over a matrix algebra,
* :class:`Abp` -- layered algebraic branching programs.

Every IR can be expanded to exact polynomials (bounded by ``cap`` monomials)
and evaluated numerically; the two must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .field import (
    ArityMismatch,
    ExpansionTooLarge,
    LinearFunction,
    SparsePoly,
    poly_mul,
)

DEFAULT_CAP = 10**6


def _check_cap(f: SparsePoly, cap: int | None) -> SparsePoly:
    if cap is not None and len(f) > cap:
        raise ExpansionTooLarge(f"expansion exceeds {cap} monomials")
    return f


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Leaf:
    """The constant ``c`` (var is None) or the term ``c * x_var``."""

    c: int
    var: int | None = None

    def depth(self) -> int:
        return 0


@dataclass(frozen=True)
class Add:
    left: "Formula"
    right: "Formula"

    def depth(self) -> int:
        return 1 + max(self.left.depth(), self.right.depth())


@dataclass(frozen=True)
class Mul:
    left: "Formula"
    right: "Formula"

    def depth(self) -> int:
        return 1 + max(self.left.depth(), self.right.depth())


Formula = Union[Leaf, Add, Mul]


def formula_to_poly(e: Formula, p: int) -> SparsePoly:
    if isinstance(e, Leaf):
        if e.var is None:
            return SparsePoly.const(p, e.c)
        return SparsePoly.var(p, e.var, e.c)
    left = formula_to_poly(e.left, p)
    right = formula_to_poly(e.right, p)
    return left + right if isinstance(e, Add) else left * right


def formula_eval(e: Formula, point: Sequence[int], p: int) -> int:
    if isinstance(e, Leaf):
        if e.var is None:
            return e.c % p
        if e.var > len(point):
            raise ArityMismatch(f"point too short for x{e.var}")
        return e.c * point[e.var - 1] % p
    a = formula_eval(e.left, point, p)
    b = formula_eval(e.right, point, p)
    return (a + b) % p if isinstance(e, Add) else a * b % p


def formula_num_vars(e: Formula) -> int:
    if isinstance(e, Leaf):
        return e.var or 0
    return max(formula_num_vars(e.left), formula_num_vars(e.right))


def formula_size(e: Formula) -> int:
    if isinstance(e, Leaf):
        return 1
    return 1 + formula_size(e.left) + formula_size(e.right)


@dataclass(frozen=True)
class FormulaCircuit:
    """A formula together with its field; the unit the parser returns."""

    p: int
    root: Formula

    def depth(self) -> int:
        return self.root.depth()

    def num_vars(self) -> int:
        return formula_num_vars(self.root)

    def uses_z(self) -> bool:
        return False

    def expand(self, cap: int | None = DEFAULT_CAP) -> SparsePoly:
        return _check_cap(formula_to_poly(self.root, self.p), cap)

    def evaluate(self, point: Sequence[int], z: int | None = None) -> int:
        return formula_eval(self.root, point, self.p)


# ---------------------------------------------------------------------------
# depth-3 circuits


@dataclass(frozen=True)
class DepthThreeCircuit:
    """sum_i prod_j l_ij; ``products[i][j]`` is l_ij.  An empty product is 1."""

    p: int
    products: tuple[tuple[LinearFunction, ...], ...]

    def __post_init__(self):
        products = tuple(tuple(prod) for prod in self.products)
        if not products:
            raise ValueError("a depth-3 circuit needs at least one product")
        for prod in products:
            for lf in prod:
                if lf.p != self.p:
                    raise ValueError("field mismatch in depth-3 circuit")
        object.__setattr__(self, "products", products)

    @property
    def s(self) -> int:
        return len(self.products)

    @property
    def d(self) -> int:
        return max(len(prod) for prod in self.products)

    def num_vars(self) -> int:
        return max((lf.num_vars() for prod in self.products for lf in prod), default=0)

    def uses_z(self) -> bool:
        return any(lf.uses_z() for prod in self.products for lf in prod)

    def is_uniform(self) -> bool:
        return len({len(prod) for prod in self.products}) == 1

    def normalize_degree(self) -> DepthThreeCircuit:
        return normalize_degree(self)

    def expand(self, cap: int | None = DEFAULT_CAP) -> SparsePoly:
        return expand_depth3(self, cap)

    def evaluate(self, point: Sequence[int], z: int | None = None) -> int:
        total = 0
        for prod in self.products:
            v = 1
            for lf in prod:
                v = v * lf.evaluate(point, z) % self.p
            total += v
        return total % self.p


def normalize_degree(c: DepthThreeCircuit, degree: int | None = None) -> DepthThreeCircuit:
    """Pad every product with the constant 1 up to the common (or given) degree."""
    d = c.d if degree is None else degree
    if d < c.d:
        raise ValueError(f"degree {degree} below circuit degree {c.d}")
    one = LinearFunction.const(c.p, 1)
    return DepthThreeCircuit(c.p, tuple(prod + (one,) * (d - len(prod)) for prod in c.products))


def expand_product(factors: Sequence[LinearFunction], p: int, cap: int | None = DEFAULT_CAP) -> SparsePoly:
    acc = SparsePoly.const(p, 1)
    for lf in factors:
        acc = poly_mul(acc, lf.to_poly(), cap)
    return acc


def expand_depth3(c: DepthThreeCircuit, cap: int | None = DEFAULT_CAP) -> SparsePoly:
    total = SparsePoly.zero(c.p)
    for prod in c.products:
        total = total + expand_product(prod, c.p, cap)
        _check_cap(total, cap)
    return total


# ---------------------------------------------------------------------------
# linear matrices


ConstMatrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class LinearMatrix:
    """k x k matrix whose entries are linear functions."""

    entries: tuple[tuple[LinearFunction, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(row) for row in self.entries)
        k = len(entries)
        if k == 0 or any(len(row) != k for row in entries):
            raise ValueError("linear matrix must be square and non-empty")
        object.__setattr__(self, "entries", entries)

    @property
    def k(self) -> int:
        return len(self.entries)

    @property
    def p(self) -> int:
        return self.entries[0][0].p

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[LinearFunction | int]]) -> LinearMatrix:
        return cls(
            tuple(
                tuple(e if isinstance(e, LinearFunction) else LinearFunction.const(p, e) for e in row)
                for row in rows
            )
        )

    @classmethod
    def diagonal(cls, p: int, diag: Sequence[LinearFunction | int]) -> LinearMatrix:
        k = len(diag)
        return cls.from_rows(p, [[diag[i] if i == j else 0 for j in range(k)] for i in range(k)])

    def is_upper_triangular(self) -> bool:
        return all(self.entries[i][j].is_zero() for i in range(self.k) for j in range(i))

    def is_diagonal(self) -> bool:
        return all(self.entries[i][j].is_zero() for i in range(self.k) for j in range(self.k) if i != j)

    def evaluate(self, point: Sequence[int], z: int | None = None) -> list[list[int]]:
        return [[e.evaluate(point, z) for e in row] for row in self.entries]

    def homogenize(self) -> LinearMatrix:
        return LinearMatrix(tuple(tuple(e.homogenize() for e in row) for row in self.entries))

    def num_vars(self) -> int:
        return max(e.num_vars() for row in self.entries for e in row)

    def uses_z(self) -> bool:
        return any(e.uses_z() for row in self.entries for e in row)


@dataclass(frozen=True)
class LinearMatrixSequence:
    """The depth-2 circuit ``left_mask * M_1 * ... * M_t * right_mask``.

    Masks are optional constant k x k matrices.
    """

    p: int
    k: int
    matrices: tuple[LinearMatrix, ...]
    left_mask: ConstMatrix | None = None
    right_mask: ConstMatrix | None = None

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(self.matrices))
        if not self.matrices:
            raise ValueError("sequence must contain at least one matrix")
        for m in self.matrices:
            if m.k != self.k:
                raise ValueError(f"matrix of size {m.k} in a k={self.k} sequence")
            if m.p != self.p:
                raise ValueError("field mismatch in sequence")
        for name in ("left_mask", "right_mask"):
            mask = getattr(self, name)
            if mask is not None:
                mask = tuple(tuple(x % self.p for x in row) for row in mask)
                if len(mask) != self.k or any(len(r) != self.k for r in mask):
                    raise ValueError(f"{name} has wrong shape")
                object.__setattr__(self, name, mask)

    def __len__(self) -> int:
        return len(self.matrices)

    def is_upper_triangular(self) -> bool:
        return all(m.is_upper_triangular() for m in self.matrices)

    def num_vars(self) -> int:
        return max(m.num_vars() for m in self.matrices)

    def uses_z(self) -> bool:
        return any(m.uses_z() for m in self.matrices)

    def expand(self, cap: int | None = DEFAULT_CAP) -> list[list[SparsePoly]]:
        return expand_sequence(self, cap)

    def evaluate(self, point: Sequence[int], z: int | None = None) -> list[list[int]]:
        return eval_sequence(self, point, z)


def _const_grid(p: int, m: Sequence[Sequence[int]]) -> list[list[SparsePoly]]:
    return [[SparsePoly.const(p, x) for x in row] for row in m]


def _grid_times_linear(
    acc: list[list[SparsePoly]], m: LinearMatrix, p: int, cap: int | None
) -> list[list[SparsePoly]]:
    k = m.k
    polys = [[e.to_poly() if not e.is_zero() else None for e in row] for row in m.entries]
    out = []
    for row in acc:
        new_row = []
        for j in range(k):
            total = SparsePoly.zero(p)
            for t in range(k):
                if row[t] and polys[t][j] is not None:
                    total = total + poly_mul(row[t], polys[t][j], cap)
            new_row.append(_check_cap(total, cap))
        out.append(new_row)
    return out


def _grid_times_const(acc: list[list[SparsePoly]], m: Sequence[Sequence[int]], p: int) -> list[list[SparsePoly]]:
    k = len(m)
    out = []
    for row in acc:
        new_row = []
        for j in range(k):
            total = SparsePoly.zero(p)
            for t in range(k):
                if m[t][j] and row[t]:
                    total = total + row[t].scale(m[t][j])
            new_row.append(total)
        out.append(new_row)
    return out


def expand_sequence(s: LinearMatrixSequence, cap: int | None = DEFAULT_CAP) -> list[list[SparsePoly]]:
    """Exact symbolic product, left to right, masks applied."""
    p, k = s.p, s.k
    if s.left_mask is not None:
        acc = _const_grid(p, s.left_mask)
    else:
        acc = _const_grid(p, [[1 if i == j else 0 for j in range(k)] for i in range(k)])
    for m in s.matrices:
        acc = _grid_times_linear(acc, m, p, cap)
    if s.right_mask is not None:
        acc = _grid_times_const(acc, s.right_mask, p)
    return acc


def eval_sequence(s: LinearMatrixSequence, point: Sequence[int], z: int | None = None) -> list[list[int]]:
    p, k = s.p, s.k
    if s.left_mask is not None:
        acc = [list(r) for r in s.left_mask]
    else:
        acc = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    for m in s.matrices:
        acc = _num_mul(acc, m.evaluate(point, z), p)
    if s.right_mask is not None:
        acc = _num_mul(acc, s.right_mask, p)
    return acc


def _num_mul(a, b, p):
    k = len(b[0])
    return [[sum(row[t] * b[t][j] for t in range(len(b))) % p for j in range(k)] for row in a]


def partial_product_degrees(s: LinearMatrixSequence, cap: int | None = DEFAULT_CAP) -> list[int]:
    """Max total degree of each suffix product P_l = M_l ... M_t, for l = 1..t.

    Masks are not part of the partial products.  An all-zero suffix has
    degree -1.
    """
    p, k = s.p, s.k
    acc = None
    degrees = []
    for m in reversed(s.matrices):
        polys = [[e.to_poly() for e in row] for row in m.entries]
        if acc is None:
            acc = polys
        else:
            acc = [
                [
                    _check_cap(
                        sum((poly_mul(polys[i][t], acc[t][j], cap) for t in range(k) if polys[i][t] and acc[t][j]),
                            SparsePoly.zero(p)),
                        cap,
                    )
                    for j in range(k)
                ]
                for i in range(k)
            ]
        degrees.append(max(e.degree() for row in acc for e in row))
    degrees.reverse()
    return degrees


def is_degree_restricted(s: LinearMatrixSequence, m: int, cap: int | None = DEFAULT_CAP) -> bool:
    return all(d <= m for d in partial_product_degrees(s, cap))


# ---------------------------------------------------------------------------
# algebraic branching programs


Edge = tuple[int, int, LinearFunction]


@dataclass(frozen=True)
class Abp:
    """Layered DAG; ``edges[g]`` joins level g to level g+1.

    Core labels are homogeneous linear forms.  Constant labels are accepted
    only on gaps touching the single-vertex source or sink level, where they
    act as row/column selectors.
    """

    p: int
    levels: tuple[int, ...]
    edges: tuple[tuple[Edge, ...], ...]

    def __post_init__(self):
        levels = tuple(self.levels)
        edges = tuple(tuple(g) for g in self.edges)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "edges", edges)
        if len(levels) < 2:
            raise ValueError("an ABP needs at least two levels")
        if levels[0] != 1 or levels[-1] != 1:
            raise ValueError("source and sink levels must have exactly one vertex")
        if len(edges) != len(levels) - 1:
            raise ValueError(f"{len(levels)} levels need {len(levels) - 1} edge gaps, got {len(edges)}")
        for g, gap in enumerate(edges):
            for u, v, lf in gap:
                if not (0 <= u < levels[g] and 0 <= v < levels[g + 1]):
                    raise ValueError(f"edge ({u},{v}) out of range at gap {g}")
                if lf.p != self.p:
                    raise ValueError("field mismatch in ABP label")
                terminal = g == 0 or g == len(edges) - 1
                if not lf.is_homogeneous() and not (terminal and lf.is_constant()):
                    raise ValueError(f"label {lf} at gap {g} is not homogeneous")

    @property
    def degree(self) -> int:
        return len(self.levels) - 1

    @property
    def width(self) -> int:
        return max(self.levels)

    def core_width(self) -> int:
        inner = self.levels[1:-1]
        return max(inner) if inner else 1

    def num_vars(self) -> int:
        return max((lf.num_vars() for gap in self.edges for _, _, lf in gap), default=0)

    def uses_z(self) -> bool:
        return any(lf.uses_z() for gap in self.edges for _, _, lf in gap)

    def is_planar(self) -> bool:
        """Level-planarity under the stored vertex order: no two edges of a gap cross."""
        for gap in self.edges:
            pairs = [(u, v) for u, v, _ in gap]
            for a in range(len(pairs)):
                u1, v1 = pairs[a]
                for b in range(a + 1, len(pairs)):
                    u2, v2 = pairs[b]
                    if (u1 - u2) * (v1 - v2) < 0:
                        return False
        return True

    def gap_kind(self, g: int) -> str:
        """Classify a 2x2 gap as 'parallel', 'shear' or 'other'.

        'parallel': edges only 0->0 and 1->1.  'shear': both parallel edges
        plus a single 0->1 edge.
        """
        pairs = {(u, v) for u, v, _ in self.edges[g]}
        if self.levels[g] != 2 or self.levels[g + 1] != 2:
            return "other"
        if pairs <= {(0, 0), (1, 1)}:
            return "parallel"
        if pairs == {(0, 0), (1, 1), (0, 1)}:
            return "shear"
        return "other"

    def expand(self, cap: int | None = DEFAULT_CAP) -> SparsePoly:
        return expand_abp(self, cap)

    def evaluate(self, point: Sequence[int], z: int | None = None) -> int:
        return eval_abp(self, point, z)


def eval_abp(a: Abp, point: Sequence[int], z: int | None = None) -> int:
    """Path sum via level-by-level vector-matrix products."""
    p = a.p
    vec = [1]
    for g, gap in enumerate(a.edges):
        nxt = [0] * a.levels[g + 1]
        for u, v, lf in gap:
            if vec[u]:
                nxt[v] = (nxt[v] + vec[u] * lf.evaluate(point, z)) % p
        vec = nxt
    return vec[0]


def expand_abp(a: Abp, cap: int | None = DEFAULT_CAP) -> SparsePoly:
    p = a.p
    vec = [SparsePoly.const(p, 1)]
    for g, gap in enumerate(a.edges):
        nxt = [SparsePoly.zero(p) for _ in range(a.levels[g + 1])]
        for u, v, lf in gap:
            if vec[u]:
                nxt[v] = _check_cap(nxt[v] + poly_mul(vec[u], lf.to_poly(), cap), cap)
        vec = nxt
    return vec[0]


def abp_from_sequence(s: LinearMatrixSequence, row: int, col: int) -> Abp:
    """ABP whose path sum is entry (row, col) of the unmasked product.

    Each matrix becomes the adjacency of one gap; a source with a single
    weight-1 edge into ``row`` and a sink fed only from ``col`` select the entry.
    """
    p, k = s.p, s.k
    one = LinearFunction.const(p, 1)
    levels = [1] + [k] * (len(s.matrices) + 1) + [1]
    edges: list[tuple[Edge, ...]] = [((0, row, one),)]
    for m in s.matrices:
        edges.append(
            tuple((u, v, m.entries[u][v]) for u in range(k) for v in range(k) if not m.entries[u][v].is_zero())
        )
    edges.append(((col, 0, one),))
    return Abp(p, tuple(levels), tuple(edges))

"""Finite-dimensional associative algebras over F_p given by structure constants.

Elements are tuples of coordinates with respect to the basis ``e_1 .. e_k``.
``structure[i][j]`` holds the coordinates of ``e_i * e_j``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from . import linalg

Element = tuple[int, ...]


class ValidationError(ValueError):
    pass


class NotAssociative(ValidationError):
    def __init__(self, i: int, j: int, m: int):
        super().__init__(f"(e{i + 1} e{j + 1}) e{m + 1} != e{i + 1} (e{j + 1} e{m + 1})")
        self.triple = (i, j, m)


class BadIdentity(ValidationError):
    def __init__(self, i: int):
        super().__init__(f"identity does not act as a unit on e{i + 1}")
        self.index = i


class DimensionMismatch(ValueError):
    pass


class NotCommutative(ValueError):
    pass


class NotAZeroDivisor(ValueError):
    pass


class NoIdempotentFound(RuntimeError):
    pass


class NotIdempotent(ValueError):
    pass


class TrivialIdempotent(ValueError):
    pass


class ElementClass(enum.Enum):
    INVERTIBLE = "invertible"
    NILPOTENT = "nilpotent"
    ZERO_DIVISOR = "zero-divisor-non-nilpotent"


@dataclass(frozen=True)
class AlgebraBasis:
    p: int
    structure: tuple[tuple[Element, ...], ...]
    identity: Element

    def __post_init__(self):
        k = len(self.identity)
        p = self.p
        structure = tuple(tuple(tuple(c % p for c in v) for v in row) for row in self.structure)
        if len(structure) != k or any(len(row) != k for row in structure):
            raise DimensionMismatch(f"structure table must be {k}x{k}")
        if any(len(v) != k for row in structure for v in row):
            raise DimensionMismatch("structure vectors must have length k")
        object.__setattr__(self, "structure", structure)
        object.__setattr__(self, "identity", tuple(c % p for c in self.identity))

    @property
    def k(self) -> int:
        return len(self.identity)

    @cached_property
    def commutative(self) -> bool:
        k = self.k
        return all(self.structure[i][j] == self.structure[j][i] for i in range(k) for j in range(i + 1, k))

    # element helpers
    def zero(self) -> Element:
        return (0,) * self.k

    def one(self) -> Element:
        return self.identity

    def basis_element(self, i: int) -> Element:
        return tuple(1 if j == i else 0 for j in range(self.k))

    def element(self, coords: Sequence[int]) -> Element:
        if len(coords) != self.k:
            raise DimensionMismatch(f"expected {self.k} coordinates, got {len(coords)}")
        return tuple(c % self.p for c in coords)

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % self.p for a, b in zip(x, y))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % self.p for a, b in zip(x, y))

    def scale(self, x: Element, c: int) -> Element:
        return tuple(a * c % self.p for a in x)

    def mul(self, x: Element, y: Element) -> Element:
        return algebra_mul(self, x, y)

    def pow(self, x: Element, t: int) -> Element:
        return algebra_pow(self, x, t)

    def is_zero(self, x: Element) -> bool:
        return not any(x)


def algebra_mul(b: AlgebraBasis, x: Element, y: Element) -> Element:
    k, p = b.k, b.p
    if len(x) != k or len(y) != k:
        raise DimensionMismatch("element length does not match algebra dimension")
    acc = [0] * k
    st = b.structure
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = st[i]
        for j, yj in enumerate(y):
            if not yj:
                continue
            c = xi * yj
            for m, g in enumerate(row[j]):
                if g:
                    acc[m] += c * g
    return tuple(a % p for a in acc)


def algebra_pow(b: AlgebraBasis, x: Element, t: int) -> Element:
    if t < 0:
        raise ValueError("negative exponent")
    result = b.identity
    base = x
    while t:
        if t & 1:
            result = algebra_mul(b, result, base)
        t >>= 1
        if t:
            base = algebra_mul(b, base, base)
    return result


def validate_basis(b: AlgebraBasis) -> AlgebraBasis:
    """Check associativity and the two-sided identity; O(k^4) field operations.

    Returns ``b`` unchanged on success so calls can be chained.
    """
    k = b.k
    one = b.identity
    for i in range(k):
        ei = b.basis_element(i)
        if algebra_mul(b, one, ei) != ei or algebra_mul(b, ei, one) != ei:
            raise BadIdentity(i)
    for i in range(k):
        for j in range(k):
            eij = b.structure[i][j]
            for m in range(k):
                lhs = algebra_mul(b, eij, b.basis_element(m))
                rhs = algebra_mul(b, b.basis_element(i), b.structure[j][m])
                if lhs != rhs:
                    raise NotAssociative(i, j, m)
    return b


def regular_rep(b: AlgebraBasis, a: Element) -> linalg.Matrix:
    """Matrix of left multiplication by ``a``; column j holds a * e_j."""
    if len(a) != b.k:
        raise DimensionMismatch("element length does not match algebra dimension")
    cols = [algebra_mul(b, a, b.basis_element(j)) for j in range(b.k)]
    return linalg.transpose(cols)


def classify(b: AlgebraBasis, a: Element) -> ElementClass:
    m = regular_rep(b, a)
    if not linalg.is_singular(m, b.p):
        return ElementClass.INVERTIBLE
    if linalg.is_zero_matrix(linalg.mat_pow(m, b.k, b.p)):
        return ElementClass.NILPOTENT
    return ElementClass.ZERO_DIVISOR


def inverse(b: AlgebraBasis, a: Element) -> Element | None:
    """Solve rep(a) c = 1; None when a is not a unit."""
    sol = linalg.solve(regular_rep(b, a), b.identity, b.p)
    if sol is None:
        return None
    c = tuple(sol)
    return c if algebra_mul(b, a, c) == b.identity else None


def span_basis(b: AlgebraBasis, vectors: Sequence[Element]) -> tuple[linalg.Matrix, list[int]]:
    """Reduced row-echelon basis of the span of ``vectors``."""
    return linalg.rref(vectors, b.p)


def find_idempotent(b: AlgebraBasis, z: Element) -> Element:
    """A nontrivial idempotent in the ideal generated by ``z``.

    For t = 1, 2, ... the identity element of the ideal R z^t is sought by
    solving (sum nu_j b_j) b_i = b_i over a basis b_1.. of R z^t.
    """
    if not b.commutative:
        raise NotCommutative("idempotent search requires a commutative algebra")
    cls = classify(b, z)
    if cls is not ElementClass.ZERO_DIVISOR:
        raise NotAZeroDivisor(f"element is {cls.value}")
    k, p = b.k, b.p
    for t in range(1, k):
        w = algebra_pow(b, z, t)
        rows, _ = span_basis(b, [algebra_mul(b, b.basis_element(i), w) for i in range(k)])
        kk = len(rows)
        basis = [tuple(r) for r in rows]
        # products[j][i] = b_j * b_i
        products = [[algebra_mul(b, bj, bi) for bi in basis] for bj in basis]
        eqs = []
        rhs = []
        for i in range(kk):
            for coord in range(k):
                eqs.append([products[j][i][coord] for j in range(kk)])
                rhs.append(basis[i][coord])
        nu = linalg.solve(eqs, rhs, p)
        if nu is None:
            continue
        v = tuple(sum(nu[j] * basis[j][c] for j in range(kk)) % p for c in range(k))
        if algebra_mul(b, v, v) == v and v != b.zero() and v != b.identity:
            return v
    raise NoIdempotentFound(f"no idempotent found for z={z} in algebra of dimension {k}")


@dataclass(frozen=True)
class SubAlgebra:
    """The component R v with its own basis, structure constants and identity."""

    algebra: AlgebraBasis
    embedding: tuple[Element, ...]  # sub-basis vectors in parent coordinates
    pivots: tuple[int, ...]
    generator: Element  # the idempotent v (or 1 - v)

    def project(self, parent: AlgebraBasis, x: Element) -> Element:
        """Coordinates of x * generator in the sub-basis."""
        y = algebra_mul(parent, x, self.generator)
        return tuple(y[c] for c in self.pivots)

    def lift(self, coords: Sequence[int], p: int) -> Element:
        k = len(self.embedding[0]) if self.embedding else 0
        return tuple(sum(c * vec[j] for c, vec in zip(coords, self.embedding)) % p for j in range(k))


@dataclass(frozen=True)
class SplitResult:
    v: Element
    parent: AlgebraBasis
    left: SubAlgebra
    right: SubAlgebra

    def project_left(self, x: Element) -> Element:
        return self.left.project(self.parent, x)

    def project_right(self, x: Element) -> Element:
        return self.right.project(self.parent, x)

    def lift_left(self, coords: Sequence[int]) -> Element:
        return self.left.lift(coords, self.parent.p)

    def lift_right(self, coords: Sequence[int]) -> Element:
        return self.right.lift(coords, self.parent.p)


def _component(b: AlgebraBasis, gen: Element) -> SubAlgebra:
    rows, pivots = span_basis(b, [algebra_mul(b, b.basis_element(i), gen) for i in range(b.k)])
    embedding = tuple(tuple(r) for r in rows)
    kk = len(embedding)

    def coords(y: Element) -> Element:
        return tuple(y[c] for c in pivots)

    structure = tuple(
        tuple(coords(algebra_mul(b, embedding[i], embedding[j])) for j in range(kk)) for i in range(kk)
    )
    sub = AlgebraBasis(b.p, structure, coords(gen))
    return SubAlgebra(sub, embedding, tuple(pivots), gen)


def split(b: AlgebraBasis, v: Element) -> SplitResult:
    """Decompose a commutative algebra as R v (+) R (1 - v)."""
    if not b.commutative:
        raise NotCommutative("splitting requires a commutative algebra")
    if algebra_mul(b, v, v) != tuple(v):
        raise NotIdempotent("v * v != v")
    if v == b.zero() or v == b.identity:
        raise TrivialIdempotent("v must differ from 0 and 1")
    w = b.sub(b.identity, v)
    left = _component(b, tuple(v))
    right = _component(b, w)
    if left.algebra.k + right.algebra.k != b.k:
        raise RuntimeError("component dimensions do not add up")
    return SplitResult(tuple(v), b, left, right)


# ---------------------------------------------------------------------------
# constructors for common algebras


def field_algebra(p: int) -> AlgebraBasis:
    return AlgebraBasis(p, (((1,),),), (1,))


def quotient_algebra(p: int, modulus: Sequence[int]) -> AlgebraBasis:
    """F[y]/(g) for monic g; ``modulus`` lists g's coefficients from y^0 up, leading 1 included.

    Basis 1, y, ..., y^(m-1).
    """
    g = [c % p for c in modulus]
    if g[-1] != 1:
        raise ValueError("modulus must be monic")
    m = len(g) - 1
    # reduce y^e for e < 2m-1
    powers = []
    cur = [1] + [0] * (m - 1)
    for _ in range(2 * m - 1):
        powers.append(tuple(cur))
        # multiply by y
        top = cur[-1]
        cur = [0] + cur[:-1]
        cur = [(c - top * g[i]) % p for i, c in enumerate(cur)]
    structure = tuple(tuple(powers[i + j] for j in range(m)) for i in range(m))
    return AlgebraBasis(p, structure, powers[0])


def direct_product(a: AlgebraBasis, b: AlgebraBasis) -> AlgebraBasis:
    """A x B with basis (e_i, 0) followed by (0, f_j)."""
    if a.p != b.p:
        raise ValueError("field mismatch")
    ka, kb = a.k, b.k
    zero_a, zero_b = (0,) * ka, (0,) * kb
    rows = []
    for i in range(ka + kb):
        row = []
        for j in range(ka + kb):
            if i < ka and j < ka:
                row.append(a.structure[i][j] + zero_b)
            elif i >= ka and j >= ka:
                row.append(zero_a + b.structure[i - ka][j - ka])
            else:
                row.append(zero_a + zero_b)
        rows.append(tuple(row))
    return AlgebraBasis(a.p, tuple(rows), a.identity + b.identity)


def change_basis(b: AlgebraBasis, new_basis: Sequence[Element]) -> tuple[AlgebraBasis, linalg.Matrix]:
    """Re-express the algebra in the basis ``new_basis`` (given in old coordinates).

    Returns the new algebra and the matrix converting old coordinates to new ones.
    """
    p, k = b.p, b.k
    cols = linalg.transpose([list(v) for v in new_basis])  # old = cols * new
    to_new = linalg.inverse(cols, p)
    if to_new is None:
        raise ValueError("new basis is not invertible")

    def conv(x: Element) -> Element:
        return tuple(linalg.mat_vec(to_new, x, p))

    structure = tuple(
        tuple(conv(algebra_mul(b, tuple(new_basis[i]), tuple(new_basis[j]))) for j in range(k)) for i in range(k)
    )
    return AlgebraBasis(p, structure, conv(b.identity)), to_new


def upper_triangular_2x2(p: int) -> AlgebraBasis:
    """U_2(F) with basis E11, E12, E22."""
    units = {(0, 0): 0, (0, 1): 1, (1, 1): 2}
    structure = []
    for a in units:
        row = []
        for c in units:
            vec = [0, 0, 0]
            if a[1] == c[0]:
                vec[units[(a[0], c[1])]] = 1
            row.append(tuple(vec))
        structure.append(tuple(row))
    return AlgebraBasis(p, tuple(structure), (1, 0, 1))


def local_ring(p: int, s: int, d: int) -> tuple[AlgebraBasis, list[tuple[int, int]]]:
    """F[y_1..y_s] / (y_i y_j (i<j), y_1^d - y_i^d).

    Basis 1, y_1..y_1^d, then y_i..y_i^(d-1) for i = 2..s.  Returns the algebra
    and the list of ``(variable, exponent)`` labels of its basis, with (0, 0)
    standing for 1.
    """
    if s < 1 or d < 1:
        raise ValueError("need s >= 1 and d >= 1")
    labels = [(0, 0)] + [(1, a) for a in range(1, d + 1)]
    for i in range(2, s + 1):
        labels += [(i, a) for a in range(1, d)]
    index = {lab: n for n, lab in enumerate(labels)}
    k = len(labels)

    def monomial(i: int, a: int) -> Element:
        vec = [0] * k
        if i == 0 or a == 0:
            vec[0] = 1
        elif a > d:
            pass
        elif a == d:
            vec[index[(1, d)]] = 1
        else:
            vec[index[(i, a)]] = 1
        return tuple(vec)

    zero = (0,) * k
    structure = []
    for i, a in labels:
        row = []
        for j, b in labels:
            if i == 0:
                row.append(monomial(j, b))
            elif j == 0:
                row.append(monomial(i, a))
            elif i != j:
                row.append(zero)
            else:
                row.append(monomial(i, a + b))
        structure.append(tuple(row))
    return AlgebraBasis(p, tuple(structure), monomial(0, 0)), labels


def y_element(b: AlgebraBasis, labels: Sequence[tuple[int, int]], i: int) -> Element:
    """The generator y_i of a ring built by :func:`local_ring`."""
    d = max(a for v, a in labels if v == 1)
    vec = [0] * b.k
    if d == 1 or i == 1:
        vec[labels.index((1, 1))] = 1
    else:
        vec[labels.index((i, 1))] = 1
    return tuple(vec)


def trace(b: AlgebraBasis, a: Element) -> int:
    m = regular_rep(b, a)
    return sum(m[i][i] for i in range(b.k)) % b.p


def nilradical(b: AlgebraBasis) -> list[Element]:
    """Basis of the nilpotent elements of a commutative algebra.

    Computed as the radical of the trace form Tr(rep(x y)), which equals the
    nilradical when p exceeds the dimension.  Every returned vector is
    checked to be nilpotent.
    """
    if not b.commutative:
        raise NotCommutative("nilradical is computed for commutative algebras only")
    if b.p <= b.k:
        raise ValueError("trace-form nilradical needs p > dim")
    k = b.k
    form = [[trace(b, b.structure[i][j]) for j in range(k)] for i in range(k)]
    vecs = [tuple(v) for v in linalg.nullspace(form, b.p)]
    for v in vecs:
        if classify(b, v) is not ElementClass.NILPOTENT:
            raise RuntimeError(f"trace-form radical element {v} is not nilpotent")
    return vecs

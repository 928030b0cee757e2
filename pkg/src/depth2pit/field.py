"""Exact arithmetic over prime fields: scalars, linear functions, sparse polynomials.

Field elements are plain ints kept in ``[0, p)``.  Polynomials pack each
monomial's exponent vector into a single int (``BITS`` bits per variable), so
monomial multiplication is integer addition.  Variable 0 is reserved for the
homogenizing variable ``z``; ordinary variables are ``x1, x2, ...``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

DEFAULT_PRIME = 2147483647

BITS = 16
_MASK = (1 << BITS) - 1
MAX_DEGREE = _MASK


class ZeroInverse(ZeroDivisionError):
    pass


class ArityMismatch(ValueError):
    pass


class ExpansionTooLarge(RuntimeError):
    pass


class Inconsistent(ValueError):
    """Raised when a system of linear equations has no solution (1 lies in the ideal)."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """The prime field F_p."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def __call__(self, a: int) -> int:
        return a % self.p

    def inv(self, a: int) -> int:
        return field_inverse(a, self.p)

    def signed(self, a: int) -> int:
        """Symmetric representative, used when printing."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a


def field_inverse(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


# ---------------------------------------------------------------------------
# monomial packing


def pack(exps: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > MAX_DEGREE:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (BITS * i)
    return key


def unpack(key: int) -> tuple[int, ...]:
    """Exponent vector (index 0 is z) with trailing zeros trimmed."""
    out = []
    while key:
        out.append(key & _MASK)
        key >>= BITS
    return tuple(out)


def var_key(i: int) -> int:
    return 1 << (BITS * i)


def key_degree(key: int) -> int:
    d = 0
    while key:
        d += key & _MASK
        key >>= BITS
    return d


def _order_key(key: int):
    # graded lex, x1 > x2 > ... > xn > z
    exps = unpack(key)
    return (-sum(exps), tuple(-e for e in exps[1:]), -(exps[0] if exps else 0))


def var_name(i: int) -> str:
    return "z" if i == 0 else f"x{i}"


def _monomial_str(key: int) -> str:
    parts = []
    exps = unpack(key)
    for i in list(range(1, len(exps))) + [0]:
        if i < len(exps) and exps[i]:
            e = exps[i]
            parts.append(var_name(i) if e == 1 else f"{var_name(i)}^{e}")
    return "*".join(parts)


def format_terms(terms: Iterable[tuple[int, int]], p: int) -> str:
    """Render (packed monomial, coeff) pairs in the canonical text form."""
    out = []
    for key, c in sorted(terms, key=lambda t: _order_key(t[0])):
        c = c - p if c > p // 2 else c
        neg = c < 0
        c = abs(c)
        mono = _monomial_str(key)
        if not mono:
            body = str(c)
        elif c == 1:
            body = mono
        else:
            body = f"{c}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out) if out else "0"


# ---------------------------------------------------------------------------


class SparsePoly:
    """Immutable multivariate polynomial over F_p.

    ``terms`` maps packed monomials to nonzero coefficients in ``[0, p)``; the
    zero polynomial has no terms.
    """

    __slots__ = ("p", "terms", "_hash")

    def __init__(self, p: int, terms: Mapping[int, int] | None = None, *, _clean: bool = False):
        self.p = p
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            self.terms = {k: c % p for k, c in terms.items() if c % p}
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, p: int) -> SparsePoly:
        return cls(p)

    @classmethod
    def const(cls, p: int, c: int) -> SparsePoly:
        return cls(p, {0: c})

    @classmethod
    def var(cls, p: int, i: int, c: int = 1) -> SparsePoly:
        return cls(p, {var_key(i): c})

    @classmethod
    def from_exponents(cls, p: int, items: Iterable[tuple[Sequence[int], int]]) -> SparsePoly:
        terms: dict[int, int] = {}
        for exps, c in items:
            k = pack(exps)
            terms[k] = (terms.get(k, 0) + c) % p
        return cls(p, terms)

    # inspection
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = SparsePoly.const(self.p, other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, frozenset(self.terms.items())))
        return self._hash

    def monomials(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """Yield (exponent vector, coefficient) in graded-lex order."""
        for key in sorted(self.terms, key=_order_key):
            yield unpack(key), self.terms[key]

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((key_degree(k) for k in self.terms), default=-1)

    def num_vars(self) -> int:
        """Largest ordinary variable index occurring (0 if none)."""
        return max((len(unpack(k)) - 1 for k in self.terms), default=0)

    def uses_z(self) -> bool:
        return any(k & _MASK for k in self.terms)

    def constant_term(self) -> int:
        return self.terms.get(0, 0)

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(pack(exps), 0)

    def leading_term(self) -> tuple[tuple[int, ...], int]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = min(self.terms, key=_order_key)
        return unpack(key), self.terms[key]

    # arithmetic
    def _check(self, other: SparsePoly):
        if self.p != other.p:
            raise ValueError(f"field mismatch: {self.p} vs {other.p}")

    def _coerce(self, other) -> SparsePoly:
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return SparsePoly.const(self.p, other)
        if isinstance(other, LinearFunction):
            return other.to_poly()
        return NotImplemented

    def __add__(self, other) -> SparsePoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        terms = dict(self.terms)
        for k, c in other.terms.items():
            v = (terms.get(k, 0) + c) % p
            if v:
                terms[k] = v
            else:
                terms.pop(k, None)
        return SparsePoly(p, terms, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> SparsePoly:
        p = self.p
        return SparsePoly(p, {k: p - c for k, c in self.terms.items()}, _clean=True)

    def __sub__(self, other) -> SparsePoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> SparsePoly:
        return (-self) + other

    def scale(self, c: int) -> SparsePoly:
        c %= self.p
        if c == 0:
            return SparsePoly(self.p)
        p = self.p
        return SparsePoly(p, {k: v * c % p for k, v in self.terms.items()}, _clean=True)

    def __mul__(self, other) -> SparsePoly:
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> SparsePoly:
        if e < 0:
            raise ValueError("negative exponent")
        result = SparsePoly.const(self.p, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # evaluation and structure
    def evaluate(self, point: Sequence[int], z: int | None = None) -> int:
        return poly_eval(self, point, z)

    def homogeneous_part(self, d: int) -> SparsePoly:
        return homogeneous_part(self, d)

    def homogenize(self, degree: int | None = None) -> SparsePoly:
        """Multiply each monomial by the power of z lifting it to ``degree``."""
        if degree is None:
            degree = self.degree()
        terms = {}
        for k, c in self.terms.items():
            gap = degree - key_degree(k)
            if gap < 0:
                raise ValueError(f"degree {degree} below polynomial degree")
            terms[k + gap] = c
        return SparsePoly(self.p, terms, _clean=True)

    def substitute(self, mapping: Mapping[int, SparsePoly]) -> SparsePoly:
        """Replace variable i by ``mapping[i]`` for every i in the mapping."""
        p = self.p
        powers: dict[tuple[int, int], SparsePoly] = {}
        acc: dict[int, int] = {}
        for key, c in self.terms.items():
            exps = unpack(key)
            rest = list(exps)
            factor = SparsePoly.const(p, c)
            for i, e in enumerate(exps):
                if e and i in mapping:
                    rest[i] = 0
                    if (i, e) not in powers:
                        powers[(i, e)] = mapping[i] ** e
                    factor = factor * powers[(i, e)]
            rkey = pack(rest)
            for k, v in factor.terms.items():
                nk = k + rkey
                acc[nk] = (acc.get(nk, 0) + v) % p
        result = SparsePoly(p, acc)
        return result

    def __repr__(self) -> str:
        return f"SparsePoly(p={self.p}, {self})"

    def __str__(self) -> str:
        return format_terms(self.terms.items(), self.p)


def poly_mul(a: SparsePoly, b: SparsePoly, cap: int | None = None) -> SparsePoly:
    a._check(b)
    if not a.terms or not b.terms:
        return SparsePoly(a.p)
    if a.degree() + b.degree() > MAX_DEGREE:
        raise OverflowError("degree exceeds packed exponent range")
    if len(a.terms) < len(b.terms):
        a, b = b, a
    p = a.p
    acc: dict[int, int] = {}
    get = acc.get
    big = a.terms.items()
    for kb, cb in b.terms.items():
        for ka, ca in big:
            k = ka + kb
            acc[k] = get(k, 0) + ca * cb
        if cap is not None and len(acc) > cap:
            raise ExpansionTooLarge(f"more than {cap} monomials")
    terms = {}
    for k, v in acc.items():
        v %= p
        if v:
            terms[k] = v
    return SparsePoly(p, terms, _clean=True)


def poly_eval(f: SparsePoly, point: Sequence[int], z: int | None = None) -> int:
    """Evaluate f with ``point[i-1]`` substituted for x_i and ``z`` for z."""
    p = f.p
    n = len(point)
    total = 0
    for key, c in f.terms.items():
        exps = unpack(key)
        if len(exps) - 1 > n:
            raise ArityMismatch(f"point has {n} coordinates, need {len(exps) - 1}")
        v = c
        for i, e in enumerate(exps):
            if not e:
                continue
            if i == 0:
                if z is None:
                    raise ArityMismatch("polynomial uses z but no z value given")
                v = v * pow(z, e, p)
            else:
                v = v * pow(point[i - 1], e, p)
        total += v
    return total % p


def homogeneous_part(f: SparsePoly, d: int) -> SparsePoly:
    if d < 0:
        raise ValueError("degree must be non-negative")
    return SparsePoly(f.p, {k: c for k, c in f.terms.items() if key_degree(k) == d}, _clean=True)


def product(polys: Iterable[SparsePoly], p: int, cap: int | None = None) -> SparsePoly:
    result = SparsePoly.const(p, 1)
    for f in polys:
        result = poly_mul(result, f, cap)
    return result


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearFunction:
    """a0 + sum a_i x_i over F_p.

    ``coeffs`` is a sorted tuple of ``(variable, coefficient)`` pairs without
    zero coefficients.  Variable 0 stands for z and only appears after
    homogenization.
    """

    p: int
    constant: int = 0
    coeffs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "constant", self.constant % self.p)
        cleaned: dict[int, int] = {}
        for i, c in self.coeffs:
            if i < 0:
                raise ValueError(f"bad variable index {i}")
            cleaned[i] = (cleaned.get(i, 0) + c) % self.p
        object.__setattr__(
            self, "coeffs", tuple(sorted((i, c) for i, c in cleaned.items() if c))
        )

    @classmethod
    def of(cls, p: int, constant: int = 0, **named: int) -> LinearFunction:
        """Convenience: ``LinearFunction.of(p, 3, x1=2, x3=-1)``."""
        coeffs = []
        for name, c in named.items():
            coeffs.append((0 if name == "z" else int(name[1:]), c))
        return cls(p, constant, tuple(coeffs))

    @classmethod
    def const(cls, p: int, c: int) -> LinearFunction:
        return cls(p, c)

    @classmethod
    def var(cls, p: int, i: int, c: int = 1) -> LinearFunction:
        return cls(p, 0, ((i, c),))

    @classmethod
    def from_poly(cls, f: SparsePoly) -> LinearFunction:
        if f.degree() > 1:
            raise ValueError(f"not linear: {f}")
        coeffs = []
        for exps, c in f.monomials():
            if exps:
                coeffs.append((len(exps) - 1, c))
        return cls(f.p, f.constant_term(), tuple(coeffs))

    def is_zero(self) -> bool:
        return self.constant == 0 and not self.coeffs

    def is_constant(self) -> bool:
        return not self.coeffs

    def is_homogeneous(self) -> bool:
        return self.constant == 0

    def num_terms(self) -> int:
        return len(self.coeffs) + (1 if self.constant else 0)

    def coeff(self, i: int) -> int:
        for j, c in self.coeffs:
            if j == i:
                return c
        return 0

    def num_vars(self) -> int:
        return max((i for i, _ in self.coeffs), default=0)

    def uses_z(self) -> bool:
        return any(i == 0 for i, _ in self.coeffs)

    def to_poly(self) -> SparsePoly:
        terms = {var_key(i): c for i, c in self.coeffs}
        if self.constant:
            terms[0] = self.constant
        return SparsePoly(self.p, terms, _clean=True)

    def evaluate(self, point: Sequence[int], z: int | None = None) -> int:
        total = self.constant
        for i, c in self.coeffs:
            if i == 0:
                if z is None:
                    raise ArityMismatch("linear function uses z but no z value given")
                total += c * z
            else:
                if i > len(point):
                    raise ArityMismatch(f"point has {len(point)} coordinates, need {i}")
                total += c * point[i - 1]
        return total % self.p

    def homogenize(self) -> LinearFunction:
        """a0 + sum a_i x_i  ->  a0*z + sum a_i x_i."""
        if any(i == 0 for i, _ in self.coeffs):
            raise ValueError("already uses z")
        return LinearFunction(self.p, 0, ((0, self.constant),) + self.coeffs)

    def scale(self, c: int) -> LinearFunction:
        return LinearFunction(self.p, self.constant * c, tuple((i, a * c) for i, a in self.coeffs))

    def __neg__(self) -> LinearFunction:
        return self.scale(-1)

    def __add__(self, other: LinearFunction) -> LinearFunction:
        return LinearFunction(self.p, self.constant + other.constant, self.coeffs + other.coeffs)

    def __sub__(self, other: LinearFunction) -> LinearFunction:
        return self + (-other)

    def single_terms(self) -> list[LinearFunction]:
        """Split into the constant and each c*x_i as separate functions (zeros omitted)."""
        out = []
        if self.constant:
            out.append(LinearFunction(self.p, self.constant))
        for i, c in self.coeffs:
            out.append(LinearFunction(self.p, 0, ((i, c),)))
        return out

    def __str__(self) -> str:
        terms = [(var_key(i), c) for i, c in self.coeffs]
        if self.constant:
            terms.append((0, self.constant))
        return format_terms(terms, self.p)


# ---------------------------------------------------------------------------


def solve_two_linears(l1: LinearFunction, l2: LinearFunction) -> dict[int, SparsePoly]:
    """Solve l1 = l2 = 0 for pivot variables.

    Pivots are the lowest-index variables with nonzero coefficient, l1 first.
    Returns ``{pivot: expression in the remaining variables}``.
    """
    p = l1.p
    rows = []
    for lf in (l1, l2):
        row = dict(lf.coeffs)
        row[-1] = lf.constant  # constant column
        rows.append(row)
    pivots: list[tuple[int, dict[int, int]]] = []
    for row in rows:
        row = {k: v for k, v in row.items() if v % p}
        for pv, prow in pivots:
            c = row.get(pv, 0)
            if c:
                for k, v in prow.items():
                    row[k] = (row.get(k, 0) - c * v) % p
                row = {k: v for k, v in row.items() if v}
        variables = sorted(k for k in row if k >= 0)
        if not variables:
            if row.get(-1, 0):
                raise Inconsistent("1 lies in the ideal (l1, l2)")
            continue
        pv = variables[0]
        inv = field_inverse(row[pv], p)
        row = {k: v * inv % p for k, v in row.items()}
        # back-substitute into earlier pivot rows
        new_pivots = []
        for qv, qrow in pivots:
            c = qrow.get(pv, 0)
            if c:
                qrow = dict(qrow)
                for k, v in row.items():
                    qrow[k] = (qrow.get(k, 0) - c * v) % p
                qrow = {k: v for k, v in qrow.items() if v}
            new_pivots.append((qv, qrow))
        pivots = new_pivots + [(pv, row)]
    solution = {}
    for pv, row in pivots:
        # pv + sum_{j != pv} row[j] x_j + row[-1] = 0
        terms = {}
        for k, v in row.items():
            if k == pv:
                continue
            terms[0 if k == -1 else var_key(k)] = (-v) % p
        solution[pv] = SparsePoly(p, terms)
    return solution


def reduce_mod_two_linears(f: SparsePoly, l1: LinearFunction, l2: LinearFunction) -> SparsePoly:
    """Canonical representative of f mod (l1, l2) by pivot substitution.

    Raises Inconsistent when 1 is in the ideal.
    """
    if l1.is_zero() and l2.is_zero():
        raise ValueError("l1 and l2 are both zero")
    return f.substitute(solve_two_linears(l1, l2))

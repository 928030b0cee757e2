"""Identity testing: deterministic test over commutative algebras plus oracles.

``commutative_pit`` decides whether prod_i (A_i0 + A_i1 x_1 + ... + A_in x_n)
vanishes when the A_ij live in a commutative algebra given in basis form.
``brute_force_zero`` and ``schwartz_zippel`` are the independent oracles.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .algebra import (
    AlgebraBasis,
    Element,
    ElementClass,
    NotCommutative,
    algebra_mul,
    classify,
    find_idempotent,
    split,
)
from .circuits import (
    DEFAULT_CAP,
    Abp,
    DepthThreeCircuit,
    FormulaCircuit,
    LinearMatrixSequence,
    formula_num_vars,
)
from .field import (
    ArityMismatch,
    ExpansionTooLarge,
    LinearFunction,
    SparsePoly,
    poly_mul,
    reduce_mod_two_linears,
    solve_two_linears,
    Inconsistent,
    var_key,
)

DEFAULT_MAX_DIM = 8
DEFAULT_BUDGET = 10**8

MASK64 = (1 << 64) - 1


class DimensionTooLarge(RuntimeError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class AlgebraTermCircuit:
    """prod over terms of (A_0 + A_1 x_1 + ... + A_n x_n), A_j in ``basis``."""

    basis: AlgebraBasis
    terms: tuple[tuple[Element, ...], ...]
    n: int | None = None

    def __post_init__(self):
        terms = tuple(tuple(tuple(c % self.basis.p for c in a) for a in term) for term in self.terms)
        n = self.n
        if n is None:
            n = len(terms[0]) - 1 if terms else 0
        for term in terms:
            if len(term) != n + 1:
                raise ValueError(f"every term needs {n + 1} coefficients")
            if any(len(a) != self.basis.k for a in term):
                raise ValueError("coefficient dimension does not match the algebra")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "n", n)

    @property
    def p(self) -> int:
        return self.basis.p

    def num_vars(self) -> int:
        return self.n

    def uses_z(self) -> bool:
        return False

    def evaluate(self, point: Sequence[int], z: int | None = None) -> Element:
        b = self.basis
        if len(point) < self.n:
            raise ArityMismatch(f"point has {len(point)} coordinates, need {self.n}")
        acc = b.identity
        for term in self.terms:
            val = [0] * b.k
            for j, a in enumerate(term):
                x = 1 if j == 0 else point[j - 1]
                for t, c in enumerate(a):
                    val[t] += c * x
            acc = algebra_mul(b, acc, tuple(v % b.p for v in val))
        return acc

    def expand(self, cap: int | None = DEFAULT_CAP) -> list[SparsePoly]:
        return expand_algebra_terms(self, cap)


@dataclass
class PitVerdict:
    zero: bool
    mode: str  # det | rand | brute
    seed: int | None = None
    witness: dict[str, int] | None = None
    splits: int = 0
    filtered: int = 0
    final_terms: int = 0
    trace: list[str] = field(default_factory=list)

    @property
    def label(self) -> str:
        if self.mode == "rand":
            return "ZeroAtAllSamples" if self.zero else "ProbablyNonZero"
        return "Zero" if self.zero else "NonZero"

    def record(self) -> str:
        seed = "-" if self.seed is None else str(self.seed)
        witness = "-" if self.witness is None else ",".join(f"{k}={v}" for k, v in self.witness.items())
        return (
            f"verdict={'zero' if self.zero else 'nonzero'} mode={self.mode} "
            f"seed={seed} witness={witness} splits={self.splits}"
        )


# ---------------------------------------------------------------------------
# deterministic algorithm


@dataclass
class _Stats:
    splits: int = 0
    filtered: int = 0
    final_terms: int = 0
    trace: list[str] = field(default_factory=list)


def commutative_pit(c: AlgebraTermCircuit, max_dim: int = DEFAULT_MAX_DIM) -> PitVerdict:
    if not c.basis.commutative:
        raise NotCommutative("deterministic test requires a commutative algebra")
    st = _Stats()
    zero = _pit(c.basis, c.terms, c.n, st, depth=0, limit=c.basis.k, max_dim=max_dim)
    return PitVerdict(zero, "det", splits=st.splits, filtered=st.filtered, final_terms=st.final_terms, trace=st.trace)


def _pit(basis, terms, n, st: _Stats, depth: int, limit: int, max_dim: int) -> bool:
    assert depth <= limit, "split recursion deeper than the algebra dimension"
    k = basis.k
    classes: dict[Element, ElementClass] = {}
    for term in terms:
        for a in term:
            if a not in classes:
                classes[a] = classify(basis, a)
            if classes[a] is ElementClass.ZERO_DIVISOR:
                v = find_idempotent(basis, a)
                sr = split(basis, v)
                st.splits += 1
                kl, kr = sr.left.algebra.k, sr.right.algebra.k
                assert kl < k and kr < k, "split must shrink both components"
                st.trace.append(f"depth {depth}: split dim {k} -> {kl} + {kr}")
                left = tuple(tuple(sr.project_left(x) for x in t) for t in terms)
                if not _pit(sr.left.algebra, left, n, st, depth + 1, limit, max_dim):
                    return False
                right = tuple(tuple(sr.project_right(x) for x in t) for t in terms)
                return _pit(sr.right.algebra, right, n, st, depth + 1, limit, max_dim)
    nilpotent_terms = [t for t in terms if all(classes[a] is ElementClass.NILPOTENT for a in t)]
    st.filtered += len(terms) - len(nilpotent_terms)
    if len(nilpotent_terms) > k:
        st.trace.append(f"depth {depth}: {len(nilpotent_terms)} nilpotent terms > dim {k}: zero")
        return True
    if k > max_dim:
        raise DimensionTooLarge(f"local component of dimension {k} exceeds max {max_dim}")
    st.final_terms += len(nilpotent_terms)
    product = _multiply_terms(basis, nilpotent_terms)
    zero = not product
    st.trace.append(f"depth {depth}: product of {len(nilpotent_terms)} terms in dim {k}: {'zero' if zero else 'nonzero'}")
    return zero


def _multiply_terms(basis: AlgebraBasis, terms) -> dict[int, Element]:
    """Product of linear algebra-valued polynomials; zero coefficients dropped."""
    k = basis.k
    acc: dict[int, Element] = {0: basis.identity}
    zero = (0,) * k
    for term in terms:
        nxt: dict[int, Element] = {}
        for mono, coeff in acc.items():
            for j, a in enumerate(term):
                if not any(a):
                    continue
                key = mono + (var_key(j) if j else 0)
                prod = algebra_mul(basis, coeff, a)
                prev = nxt.get(key, zero)
                nxt[key] = tuple((x + y) % basis.p for x, y in zip(prev, prod))
        acc = {m: c for m, c in nxt.items() if any(c)}
        if not acc:
            break
    return acc


# ---------------------------------------------------------------------------
# oracles


def expand_algebra_terms(c: AlgebraTermCircuit, cap: int | None = DEFAULT_CAP) -> list[SparsePoly]:
    """Coordinate polynomials P_1..P_k with P = sum_m P_m e_m."""
    b, p, k = c.basis, c.p, c.basis.k
    coords = [SparsePoly.const(p, x) for x in b.identity]
    for term in c.terms:
        lin = []
        for t in range(k):
            lf = LinearFunction(p, term[0][t], tuple((j, term[j][t]) for j in range(1, len(term))))
            lin.append(lf.to_poly())
        nxt = [SparsePoly.zero(p) for _ in range(k)]
        for a in range(k):
            if not coords[a]:
                continue
            for bb in range(k):
                if not lin[bb]:
                    continue
                gamma = b.structure[a][bb]
                if not any(gamma):
                    continue
                prod = poly_mul(coords[a], lin[bb], cap)
                for m, g in enumerate(gamma):
                    if g:
                        nxt[m] = nxt[m] + prod.scale(g)
        for f in nxt:
            if cap is not None and len(f) > cap:
                raise ExpansionTooLarge(f"expansion exceeds {cap} monomials")
        coords = nxt
    return coords


def brute_force_zero(source: Any, cap: int | None = DEFAULT_CAP) -> PitVerdict:
    """Full symbolic expansion; zero iff every coefficient vanishes."""
    if isinstance(source, SparsePoly):
        zero = source.is_zero()
    elif isinstance(source, AlgebraTermCircuit):
        zero = all(f.is_zero() for f in expand_algebra_terms(source, cap))
    elif isinstance(source, LinearMatrixSequence):
        zero = all(e.is_zero() for row in source.expand(cap) for e in row)
    elif isinstance(source, (DepthThreeCircuit, FormulaCircuit, Abp)):
        zero = source.expand(cap).is_zero()
    else:
        raise TypeError(f"cannot expand {type(source).__name__}")
    return PitVerdict(zero, "brute")


class SplitMix64:
    """splitmix64 generator; state advances by the golden-ratio increment."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, p: int) -> int:
        """Uniform in [0, p) by rejection sampling."""
        limit = (1 << 64) - ((1 << 64) % p)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % p


def _degree_bound(source) -> int:
    if isinstance(source, SparsePoly):
        return max(source.degree(), 0)
    if isinstance(source, DepthThreeCircuit):
        return source.d
    if isinstance(source, LinearMatrixSequence):
        return len(source)
    if isinstance(source, Abp):
        return source.degree
    if isinstance(source, AlgebraTermCircuit):
        return len(source.terms)
    if isinstance(source, FormulaCircuit):
        return _formula_degree(source.root)
    return 0


def _formula_degree(e) -> int:
    from .circuits import Add, Leaf

    if isinstance(e, Leaf):
        return 0 if e.var is None else 1
    a, b = _formula_degree(e.left), _formula_degree(e.right)
    return max(a, b) if isinstance(e, Add) else a + b


def _is_zero_value(v) -> bool:
    if isinstance(v, int):
        return v == 0
    if isinstance(v, tuple) and all(isinstance(x, int) for x in v):
        return not any(v)
    return all(not x for row in v for x in row)


def _evaluator(source) -> tuple[int, bool, Callable]:
    if isinstance(source, SparsePoly):
        return source.num_vars(), source.uses_z(), lambda pt, z: source.evaluate(pt, z)
    if isinstance(source, FormulaCircuit):
        return formula_num_vars(source.root), False, source.evaluate
    if hasattr(source, "evaluate") and hasattr(source, "num_vars"):
        return source.num_vars(), source.uses_z(), source.evaluate
    raise TypeError(f"cannot evaluate {type(source).__name__}")


def schwartz_zippel(source: Any, trials: int = 20, seed: int = 0) -> PitVerdict:
    """Evaluate at ``trials`` seeded random points; any nonzero value is a proof.

    Coordinates are drawn in the order x_1..x_n, then z when the source uses it.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    p = source.p
    deg = _degree_bound(source)
    if p <= deg:
        warnings.warn(f"field size {p} does not exceed degree bound {deg}", RuntimeWarning, stacklevel=2)
    n, uses_z, fn = _evaluator(source)
    rng = SplitMix64(seed)
    for _ in range(trials):
        point = [rng.below(p) for _ in range(n)]
        z = rng.below(p) if uses_z else None
        if not _is_zero_value(fn(point, z)):
            witness = {f"x{i + 1}": v for i, v in enumerate(point)}
            if uses_z:
                witness["z"] = z
            return PitVerdict(False, "rand", seed=seed, witness=witness)
    return PitVerdict(True, "rand", seed=seed)


def check(
    source: Any,
    mode: str = "auto",
    *,
    cap: int | None = DEFAULT_CAP,
    trials: int = 20,
    seed: int = 0,
    max_dim: int = DEFAULT_MAX_DIM,
) -> PitVerdict:
    """Dispatch to the deterministic, brute-force or randomized test."""
    if mode == "commutative" or (
        mode == "auto" and isinstance(source, AlgebraTermCircuit) and source.basis.commutative
    ):
        if not isinstance(source, AlgebraTermCircuit):
            raise TypeError("commutative mode needs an algebra term circuit")
        return commutative_pit(source, max_dim)
    if mode == "brute":
        return brute_force_zero(source, cap)
    if mode == "rand":
        return schwartz_zippel(source, trials, seed)
    if mode != "auto":
        raise ValueError(f"unknown mode {mode!r}")
    try:
        return brute_force_zero(source, cap)
    except ExpansionTooLarge:
        return schwartz_zippel(source, trials, seed)


# ---------------------------------------------------------------------------
# robustness evidence


def normalized_linear_functions(p: int, n: int) -> list[LinearFunction]:
    """All nonzero a0 + sum a_i x_i whose first nonzero of (a1..an, a0) is 1."""
    out = []
    for vec in itertools.product(range(p), repeat=n + 1):
        coeffs, const = vec[:n], vec[n]
        lead = next((c for c in coeffs if c), const)
        if lead != 1:
            continue
        out.append(LinearFunction(p, const, tuple((i + 1, c) for i, c in enumerate(coeffs))))
    return out


def robustness_search(f: SparsePoly, p: int, budget: int = DEFAULT_BUDGET) -> list[tuple[LinearFunction, LinearFunction]]:
    """Every pair (l1, l2), 1 not in (l1, l2), with f mod (l1, l2) of degree <= 1.

    Pairs are unordered (l1 listed first in enumeration order, l1 == l2
    allowed) and each function is normalized up to scalars.
    """
    g = SparsePoly(p, f.terms)
    n = g.num_vars()
    funcs = normalized_linear_functions(p, n)
    pairs = len(funcs) * (len(funcs) + 1) // 2
    if pairs > budget:
        raise BudgetExceeded(f"{pairs} pairs exceed budget {budget}")
    found = []
    for a in range(len(funcs)):
        for b in range(a, len(funcs)):
            l1, l2 = funcs[a], funcs[b]
            try:
                sol = solve_two_linears(l1, l2)
            except Inconsistent:
                continue
            if g.substitute(sol).degree() <= 1:
                found.append((l1, l2))
    return found


__all__ = [
    "AlgebraTermCircuit",
    "BudgetExceeded",
    "DimensionTooLarge",
    "PitVerdict",
    "SplitMix64",
    "brute_force_zero",
    "check",
    "commutative_pit",
    "expand_algebra_terms",
    "normalized_linear_functions",
    "reduce_mod_two_linears",
    "robustness_search",
    "schwartz_zippel",
]

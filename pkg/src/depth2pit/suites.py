"""Cross-oracle property suites.

Each ``criterion_*`` function builds its instances from a seeded
``random.Random``, checks every instance against an independent oracle and
returns a :class:`CriterionResult`.  The result's ``digest`` hashes the
per-instance records, so two runs with the same seed can be compared byte for
byte.
"""

from __future__ import annotations

import hashlib
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import algebra as alg
from .circuits import (
    Add,
    DepthThreeCircuit,
    Leaf,
    Mul,
    formula_to_poly,
)
from .field import LinearFunction, SparsePoly, product
from .pit import (
    AlgebraTermCircuit,
    brute_force_zero,
    commutative_pit,
    expand_algebra_terms,
    robustness_search,
    schwartz_zippel,
)
from .textio import parse_poly
from .transforms import (
    ben_or_cleve,
    homogenize_and_abp,
    is_transvection,
    local_ring_reduction,
    mask_offdiagonal,
    sps_to_u2,
)

P = 101


@dataclass
class SuiteConfig:
    seed: int = 0
    random_sps: int = 500
    zero_sps: int = 50
    abp_points: int = 100
    zoo_instances: int = 500
    count_rule_instances: int = 20
    local_ring_instances: int = 20
    formulas: int = 200
    mutate: bool = False


@dataclass
class CriterionResult:
    name: str
    passed: bool
    checked: int
    failures: list[str] = field(default_factory=list)  # first 20 messages
    digest: str = ""
    seconds: float = 0.0
    failed: int = 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checked} checks, {self.failed} failures, digest {self.digest}"


class _Recorder:
    def __init__(self, name: str):
        self.name = name
        self.h = hashlib.sha256()
        self.checked = 0
        self.failures: list[str] = []

    def record(self, text: str):
        self.h.update(text.encode())
        self.h.update(b"\n")

    def check(self, ok: bool, what: str):
        self.checked += 1
        if not ok:
            self.failures.append(what)
            self.record(f"FAIL {what}")

    def result(self, started: float) -> CriterionResult:
        return CriterionResult(
            self.name,
            not self.failures,
            self.checked,
            self.failures[:20],
            self.h.hexdigest()[:16],
            time.perf_counter() - started,
            len(self.failures),
        )


# ---------------------------------------------------------------------------
# generators


def random_linear(rng: random.Random, p: int, n: int, density: float = 0.6) -> LinearFunction:
    const = rng.randrange(p) if rng.random() < density else 0
    coeffs = tuple((i, rng.randrange(1, p)) for i in range(1, n + 1) if rng.random() < density)
    lf = LinearFunction(p, const, coeffs)
    if lf.is_zero():
        lf = LinearFunction.var(p, rng.randint(1, n), rng.randrange(1, p)) if n else LinearFunction.const(p, 1)
    return lf


def random_sps(rng: random.Random, p: int, n: int, d: int, s: int) -> DepthThreeCircuit:
    """Random circuit; product lengths vary in 1..d, and rarely hold a zero factor."""
    products = []
    for i in range(s):
        length = d if i == 0 else rng.randint(1, d)
        prod = [random_linear(rng, p, n) for _ in range(length)]
        if rng.random() < 0.03:
            prod[rng.randrange(length)] = LinearFunction(p)
        products.append(tuple(prod))
    return DepthThreeCircuit(p, tuple(products))


def _disguised_negation(rng: random.Random, prod: list[LinearFunction]) -> list[LinearFunction]:
    """Same product times -1 with scalars spread over the factors and order shuffled."""
    p = prod[0].p
    out = list(prod)
    rng.shuffle(out)
    scal = [rng.randrange(1, p) for _ in out]
    total = 1
    for c in scal:
        total = total * c % p
    fix = (-pow(total, p - 2, p)) % p
    scal[0] = scal[0] * fix % p
    return [lf.scale(c) for lf, c in zip(out, scal)]


def zero_sps(rng: random.Random, p: int, n: int, d: int, kind: int) -> DepthThreeCircuit:
    """Identically zero circuits built from explicit cancellations."""
    lin = lambda: random_linear(rng, p, n, 0.8)  # noqa: E731
    if kind == 0:
        base = [[lin() for _ in range(d)] for _ in range(rng.randint(1, 2))]
        prods = []
        for b in base:
            prods += [b, _disguised_negation(rng, b)]
        rng.shuffle(prods)
    elif kind == 1:
        # (a+b)(a-b) - a*a + b*b
        a, b = lin(), lin()
        prods = [[a + b, a - b], [-a, a], [b, b]]
    elif kind == 2:
        # (a+b)^2 - a^2 - 2ab - b^2
        a, b = lin(), lin()
        prods = [[a + b, a + b], [-a, a], [a.scale(-2), b], [-b, b]]
    else:
        # a zero factor plus a cancelling pair
        b = [lin() for _ in range(d)]
        prods = [b, [LinearFunction(p)] + [lin() for _ in range(d - 1)], _disguised_negation(rng, b)]
    if kind in (1, 2) and d > 2:
        extra = [lin() for _ in range(d - 2)]
        prods = [pr + extra for pr in prods]
    return DepthThreeCircuit(p, tuple(tuple(pr) for pr in prods))


def random_formula(rng: random.Random, n: int, depth: int, p: int = P):
    if depth == 0 or rng.random() < 0.2:
        c = rng.randrange(1, p)
        if rng.random() < 0.8:
            return Leaf(c, rng.randint(1, n))
        return Leaf(c, None)
    left = random_formula(rng, n, depth - 1, p)
    right = random_formula(rng, n, depth - 1, p)
    return Add(left, right) if rng.random() < 0.5 else Mul(left, right)


@dataclass
class ZooAlgebra:
    name: str
    basis: alg.AlgebraBasis
    natural: alg.AlgebraBasis
    to_basis: list[list[int]] | None = None  # natural coords -> basis coords

    def convert(self, x):
        if self.to_basis is None:
            return tuple(x)
        k = self.basis.k
        return tuple(sum(self.to_basis[i][j] * x[j] for j in range(k)) % self.basis.p for i in range(k))

    def sample(self, rng: random.Random):
        k = self.natural.k
        x = [rng.randrange(1, P) if rng.random() < 0.5 else 0 for _ in range(k)]
        return self.convert(x)


def _scrambled(name: str, natural: alg.AlgebraBasis, rng: random.Random) -> ZooAlgebra:
    k = natural.k
    while True:
        vecs = [tuple(rng.randrange(natural.p) for _ in range(k)) for _ in range(k)]
        try:
            b, to_new = alg.change_basis(natural, vecs)
        except ValueError:
            continue
        return ZooAlgebra(name, b, natural, to_new)


def algebra_zoo(p: int = P, seed: int = 0) -> list[ZooAlgebra]:
    """Commutative algebras of dimension <= 5, several in scrambled bases."""
    rng = random.Random(seed ^ 0x5EED)
    F = alg.field_algebra(p)
    FxF = alg.direct_product(F, F)
    dual = alg.quotient_algebra(p, [0, 0, 1])
    fixed, fixed_map = alg.change_basis(FxF, [(1, 1), (1, 0)])
    zoo = [
        ZooAlgebra("F", F, F),
        ZooAlgebra("FxF", FxF, FxF),
        ZooAlgebra("FxF{(1,1),(1,0)}", fixed, FxF, fixed_map),
        ZooAlgebra("F[y]/(y^2)", dual, dual),
        ZooAlgebra("F[y]/(y^3)", *(2 * [alg.quotient_algebra(p, [0, 0, 0, 1])])),
        ZooAlgebra("F[y]/(y^2-y)", *(2 * [alg.quotient_algebra(p, [0, -1, 1])])),
        ZooAlgebra("F[y]/(y^3-y^2)", *(2 * [alg.quotient_algebra(p, [0, 0, -1, 1])])),
        ZooAlgebra("F[y]/(y^2)xF", *(2 * [alg.direct_product(dual, F)])),
        _scrambled("FxFxF scrambled", alg.direct_product(FxF, F), rng),
        ZooAlgebra("local s=2 d=2", *(2 * [alg.local_ring(p, 2, 2)[0]])),
        ZooAlgebra("local s=3 d=2", *(2 * [alg.local_ring(p, 3, 2)[0]])),
        _scrambled("F[y]/(y^2)xF[y]/(y^2) scrambled", alg.direct_product(dual, dual), rng),
        _scrambled("F[y]/(y^3)xFxF scrambled", alg.direct_product(alg.quotient_algebra(p, [0, 0, 0, 1]), FxF), rng),
    ]
    return zoo


def random_term_circuit(rng: random.Random, z: ZooAlgebra, n: int, d: int) -> AlgebraTermCircuit:
    terms = tuple(tuple(z.sample(rng) for _ in range(n + 1)) for _ in range(d))
    return AlgebraTermCircuit(z.basis, terms, n)


# ---------------------------------------------------------------------------
# criteria


def _lowering_suite(cfg: SuiteConfig) -> list[DepthThreeCircuit]:
    rng = random.Random(cfg.seed)
    circuits = []
    for _ in range(cfg.random_sps):
        n, d, s = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
        circuits.append(random_sps(rng, P, n, d, s))
    for i in range(cfg.zero_sps):
        n, d = rng.randint(1, 4), rng.randint(2, 4)
        circuits.append(zero_sps(rng, P, n, d, i % 4))
    return circuits


def criterion_lowering(cfg: SuiteConfig, circuits=None) -> tuple[CriterionResult, CriterionResult]:
    """U_2 lowering soundness (criterion 1) and its length bound (criterion 2)."""
    started = time.perf_counter()
    rec = _Recorder("1 u2-lowering soundness and zero-equivalence")
    size = _Recorder("2 u2-lowering length bound")
    circuits = circuits if circuits is not None else _lowering_suite(cfg)
    for idx, c in enumerate(circuits):
        zero_built = idx >= cfg.random_sps
        f = c.expand()
        lo = sps_to_u2(c)
        masked = mask_offdiagonal(lo)
        grid = masked.expand()
        cert = product((lf.to_poly() for lf in lo.l_factors), c.p)
        target = cert * f
        rec.check(all(not lf.is_zero() for lf in lo.l_factors), f"#{idx}: zero certificate factor")
        rec.check(
            grid[0][1] == target and grid[0][0].is_zero() and grid[1][0].is_zero() and grid[1][1].is_zero(),
            f"#{idx}: masked product is not [[0, cert*f],[0,0]]",
        )
        bf = brute_force_zero(masked)
        rec.check(bf.zero == f.is_zero(), f"#{idx}: zero-equivalence broken")
        if zero_built:
            rec.check(f.is_zero(), f"#{idx}: constructed zero circuit expands to {f}")
        sz = schwartz_zippel(masked, trials=3, seed=cfg.seed * 1000003 + idx)
        rec.check(sz.zero or not bf.zero, f"#{idx}: randomized test claims nonzero on a zero product")
        size.check(lo.within_bound(), f"#{idx}: length {len(lo.seq)} > bound {lo.size_bound()}")
        rec.record(f"{idx} len={len(lo.seq)} cert={len(lo.l_factors)} zero={bf.zero} {sz.record()}")
        size.record(f"{idx} {len(lo.seq)} {lo.size_bound()}")
    return rec.result(started), size.result(started)


def criterion_abp(cfg: SuiteConfig, circuits=None) -> CriterionResult:
    started = time.perf_counter()
    rec = _Recorder("3 width-2 planar ABP")
    circuits = circuits if circuits is not None else _lowering_suite(cfg)
    rng = random.Random(cfg.seed + 3)
    for idx, c in enumerate(circuits):
        lo = sps_to_u2(c)
        abp = homogenize_and_abp(lo)
        kinds = [abp.gap_kind(g) for g in range(1, len(abp.edges) - 1)]
        rec.check(abp.is_planar(), f"#{idx}: ABP not planar")
        rec.check(abp.core_width() <= 2 and abp.width <= 2, f"#{idx}: width {abp.width}")
        rec.check(all(k in ("parallel", "shear") for k in kinds), f"#{idx}: unexpected layer kind")
        n = max(c.num_vars(), 1)
        bad = 0
        for _ in range(cfg.abp_points):
            pt = [rng.randrange(c.p) for _ in range(n)]
            want = c.evaluate(pt)
            for lf in lo.l_factors:
                want = want * lf.evaluate(pt) % c.p
            if abp.evaluate(pt, z=1) != want:
                bad += 1
        rec.check(bad == 0, f"#{idx}: {bad} evaluation mismatches")
        rec.record(f"{idx} levels={len(abp.levels)} kinds={''.join(k[0] for k in kinds)}")
    return rec.result(started)


def exhaustive_dual_numbers_suite(p: int = 2):
    """Every circuit over F_2[y]/(y^2) with n <= 2 variables and d <= 2 terms."""
    import itertools

    b = alg.quotient_algebra(p, [0, 0, 1])
    elems = [(a, c) for a in range(p) for c in range(p)]
    for n in range(0, 3):
        term_choices = list(itertools.product(elems, repeat=n + 1))
        for d in (1, 2):
            for terms in itertools.product(term_choices, repeat=d):
                yield AlgebraTermCircuit(b, terms, n)


def criterion_commutative(cfg: SuiteConfig) -> CriterionResult:
    started = time.perf_counter()
    rec = _Recorder("4 commutative PIT agrees with brute force")
    zero_count = 0
    for idx, c in enumerate(exhaustive_dual_numbers_suite()):
        det = commutative_pit(c)
        bf = brute_force_zero(c)
        zero_count += det.zero
        rec.check(det.zero == bf.zero, f"exhaustive #{idx}: det={det.zero} brute={bf.zero} terms={c.terms}")
    rec.record(f"exhaustive zero={zero_count}")
    rng = random.Random(cfg.seed + 4)
    for z in algebra_zoo(P, cfg.seed):
        alg.validate_basis(z.basis)
        zeros = splits = 0
        for i in range(cfg.zoo_instances):
            c = random_term_circuit(rng, z, rng.randint(1, 3), rng.randint(1, 4))
            det = commutative_pit(c)
            bf = brute_force_zero(c)
            zeros += det.zero
            splits += det.splits
            rec.check(det.zero == bf.zero, f"{z.name} #{i}: det={det.zero} brute={bf.zero}")
        rec.record(f"{z.name} zero={zeros} splits={splits}")
    return rec.result(started)


def criterion_count_rule(cfg: SuiteConfig) -> CriterionResult:
    started = time.perf_counter()
    rec = _Recorder("5 nilpotent count rule")
    rng = random.Random(cfg.seed + 5)
    for z in algebra_zoo(P, cfg.seed):
        nil = alg.nilradical(z.basis)
        k = z.basis.k
        for i in range(cfg.count_rule_instances):
            n = rng.randint(1, 3)
            m = k + 1 + (i % 2)

            def sample():
                x = [0] * k
                for v in nil:
                    if rng.random() < 0.7:
                        c = rng.randrange(1, P)
                        x = [(a + c * b) % P for a, b in zip(x, v)]
                return tuple(x)

            terms = tuple(tuple(sample() for _ in range(n + 1)) for _ in range(m))
            c = AlgebraTermCircuit(z.basis, terms, n)
            rec.check(
                all(alg.classify(z.basis, a) is alg.ElementClass.NILPOTENT for t in terms for a in t),
                f"{z.name} #{i}: sampled coefficient is not nilpotent",
            )
            det = commutative_pit(c)
            rec.check(det.zero, f"{z.name} #{i}: judged nonzero")
            rec.check(any("nilpotent terms >" in line for line in det.trace), f"{z.name} #{i}: count rule not used")
            rec.check(brute_force_zero(c).zero, f"{z.name} #{i}: brute force finds nonzero")
        rec.record(f"{z.name} nilradical_dim={len(nil)}")
    return rec.result(started)


def criterion_local_ring(cfg: SuiteConfig) -> CriterionResult:
    started = time.perf_counter()
    rec = _Recorder("6 local ring reduction")
    rng = random.Random(cfg.seed + 6)
    for s in (2, 3):
        for d in (2, 3):
            for i in range(cfg.local_ring_instances):
                n = rng.randint(1, 4)
                c = DepthThreeCircuit(
                    P, tuple(tuple(random_linear(rng, P, n) for _ in range(d)) for _ in range(s))
                )
                basis, terms, labels = local_ring_reduction(c)
                if cfg.mutate:
                    basis = _flip_structure_constant(basis)
                    terms = AlgebraTermCircuit(basis, terms.terms, terms.n)
                try:
                    alg.validate_basis(basis)
                    valid = basis.commutative
                except alg.ValidationError:
                    valid = False
                rec.check(valid, f"s={s} d={d} #{i}: algebra fails validation")
                rec.check(basis.k == s * (d - 1) + 2, f"s={s} d={d}: dimension {basis.k}")
                ys = [alg.y_element(basis, labels, j) for j in range(1, s + 1)]
                rec.check(
                    all(alg.classify(basis, y) is alg.ElementClass.NILPOTENT for y in ys),
                    f"s={s} d={d} #{i}: some y_i is not nilpotent",
                )
                coords = expand_algebra_terms(terms)
                top = labels.index((1, d))
                f = c.expand()
                ok = coords[top] == f and all(coords[t].is_zero() for t in range(basis.k) if t != top)
                rec.check(ok, f"s={s} d={d} #{i}: product is not f * y1^d")
                rec.record(f"{s} {d} {i} {f}")
    return rec.result(started)


def _flip_structure_constant(b: alg.AlgebraBasis) -> alg.AlgebraBasis:
    rows = [list(list(v) for v in row) for row in b.structure]
    rows[1][1][0] = (rows[1][1][0] + 1) % b.p
    return alg.AlgebraBasis(b.p, tuple(tuple(tuple(v) for v in row) for row in rows), b.identity)


def criterion_ben_or_cleve(cfg: SuiteConfig) -> CriterionResult:
    started = time.perf_counter()
    rec = _Recorder("7 Ben-Or-Cleve 3x3 transvections")
    rng = random.Random(cfg.seed + 7)
    for i in range(cfg.formulas):
        n = rng.randint(1, 4)
        e = random_formula(rng, n, rng.randint(0, 4))
        depth = e.depth()
        seq = ben_or_cleve(e, P)
        rec.check(len(seq) <= 4**depth, f"#{i}: length {len(seq)} > 4^{depth}")
        rec.check(all(is_transvection(m) for m in seq.matrices), f"#{i}: non-transvection emitted")
        grid = seq.expand()
        want = formula_to_poly(e, P)
        ok = grid[2][0] == want
        for r in range(3):
            for col in range(3):
                if (r, col) == (2, 0):
                    continue
                ok &= grid[r][col] == SparsePoly.const(P, 1 if r == col else 0)
        rec.check(ok, f"#{i}: product is not I + E at (3,1)")
        rec.record(f"{i} depth={depth} len={len(seq)}")
    return rec.result(started)


def criterion_robustness(cfg: SuiteConfig) -> CriterionResult:
    started = time.perf_counter()
    rec = _Recorder("8 robustness evidence over F_2")
    f = parse_poly("x1*x2 + x3*x4 + x5*x6", 2)
    hits = robustness_search(f, 2)
    rec.check(hits == [], f"x1x2+x3x4+x5x6 has {len(hits)} violating pairs")
    g = parse_poly("x1*x2", 2)
    hits2 = robustness_search(g, 2)
    rec.check(len(hits2) > 0, "x1x2 has no violating pair")
    rec.record(f"{len(hits)} {len(hits2)} " + ";".join(f"{a}|{b}" for a, b in hits2))
    return rec.result(started)


def run_suite(cfg: SuiteConfig | None = None, progress: Callable[[CriterionResult], None] | None = None) -> list[CriterionResult]:
    """Criteria 1-8 in order."""
    cfg = cfg or SuiteConfig()
    circuits = _lowering_suite(cfg)
    results: list[CriterionResult] = []

    def emit(r):
        results.append(r)
        if progress:
            progress(r)

    for r in criterion_lowering(cfg, circuits):
        emit(r)
    emit(criterion_abp(cfg, circuits))
    emit(criterion_commutative(cfg))
    emit(criterion_count_rule(cfg))
    emit(criterion_local_ring(cfg))
    emit(criterion_ben_or_cleve(cfg))
    emit(criterion_robustness(cfg))
    return results


def report(results: list[CriterionResult]) -> str:
    """Timing-free report text; identical seeds must give identical text."""
    lines = [r.line() for r in results]
    for r in results:
        lines += [f"  {r.name}: {msg}" for msg in r.failures]
    return "\n".join(lines) + "\n"

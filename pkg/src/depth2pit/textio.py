"""Text formats for polynomials, circuits and algebras.

Circuit files::

    field 101
    sps { (x1 + 2)(x2) ; (3*x3)(1) }
    seq k=2 left=[1,0;0,0] right=[0,0;0,1] { [x1, 0; 0, 1] [1, x2; 0, 1] }
    abp { level 1; level 2; level 1; edges 0: 0 0 x1; edges 0: 0 1 x2; edges 1: 0 0 1; ... }
    formula (+ (* x1 x2) 3)
    L: (x1) (x3)

Algebra files::

    field 101
    algebra k=2
    identity 1 0
    mult 1 1 : 1 0
    ...
    term 0 1 | 0 1      # optional: one line per factor, coefficients A_0 | A_1 | ...

``#`` starts a comment in every format.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .algebra import AlgebraBasis
from .circuits import (
    Abp,
    Add,
    DepthThreeCircuit,
    FormulaCircuit,
    Leaf,
    LinearMatrix,
    LinearMatrixSequence,
    Mul,
)
from .field import DEFAULT_PRIME, Field, LinearFunction, SparsePoly, pack


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", offset: int = 0):
        line = text.count("\n", 0, offset) + 1
        col = offset - (text.rfind("\n", 0, offset) + 1) + 1
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.column = col
        self.offset = offset


_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+|z)|(\^)|(\*)|(\+)|(-))")


def _strip_comments(text: str) -> str:
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str, pos: int | None = None) -> ParseError:
        return ParseError(msg, self.text, self.pos if pos is None else pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self, s: str) -> bool:
        self.skip_ws()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        self.skip_ws()
        if not self.text.startswith(s, self.pos):
            found = self.text[self.pos : self.pos + 10] or "end of input"
            raise self.error(f"expected {s!r}, found {found!r}")
        self.pos += len(s)

    def accept(self, s: str) -> bool:
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def word(self) -> str:
        self.skip_ws()
        m = re.compile(r"[A-Za-z_][A-Za-z_0-9-]*").match(self.text, self.pos)
        if not m:
            raise self.error("expected a keyword")
        self.pos = m.end()
        return m.group(0)

    def integer(self) -> int:
        self.skip_ws()
        m = re.compile(r"-?\d+").match(self.text, self.pos)
        if not m:
            raise self.error("expected an integer")
        self.pos = m.end()
        return int(m.group(0))

    def until(self, stops: str) -> tuple[str, int]:
        """Raw text up to (not including) the first char in ``stops``."""
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in stops:
            self.pos += 1
        return self.text[start : self.pos], start


# ---------------------------------------------------------------------------
# polynomials


def parse_poly(text: str, p: int = DEFAULT_PRIME, *, _base: str | None = None, _offset: int = 0) -> SparsePoly:
    """Parse e.g. ``3*x1^2*x2 - x3 + 7`` (whitespace is free)."""
    full = _base if _base is not None else text
    pos = 0
    terms: dict[int, int] = {}
    expect_term = True
    sign = 1
    seen_any = False

    def err(msg, at):
        return ParseError(msg, full, _offset + at)

    coeff, exps = 1, {}
    in_term = False

    def flush():
        key = pack([exps.get(i, 0) for i in range(max(exps, default=-1) + 1)])
        terms[key] = (terms.get(key, 0) + sign * coeff) % p

    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise err(f"unexpected character {text[pos]!r}", pos)
        num, var, caret, star, plus, minus = m.groups()
        tok_pos = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        pos = m.end()
        if plus or minus:
            if in_term:
                flush()
                in_term = False
                sign = 1 if plus else -1
            elif seen_any or not expect_term:
                raise err("dangling operator", tok_pos)
            else:
                sign = sign * (1 if plus else -1)
            expect_term = True
            seen_any = True
            coeff, exps = 1, {}
            continue
        if star:
            if not in_term or expect_term:
                raise err("'*' without a left operand", tok_pos)
            expect_term = True
            continue
        if caret:
            raise err("'^' must follow a variable", tok_pos)
        if not expect_term:
            raise err("missing operator between factors", tok_pos)
        if num:
            coeff = coeff * int(num) % p
        else:
            idx = 0 if var == "z" else int(var[1:])
            if var != "z" and idx == 0:
                raise err("variables are numbered from x1", tok_pos)
            e = 1
            m2 = re.compile(r"\s*\^\s*(\d+)").match(text, pos)
            if m2:
                e = int(m2.group(1))
                pos = m2.end()
            exps[idx] = exps.get(idx, 0) + e
        in_term = True
        expect_term = False
        seen_any = True
    if in_term and not expect_term:
        flush()
    elif seen_any:
        raise err("expression ends with an operator", len(text))
    else:
        raise err("empty expression", 0)
    return SparsePoly(p, terms)


def parse_linear(text: str, p: int = DEFAULT_PRIME, *, _base: str | None = None, _offset: int = 0) -> LinearFunction:
    f = parse_poly(text, p, _base=_base, _offset=_offset)
    if f.degree() > 1:
        raise ParseError(f"not a linear function: {text.strip()!r}", _base or text, _offset)
    return LinearFunction.from_poly(f)


def format_linear(lf: LinearFunction) -> str:
    return str(lf)


# ---------------------------------------------------------------------------
# circuits


@dataclass(frozen=True)
class LoweredText:
    """A sequence plus its certificate factor list, as read from a file."""

    seq: LinearMatrixSequence
    l_factors: tuple[LinearFunction, ...]


Circuit = Union[FormulaCircuit, DepthThreeCircuit, LinearMatrixSequence, Abp]


def parse_circuit(text: str, default_p: int = DEFAULT_PRIME) -> Circuit:
    circuit, _ = parse_circuit_file(text, default_p)
    return circuit


def parse_circuit_file(text: str, default_p: int = DEFAULT_PRIME) -> tuple[Circuit, tuple[LinearFunction, ...] | None]:
    """Parse a circuit file; also returns the optional ``L:`` factor line."""
    clean = _strip_comments(text)
    sc = _Scanner(clean)
    sc.text = clean
    p = default_p
    if sc.peek("field"):
        sc.word()
        pos = sc.pos
        p = sc.integer()
        try:
            Field(p)
        except ValueError as exc:
            raise sc.error(str(exc), pos) from None
    if sc.at_end():
        raise sc.error("no circuit found")
    kw_pos = sc.pos
    kw = sc.word()
    if kw == "sps":
        circuit = _parse_sps(sc, p)
    elif kw == "seq":
        circuit = _parse_seq(sc, p)
    elif kw == "abp":
        circuit = _parse_abp(sc, p)
    elif kw == "formula":
        circuit = FormulaCircuit(p, _parse_formula(sc, p))
    else:
        raise sc.error(f"unknown circuit kind {kw!r}", kw_pos)
    factors = None
    if sc.accept("L:"):
        factors = []
        while sc.accept("("):
            raw, start = sc.until(")")
            factors.append(parse_linear(raw, p, _base=clean, _offset=start))
            sc.expect(")")
        factors = tuple(factors)
    if not sc.at_end():
        raise sc.error("trailing input")
    return circuit, factors


def _parse_sps(sc: _Scanner, p: int) -> DepthThreeCircuit:
    sc.expect("{")
    products = []
    current = []
    while True:
        if sc.accept("("):
            raw, start = sc.until(")")
            if sc.pos >= len(sc.text):
                raise sc.error("unclosed '('", start - 1)
            current.append(parse_linear(raw, p, _base=sc.text, _offset=start))
            sc.expect(")")
        elif sc.peek(";") or sc.peek(","):
            pos = sc.pos
            sc.pos += 1
            if not current:
                raise sc.error("empty product", pos)
            products.append(tuple(current))
            current = []
        elif sc.accept("}"):
            if not current:
                raise sc.error("empty product")
            products.append(tuple(current))
            break
        else:
            raise sc.error("expected '(', ';' or '}'")
    return DepthThreeCircuit(p, tuple(products))


def _parse_const_matrix(sc: _Scanner, k: int | None) -> tuple[tuple[int, ...], ...]:
    sc.expect("[")
    raw, start = sc.until("]")
    sc.expect("]")
    rows = []
    for row in raw.split(";"):
        rows.append(tuple(int(x) for x in row.replace(",", " ").split()))
    if k is not None and (len(rows) != k or any(len(r) != k for r in rows)):
        raise ParseError(f"mask must be {k}x{k}", sc.text, start)
    return tuple(rows)


def _parse_seq(sc: _Scanner, p: int) -> LinearMatrixSequence:
    sc.expect("k")
    sc.expect("=")
    k = sc.integer()
    if k < 1:
        raise sc.error("k must be positive")
    left = right = None
    while sc.peek("left") or sc.peek("right"):
        which = sc.word()
        sc.expect("=")
        mask = _parse_const_matrix(sc, k)
        if which == "left":
            left = mask
        else:
            right = mask
    sc.expect("{")
    matrices = []
    while not sc.accept("}"):
        open_pos = sc.pos
        sc.expect("[")
        raw, start = sc.until("]")
        if sc.pos >= len(sc.text):
            raise sc.error("unclosed '['", open_pos)
        sc.expect("]")
        rows = []
        offset = start
        for row_text in raw.split(";"):
            row = []
            cell_off = offset
            for cell in row_text.split(","):
                row.append(parse_linear(cell, p, _base=sc.text, _offset=cell_off))
                cell_off += len(cell) + 1
            rows.append(tuple(row))
            offset += len(row_text) + 1
        if len(rows) != k or any(len(r) != k for r in rows):
            raise sc.error(f"matrix is not {k}x{k}", open_pos)
        matrices.append(LinearMatrix(tuple(rows)))
    if not matrices:
        raise sc.error("sequence has no matrices")
    return LinearMatrixSequence(p, k, tuple(matrices), left, right)


def _parse_abp(sc: _Scanner, p: int) -> Abp:
    sc.expect("{")
    levels: list[int] = []
    edges: dict[int, list] = {}
    while not sc.accept("}"):
        pos = sc.pos
        kw = sc.word()
        if kw == "level":
            levels.append(sc.integer())
        elif kw == "edges":
            gap = sc.integer()
            sc.expect(":")
            u = sc.integer()
            v = sc.integer()
            raw, start = sc.until(";}")
            edges.setdefault(gap, []).append((u, v, parse_linear(raw, p, _base=sc.text, _offset=start)))
        else:
            raise sc.error(f"unknown abp statement {kw!r}", pos)
        if not sc.accept(";") and not sc.peek("}"):
            raise sc.error("expected ';'")
    gaps = tuple(tuple(edges.get(g, ())) for g in range(max(len(levels) - 1, 0)))
    if any(g >= len(gaps) for g in edges):
        raise sc.error("edge gap index out of range")
    try:
        return Abp(p, tuple(levels), gaps)
    except ValueError as exc:
        raise sc.error(str(exc)) from None


def _parse_formula(sc: _Scanner, p: int):
    if sc.accept("("):
        op_pos = sc.pos
        sc.skip_ws()
        op = sc.text[sc.pos : sc.pos + 1]
        if op not in "+*" or not op:
            raise sc.error("expected '+' or '*'", op_pos)
        sc.pos += 1
        left = _parse_formula(sc, p)
        right = _parse_formula(sc, p)
        sc.expect(")")
        return Add(left, right) if op == "+" else Mul(left, right)
    raw, start = sc.until("() \t\n")
    if not raw:
        raise sc.error("expected a formula")
    lf = parse_linear(raw, p, _base=sc.text, _offset=start)
    if lf.num_terms() > 1 or lf.uses_z():
        raise ParseError(f"formula leaf must be c or c*xi, got {raw!r}", sc.text, start)
    if lf.coeffs:
        (i, c), = lf.coeffs
        return Leaf(c, i)
    return Leaf(lf.constant, None)


# serialization


def _fmt_formula(e, p: int) -> str:
    if isinstance(e, Leaf):
        if e.var is None:
            return str(Field.signed(Field(p), e.c))
        c = Field.signed(Field(p), e.c)
        if c == 1:
            return f"x{e.var}"
        if c == -1:
            return f"-x{e.var}"
        return f"{c}*x{e.var}"
    op = "+" if isinstance(e, Add) else "*"
    return f"({op} {_fmt_formula(e.left, p)} {_fmt_formula(e.right, p)})"


def _fmt_mask(m) -> str:
    return "[" + "; ".join(", ".join(str(x) for x in row) for row in m) + "]"


def serialize(circuit: Circuit, l_factors=None) -> str:
    """Canonical text for any circuit IR (parse(serialize(c)) == c)."""
    p = circuit.p
    lines = [f"field {p}"]
    if isinstance(circuit, DepthThreeCircuit):
        # an empty product is written as (1)
        prods = [" ".join(f"({lf})" for lf in prod) or "(1)" for prod in circuit.products]
        lines.append("sps { " + " ; ".join(prods) + " }")
    elif isinstance(circuit, LinearMatrixSequence):
        head = f"seq k={circuit.k}"
        if circuit.left_mask is not None:
            head += f" left={_fmt_mask(circuit.left_mask)}"
        if circuit.right_mask is not None:
            head += f" right={_fmt_mask(circuit.right_mask)}"
        lines.append(head + " {")
        for m in circuit.matrices:
            lines.append("  [" + "; ".join(", ".join(str(e) for e in row) for row in m.entries) + "]")
        lines.append("}")
    elif isinstance(circuit, Abp):
        lines.append("abp {")
        for count in circuit.levels:
            lines.append(f"  level {count};")
        for g, gap in enumerate(circuit.edges):
            for u, v, lf in gap:
                lines.append(f"  edges {g}: {u} {v} {lf};")
        lines.append("}")
    elif isinstance(circuit, FormulaCircuit):
        lines.append("formula " + _fmt_formula(circuit.root, p))
    else:
        raise TypeError(f"cannot serialize {type(circuit).__name__}")
    if l_factors is not None:
        lines.append("L: " + " ".join(f"({lf})" for lf in l_factors))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# algebras


@dataclass(frozen=True)
class AlgebraFile:
    basis: AlgebraBasis
    terms: tuple[tuple[tuple[int, ...], ...], ...] | None


def parse_algebra(text: str, default_p: int = DEFAULT_PRIME) -> AlgebraFile:
    p = default_p
    k = None
    identity = None
    table: dict[tuple[int, int], tuple[int, ...]] = {}
    terms = []
    offset = 0
    for raw_line in text.splitlines(keepends=True):
        line_off = offset
        offset += len(raw_line)
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue

        def err(msg):
            return ParseError(msg, text, line_off)

        head, _, rest = line.partition(" ")
        try:
            if head == "field":
                p = int(rest)
                Field(p)
            elif head == "algebra":
                m = re.fullmatch(r"k\s*=\s*(\d+)", rest.strip())
                if not m:
                    raise err("expected 'algebra k=<k>'")
                k = int(m.group(1))
            elif head == "identity":
                identity = tuple(int(x) for x in rest.split())
            elif head == "mult":
                lhs, sep, rhs = rest.partition(":")
                if not sep:
                    raise err("expected ':' in mult line")
                i, j = (int(x) for x in lhs.split())
                table[(i, j)] = tuple(int(x) for x in rhs.split())
            elif head == "term":
                terms.append(tuple(tuple(int(x) for x in part.split()) for part in rest.split("|")))
            else:
                raise err(f"unknown statement {head!r}")
        except ParseError:
            raise
        except ValueError as exc:
            raise err(str(exc)) from None
    if k is None:
        raise ParseError("missing 'algebra k=<k>' line", text, 0)
    if identity is None or len(identity) != k:
        raise ParseError(f"identity must have {k} coordinates", text, 0)
    missing = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1) if (i, j) not in table]
    if missing:
        raise ParseError(f"missing mult line for {missing[0]}", text, 0)
    if any(len(v) != k for v in table.values()):
        raise ParseError(f"mult vectors must have {k} coordinates", text, 0)
    if any(not (1 <= i <= k and 1 <= j <= k) for i, j in table):
        raise ParseError("mult index out of range", text, 0)
    structure = tuple(tuple(table[(i, j)] for j in range(1, k + 1)) for i in range(1, k + 1))
    basis = AlgebraBasis(p, structure, identity)
    for term in terms:
        if any(len(c) != k for c in term):
            raise ParseError(f"term coefficients must have {k} coordinates", text, 0)
    return AlgebraFile(basis, tuple(terms) if terms else None)


def serialize_algebra(b: AlgebraBasis, terms=None) -> str:
    lines = [f"field {b.p}", f"algebra k={b.k}", "identity " + " ".join(map(str, b.identity))]
    for i in range(b.k):
        for j in range(b.k):
            lines.append(f"mult {i + 1} {j + 1} : " + " ".join(map(str, b.structure[i][j])))
    for term in terms or ():
        lines.append("term " + " | ".join(" ".join(map(str, c)) for c in term))
    return "\n".join(lines) + "\n"

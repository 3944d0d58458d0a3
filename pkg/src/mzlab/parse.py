"""Text front end: expressions, operator specs, subspace specs, matrices.

Grammar (precedence high to low)::

    atom    := number | variable | '(' expr ')'
    power   := atom ('^' ['-'] integer)?
    unary   := '-' unary | power
    term    := unary (('*' | '/') unary)*
    expr    := term (('+' | '-') term)*

Variables are x1..xn; with one variable, ``x`` and ``t`` also mean x1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import InputError, NotAUnitError
from .operators import Derivation, EDerivation, Endomorphism, UnitForm
from .rings import QQ, LaurentPoly, Matrix, TruncSeries
from .rings.field import Field

Element = Union[LaurentPoly, TruncSeries]

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


class ParseError(InputError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at column {pos + 1}: {text!r}")
        self.column = pos + 1


@dataclass(frozen=True)
class Context:
    nvars: int = 1
    field: Field = QQ
    carrier: str = "laurent"      # "laurent" or "series"
    order: int = 32

    def __post_init__(self):
        if self.carrier not in ("laurent", "series"):
            raise InputError(f"unknown carrier {self.carrier!r}")
        if self.nvars < 1:
            raise InputError("need at least one variable")

    def constant(self, c) -> Element:
        if self.carrier == "series":
            return TruncSeries.constant(c, self.nvars, self.order, self.field)
        return LaurentPoly.constant(c, self.nvars, self.field)

    def var(self, i: int) -> Element:
        if self.carrier == "series":
            return TruncSeries.var(i, self.nvars, self.order, self.field)
        return LaurentPoly.var(i, self.nvars, self.field)


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, ctx: Context):
        self.text = text
        self.ctx = ctx
        self.toks = _tokens(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def fail(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def expect(self, op: str):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.fail(f"expected {op!r}", tok)

    def parse(self) -> Element:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self):
        acc = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                acc = acc * rhs
            else:
                acc = self.divide(acc, rhs, tok)
        return acc

    def divide(self, a, b, tok):
        try:
            return a / b
        except (NotAUnitError, ZeroDivisionError) as exc:
            self.fail(f"cannot divide: {exc}", tok)

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            neg = False
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                neg = True
            tok = self.take()
            if tok[0] != "num":
                self.fail("exponent must be an integer literal", tok)
            e = -int(tok[1]) if neg else int(tok[1])
            if e < 0:
                if self.ctx.carrier == "series" and not base.is_unit():
                    self.fail("negative exponent in power-series context", tok)
                if not base.is_unit():
                    self.fail(f"negative power of the non-unit {base}", tok)
            return base ** e
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return self.ctx.constant(Fraction(int(val)))
        if kind == "var":
            return self.ctx.var(self.var_index(val, tok))
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        self.fail("expected a number, variable or '('", tok)

    def var_index(self, name: str, tok) -> int:
        m = re.fullmatch(r"x(\d+)", name)
        if m:
            i = int(m.group(1))
            if 1 <= i <= self.ctx.nvars:
                return i - 1
            self.fail(f"unknown variable {name} (nvars = {self.ctx.nvars})", tok)
        if name in ("x", "t", "v") and self.ctx.nvars == 1:
            return 0
        self.fail(f"unknown variable {name}", tok)


def parse_expr(text: str, ctx: Context | None = None) -> Element:
    return _Parser(text, ctx or Context()).parse()


def infer_nvars(*texts: str) -> int:
    """Largest x<i> index mentioned (at least 1)."""
    idx = [int(m) for t in texts for m in re.findall(r"\bx(\d+)\b", t)]
    return max(idx, default=1)


# -- operator specs ------------------------------------------------------------

_ASSIGN = re.compile(r"\s*(?P<name>\w+)\s*\(\s*(?P<var>\w+)\s*\)\s*=\s*")


def _split_assignments(body: str) -> list[tuple[str, str, str]]:
    """'D(x1)=a, D(x2)=b' -> [(D, x1, a), (D, x2, b)]; commas inside parentheses are kept."""
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    parts.append("".join(cur))
    out = []
    for p in parts:
        if not p.strip():
            continue
        m = _ASSIGN.match(p)
        if not m:
            raise InputError(f"expected NAME(xi)=expr, got {p.strip()!r}")
        out.append((m.group("name"), m.group("var"), p[m.end():].strip()))
    return out


def _assignment_images(body: str, ctx: Context, names: tuple[str, ...]) -> list[Element]:
    pairs = _split_assignments(body)
    images: dict[int, Element] = {}
    for name, var, rhs in pairs:
        if name not in names:
            raise InputError(f"unexpected operator name {name!r}; use {names[0]}(xi)=...")
        i = _Parser(var, ctx).var_index(var, ("var", var, 0))
        if i in images:
            raise InputError(f"{var} assigned twice")
        images[i] = parse_expr(rhs, ctx)
    return [images.get(i) for i in range(ctx.nvars)]


def parse_derivation(body: str, ctx: Context) -> Derivation:
    """``D(x1)=..., D(x2)=...``; unassigned variables map to 0."""
    imgs = _assignment_images(body, ctx, ("D",))
    return Derivation(tuple(ctx.constant(0) if g is None else g for g in imgs))


def parse_endomorphism(body: str, ctx: Context) -> Endomorphism:
    """``phi(x1)=..., ...``; unassigned variables are fixed."""
    imgs = _assignment_images(body, ctx, ("phi",))
    return Endomorphism(tuple(ctx.var(i) if g is None else g for i, g in enumerate(imgs)))


def parse_operator(text: str, ctx: Context):
    """``derivation: ...``, ``endo: ...`` or ``ederivation: ...`` (delta = 1 - phi)."""
    head, sep, body = text.partition(":")
    if not sep:
        raise InputError("operator spec needs a 'derivation:', 'endo:' or 'ederivation:' prefix")
    head = head.strip()
    if head == "derivation":
        return parse_derivation(body, ctx)
    if head == "endo":
        return parse_endomorphism(body, ctx)
    if head == "ederivation":
        return EDerivation(parse_endomorphism(body, ctx))
    raise InputError(f"unknown operator kind {head!r}")


def parse_unit_forms(body: str, nvars: int, order: int, field: Field = QQ) -> list[UnitForm]:
    """``phi(x1)=x1^-1*(1+x2), ...`` with each image a monomial times a series unit.

    The monomial prefix is read off the lowest exponents of each variable.
    """
    ctx = Context(nvars, field, "laurent", order)
    out = []
    for g in _assignment_images(body, ctx, ("phi",)):
        if g is None or g.is_zero():
            raise InputError("every generator needs a nonzero unit-form image")
        alpha = tuple(min(a[i] for a in g.terms) for i in range(nvars))
        h = {tuple(e - s for e, s in zip(a, alpha)): c for a, c in g.terms.items()}
        out.append(UnitForm(alpha, TruncSeries(h, nvars, order, field)))
    return out


# -- subspaces and matrices ------------------------------------------------------

_TUPLE = re.compile(r"\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)")


def parse_subspace(text: str):
    from .mzspace import SubspaceSpec
    head, sep, body = text.partition(":")
    if not sep:
        body, head = text, "kernel-support"
    head = head.strip()
    if head not in ("kernel-support", "kernel-support-cofinite"):
        raise InputError(f"unknown subspace kind {head!r}")
    body = body.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise InputError("support set must be written {(a1,...,an), ...}")
    inner = body[1:-1]
    tuples = [tuple(int(x) for x in m.group(1).split(",")) for m in _TUPLE.finditer(inner)]
    if _TUPLE.sub("", inner).replace(",", "").strip():
        raise InputError(f"cannot read support set {body!r}")
    return SubspaceSpec(tuples, cofinite=head.endswith("cofinite"))


def parse_matrix(text: str, field: Field = QQ) -> Matrix:
    """First line n, then n rows of n entries (integers or p/q)."""
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise InputError("matrix text must start with a line holding n")
    try:
        n = int(lines[0][0])
        rows = [[field(x) for x in r] for r in lines[1:]]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad matrix entry: {exc}") from exc
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InputError(f"expected {n} rows of {n} entries")
    return Matrix(rows, field)


def parse_vector(text: str) -> tuple:
    """``(1,2,-3)`` or ``1,2,-3``."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    try:
        return tuple(Fraction(x.strip()) for x in body.split(",") if x.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad vector {text!r}") from exc

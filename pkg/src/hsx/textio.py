"""Parser and canonical printer for the expression and ordinal languages.

Grammar (ASCII, w stands for omega):

    expr   := term (('+'|'-') term)*
    term   := [rational '*'] factor ('^' int)?  |  rational
    factor := 'w' | 'exp(' expr ')' | 'log(' expr ')'
            | 'L[' ord '](' expr ')' | 'E[' ord '](' expr ')'
            | 'N{' id [';' expr] '}' | '(' expr ')'
    ord    := sum of 'w^(' ord ')' ['*' nat] | 'w' ['*' nat] | nat

Power sugar: 'w^(p/q)' desugars to exp(p/q*log(w)); integer powers are
restricted to +-1 on monomial factors.  Parsing evaluates through the exact
engine, so the result is always in expansion normal form; failures surface
as ParseError (syntax), StuckError, or NormalizationUndecided.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import Budget, ParseError, StuckError, ensure_budget
from . import expr as ex
from . import series
from . import ordinal as ords
from .expr import Monomial, NumberExpr, THyper, TNested, TOmega
from .ordinal import Ordinal, print_ordinal


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def span(self, start: int) -> SourceSpan:
        return SourceSpan(start, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, token: str) -> bool:
        self.skip_ws()
        if self.text.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str):
        if not self.eat(token):
            raise ParseError(f"expected {token!r}", SourceSpan(self.pos, self.pos + 1))

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected a number", SourceSpan(start, start + 1))
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        n = self.nat()
        if self.eat("/"):
            return Fraction(n, self.nat())
        return Fraction(n)

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] in "_@"):
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected an identifier", SourceSpan(start, start + 1))
        return self.text[start:self.pos]


# ---------------------------------------------------------------------------
# ordinals


def _parse_ord(sc: _Scanner) -> Ordinal:
    terms = []
    while True:
        start = sc.pos
        if sc.eat("w"):
            if sc.eat("^"):
                sc.expect("(")
                e = _parse_ord(sc)
                sc.expect(")")
            else:
                e = ords.ONE
            n = sc.nat() if sc.eat("*") else 1
        else:
            e = ords.ZERO
            n = sc.nat()
        if n < 1:
            raise ParseError("coefficients must be positive", sc.span(start))
        terms.append((e, n, start))
        if not sc.eat("+"):
            break
    out = ords.ZERO
    for e, n, start in terms:
        t = Ordinal(((e, n),))
        if not out.is_zero() and ords.compare(out.cnf[-1][0], e) is not ords.GREATER:
            raise ParseError("ordinal terms must be strictly decreasing", sc.span(start))
        out = ords.ord_sum(out, t)
    return out


def parse_ordinal(text: str) -> Ordinal:
    sc = _Scanner(text)
    if sc.eat("0"):
        sc.skip_ws()
        if sc.pos == len(sc.text):
            return ords.ZERO
        raise ParseError("trailing input after 0", SourceSpan(sc.pos, len(text)))
    o = _parse_ord(sc)
    sc.skip_ws()
    if sc.pos != len(text):
        raise ParseError("trailing input", SourceSpan(sc.pos, len(text)))
    return o


# ---------------------------------------------------------------------------
# expressions


def parse_number(text: str, budget: Budget | None = None) -> NumberExpr:
    b = ensure_budget(budget)
    sc = _Scanner(text)
    v = _parse_expr(sc, b)
    sc.skip_ws()
    if sc.pos != len(text):
        raise ParseError("trailing input", SourceSpan(sc.pos, len(text)))
    return v


def _parse_expr(sc: _Scanner, b: Budget) -> NumberExpr:
    out = _parse_term(sc, b, negate=False)
    while True:
        if sc.eat("+"):
            out = ex.add(out, _parse_term(sc, b, negate=False), b)
        elif sc.eat("-"):
            out = ex.add(out, _parse_term(sc, b, negate=True), b)
        else:
            return out


def _parse_term(sc: _Scanner, b: Budget, negate: bool) -> NumberExpr:
    sc.skip_ws()
    coeff = Fraction(1)
    if sc.peek().isdigit():
        coeff = sc.rational()
        if not sc.eat("*"):
            return ex.const(-coeff if negate else coeff)
    v = _parse_factor(sc, b)
    if sc.eat("^"):
        start = sc.pos
        if sc.eat("("):
            # rational power sugar on w-like monomials: x^(p/q) = exp(p/q*log x)
            sign = -1 if sc.eat("-") else 1
            q = sc.rational() * sign
            sc.expect(")")
            v = series.exp_partial(ex.scale(q, series.log_partial(v, 0, b)), b)
        else:
            sign = -1 if sc.eat("-") else 1
            n = sc.nat() * sign
            if n not in (1, -1):
                raise ParseError(
                    "integer powers are limited to 1 and -1; use '^(p/q)' sugar",
                    sc.span(start),
                )
            if n == -1:
                if len(v.terms) != 1 or v.terms[0][0] != 1:
                    raise ParseError("'^-1' applies to monomials only", sc.span(start))
                v = NumberExpr(((Fraction(1), ex.mono_inv(v.terms[0][1])),))
    if negate:
        v = ex.neg(v)
    return ex.scale(coeff, v) if coeff != 1 else v


def _parse_factor(sc: _Scanner, b: Budget) -> NumberExpr:
    sc.skip_ws()
    start = sc.pos
    if sc.eat("exp("):
        arg = _parse_expr(sc, b)
        sc.expect(")")
        return series.exp_partial(arg, b)
    if sc.eat("log("):
        arg = _parse_expr(sc, b)
        sc.expect(")")
        v = series.log_partial(arg, 0, b)
        if not v.exact:
            raise StuckError("log of a non-monomial needs log_partial with an order")
        return v
    if sc.eat("L["):
        g = ords.ZERO if sc.eat("0") else _parse_ord(sc)
        sc.expect("]")
        sc.expect("(")
        arg = _parse_expr(sc, b)
        sc.expect(")")
        v = ex.rewrite_L(g, arg, b)
        if v is None:
            raise StuckError(f"L[{print_ordinal(g)}] has no exact value on this argument")
        return v
    if sc.eat("E["):
        g = _parse_ord(sc)
        sc.expect("]")
        sc.expect("(")
        arg = _parse_expr(sc, b)
        sc.expect(")")
        m = ex.apply_E(g, arg, b)
        if m is None:
            raise StuckError(f"E[{print_ordinal(g)}] has no exact value on this argument")
        return NumberExpr(((Fraction(1), m),))
    if sc.eat("N{"):
        name = sc.ident()
        level = 0
        if "@" in name:
            name, _, lv = name.partition("@")
            level = int(lv)
        rank = None
        if sc.eat(";"):
            rank = _parse_expr(sc, b)
        sc.expect("}")
        from . import nested
        if nested.lookup(name) is None:
            raise ParseError(f"unknown nested sequence {name!r}", sc.span(start))
        return ex.atom_series(TNested(name, level, rank))
    if sc.eat("("):
        v = _parse_expr(sc, b)
        sc.expect(")")
        return v
    if sc.eat("w"):
        return ex.OMEGA_EXPR
    if sc.peek().isdigit():
        return ex.const(sc.rational())
    raise ParseError("expected a factor", SourceSpan(start, start + 1))


# ---------------------------------------------------------------------------
# printing (canonical, ASCII, golden-stable)


def print_number(e: NumberExpr) -> str:
    if e.is_zero():
        return "0"
    parts = []
    for idx, (c, m) in enumerate(e.terms):
        mag = abs(c)
        if m.is_one():
            body = str(mag)
        elif mag == 1:
            body = print_monomial(m)
        else:
            body = f"{mag}*{print_monomial(m)}"
        if idx == 0:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts)


def print_monomial(m: Monomial) -> str:
    if m.is_one():
        return "1"
    if m.psi.is_zero():
        body = _print_tail(m.tail)
        return body if m.iota == 1 else f"{body}^-1"
    return f"exp({print_number(ex.mono_log(m))})"


def _print_tail(t) -> str:
    if isinstance(t, TOmega):
        if t.beta.is_zero():
            return "w"
        return f"L[{print_ordinal(t.beta)}](w)"
    if isinstance(t, THyper):
        if t.alpha == ords.ONE:
            core = f"exp({print_number(t.u)})"
        else:
            core = f"E[{print_ordinal(t.alpha)}]({print_number(t.u)})"
        if t.beta.is_zero():
            return core
        return f"L[{print_ordinal(t.beta)}]({core})"
    name = t.seq if t.level == 0 else f"{t.seq}@{t.level}"
    if t.rank is None:
        return f"N{{{name}}}"
    return f"N{{{name}; {print_number(t.rank)}}}"


# ---------------------------------------------------------------------------
# coding-sequence files


def parse_coding(payload: str | dict):
    """JSON format: {"levels": [{"phi": expr, "eps": +-1, "psi": expr,
    "iota": +-1, "alpha": ord}], "period": int?, "wrap_shift": ord?}."""
    from .nested import CodingLevel, CodingSequence

    data = json.loads(payload) if isinstance(payload, str) else payload
    if not isinstance(data, dict) or "levels" not in data:
        raise ParseError("coding file needs a 'levels' array")
    levels = []
    for i, raw in enumerate(data["levels"]):
        try:
            phi = parse_number(raw.get("phi", "0")) if raw.get("phi", "0") != "0" else ex.ZERO_EXPR
            psi = parse_number(raw.get("psi", "0")) if raw.get("psi", "0") != "0" else ex.ZERO_EXPR
            eps = int(raw.get("eps", 1))
            iota = int(raw.get("iota", 1))
            alpha = parse_ordinal(str(raw.get("alpha", "1")))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"level {i}: malformed field ({exc})")
        levels.append(CodingLevel(phi, eps, psi, iota, alpha))
    period = data.get("period")
    if period is not None:
        if not isinstance(period, int) or not 0 <= period < len(levels):
            raise ParseError("malformed 'period': must index a listed level")
    shift = data.get("wrap_shift")
    wrap = parse_ordinal(str(shift)) if shift is not None else None
    return CodingSequence(tuple(levels), period, wrap)

"""Field-style operations on finite-support series.

Everything is exact except where an explicit truncation order is requested;
order-truncated results carry ``exact=False`` and the flag propagates
through arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import Budget, UndecidedError, ensure_budget
from . import expr as ex
from .expr import Monomial, NumberExpr


@dataclass(frozen=True)
class SeriesSplit:
    purely_large: NumberExpr
    real_part: Fraction
    infinitesimal: NumberExpr


def add(f: NumberExpr, g: NumberExpr, budget: Budget | None = None) -> NumberExpr:
    return ex.add(f, g, budget)


def sub(f: NumberExpr, g: NumberExpr, budget: Budget | None = None) -> NumberExpr:
    return ex.sub(f, g, budget)


def neg(f: NumberExpr) -> NumberExpr:
    return ex.neg(f)


def scale(q, f: NumberExpr) -> NumberExpr:
    return ex.scale(q, f)


def mul(f: NumberExpr, g: NumberExpr, budget: Budget | None = None) -> NumberExpr:
    """Finite Cauchy product, re-sorted and normalized."""
    b = ensure_budget(budget)
    pairs = []
    for cf, mf in f.terms:
        for cg, mg in g.terms:
            pairs.append((cf * cg, ex.mono_mul(mf, mg, b)))
    return ex.nexpr(pairs, f.exact and g.exact)


def dominant(f: NumberExpr) -> tuple[Fraction, Monomial]:
    """Leading term (coefficient, dominant monomial); f must be nonzero."""
    if f.is_zero():
        raise ValueError("the zero series has no dominant monomial")
    return f.terms[0]


def truncate_above(f: NumberExpr, m: Monomial, budget: Budget | None = None) -> NumberExpr:
    """Keep the terms with monomial strictly above m."""
    b = ensure_budget(budget)
    kept = []
    for c, n in f.terms:
        cm = ex.compare_monomials(n, m, b)
        if cm is None:
            raise UndecidedError(f"cannot compare {n!r} against the cut monomial")
        if cm > 0:
            kept.append((c, n))
        else:
            break
    return NumberExpr(tuple(kept), f.exact)


def is_truncation(g: NumberExpr, f: NumberExpr, budget: Budget | None = None) -> bool:
    """g is a truncation of f: supp(f - g) lies strictly below every g-term."""
    b = ensure_budget(budget)
    diff = ex.sub(f, g, b)
    if diff.is_zero():
        return True
    if g.is_zero():
        return True
    lead = diff.terms[0][1]
    last = g.terms[-1][1]
    cm = ex.compare_monomials(lead, last, b)
    if cm is None:
        raise UndecidedError("truncation test hit an undecided comparison")
    return cm < 0


def split3(f: NumberExpr) -> SeriesSplit:
    large, real, small = ex.split_classes(f)
    return SeriesSplit(large, real, small)


def compare_series(f: NumberExpr, g: NumberExpr, budget: Budget | None = None):
    """-1/0/+1, or None when the leading comparison is undecided."""
    return ex.compare_series(f, g, budget)


def exp_partial(f: NumberExpr, budget: Budget | None = None) -> NumberExpr:
    """exp of a purely large (or zero) series: a single monomial."""
    m = ex.exp_purely_large(f, ensure_budget(budget))
    return NumberExpr(((Fraction(1), m),), f.exact)


def log_partial(f: NumberExpr, order: int = 0, budget: Budget | None = None) -> NumberExpr:
    """log via the dominant-monomial formula, Mercator tail cut at `order`.

    Requires f > 0 with leading coefficient 1 so no transcendental constant
    appears.  The result is exact iff f is its own dominant term.
    """
    b = ensure_budget(budget)
    if f.is_zero() or f.terms[0][0] <= 0:
        raise ValueError("log needs a positive series")
    c0, m0 = f.terms[0]
    if c0 != 1:
        raise ValueError("log: leading coefficient must be 1 over exact rationals")
    head = ex.mono_log(m0)
    if len(f.terms) == 1:
        return NumberExpr(head.terms, f.exact)
    # f = m0 * (1 + eps)
    inv0 = NumberExpr(((Fraction(1), ex.mono_inv(m0)),))
    eps = mul(NumberExpr(f.terms[1:], f.exact), inv0, b)
    out = head
    power = ex.const(1)
    for k in range(order):
        power = mul(power, eps, b)  # eps^(k+1)
        out = ex.add(out, scale(Fraction((-1) ** k, k + 1), power), b)
    return NumberExpr(out.terms, False)


def invert_to_order(f: NumberExpr, order: int = 0, budget: Budget | None = None) -> NumberExpr:
    """Geometric-series inverse up to `order`; exact when f is a term."""
    b = ensure_budget(budget)
    if f.is_zero():
        raise ValueError("cannot invert 0")
    c0, m0 = f.terms[0]
    lead_inv = NumberExpr(((1 / c0, ex.mono_inv(m0)),))
    if len(f.terms) == 1:
        return NumberExpr(lead_inv.terms, f.exact)
    eps = mul(NumberExpr(f.terms[1:], f.exact), scale(1 / c0, NumberExpr(((Fraction(1), ex.mono_inv(m0)),))), b)
    acc = ex.const(1)
    power = ex.const(1)
    for k in range(order):
        power = scale(-1, mul(power, eps, b))
        acc = ex.add(acc, power, b)
    return NumberExpr(mul(acc, lead_inv, b).terms, False)

"""Expansion normal form: classify monomials into tuples and reassemble them.

A monomial decomposes uniquely as ``e^psi (L_beta E_alpha^u)^iota`` (type I),
``e^psi (L_beta w)^iota`` (type II), or the unit; tuples make that data
explicit and `assemble` validates the invariants when putting them back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import Budget, StuckError, UndecidedError, ensure_budget, GREATER
from . import expr as ex
from . import ordinal as ords
from .expr import Monomial, NumberExpr, THyper, TNested, TOmega
from .ordinal import ONE as ORD1, Ordinal, ZERO as ORD0


@dataclass(frozen=True)
class ExpansionTuple:
    psi: NumberExpr
    iota: int
    alpha: Ordinal  # 0 for type II and the unit
    beta: Ordinal
    u: NumberExpr  # the series w for type II; 0 for the unit
    kind: str  # "unit" | "I" | "II" | "nested"


UNIT_TUPLE = ExpansionTuple(ex.ZERO_EXPR, 0, ORD0, ORD0, ex.ZERO_EXPR, "unit")


def expand(m: Monomial, budget: Budget | None = None) -> ExpansionTuple:
    """Read off the unique expansion tuple of a normal-form monomial."""
    if m.is_one():
        return UNIT_TUPLE
    t = m.tail
    if isinstance(t, TNested):
        return ExpansionTuple(m.psi, m.iota, ORD0, ORD0, ex.atom_series(t), "nested")
    if isinstance(t, TOmega):
        return ExpansionTuple(m.psi, m.iota, ORD0, t.beta, ex.OMEGA_EXPR, "II")
    return ExpansionTuple(m.psi, m.iota, t.alpha, t.beta, t.u, "I")


def assemble(t: ExpansionTuple, budget: Budget | None = None) -> Monomial:
    """Rebuild the shell, checking every tuple invariant; expand(assemble(t)) = t."""
    b = ensure_budget(budget)
    if t.kind == "unit":
        if not (t.psi.is_zero() and t.iota == 0 and t.alpha.is_zero() and t.beta.is_zero() and t.u.is_zero()):
            raise ValueError("unit tuple must be all zero")
        return ex.MONO_ONE
    if t.iota not in (-1, 1):
        raise ValueError("iota must be -1 or +1")
    if not ex.is_purely_large(t.psi):
        raise ValueError("psi must be purely large")
    if t.kind == "nested":
        if len(t.u.terms) != 1 or not isinstance(t.u.terms[0][1].tail, TNested):
            raise ValueError("nested tuple must carry a nested atom")
        return Monomial(t.psi, t.iota, t.u.terms[0][1].tail)
    if t.kind == "II":
        if not t.alpha.is_zero():
            raise ValueError("type II requires alpha = 0")
        tail = TOmega(t.beta)
    else:
        if not (t.alpha.is_power_of_omega()):
            raise ValueError("type I requires alpha a power of w, alpha >= 1")
        if not t.beta.is_zero() and ords.compare(ords.times_omega(t.beta), t.alpha) is not ords.LESS:
            raise ValueError("type I requires beta*w < alpha")
        if not ex.is_positive_infinite(t.u):
            raise ValueError("u must be positive infinite")
        if t.alpha == ORD1:
            if not t.psi.is_zero() or t.iota != 1:
                raise ValueError("alpha = 1 forces psi = 0 and iota = 1")
            if ex.tail_atomic_split(t.u) is not None:
                raise ValueError("alpha = 1 forces u not tail-atomic")
        if ex._is_truncated(t.u, t.alpha, b) == -1:
            raise ValueError("u fails the alpha-truncatedness requirement")
        tail = THyper(t.beta, t.alpha, t.u)
    shell = Monomial(t.psi, t.iota, tail)
    if not t.psi.is_zero():
        probe = ex._atom_log_series(tail)
        for _, m in t.psi.terms:
            c = ex.compare_monomials(m, probe.terms[0][1], b) if len(probe.terms) == 1 else ex.compare_series(
                ex.NumberExpr(((Fraction(1), m),)), probe, b
            )
            if c is None:
                raise UndecidedError("cannot verify supp psi > log(tail)")
            if c is not GREATER:
                raise ValueError("supp psi must dominate the log of the tail")
    return shell


def is_atomic(m: Monomial, strength: Ordinal, budget: Budget | None = None) -> bool:
    """L_{<strength}-atomicity via the CNF split criterion."""
    return ex.is_atomic_monomial(m, strength)


def dominant_atomic(m: Monomial, strength: Ordinal, budget: Budget | None = None) -> Monomial:
    """Project an atom L_beta E_alpha^u with alpha >= strength onto its
    strength-atomic dominant part by dropping the small half of beta."""
    if not strength.is_power_of_omega():
        raise ValueError("strength must be a power of w")
    if m.is_one() or not m.psi.is_zero() or m.iota != 1 or not isinstance(m.tail, THyper):
        raise ValueError("dominant_atomic expects an atom L_beta E_alpha^u")
    if ords.compare(m.tail.alpha, strength) is ords.LESS:
        raise ValueError("atom strength below the requested projection strength")
    hi, _ = ords.split_at(m.tail.beta, ords.alpha_over_omega(strength))
    return ex.atom(THyper(hi, m.tail.alpha, m.tail.u))


def tail_atomic(phi: NumberExpr, budget: Budget | None = None):
    """Decomposition psi ++ iota*a with a log-atomic, or None."""
    if not ex.is_purely_large(phi):
        raise ValueError("tail_atomic expects a purely large argument")
    return ex.tail_atomic_split(phi)


YES, UNKNOWN, NO = 1, 0, -1


def is_truncated(f: NumberExpr, beta: Ordinal, budget: Budget | None = None) -> int:
    """Three-valued beta-truncatedness: YES (1), NO (-1), UNKNOWN (0)."""
    return ex.is_truncated(f, beta, budget)


def sharp(f: NumberExpr, beta: Ordinal, budget: Budget | None = None) -> NumberExpr | None:
    """Maximal beta-truncated truncation, scanning from the top; None = unknown."""
    return ex.sharp(f, beta, budget)


def tuple_as_dict(t: ExpansionTuple) -> dict:
    from .textio import print_number
    from .ordinal import print_ordinal
    return {
        "psi": print_number(t.psi),
        "iota": t.iota,
        "type": t.kind,
        "alpha": print_ordinal(t.alpha),
        "beta": print_ordinal(t.beta),
        "u": print_number(t.u),
    }

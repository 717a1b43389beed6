"""The logarithmic-hyperseries fragment: monomials l[g], derivation, shifts.

A log-monomial is a finite power product of hyperlogarithm symbols l[g]
(g an ordinal), optionally times formal inverse-prefix factors
``invp(d) = prod_{i<d} l[i]^-1`` for limit d; these keep the derivation total
at limit indices while everything stays finitely presented.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import ordinal as ords
from .ordinal import Ordinal, ZERO as ORD0
from .errors import EQUAL, GREATER, LESS


@dataclass(frozen=True)
class LogMonomial:
    powers: tuple[tuple[Ordinal, Fraction], ...] = ()  # sorted by index
    sym: tuple[tuple[Ordinal, int], ...] = ()  # inverse-prefix factors, limit keys

    def is_one(self) -> bool:
        return not self.powers and not self.sym


LOG_ONE = LogMonomial()


def _dict(pairs):
    return {k: v for k, v in pairs}


def _pack(d, drop_zero=True):
    items = [(k, v) for k, v in d.items() if not (drop_zero and v == 0)]
    items.sort(key=lambda kv: _sort_key(kv[0]))
    return tuple(items)


_KEY_CACHE: dict[Ordinal, tuple] = {}


def _sort_key(o: Ordinal):
    # structural key compatible with the ordinal order (lexicographic CNF)
    k = _KEY_CACHE.get(o)
    if k is None:
        k = tuple((_sort_key(e), n) for e, n in o.cnf)
        _KEY_CACHE[o] = k
    return k


def ell(gamma: Ordinal, power=1) -> LogMonomial:
    p = Fraction(power)
    return LogMonomial(((gamma, p),)) if p != 0 else LOG_ONE


def inv_prefix(delta: Ordinal) -> LogMonomial:
    """The formal product of l[i]^-1 over i < delta, canonicalized."""
    if delta.is_zero():
        return LOG_ONE
    limit_part = Ordinal(tuple(t for t in delta.cnf if not t[0].is_zero()))
    fin = delta.cnf[-1][1] if delta.is_successor() else 0
    powers = {}
    for j in range(fin):
        powers[ords.ord_sum(limit_part, ords.from_int(j))] = Fraction(-1)
    sym = {limit_part: 1} if not limit_part.is_zero() else {}
    return LogMonomial(_pack(powers), _pack(sym))


def mono_mul(a: LogMonomial, b: LogMonomial) -> LogMonomial:
    p = _dict(a.powers)
    for k, v in b.powers:
        p[k] = p.get(k, Fraction(0)) + v
    s = _dict(a.sym)
    for k, v in b.sym:
        s[k] = s.get(k, 0) + v
    return LogMonomial(_pack(p), _pack(s))


def mono_inv(a: LogMonomial) -> LogMonomial:
    return LogMonomial(
        tuple((k, -v) for k, v in a.powers), tuple((k, -v) for k, v in a.sym)
    )


def _effective_exponent(m: LogMonomial, gamma: Ordinal) -> Fraction:
    e = Fraction(0)
    for k, v in m.powers:
        if ords.compare(k, gamma) is EQUAL:
            e += v
    for k, v in m.sym:
        if ords.compare(gamma, k) is LESS:
            e -= v
    return e


def _candidates(*monos: LogMonomial):
    keys = {ORD0}
    for m in monos:
        keys.update(k for k, _ in m.powers)
        keys.update(k for k, _ in m.sym)
    return sorted(keys, key=_sort_key)


def mono_compare(a: LogMonomial, b: LogMonomial) -> int:
    """Group order: decided by the sign at the least differing index."""
    if a == b:
        return EQUAL
    for g in _candidates(a, b):
        d = _effective_exponent(a, g) - _effective_exponent(b, g)
        if d != 0:
            return GREATER if d > 0 else LESS
    return EQUAL


@dataclass(frozen=True)
class LogSeries:
    terms: tuple[tuple[Fraction, LogMonomial], ...] = ()

    def is_zero(self) -> bool:
        return not self.terms


def log_series(pairs) -> LogSeries:
    acc: list[tuple[Fraction, LogMonomial]] = []
    for c, m in pairs:
        c = Fraction(c)
        if c == 0:
            continue
        for i, (c0, m0) in enumerate(acc):
            if m0 == m:
                acc[i] = (c0 + c, m0)
                break
        else:
            acc.append((c, m))
    acc = [(c, m) for c, m in acc if c != 0]
    acc.sort(key=lambda t: _cmp_key(t[1]), reverse=True)
    return LogSeries(tuple(acc))


def _cmp_key(m: LogMonomial):
    return _CmpWrap(m)


class _CmpWrap:
    __slots__ = ("m",)

    def __init__(self, m):
        self.m = m

    def __lt__(self, other):
        return mono_compare(self.m, other.m) is LESS

    def __eq__(self, other):
        return mono_compare(self.m, other.m) is EQUAL


def add(f: LogSeries, g: LogSeries) -> LogSeries:
    return log_series(f.terms + g.terms)


def scale(q, f: LogSeries) -> LogSeries:
    q = Fraction(q)
    return log_series(tuple((q * c, m) for c, m in f.terms))


def mul(f: LogSeries, g: LogSeries) -> LogSeries:
    return log_series(
        tuple((cf * cg, mono_mul(mf, mg)) for cf, mf in f.terms for cg, mg in g.terms)
    )


def unit(m: LogMonomial) -> LogSeries:
    return LogSeries(((Fraction(1), m),))


def log_dagger(gamma: Ordinal) -> LogMonomial:
    """The log-derivative of l[gamma]: inverse prefix up to and incl. gamma."""
    return inv_prefix(ords.succ(gamma))


def derive_mono(m: LogMonomial) -> LogSeries:
    """d(l) = (sum_g l_g * dagger(g)) * l; sym factors differentiate to 0 here.

    Inverse-prefix factors only ever appear as images of the derivation; a
    second derivative of those is outside the fragment and rejected.
    """
    if m.sym:
        raise ValueError("cannot differentiate a symbolic inverse-prefix factor")
    parts = []
    for g, e in m.powers:
        parts.append((e, mono_mul(log_dagger(g), m)))
    return log_series(parts)


def derive(f: LogSeries) -> LogSeries:
    out = LogSeries()
    for c, m in f.terms:
        out = add(out, scale(c, derive_mono(m)))
    return out


def compose_ell(g: LogSeries, gamma: Ordinal) -> LogSeries:
    """Right-composition with l[gamma]: index shift r -> ord_sum(gamma, r)."""
    out = []
    for c, m in g.terms:
        p = {ords.ord_sum(gamma, k): v for k, v in m.powers}
        s: dict[Ordinal, int] = {}
        for k, v in m.sym:
            # prod_{i<k} l[gamma+i]^-1 = invp(gamma+k) / invp(gamma)
            s[ords.ord_sum(gamma, k)] = s.get(ords.ord_sum(gamma, k), 0) + v
            pref = inv_prefix(gamma)
            for kk, vv in pref.sym:
                s[kk] = s.get(kk, 0) - v * vv
            for kk, vv in pref.powers:
                p[kk] = p.get(kk, Fraction(0)) - v * vv
        out.append((c, LogMonomial(_pack(p), _pack(s))))
    return log_series(out)


def upshift(g: LogSeries, gamma: Ordinal) -> LogSeries:
    """Inverse of compose_ell; every index must be of the form gamma + r."""
    out = []
    for c, m in g.terms:
        p = _dict(m.powers)
        s = _dict(m.sym)
        shifted_sym: dict[Ordinal, int] = {}
        for k in list(s):
            lam = ords.left_subtract(gamma, k)
            if lam is not None and lam.is_limit():
                shifted_sym[lam] = shifted_sym.get(lam, 0) + s.pop(k)
        total = sum(shifted_sym.values())
        if total:
            pref = inv_prefix(gamma)
            for kk, vv in pref.sym:
                s[kk] = s.get(kk, 0) + total * vv
            for kk, vv in pref.powers:
                p[kk] = p.get(kk, Fraction(0)) + total * vv
        if any(v != 0 for v in s.values()):
            raise ValueError(f"series is not in the image of composition with l[{gamma}]")
        np = {}
        for k, v in p.items():
            if v == 0:
                continue
            r = ords.left_subtract(gamma, k)
            if r is None:
                raise ValueError(f"index {k} is not of the form {gamma} + rho")
            np[r] = v
        out.append((c, LogMonomial(_pack(np), _pack(shifted_sym))))
    return log_series(out)

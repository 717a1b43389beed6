"""Exact ordinal arithmetic in Cantor normal form.

An ordinal is a finite sum ``w^(e1)*n1 + ... + w^(er)*nr`` with strictly
decreasing exponents (themselves ordinals) and positive integer
coefficients; the empty sum is 0.  This covers every index the expansion
engine manipulates.  All values are immutable and all operations pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import EQUAL, GREATER, LESS


@dataclass(frozen=True)
class Ordinal:
    cnf: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        for _, n in self.cnf:
            if n < 1:
                raise ValueError("CNF coefficients must be >= 1")

    def is_zero(self) -> bool:
        return not self.cnf

    def is_finite(self) -> bool:
        return not self.cnf or (len(self.cnf) == 1 and self.cnf[0][0].is_zero())

    def finite_value(self) -> int:
        if self.is_zero():
            return 0
        if not self.is_finite():
            raise ValueError(f"{self} is infinite")
        return self.cnf[0][1]

    def lead_exp(self) -> "Ordinal":
        if self.is_zero():
            raise ValueError("0 has no leading exponent")
        return self.cnf[0][0]

    def is_successor(self) -> bool:
        return bool(self.cnf) and self.cnf[-1][0].is_zero()

    def is_limit(self) -> bool:
        return bool(self.cnf) and not self.is_successor()

    def is_power_of_omega(self) -> bool:
        return len(self.cnf) == 1 and self.cnf[0][1] == 1

    def exponents(self) -> tuple["Ordinal", ...]:
        return tuple(e for e, _ in self.cnf)

    def __lt__(self, other: "Ordinal") -> bool:
        return compare(self, other) is LESS

    def __le__(self, other: "Ordinal") -> bool:
        return compare(self, other) is not GREATER

    def __gt__(self, other: "Ordinal") -> bool:
        return compare(self, other) is GREATER

    def __ge__(self, other: "Ordinal") -> bool:
        return compare(self, other) is not LESS

    def __str__(self) -> str:
        return print_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal<{print_ordinal(self)}>"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("ordinals are non-negative")
    return ZERO if n == 0 else Ordinal(((ZERO, n),))


def omega_power(exp: Ordinal) -> Ordinal:
    return Ordinal(((exp, 1),))


def compare(a: Ordinal, b: Ordinal) -> int:
    """Total order on ordinals; returns LESS/EQUAL/GREATER."""
    for (ea, na), (eb, nb) in zip(a.cnf, b.cnf):
        c = compare(ea, eb)
        if c is not EQUAL:
            return c
        if na != nb:
            return LESS if na < nb else GREATER
    if len(a.cnf) == len(b.cnf):
        return EQUAL
    return LESS if len(a.cnf) < len(b.cnf) else GREATER


def ord_sum(a: Ordinal, b: Ordinal) -> Ordinal:
    """Cantor's non-commutative sum: small left terms are absorbed by b."""
    if b.is_zero():
        return a
    eb = b.lead_exp()
    kept = [t for t in a.cnf if compare(t[0], eb) is GREATER]
    merged = list(b.cnf)
    if a.cnf and len(kept) < len(a.cnf) and compare(a.cnf[len(kept)][0], eb) is EQUAL:
        merged[0] = (eb, a.cnf[len(kept)][1] + b.cnf[0][1])
    return Ordinal(tuple(kept) + tuple(merged))


def ord_sum_many(*parts: Ordinal) -> Ordinal:
    out = ZERO
    for p in parts:
        out = ord_sum(out, p)
    return out


def succ(a: Ordinal) -> Ordinal:
    return ord_sum(a, ONE)


def hess_sum(a: Ordinal, b: Ordinal) -> Ordinal:
    """Commutative (Hessenberg) sum: coefficient-wise CNF merge."""
    terms: list[tuple[Ordinal, int]] = []
    i = j = 0
    while i < len(a.cnf) or j < len(b.cnf):
        if i == len(a.cnf):
            terms.append(b.cnf[j]); j += 1
        elif j == len(b.cnf):
            terms.append(a.cnf[i]); i += 1
        else:
            c = compare(a.cnf[i][0], b.cnf[j][0])
            if c is GREATER:
                terms.append(a.cnf[i]); i += 1
            elif c is LESS:
                terms.append(b.cnf[j]); j += 1
            else:
                terms.append((a.cnf[i][0], a.cnf[i][1] + b.cnf[j][1]))
                i += 1; j += 1
    return Ordinal(tuple(terms))


def hess_prod(a: Ordinal, b: Ordinal) -> Ordinal:
    """Commutative (Hessenberg) product: distribute, hess_sum the exponents."""
    out = ZERO
    for ea, na in a.cnf:
        for eb, nb in b.cnf:
            out = hess_sum(out, Ordinal(((hess_sum(ea, eb), na * nb),)))
    return out


def ord_mul(a: Ordinal, b: Ordinal) -> Ordinal:
    """Cantor's non-commutative product (unused elsewhere, kept complete)."""
    if a.is_zero() or b.is_zero():
        return ZERO
    out = ZERO
    for eb, nb in b.cnf:
        if eb.is_zero():
            head = Ordinal(((a.cnf[0][0], a.cnf[0][1] * nb),) + a.cnf[1:])
            out = ord_sum(out, head)
        else:
            out = ord_sum(out, Ordinal(((ord_sum(a.lead_exp(), eb), nb),)))
    return out


def times_omega(a: Ordinal) -> Ordinal:
    """a * w in ordinal product; the type-I bound test uses it."""
    if a.is_zero():
        return ZERO
    return omega_power(succ(a.lead_exp()))


class Dom(Enum):
    """Archimedean comparison of ordinals: strictly below, same class, above."""
    PREC = "prec"
    SIM = "sim"
    SUCC = "succ"


def preceq(a: Ordinal, b: Ordinal) -> bool:
    """a <= b*n for some natural n."""
    if a.is_zero():
        return True
    if b.is_zero():
        return False
    return compare(a.lead_exp(), b.lead_exp()) is not GREATER


def prec(a: Ordinal, b: Ordinal) -> bool:
    """a*n < b for all naturals n."""
    if a.is_zero():
        return not b.is_zero()
    if b.is_zero():
        return False
    return compare(omega_power(succ(a.lead_exp())), b) is not GREATER


def dominance(a: Ordinal, b: Ordinal) -> Dom:
    if prec(a, b):
        return Dom.PREC
    if prec(b, a):
        return Dom.SUCC
    return Dom.SIM


def mll(a: Ordinal, b: Ordinal) -> bool:
    """a << b: a is strictly dominated by every CNF exponent scale of b."""
    return all(prec(a, omega_power(e)) for e in b.exponents())


def lleq(a: Ordinal, b: Ordinal) -> bool:
    """a <=<= b: a is dominated-or-similar to every exponent scale of b."""
    return all(preceq(a, omega_power(e)) for e in b.exponents())


def split_at(b: Ordinal, threshold: Ordinal) -> tuple[Ordinal, Ordinal]:
    """Split b into (terms with w^exp >= threshold, the rest).

    The threshold must be a power of w; b reassembles as ord_sum of parts.
    """
    if not threshold.is_power_of_omega():
        raise ValueError(f"threshold {threshold} is not a power of w")
    cut = threshold.lead_exp()
    hi = tuple(t for t in b.cnf if compare(t[0], cut) is not LESS)
    lo = tuple(t for t in b.cnf if compare(t[0], cut) is LESS)
    return Ordinal(hi), Ordinal(lo)


def mu_minus(mu: Ordinal) -> Ordinal:
    """Predecessor for successors; limits and 0 are their own mu_minus."""
    if not mu.is_successor():
        return mu
    last_exp, last_n = mu.cnf[-1]
    if last_n > 1:
        return Ordinal(mu.cnf[:-1] + ((last_exp, last_n - 1),))
    return Ordinal(mu.cnf[:-1])


def alpha_over_omega(alpha: Ordinal) -> Ordinal:
    """w^(mu_minus) for alpha = w^mu."""
    if not alpha.is_power_of_omega():
        raise ValueError(f"{alpha} is not a power of w")
    return omega_power(mu_minus(alpha.lead_exp()))


def left_subtract(gamma: Ordinal, b: Ordinal) -> Ordinal | None:
    """The unique rho with ord_sum(gamma, rho) = b, or None when b < gamma."""
    if gamma.is_zero():
        return b
    if b.is_zero():
        return None
    i = 0
    while i < len(gamma.cnf):
        if i >= len(b.cnf):
            return None
        (eg, ng), (eb, nb) = gamma.cnf[i], b.cnf[i]
        c = compare(eg, eb)
        if c is LESS:
            return Ordinal(b.cnf[i:])
        if c is GREATER or ng > nb:
            return None
        if ng < nb:
            return Ordinal(((eb, nb - ng),) + b.cnf[i + 1:])
        i += 1
    return Ordinal(b.cnf[i:])


def strip_last(beta: Ordinal, scale: Ordinal) -> Ordinal | None:
    """Remove one trailing w^scale unit: rho with beta = ord_sum(rho, w^scale).

    Returns the minimal such rho (the CNF prefix), or None when beta does
    not end in a w^scale term.
    """
    if not beta.cnf:
        return None
    e, n = beta.cnf[-1]
    if compare(e, scale) is not EQUAL:
        return None
    if n > 1:
        return Ordinal(beta.cnf[:-1] + ((e, n - 1),))
    return Ordinal(beta.cnf[:-1])


def print_ordinal(a: Ordinal) -> str:
    """Canonical grammar: sum of 'w^(ord)[*n]' | 'w[*n]' | 'n'."""
    if a.is_zero():
        return "0"
    parts = []
    for e, n in a.cnf:
        if e.is_zero():
            parts.append(str(n))
            continue
        if e == ONE:
            base = "w"
        else:
            base = f"w^({print_ordinal(e)})"
        parts.append(base if n == 1 else f"{base}*{n}")
    return "+".join(parts)

"""Seeded corpus generators shared by the test modules.

The monomial/series generators emit values through the canonical
constructors, so everything they produce is already in expansion normal
form and pairwise comparable (no Undecided on this constrained family).
"""

from __future__ import annotations

import random
from fractions import Fraction

from hsx import expr as ex
from hsx import ordinal as ords
from hsx.expr import Monomial, NumberExpr, TOmega
from hsx.ordinal import Ordinal


def random_ordinal(rng: random.Random, max_exp: int = 3, max_terms: int = 3,
                   max_coeff: int = 3) -> Ordinal:
    """A CNF ordinal below w^(max_exp + 1) (exponents are naturals)."""
    k = rng.randint(0, min(max_terms, max_exp + 1))
    exps = sorted(rng.sample(range(max_exp + 1), k=k), reverse=True)
    cnf = tuple((ords.from_int(e), rng.randint(1, max_coeff)) for e in exps)
    return Ordinal(cnf)


def random_ordinal_nonzero(rng, **kw) -> Ordinal:
    while True:
        o = random_ordinal(rng, **kw)
        if not o.is_zero():
            return o


NONUNIT_COEFFS = [Fraction(2), Fraction(3), Fraction(1, 2), Fraction(5, 3), Fraction(-2), Fraction(-1, 2)]


def random_log_atom(rng: random.Random, max_beta_exp: int = 3) -> Monomial:
    """An atom L_beta(w) with beta <= w^max_beta_exp-ish."""
    return ex.atom(TOmega(random_ordinal(rng, max_exp=max_beta_exp)))


def random_exp_argument(rng: random.Random) -> NumberExpr:
    """Positive infinite, not tail-atomic: a valid exponent for E_1."""
    k = rng.randint(1, 2)
    betas = rng.sample([0, 1, 2, 3, 4], k=k)
    betas.sort()
    terms = []
    for j, b in enumerate(betas):
        if j == k - 1:
            c = rng.choice([f for f in NONUNIT_COEFFS if f > 0]) if k == 1 else rng.choice(NONUNIT_COEFFS)
        else:
            c = Fraction(rng.choice([1, 2, 3]))
        terms.append((c, ex.atom(TOmega(ords.from_int(b)))))
    terms.sort(key=lambda t: 0, reverse=False)
    # L_b(w) decreases as b grows, so ascending beta = descending monomial
    out = ex.nexpr(terms)
    if out.terms[0][0] < 0:
        out = ex.neg(out)
    return out


def random_monomial(rng: random.Random, depth: int = 2) -> Monomial:
    """A normal-form monomial; depth bounds the nesting of shells."""
    roll = rng.random()
    if roll < 0.15:
        return ex.MONO_ONE
    if roll < 0.45:
        return random_log_atom(rng)
    if roll < 0.7 or depth == 0:
        m = ex.apply_E(ords.ONE, random_exp_argument(rng))
        assert m is not None
        return m
    if roll < 0.85:
        u = random_exp_argument(rng)
        m = ex.apply_E(ords.OMEGA, u)
        if m is not None:
            return m
        return random_log_atom(rng)
    # a shell with nonzero psi above a hyperlog tail
    tail_beta = ords.from_int(rng.randint(1, 4))
    core = ex.atom(TOmega(tail_beta))
    psi_terms = []
    for _ in range(rng.randint(1, 2)):
        c = Fraction(rng.choice([1, 2, 3, -1, -2]))
        inner = random_monomial(rng, 0)
        if ex.mono_class(inner) > 0:
            psi_terms.append((c, inner))
    if not psi_terms:
        psi_terms = [(Fraction(2), ex.OMEGA_MONO)]
    try:
        psi = ex.nexpr(psi_terms)
        probe = ex.mono_log(core).terms[0][1]
        for _, m in psi.terms:
            if ex.compare_monomials(m, probe) != 1:
                return random_log_atom(rng)
        iota = rng.choice([1, -1])
        return ex.exp_purely_large(ex.add(psi, ex.scale(iota, ex.mono_log(core))))
    except Exception:
        return random_log_atom(rng)


def random_series(rng: random.Random, max_terms: int = 3, depth: int = 1) -> NumberExpr:
    pairs = []
    for _ in range(rng.randint(0, max_terms)):
        c = Fraction(rng.randint(-6, 6))
        if c == 0:
            continue
        den = rng.choice([1, 1, 2, 3])
        pairs.append((c / den, random_monomial(rng, depth)))
    return ex.nexpr(pairs)

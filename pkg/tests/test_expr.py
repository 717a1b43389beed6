import random
from fractions import Fraction

import pytest

from hsx import expr as ex
from hsx import ordinal as o
from hsx.errors import Budget, NormalizationUndecided
from hsx.expr import Monomial, NumberExpr, THyper, TOmega
from hsx.textio import parse_number, print_number

from gen import random_monomial, random_series

W2 = o.omega_power(o.from_int(2))


def P(s):
    return parse_number(s)


def mono(s):
    v = P(s)
    assert len(v.terms) == 1 and v.terms[0][0] == 1
    return v.terms[0][1]


# --- comparisons -----------------------------------------------------------


def test_compare_unit_cases():
    assert ex.compare_monomials(ex.MONO_ONE, ex.MONO_ONE) == 0
    assert ex.compare_monomials(ex.MONO_ONE, ex.OMEGA_MONO) == -1
    inv = ex.mono_inv(ex.OMEGA_MONO)
    assert ex.compare_monomials(ex.MONO_ONE, inv) == 1


def test_compare_log_atoms_reversed_index():
    assert ex.compare_monomials(mono("L[2](w)"), mono("L[1](w)")) == -1
    assert ex.compare_monomials(mono("L[w](w)"), mono("L[w+1](w)")) == 1
    assert ex.compare_monomials(mono("w"), mono("L[1](w)")) == 1


def test_compare_paper_anchor_example():
    # L_{w+1} w < E_w w and sqrt(w) < E_w w; sqrt(w) > L_{w+1} w
    e = mono("E[w](w)")
    s = mono("exp(1/2*log(w))")
    l = mono("L[w+1](w)")
    assert ex.compare_monomials(e, s) == 1
    assert ex.compare_monomials(l, e) == -1
    assert ex.compare_monomials(s, l) == 1


def test_compare_cross_strength():
    # E_w of a tiny argument undercuts w
    tiny = ex.apply_E(o.OMEGA, ex.atom_series(TOmega(W2)))
    assert tiny is not None
    assert ex.compare_monomials(tiny, ex.OMEGA_MONO) == -1
    assert ex.compare_monomials(tiny, mono("L[5](w)")) == -1
    big = mono("E[w](w)")
    assert ex.compare_monomials(tiny, big) == -1


def test_compare_series_examples():
    assert ex.compare_series(P("w"), P("w + 1")) == -1
    assert ex.compare_series(P("0"), P("0")) == 0
    assert ex.compare_series(P("w - 1"), P("w - 2")) == 1


def test_compare_is_order_on_decided_corpus():
    rng = random.Random(20)
    monos = [random_monomial(rng, 2) for _ in range(60)]
    for a in monos:
        for b in monos:
            c1 = ex.compare_monomials(a, b)
            c2 = ex.compare_monomials(b, a)
            assert c1 is not None and c2 is not None
            assert c1 == -c2
            assert (c1 == 0) == (a == b)
    # transitivity spot-check on sorted triples
    for _ in range(200):
        a, b, c = (random_monomial(rng, 2) for _ in range(3))
        if ex.compare_monomials(a, b) == 1 and ex.compare_monomials(b, c) == 1:
            assert ex.compare_monomials(a, c) == 1


def test_budget_exhaustion_is_undecided():
    a = mono("E[w](w)")
    b = mono("L[w+1](w)")
    assert ex.compare_monomials(a, b, Budget(steps=1)) is None


# --- rewrite_L --------------------------------------------------------------


def test_rewrite_functional_equation():
    # L_w(L_3 w) = L_w w - 3 by three functional-equation steps
    assert print_number(P("L[w](L[3](w))")) == "L[w](w) - 3"
    # composition: L_1(L_w w) = L_{w+1} w
    assert print_number(P("L[1](L[w](w))")) == "L[w+1](w)"


def test_rewrite_inverse_pair():
    assert P("L[w](E[w](w))") == P("w")
    assert P("L[1](exp(w))") == P("w")


def test_rewrite_composition_matches_cnf_addition():
    rng = random.Random(21)
    from gen import random_ordinal
    done = 0
    while done < 50:
        g = random_ordinal(rng, max_exp=3)
        r = random_ordinal(rng, max_exp=3)
        if g.is_zero() or r.is_zero() or not o.lleq(r, g):
            continue
        base = ex.atom_series(TOmega(g))
        out = ex.rewrite_L(r, base)
        assert out == ex.atom_series(TOmega(o.ord_sum(g, r)))
        done += 1


def test_rewrite_monotone_on_decided_pairs():
    pairs = [("w", "L[1](w)"), ("E[w](w)", "w"), ("L[2](w)", "L[5](w)")]
    for s, t in pairs:
        f, g = P(s), P(t)
        c = ex.compare_series(f, g)
        rf = ex.rewrite_L(o.ONE, f)
        rg = ex.rewrite_L(o.ONE, g)
        assert rf is not None and rg is not None
        assert ex.compare_series(rf, rg) == c


def test_rewrite_stuck_cases():
    assert ex.rewrite_L(o.OMEGA, P("w + 1")) is None
    assert ex.rewrite_L(W2, P("L[1](w)")) is None
    with pytest.raises(ValueError):
        ex.rewrite_L(o.ONE, P("1"))


# --- apply_E ----------------------------------------------------------------


def test_apply_E_inverse_pair():
    m = ex.apply_E(o.OMEGA, P("L[w](w)"))
    assert m == ex.OMEGA_MONO
    m = ex.apply_E(o.ONE, P("L[w+1](w)"))
    assert m == mono("L[w](w)")


def test_apply_E_exp_of_purely_large():
    phi = P("2*L[1](w)")
    m = ex.apply_E(o.ONE, phi)
    assert m is not None
    # log of the result re-normalizes to phi
    assert ex.mono_log(m) == phi


def test_apply_E_tower_bumps():
    assert print_number(P("exp(w)")) == "E[w](L[w](w) + 1)"
    assert print_number(P("E[w](w)")) == "E[w^(2)](L[w^(2)](w) + 1)"
    # exp of E_w^u climbs inside the same strength
    m = P("exp(E[w](2*L[1](w)))")
    assert print_number(m) == "E[w](2*L[1](w) + 1)"


def test_apply_E_stuck_on_untruncated():
    assert ex.apply_E(o.OMEGA, P("w + w^-1")) is None


def test_apply_E_functional_inverse():
    # E_w^(L_w w - n) = L_n w
    for n in (1, 2, 3):
        arg = ex.add_real(P("L[w](w)"), -n)
        m = ex.apply_E(o.OMEGA, arg)
        assert m == mono(f"L[{n}](w)")


def test_exp_log_roundtrip_on_corpus():
    rng = random.Random(22)
    for _ in range(60):
        m = random_monomial(rng, 2)
        if m.is_one():
            continue
        back = ex.exp_purely_large(ex.mono_log(m))
        assert back == m


def test_mono_mul_examples():
    w = ex.OMEGA_MONO
    w2 = ex.mono_mul(w, w)
    assert print_number(NumberExpr(((Fraction(1), w2),))) == "exp(2*L[1](w))"
    assert ex.mono_mul(w, ex.mono_inv(w)) == ex.MONO_ONE


# --- normalize ---------------------------------------------------------------


def test_normalize_is_idempotent_on_corpus():
    rng = random.Random(23)
    for _ in range(120):
        f = random_series(rng, 3, 2)
        n1 = ex.normalize(f)
        assert n1 == f  # generator output is already canonical
        assert ex.normalize(n1) == n1


def test_normalize_fixes_noncanonical_shells():
    # hand-built E_w^w is not canonical; normalize repairs it
    raw = NumberExpr(((Fraction(1), Monomial(ex.ZERO_EXPR, 1, THyper(o.ZERO, o.OMEGA, ex.OMEGA_EXPR))),))
    assert print_number(ex.normalize(raw)) == "E[w^(2)](L[w^(2)](w) + 1)"


def test_normalize_zero():
    assert ex.normalize(P("0")) == P("0")

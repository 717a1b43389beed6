import random
from fractions import Fraction

import pytest

from hsx import expr as ex
from hsx import series as sr
from hsx.textio import parse_number, print_number

from gen import random_series


def P(s):
    return parse_number(s)


def test_ring_identities():
    w_plus = P("w + 1")
    w_minus = P("w - 1")
    assert print_number(sr.mul(w_plus, w_minus)) == "exp(2*L[1](w)) - 1"
    f = random_series(random.Random(0), 3, 1)
    assert sr.add(f, P("0")) == f


def test_square_of_w_plus_winv():
    f = P("w + w^-1")
    sq = sr.mul(f, f)
    assert print_number(sq) == "exp(2*L[1](w)) + 2 + exp(2*L[1](w))^-1"


def test_ring_axioms_random():
    rng = random.Random(30)
    for _ in range(300):
        f, g, h = (random_series(rng, 2, 1) for _ in range(3))
        assert sr.add(f, g) == sr.add(g, f)
        assert sr.add(sr.add(f, g), h) == sr.add(f, sr.add(g, h))
        assert sr.mul(f, g) == sr.mul(g, f)
        assert sr.mul(sr.mul(f, g), h) == sr.mul(f, sr.mul(g, h))
        assert sr.mul(f, sr.add(g, h)) == sr.add(sr.mul(f, g), sr.mul(f, h))


def test_dominant():
    f = P("exp(2*L[1](w)) - 3*w")
    c, m = sr.dominant(f)
    assert c == 1 and print_number(ex.NumberExpr(((Fraction(1), m),))) == "exp(2*L[1](w))"
    assert sr.dominant(P("5")) == (5, ex.MONO_ONE)
    with pytest.raises(ValueError):
        sr.dominant(P("0"))


def test_truncate_above_and_is_truncation():
    f = P("exp(2*L[1](w)) + w + 1")
    w_mono = P("w").terms[0][1]
    assert print_number(sr.truncate_above(f, w_mono)) == "exp(2*L[1](w))"
    assert sr.is_truncation(P("exp(2*L[1](w))"), f)
    assert not sr.is_truncation(P("w"), f)
    assert sr.is_truncation(P("0"), f)


def test_is_truncation_partial_order_on_prefixes():
    rng = random.Random(31)
    for _ in range(100):
        f = random_series(rng, 4, 1)
        prefixes = [ex.NumberExpr(f.terms[:k], True) for k in range(len(f.terms) + 1)]
        for a in prefixes:
            for b in prefixes:
                assert sr.is_truncation(a, b) == (len(a.terms) <= len(b.terms))


def test_split3():
    s = sr.split3(P("w + 2 + w^-1"))
    assert print_number(s.purely_large) == "w"
    assert s.real_part == 2
    assert print_number(s.infinitesimal) == "w^-1"
    total = sr.add(sr.add(s.purely_large, ex.const(s.real_part)), s.infinitesimal)
    assert total == P("w + 2 + w^-1")


def test_compare_series():
    assert sr.compare_series(P("w"), P("w + 1")) == -1
    assert sr.compare_series(P("0"), P("0")) == 0


def test_log_partial():
    # log of the L_w w monomial is L_{w+1} w, exactly
    f = P("L[w](w)")
    out = sr.log_partial(f, 5)
    assert out.exact and print_number(out) == "L[w+1](w)"
    # truncated Mercator tail: log(w*(1+1/w)) = L_1 w + 1/w - 1/(2w^2)
    g = sr.mul(P("w"), P("1 + w^-1"))
    out = sr.log_partial(g, 2)
    assert not out.exact
    assert print_number(out) == "L[1](w) + w^-1 - 1/2*exp(2*L[1](w))^-1"
    with pytest.raises(ValueError):
        sr.log_partial(P("2*w"))


def test_exp_partial():
    assert sr.exp_partial(P("0")) == P("1")
    out = sr.exp_partial(P("w"))
    assert print_number(out) == "E[w](L[w](w) + 1)"
    with pytest.raises(Exception):
        sr.exp_partial(P("w + 1"))


def test_exp_then_log_identity_on_purely_large():
    rng = random.Random(32)
    for _ in range(60):
        f = random_series(rng, 2, 1)
        phi = sr.split3(f).purely_large
        if phi.is_zero() or phi.terms[0][0] < 0:
            continue
        m = sr.exp_partial(phi)
        back = sr.log_partial(m, 0)
        assert back.exact and back == phi


def test_invert_to_order():
    assert print_number(sr.invert_to_order(P("w"), 3)) == "w^-1"
    assert print_number(sr.invert_to_order(P("2"), 3)) == "1/2"
    out = sr.invert_to_order(P("1 + w^-1"), 3)
    assert not out.exact
    assert print_number(out) == "1 - w^-1 + exp(2*L[1](w))^-1 - exp(3*L[1](w))^-1"
    ident = sr.mul(P("1 + w^-1"), out)
    # f * g = 1 + (terms below the cut)
    assert ident.terms[0] == (Fraction(1), ex.MONO_ONE)


def test_approximate_flag_propagates():
    approx = sr.invert_to_order(P("1 + w^-1"), 2)
    assert not sr.add(approx, P("w")).exact
    assert not sr.mul(approx, P("w")).exact

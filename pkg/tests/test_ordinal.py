import random

import pytest

from hsx import ordinal as o
from hsx.ordinal import OMEGA, ONE, ZERO, Ordinal

from gen import random_ordinal

W2 = o.omega_power(o.from_int(2))


def N(n):
    return o.from_int(n)


def test_compare_basics():
    assert o.compare(ZERO, ONE) == -1
    assert o.compare(OMEGA, OMEGA) == 0
    # w*2+1 < w^2
    a = o.ord_sum(o.ord_sum(OMEGA, OMEGA), ONE)
    assert o.compare(a, W2) == -1


def test_compare_brute_force_on_small_ordinals():
    # independent oracle: map ordinals below w^2 to (lead coeff, trailing nat)
    rng = random.Random(1)

    def embed(x: Ordinal):
        # w*a + b  ->  (a, b)
        a = b = 0
        for e, n in x.cnf:
            if e == ONE:
                a = n
            elif e == ZERO:
                b = n
        return (a, b)

    for _ in range(300):
        x = random_ordinal(rng, max_exp=1)
        y = random_ordinal(rng, max_exp=1)
        want = (embed(x) > embed(y)) - (embed(x) < embed(y))
        assert o.compare(x, y) == want


def test_ord_sum_absorption_and_successor():
    assert o.ord_sum(ONE, OMEGA) == OMEGA
    assert o.ord_sum(OMEGA, ONE) == Ordinal(((ONE, 1), (ZERO, 1)))
    # (w^2 + w) + w^2 = w^2*2
    a = o.ord_sum(W2, OMEGA)
    assert o.ord_sum(a, W2) == Ordinal(((o.from_int(2), 2),))


def test_hessenberg_examples():
    # hess_sum(w+1, w) = w*2 + 1
    a = o.ord_sum(OMEGA, ONE)
    assert o.hess_sum(a, OMEGA) == Ordinal(((ONE, 2), (ZERO, 1)))
    assert o.hess_sum(a, ZERO) == a
    # hess_prod(w+1, w) = w^2 + w
    assert o.hess_prod(a, OMEGA) == Ordinal(((o.from_int(2), 1), (ONE, 1)))


def test_dominance_examples():
    w5 = Ordinal(((ONE, 5),))
    assert o.dominance(OMEGA, w5) is o.Dom.SIM
    assert o.dominance(OMEGA, W2) is o.Dom.PREC
    assert o.dominance(ZERO, ZERO) is o.Dom.SIM


def test_mll_lleq_examples():
    assert o.mll(ONE, OMEGA)
    assert not o.mll(OMEGA, OMEGA)
    w4 = Ordinal(((ONE, 4),))
    assert o.lleq(OMEGA, w4)


def test_split_at_examples():
    w_plus_3 = o.ord_sum(OMEGA, N(3))
    assert o.split_at(w_plus_3, OMEGA) == (OMEGA, N(3))
    assert o.split_at(W2, OMEGA) == (W2, ZERO)
    assert o.split_at(N(2), OMEGA) == (ZERO, N(2))
    with pytest.raises(ValueError):
        o.split_at(OMEGA, N(2))


def test_mu_minus_and_alpha_over_omega():
    assert o.mu_minus(N(3)) == N(2)
    assert o.mu_minus(OMEGA) == OMEGA
    assert o.alpha_over_omega(W2) == OMEGA
    with pytest.raises(ValueError):
        o.alpha_over_omega(o.ord_sum(OMEGA, ONE))


def test_hessenberg_commutative_associative_random():
    rng = random.Random(7)
    for _ in range(1000):
        a, b, c = (random_ordinal(rng, max_exp=3) for _ in range(3))
        assert o.hess_sum(a, b) == o.hess_sum(b, a)
        assert o.hess_sum(o.hess_sum(a, b), c) == o.hess_sum(a, o.hess_sum(b, c))
        assert o.hess_prod(a, b) == o.hess_prod(b, a)
        assert o.hess_prod(o.hess_prod(a, b), c) == o.hess_prod(a, o.hess_prod(b, c))


def test_ord_sum_associative_random():
    rng = random.Random(8)
    for _ in range(500):
        a, b, c = (random_ordinal(rng) for _ in range(3))
        assert o.ord_sum(o.ord_sum(a, b), c) == o.ord_sum(a, o.ord_sum(b, c))


def test_mixed_identity_under_side_conditions():
    # beta >=>= w^eta and gamma <= w^eta  =>  hess_sum = ord_sum
    rng = random.Random(9)
    checked = 0
    while checked < 200:
        eta = o.from_int(rng.randint(0, 2))
        beta = random_ordinal(rng, max_exp=3)
        gamma = random_ordinal(rng, max_exp=3)
        if beta.is_zero() or not all(
            o.preceq(o.omega_power(eta), o.omega_power(e)) for e in beta.exponents()
        ):
            continue
        if not o.preceq(gamma, o.omega_power(eta)):
            continue
        assert o.hess_sum(beta, gamma) == o.ord_sum(beta, gamma)
        checked += 1


def test_split_reassembles_and_total_order():
    rng = random.Random(10)
    for _ in range(300):
        b = random_ordinal(rng)
        t = o.omega_power(o.from_int(rng.randint(0, 3)))
        hi, lo = o.split_at(b, t)
        assert o.ord_sum(hi, lo) == b
    for _ in range(300):
        a, b = random_ordinal(rng), random_ordinal(rng)
        ca, cb = o.compare(a, b), o.compare(b, a)
        assert ca == -cb
        assert (ca == 0) == (a == b)


def test_left_subtract():
    assert o.left_subtract(OMEGA, o.ord_sum(OMEGA, N(2))) == N(2)
    assert o.left_subtract(ONE, OMEGA) == OMEGA  # 1 + w = w
    assert o.left_subtract(OMEGA, ONE) is None
    rng = random.Random(11)
    for _ in range(300):
        g, r = random_ordinal(rng), random_ordinal(rng)
        b = o.ord_sum(g, r)
        r2 = o.left_subtract(g, b)
        assert r2 is not None and o.ord_sum(g, r2) == b


def test_ord_mul_standard_rule():
    # (w+1)*w = w^2, (w+1)*2 = w*2+1
    a = o.ord_sum(OMEGA, ONE)
    assert o.ord_mul(a, OMEGA) == W2
    assert o.ord_mul(a, N(2)) == Ordinal(((ONE, 2), (ZERO, 1)))
    assert o.times_omega(o.ord_sum(OMEGA, N(3))) == W2


def test_print_roundtrip():
    from hsx.textio import parse_ordinal
    rng = random.Random(12)
    for _ in range(200):
        a = random_ordinal(rng)
        assert parse_ordinal(o.print_ordinal(a)) == a
    assert o.print_ordinal(Ordinal(((o.from_int(2), 3), (ONE, 1), (ZERO, 5)))) == "w^(2)*3+w+5"

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from utbreaks.field import FieldCtx
from utbreaks.kr import KRContext, falling_binom, lucas_support, padic_binom
from utbreaks.laurent import LaurentSeries
from utbreaks.smatrix import a_bracket

F2, F3, F4 = FieldCtx(2), FieldCtx(3), FieldCtx(2, [1, 1, 1])


def binom_oracle(l, m, R, p):
    """binom(l/R, m) as an exact rational, then reduced mod p."""
    x = Fraction(l, R)
    val = Fraction(1)
    for i in range(m):
        val *= (x - i) / (i + 1)
    assert val.denominator % p
    return val.numerator * pow(val.denominator, -1, p) % p


def test_padic_binom_examples():
    assert padic_binom(7, 0, 5, 2) == 1
    assert padic_binom(3, 1, 5, 2) == 1
    assert padic_binom(1, 2, 5, 2) == 0
    assert (13 * 12 // 2) % 2 == 0


@given(st.sampled_from([2, 3, 5, 7]), st.integers(-200, 200), st.integers(0, 60), st.integers(1, 300))
def test_padic_binom_against_rationals(p, l, m, R):
    if R % p == 0:
        R += 1
    assert padic_binom(l, m, R, p) == binom_oracle(l, m, R, p)


@given(st.sampled_from([2, 3, 5, 7]), st.integers(-200, 200), st.integers(1, 300))
def test_direct_binomial_matches_lucas(p, l, R):
    if R % p == 0:
        R += 1
    for m in range(p):
        assert falling_binom(l, m, R, p) == padic_binom(l, m, R, p)


@given(st.sampled_from([2, 3, 5]), st.integers(-100, 100), st.integers(1, 200), st.integers(0, 200))
def test_lucas_support_is_the_nonzero_set(p, l, R, count):
    if R % p == 0:
        R += 1
    got = dict(lucas_support(l, R, p, count))
    assert got == {i: binom_oracle(l, i, R, p) for i in range(count) if binom_oracle(l, i, R, p)}


def test_t_power_examples():
    kr = KRContext(F2, 2, 5, prec_cap=20)
    assert kr.t_power(0) == LaurentSeries(F2, {0: 1}, 20)
    x = kr.t_power(1)
    assert x.coef(-4) == F2(1)
    assert x.coef(1) == F2(1)
    assert x.coef(6) == F2(0)
    assert x.coef(16) == F2(1)
    assert x.terms == {-4 + 5 * i: 1 for i in range(5) if binom_oracle(1, i, 5, 2)}
    for e in range(-5, 6):
        if e:
            assert kr.t_power(e, prec=10**4).val() == -4 * e


def test_constructor_checks_relation_and_rejects_bad_R():
    KRContext(F3, 3, 7)
    with pytest.raises(ValueError):
        KRContext(F3, 3, 6)


@pytest.mark.parametrize("ctx", [F2, F3, F4], ids=repr)
def test_embed_is_multiplicative(ctx):
    rng = random.Random(ctx.size)
    p = ctx.p
    for _ in range(30):
        R = rng.choice([r for r in range(1, 30) if r % p])
        kr = KRContext(ctx, rng.randint(1, 3), R, check=False)
        x = LaurentSeries(ctx, {rng.randint(-5, 3): ctx.element(rng.randrange(1, ctx.size)) for _ in range(3)})
        y = LaurentSeries(ctx, {rng.randint(-5, 3): ctx.element(rng.randrange(1, ctx.size)) for _ in range(3)})
        cap = p * R + 1
        big = cap + 10 * kr.q
        lhs = kr.embed(x, big) * kr.embed(y, big)
        assert lhs.truncate(cap).agrees(kr.embed(x * y, cap))


def test_embed_of_t_to_the_R():
    kr = KRContext(F3, 2, 7)
    t = kr.embed(LaurentSeries(F3, {-1: 1}), 200)
    assert (t**7).truncate(kr.prec_cap).agrees(kr.t_power(7))
    assert kr.embed(LaurentSeries(F3, {-3: 1})).val() == -3 * kr.q


def test_iota():
    kr = KRContext(F4, 2, 3)
    g = F4.gen()
    x = LaurentSeries(F4, {-3: g, -1: 1})
    y = kr.iota(x)
    assert y.keys() == x.keys()
    assert y.p_power(2).terms == {-12: g.code, -4: 1}
    kr2 = KRContext(F2, 2, 3)
    assert kr2.iota(LaurentSeries(F2, {-3: 1})) == LaurentSeries(F2, {-3: 1})


@pytest.mark.parametrize("p,R", [(2, 5), (3, 7), (5, 3)])
def test_eta_examples(p, R):
    ctx = FieldCtx(p)
    kr = KRContext(ctx, 2, R)
    e = kr.eta(LaurentSeries(ctx, {-3 if p != 3 else -4: 1}))
    w = 3 if p != 3 else 4
    assert e.val() == -w * kr.q + R
    assert e.terms[e.val()] == w * pow(R, -1, p) % p
    assert not kr.eta(LaurentSeries(ctx, {0: 1})).terms
    kr.eta(LaurentSeries(ctx, {-1: 1, -2: 1}), cross_check=True)


@pytest.mark.parametrize("p", [2, 3])
def test_eta_is_the_sum_of_graded_pieces(p):
    ctx = FieldCtx(p)
    rng = random.Random(p)
    for _ in range(20):
        R = rng.choice([r for r in range(2, 40) if r % p])
        kr = KRContext(ctx, 2, R)
        x = LaurentSeries(ctx, {-rng.randint(1, 9): rng.randrange(1, p) for _ in range(3)})
        cap = kr.prec_cap
        total = LaurentSeries.zero(ctx)
        M = -(-(cap + kr.q * 9) // R) + 1
        for m in range(1, M + 1):
            total = total + a_bracket(x, m, kr)
        assert total.truncate(cap).agrees(kr.eta(x, cap))

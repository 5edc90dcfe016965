import pytest
from hypothesis import given
from hypothesis import strategies as st

from utbreaks.errors import PrecisionExhausted
from utbreaks.field import FieldCtx
from utbreaks.laurent import INF, LaurentSeries, Undetermined, format_series, parse_series

F2, F3, F4 = FieldCtx(2), FieldCtx(3), FieldCtx(2, [1, 1, 1])


def T(ctx, terms, prec=INF):
    return LaurentSeries(ctx, terms, prec)


def test_valuation_examples():
    assert T(F2, {-3: 1}).valuation() == -3
    assert T(F2, {}, 100).valuation() == Undetermined(100)
    assert T(F2, {0: 1, 1: 1}).valuation() == 0
    assert T(F2, {}).valuation() == INF


def test_ring_examples():
    assert T(F2, {-3: 1}) * T(F2, {-5: 1}) == T(F2, {-8: 1})
    assert (T(F3, {-3: 1, -5: 1}) - T(F3, {-5: 1})) == T(F3, {-3: 1})
    prod = T(F2, {-3: 1}, 50) * T(F2, {-5: 1}, 60)
    assert prod.prec == 45


def test_invert_examples():
    inv = T(F2, {0: 1, 1: 1}).invert(20)
    assert inv.prec == 20
    assert inv.terms == {l: 1 for l in range(20)}
    assert T(F2, {-3: 1}).invert(10).terms == {3: 1}
    with pytest.raises(PrecisionExhausted):
        T(F2, {}, 7).invert()


def test_p_power_examples():
    assert T(F2, {-3: 1}).p_power(1) == T(F2, {-6: 1})
    assert T(F3, {0: 1, -3: 1}).p_power(1) == T(F3, {0: 1, -9: 1})
    assert T(F2, {-3: 1}, 10).p_power(1).prec == 20


def test_as_image_examples():
    assert T(F2, {-3: 1}).as_image() == T(F2, {-6: 1, -3: 1})
    assert T(F2, {}).as_image() == T(F2, {})
    for c in range(1, 3):
        assert T(F3, {0: c}).as_image() == T(F3, {})


def test_coefficient_beyond_precision_is_an_error():
    x = T(F2, {-3: 1}, 5)
    assert x.coef(4) == F2(0)
    with pytest.raises(PrecisionExhausted):
        x.coef(5)


def test_storage_invariants():
    x = T(F3, {4: 1, -2: 2, 1: 0, 9: 1}, 5)
    assert x.keys() == [-2, 4]
    assert all(c for c in x.terms.values())
    assert all(l < 5 for l in x.terms)


def test_parse_and_format():
    x = parse_series(F4, "-3:0;1,-1:1")
    assert x.terms[-3] == F4.gen().code
    assert format_series(x) == "-3:0;1,-1:1;0"
    assert parse_series(F4, format_series(x)) == x
    assert parse_series(F2, "") == T(F2, {})
    for bad in ("-1:1,-3:1", "-1:2", "x:1", "-1"):
        with pytest.raises(ValueError):
            parse_series(F2, bad)


def series(ctx, lo=-10, hi=10, exact=True):
    terms = st.dictionaries(st.integers(lo, hi), st.integers(0, ctx.size - 1).map(ctx.element), max_size=5)
    if exact:
        return terms.map(lambda t: T(ctx, t))
    return st.tuples(terms, st.integers(hi + 1, hi + 15)).map(lambda tp: T(ctx, tp[0], tp[1]))


CTXS = st.sampled_from([F2, F3, F4])


@given(CTXS.flatmap(lambda c: st.tuples(series(c), series(c), series(c))))
def test_ring_axioms(xyz):
    x, y, z = xyz
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert (x + y).p_power(1) == x.p_power(1) + y.p_power(1)


@given(CTXS.flatmap(lambda c: st.tuples(series(c, exact=False), series(c, exact=False))))
def test_inexact_products_agree_with_exact_truncations(xy):
    x, y = xy
    ex = LaurentSeries._raw(x.ctx, dict(x.terms)) * LaurentSeries._raw(y.ctx, dict(y.terms))
    prod = x * y
    assert prod.agrees(ex.truncate(prod.prec))


@given(CTXS.flatmap(lambda c: series(c)), st.integers(1, 15))
def test_invert_is_an_inverse(x, k):
    if not x.terms:
        return
    inv = x.invert(k - x.val())
    prod = x * inv
    assert prod.prec == k
    assert prod.agrees(LaurentSeries.one(x.ctx))


@given(CTXS.flatmap(lambda c: st.tuples(series(c), series(c))))
def test_valuation_is_additive(xy):
    x, y = xy
    if x.terms and y.terms:
        assert (x * y).val() == x.val() + y.val()
        assert (x + y).valuation() >= min(x.val(), y.val())

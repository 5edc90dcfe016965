import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import mono
from utbreaks.errors import InstanceParseError
from utbreaks.field import FieldCtx
from utbreaks.instance import format_instance, instance_from_matrix, parse, parse_instance
from utbreaks.random_instances import random_defining

BASIC = "p 2\nk 1\nn 2\nentry 1 2 : -3:1\n"


def test_basic_parse():
    ctx, A = parse(BASIC)
    assert ctx.p == 2 and A.n == 2
    assert A.entry(1, 2) == mono(ctx, 3)


def test_undeclared_entries_are_zero():
    _, A = parse("# worked\np 2\nk 1\nn 3\nentry 1 2 : -3:1\nentry 2 3 : -5:1  # trailing\n")
    assert (1, 3) not in A.entries


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("p 2\nk 1\nn 2\nentry 1 2 : -3:1\nentry 1 2 : -1:1\n", 5, "duplicate entry"),
        ("p 2\nk 1\nn 2\nentry 2 1 : -3:1\n", 4, "upper triangular"),
        ("p 2\nk 1\nn 2\nentry 1 3 : -3:1\n", 4, "upper triangular"),
        ("p 6\nk 1\nn 2\n", 1, "not prime"),
        ("p 2\nk 2\nmodulus 1,0,1\nn 2\n", 3, "reducible"),
        ("p 2\nk 2\nmodulus 1,1,0\nn 2\n", 3, "monic"),
        ("p 2\nk 2\nn 2\n", None, "modulus"),
        ("p 2\nk 1\nn 2\nentry 1 2 -3:1\n", 4, "' : '"),
        ("p 2\nk 1\nn 2\nentry 1 2 : -3:5\n", 4, ""),
        ("p 2\nk 1\nn 2\nbogus 1\n", 4, "unknown keyword"),
        ("p 2\np 3\nn 2\n", 2, "duplicate"),
        ("k 1\nn 2\n", None, "missing 'p'"),
    ],
)
def test_errors(text, line, fragment):
    with pytest.raises(InstanceParseError) as info:
        parse(text)
    assert info.value.line == line
    assert fragment in str(info.value)
    if line is not None:
        assert str(info.value).startswith(f"line {line}:")


def test_extension_field_instance():
    inst = parse_instance("p 2\nk 2\nmodulus 1,1,1\nn 2\nentry 1 2 : -3:0;1,-1:1\n")
    g = inst.ctx.gen()
    assert inst.entries[(1, 2)].coef(-3) == g
    assert format_instance(inst) == "p 2\nk 2\nmodulus 1,1,1\nn 2\nentry 1 2 : -3:0;1,-1:1;0\n"


@given(
    st.sampled_from([(2, None), (3, None), (5, None), (2, [1, 1, 1]), (3, [1, 2, 0, 1])]),
    st.integers(2, 5),
    st.integers(0, 10**6),
)
def test_round_trip(field, n, seed):
    ctx = FieldCtx(*field)
    A = random_defining(ctx, n, random.Random(seed), max_weight=15, extra=3)
    text = format_instance(A)
    ctx2, B = parse(text)
    assert ctx2 == ctx
    assert B == A
    assert format_instance(instance_from_matrix(B)) == text

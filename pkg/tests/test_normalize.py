import random

import pytest

from conftest import matrix, mono
from utbreaks.errors import HypothesisViolation
from utbreaks.field import FieldCtx
from utbreaks.laurent import LaurentSeries
from utbreaks.normalize import fp_rank, is_reduced, normalize, superdiagonal_independent
from utbreaks.trimatrix import TriMatrix, mat_inv, mat_mul

F2, F3 = FieldCtx(2), FieldCtx(3)


def test_reduced_input_is_unchanged(worked):
    dm = normalize(worked)
    assert dm.A == worked
    assert dm.extensions == 0


def test_p_divisible_index_is_removed(F2):
    dm = normalize(matrix(F2, 2, {(1, 2): 6}))
    assert dm.A.entry(1, 2) == mono(F2, 3)


def test_constant_term_forces_field_extension(F2):
    A = TriMatrix(F2, 2, {(1, 2): LaurentSeries(F2, {-3: 1, 0: 1})})
    dm = normalize(A)
    assert dm.extensions == 1
    assert dm.ctx.size == 4
    assert dm.A.entry(1, 2) == LaurentSeries(dm.ctx, {-3: 1})
    with pytest.raises(Exception):
        normalize(A, allow_extension=False)


def test_even_weight_collapses_to_odd(F2):
    assert normalize(matrix(F2, 2, {(1, 2): 4})).A.entry(1, 2) == mono(F2, 1)


def test_vanishing_superdiagonal_is_rejected(F2):
    A = TriMatrix(F2, 2, {(1, 2): LaurentSeries(F2, {-2: 1, -1: 1})})
    with pytest.raises(HypothesisViolation):
        normalize(A)
    with pytest.raises(HypothesisViolation):
        normalize(matrix(F2, 3, {(1, 2): 3}))


def test_positive_part_is_absorbed(F3):
    A = TriMatrix(F3, 2, {(1, 2): LaurentSeries(F3, {-4: 1, 2: 1, 5: 2})})
    assert normalize(A).A.entry(1, 2) == mono(F3, 4)


def _conjugate(A, steps):
    """Replay the recorded substitutions A -> (I + x E_ij)^(p) A (I + x E_ij)^-1."""
    ctx, n = A.ctx, A.n
    M = A
    for (i, j), x in steps:
        E = TriMatrix(ctx, n, {(i, j): x})
        M = mat_mul(mat_mul(E.p_power(1), M), mat_inv(E))
    return M


@pytest.mark.parametrize("p,n", [(2, 3), (3, 3), (2, 4), (3, 4), (5, 3)])
def test_reduction_is_a_conjugation(p, n):
    ctx = FieldCtx(p)
    rng = random.Random(p * 10 + n)
    done = 0
    while done < 15:
        ent = {}
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                if j == i + 1 or rng.random() < 0.6:
                    ent[(i, j)] = LaurentSeries(ctx, {-rng.randint(1, 4 * p): rng.randrange(1, p) for _ in range(3)})
        A = TriMatrix(ctx, n, ent)
        try:
            dm = normalize(A)
        except HypothesisViolation:
            continue
        assert is_reduced(dm.A)
        assert _conjugate(A, dm.steps) == dm.A
        done += 1


def test_fp_rank():
    a, b = mono(F3, 1), mono(F3, 2)
    assert fp_rank([a, b]) == 2
    assert fp_rank([a, a.scale(2)]) == 1
    assert fp_rank([a, b, a + b]) == 2
    F4 = FieldCtx(2, [1, 1, 1])
    g = F4.gen()
    # g t and t are independent over F_2 even though they share a weight
    assert fp_rank([LaurentSeries(F4, {-1: g}), LaurentSeries(F4, {-1: 1})]) == 2


def test_superdiagonal_dependence():
    A = matrix(F3, 3, {(1, 2): 2, (2, 3): 2})
    assert not superdiagonal_independent(A)
    assert superdiagonal_independent(A, 1, 2)
    assert superdiagonal_independent(matrix(F3, 3, {(1, 2): 1, (2, 3): 2}))

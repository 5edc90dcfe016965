"""Closed expressions for the top break when n = 3 or n = 4.

These work from the graded pieces a^[1] and the powers a_R^(q/p^e) alone,
without building S_R, and serve as an independent check on the pipeline.
Both pick their own admissible R from the bound r <= mu on the sub-blocks.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotApplicable
from .laurent import INF, LaurentSeries
from .normalize import DefiningMatrix
from .smatrix import a_bracket, iota_N
from .weights import choose_N, choose_R, weight_table
from .kr import KRContext

NEG_INF = float("-inf")


def _setup(dm: DefiningMatrix, n: int, R: int | None):
    if dm.n != n:
        raise NotApplicable(f"closed form is for n = {n}")
    wt = weight_table(dm.A)
    p = dm.p
    N, q = choose_N(p, n, wt.mA)
    if R is None:
        sub = max(wt.mu[(1, n - 1)], wt.mu[(2, n)])
        R = choose_R(q * sub + (n - 1) * wt.mA_block[(1, n)], p)
    kr = KRContext(dm.ctx, N, R, check=False)
    return wt, kr


def _pw(x: LaurentSeries | None, kr: KRContext, e: int) -> LaurentSeries:
    """a_R^(q / p^e)."""
    ctx = kr.field
    if x is None:
        return LaurentSeries.zero(ctx)
    return iota_N(x, kr.N).p_power(kr.N - e)


def _val(x: LaurentSeries):
    return x.valuation() if x.terms else INF


def _first_term(v, kr):
    """-(v - R)/q, or minus infinity for an exact zero."""
    if v == INF:
        return NEG_INF
    return Fraction(-(v - kr.R), kr.q)


def _mx(*vals):
    vals = [v for v in vals if v != NEG_INF]
    return max(vals) if vals else NEG_INF


def _w(m, ij):
    w = m.get(ij)
    return NEG_INF if w is None else Fraction(w)


def closed_n3(dm: DefiningMatrix, R: int | None = None) -> Fraction:
    wt, kr = _setup(dm, 3, R)
    A, p, q = dm.A, dm.p, kr.q
    m12, m23 = wt.m[(1, 2)], wt.m[(2, 3)]
    if m12 == m23:
        c12 = A.entries[(1, 2)].leading()[1]
        c23 = A.entries[(2, 3)].leading()[1]
        ratio = c12 / c23
        if ratio.frobenius(1) == ratio:
            raise NotApplicable("equal weights with leading-coefficient ratio in F_p")
    a12, a23, a13 = A.entries.get((1, 2)), A.entries.get((2, 3)), A.entries.get((1, 3))
    zero = LaurentSeries.zero(dm.ctx)
    x = (a_bracket(a13, 1, kr) if a13 is not None else zero) - a12.scale_index(q) * a_bracket(a23, 1, kr)
    return _mx(
        _first_term(_val(x), kr),
        Fraction(m12) + Fraction(m23, p),
        Fraction(m12, p) + m23,
    )


def mu_prime(m: dict, p: int, e: int, mu14=None):
    if e == 0:
        return mu14
    f = Fraction(1, p**e)
    m12, m13, m23, m24, m34 = (_w(m, ij) for ij in [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
    return _mx(
        m12 + m24 * f, m12 * f + m24, m13 + m34 * f, m13 * f + m34, m12 * f + m23 + m34, m12 + m23 + m34 * f
    )


def n4_pieces(dm: DefiningMatrix, kr: KRContext):
    """The lists a'_e, a''_e for 0 <= e <= N-1."""
    A = dm.A
    ctx = dm.ctx
    q, N = kr.q, kr.N
    get = A.entries.get
    zero = LaurentSeries.zero(ctx)

    def b1(ij):
        x = get(ij)
        return zero if x is None else a_bracket(x, 1, kr)

    def Q(ij):
        x = get(ij)
        return zero if x is None else x.scale_index(q)

    def P(ij, e):
        return _pw(get(ij), kr, e)

    a1 = {ij: b1(ij) for ij in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]}
    first = [a1[(1, 4)] - Q((1, 2)) * a1[(2, 4)] - (Q((1, 3)) - Q((1, 2)) * Q((2, 3))) * a1[(3, 4)]]
    second = [zero]
    P12 = [None] + [P((1, 2), e) for e in range(1, N)]
    P23 = [None] + [P((2, 3), e) for e in range(1, N)]
    P34 = [None] + [P((3, 4), e) for e in range(1, N)]
    q23, q12 = Q((2, 3)), Q((1, 2))
    run23 = zero  # sum_{e'=1..e} P23
    run12 = zero
    run34 = zero  # sum_{e'=1..e-1} P34
    for e in range(1, N):
        run23 = run23 + P23[e]
        run12 = run12 + P12[e]
        ae = (
            a1[(1, 3)] * P34[e]
            + a1[(1, 2)] * P((2, 4), e)
            - P((1, 3), e) * a1[(3, 4)]
            + P12[e] * (q23 * a1[(3, 4)] - a1[(2, 4)])
            - q12 * a1[(2, 3)] * P34[e]
        )
        be = P12[e] * run23 * a1[(3, 4)] - run12 * a1[(2, 3)] * P34[e] - P12[e] * a1[(2, 3)] * run34
        first.append(ae)
        second.append(be)
        run34 = run34 + P34[e]
    return first, second


def closed_n4(dm: DefiningMatrix, R: int | None = None) -> Fraction:
    wt, kr = _setup(dm, 4, R)
    p, q = dm.p, kr.q
    first, second = n4_pieces(dm, kr)
    e0 = None
    for e in range(1, kr.N):
        target = -q * mu_prime(wt.m, p, e) + kr.R
        if first[e].terms and first[e].val() == target:
            e0 = e
            break
    if e0 is None:
        raise NotApplicable("no e >= 1 attains the lower bound for a'_e")
    head = LaurentSeries.zero(dm.ctx)
    for e in range(e0):
        head = head + first[e] + second[e]
    return _mx(_first_term(_val(head), kr), mu_prime(wt.m, p, e0))


__all__ = ["closed_n3", "closed_n4", "mu_prime", "n4_pieces"]

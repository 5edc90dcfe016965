"""W_{R,e}, S_R and the graded pieces a^[m], s^[m].

None of W_{R,e} depends on R: A_R has the coefficients of A with q-th roots
taken, so the whole W tower is built once per (A, N) and shared by every
level.  The only R-dependent inputs are eta(A) and a^[m].

Entries of S are computed one at a time, each to its own target precision,
as  s_ij = sum_{a<b} winv_ia * eta(a_ab) * w'_bj  where winv = (W_N^(p))^-1
and w' = W_{N-1}^(p).  The expansion precision of every eta(a_ab) is raised
by the (exact) valuations of the W factors so that every product lands on
the target.
"""

from __future__ import annotations

from .errors import PrecisionExhausted
from .kr import KRContext, padic_binom
from .laurent import INF, LaurentSeries
from .normalize import DefiningMatrix
from .trimatrix import TriMatrix, mat_mul


def iota_N(x: LaurentSeries, N: int) -> LaurentSeries:
    ctx = x.ctx
    if ctx.k == 1:
        return x
    return LaurentSeries._raw(ctx, {l: ctx.frob(c, -N) for l, c in x.terms.items()}, x.prec)


class WTower:
    """W_0 = I, W_e = A_R^(p^(e-1)) W_{e-1}, and the inverses of W_e."""

    def __init__(self, A: TriMatrix, N: int):
        self.A = A
        self.N = N
        self.p = A.ctx.p
        self.n = A.n
        self.A_R = A.map_entries(lambda x: iota_N(x, N))
        ident = TriMatrix.identity(A.ctx, A.n)
        W = [ident]
        Winv = [ident]
        for e in range(1, N + 1):
            F = self.A_R.p_power(e - 1)
            W.append(mat_mul(F, W[-1]))
            Winv.append(mat_mul(Winv[-1], F.inverse()))
        self.W = W
        self.Winv = Winv
        self.WpN = W[N].p_power(1)
        self.WpN1 = W[N - 1].p_power(1)
        self.WinvpN = Winv[N].p_power(1)
        self._vals = {}

    def check_duality(self, upto=None):
        """A_R^(p^(e-1)) W_{e-1} = W_{e-1}^(p) A_R for every e."""
        upto = self.N if upto is None else upto
        for e in range(1, upto + 1):
            other = mat_mul(self.W[e - 1].p_power(1), self.A_R)
            if other != self.W[e]:
                raise AssertionError(f"W recursion and its dual form disagree at e = {e}")
        return True

    def check_inverse(self):
        for e, (w, wi) in enumerate(zip(self.W, self.Winv)):
            if not mat_mul(w, wi).is_diagonal():
                raise AssertionError(f"W_{e} times its inverse is not the identity")
        return True

    def val(self, which: str, i: int, j: int):
        """Valuation of an entry of WinvpN ('inv') or WpN1 ('w1'); 0 on the diagonal."""
        key = (which, i, j)
        v = self._vals.get(key)
        if v is None:
            if i == j:
                v = 0
            else:
                M = self.WinvpN if which == "inv" else self.WpN1 if which == "w1" else self.WpN
                x = M.entries.get((i, j))
                v = INF if x is None else x.val()
            self._vals[key] = v
        return v

    def factor(self, which, i, j) -> LaurentSeries | None:
        """Entry as a series, ``None`` for an exact zero."""
        M = self.WinvpN if which == "inv" else self.WpN1 if which == "w1" else self.WpN
        if i == j:
            return LaurentSeries.one(self.A.ctx)
        return M.entries.get((i, j))


def a_bracket(a: LaurentSeries, m: int, kr: KRContext) -> LaurentSeries:
    """sum_l c_l binom(-l/R, m) t_R^(-ql - mR): exact, supported on mR + qZ."""
    ctx = a.ctx
    q, R, p = kr.q, kr.R, kr.p
    out = {}
    for l, c in a.items():
        b = padic_binom(-l, m, R, p)
        if b:
            out[q * l + m * R] = ctx.mul(c, ctx.from_int(b)) if ctx.k > 1 else c * b % p
    return LaurentSeries._raw(ctx, out, INF if a.prec == INF else q * a.prec)


def a_prime(a: LaurentSeries) -> LaurentSeries:
    """Termwise l * c_l at index l."""
    ctx = a.ctx
    out = {}
    for l, c in a.items():
        v = ctx.mul(c, ctx.from_int(l % ctx.p)) if ctx.k > 1 else c * l % ctx.p
        if v:
            out[l] = v
    return LaurentSeries._raw(ctx, out, a.prec)


def check_a1_from_prime(a: LaurentSeries, kr: KRContext) -> bool:
    """a^[1] = -(t_R^-R / R) iota(a')^q."""
    ctx = a.ctx
    rhs = a_prime(a).scale_index(kr.q).shift(kr.R).scale(ctx.from_int((-pow(kr.R, -1, kr.p)) % kr.p))
    lhs = a_bracket(a, 1, kr)
    if lhs.terms != rhs.terms:
        raise AssertionError("a^[1] does not match the derivative form")
    return True


class SMatrix:
    """Entries of S_R for one K_R, computed on demand.

    ``slack`` is the distance above the lower bound -q mu_ij at which each
    entry is truncated.
    """

    def __init__(self, dm: DefiningMatrix, tower: WTower, kr: KRContext, mu: dict, slack: int):
        self.dm = dm
        self.A = dm.A
        self.tower = tower
        self.kr = kr
        self.mu = mu
        self.slack = slack
        self._s = {}
        self._brackets = {}
        self._abr = {}

    @property
    def n(self):
        return self.A.n

    def target(self, i, j):
        return -self.kr.q * self.mu[(i, j)] + self.slack

    def _eta_cap(self, i, a, b, j, target):
        t = self.tower
        v1, v2 = t.val("inv", i, a), t.val("w1", b, j)
        if v1 == INF or v2 == INF:
            return None
        return target - v1 - v2

    def entry(self, i: int, j: int) -> LaurentSeries:
        key = (i, j)
        s = self._s.get(key)
        if s is None:
            s = self._compute(i, j, self.target(i, j))
            self._s[key] = s
        return s

    def _compute(self, i, j, target, second_form=False):
        kr, t, A = self.kr, self.tower, self.A
        ctx = A.ctx
        total = LaurentSeries.zero(ctx, target)
        lo = i if second_form else i
        for a in range(lo, j + 1):
            for b in range(a if second_form else a + 1, j + 1):
                cap = self._eta_cap(i, a, b, j, target)
                if cap is None:
                    continue
                if a == b:
                    mid = LaurentSeries.one(ctx)
                else:
                    x = A.entries.get((a, b))
                    if x is None:
                        continue
                    mid = kr.embed(x, cap) if second_form else kr.eta(x, cap)
                left, right = t.factor("inv", i, a), t.factor("w1", b, j)
                # keep the short factor on the outside of the longer product
                term = left * (mid * right) if len(right.terms) >= len(left.terms) else (left * mid) * right
                total = total + term
        if total.prec < target:
            raise PrecisionExhausted(f"s({i},{j}) reached only index {total.prec}", total.prec)
        return total.truncate(target)

    def second_form(self, i, j) -> LaurentSeries:
        """(W_N^(p))^-1 embed(A) W_{N-1}^(p) - I at (i, j)."""
        return self._compute(i, j, self.target(i, j), second_form=True)

    def check_second_form(self, i, j):
        if not self.entry(i, j).agrees(self.second_form(i, j)):
            raise AssertionError(f"two expressions for s({i},{j}) disagree")
        return True

    def recursion_residual(self, i, j) -> LaurentSeries:
        """(W_N^(p) S - eta(A) W_{N-1}^(p)) at (i, j), to the available precision."""
        kr, t, A = self.kr, self.tower, self.A
        ctx = A.ctx
        lhs = self.entry(i, j)
        target = lhs.prec
        for l in range(i + 1, j):
            w = t.factor("w", i, l)
            if w is not None:
                lhs = lhs + w * self.entry(l, j)
        rhs = LaurentSeries.zero(ctx)
        for l in range(i + 1, j + 1):
            x = A.entries.get((i, l))
            if x is None:
                continue
            w1 = t.factor("w1", l, j)
            if w1 is None:
                continue
            v = t.val("w1", l, j)
            rhs = rhs + kr.eta(x, target - v) * w1
        return lhs - rhs

    def check_recursion(self, i, j):
        res = self.recursion_residual(i, j)
        if res.terms:
            raise AssertionError(f"W_N^(p) S and eta(A) W_(N-1)^(p) differ at ({i},{j}), index {res.keys()[0]}")
        return True

    # -- graded pieces -----------------------------------------------------------------
    def a_bracket(self, i, j, m) -> LaurentSeries:
        key = (i, j, m)
        v = self._abr.get(key)
        if v is None:
            x = self.A.entries.get((i, j))
            v = LaurentSeries.zero(self.A.ctx) if x is None else a_bracket(x, m, self.kr)
            self._abr[key] = v
        return v

    def s_bracket(self, i, j, m) -> LaurentSeries:
        """sum_{i<=a<b<=j} winv_ia a^[m]_ab w'_bj, exact."""
        key = (i, j, m)
        v = self._brackets.get(key)
        if v is not None:
            return v
        t = self.tower
        total = LaurentSeries.zero(self.A.ctx)
        for a in range(i, j):
            left = t.factor("inv", i, a)
            if left is None:
                continue
            for b in range(a + 1, j + 1):
                right = t.factor("w1", b, j)
                if right is None or (a, b) not in self.A.entries:
                    continue
                total = total + left * self.a_bracket(a, b, m) * right
        self._brackets[key] = total
        return total

    def bracket_sum(self, i, j, M) -> LaurentSeries:
        total = LaurentSeries.zero(self.A.ctx)
        for m in range(1, M + 1):
            total = total + self.s_bracket(i, j, m)
        return total


__all__ = ["WTower", "SMatrix", "a_bracket", "a_prime", "check_a1_from_prime", "iota_N"]

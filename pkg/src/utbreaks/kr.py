"""The auxiliary field K_R = K(t_R) and the maps K -> K_R.

Series in t_R reuse ``LaurentSeries`` with v(t_R) = -1, so that t itself has
valuation -q.  The element T = t_R^R satisfies T^q + T^(q-1) = t^R, which
gives the expansion

    t^e = t_R^(qe) * (1 + sum_{i >= 1} binom(e/R, i) t_R^(-iR))

with binomials of the p-adic integer e/R taken mod p.
"""

from __future__ import annotations

from math import gcd

from .field import FieldCtx
from .laurent import INF, LaurentSeries


def _digits_needed(p: int, m: int) -> int:
    d = 1
    while p**d <= m:
        d += 1
    return d


def padic_binom(l: int, m: int, R: int, p: int) -> int:
    """binom(l / R, m) mod p via Lucas on the p-adic digits of l R^-1."""
    if m < 0:
        return 0
    if m == 0:
        return 1
    D = _digits_needed(p, m)
    mod = p**D
    x = (l * pow(R, -1, mod)) % mod
    out = 1
    while m:
        a, b = x % p, m % p
        if b > a:
            return 0
        out = out * _small_binom(a, b, p) % p
        x //= p
        m //= p
    return out


_BINOM_CACHE: dict = {}


def _small_binom(a: int, b: int, p: int) -> int:
    key = (a, b, p)
    v = _BINOM_CACHE.get(key)
    if v is None:
        num = den = 1
        for i in range(b):
            num = num * (a - i) % p
            den = den * (i + 1) % p
        v = num * pow(den, -1, p) % p
        _BINOM_CACHE[key] = v
    return v


def falling_binom(l: int, m: int, R: int, p: int) -> int:
    """binom(x, m) = x (x-1) ... (x-m+1) / m! at x = l R^-1 mod p, for m < p."""
    if not 0 <= m < p:
        raise ValueError("direct evaluation needs 0 <= m < p")
    x = l * pow(R, -1, p) % p
    return _small_binom_poly(x, m, p)


def _small_binom_poly(x, m, p):
    num, den = 1, 1
    for i in range(m):
        num = num * (x - i) % p
        den = den * (i + 1) % p
    return num * pow(den, -1, p) % p


class KRContext:
    """K_R for fixed (p, N, R) over a coefficient field, with a precision cap.

    ``prec_cap`` is the default truncation index for expansions of elements
    of K; ``check=True`` verifies the defining relation of T at construction.
    """

    def __init__(self, field: FieldCtx, N: int, R: int, prec_cap=None, n: int | None = None, check: bool = True):
        p = field.p
        if R < 1 or gcd(R, p) != 1:
            raise ValueError(f"R = {R} must be a positive integer prime to p = {p}")
        self.field = field
        self.p = p
        self.k = field.k
        self.n = n
        self.N = N
        self.q = p**N
        self.R = R
        self.prec_cap = (p * R + 1) if prec_cap is None else prec_cap
        if check:
            self.check_defining_relation()

    def __repr__(self):
        return f"KRContext(p={self.p}, N={self.N}, q={self.q}, R={self.R}, prec_cap={self.prec_cap})"

    # -- expansions --------------------------------------------------------------------
    def t_power(self, e: int, prec=None, coeff: int = 1) -> LaurentSeries:
        """coeff * t^e as a series in t_R, truncated at ``prec``."""
        prec = self.prec_cap if prec is None else prec
        q, R, p = self.q, self.R, self.p
        ctx = self.field
        if e == 0:
            return LaurentSeries._raw(ctx, {0: coeff} if 0 < prec else {}, prec)
        start = -q * e
        terms = {}
        if start < prec:
            count = (prec - start + R - 1) // R  # indices start + iR below prec
            for i, c in lucas_support(e, R, p, count):
                terms[start + i * R] = ctx.mul(coeff, ctx.from_int(c)) if ctx.k > 1 else c * coeff % p
        return LaurentSeries._raw(ctx, terms, prec)

    def embed(self, x: LaurentSeries, prec=None) -> LaurentSeries:
        """Ring embedding K -> K_R, t -> its t_R expansion."""
        prec = self.prec_cap if prec is None else prec
        if x.prec != INF:
            prec = min(prec, self.q * x.prec)
        total = {}
        ctx = self.field
        add = ctx.add
        for l, c in x.items():
            piece = self.t_power(-l, prec, c)
            for idx, v in piece.terms.items():
                s = add(total.get(idx, 0), v)
                if s:
                    total[idx] = s
                else:
                    total.pop(idx, None)
        return LaurentSeries._raw(ctx, total, prec)

    def iota(self, x: LaurentSeries) -> LaurentSeries:
        """t -> t_R, coefficients u -> u^(1/q)."""
        ctx = self.field
        if ctx.k == 1:
            return LaurentSeries._raw(ctx, dict(x.terms), x.prec)
        e = -self.N
        return LaurentSeries._raw(ctx, {l: ctx.frob(c, e) for l, c in x.terms.items()}, x.prec)

    def iota_q(self, x: LaurentSeries) -> LaurentSeries:
        """iota(x)^q by index scaling: the coefficient roots and powers cancel."""
        return x.scale_index(self.q)

    def eta(self, x: LaurentSeries, prec=None, cross_check: bool = False) -> LaurentSeries:
        """x - iota(x)^q."""
        prec = self.prec_cap if prec is None else prec
        fast = self.iota_q(x)
        if cross_check:
            slow = self.iota(x).p_power(self.N)
            if slow.terms != fast.terms or slow.prec != fast.prec:
                raise AssertionError("index-scaling shortcut for iota(x)^q disagrees with Frobenius")
        return (self.embed(x, prec) - fast).truncate(prec)

    # -- defining relation -------------------------------------------------------------
    def check_defining_relation(self, prec=None):
        """T^q + T^(q-1) - t^R vanishes to ``prec`` (default: the cap)."""
        prec = self.prec_cap if prec is None else prec
        ctx, q, R = self.field, self.q, self.R
        lhs = LaurentSeries._raw(ctx, {i: 1 for i in (-q * R, -(q - 1) * R) if i < prec}, prec)
        residual = (lhs - self.t_power(R, prec)).truncate(prec)
        if residual.terms:
            raise AssertionError(f"defining relation fails at index {residual.keys()[0]}")
        return True

    def with_cap(self, prec_cap) -> "KRContext":
        return KRContext(self.field, self.N, self.R, prec_cap, self.n, check=False)


def lucas_support(l: int, R: int, p: int, count: int):
    """Pairs (i, binom(l/R, i) mod p) with 0 <= i < count and nonzero value.

    By Lucas, only i whose base-p digits sit below those of l/R contribute,
    so those are generated directly, digit by digit from the bottom.
    """
    if count <= 0:
        return []
    D = _digits_needed(p, count)
    mod = p**D
    x = (l * pow(R, -1, mod)) % mod
    found = [(0, 1)]
    scale = 1
    for _ in range(D):
        a = x % p
        x //= p
        if a:
            grown = []
            for b in range(1, a + 1):
                step = b * scale
                cb = _small_binom(a, b, p)
                for v, c in found:
                    if v + step < count:
                        grown.append((v + step, c * cb % p))
            found.extend(grown)
        scale *= p
    found.sort()
    return found


def t_power(e: int, kr: KRContext, prec=None) -> LaurentSeries:
    return kr.t_power(e, prec)


def embed(x: LaurentSeries, kr: KRContext, prec=None) -> LaurentSeries:
    return kr.embed(x, prec)


def iota(x: LaurentSeries, kr: KRContext) -> LaurentSeries:
    return kr.iota(x)


def eta(x: LaurentSeries, kr: KRContext, prec=None) -> LaurentSeries:
    return kr.eta(x, prec)


__all__ = [
    "KRContext",
    "padic_binom",
    "lucas_support",
    "falling_binom",
    "t_power",
    "embed",
    "iota",
    "eta",
]

"""Sparse truncated Laurent series over a finite field.

A series is written as sum c_l t^(-l): the term with *index* l has valuation
l because v(t) = -1.  ``prec`` is the least index whose coefficient is not
known; ``math.inf`` marks an exact value (a Laurent polynomial).  An empty
series with finite ``prec`` is "zero modulo terms of valuation >= prec",
which is kept distinct from the exact zero.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import FieldMismatch, PrecisionExhausted
from .field import FieldCtx, FieldElement

INF = math.inf


class Undetermined(NamedTuple):
    """Valuation of a series with no known nonzero term; v >= bound."""

    bound: int


class LaurentSeries:
    __slots__ = ("ctx", "terms", "prec", "_keys")

    def __init__(self, ctx: FieldCtx, terms=None, prec=INF):
        """Build a series from {index: coefficient}.

        Coefficients may be ``FieldElement`` or integers (read in the prime
        field).  Zero coefficients and indices at or beyond ``prec`` are dropped.
        """
        clean = {}
        if terms:
            for l, c in terms.items():
                code = ctx.code_of(c)
                if code and l < prec:
                    clean[int(l)] = code
        self._init(ctx, clean, prec)

    def _init(self, ctx, terms, prec):
        self.ctx = ctx
        self.terms = terms
        self.prec = prec
        self._keys = None

    @classmethod
    def _raw(cls, ctx, terms, prec=INF):
        # terms must already be nonzero codes below prec
        obj = cls.__new__(cls)
        obj._init(ctx, terms, prec)
        return obj

    @classmethod
    def zero(cls, ctx, prec=INF):
        return cls._raw(ctx, {}, prec)

    @classmethod
    def one(cls, ctx):
        return cls._raw(ctx, {0: 1})

    @classmethod
    def monomial(cls, ctx, index, coeff=1, prec=INF):
        """c t^(-index)."""
        return cls(ctx, {index: coeff}, prec)

    @classmethod
    def t_power(cls, ctx, e, coeff=1):
        """c t^e (index -e)."""
        return cls(ctx, {-e: coeff})

    # -- inspection ------------------------------------------------------------
    def keys(self) -> list[int]:
        if self._keys is None:
            self._keys = sorted(self.terms)
        return self._keys

    def items(self):
        terms = self.terms
        return [(l, terms[l]) for l in self.keys()]

    def __len__(self):
        return len(self.terms)

    @property
    def is_exact(self) -> bool:
        return self.prec == INF

    def is_exact_zero(self) -> bool:
        return not self.terms and self.prec == INF

    def valuation(self):
        """Least index with a nonzero coefficient, ``math.inf`` for the exact
        zero, or ``Undetermined(prec)`` when no term is known."""
        if self.terms:
            return self.keys()[0]
        if self.prec == INF:
            return INF
        return Undetermined(self.prec)

    def val(self) -> int | float:
        """Like ``valuation`` but raises when the valuation is undetermined."""
        v = self.valuation()
        if isinstance(v, Undetermined):
            raise PrecisionExhausted(f"valuation undetermined (>= {v.bound})", v.bound)
        return v

    def val_bound(self):
        """A lower bound for the valuation: exact when determined."""
        if self.terms:
            return self.keys()[0]
        return self.prec

    def coef(self, l: int) -> FieldElement:
        if l >= self.prec:
            raise PrecisionExhausted(f"coefficient at index {l} is beyond precision {self.prec}", self.prec)
        return FieldElement(self.ctx, self.terms.get(l, 0))

    def leading(self) -> tuple[int, FieldElement]:
        v = self.val()
        if v == INF:
            raise ValueError("exact zero has no leading term")
        return v, FieldElement(self.ctx, self.terms[v])

    # -- comparison ----------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.ctx == other.ctx and self.prec == other.prec and self.terms == other.terms

    __hash__ = None

    def agrees(self, other: "LaurentSeries") -> bool:
        """Equality modulo the smaller of the two precisions."""
        return not (self - other).terms

    def _check(self, other):
        if self.ctx != other.ctx:
            raise FieldMismatch("series over different coefficient fields")

    # -- ring operations -----------------------------------------------------------
    def __neg__(self):
        ctx = self.ctx
        return LaurentSeries._raw(ctx, {l: ctx.neg(c) for l, c in self.terms.items()}, self.prec)

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self._addsub(other, False)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self._addsub(other, True)

    def _addsub(self, other, negate):
        self._check(other)
        ctx = self.ctx
        prec = min(self.prec, other.prec)
        out = {l: c for l, c in self.terms.items() if l < prec}
        if ctx.k == 1:
            p = ctx.p
            sign = -1 if negate else 1
            for l, c in other.terms.items():
                if l < prec:
                    v = (out.get(l, 0) + sign * c) % p
                    if v:
                        out[l] = v
                    else:
                        out.pop(l, None)
        else:
            op = ctx.sub if negate else ctx.add
            for l, c in other.terms.items():
                if l < prec:
                    v = op(out.get(l, 0), c)
                    if v:
                        out[l] = v
                    else:
                        out.pop(l, None)
        return LaurentSeries._raw(ctx, out, prec)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return self._mul_series(other)
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "LaurentSeries":
        ctx = self.ctx
        code = ctx.code_of(c)
        if code == 0:
            return LaurentSeries._raw(ctx, {}, self.prec)
        return LaurentSeries._raw(ctx, {l: ctx.mul(v, code) for l, v in self.terms.items()}, self.prec)

    def _mul_series(self, other):
        self._check(other)
        ctx = self.ctx
        vx, vy = self.val_bound(), other.val_bound()
        prec = min(self.prec + vy, other.prec + vx)
        xs, ys = self.items(), other.items()
        if not xs or not ys:
            return LaurentSeries._raw(ctx, {}, prec)
        if len(xs) > len(ys):
            xs, ys = ys, xs
        y0 = ys[0][0]
        acc = {}
        get = acc.get
        if ctx.k == 1:
            for l1, c1 in xs:
                if l1 + y0 >= prec:
                    break
                for l2, c2 in ys:
                    s = l1 + l2
                    if s >= prec:
                        break
                    acc[s] = get(s, 0) + c1 * c2
            p = ctx.p
            out = {}
            for s, v in acc.items():
                v %= p
                if v:
                    out[s] = v
        else:
            add, mul = ctx.add, ctx.mul
            for l1, c1 in xs:
                if l1 + y0 >= prec:
                    break
                for l2, c2 in ys:
                    s = l1 + l2
                    if s >= prec:
                        break
                    acc[s] = add(get(s, 0), mul(c1, c2))
            out = {s: v for s, v in acc.items() if v}
        return LaurentSeries._raw(ctx, out, prec)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("use invert() for negative powers")
        result = LaurentSeries.one(self.ctx)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t^(-k): every index moves up by k."""
        return LaurentSeries._raw(self.ctx, {l + k: c for l, c in self.terms.items()}, self.prec + k)

    def truncate(self, prec) -> "LaurentSeries":
        prec = min(prec, self.prec)
        return LaurentSeries._raw(self.ctx, {l: c for l, c in self.terms.items() if l < prec}, prec)

    def split(self, at: int = 0):
        """(part with index < at, part with index >= at), both keeping prec."""
        lo = {l: c for l, c in self.terms.items() if l < at}
        hi = {l: c for l, c in self.terms.items() if l >= at}
        return (LaurentSeries._raw(self.ctx, lo, self.prec), LaurentSeries._raw(self.ctx, hi, self.prec))

    def p_power(self, e: int = 1) -> "LaurentSeries":
        """Entrywise x^(p^e): index l -> p^e l, coefficient c -> c^(p^e)."""
        ctx = self.ctx
        f = ctx.p ** e
        if ctx.k == 1:
            terms = {f * l: c for l, c in self.terms.items()}
        else:
            terms = {f * l: ctx.frob(c, e) for l, c in self.terms.items()}
        return LaurentSeries._raw(ctx, terms, f * self.prec)

    def scale_index(self, factor: int) -> "LaurentSeries":
        """Index l -> factor * l with coefficients unchanged."""
        return LaurentSeries._raw(self.ctx, {factor * l: c for l, c in self.terms.items()}, factor * self.prec)

    def map_coeffs(self, fn, ctx: FieldCtx | None = None) -> "LaurentSeries":
        """Apply a code -> code map to every coefficient (e.g. a field embedding)."""
        ctx = ctx or self.ctx
        out = {}
        for l, c in self.terms.items():
            v = fn(c)
            if v:
                out[l] = v
        return LaurentSeries._raw(ctx, out, self.prec)

    def as_image(self) -> "LaurentSeries":
        """x^p - x."""
        return self.p_power(1) - self

    def invert(self, prec=None) -> "LaurentSeries":
        """Multiplicative inverse; precision prec - 2 v for inexact input.

        Exact input needs an explicit target ``prec``.
        """
        ctx = self.ctx
        v = self.valuation()
        if isinstance(v, Undetermined):
            raise PrecisionExhausted("cannot invert a series with undetermined valuation", v.bound)
        if v == INF:
            raise ZeroDivisionError("inverse of the exact zero")
        target = self.prec - 2 * v
        if prec is not None:
            target = min(target, prec)
        if target == INF:
            raise ValueError("inverting an exact series needs a target precision")
        length = target + v  # number of coefficients of the unit inverse
        lead_inv = ctx.inv(self.terms[v])
        # unit part u = x t^v / c = 1 + sum_{j >= 1} u_j (index j)
        unit = [(l - v, ctx.mul(c, lead_inv)) for l, c in self.items() if l != v]
        b = [0] * max(length, 0)
        if length > 0:
            b[0] = 1
        for k in range(1, length):
            acc = 0
            for j, u in unit:
                if j > k:
                    break
                bk = b[k - j]
                if bk:
                    acc = ctx.add(acc, ctx.mul(u, bk))
            b[k] = ctx.neg(acc)
        terms = {}
        for k, c in enumerate(b):
            if c:
                terms[k - v] = ctx.mul(c, lead_inv)
        return LaurentSeries._raw(ctx, terms, target)

    # -- text ------------------------------------------------------------------------
    def __repr__(self):
        body = " + ".join(f"{self.ctx.format_code(c)}*t^{-l}" for l, c in self.items()) or "0"
        if self.prec != INF:
            body += f" + O(t^{-self.prec})"
        return f"LaurentSeries({body})"


KRSeries = LaurentSeries  # series in t_R; same representation


def valuation(x: LaurentSeries):
    return x.valuation()


def ring_op(x: LaurentSeries, y: LaurentSeries, op: str) -> LaurentSeries:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


def invert(x: LaurentSeries, prec=None) -> LaurentSeries:
    return x.invert(prec)


def p_power(x: LaurentSeries, e: int = 1) -> LaurentSeries:
    return x.p_power(e)


def as_image(x: LaurentSeries) -> LaurentSeries:
    return x.as_image()


def parse_series(ctx: FieldCtx, text: str) -> LaurentSeries:
    """Parse "l:coeff,l:coeff" (indices strictly increasing)."""
    text = text.strip()
    terms = {}
    if not text:
        return LaurentSeries.zero(ctx)
    last = None
    for part in text.split(","):
        if ":" not in part:
            raise ValueError(f"malformed term {part!r}")
        l_text, c_text = part.split(":", 1)
        l = int(l_text)
        if last is not None and l <= last:
            raise ValueError("indices must be strictly increasing")
        last = l
        code = ctx.parse_code(c_text)
        if code:
            terms[l] = code
    return LaurentSeries._raw(ctx, terms)


def format_series(x: LaurentSeries) -> str:
    if x.prec != INF:
        raise ValueError("only exact series have a text encoding")
    return ",".join(f"{l}:{x.ctx.format_code(c)}" for l, c in x.items())

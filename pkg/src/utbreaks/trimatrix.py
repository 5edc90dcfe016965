"""The ring FT_n over a series field and its matrix valuations.

An element is ``d I + X`` with d in GF(p) and X strictly upper triangular;
``entries`` maps (i, j), 1 <= i < j <= n, to a ``LaurentSeries``.  A missing
entry is an exact zero.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import NotInvertible, PrecisionExhausted
from .field import FieldCtx
from .laurent import INF, LaurentSeries, Undetermined


def partitions(i: int, j: int):
    """All chains i = l_0 < l_1 < ... < l_s = j, as tuples."""
    inner = range(i + 1, j)
    for s in range(len(inner) + 1):
        for mid in combinations(inner, s):
            yield (i, *mid, j)


class TriMatrix:
    __slots__ = ("ctx", "n", "diag", "entries")

    def __init__(self, ctx: FieldCtx, n: int, entries=None, diag: int = 1):
        self.ctx = ctx
        self.n = n
        self.diag = diag % ctx.p
        self.entries = {}
        for (i, j), x in (entries or {}).items():
            if not 1 <= i < j <= n:
                raise IndexError(f"entry ({i},{j}) is not strictly upper triangular for n={n}")
            if not x.is_exact_zero():
                self.entries[(i, j)] = x

    @classmethod
    def identity(cls, ctx, n):
        return cls(ctx, n)

    def entry(self, i: int, j: int) -> LaurentSeries:
        if i == j:
            return LaurentSeries(self.ctx, {0: self.diag})
        if i > j:
            return LaurentSeries.zero(self.ctx)
        return self.entries.get((i, j)) or LaurentSeries.zero(self.ctx)

    def __getitem__(self, ij):
        return self.entry(*ij)

    def pairs(self):
        n = self.n
        return [(i, i + d) for d in range(1, n) for i in range(1, n - d + 1)]

    @property
    def is_unipotent(self):
        return self.diag == 1

    @property
    def is_nilpotent(self):
        return self.diag == 0

    def is_diagonal(self):
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, TriMatrix):
            return NotImplemented
        return (self.n, self.diag, self.ctx) == (other.n, other.diag, other.ctx) and self.entries == other.entries

    __hash__ = None

    def agrees(self, other: "TriMatrix") -> bool:
        """Entrywise equality modulo each entry's overlap precision."""
        if self.n != other.n or self.diag != other.diag:
            return False
        return all(self.entry(i, j).agrees(other.entry(i, j)) for i, j in self.pairs())

    # -- linear structure ------------------------------------------------------------
    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def _combine(self, other, sign):
        out = dict(self.entries)
        for key, y in other.entries.items():
            x = out.get(key)
            if x is None:
                out[key] = -y if sign < 0 else y
            else:
                out[key] = x - y if sign < 0 else x + y
        return TriMatrix(self.ctx, self.n, out, self.diag + sign * other.diag)

    def scale(self, c: int) -> "TriMatrix":
        """Multiply by an element of GF(p)."""
        return TriMatrix(self.ctx, self.n, {k: x.scale(c) for k, x in self.entries.items()}, self.diag * c)

    def series_scale(self, gamma: LaurentSeries) -> "TriMatrix":
        """gamma X for nilpotent X (stays in NT_n)."""
        if self.diag:
            raise ValueError("series multiples leave FT_n unless the matrix is nilpotent")
        return TriMatrix(self.ctx, self.n, {k: gamma * x for k, x in self.entries.items()}, 0)

    def map_entries(self, fn, ctx=None) -> "TriMatrix":
        return TriMatrix(ctx or self.ctx, self.n, {k: fn(x) for k, x in self.entries.items()}, self.diag)

    def __mul__(self, other):
        if isinstance(other, TriMatrix):
            return mat_mul(self, other)
        return NotImplemented

    def p_power(self, e: int = 1) -> "TriMatrix":
        return mat_p_power(self, e)

    def inverse(self) -> "TriMatrix":
        return mat_inv(self)

    def valuation(self, variant: str = "v"):
        return mat_val(self, variant)

    def block(self, i: int, j: int) -> "TriMatrix":
        """The principal submatrix on rows/columns i..j, reindexed from 1."""
        out = {(a - i + 1, b - i + 1): x for (a, b), x in self.entries.items() if i <= a and b <= j}
        return TriMatrix(self.ctx, j - i + 1, out, self.diag)

    def __repr__(self):
        body = ", ".join(f"({i},{j}): {x!r}" for (i, j), x in sorted(self.entries.items()))
        return f"TriMatrix(n={self.n}, diag={self.diag}, {{{body}}})"


def mat_mul(X: TriMatrix, Y: TriMatrix) -> TriMatrix:
    """z_ij = sum_{l=i..j} x_il y_lj, diagonal scalars included."""
    if X.n != Y.n:
        raise ValueError("size mismatch")
    if X.ctx != Y.ctx:
        raise ValueError("matrices over different coefficient fields")
    n = X.n
    xe, ye = X.entries, Y.entries
    out = {}
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            terms = []
            if X.diag and (i, j) in ye:
                terms.append(ye[(i, j)].scale(X.diag))
            if Y.diag and (i, j) in xe:
                terms.append(xe[(i, j)].scale(Y.diag))
            for l in range(i + 1, j):
                x, y = xe.get((i, l)), ye.get((l, j))
                if x is not None and y is not None:
                    terms.append(x * y)
            if terms:
                acc = terms[0]
                for term in terms[1:]:
                    acc = acc + term
                out[(i, j)] = acc
    return TriMatrix(X.ctx, n, out, X.diag * Y.diag)


def mat_inv(X: TriMatrix) -> TriMatrix:
    """Inverse via the finite Neumann series d^-1 sum_s (-(X/d - I))^s, in Horner form."""
    if X.diag == 0:
        raise NotInvertible("nilpotent matrix is not invertible")
    p = X.ctx.p
    dinv = pow(X.diag, -1, p)
    unip = X.scale(dinv)
    nil = TriMatrix(X.ctx, X.n, unip.entries, 0)
    ident = TriMatrix.identity(X.ctx, X.n)
    # I - N(I - N(I - ...)), n-1 nested factors
    acc = ident
    for _ in range(X.n - 1):
        acc = ident - mat_mul(nil, acc)
    return acc.scale(dinv)


def inv_entry_oracle(X: TriMatrix, i: int, j: int) -> LaurentSeries:
    """(i, j) entry of X^-1 for unipotent X as a signed sum over partitions."""
    if not X.is_unipotent:
        raise ValueError("partition formula needs a unipotent matrix")
    total = LaurentSeries.zero(X.ctx)
    for lam in partitions(i, j):
        term = None
        for a, b in zip(lam, lam[1:]):
            x = X.entry(a, b)
            term = x if term is None else term * x
        s = len(lam) - 1
        total = total - term if s % 2 else total + term
    return total


def mat_val(X: TriMatrix, variant: str = "v"):
    """min over (i, j) of v(x_ij)/(j - i) as a Fraction, or math.inf.

    ``variant="v_tilde"`` skips the corner (1, n).
    """
    if variant not in ("v", "v_tilde"):
        raise ValueError(f"unknown variant {variant!r}")
    best = INF
    pending = []
    for (i, j), x in X.entries.items():
        if variant == "v_tilde" and (i, j) == (1, X.n):
            continue
        v = x.valuation()
        if isinstance(v, Undetermined):
            pending.append(Fraction(v.bound, j - i))
        elif v != INF:
            best = min(best, Fraction(v, j - i))
    for bound in pending:
        if bound < best:
            raise PrecisionExhausted("matrix valuation not determined by the carried precision")
    return best


def mat_p_power(X: TriMatrix, e: int = 1) -> TriMatrix:
    return TriMatrix(X.ctx, X.n, {k: x.p_power(e) for k, x in X.entries.items()}, X.diag)


def check_admissible(nu: dict, n: int):
    for i in range(1, n + 1):
        for j in range(i + 2, n + 1):
            for l in range(i + 1, j):
                if nu[(i, j)] < nu[(i, l)] + nu[(l, j)]:
                    raise ValueError(f"nu is not superadditive at ({i},{l},{j})")


def h_member(X: TriMatrix, nu: dict, strict: bool = False) -> bool:
    """Membership in H_{<= nu} (or H_{< nu} when strict): -v(x_ij) <= nu_ij."""
    if not X.is_unipotent:
        return False
    check_admissible(nu, X.n)
    for (i, j) in X.pairs():
        x = X.entries.get((i, j))
        if x is None:
            continue
        bound = -nu[(i, j)]
        v = x.valuation()
        if isinstance(v, Undetermined):
            if v.bound > bound or (not strict and v.bound >= bound):
                continue
            raise PrecisionExhausted(f"entry ({i},{j}) too imprecise for the membership test")
        if strict and not v > bound:
            return False
        if not strict and not v >= bound:
            return False
    return True


__all__ = [
    "TriMatrix",
    "partitions",
    "mat_mul",
    "mat_inv",
    "inv_entry_oracle",
    "mat_val",
    "mat_p_power",
    "h_member",
    "check_admissible",
]

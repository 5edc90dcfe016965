"""Bringing a defining matrix into reduced form.

A is replaced by (I + x E_ij)^(p) A (I + x E_ij)^-1 pair by pair, in order of
increasing j - i.  Each step changes a_ij by x^p - x and only touches entries
of larger level, so earlier pairs stay reduced.  The reduced form keeps only
coefficients at negative indices prime to p.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import HypothesisViolation, PrecisionExhausted
from .field import FieldCtx, FieldElement, artin_schreier_solve, extend_by_p, proot
from .laurent import INF, LaurentSeries
from .trimatrix import TriMatrix

MAX_EXTENSIONS = 6
MAX_WORK_PREC = 1 << 20


class _NeedExtension(Exception):
    pass


@dataclass
class DefiningMatrix:
    """A reduced unipotent defining matrix together with its provenance."""

    A: TriMatrix
    raw: TriMatrix
    extensions: int = 0
    steps: list = field(default_factory=list)

    @property
    def ctx(self) -> FieldCtx:
        return self.A.ctx

    @property
    def n(self) -> int:
        return self.A.n

    @property
    def p(self) -> int:
        return self.A.ctx.p

    def entry(self, i, j) -> LaurentSeries:
        return self.A.entry(i, j)


def is_reduced(A: TriMatrix) -> bool:
    p = A.ctx.p
    for x in A.entries.values():
        if not x.is_exact:
            return False
        if any(l >= 0 or l % p == 0 for l in x.terms):
            return False
    return True


def check_superdiagonal(A: TriMatrix):
    """Every a_{i,i+1} must be nonzero with a prime-to-p weight."""
    p = A.ctx.p
    for i in range(1, A.n):
        x = A.entries.get((i, i + 1))
        if x is None or not x.terms:
            raise HypothesisViolation(
                f"entry ({i},{i + 1}) vanishes after reduction; "
                "the matrix cannot define an extension with group UT_n(F_p)",
                pair=(i, i + 1),
            )
        if (-x.val()) % p == 0 or x.val() >= 0:
            raise HypothesisViolation(f"entry ({i},{i + 1}) has weight {-x.val()} not prime to p", pair=(i, i + 1))


def fp_rank(series: list[LaurentSeries]) -> int:
    """Rank over F_p of reduced series, read through their F_p coordinates."""
    if not series:
        return 0
    ctx = series[0].ctx
    p = ctx.p
    rows = []
    for x in series:
        row = {}
        for l, c in x.terms.items():
            for t, v in enumerate(ctx.to_vec(c)):
                if v:
                    row[(l, t)] = v
        rows.append(row)
    rank = 0
    while rows:
        row = rows.pop()
        if not row:
            continue
        rank += 1
        key = min(row)
        inv = pow(row[key], -1, p)
        nxt = []
        for other in rows:
            f = other.get(key)
            if f:
                f = f * inv % p
                other = dict(other)
                for k2, v in row.items():
                    w = (other.get(k2, 0) - f * v) % p
                    if w:
                        other[k2] = w
                    else:
                        other.pop(k2, None)
            nxt.append(other)
        rows = nxt
    return rank


def superdiagonal_independent(A: TriMatrix, i: int = 1, j: int | None = None) -> bool:
    """For a reduced A: are a_{l,l+1}, i <= l < j, linearly independent over F_p?

    Reduced nonzero elements never lie in x^p - x, so this is independence of
    the Artin-Schreier classes, which by the Burnside basis theorem is what
    makes the block's Galois group all of UT_(j-i+1)(F_p).
    """
    j = A.n if j is None else j
    ent = [A.entries.get((l, l + 1)) for l in range(i, j)]
    if any(x is None for x in ent):
        return False
    return fp_rank(ent) == len(ent)


def _map_field(A: TriMatrix, big: FieldCtx, emb) -> TriMatrix:
    return TriMatrix(big, A.n, {k: x.map_coeffs(emb.map_code, big) for k, x in A.entries.items()}, A.diag)


def normalize(A_raw: TriMatrix, allow_extension: bool = True, check: bool = True) -> DefiningMatrix:
    """Reduce ``A_raw``; the coefficient field grows by degree p when an
    Artin-Schreier equation has no root in it."""
    if not A_raw.is_unipotent:
        raise ValueError("defining matrix must be unipotent")
    for (i, j), x in A_raw.entries.items():
        if not x.is_exact:
            raise ValueError(f"entry ({i},{j}) must be a Laurent polynomial")
    A = A_raw
    extensions = 0
    while True:
        try:
            reduced, steps = _reduce_adaptive(A)
            break
        except _NeedExtension:
            if not allow_extension or extensions >= MAX_EXTENSIONS:
                raise
            big, emb = extend_by_p(A.ctx)
            A = _map_field(A, big, emb)
            extensions += 1
    if check:
        check_superdiagonal(reduced)
        if not is_reduced(reduced):
            raise AssertionError("reduction left a forbidden coefficient")
    return DefiningMatrix(reduced, A_raw, extensions, steps)


def _reduce_adaptive(A: TriMatrix):
    span = max([abs(l) for x in A.entries.values() for l in x.terms] + [1])
    work = 4 * span + 4
    while True:
        try:
            return _reduce(A, work)
        except PrecisionExhausted:
            work *= 2
            if work > MAX_WORK_PREC:
                raise


def _reduce(A: TriMatrix, work: int):
    ctx = A.ctx
    p, n = ctx.p, A.n
    ent = dict(A.entries)
    steps = []
    for d in range(1, n):
        for i in range(1, n - d + 1):
            j = i + d
            a = ent.get((i, j))
            if a is None:
                continue
            if a.prec < 1:
                raise PrecisionExhausted(f"entry ({i},{j}) known only below index {a.prec}", a.prec)
            x, remaining = _solve_step(a, work)
            if remaining:
                ent[(i, j)] = LaurentSeries._raw(ctx, remaining)
            else:
                ent.pop((i, j))
            if x is None:
                continue
            steps.append(((i, j), x))
            xp = x.p_power(1)
            for m in range(j + 1, n + 1):
                ajm = ent.get((j, m))
                if ajm is not None:
                    ent[(i, m)] = _acc(ent.get((i, m)), xp * ajm, ctx)
            for l in range(1, i):
                ali = ent.get((l, i))
                if ali is not None:
                    ent[(l, j)] = _acc(ent.get((l, j)), -(x * ali), ctx)
    return TriMatrix(ctx, n, ent), steps


def _acc(cur, delta, ctx):
    out = delta if cur is None else cur + delta
    if not out.terms and out.prec == INF:
        return None
    return out


def _solve_step(a: LaurentSeries, work: int):
    """x with a + x^p - x free of forbidden coefficients, and what remains.

    Returns (x or None, dict of surviving negative-index codes).
    """
    ctx = a.ctx
    p = ctx.p
    terms = dict(a.terms)
    neg = {l: c for l, c in terms.items() if l < 0}
    x_terms = {}
    # indices divisible by p: x = (-c)^(1/p) t^(-l/p), smallest index first
    while True:
        bad = [l for l in neg if l % p == 0]
        if not bad:
            break
        l = min(bad)
        c = neg.pop(l)
        y = proot(FieldElement(ctx, ctx.neg(c)), 1).code
        k = l // p
        x_terms[k] = ctx.add(x_terms.get(k, 0), y)
        v = ctx.sub(neg.get(k, 0), y)
        if v:
            neg[k] = v
        else:
            neg.pop(k, None)
    x_terms = {k: c for k, c in x_terms.items() if c}
    # constant term: x0^p - x0 = -c0
    c0 = terms.get(0, 0)
    if c0:
        root = artin_schreier_solve(FieldElement(ctx, ctx.neg(c0)))
        if not root:
            raise _NeedExtension()
        if root.code:
            x_terms[0] = root.code
    x = LaurentSeries._raw(ctx, x_terms)
    # positive part y: x_+ = sum_k y^(p^k) solves x^p - x = -y
    pos = {l: c for l, c in terms.items() if l > 0}
    if pos or a.prec != INF:
        prec = min(work, a.prec)
        y = LaurentSeries._raw(ctx, pos, prec)
        xs = LaurentSeries.zero(ctx, prec)
        step = y
        while step.terms:
            xs = xs + step
            step = step.p_power(1).truncate(prec)
        x = x + xs
    if not x.terms and x.prec == INF:
        return None, neg
    return x, neg


__all__ = [
    "DefiningMatrix",
    "normalize",
    "is_reduced",
    "check_superdiagonal",
    "superdiagonal_independent",
    "fp_rank",
]

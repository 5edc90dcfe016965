"""Seeded generators of reduced defining matrices."""

from __future__ import annotations

import random

from .field import FieldCtx
from .laurent import LaurentSeries
from .normalize import superdiagonal_independent
from .trimatrix import TriMatrix, partitions


def prime_to(p: int, lo: int, hi: int, rng: random.Random) -> int:
    while True:
        w = rng.randint(lo, hi)
        if w % p:
            return w


def random_entry(ctx: FieldCtx, weight: int, rng: random.Random, extra: int = 1) -> LaurentSeries:
    """Leading index -weight plus up to ``extra`` further negative prime-to-p terms."""
    p = ctx.p
    terms = {-weight: ctx.element(rng.randrange(1, ctx.size))}
    for _ in range(rng.randint(0, extra)):
        l = rng.randint(1, weight)
        if l % p and l != weight:
            terms[-l] = ctx.element(rng.randrange(ctx.size))
    return LaurentSeries(ctx, terms)


def random_defining(
    ctx: FieldCtx,
    n: int,
    rng: random.Random,
    max_weight: int = 12,
    density: float = 0.5,
    extra: int = 1,
    distinct_superdiagonal: bool = False,
    resonance: float = 0.0,
) -> TriMatrix:
    """A reduced unipotent matrix whose superdiagonal is independent over F_p.

    With probability ``resonance`` an off-superdiagonal weight is copied from
    a chain through already chosen entries, which lets leading terms cancel
    and produces breaks below mu.
    """
    while True:
        A = _draw(ctx, n, rng, max_weight, density, extra, distinct_superdiagonal, resonance)
        if superdiagonal_independent(A):
            return A


def _draw(ctx, n, rng, max_weight, density, extra, distinct_superdiagonal, resonance):
    p = ctx.p
    entries = {}
    used = set()
    for d in range(1, n):
        for i in range(1, n - d + 1):
            j = i + d
            if d > 1 and rng.random() >= density:
                continue
            chains = [] if d == 1 else _chain_weights(entries, i, j, p)
            if chains and rng.random() < resonance:
                entries[(i, j)] = random_entry(ctx, rng.choice(chains), rng, extra)
                continue
            while True:
                w = prime_to(p, 1, max_weight, rng)
                if not (distinct_superdiagonal and d == 1 and w in used):
                    break
            if d == 1:
                used.add(w)
            entries[(i, j)] = random_entry(ctx, w, rng, extra)
    return TriMatrix(ctx, n, entries)


def cancelling_n3(ctx: FieldCtx, rng: random.Random, max_weight: int = 12, extra: int = 1) -> TriMatrix:
    """n = 3 with m13 = m12 + m23 and c13 m13 = c12 c23 m23, so the leading
    terms of a13 and a12 a23 cancel in the first graded piece and r13 < mu13.

    Needs odd p: for p = 2 the sum of two odd weights is even.
    """
    p = ctx.p
    if p == 2:
        raise ValueError("no cancelling configuration exists for p = 2")
    while True:
        m12 = prime_to(p, 1, max_weight, rng)
        m23 = prime_to(p, 1, max_weight, rng)
        if (m12 + m23) % p == 0:
            continue
        c12 = ctx.element(rng.randrange(1, ctx.size))
        c23 = ctx.element(rng.randrange(1, ctx.size))
        c13 = c12 * c23 * ctx(m23) / ctx(m12 + m23)
        a12 = _with_leading(random_entry(ctx, m12, rng, extra), m12, c12)
        a23 = _with_leading(random_entry(ctx, m23, rng, extra), m23, c23)
        a13 = _with_leading(random_entry(ctx, m12 + m23, rng, extra), m12 + m23, c13)
        A = TriMatrix(ctx, 3, {(1, 2): a12, (2, 3): a23, (1, 3): a13})
        if superdiagonal_independent(A):
            return A


def _with_leading(x: LaurentSeries, weight: int, c) -> LaurentSeries:
    terms = {l: x.ctx.element(v) for l, v in x.terms.items()}
    terms[-weight] = c
    return LaurentSeries(x.ctx, terms)


def _chain_weights(entries, i, j, p):
    out = set()
    for lam in partitions(i, j):
        if len(lam) < 3:
            continue
        try:
            w = sum(-entries[(a, b)].val() for a, b in zip(lam, lam[1:]))
        except KeyError:
            continue
        if w % p:
            out.add(w)
    return sorted(out)


__all__ = ["random_defining", "random_entry", "prime_to", "cancelling_n3"]

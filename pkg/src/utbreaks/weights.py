"""Chain weights over index intervals and the N / q / R selection rules.

``m`` tables map (i, j) to a positive integer, or to ``None`` when the entry
is absent (weight minus infinity).  Every chain through an absent link is
discarded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .trimatrix import partitions

ENUM_LIMIT = 12


def _pairs(n):
    return [(i, i + d) for d in range(1, n) for i in range(1, n - d + 1)]


def mu_dp(m: dict, n: int) -> dict:
    """mu_ij = max(m_ij, max_l mu_il + mu_lj), by increasing interval length."""
    mu = {}
    for i, j in _pairs(n):
        best = m.get((i, j))
        for l in range(i + 1, j):
            a, b = mu.get((i, l)), mu.get((l, j))
            if a is not None and b is not None and (best is None or a + b > best):
                best = a + b
        mu[(i, j)] = best
    missing = [ij for ij, v in mu.items() if v is None]
    if missing:
        raise ValueError(f"no chain of present entries spans {missing[0]}")
    return mu


def chain_weight(m: dict, lam):
    total = 0
    for a, b in zip(lam, lam[1:]):
        w = m.get((a, b))
        if w is None:
            return None
        total += w
    return total


def mu_enum_oracle(m: dict, n: int) -> dict:
    """Brute force over every chain in every interval."""
    if n > ENUM_LIMIT:
        raise ValueError(f"enumeration oracle limited to n <= {ENUM_LIMIT}")
    mu = {}
    for i, j in _pairs(n):
        weights = [w for w in (chain_weight(m, lam) for lam in partitions(i, j)) if w is not None]
        if not weights:
            raise ValueError(f"no chain of present entries spans {(i, j)}")
        mu[(i, j)] = max(weights)
    return mu


def optimal_chains(m: dict, mu: dict, i: int, j: int):
    """All chains from i to j whose weight equals mu_ij, found by back-pointers."""
    target = mu[(i, j)]
    out = []

    def walk(a, prefix, acc):
        # extend the chain from a towards j, pruning with mu as an upper bound
        for b in range(a + 1, j + 1):
            w = m.get((a, b))
            if w is None:
                continue
            rest = 0 if b == j else mu.get((b, j))
            if rest is None or acc + w + rest < target:
                continue
            if b == j:
                if acc + w == target:
                    out.append((*prefix, b))
            else:
                walk(b, (*prefix, b), acc + w)

    walk(i, (i,), 0)
    return out


def mA_of(m: dict, n: int, i: int = 1, j: int | None = None) -> Fraction:
    """max of m_lk / (k - l) over the block i <= l < k <= j."""
    j = n if j is None else j
    vals = [Fraction(w, b - a) for (a, b), w in m.items() if w is not None and i <= a and b <= j]
    if not vals:
        raise ValueError("block has no nonzero entry")
    return max(vals)


def choose_N(p: int, n: int, mA) -> tuple[int, int]:
    """Least N with p^(N - T) > n (p^T + 1) mA + p, T = n(n-1)/2."""
    mA = Fraction(mA)
    if mA <= 0:
        raise ValueError("mA must be positive")
    T = n * (n - 1) // 2
    bound = n * (p**T + 1) * mA + p
    e = 0
    while p**e <= bound:
        e += 1
    N = T + e
    return N, p**N


def r_threshold(i: int, j: int, q: int, r: dict, mA_block) -> Fraction:
    """q max(r_{i,j-1}, r_{i+1,j}) + (j - i) mA_block, with r_ii = -1."""
    left = -1 if j - 1 == i else r[(i, j - 1)]
    down = -1 if i + 1 == j else r[(i + 1, j)]
    return q * Fraction(max(left, down)) + (j - i) * Fraction(mA_block)


def choose_R(threshold, p: int) -> int:
    threshold = Fraction(threshold)
    R = max(1, threshold.numerator // threshold.denominator + 1)
    while gcd(R, p) != 1:
        R += 1
    return R


@dataclass
class WeightTable:
    n: int
    m: dict
    mu: dict = field(init=False)
    mA: Fraction = field(init=False)
    mA_block: dict = field(init=False)

    def __post_init__(self):
        self.mu = mu_dp(self.m, self.n)
        self.mA = mA_of(self.m, self.n)
        self.mA_block = {(i, j): mA_of(self.m, self.n, i, j) for i, j in _pairs(self.n)}

    def pairs(self):
        return _pairs(self.n)

    def chains(self, i, j):
        return optimal_chains(self.m, self.mu, i, j)

    def check(self, p: int | None = None):
        """Superadditivity of mu, mu >= m, equality on the superdiagonal."""
        m, mu = self.m, self.mu
        for i, j in self.pairs():
            if m.get((i, j)) is not None and mu[(i, j)] < m[(i, j)]:
                raise AssertionError(f"mu{(i, j)} < m{(i, j)}")
            for l in range(i + 1, j):
                if mu[(i, j)] < mu[(i, l)] + mu[(l, j)]:
                    raise AssertionError(f"mu not superadditive at {(i, l, j)}")
            if j == i + 1 and mu[(i, j)] != m.get((i, j)):
                raise AssertionError(f"mu{(i, j)} differs from m on the superdiagonal")
            if p is not None and m.get((i, j)) is not None:
                w = m[(i, j)]
                if w <= 0 or w % p == 0:
                    raise AssertionError(f"m{(i, j)} = {w} is not a positive prime-to-p weight")
        return True


def weight_table(A) -> WeightTable:
    """Weights m_ij = -v(a_ij) of a normalized defining matrix."""
    m = {}
    for i, j in A.pairs():
        x = A.entries.get((i, j))
        m[(i, j)] = None if x is None else -x.val()
    return WeightTable(A.n, m)


__all__ = [
    "WeightTable",
    "weight_table",
    "mu_dp",
    "mu_enum_oracle",
    "optimal_chains",
    "chain_weight",
    "mA_of",
    "choose_N",
    "r_threshold",
    "choose_R",
]

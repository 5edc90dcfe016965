"""Upper ramification breaks r_ij from a defining matrix.

For each level d = j - i an admissible R is chosen above every threshold at
that level, S_R is built, and r_ij = (R - v(s_ij)) / q.  Each break is then
tested against the structural facts it must satisfy; a failure downgrades
the record to ``hypothesis-suspect`` instead of aborting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import HypothesisViolation
from .field import FieldCtx
from .kr import KRContext
from .laurent import LaurentSeries
from .normalize import DefiningMatrix, normalize, superdiagonal_independent
from .smatrix import SMatrix, WTower, check_a1_from_prime
from .trimatrix import TriMatrix
from .weights import WeightTable, choose_N, choose_R, r_threshold, weight_table

VERIFIED = "verified"
UNVERIFIED = "unverified-range"
SUSPECT = "hypothesis-suspect"

DEFAULT_CEILING = 6  # slack may grow to 2**6 times its starting value


@dataclass
class PairBreak:
    i: int
    j: int
    m: int | None
    mu: int
    r: Fraction
    v_s: int
    N: int
    q: int
    R: int
    status: str
    slack: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def d(self):
        return self.j - self.i

    def line(self) -> str:
        m = "-" if self.m is None else str(self.m)
        return (
            f"break {self.i} {self.j} r={self.r.numerator}/{self.r.denominator} m={m} mu={self.mu} "
            f"v={self.v_s} N={self.N} q={self.q} R={self.R} status={self.status}"
        )


@dataclass
class BreakReport:
    p: int
    n: int
    N: int
    q: int
    weights: WeightTable
    field: FieldCtx
    extensions: int
    R_levels: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)
    pairs: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    def get(self, i, j) -> PairBreak:
        for b in self.pairs:
            if (b.i, b.j) == (i, j):
                return b
        raise KeyError((i, j))

    @property
    def r(self) -> dict:
        return {(b.i, b.j): b.r for b in self.pairs}

    def lines(self) -> list[str]:
        return [b.line() for b in sorted(self.pairs, key=lambda b: (b.d, b.i))]

    def numerics(self):
        """Everything except provenance: used to compare reruns."""
        return [(b.i, b.j, b.m, b.mu, b.r, b.v_s, b.N, b.q, b.R) for b in sorted(self.pairs, key=lambda b: (b.d, b.i))]


class BreakEngine:
    """Holds the reduced matrix, its weights and the W tower across levels."""

    def __init__(self, dm: DefiningMatrix, checks: bool = True, ceiling: int = DEFAULT_CEILING):
        self.dm = dm
        self.A = dm.A
        self.p = dm.p
        self.n = dm.n
        self.weights = weight_table(dm.A)
        self.weights.check(self.p)
        self.N, self.q = choose_N(self.p, self.n, self.weights.mA)
        self.tower = WTower(dm.A, self.N)
        self.checks = checks
        self.ceiling = ceiling
        if checks:
            self.tower.check_duality()

    def kr(self, R: int) -> KRContext:
        return KRContext(self.A.ctx, self.N, R, n=self.n)

    def s_matrix(self, R: int, slack: int | None = None) -> SMatrix:
        slack = self.p * R + 1 if slack is None else slack
        return SMatrix(self.dm, self.tower, self.kr(R), self.weights.mu, slack)

    def leading_s(self, i, j, R):
        """(v_s, S) with the slack doubled until s_ij shows a nonzero term."""
        slack = self.p * R + 1
        for _ in range(self.ceiling + 1):
            S = self.s_matrix(R, slack)
            s = S.entry(i, j)
            if s.terms:
                return s.val(), S
            slack *= 2
        raise HypothesisViolation(
            f"s({i},{j}) vanishes up to index {s.prec}; the matrix is unlikely to define "
            "an extension with group UT_n(F_p)",
            pair=(i, j),
        )

    def break_of_pair(self, i, j, R, in_range=True) -> PairBreak:
        v_s, S = self.leading_s(i, j, R)
        wt = self.weights
        q = self.q
        r = Fraction(R - v_s, q)
        rec = PairBreak(i, j, wt.m.get((i, j)), wt.mu[(i, j)], r, v_s, self.N, q, R, VERIFIED, S.slack)
        if self.checks:
            rec.failures, rec.notes = pair_checks(self, S, rec, in_range)
        if not in_range:
            rec.status = UNVERIFIED
        elif rec.failures:
            rec.status = SUSPECT
        return rec


def pair_checks(engine: BreakEngine, S: SMatrix, rec: PairBreak, in_range: bool):
    """Structural facts each computed break must satisfy.  Returns
    (failures, notes); identity failures raise instead."""
    p, q, R = engine.p, engine.q, rec.R
    i, j, d = rec.i, rec.j, rec.d
    mu, v = rec.mu, rec.v_s
    wt = engine.weights
    failures, notes = [], []
    s = S.entry(i, j)
    if not superdiagonal_independent(engine.A, i, j):
        failures.append(f"superdiagonal of block ({i}..{j}) is linearly dependent over F_p")

    # exact identities
    S.check_recursion(i, j)
    S.check_second_form(i, j)
    for a in range(i, j):
        for b in range(a + 1, j + 1):
            x = engine.A.entries.get((a, b))
            if x is None:
                continue
            check_a1_from_prime(x, S.kr)
            mab = wt.m[(a, b)]
            for mm in range(1, p + 1):
                ab = S.a_bracket(a, b, mm)
                if any((l - mm * R) % q for l in ab.terms):
                    raise AssertionError(f"a^[{mm}]({a},{b}) has support outside {mm}R + qZ")
                if ab.terms:
                    lead = ab.val()
                    if mm == 1 and lead != -q * mab + R:
                        raise AssertionError(f"v(a^[1]({a},{b})) = {lead}, expected {-q * mab + R}")
                    if lead < -q * mab + mm * R:
                        raise AssertionError(f"v(a^[{mm}]({a},{b})) below its lower bound")
                    if lead != -q * mab + mm * R:
                        notes.append(f"v(a^[{mm}]({a},{b})) = {lead} > {-q * mab + mm * R}")

    # graded pieces of s
    M = max(1, -(-S.slack // R) - 1)
    for mm in range(1, M + 1):
        sb = S.s_bracket(i, j, mm)
        if any((l - mm * R) % p for l in sb.terms):
            raise AssertionError(f"s^[{mm}]({i},{j}) has support outside {mm}R + pZ")
        if sb.terms and sb.val() < -q * mu + mm * R:
            failures.append(f"v(s^[{mm}]) below -q mu + {mm}R")
    tail = min(s.prec, -q * mu + (M + 1) * R)
    if not S.bracket_sum(i, j, M).truncate(tail).agrees(s.truncate(tail)):
        raise AssertionError(f"graded pieces of s({i},{j}) do not sum to s below index {tail}")

    s1 = S.s_bracket(i, j, 1)
    if in_range and (not s1.terms or s1.val() != v):
        failures.append("v(s) != v(s^[1])")
    if v < -q * mu + R:
        failures.append("v(s) below -q mu + R")
    if v < -q * mu + p * R and v % p == 0:
        failures.append("p divides v(s) below -q mu + pR")
    if in_range:
        bound = -q * mu + min(p, d) * R
        if v > bound or (v == bound) != (d == 1):
            failures.append(f"v(s) = {v} against bound {bound}")
    if d == 1 and v != -q * rec.m + R:
        failures.append("superdiagonal valuation differs from -q m + R")
    if d > 1 and rec.m is not None and mu == rec.m and all(
        rec.m > wt.mu[(i, l)] + wt.mu[(l, j)] for l in range(i + 1, j)
    ):
        if v != -q * rec.m + R:
            failures.append("dominant entry but v(s) != -q m + R")
    if rec.r > mu:
        failures.append("r exceeds mu")
    if p ** (d * (d - 1) // 2) % rec.r.denominator:
        failures.append(f"denominator {rec.r.denominator} does not divide p^{d * (d - 1) // 2}")
    return failures, notes


def nesting_failures(report: BreakReport):
    """Pairs (outer, inner) where a proper sub-block does not have a smaller break."""
    r = report.r
    bad = []
    for (i, j), rij in r.items():
        for (l, m), rlm in r.items():
            if (l, m) != (i, j) and i <= l and m <= j and not rij > rlm:
                bad.append(((i, j), (l, m)))
    return bad


def compute_breaks(
    A_raw: TriMatrix,
    allow_unverified: bool = False,
    checks: bool = True,
    ceiling: int = DEFAULT_CEILING,
    R_levels: dict | None = None,
    dm: DefiningMatrix | None = None,
) -> BreakReport:
    """Normalize, weigh, and extract every break level by level.

    ``R_levels`` optionally fixes R for some levels; each value must exceed
    that level's threshold and be prime to p.
    """
    dm = normalize(A_raw) if dm is None else dm
    eng = BreakEngine(dm, checks=checks, ceiling=ceiling)
    p, n, q = eng.p, eng.n, eng.q
    wt = eng.weights
    report = BreakReport(p, n, eng.N, q, wt, dm.ctx, dm.extensions)
    r = {}
    for d in range(1, n):
        pairs = [(i, i + d) for i in range(1, n - d + 1)]
        in_range = d <= p + 1
        if not in_range and not allow_unverified:
            report.skipped.extend((i, j) for d2 in range(d, n) for i, j in [(i, i + d2) for i in range(1, n - d2 + 1)])
            break
        th = {ij: r_threshold(*ij, q, r, wt.mA_block[ij]) for ij in pairs}
        report.thresholds.update(th)
        top = max(th.values())
        R = choose_R(top, p)
        if R_levels and d in R_levels:
            R = R_levels[d]
            if R <= top or R % p == 0:
                raise ValueError(f"R = {R} is not admissible at level {d} (threshold {top})")
        report.R_levels[d] = R
        for i, j in pairs:
            try:
                rec = eng.break_of_pair(i, j, R, in_range)
            except HypothesisViolation as exc:
                exc.report = report
                raise
            report.pairs.append(rec)
            r[(i, j)] = rec.r
    if checks:
        for outer, inner in nesting_failures(report):
            rec = report.get(*outer)
            rec.failures.append(f"r{outer} not above r{inner}")
            if rec.status == VERIFIED:
                rec.status = SUSPECT
    return report


__all__ = [
    "PairBreak",
    "BreakReport",
    "BreakEngine",
    "compute_breaks",
    "pair_checks",
    "nesting_failures",
    "VERIFIED",
    "UNVERIFIED",
    "SUSPECT",
]

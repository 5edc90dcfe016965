"""Invariant suites with pass/fail tallies.

Each suite draws from a seeded ``random.Random`` so that a given seed gives
byte-identical diagnostics.  ``run_verify`` runs every suite against one
instance plus seeded perturbations of it.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import floor, inf

from .breaks import VERIFIED, BreakEngine, compute_breaks, nesting_failures
from .errors import HypothesisViolation
from .field import FieldCtx, FieldElement, NoSolution, artin_schreier_solve, extend_by_p, proot
from .kr import KRContext, falling_binom, lucas_support, padic_binom
from .laurent import LaurentSeries
from .normalize import DefiningMatrix, normalize, superdiagonal_independent
from .random_instances import prime_to
from .smatrix import check_a1_from_prime
from .trimatrix import TriMatrix, inv_entry_oracle, mat_inv, mat_val
from .weights import choose_R, mu_dp, mu_enum_oracle


class Tally:
    """Ordered pass/fail counters keyed by invariant name."""

    def __init__(self):
        self.counts: dict[str, list[int]] = {}
        self.first_failure: dict[str, str] = {}

    def record(self, name: str, ok: bool, detail: str = ""):
        c = self.counts.setdefault(name, [0, 0])
        c[0 if ok else 1] += 1
        if not ok and name not in self.first_failure:
            self.first_failure[name] = detail

    def run(self, name: str, fn, *args):
        """Record fn(*args): truthy passes, falsy or AssertionError fails."""
        try:
            ok = bool(fn(*args))
            detail = ""
        except AssertionError as exc:
            ok, detail = False, str(exc)
        self.record(name, ok, detail)
        return ok

    def merge(self, other: "Tally"):
        for name, (a, b) in other.counts.items():
            c = self.counts.setdefault(name, [0, 0])
            c[0] += a
            c[1] += b
        for name, d in other.first_failure.items():
            self.first_failure.setdefault(name, d)

    @property
    def failed(self) -> int:
        return sum(b for _, b in self.counts.values())

    @property
    def total(self) -> int:
        return sum(a + b for a, b in self.counts.values())

    def ok(self) -> bool:
        return self.failed == 0

    def lines(self) -> list[str]:
        out = []
        for name, (a, b) in self.counts.items():
            line = f"check {name} pass={a} fail={b}"
            if b and self.first_failure.get(name):
                line += f"  first: {self.first_failure[name]}"
            out.append(line)
        return out


# -- random objects ----------------------------------------------------------------------


def rand_series(ctx: FieldCtx, rng: random.Random, lo=-8, hi=8, terms=3) -> LaurentSeries:
    return LaurentSeries(ctx, {rng.randint(lo, hi): ctx.element(rng.randrange(ctx.size)) for _ in range(terms)})


def rand_nonzero_series(ctx, rng, lo=-8, hi=8, terms=3):
    while True:
        x = rand_series(ctx, rng, lo, hi, terms)
        if x.terms:
            return x


def rand_trimatrix(ctx, n, rng, diag=None, density=0.6, lo=-8, hi=8) -> TriMatrix:
    """Sparse random element of FT_n over the series field."""
    diag = rng.randrange(ctx.p) if diag is None else diag
    ent = {}
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            if rng.random() < density:
                ent[(i, j)] = rand_series(ctx, rng, lo, hi, rng.randint(1, 3))
    return TriMatrix(ctx, n, ent, diag)


def _above(ctx, n, rng, level, diag):
    """Random matrix whose valuation exceeds ``level`` (a Fraction)."""
    ent = {}
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            if rng.random() < 0.6:
                start = floor((j - i) * level) + 1
                ent[(i, j)] = rand_series(ctx, rng, start, start + 6, 2)
    return TriMatrix(ctx, n, ent, diag)


# -- suites ------------------------------------------------------------------------------


def field_suite(ctx: FieldCtx, rng: random.Random, trials: int, tally: Tally | None = None) -> Tally:
    tally = tally or Tally()
    p = ctx.p
    for _ in range(trials):
        a = FieldElement(ctx, rng.randrange(ctx.size))
        b = FieldElement(ctx, rng.randrange(ctx.size))
        tally.record("field.distributive", a * (b + a) == a * b + a * a)
        if b:
            tally.record("field.inverse", (a / b) * b == a)
        e = rng.randint(1, 3)
        tally.record("field.proot", proot(a, e) ** (p**e) == a)
        x = FieldElement(ctx, rng.randrange(ctx.size))
        y = x**p - x
        root = artin_schreier_solve(y)
        tally.record("field.artin_schreier.solvable", not isinstance(root, NoSolution) and root**p - root == y)
        z = FieldElement(ctx, rng.randrange(ctx.size))
        root = artin_schreier_solve(z)
        # x^p - x = z has a root iff the absolute trace of z vanishes
        tally.record("field.artin_schreier.trace", isinstance(root, NoSolution) == (z.trace() != 0))
    return tally


def laurent_suite(ctx: FieldCtx, rng: random.Random, trials: int, tally: Tally | None = None) -> Tally:
    tally = tally or Tally()
    for _ in range(trials):
        x, y, z = (rand_series(ctx, rng) for _ in range(3))
        tally.record("laurent.associative", (x * y) * z == x * (y * z))
        tally.record("laurent.distributive", x * (y + z) == x * y + x * z)
        tally.record("laurent.frobenius_additive", (x + y).p_power(1) == x.p_power(1) + y.p_power(1))
        if x.terms and y.terms:
            tally.record("laurent.valuation_multiplicative", (x * y).val() == x.val() + y.val())
        u = rand_nonzero_series(ctx, rng)
        k = rng.randint(1, 12)
        prod = u * u.invert(k - u.val())
        tally.record("laurent.invert", prod.agrees(LaurentSeries.one(ctx)) and prod.prec == k)
    return tally


def matval_suite(ctx: FieldCtx, n: int, rng: random.Random, trials: int, tally: Tally | None = None) -> Tally:
    """Valuation properties of FT_n, eleven items, plus inverse against the partition sum."""
    tally = tally or Tally()
    p = ctx.p
    V = lambda X: mat_val(X, "v")  # noqa: E731
    T = lambda X: mat_val(X, "v_tilde")  # noqa: E731
    for _ in range(trials):
        X = rand_trimatrix(ctx, n, rng)
        Y = rand_trimatrix(ctx, n, rng)
        # (i)
        tally.record("matval.infinite_iff_diagonal", (V(X) == inf) == X.is_diagonal())
        # (ii)
        tally.record("matval.tilde_dominates", T(X) >= V(X))
        # (iii)
        i, j = rng.randrange(p), rng.randrange(p)
        Z = X.scale(i) + Y.scale(j)
        tally.record(
            "matval.linear_combination",
            V(Z) >= min(V(X), V(Y)) and T(Z) >= min(T(X), T(Y)),
        )
        # (iv)
        Xp = X.p_power(1)
        tally.record("matval.frobenius", V(Xp) == p * V(X) and T(Xp) == p * T(X))
        # (v)
        XY = X * Y
        tally.record("matval.product", V(XY) >= min(V(X), V(Y)) and T(XY) >= min(T(X), T(Y)))
        # (vi)
        Nx = rand_trimatrix(ctx, n, rng, diag=0)
        tally.record(
            "matval.nilpotent_product",
            V(Nx * Y) >= min(V(Nx), T(Y)) and V(Y * Nx) >= min(V(Nx), T(Y)),
        )
        # (vii)
        Ny = rand_trimatrix(ctx, n, rng, diag=0)
        tally.record("matval.two_nilpotents", V(Nx * Ny) >= min(T(Nx), T(Ny)))
        # (viii): X invertible with v(X) > v(Y)
        Yv = rand_trimatrix(ctx, n, rng, density=0.8)
        if Yv.entries:
            Xi = _above(ctx, n, rng, V(Yv), rng.randrange(1, p))
            tally.record(
                "matval.dominant_factor",
                V(Xi) > V(Yv) and V(Xi * Yv) == V(Yv) and V(Yv * Xi) == V(Yv),
            )
        # (ix): the same with the tilde valuation
        Yt = rand_trimatrix(ctx, n, rng, density=0.8)
        if n > 2 and T(Yt) != inf:
            Xt = _above(ctx, n, rng, T(Yt), rng.randrange(1, p))
            tally.record(
                "matval.dominant_factor_tilde",
                T(Xt) > T(Yt) and T(Xt * Yt) == T(Yt) and T(Yt * Xt) == T(Yt),
            )
        # (x)
        Xinv_src = rand_trimatrix(ctx, n, rng, diag=rng.randrange(1, p))
        Xinv = mat_inv(Xinv_src)
        tally.record("matval.inverse", V(Xinv) == V(Xinv_src) and T(Xinv) == T(Xinv_src))
        tally.record(
            "matval.inverse_identity",
            (Xinv * Xinv_src).agrees(TriMatrix.identity(ctx, n)) and (Xinv_src * Xinv).agrees(TriMatrix.identity(ctx, n)),
        )
        # (xi)
        gamma = rand_nonzero_series(ctx, rng)
        c = gamma.val()
        G = Nx.series_scale(gamma)
        ok = V(G) >= min(Fraction(c, n - 1), c) + V(Nx)
        if n > 2:
            ok = ok and T(G) >= min(Fraction(c, n - 2), c) + T(Nx)
        tally.record("matval.series_multiple", ok)
        # unipotent inverse against the partition sum
        U = rand_trimatrix(ctx, n, rng, diag=1)
        Ui = mat_inv(U)
        tally.record(
            "matinv.partition_oracle",
            all(Ui.entry(a, b).agrees(inv_entry_oracle(U, a, b)) for a, b in U.pairs()),
        )
    return tally


def rand_weight_table(n: int, rng: random.Random, absent: float = 0.3, top: int = 30) -> dict:
    m = {}
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            if j == i + 1 or rng.random() >= absent:
                m[(i, j)] = rng.randint(1, top)
            else:
                m[(i, j)] = None
    return m


def weights_suite(n: int, rng: random.Random, trials: int, tally: Tally | None = None) -> Tally:
    tally = tally or Tally()
    for _ in range(trials):
        m = rand_weight_table(n, rng)
        tally.record("weights.mu_dp_vs_enumeration", mu_dp(m, n) == mu_enum_oracle(m, n))
    return tally


def kr_suite(p: int, rng: random.Random, trials: int, tally: Tally | None = None) -> Tally:
    tally = tally or Tally()
    ctx = FieldCtx(p)
    for _ in range(trials):
        N = rng.randint(1, 4)
        R = prime_to(p, 1, 40, rng)
        kr = KRContext(ctx, N, R, prec_cap=p * R + 1, check=False)
        tally.run("kr.defining_relation", kr.check_defining_relation)
        a, b = rng.randint(-6, 6), rng.randint(-6, 6)
        prec = rng.randint(1, p * R + 1)
        lhs = kr.t_power(a, prec + kr.q * abs(b) + 1) * kr.t_power(b, prec + kr.q * abs(a) + 1)
        tally.record("kr.t_power_multiplicative", lhs.truncate(prec).agrees(kr.t_power(a + b, prec)))
        l = rng.randint(-50, 50)
        for mm in range(p):
            tally.record("kr.binomial_direct_vs_lucas", falling_binom(l, mm, R, p) == padic_binom(l, mm, R, p))
        count = rng.randint(1, 3 * p * p)
        support = dict(lucas_support(l, R, p, count))
        brute = {i: padic_binom(l, i, R, p) for i in range(count) if padic_binom(l, i, R, p)}
        tally.record("kr.lucas_support", support == brute)
    return tally


# -- pipeline ----------------------------------------------------------------------------


def report_invariants(report, tally: Tally):
    """Facts every report must satisfy, recomputed from the numbers alone."""
    p, q = report.p, report.q
    tally.record("report.nesting", not nesting_failures(report))
    for b in report.pairs:
        d = b.d
        tally.record("report.r_at_most_mu", b.r <= b.mu)
        R = b.R
        tally.record("report.p_coprime_low_valuation", not (b.v_s < -q * b.mu + p * R and b.v_s % p == 0))
        tally.record("report.denominator", p ** (d * (d - 1) // 2) % b.r.denominator == 0)
        tally.record("report.lower_bound", b.v_s >= -q * b.mu + R)
        if d == 1:
            tally.record("report.superdiagonal_equals_weight", b.r == b.m)
        tally.record("report.status_verified", b.status == VERIFIED, f"({b.i},{b.j}) {b.failures}")


def pipeline_suite(dm: DefiningMatrix, tally: Tally | None = None, allow_unverified=False, ceiling=6, rng=None):
    """Compute every break of ``dm`` and check identities and report invariants."""
    tally = tally or Tally()
    report = compute_breaks(dm.raw, allow_unverified=allow_unverified, ceiling=ceiling, dm=dm)
    eng = BreakEngine(dm, checks=False, ceiling=ceiling)
    tally.run("identity.w_duality", eng.tower.check_duality)
    tally.run("identity.w_inverse", eng.tower.check_inverse)
    p, q = eng.p, eng.q
    for d, R in sorted(report.R_levels.items()):
        kr = eng.kr(R)
        tally.run("identity.defining_relation", kr.check_defining_relation)
        for (a, b), x in dm.A.entries.items():
            if b - a <= d:
                tally.run("identity.a1_from_prime", check_a1_from_prime, x, kr)
    for rec in report.pairs:
        S = eng.s_matrix(rec.R, rec.slack)
        i, j = rec.i, rec.j
        tally.run("identity.recursion", S.check_recursion, i, j)
        tally.run("identity.second_form", S.check_second_form, i, j)
        for mm in range(1, p + 1):
            sb = S.s_bracket(i, j, mm)
            tally.record("identity.s_bracket_support", all((l - mm * rec.R) % p == 0 for l in sb.terms))
            for a in range(i, j):
                for b in range(a + 1, j + 1):
                    if (a, b) in dm.A.entries:
                        ab = S.a_bracket(a, b, mm)
                        tally.record("identity.a_bracket_support", all((l - mm * rec.R) % q == 0 for l in ab.terms))
    report_invariants(report, tally)
    return report, eng


def r_independence(eng: BreakEngine, report, tally: Tally, pair=None):
    """Recompute one pair at two further admissible R, one congruent mod p."""
    p = eng.p
    in_range = [b for b in report.pairs if b.d <= p + 1]
    top = pair or max(((b.d, b.i, b.j) for b in in_range))[1:]
    rec = report.get(*top)
    R1 = rec.R
    R2 = choose_R(report.thresholds[top] + p, p)
    if R2 == R1:
        R2 = choose_R(R1 + 1, p)
    R3 = R1 + p
    values = {R1: rec.r}
    for R in (R2, R3):
        values[R] = eng.break_of_pair(*top, R).r
    tally.record("r_independence.three_R", len(set(values.values())) == 1, f"{top}: {values}")
    # coefficient transport for congruent R, 1 <= m < p
    i, j = top
    S1 = eng.s_matrix(R1, rec.slack)
    S3 = eng.s_matrix(R3, rec.slack)
    for mm in range(1, p):
        a = {l - mm * R1: c for l, c in S1.s_bracket(i, j, mm).terms.items()}
        b = {l - mm * R3: c for l, c in S3.s_bracket(i, j, mm).terms.items()}
        tally.record("r_independence.transport", a == b)
    return values


def extension_stability(dm: DefiningMatrix, report, tally: Tally):
    big, emb = extend_by_p(dm.ctx)
    A = TriMatrix(big, dm.n, {k: x.map_coeffs(emb.map_code, big) for k, x in dm.raw.entries.items()})
    other = compute_breaks(A)
    tally.record("field_extension.same_numerics", other.numerics() == report.numerics())
    return other


def perturb(A: TriMatrix, rng: random.Random) -> TriMatrix:
    """Add lower-order terms, and sometimes redraw an off-superdiagonal entry."""
    ctx = A.ctx
    p = ctx.p
    while True:
        ent = dict(A.entries)
        for (i, j) in A.pairs():
            x = ent.get((i, j))
            if x is not None and rng.random() < 0.5:
                w = -x.val()
                if w > 1:
                    l = rng.randint(1, w - 1)
                    if l % p:
                        ent[(i, j)] = x + LaurentSeries.monomial(ctx, -l, ctx.element(rng.randrange(1, ctx.size)))
            if j - i > 1 and rng.random() < 0.3:
                w = prime_to(p, 1, max(3, max(-y.val() for y in A.entries.values())), rng)
                ent[(i, j)] = LaurentSeries.monomial(ctx, -w, ctx.element(rng.randrange(1, ctx.size)))
        B = TriMatrix(ctx, A.n, ent)
        if superdiagonal_independent(B):
            return B


def run_verify(A_raw: TriMatrix, trials: int = 10, seed: int = 0, allow_unverified=False, ceiling=6) -> Tally:
    """Every suite on this instance and on ``trials`` seeded perturbations."""
    rng = random.Random(seed)
    tally = Tally()
    ctx = A_raw.ctx
    n = A_raw.n
    field_suite(ctx, rng, trials, tally)
    laurent_suite(ctx, rng, trials, tally)
    matval_suite(ctx, n, rng, trials, tally)
    weights_suite(max(3, n), rng, trials, tally)
    kr_suite(ctx.p, rng, trials, tally)
    dm = normalize(A_raw)
    tally.record("normalize.reduced_entries", all(
        l < 0 and l % ctx.p for x in dm.A.entries.values() for l in x.terms
    ))
    tally.record("normalize.superdiagonal_independent", superdiagonal_independent(dm.A))
    report, eng = pipeline_suite(dm, tally, allow_unverified, ceiling)
    r_independence(eng, report, tally)
    extension_stability(dm, report, tally)
    for _ in range(trials):
        B = perturb(dm.A, rng)
        try:
            dmb = normalize(B)
            rep_b, eng_b = pipeline_suite(dmb, tally, allow_unverified, ceiling)
            r_independence(eng_b, rep_b, tally)
            tally.record("perturbed.pipeline", True)
        except HypothesisViolation as exc:
            tally.record("perturbed.pipeline", False, str(exc))
    return tally


__all__ = [
    "Tally",
    "run_verify",
    "field_suite",
    "laurent_suite",
    "matval_suite",
    "weights_suite",
    "kr_suite",
    "pipeline_suite",
    "report_invariants",
    "r_independence",
    "extension_stability",
    "perturb",
    "rand_trimatrix",
    "rand_weight_table",
]

"""Command line driver: ``utbreaks compute|verify|explain <file>``.

Exit codes: 0 ok, 1 verify found a failing invariant, 2 parse error,
3 coefficient field had to be extended (only with --strict),
4 precision ceiling reached, 5 hypothesis violation.
"""

from __future__ import annotations

import argparse
import sys

from .breaks import DEFAULT_CEILING, compute_breaks
from .errors import HypothesisViolation, InstanceParseError, PrecisionExhausted
from .instance import parse
from .normalize import normalize
from .verify import run_verify

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_EXTENDED = 3
EXIT_PRECISION = 4
EXIT_HYPOTHESIS = 5


class _Stop(Exception):
    def __init__(self, code):
        self.code = code


def _err(msg):
    print(msg, file=sys.stderr)


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        _err(f"error: cannot read {path}: {exc.strerror}")
        raise _Stop(EXIT_PARSE) from None
    try:
        return parse(text)
    except InstanceParseError as exc:
        _err(f"error: {path}: {exc}")
        raise _Stop(EXIT_PARSE) from None


def _normalized(A, args):
    dm = normalize(A)
    if dm.extensions:
        k = dm.ctx.k
        msg = f"coefficient field extended {dm.extensions} time(s) to GF({dm.p}^{k}) during normalization"
        if args.strict:
            _err(f"error: {msg}")
            raise _Stop(EXIT_EXTENDED)
        _err(f"warning: {msg}")
    return dm


def _report(A, args):
    dm = _normalized(A, args)
    return compute_breaks(A, allow_unverified=args.allow_unverified, ceiling=args.precision_ceiling, dm=dm)


def _omitted_notice(report):
    if report.skipped:
        pairs = " ".join(f"({i},{j})" for i, j in report.skipped)
        _err(
            f"notice: pairs with j-i > p+1 = {report.p + 1} omitted: {pairs}; "
            "rerun with --allow-unverified to compute them"
        )


def cmd_compute(args):
    _, A = _load(args.file)
    report = _report(A, args)
    for line in report.lines():
        print(line)
    _omitted_notice(report)
    return EXIT_OK


def cmd_verify(args):
    _, A = _load(args.file)
    _normalized(A, args)
    tally = run_verify(
        A,
        trials=args.trials,
        seed=args.seed,
        allow_unverified=args.allow_unverified,
        ceiling=args.precision_ceiling,
    )
    for line in tally.lines():
        print(line)
    verdict = "all pass" if tally.ok() else f"{tally.failed} failed"
    print(f"verify: {tally.total} checks, {verdict} (trials={args.trials} seed={args.seed})")
    return EXIT_OK if tally.ok() else EXIT_VERIFY_FAILED


def _chain_text(m, lam):
    path = "<".join(str(a) for a in lam)
    if len(lam) == 2:
        return path
    parts = "+".join(str(m[(a, b)]) for a, b in zip(lam, lam[1:]))
    return f"{path} ({parts})"


def cmd_explain(args):
    ctx, A = _load(args.file)
    dm = _normalized(A, args)
    report = compute_breaks(A, allow_unverified=args.allow_unverified, ceiling=args.precision_ceiling, dm=dm)
    wt = report.weights
    p = report.p
    print(f"field GF({p}^{dm.ctx.k}) n={dm.n} extensions={dm.extensions}")
    for i, j in wt.pairs():
        w = wt.m[(i, j)]
        print(f"m({i},{j})={'-' if w is None else w}")
    for i, j in wt.pairs():
        chains = "; ".join(_chain_text(wt.m, lam) for lam in wt.chains(i, j))
        print(f"mu({i},{j})={wt.mu[(i, j)]} via {chains}")
    print(f"mA={wt.mA}")
    print(f"N={report.N} q={report.q}")
    for d, R in sorted(report.R_levels.items()):
        top = max(th for (i, j), th in report.thresholds.items() if j - i == d)
        start = p * R + 1
        print(f"R_{d}={R} threshold={top} slack={start} ceiling={start * 2**args.precision_ceiling}")
    for b in sorted(report.pairs, key=lambda b: (b.d, b.i)):
        print(f"slack({b.i},{b.j})={b.slack}")
    _omitted_notice(report)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="utbreaks", description="Upper ramification breaks of UT_n(F_p)-extensions.")
    ap.add_argument("command", choices=["compute", "verify", "explain"])
    ap.add_argument("file", help="instance file")
    ap.add_argument("--allow-unverified", action="store_true", help="also compute pairs with j-i > p+1")
    ap.add_argument("--strict", action="store_true", help="fail (exit 3) if normalization extends the field")
    ap.add_argument(
        "--precision-ceiling",
        type=int,
        default=DEFAULT_CEILING,
        metavar="C",
        help="double the working slack at most C times (default %(default)s)",
    )
    ap.add_argument("--trials", type=int, default=10, help="random trials per suite for verify")
    ap.add_argument("--seed", type=int, default=0, help="seed for verify")
    return ap


COMMANDS = {"compute": cmd_compute, "verify": cmd_verify, "explain": cmd_explain}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.precision_ceiling < 0:
        _err("error: --precision-ceiling must be non-negative")
        return EXIT_PARSE
    try:
        return COMMANDS[args.command](args)
    except _Stop as stop:
        return stop.code
    except HypothesisViolation as exc:
        where = f" at pair {exc.pair}" if exc.pair else ""
        _err(f"error: hypothesis violation{where}: {exc}")
        return EXIT_HYPOTHESIS
    except PrecisionExhausted as exc:
        _err(f"error: precision ceiling reached: {exc}")
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())

"""Plain-text instance files.

    # comment
    p 2
    k 1
    modulus 1,1,1          (only when k > 1; monic, constant term first)
    n 3
    entry 1 2 : -3:1
    entry 2 3 : -5:1

Header lines take one value each and may appear once.  Entries follow the
header; an entry not listed is zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InstanceParseError
from .field import FieldCtx, is_prime
from .laurent import format_series, parse_series
from .trimatrix import TriMatrix

HEADER = ("p", "k", "modulus", "n")


@dataclass
class Instance:
    p: int
    k: int
    n: int
    modulus: list | None = None
    entries: dict = field(default_factory=dict)  # (i, j) -> LaurentSeries
    ctx: FieldCtx | None = None

    def matrix(self) -> TriMatrix:
        return TriMatrix(self.ctx, self.n, self.entries)


def _int(text, what, line):
    try:
        return int(text)
    except ValueError:
        raise InstanceParseError(f"{what} must be an integer, got {text!r}", line) from None


def parse_instance(text: str) -> Instance:
    head = {}
    entry_lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        key, _, rest = body.partition(" ")
        rest = rest.strip()
        if key in HEADER:
            if entry_lines:
                raise InstanceParseError(f"header field {key!r} after the first entry", lineno)
            if key in head:
                raise InstanceParseError(f"duplicate {key!r} line", lineno)
            if not rest or " " in rest:
                raise InstanceParseError(f"{key!r} takes exactly one value", lineno)
            head[key] = (rest, lineno)
        elif key == "entry":
            entry_lines.append((rest, lineno))
        else:
            raise InstanceParseError(f"unknown keyword {key!r}", lineno)

    for key in ("p", "n"):
        if key not in head:
            raise InstanceParseError(f"missing {key!r} line")
    p = _int(head["p"][0], "p", head["p"][1])
    if not is_prime(p):
        raise InstanceParseError(f"p = {p} is not prime", head["p"][1])
    k = 1
    if "k" in head:
        k = _int(head["k"][0], "k", head["k"][1])
        if k < 1:
            raise InstanceParseError("k must be at least 1", head["k"][1])
    n = _int(head["n"][0], "n", head["n"][1])
    if n < 2:
        raise InstanceParseError("n must be at least 2", head["n"][1])

    modulus = None
    if k > 1:
        if "modulus" not in head:
            raise InstanceParseError(f"k = {k} needs a modulus line")
        mtext, mline = head["modulus"]
        modulus = [_int(c, "modulus coefficient", mline) for c in mtext.split(",")]
        if len(modulus) != k + 1:
            raise InstanceParseError(f"modulus must have {k + 1} coefficients", mline)
        if modulus[-1] != 1:
            raise InstanceParseError("modulus must be monic", mline)
        if any(not 0 <= c < p for c in modulus):
            raise InstanceParseError(f"modulus coefficients must lie in [0, {p})", mline)
        try:
            ctx = FieldCtx(p, modulus)
        except ValueError as exc:
            raise InstanceParseError(str(exc), mline) from None
    else:
        if "modulus" in head:
            raise InstanceParseError("modulus is only allowed when k > 1", head["modulus"][1])
        ctx = FieldCtx(p)

    entries = {}
    for rest, lineno in entry_lines:
        idx, sep, series = rest.partition(" : ")
        if not sep:
            raise InstanceParseError("entry needs ' : ' between indices and terms", lineno)
        parts = idx.split()
        if len(parts) != 2:
            raise InstanceParseError("entry needs two indices", lineno)
        i, j = (_int(x, "index", lineno) for x in parts)
        if not 1 <= i < j <= n:
            raise InstanceParseError(f"entry ({i},{j}) is not strictly upper triangular for n = {n}", lineno)
        if (i, j) in entries:
            raise InstanceParseError(f"duplicate entry ({i},{j})", lineno)
        try:
            entries[(i, j)] = parse_series(ctx, series.strip())
        except ValueError as exc:
            raise InstanceParseError(str(exc), lineno) from None
    return Instance(p, k, n, modulus, entries, ctx)


def parse(text: str):
    """(FieldCtx, TriMatrix) of an instance file."""
    inst = parse_instance(text)
    return inst.ctx, inst.matrix()


def format_instance(inst) -> str:
    if isinstance(inst, TriMatrix):
        inst = instance_from_matrix(inst)
    lines = [f"p {inst.p}", f"k {inst.k}"]
    if inst.k > 1:
        lines.append("modulus " + ",".join(str(c) for c in inst.modulus))
    lines.append(f"n {inst.n}")
    for (i, j) in sorted(inst.entries, key=lambda ij: (ij[1] - ij[0], ij[0])):
        x = inst.entries[(i, j)]
        lines.append(f"entry {i} {j} : {format_series(x)}")
    return "\n".join(lines) + "\n"


def instance_from_matrix(A: TriMatrix) -> Instance:
    ctx = A.ctx
    modulus = list(ctx.modulus) if ctx.k > 1 else None
    return Instance(ctx.p, ctx.k, A.n, modulus, dict(A.entries), ctx)


def load(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


__all__ = ["Instance", "parse", "parse_instance", "format_instance", "instance_from_matrix", "load"]

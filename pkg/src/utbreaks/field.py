"""Exact arithmetic in finite fields GF(p^k).

Elements are stored as integer *codes*: the coordinate vector
(c_0, ..., c_{k-1}) with respect to the basis 1, g, ..., g^{k-1} of
GF(p)[g]/(modulus) is packed as c_0 + c_1 p + ... + c_{k-1} p^{k-1}.
For k = 1 the code is simply the residue mod p.  Hot loops elsewhere in the
package work on codes through the ``FieldCtx`` methods; ``FieldElement`` is
the user-facing wrapper.

The residue field of the local fields in this package is a finite field that
can be enlarged by degree p whenever an Artin-Schreier equation has no root
(see ``extend_by_p``).
"""

from __future__ import annotations

from functools import reduce

from .errors import FieldMismatch

# Fields up to this size get log/exp tables for multiplication.
_LOG_TABLE_LIMIT = 1 << 16
# Fields up to this size get a full addition table.
_ADD_TABLE_LIMIT = 512


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Polynomials over GF(p), coefficient lists low -> high, no trailing zeros.

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim([c % p for c in out])


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _ptrim(out)


def _pdivmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = (a[-1] * inv) % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        _ptrim(a)
    return _ptrim(q), a


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return a


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pdivmod(a, f, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), f, p)[1]
        base = _pdivmod(_pmul(base, base, p), f, p)[1]
        e >>= 1
    return result


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p) (coefficients low -> high)."""
    f = _ptrim([c % p for c in f])
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    # x^(p^i) mod f for i = 0..k
    powers = [x]
    cur = x
    for _ in range(k):
        cur = _ppowmod(cur, p, f, p)
        powers.append(cur)
    if _psub(powers[k], x, p):
        return False
    for r in _prime_factors(k):
        g = _pgcd(f, _psub(powers[k // r], x, p), p)
        if len(g) > 1:
            return False
    return True


def find_irreducible(p: int, k: int) -> list[int]:
    """Least monic irreducible of degree k, in the order of its packed code."""
    if k == 1:
        return [0, 1]
    for code in range(1, p ** k):
        coeffs = [(code // p ** i) % p for i in range(k)]
        if coeffs[0] == 0:
            continue
        f = coeffs + [1]
        if is_irreducible(f, p):
            return f
    raise ValueError(f"no irreducible polynomial of degree {k} over GF({p})")


class FieldCtx:
    """The field GF(p)[g]/(modulus).

    ``modulus`` is a monic coefficient list [c_0, ..., c_k] and is required for
    k > 1.  With no modulus the context is the prime field GF(p).
    """

    def __init__(self, p: int, modulus: list[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if modulus is None:
            modulus = [0, 1]
        modulus = [int(c) % p for c in modulus]
        if len(modulus) < 2 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.modulus = tuple(modulus)
        self.k = len(modulus) - 1
        self.size = p ** self.k
        self._exp = self._log = None
        self._add_table = None
        if self.k > 1:
            self._build_tables()

    # -- identity ------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"FieldCtx(GF({self.p}))"
        return f"FieldCtx(GF({self.p}^{self.k}), modulus={list(self.modulus)})"

    # -- packing ---------------------------------------------------------------
    def to_vec(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_vec(self, vec) -> int:
        p = self.p
        return reduce(lambda acc, c: acc * p + (c % p), reversed(list(vec)), 0)

    def from_int(self, n: int) -> int:
        """Code of the image of the integer n in the prime field."""
        return n % self.p

    # -- slow polynomial multiplication (table construction / huge fields) ----
    def _mul_poly(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        prod = _pmul(self.to_vec(a), self.to_vec(b), p)
        if len(prod) > k:
            prod = _pdivmod(prod, list(self.modulus), p)[1]
        return self.from_vec(prod)

    def _build_tables(self):
        p, Q = self.p, self.size
        if Q <= _ADD_TABLE_LIMIT and p != 2:
            vecs = [self.to_vec(a) for a in range(Q)]
            self._add_table = [
                [self.from_vec([x + y for x, y in zip(va, vb)]) for vb in vecs] for va in vecs
            ]
        if Q > _LOG_TABLE_LIMIT:
            return
        order = Q - 1
        factors = _prime_factors(order)
        for g in range(2, Q):
            if all(self._pow_poly(g, order // r) != 1 for r in factors):
                break
        else:  # pragma: no cover - a primitive element always exists
            raise RuntimeError("no primitive element found")
        exp = [0] * (2 * order)
        log = [0] * Q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, g)
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self._exp, self._log = exp, log

    def _pow_poly(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return result

    # -- arithmetic on codes ---------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self.from_vec([x + y for x, y in zip(self.to_vec(a), self.to_vec(b))])

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.from_vec([-x for x in self.to_vec(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_poly(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero in finite field")
        if self.k == 1:
            return pow(a, -1, self.p)
        if self._exp is not None:
            return self._exp[(self.size - 1 - self._log[a]) % (self.size - 1)]
        return self._pow_poly(a, self.size - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.k == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 0 if e else 1
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.size - 1)]
        return self._pow_poly(a, e)

    def frob(self, a: int, e: int = 1) -> int:
        """a^(p^e); e may be negative (Frobenius has order k)."""
        if self.k == 1:
            return a
        e %= self.k
        return self.pow(a, self.p ** e) if e else a

    def trace(self, a: int) -> int:
        """Absolute trace to GF(p), returned as an integer in [0, p)."""
        acc, x = 0, a
        for _ in range(self.k):
            acc = self.add(acc, x)
            x = self.frob(x)
        return acc  # lies in the prime field, so its code is its value

    # -- element construction ----------------------------------------------------
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise FieldMismatch("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            if len(value) != self.k:
                raise ValueError(f"expected {self.k} coordinates")
            return FieldElement(self, self.from_vec(value))
        return FieldElement(self, self.from_int(int(value)))

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    def gen(self) -> "FieldElement":
        """The class of g in GF(p)[g]/(modulus)."""
        return FieldElement(self, self.from_vec([0, 1] + [0] * (self.k - 2)) if self.k > 1 else 0)

    def elements(self):
        for code in range(self.size):
            yield FieldElement(self, code)

    def code_of(self, value) -> int:
        """Code for a FieldElement or a prime-field integer."""
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise FieldMismatch("element belongs to a different field")
            return value.code
        return self.from_int(int(value))

    # -- text encoding -------------------------------------------------------------
    def format_code(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        return ";".join(str(c) for c in self.to_vec(a))

    def parse_code(self, text: str) -> int:
        text = text.strip()
        if self.k == 1:
            if ";" in text:
                raise ValueError(f"coordinate list {text!r} given for a prime field")
            v = int(text)
            if not 0 <= v < self.p:
                raise ValueError(f"coefficient {v} outside [0, {self.p})")
            return v
        parts = text.split(";")
        if len(parts) == 1:
            v = int(parts[0])
            if not 0 <= v < self.p:
                raise ValueError(f"coefficient {v} outside [0, {self.p})")
            return v
        if len(parts) != self.k:
            raise ValueError(f"expected {self.k} coordinates in {text!r}")
        vec = [int(c) for c in parts]
        if any(not 0 <= c < self.p for c in vec):
            raise ValueError(f"coordinate outside [0, {self.p}) in {text!r}")
        return self.from_vec(vec)


class FieldElement:
    __slots__ = ("ctx", "code")

    def __init__(self, ctx: FieldCtx, code: int):
        self.ctx = ctx
        self.code = code

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise FieldMismatch("operands belong to different fields")
            return other.code
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.sub(b, self.code))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.mul(self.code, self.ctx.inv(b)))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.ctx, self.ctx.mul(b, self.ctx.inv(self.code)))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.code == other.code
        if isinstance(other, int):
            return self.code == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.code))

    def __bool__(self):
        return self.code != 0

    def coords(self) -> list[int]:
        return self.ctx.to_vec(self.code)

    def frobenius(self, e: int = 1) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.frob(self.code, e))

    def trace(self) -> int:
        return self.ctx.trace(self.code)

    def __repr__(self):
        return f"FieldElement({self.ctx.format_code(self.code)})"

    def __str__(self):
        return self.ctx.format_code(self.code)


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.ctx != b.ctx:
        raise FieldMismatch("operands belong to different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def proot(a: FieldElement, e: int) -> FieldElement:
    """The unique b with b^(p^e) = a."""
    return a.frobenius(-e)


class NoSolution:
    """Returned by ``artin_schreier_solve`` when x^p - x = y has no root in the field."""

    __slots__ = ("y",)

    def __init__(self, y):
        self.y = y

    def __repr__(self):
        return f"NoSolution({self.y!r})"

    def __bool__(self):
        return False


def _solve_mod_p(rows: list[list[int]], rhs: list[int], p: int) -> list[int] | None:
    """One solution of rows . x = rhs over GF(p) with free variables set to 0."""
    m, k = len(rows), len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(k):
        piv = next((r for r in range(row, m) if aug[r][col] % p), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = pow(aug[row][col], -1, p)
        aug[row] = [(v * inv) % p for v in aug[row]]
        for r in range(m):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(v - f * w) % p for v, w in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    if any(all(v == 0 for v in aug[r][:k]) and aug[r][k] for r in range(m)):
        return None
    x = [0] * k
    for r, col in enumerate(pivots):
        x[col] = aug[r][k]
    return x


def artin_schreier_solve(y: FieldElement):
    """Canonical root of x^p - x = y, or ``NoSolution``.

    The roots form a coset of GF(p), which only moves the constant
    coordinate; the canonical root is the one with c_0 = 0, i.e. the
    lexicographically least coordinate vector.
    """
    ctx = y.ctx
    p, k = ctx.p, ctx.k
    if k == 1:
        return ctx.element(0) if y.code == 0 else NoSolution(y)
    # columns: image of each basis vector under x -> x^p - x
    cols = []
    for i in range(k):
        b = ctx.from_vec([1 if j == i else 0 for j in range(k)])
        cols.append(ctx.to_vec(ctx.sub(ctx.pow(b, p), b)))
    rows = [[cols[c][r] for c in range(k)] for r in range(k)]
    sol = _solve_mod_p(rows, ctx.to_vec(y.code), p)
    if sol is None:
        return NoSolution(y)
    sol[0] = 0
    return ctx.element(ctx.from_vec(sol))


# ---------------------------------------------------------------------------
# Polynomials over a FieldCtx (lists of codes), used to locate roots when
# embedding one field into a larger one.

def _ftrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fmul(ctx, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
    return _ftrim(out)


def _fdivmod(ctx, a, b):
    a = list(a)
    inv = ctx.inv(b[-1])
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = ctx.mul(a[-1], inv)
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = ctx.sub(a[shift + i], ctx.mul(c, y))
        _ftrim(a)
    return _ftrim(q), a


def _fgcd(ctx, a, b):
    a, b = _ftrim(list(a)), _ftrim(list(b))
    while b:
        a, b = b, _fdivmod(ctx, a, b)[1]
    if a:
        inv = ctx.inv(a[-1])
        a = [ctx.mul(c, inv) for c in a]
    return a


def _fpowmod(ctx, a, e, f):
    result, base = [1], _fdivmod(ctx, a, f)[1]
    while e:
        if e & 1:
            result = _fdivmod(ctx, _fmul(ctx, result, base), f)[1]
        base = _fdivmod(ctx, _fmul(ctx, base, base), f)[1]
        e >>= 1
    return result


def _roots_split(ctx: FieldCtx, f: list[int]) -> list[int]:
    """Roots of a monic f that splits into distinct linear factors over ctx."""
    if len(f) <= 1:
        return []
    if len(f) == 2:
        return [ctx.neg(ctx.mul(f[0], ctx.inv(f[1])))]
    for delta in range(1, ctx.size):
        if ctx.p == 2:
            x = [0, delta]
            h, cur = [], x
            for _ in range(ctx.k):
                h = _ftrim([ctx.add(u, v) for u, v in _zip_pad(h, cur)])
                cur = _fdivmod(ctx, _fmul(ctx, cur, cur), f)[1]
        else:
            h = _fpowmod(ctx, [delta, 1], (ctx.size - 1) // 2, f)
            h = _ftrim([ctx.sub(h[0] if h else 0, 1)] + h[1:])
        g = _fgcd(ctx, f, h)
        if 1 < len(g) < len(f):
            other = _fdivmod(ctx, f, g)[0]
            return _roots_split(ctx, g) + _roots_split(ctx, other)
    raise RuntimeError("root splitting failed")  # pragma: no cover


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)) for i in range(n)]


class FieldEmbedding:
    """Injective ring map src -> dst determined by the image of the generator."""

    def __init__(self, src: FieldCtx, dst: FieldCtx, gen_image: int):
        self.src, self.dst = src, dst
        self.gen_image = gen_image
        if src.size <= 4096:
            self._table = [self._compute(a) for a in range(src.size)]
        else:
            self._table = None

    def _compute(self, a: int) -> int:
        dst = self.dst
        acc = 0
        for c in reversed(self.src.to_vec(a)):
            acc = dst.add(dst.mul(acc, self.gen_image), dst.from_int(c))
        return acc

    def map_code(self, a: int) -> int:
        if self._table is not None:
            return self._table[a]
        return self._compute(a)

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.ctx != self.src:
            raise FieldMismatch("element is not in the source field")
        return FieldElement(self.dst, self.map_code(x.code))


def extend_by_p(ctx: FieldCtx, modulus: list[int] | None = None):
    """Degree-p extension of ctx together with an embedding ctx -> extension.

    Every Artin-Schreier equation over ctx becomes solvable in the result.
    The modulus of the extension is the least irreducible polynomial of
    degree k*p unless one is supplied.
    """
    p, k = ctx.p, ctx.k
    if modulus is None:
        modulus = find_irreducible(p, k * p)
    big = FieldCtx(p, modulus)
    if big.k != k * p:
        raise ValueError(f"modulus has degree {big.k}, expected {k * p}")
    if k == 1:
        return big, FieldEmbedding(ctx, big, 0)
    roots = _roots_split(big, [big.from_int(c) for c in ctx.modulus])
    return big, FieldEmbedding(ctx, big, min(roots))

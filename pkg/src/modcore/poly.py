"""Multivariate polynomials over a prime field GF(p), with a fixed monomial order.

Coefficients are plain ints normalized into [0, p); exponent vectors are
tuples of small ints.  Polynomial values are immutable: terms are stored as a
tuple of (monomial, coefficient) pairs sorted descending in the ring's order,
so the leading term is terms[0].
"""

from __future__ import annotations

import re

from .errors import ModcoreError, ParseError, RingMismatchError
from .orders import GrevLex, MonomialOrder

_EXP_LIMIT = 1 << 15  # overflow guard; corpus degrees stay far below this


def _is_prime(n: int) -> bool:
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


def mono_mul(a, b):
    m = tuple(x + y for x, y in zip(a, b))
    if m and max(m) >= _EXP_LIMIT:
        raise OverflowError("monomial exponent overflow")
    return m


def mono_div(a, b):
    """a / b as an exponent vector, or None if b does not divide a."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_deg(m):
    return sum(m)


class PolyRing:
    """GF(char)[vars] with a monomial order.  Immutable and hashable."""

    __slots__ = ("char", "vars", "order", "nvars", "_var_index", "_hash")

    def __init__(self, char: int = 32003, vars=("x", "y"), order: MonomialOrder | None = None):
        if not _is_prime(char):
            raise ModcoreError(f"characteristic {char} is not prime")
        vars = tuple(vars)
        if not vars or len(set(vars)) != len(vars):
            raise ModcoreError("variable names must be nonempty and distinct")
        object.__setattr__(self, "char", char)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "order", order if order is not None else GrevLex())
        object.__setattr__(self, "nvars", len(vars))
        object.__setattr__(self, "_var_index", {v: i for i, v in enumerate(vars)})
        object.__setattr__(self, "_hash", hash((char, vars, self.order)))

    def __setattr__(self, *a):
        raise AttributeError("PolyRing is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.char == other.char
            and self.vars == other.vars
            and self.order == other.order
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"GF({self.char})[{','.join(self.vars)}]"

    # -- element construction ------------------------------------------------

    def zero(self) -> Polynomial:
        return Polynomial(self, ())

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c: int) -> Polynomial:
        c %= self.char
        if c == 0:
            return Polynomial(self, ())
        return Polynomial(self, (((0,) * self.nvars, c),))

    def var(self, i) -> Polynomial:
        if isinstance(i, str):
            i = self.var_index(i)
        m = [0] * self.nvars
        m[i] = 1
        return Polynomial(self, ((tuple(m), 1),))

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, m, c: int = 1) -> Polynomial:
        return self.from_dict({tuple(m): c})

    def from_dict(self, d: dict) -> Polynomial:
        p = self.char
        items = []
        for m, c in d.items():
            c %= p
            if c:
                if len(m) != self.nvars:
                    raise ModcoreError("exponent vector length mismatch")
                items.append((tuple(m), c))
        keyf = self.order.key
        items.sort(key=lambda t: keyf(t[0]), reverse=True)
        return Polynomial(self, tuple(items))

    def parse(self, src: str) -> Polynomial:
        return parse_poly(src, self)

    def var_index(self, name: str) -> int:
        try:
            return self._var_index[name]
        except KeyError:
            raise ParseError(f"unknown variable {name!r} in {self!r}") from None

    def with_order(self, order: MonomialOrder) -> PolyRing:
        return PolyRing(self.char, self.vars, order)


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: tuple):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    # -- structure -----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def lm(self):
        """Leading monomial in the ring's order."""
        if not self.terms:
            raise ModcoreError("zero polynomial has no leading monomial")
        return self.terms[0][0]

    def lc(self) -> int:
        if not self.terms:
            raise ModcoreError("zero polynomial has no leading coefficient")
        return self.terms[0][1]

    def lt(self):
        return self.terms[0]

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(mono_deg(m) for m, _ in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {mono_deg(m) for m, _ in self.terms}
        return len(degs) <= 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and mono_deg(self.terms[0][0]) == 0)

    def constant_coeff(self) -> int:
        z = (0,) * self.ring.nvars
        for m, c in self.terms:
            if m == z:
                return c
        return 0

    def tdict(self) -> dict:
        return dict(self.terms)

    def support_vars(self) -> set:
        out = set()
        for m, _ in self.terms:
            for i, e in enumerate(m):
                if e:
                    out.add(i)
        return out

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")

    def __add__(self, other):
        self._check(other)
        d = dict(self.terms)
        p = self.ring.char
        for m, c in other.terms:
            v = (d.get(m, 0) + c) % p
            if v:
                d[m] = v
            elif m in d:
                del d[m]
        return self.ring.from_dict(d)

    def __sub__(self, other):
        self._check(other)
        d = dict(self.terms)
        p = self.ring.char
        for m, c in other.terms:
            v = (d.get(m, 0) - c) % p
            if v:
                d[m] = v
            elif m in d:
                del d[m]
        return self.ring.from_dict(d)

    def __neg__(self):
        p = self.ring.char
        return Polynomial(self.ring, tuple((m, p - c) for m, c in self.terms))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return self.ring.zero()
        p = self.ring.char
        d = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = mono_mul(m1, m2)
                v = (d.get(m, 0) + c1 * c2) % p
                if v:
                    d[m] = v
                elif m in d:
                    del d[m]
        return self.ring.from_dict(d)

    __rmul__ = __mul__

    def scale(self, c: int):
        c %= self.ring.char
        if c == 0:
            return self.ring.zero()
        p = self.ring.char
        return Polynomial(self.ring, tuple((m, (k * c) % p) for m, k in self.terms))

    def __pow__(self, n: int):
        if n < 0:
            raise ModcoreError("negative powers are not defined here")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n >>= 1
        return out

    def monic(self):
        if not self.terms:
            return self
        inv = pow(self.lc(), -1, self.ring.char)
        return self.scale(inv)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, self.terms))

    # -- rendering -----------------------------------------------------------

    def __repr__(self):
        return f"<{render_poly(self)}>"

    def __str__(self):
        return render_poly(self)


def render_poly(f: Polynomial) -> str:
    """Canonical text form: terms descending, balanced coefficients, '*' products."""
    if not f.terms:
        return "0"
    p = f.ring.char
    half = p // 2
    parts = []
    for i, (m, c) in enumerate(f.terms):
        cc = c - p if c > half else c
        neg = cc < 0
        cc = abs(cc)
        factors = []
        for v, e in zip(f.ring.vars, m):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        if not factors:
            body = str(cc)
        elif cc == 1:
            body = "*".join(factors)
        else:
            body = str(cc) + "*" + "*".join(factors)
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


# -- parser -------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<INT>\d+)|(?P<NAME>[A-Za-z_][A-Za-z0-9_]*)|(?P<OP>[-+*^()]))"
)


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(src: str):
    pos = 0
    out = []
    n = len(src)
    while pos < n:
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            if src[pos:].strip() == "":
                break
            bad = src[pos:].lstrip()
            raise ParseError(f"unexpected character {bad[0]!r}", col=pos + 1)
        kind = m.lastgroup
        out.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(_Tok("END", "", n))
    return out


class _PolyParser:
    """Recursive descent for:  expr := ['-'] term (('+'|'-') term)*
    term := factor ('*' factor)* ;  factor := INT | VAR | VAR '^' INT | '(' expr ')'.
    """

    def __init__(self, src: str, ring: PolyRing):
        self.toks = _tokenize(src)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        t = self.take()
        if t.kind != "OP" or t.text != op:
            raise ParseError(f"expected {op!r}, found {t.text or 'end of input'!r}", col=t.pos + 1)

    def parse(self) -> Polynomial:
        f = self.expr()
        t = self.peek()
        if t.kind != "END":
            raise ParseError(f"trailing input starting with {t.text!r}", col=t.pos + 1)
        return f

    def expr(self) -> Polynomial:
        t = self.peek()
        negate = False
        if t.kind == "OP" and t.text == "-":
            self.take()
            negate = True
        f = self.term()
        if negate:
            f = -f
        while True:
            t = self.peek()
            if t.kind == "OP" and t.text in "+-":
                self.take()
                g = self.term()
                f = f + g if t.text == "+" else f - g
            else:
                return f

    def term(self) -> Polynomial:
        f = self.factor()
        while True:
            t = self.peek()
            if t.kind == "OP" and t.text == "*":
                self.take()
                f = f * self.factor()
            else:
                return f

    def factor(self) -> Polynomial:
        t = self.take()
        if t.kind == "INT":
            return self.ring.const(int(t.text))
        if t.kind == "NAME":
            try:
                idx = self.ring.var_index(t.text)
            except ParseError:
                raise ParseError(f"unknown variable {t.text!r}", col=t.pos + 1) from None
            v = self.ring.var(idx)
            nxt = self.peek()
            if nxt.kind == "OP" and nxt.text == "^":
                self.take()
                e = self.take()
                if e.kind != "INT":
                    raise ParseError("exponent must be an integer", col=e.pos + 1)
                return v ** int(e.text)
            return v
        if t.kind == "OP" and t.text == "(":
            f = self.expr()
            self.expect_op(")")
            return f
        raise ParseError(f"expected a factor, found {t.text or 'end of input'!r}", col=t.pos + 1)


def parse_poly(src: str, ring: PolyRing) -> Polynomial:
    """Parse `src` into a normal-form polynomial of `ring`."""
    return _PolyParser(src, ring).parse()


# -- ring maps ----------------------------------------------------------------

def map_poly(f: Polynomial, target: PolyRing, images: list) -> Polynomial:
    """Ring map determined by variable images (a list of target polynomials)."""
    if len(images) != f.ring.nvars:
        raise ModcoreError("need one image per source variable")
    out = target.zero()
    for m, c in f.terms:
        t = target.const(c)
        for i, e in enumerate(m):
            if e:
                t = t * images[i] ** e
        out = out + t
    return out


def embed_poly(f: Polynomial, target: PolyRing) -> Polynomial:
    """Inclusion into a ring whose variable set contains f's (matched by name)."""
    idx = [target.var_index(v) for v in f.ring.vars]
    n = target.nvars
    d = {}
    for m, c in f.terms:
        mm = [0] * n
        for i, e in enumerate(m):
            mm[idx[i]] = e
        d[tuple(mm)] = c
    return target.from_dict(d)


def restrict_poly(f: Polynomial, target: PolyRing) -> Polynomial:
    """Inverse of embed_poly for polynomials supported on target's variables."""
    idx = []
    for v in f.ring.vars:
        idx.append(target._var_index.get(v, -1))
    d = {}
    for m, c in f.terms:
        mm = [0] * target.nvars
        for i, e in enumerate(m):
            if e:
                if idx[i] < 0:
                    raise ModcoreError(f"polynomial involves {f.ring.vars[i]}, not a target variable")
                mm[idx[i]] = e
        d[tuple(mm)] = c
    return target.from_dict(d)

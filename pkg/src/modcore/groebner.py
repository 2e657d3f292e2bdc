"""Buchberger engine and ideal-level operations.

The engine works on plain dicts {monomial: coeff} with an explicit sort-key
function, so Groebner bases under temporary orders (elimination blocks,
variable-last saturations) never touch the ring's default order.  Ideal
values are immutable apart from their per-order basis cache.
"""

from __future__ import annotations

import warnings
from heapq import heappop, heappush
from itertools import combinations

from .errors import ModcoreError, RingMismatchError
from .orders import GrevLexVarLast, MonomialOrder, elimination_order
from .poly import (
    Polynomial,
    PolyRing,
    embed_poly,
    mono_deg,
    mono_div,
    mono_lcm,
    mono_mul,
    restrict_poly,
)

# -- dict-level engine ----------------------------------------------------------


def _negkey(k):
    return tuple(-v for v in k)


def _memo_key(keyf):
    cache = {}

    def key(m):
        k = cache.get(m)
        if k is None:
            k = keyf(m)
            cache[m] = k
        return k

    return key


def _prep(basis, keyf, p):
    """Precompute (lm, lc^-1, tail) triples for the divisors."""
    out = []
    for g in basis:
        lm = max(g, key=keyf)
        lcinv = pow(g[lm], -1, p)
        tail = tuple((m, c) for m, c in g.items() if m != lm)
        out.append((lm, lcinv, tail))
    return out


def nf_dict(f, prepped, keyf, p):
    """Full normal form of the term dict `f` against prepared divisors."""
    if not f:
        return {}
    if not prepped:
        return dict(f)
    work = dict(f)
    out = {}
    heap = [(_negkey(keyf(m)), m) for m in work]
    heap.sort()
    while heap:
        _, m = heappop(heap)
        c = work.get(m)
        if c is None:
            continue
        for lm, lcinv, tail in prepped:
            q = mono_div(m, lm)
            if q is not None:
                break
        else:
            out[m] = c
            del work[m]
            continue
        del work[m]
        factor = (c * lcinv) % p
        for tm, tc in tail:
            mm = mono_mul(tm, q)
            prev = work.get(mm)
            if prev is None:
                v = (-factor * tc) % p
                if v:
                    work[mm] = v
                    heappush(heap, (_negkey(keyf(mm)), mm))
            else:
                v = (prev - factor * tc) % p
                if v:
                    work[mm] = v
                else:
                    del work[mm]
    return out


def _monic(d, keyf, p):
    lm = max(d, key=keyf)
    inv = pow(d[lm], -1, p)
    if inv == 1:
        return d
    return {m: (c * inv) % p for m, c in d.items()}


def _spoly(gi, gj, lmi, lmj, keyf, p):
    """S-polynomial of two monic dicts."""
    lcm = mono_lcm(lmi, lmj)
    qi = mono_div(lcm, lmi)
    qj = mono_div(lcm, lmj)
    d = {}
    for m, c in gi.items():
        d[mono_mul(m, qi)] = c
    for m, c in gj.items():
        mm = mono_mul(m, qj)
        v = (d.get(mm, 0) - c) % p
        if v:
            d[mm] = v
        elif mm in d:
            del d[mm]
    return d


def buchberger(gens, keyf, p):
    """Reduced Groebner basis (list of monic dicts, ascending leading monomials).

    Normal selection strategy with the product and chain criteria; S-pairs are
    processed by (lcm degree, pair index) for reproducibility.
    """
    keyf = _memo_key(keyf)
    G = []
    prepped = []
    pairs = []
    done = set()

    def add(d):
        idx = len(G)
        lm = max(d, key=keyf)
        G.append(d)
        prepped.append((lm, 1, tuple((m, c) for m, c in d.items() if m != lm)))
        for j in range(idx):
            lcm = mono_lcm(prepped[j][0], lm)
            heappush(pairs, (mono_deg(lcm), j, idx))

    for g in gens:
        if g:
            r = nf_dict(g, prepped, keyf, p)
            if r:
                add(_monic(r, keyf, p))

    while pairs:
        _, i, j = heappop(pairs)
        done.add((i, j))
        lmi, lmj = prepped[i][0], prepped[j][0]
        lcm = mono_lcm(lmi, lmj)
        if lcm == mono_mul(lmi, lmj):
            continue
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            if mono_div(lcm, prepped[k][0]) is not None:
                a = (k, i) if k < i else (i, k)
                b = (k, j) if k < j else (j, k)
                if a in done and b in done:
                    skip = True
                    break
        if skip:
            continue
        s = _spoly(G[i], G[j], lmi, lmj, keyf, p)
        r = nf_dict(s, prepped, keyf, p)
        if r:
            add(_monic(r, keyf, p))

    return _reduce_basis(G, keyf, p)


def _reduce_basis(G, keyf, p):
    """Unique reduced basis: minimal leading monomials, fully tail-reduced, monic."""
    items = []
    for g in G:
        if g:
            lm = max(g, key=keyf)
            items.append((keyf(lm), lm, g))
    items.sort(key=lambda t: t[0])
    kept = []
    kept_lms = []
    for _, lm, g in items:
        if any(mono_div(lm, h) is not None for h in kept_lms):
            continue
        kept.append(dict(g))
        kept_lms.append(lm)
    # leading terms are fixed from here on; rebuild divisor data once per
    # pass (a stale tail is still a valid reducer, and the no-change pass
    # certifies the basis is fully reduced)
    changed = True
    while changed:
        changed = False
        prepped = [
            (lm, pow(g[lm], -1, p), tuple((m, c) for m, c in g.items() if m != lm))
            for lm, g in zip(kept_lms, kept)
        ]
        for i in range(len(kept)):
            others = prepped[:i] + prepped[i + 1 :]
            r = nf_dict(kept[i], others, keyf, p)
            if r != kept[i]:
                kept[i] = r
                changed = True
    return [_monic(g, keyf, p) for g in kept]


# -- Ideal -----------------------------------------------------------------------


class Ideal:
    """Finitely generated ideal with lazily cached reduced Groebner bases."""

    __slots__ = ("ring", "gens", "_gb")

    def __init__(self, ring: PolyRing, gens):
        gens = tuple(g for g in gens if g)
        for g in gens:
            if g.ring != ring:
                raise RingMismatchError("generator from a different ring")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "_gb", {})

    def __setattr__(self, *a):
        raise AttributeError("Ideal is immutable")

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens) or '0'})"

    def groebner_basis(self, order: MonomialOrder | None = None):
        """Reduced Groebner basis as a tuple of monic polynomials, ascending."""
        if order is None:
            order = self.ring.order
        cached = self._gb.get(order)
        if cached is None:
            keyf = order.key
            basis = buchberger([g.tdict() for g in self.gens], keyf, self.ring.char)
            cached = tuple(self.ring.from_dict(d) for d in basis)
            self._gb[order] = cached
        return cached

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        gb = self.groebner_basis()
        return len(gb) == 1 and gb[0].is_constant()

    def contains(self, f: Polynomial) -> bool:
        return ideal_membership(f, self)

    __contains__ = contains

    def __le__(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other):
        if not isinstance(other, Ideal) or self.ring != other.ring:
            return NotImplemented
        return self.groebner_basis() == other.groebner_basis()

    def __hash__(self):
        return hash((self.ring, self.groebner_basis()))

    def __add__(self, other: "Ideal") -> "Ideal":
        if self.ring != other.ring:
            raise RingMismatchError("ideal sum across rings")
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Ideal(self.ring, tuple(g * other for g in self.gens))
        if self.ring != other.ring:
            raise RingMismatchError("ideal product across rings")
        return Ideal(self.ring, tuple(f * g for f in self.gens for g in other.gens))

    def minimal_leading_monomials(self, order=None):
        keyf = (order or self.ring.order).key
        return tuple(max((m for m, _ in g.terms), key=keyf) for g in self.groebner_basis(order))


def groebner_basis(I: Ideal, order: MonomialOrder | None = None):
    return I.groebner_basis(order)


def normal_form(f: Polynomial, G) -> Polynomial:
    """Remainder of f on division by the Groebner basis G (ring's order)."""
    G = [g for g in G if g]
    if not G:
        return f
    ring = f.ring
    keyf = ring.order.key
    prepped = _prep([g.tdict() for g in G], keyf, ring.char)
    return ring.from_dict(nf_dict(f.tdict(), prepped, keyf, ring.char))


def ideal_membership(f: Polynomial, I: Ideal) -> bool:
    if f.ring != I.ring:
        raise RingMismatchError("membership across rings")
    if not f:
        return True
    return not normal_form(f, I.groebner_basis())


def exact_div(f: Polynomial, g: Polynomial) -> Polynomial:
    """f / g when g divides f exactly; raises otherwise."""
    if not g:
        raise ModcoreError("division by zero polynomial")
    ring = f.ring
    p = ring.char
    ginv = pow(g.lc(), -1, p)
    out = {}
    num = f
    while num:
        q = mono_div(num.lm(), g.lm())
        if q is None:
            raise ModcoreError("exact_div: division is not exact")
        c = (num.lc() * ginv) % p
        out[q] = c
        num = num - ring.monomial(q, c) * g
    return ring.from_dict(out)


# -- elimination-based operations -----------------------------------------------

_AUX = "#t"  # internal variable name; unreachable from the polynomial grammar


def _aux_ring(ring: PolyRing) -> PolyRing:
    return PolyRing(ring.char, (_AUX,) + ring.vars, elimination_order(ring.nvars + 1, (0,)))


def _project_from_aux(ring, big, basis_dicts):
    """Keep elements free of the auxiliary variable(s); map back to `ring`."""
    out = []
    for d in basis_dicts:
        if all(m[0] == 0 for m in d):
            out.append(restrict_poly(big.from_dict(d), ring))
    return out


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I cap J via elimination of t from t*I + (1-t)*J."""
    if I.ring != J.ring:
        raise RingMismatchError("intersection across rings")
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring, ())
    big = _aux_ring(ring)
    t = big.var(0)
    one = big.one()
    gens = [t * embed_poly(f, big) for f in I.gens]
    gens += [(one - t) * embed_poly(g, big) for g in J.gens]
    basis = buchberger([g.tdict() for g in gens], big.order.key, big.char)
    return Ideal(ring, _project_from_aux(ring, big, basis))


def quotient_ideal(J: Ideal, I: Ideal) -> Ideal:
    """(J :_R I), computed generator-wise via (J : g) = (J cap (g))/g."""
    if J.ring != I.ring:
        raise RingMismatchError("quotient across rings")
    ring = J.ring
    if I.is_zero():
        warnings.warn("colon by the zero ideal; returning the unit ideal", stacklevel=2)
        return Ideal(ring, (ring.one(),))
    result = None
    for g in I.gens:
        cap = intersect(J, Ideal(ring, (g,)))
        Qg = Ideal(ring, tuple(exact_div(h, g) for h in cap.gens))
        result = Qg if result is None else intersect(result, Qg)
        if result.is_zero():
            return result
    return result


def _is_std_homogeneous(I: Ideal) -> bool:
    return all(g.is_homogeneous() for g in I.gens)


def _divide_out_variable(f: Polynomial, i: int) -> Polynomial:
    e = min(m[i] for m, _ in f.terms)
    if e == 0:
        return f
    d = {}
    for m, c in f.terms:
        mm = list(m)
        mm[i] -= e
        d[tuple(mm)] = c
    return f.ring.from_dict(d)


def _saturate_variable_graded(I: Ideal, i: int) -> Ideal:
    # grevlex with x_i revlex-last: dividing the basis by x_i-content saturates
    ring = I.ring
    keyf = GrevLexVarLast(i).key
    basis = buchberger([g.tdict() for g in I.gens], keyf, ring.char)
    return Ideal(ring, tuple(_divide_out_variable(ring.from_dict(d), i) for d in basis))


def _saturate_rabinowitsch(I: Ideal, f: Polynomial) -> Ideal:
    ring = I.ring
    big = _aux_ring(ring)
    t = big.var(0)
    gens = [embed_poly(g, big) for g in I.gens]
    gens.append(t * embed_poly(f, big) - big.one())
    basis = buchberger([g.tdict() for g in gens], big.order.key, big.char)
    return Ideal(ring, _project_from_aux(ring, big, basis))


def saturate(J: Ideal, f: Polynomial, want_exponent: bool = True):
    """(J : f^infinity); returns (ideal, k) with k the stabilization exponent.

    The ideal comes from the extra-variable elimination (or, for a single
    variable of a homogeneous ideal, from the grevlex-variable-last divide
    out); the exponent is the least k with f^k * result <= J.
    """
    if not f:
        raise ModcoreError("saturation by zero")
    ring = J.ring
    if f.is_constant() or J.is_zero():
        return (J, 0) if want_exponent else (J, None)
    if len(f.terms) == 1 and _is_std_homogeneous(J):
        S = J
        for i, e in enumerate(f.lm()):
            if e:
                S = _saturate_variable_graded(S, i)
    else:
        S = _saturate_rabinowitsch(J, f)
    if not want_exponent:
        return S, None
    gb = J.groebner_basis()
    power = ring.one()
    k = 0
    while True:
        if all(not normal_form(power * g, gb) for g in S.gens):
            return S, k
        power = power * f
        k += 1
        if k > 512:
            raise ModcoreError("saturation exponent failed to stabilize")


def eliminate(I: Ideal, keep) -> Ideal:
    """I cap GF(p)[kept variables], returned as an ideal of the same ring."""
    ring = I.ring
    keep_idx = set()
    for v in keep:
        keep_idx.add(ring.var_index(v) if isinstance(v, str) else int(v))
    drop = tuple(i for i in range(ring.nvars) if i not in keep_idx)
    if not drop:
        return Ideal(ring, I.gens)
    order = elimination_order(ring.nvars, drop)
    basis = buchberger([g.tdict() for g in I.gens], order.key, ring.char)
    dropset = set(drop)
    out = []
    for d in basis:
        if all(all(m[i] == 0 for i in dropset) for m in d):
            out.append(ring.from_dict(d))
    return Ideal(ring, out)


# -- dimension, height, Hilbert function ------------------------------------------


def _leading_supports(I: Ideal):
    gb = I.groebner_basis()
    return [frozenset(i for i, e in enumerate(g.lm()) if e) for g in gb]


def krull_dimension(I: Ideal) -> int:
    """dim(R/I) via the largest variable set independent modulo the leading terms."""
    if I.is_zero():
        return I.ring.nvars
    if I.is_unit():
        return -1
    supports = _leading_supports(I)
    n = I.ring.nvars
    for size in range(n, 0, -1):
        for S in combinations(range(n), size):
            Sset = set(S)
            if all(not sup <= Sset for sup in supports):
                return size
    return 0


def height(I: Ideal) -> int:
    """d - dim(R/I); the unit ideal gets the sentinel d + 1."""
    return I.ring.nvars - krull_dimension(I)


def _monomials_of_degree(nvars: int, deg: int):
    if nvars == 1:
        yield (deg,)
        return
    for e in range(deg + 1):
        for rest in _monomials_of_degree(nvars - 1, deg - e):
            yield (e,) + rest


def hilbert_function(I: Ideal, deg: int) -> int:
    """dim_k (R/I)_deg, counted on standard monomials of the leading-term ideal."""
    if deg < 0:
        return 0
    if I.is_unit():
        return 0
    lms = [g.lm() for g in I.groebner_basis()]
    count = 0
    for m in _monomials_of_degree(I.ring.nvars, deg):
        if all(mono_div(m, lm) is None for lm in lms):
            count += 1
    return count

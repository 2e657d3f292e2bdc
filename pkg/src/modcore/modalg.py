"""Finitely presented graded modules: syzygies, resolutions, Ext, Fitting ideals.

A module monomial is a pair (position, exponent vector); submodules of free
modules get Groebner bases under a position-over-term order whose leading
block is the target module, so elimination yields syzygies.  Presentations
are stored column-wise (each column is one relation among the generators).
"""

from __future__ import annotations

import math
from heapq import heappop, heappush

from .errors import ModcoreError, NotHomogeneousError, RingMismatchError
from .groebner import Ideal, exact_div, intersect, quotient_ideal
from .poly import Polynomial, PolyRing, mono_deg, mono_div, mono_lcm, mono_mul

Vector = tuple  # tuple of Polynomial, one per free-module position


# -- module Groebner engine -------------------------------------------------------


def _mkeyf(keyf):
    # position-over-term, memoized: the same module monomials recur constantly
    cache = {}

    def key(pm):
        k = cache.get(pm)
        if k is None:
            k = (-pm[0],) + keyf(pm[1])
            cache[pm] = k
        return k

    return key


def _vec_to_dict(vec):
    d = {}
    for pos, f in enumerate(vec):
        for m, c in f.terms:
            d[(pos, m)] = c
    return d


def _dict_to_vec(d, ring, npos):
    coords = [{} for _ in range(npos)]
    for (pos, m), c in d.items():
        coords[pos][m] = c
    return tuple(ring.from_dict(cd) for cd in coords)


def _mod_prep(basis, mkey, p):
    out = []
    for g in basis:
        lm = max(g, key=mkey)
        lcinv = pow(g[lm], -1, p)
        tail = tuple((pm, c) for pm, c in g.items() if pm != lm)
        out.append((lm, lcinv, tail))
    return out


def _mneg(k):
    return tuple(-v for v in k)


def mod_nf_dict(f, prepped, mkey, p):
    if not f:
        return {}
    if not prepped:
        return dict(f)
    work = dict(f)
    out = {}
    heap = [(_mneg(mkey(pm)), pm) for pm in work]
    heap.sort()
    while heap:
        _, pm = heappop(heap)
        c = work.get(pm)
        if c is None:
            continue
        pos, m = pm
        for (lpos, lmm), lcinv, tail in prepped:
            if lpos != pos:
                continue
            q = mono_div(m, lmm)
            if q is not None:
                break
        else:
            out[pm] = c
            del work[pm]
            continue
        del work[pm]
        factor = (c * lcinv) % p
        for (tp, tm), tc in tail:
            mm = (tp, mono_mul(tm, q))
            prev = work.get(mm)
            if prev is None:
                v = (-factor * tc) % p
                if v:
                    work[mm] = v
                    heappush(heap, (_mneg(mkey(mm)), mm))
            else:
                v = (prev - factor * tc) % p
                if v:
                    work[mm] = v
                else:
                    del work[mm]
    return out


def _mod_monic(d, mkey, p):
    lm = max(d, key=mkey)
    inv = pow(d[lm], -1, p)
    if inv == 1:
        return d
    return {pm: (c * inv) % p for pm, c in d.items()}


def mod_buchberger(gens, mkey, p):
    """Reduced module Groebner basis.  S-pairs need equal leading positions;
    the coprimality shortcut is not sound for modules, so only the chain
    criterion prunes pairs."""
    G = []
    prepped = []
    pairs = []
    done = set()

    def add(d):
        idx = len(G)
        lm = max(d, key=mkey)
        G.append(d)
        prepped.append((lm, 1, tuple((pm, c) for pm, c in d.items() if pm != lm)))
        for j in range(idx):
            lj = prepped[j][0]
            if lj[0] == lm[0]:
                lcm = mono_lcm(lj[1], lm[1])
                heappush(pairs, (mono_deg(lcm), j, idx))

    for g in gens:
        if g:
            r = mod_nf_dict(g, prepped, mkey, p)
            if r:
                add(_mod_monic(r, mkey, p))

    while pairs:
        _, i, j = heappop(pairs)
        done.add((i, j))
        (pi, mi) = prepped[i][0]
        (pj, mj) = prepped[j][0]
        lcm = mono_lcm(mi, mj)
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            (pk, mk) = prepped[k][0]
            if pk == pi and mono_div(lcm, mk) is not None:
                a = (k, i) if k < i else (i, k)
                b = (k, j) if k < j else (j, k)
                if a in done and b in done:
                    skip = True
                    break
        if skip:
            continue
        qi = mono_div(lcm, mi)
        qj = mono_div(lcm, mj)
        s = {}
        for (tp, tm), c in G[i].items():
            s[(tp, mono_mul(tm, qi))] = c
        for (tp, tm), c in G[j].items():
            pm = (tp, mono_mul(tm, qj))
            v = (s.get(pm, 0) - c) % p
            if v:
                s[pm] = v
            elif pm in s:
                del s[pm]
        r = mod_nf_dict(s, prepped, mkey, p)
        if r:
            add(_mod_monic(r, mkey, p))

    return _mod_reduce_basis(G, mkey, p)


def _mod_reduce_basis(G, mkey, p):
    items = []
    for g in G:
        if g:
            lm = max(g, key=mkey)
            items.append((mkey(lm), lm, g))
    items.sort(key=lambda t: t[0])
    kept = []
    kept_lms = []
    for _, lm, g in items:
        if any(h[0] == lm[0] and mono_div(lm[1], h[1]) is not None for h in kept_lms):
            continue
        kept.append(dict(g))
        kept_lms.append(lm)
    # tail-reduce to the unique reduced basis; leading terms never move, so
    # the divisor data is rebuilt once per pass (stale tails are still valid
    # reducers, and the fixpoint pass certifies full reduction)
    changed = True
    while changed:
        changed = False
        prepped = [
            (lm, pow(g[lm], -1, p), tuple((pm, c) for pm, c in g.items() if pm != lm))
            for lm, g in zip(kept_lms, kept)
        ]
        for i in range(len(kept)):
            others = prepped[:i] + prepped[i + 1 :]
            r = mod_nf_dict(kept[i], others, mkey, p)
            if r != kept[i]:
                kept[i] = r
                changed = True
    return [_mod_monic(g, mkey, p) for g in kept]


def module_gb(vectors, ring: PolyRing):
    """Reduced Groebner basis of the span of `vectors` inside a free module."""
    mkey = _mkeyf(ring.order.key)
    return mod_buchberger([_vec_to_dict(v) for v in vectors], mkey, ring.char)


def module_member(vec, gb_dicts, ring: PolyRing) -> bool:
    mkey = _mkeyf(ring.order.key)
    prepped = _mod_prep(gb_dicts, mkey, ring.char)
    return not mod_nf_dict(_vec_to_dict(vec), prepped, mkey, ring.char)


def syzygies(vectors, ring: PolyRing, npos: int):
    """Generators of the relations among `vectors` (elements of R^npos).

    Returns vectors in R^k, k = len(vectors).  Position-over-term order with
    the target block leading, so basis elements with zero target component
    are exactly the syzygies.
    """
    k = len(vectors)
    if k == 0:
        return []
    p = ring.char
    mkey = _mkeyf(ring.order.key)
    unit = (0,) * ring.nvars
    gens = []
    for i, v in enumerate(vectors):
        if len(v) != npos:
            raise ModcoreError("vector length does not match the free module")
        d = _vec_to_dict(v)
        d[(npos + i, unit)] = 1
        gens.append(d)
    basis = mod_buchberger(gens, mkey, p)
    out = []
    for g in basis:
        if all(pm[0] >= npos for pm in g):
            shifted = {(pm[0] - npos, pm[1]): c for pm, c in g.items()}
            out.append(_dict_to_vec(shifted, ring, k))
    return out


# -- vectors and matrices ----------------------------------------------------------


def vector_degree(vec, degrees):
    """Degree of a homogeneous vector (None for zero); raises if inhomogeneous."""
    deg = None
    for pos, f in enumerate(vec):
        if not f:
            continue
        if not f.is_homogeneous():
            raise NotHomogeneousError(f"coordinate {pos} is not homogeneous")
        d = f.degree() + degrees[pos]
        if deg is None:
            deg = d
        elif deg != d:
            raise NotHomogeneousError("vector coordinates disagree in degree")
    return deg


def _zero_vec(ring, n):
    z = ring.zero()
    return (z,) * n


def _vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vec_scale(u, f):
    return tuple(f * a for a in u)


def _vec_is_zero(u):
    return all(not a for a in u)


def _columns_degrees(cols, degrees):
    return tuple(vector_degree(c, degrees) for c in cols)


def poly_matrix_rank(cols, ring: PolyRing) -> int:
    """Rank over Quot(R) by Bareiss fraction-free elimination.

    Intermediate entries are minors of the input, so divisions are exact and
    degree growth stays linear.
    """
    if not cols:
        return 0
    nrows = len(cols[0])
    B = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
    ncols = len(cols)
    prev = ring.one()
    r = 0
    for _ in range(min(nrows, ncols)):
        piv = None
        for i in range(r, nrows):
            for j in range(r, ncols):
                if B[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        pi, pj = piv
        if pi != r:
            B[r], B[pi] = B[pi], B[r]
        if pj != r:
            for row in B:
                row[r], row[pj] = row[pj], row[r]
        pivot = B[r][r]
        for i in range(r + 1, nrows):
            for j in range(r + 1, ncols):
                B[i][j] = exact_div(B[i][j] * pivot - B[i][r] * B[r][j], prev)
            B[i][r] = ring.zero()
        prev = pivot
        r += 1
    return r


# -- presented modules ---------------------------------------------------------------


class PresentedModule:
    """E = coker of a homogeneous matrix of relations among graded generators."""

    __slots__ = (
        "ring",
        "gen_degrees",
        "relations",
        "_cache",
    )

    def __init__(self, ring: PolyRing, gen_degrees, relations, _validate=True):
        gen_degrees = tuple(int(d) for d in gen_degrees)
        cols = []
        for col in relations:
            col = tuple(col)
            if len(col) != len(gen_degrees):
                raise ModcoreError("relation column length does not match generators")
            if _vec_is_zero(col):
                continue
            if _validate:
                vector_degree(col, gen_degrees)
            cols.append(col)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "gen_degrees", gen_degrees)
        object.__setattr__(self, "relations", tuple(cols))
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, *a):
        raise AttributeError("PresentedModule is immutable")

    @property
    def n(self) -> int:
        return len(self.gen_degrees)

    def __repr__(self):
        return f"PresentedModule({self.n} gens, {len(self.relations)} relations, degrees {list(self.gen_degrees)})"

    def relation_gb(self):
        gb = self._cache.get("relgb")
        if gb is None:
            gb = module_gb(self.relations, self.ring)
            self._cache["relgb"] = gb
        return gb

    def element_is_zero(self, vec) -> bool:
        return module_member(vec, self.relation_gb(), self.ring)

    def is_zero_module(self) -> bool:
        return mu(self) == 0

    def common_degree(self):
        """The single generator degree, or None if generators mix degrees."""
        degs = set(self.gen_degrees)
        return degs.pop() if len(degs) == 1 else None

    def zero_vector(self):
        return _zero_vec(self.ring, self.n)

    def basis_vector(self, i):
        v = [self.ring.zero()] * self.n
        v[i] = self.ring.one()
        return tuple(v)

    def hilbert_function(self, deg: int) -> int:
        """dim_k E_deg via standard module monomials of the relation basis."""
        from .groebner import _monomials_of_degree

        lms = []
        keyf = _mkeyf(self.ring.order.key)
        for g in self.relation_gb():
            lms.append(max(g, key=keyf))
        count = 0
        for pos in range(self.n):
            want = deg - self.gen_degrees[pos]
            if want < 0:
                continue
            for m in _monomials_of_degree(self.ring.nvars, want):
                ok = True
                for lpos, lmm in lms:
                    if lpos == pos and mono_div(m, lmm) is not None:
                        ok = False
                        break
                if ok:
                    count += 1
        return count


def module_from_ideal(I: Ideal) -> PresentedModule:
    """An ideal of positive grade, viewed as a torsionfree rank-one module."""
    if I.is_zero():
        raise ModcoreError("the zero ideal is not a module of positive rank")
    degrees = []
    for g in I.gens:
        if not g.is_homogeneous():
            raise NotHomogeneousError("ideal generators must be homogeneous")
        degrees.append(g.degree())
    cols = syzygies([(g,) for g in I.gens], I.ring, 1)
    E = PresentedModule(I.ring, degrees, cols)
    E._cache["from_ideal"] = I
    return E


def cyclic_module(ring: PolyRing, K: Ideal) -> PresentedModule:
    """R/K as a presented module on one degree-zero generator."""
    return PresentedModule(ring, (0,), tuple((g,) for g in K.gens))


def free_module(ring: PolyRing, rank: int, twist: int = 0) -> PresentedModule:
    """R(-twist)^rank: free with all generators in degree `twist`."""
    return PresentedModule(ring, (twist,) * rank, ())


def direct_sum(E1: PresentedModule, E2: PresentedModule, twist: int = 0) -> PresentedModule:
    """Block direct sum; the second summand's generators are shifted by `twist`."""
    if E1.ring != E2.ring:
        raise RingMismatchError("direct sum across rings")
    ring = E1.ring
    n1, n2 = E1.n, E2.n
    degrees = E1.gen_degrees + tuple(d + twist for d in E2.gen_degrees)
    z1 = (ring.zero(),) * n1
    z2 = (ring.zero(),) * n2
    cols = [tuple(c) + z2 for c in E1.relations]
    cols += [z1 + tuple(c) for c in E2.relations]
    return PresentedModule(ring, degrees, cols)


def rank(E: PresentedModule) -> int:
    """n minus the presentation's rank over the fraction field."""
    r = E._cache.get("rank")
    if r is None:
        r = E.n - poly_matrix_rank(E.relations, E.ring)
        E._cache["rank"] = r
    return r


# -- minimal presentations and resolutions ---------------------------------------


def _unit_entry(cols, startc=0):
    for j in range(startc, len(cols)):
        col = cols[j]
        for i, f in enumerate(col):
            if f and f.is_constant():
                return i, j
    return None


def _cancel_unit(cols, i, j, ring):
    """Gaussian cancellation of a scalar entry: returns columns without row i, col j."""
    p = ring.char
    uinv = pow(cols[j][i].constant_coeff(), -1, p)
    pivot_col = cols[j]
    out = []
    for c in range(len(cols)):
        if c == j:
            continue
        col = cols[c]
        f = col[i]
        if f:
            factor = f.scale(uinv)
            newcol = tuple(
                col[r] - factor * pivot_col[r] for r in range(len(col)) if r != i
            )
        else:
            newcol = tuple(col[r] for r in range(len(col)) if r != i)
        out.append(newcol)
    return out


def minimal_presentation(E: PresentedModule) -> PresentedModule:
    """Prune scalar entries until the presentation is minimal."""
    cached = E._cache.get("minimal")
    if cached is not None:
        return cached
    ring = E.ring
    degrees = list(E.gen_degrees)
    cols = [tuple(c) for c in E.relations]
    while True:
        hit = _unit_entry(cols)
        if hit is None:
            break
        i, j = hit
        cols = _cancel_unit(cols, i, j, ring)
        del degrees[i]
        cols = [c for c in cols if not _vec_is_zero(c)]
    M = PresentedModule(ring, tuple(degrees), cols, _validate=False)
    E._cache["minimal"] = M
    M._cache["minimal"] = M
    return M


def mu(E: PresentedModule) -> int:
    """Minimal number of generators at the graded maximal ideal."""
    return minimal_presentation(E).n


class FreeResolution:
    """Minimal graded free resolution: degrees per step, maps as column lists."""

    __slots__ = ("ring", "degrees", "maps")

    def __init__(self, ring, degrees, maps):
        self.ring = ring
        self.degrees = degrees  # list of degree tuples, degrees[0] = F_0
        self.maps = maps  # maps[k]: columns of F_{k+1} -> F_k

    def length(self) -> int:
        return len(self.maps)

    def betti(self):
        return [len(d) for d in self.degrees]


def free_resolution(E: PresentedModule) -> FreeResolution:
    res = E._cache.get("resolution")
    if res is not None:
        return res
    ring = E.ring
    M = minimal_presentation(E)
    degrees = [M.gen_degrees]
    maps = []
    cols = list(M.relations)
    while cols:
        coldegs = _columns_degrees(cols, degrees[-1])
        maps.append(cols)
        degrees.append(coldegs)
        syz = syzygies(cols, ring, len(degrees[-2]))
        syz = [v for v in syz if not _vec_is_zero(v)]
        # cancel scalar entries of the new step; each hit removes one generator
        # of the previous free module (a redundant syzygy there)
        while True:
            hit = _unit_entry([tuple(v) for v in syz])
            if hit is None:
                break
            i, j = hit
            syz = _cancel_unit([tuple(v) for v in syz], i, j, ring)
            syz = [v for v in syz if not _vec_is_zero(v)]
            prev = maps[-1]
            maps[-1] = [c for k, c in enumerate(prev) if k != i]
            degrees[-1] = tuple(d for k, d in enumerate(degrees[-1]) if k != i)
        cols = [tuple(v) for v in syz]
        if len(maps) > ring.nvars + 2:
            raise ModcoreError("resolution exceeded the syzygy-theorem bound; bug")
    res = FreeResolution(ring, degrees, maps)
    E._cache["resolution"] = res
    return res


def projective_dimension(E: PresentedModule) -> int:
    return free_resolution(E).length()


def depth(E: PresentedModule):
    """d - pd(E) by graded Auslander-Buchsbaum; +inf sentinel for the zero module."""
    if E.is_zero_module():
        return math.inf
    return E.ring.nvars - projective_dimension(E)


# -- Ext ---------------------------------------------------------------------------


def _transpose_cols(cols, nrows):
    """Columns of the transpose, given columns of a matrix with `nrows` rows."""
    ncols = len(cols)
    return [tuple(cols[j][i] for j in range(ncols)) for i in range(nrows)]


def ext_module(E: PresentedModule, i: int):
    """Ext^i_R(E, R) as a presented module, plus an is_zero flag."""
    if i < 0:
        raise ModcoreError("Ext index must be nonnegative")
    ring = E.ring
    res = free_resolution(E)
    pd = res.length()
    if i > pd:
        return PresentedModule(ring, (), ()), True
    dual_degs_i = tuple(-d for d in res.degrees[i])
    n_i = len(dual_degs_i)
    # image of M_i^T  (empty for i = 0)
    img = _transpose_cols(res.maps[i - 1], len(res.degrees[i - 1])) if i >= 1 else []
    if i == pd:
        kern = [tuple(ring.one() if r == j else ring.zero() for r in range(n_i)) for j in range(n_i)]
    else:
        A_cols = _transpose_cols(res.maps[i], len(res.degrees[i]))
        kern = syzygies(A_cols, ring, len(res.degrees[i + 1]))
        kern = [v for v in kern if not _vec_is_zero(v)]
    if not kern:
        return PresentedModule(ring, (), ()), True
    img_gb = module_gb(img, ring) if img else []
    is_zero = all(module_member(v, img_gb, ring) for v in kern) if img else False
    gen_degs = tuple(vector_degree(v, dual_degs_i) for v in kern)
    rel = syzygies(list(kern) + list(img), ring, n_i)
    r = len(kern)
    cols = []
    for s in rel:
        head = tuple(s[:r])
        if not _vec_is_zero(head):
            cols.append(head)
    M = PresentedModule(ring, gen_degs, cols, _validate=False)
    return M, is_zero


# -- Fitting ideals ------------------------------------------------------------------


def _minor_fn(cols, ring):
    rows = len(cols[0]) if cols else 0
    entry = lambda i, j: cols[j][i]
    memo = {}

    def det(rset, cset):
        if not rset:
            return ring.one()
        key = (rset, cset)
        v = memo.get(key)
        if v is not None:
            return v
        i = rset[0]
        rest = rset[1:]
        total = ring.zero()
        sign = 1
        for k, j in enumerate(cset):
            e = entry(i, j)
            if e:
                sub = det(rest, cset[:k] + cset[k + 1 :])
                if sub:
                    term = e * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    return det


def fitting_ideal(E: PresentedModule, t: int) -> Ideal:
    """Fitt_t(E): ideal of (n-t)-minors of the presentation matrix."""
    if t < 0:
        raise ModcoreError("Fitting index must be nonnegative")
    ring = E.ring
    n = E.n
    size = n - t
    if size <= 0:
        return Ideal(ring, (ring.one(),))
    cols = E.relations
    if size > min(n, len(cols)):
        return Ideal(ring, ())
    from itertools import combinations

    det = _minor_fn(cols, ring)
    gens = []
    seen = set()
    for rset in combinations(range(n), size):
        for cset in combinations(range(len(cols)), size):
            v = det(rset, cset)
            if v:
                vm = v.monic()
                if vm.terms not in seen:
                    seen.add(vm.terms)
                    gens.append(vm)
    return Ideal(ring, gens)


def first_nonzero_maximal_minor(E: PresentedModule) -> Polynomial:
    """The fixed inverting element of Fitt_e(E): first nonzero (n-e)-minor in
    lexicographic (rows, cols) subset order."""
    ring = E.ring
    e = rank(E)
    size = E.n - e
    if size == 0:
        return ring.one()
    from itertools import combinations

    det = _minor_fn(E.relations, ring)
    for rset in combinations(range(E.n), size):
        for cset in combinations(range(len(E.relations)), size):
            v = det(rset, cset)
            if v:
                return v
    raise ModcoreError("presentation rank is lower than expected")


# -- annihilators and colons ---------------------------------------------------------


def _colon_by_basis_vector(cols, pos, ring, npos) -> Ideal:
    """{r in R : r * e_pos lies in the span of cols}."""
    e = tuple(ring.one() if k == pos else ring.zero() for k in range(npos))
    syz = syzygies([e] + list(cols), ring, npos)
    gens = [s[0] for s in syz if s[0]]
    return Ideal(ring, gens)


def annihilator(E: PresentedModule) -> Ideal:
    ring = E.ring
    if E.n == 0:
        return Ideal(ring, (ring.one(),))
    result = None
    for i in range(E.n):
        Qi = _colon_by_basis_vector(E.relations, i, ring, E.n)
        result = Qi if result is None else intersect(result, Qi)
        if result.is_zero():
            return result
    return result


class Submodule:
    """A submodule U of a presented module E, given by coordinate vectors."""

    __slots__ = ("parent", "gens", "_cache")

    def __init__(self, parent: PresentedModule, gens):
        vecs = []
        for v in gens:
            v = tuple(v)
            if len(v) != parent.n:
                raise ModcoreError("submodule generator has wrong length")
            if not _vec_is_zero(v):
                vecs.append(v)
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "gens", tuple(vecs))
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, *a):
        raise AttributeError("Submodule is immutable")

    def __repr__(self):
        return f"Submodule({len(self.gens)} gens of {self.parent!r})"

    def coset_gb(self):
        """Module basis of U + relations; membership modulo the relations."""
        gb = self._cache.get("gb")
        if gb is None:
            gb = module_gb(list(self.gens) + list(self.parent.relations), self.parent.ring)
            self._cache["gb"] = gb
        return gb

    def contains(self, vec) -> bool:
        return module_member(vec, self.coset_gb(), self.parent.ring)

    def __le__(self, other: "Submodule") -> bool:
        if self.parent is not other.parent and self.parent.relations != other.parent.relations:
            raise ModcoreError("submodules of different parents")
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.coset_gb() == other.coset_gb()

    def __hash__(self):
        raise TypeError("unhashable")

    def is_whole_module(self) -> bool:
        return all(self.contains(self.parent.basis_vector(i)) for i in range(self.parent.n))

    def reduced_gens(self):
        """Generators normal-formed against the parent relations (for display)."""
        ring = self.parent.ring
        mkey = _mkeyf(ring.order.key)
        prepped = _mod_prep(self.parent.relation_gb(), mkey, ring.char)
        out = []
        seen = set()
        for v in self.gens:
            d = mod_nf_dict(_vec_to_dict(v), prepped, mkey, ring.char)
            if d:
                w = _dict_to_vec(d, ring, self.parent.n)
                key = tuple(f.terms for f in w)
                if key not in seen:
                    seen.add(key)
                    out.append(w)
        return out

    def to_ideal(self) -> Ideal:
        """Image ideal when the parent was built from an ideal."""
        I = self.parent._cache.get("from_ideal")
        if I is None:
            raise ModcoreError("parent module does not come from an ideal")
        gens = []
        for v in self.gens:
            f = self.parent.ring.zero()
            for c, g in zip(v, I.gens):
                f = f + c * g
            if f:
                gens.append(f)
        return Ideal(self.parent.ring, gens)

    def quotient_module(self) -> PresentedModule:
        """E/U, presented on E's generators."""
        E = self.parent
        return PresentedModule(E.ring, E.gen_degrees, tuple(E.relations) + self.gens)


def whole_module(E: PresentedModule) -> Submodule:
    return Submodule(E, [E.basis_vector(i) for i in range(E.n)])


def span(E: PresentedModule, vectors) -> Submodule:
    return Submodule(E, vectors)


def colon_into(U: Submodule, E: PresentedModule | None = None) -> Ideal:
    """(U :_R E) = ann(E/U).  Uses the ideal route when E came from an ideal."""
    if E is None:
        E = U.parent
    elif E is not U.parent:
        raise ModcoreError("U is not a submodule of E")
    I = E._cache.get("from_ideal")
    if I is not None:
        J = U.to_ideal()
        if not J.gens:
            J = Ideal(E.ring, ())
        return quotient_ideal(J, I)
    return annihilator(U.quotient_module())


def submodule_intersect(U1: Submodule, U2: Submodule) -> Submodule:
    """U1 cap U2 inside their common parent (cosets modulo the relations)."""
    E = U1.parent
    if U2.parent is not E and U2.parent.relations != E.relations:
        raise ModcoreError("parent mismatch")
    ring = E.ring
    W1 = list(U1.gens) + list(E.relations)
    W2 = list(U2.gens) + list(E.relations)
    syz = syzygies(W1 + W2, ring, E.n)
    k1 = len(W1)
    out = []
    for s in syz:
        v = _zero_vec(ring, E.n)
        for c, w in zip(s[:k1], W1):
            if c:
                v = _vec_add(v, tuple(c * a for a in w))
        if not _vec_is_zero(v):
            out.append(v)
    return Submodule(E, out)


def ideal_times_module(K: Ideal, E: PresentedModule) -> Submodule:
    gens = []
    for f in K.gens:
        for i in range(E.n):
            gens.append(tuple(f if k == i else E.ring.zero() for k in range(E.n)))
    return Submodule(E, gens)


def ideal_times_submodule(K: Ideal, U: Submodule) -> Submodule:
    gens = []
    for f in K.gens:
        for v in U.gens:
            gens.append(tuple(f * a for a in v))
    return Submodule(U.parent, gens)


# -- torsion -------------------------------------------------------------------------


def is_torsionfree(E: PresentedModule) -> bool:
    """True iff the kernel of E -> E_a vanishes, a the fixed maximal minor.

    E_a is free of rank e for any nonzero maximal minor a, so that kernel is
    exactly the torsion submodule; it is computed as ((relations) : a) by a
    syzygy projection, and torsion vanishes iff the colon adds nothing.
    """
    cached = E._cache.get("torsionfree")
    if cached is not None:
        return cached
    ring = E.ring
    ans = True
    if E.n > 0 and E.relations:
        a = first_nonzero_maximal_minor(E)
        if not a.is_constant():
            cols = list(E.relations)
            scaled = [tuple(a * c for c in basis) for basis in
                      [tuple(ring.one() if k == i else ring.zero() for k in range(E.n)) for i in range(E.n)]]
            syz = syzygies(cols + scaled, ring, E.n)
            k1 = len(cols)
            relgb = E.relation_gb()
            for s in syz:
                w = tuple(s[k1:])
                if not _vec_is_zero(w) and not module_member(w, relgb, ring):
                    ans = False
                    break
    E._cache["torsionfree"] = ans
    return ans

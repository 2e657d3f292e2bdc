"""Rees-algebra layer: symmetric/Rees/fiber ideals, analytic spread, graded
components, reduction tests, reduction numbers, Monte Carlo cores.

The Rees ideal is the saturation of the symmetric-algebra ideal at one fixed
nonzero maximal minor of the presentation: inverting such a minor frees the
module, so that saturation removes exactly the torsion of S(E).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    CapExceededError,
    DegreeMixError,
    ModcoreError,
    RetryExhaustedError,
    TorsionError,
)
from .groebner import Ideal, krull_dimension, saturate, _monomials_of_degree
from .modalg import (
    PresentedModule,
    Submodule,
    first_nonzero_maximal_minor,
    is_torsionfree,
    mu,
    rank,
    span,
    submodule_intersect,
    whole_module,
)
from .poly import PolyRing, embed_poly, restrict_poly

DEFAULT_T_CAP = 6
DEFAULT_X_CAP = 10
RETRY_CAP = 32


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _tvar_base(ring: PolyRing) -> str:
    base = "T"
    while any(v.startswith(base) and v[len(base):].isdigit() for v in ring.vars):
        base += "T"
    return base


class ReesPackage:
    """Rees data of a module generated in a single common degree."""

    def __init__(self, E: PresentedModule):
        if E.n == 0:
            raise ModcoreError("Rees data of the zero module is not defined")
        if rank(E) <= 0:
            raise ModcoreError("Rees machinery needs rank(E) > 0")
        if not is_torsionfree(E):
            raise TorsionError("module has torsion; quotient the torsion submodule first")
        D = E.common_degree()
        if D is None:
            raise DegreeMixError("generators must sit in one common degree")
        self.E = E
        self.ring = E.ring
        self.gen_degree = D
        base = _tvar_base(self.ring)
        self.tvars = tuple(f"{base}{i + 1}" for i in range(E.n))
        self.big_ring = PolyRing(self.ring.char, self.ring.vars + self.tvars)
        self.fiber_ring = PolyRing(self.ring.char, self.tvars)
        self.nx = self.ring.nvars
        self._sym = None
        self._rees = None
        self._fiber = None
        self._ell = None
        self._components = {}

    # -- ideals -------------------------------------------------------------

    def sym_ideal(self) -> Ideal:
        if self._sym is None:
            big = self.big_ring
            gens = []
            for col in self.E.relations:
                g = big.zero()
                for i, f in enumerate(col):
                    if f:
                        g = g + embed_poly(f, big) * big.var(self.nx + i)
                if g:
                    gens.append(g)
            self._sym = Ideal(big, gens)
        return self._sym

    def inverting_element(self):
        return embed_poly(first_nonzero_maximal_minor(self.E), self.big_ring)

    def rees_ideal(self) -> Ideal:
        if self._rees is None:
            sym = self.sym_ideal()
            if sym.is_zero():
                self._rees = sym
            else:
                self._rees, _ = saturate(sym, self.inverting_element(), want_exponent=False)
        return self._rees

    def fiber_ideal(self) -> Ideal:
        """Image of the Rees ideal in k[T] under x -> 0."""
        if self._fiber is None:
            gens = []
            for g in self.rees_ideal().groebner_basis():
                kept = {m: c for m, c in g.terms if not any(m[: self.nx])}
                if kept:
                    gens.append(restrict_poly(self.big_ring.from_dict(kept), self.fiber_ring))
            self._fiber = Ideal(self.fiber_ring, gens)
        return self._fiber

    def analytic_spread(self) -> int:
        if self._ell is None:
            self._ell = krull_dimension(self.fiber_ideal())
        return self._ell

    # -- T-graded structure ---------------------------------------------------

    def _split_t(self, g):
        """Big-ring polynomial -> {T-monomial: R-coefficient dict}."""
        nx = self.nx
        out = {}
        for m, c in g.terms:
            tm = m[nx:]
            out.setdefault(tm, {})[m[:nx]] = c
        return out

    def _tdeg(self, g) -> int:
        m = g.lm()
        return sum(m[self.nx:])

    def t_monomials(self, j: int):
        """T-monomials of degree j, sorted descending in the fiber order."""
        monos = list(_monomials_of_degree(len(self.tvars), j))
        monos.sort(key=self.fiber_ring.order.key, reverse=True)
        return monos

    def component_relations(self, j: int):
        """Columns over the degree-j T-monomial basis generating [rees]_j."""
        ring = self.ring
        basis = {m: i for i, m in enumerate(self.t_monomials(j))}
        cols = []
        for g in self.rees_ideal().groebner_basis():
            t = self._tdeg(g)
            if t > j:
                continue
            pieces = self._split_t(g)
            for beta in _monomials_of_degree(len(self.tvars), j - t):
                col = [ring.zero()] * len(basis)
                for tm, xd in pieces.items():
                    shifted = tuple(a + b for a, b in zip(tm, beta))
                    col[basis[shifted]] = ring.from_dict(xd)
                cols.append(tuple(col))
        return cols

    def graded_component(self, j: int, t_cap: int = DEFAULT_T_CAP) -> PresentedModule:
        """E^j = [R(E)]_j, presented over R on the degree-j T-monomials."""
        if j < 1:
            raise ModcoreError("graded components are defined for j >= 1")
        if j > t_cap:
            raise CapExceededError(f"T-degree {j} exceeds the cap {t_cap}")
        cached = self._components.get(j)
        if cached is None:
            nmon = len(self.t_monomials(j))
            degrees = (self.gen_degree * j,) * nmon
            cached = PresentedModule(self.ring, degrees, self.component_relations(j))
            self._components[j] = cached
        return cached

    # -- reductions -------------------------------------------------------------

    def _scalar_coords(self, vec):
        """Scalar coordinate vector of a degree-D element (constant parts)."""
        out = []
        for f in vec:
            if f and not f.is_constant():
                raise DegreeMixError(
                    "reduction elements must be field combinations of the generators"
                )
            out.append(f.constant_coeff() if f else 0)
        return out

    def fiber_image(self, vec):
        """Image in F(E)_1 of an element of E: a linear form of k[T]."""
        coeffs = []
        for f in vec:
            coeffs.append(f.constant_coeff() if f else 0)
        d = {}
        n = len(self.tvars)
        for i, c in enumerate(coeffs):
            if c:
                m = [0] * n
                m[i] = 1
                d[tuple(m)] = c
        return self.fiber_ring.from_dict(d)

    def is_reduction(self, U: Submodule) -> bool:
        """Fiber criterion: U reduces E iff its fiber image is a homogeneous
        system of parameters of F(E)."""
        images = [self.fiber_image(v) for v in U.gens]
        J = self.fiber_ideal() + Ideal(self.fiber_ring, images)
        return krull_dimension(J) <= 0


def rees_package(E: PresentedModule) -> ReesPackage:
    rp = E._cache.get("rees")
    if rp is None:
        rp = ReesPackage(E)
        E._cache["rees"] = rp
    return rp


def sym_ideal(E: PresentedModule) -> Ideal:
    return rees_package(E).sym_ideal()


def rees_ideal(E: PresentedModule) -> Ideal:
    return rees_package(E).rees_ideal()


def fiber_ideal(E: PresentedModule) -> Ideal:
    return rees_package(E).fiber_ideal()


def analytic_spread(E: PresentedModule) -> int:
    return rees_package(E).analytic_spread()


def graded_component(E: PresentedModule, j: int, t_cap: int = DEFAULT_T_CAP) -> PresentedModule:
    return rees_package(E).graded_component(j, t_cap)


def is_reduction(U: Submodule, E: PresentedModule) -> bool:
    return rees_package(E).is_reduction(U)


def random_reduction(E: PresentedModule, count: int | None = None, rng=None) -> Submodule:
    """`count` random field combinations of the generators, retried until the
    fiber criterion certifies a reduction."""
    if rng is None:
        raise ModcoreError("randomized operations require a seed")
    rng = _rng(rng)
    rp = rees_package(E)
    if count is None:
        count = rp.analytic_spread()
    ring = E.ring
    p = ring.char
    for _ in range(RETRY_CAP):
        gens = []
        for _ in range(count):
            gens.append(tuple(ring.const(rng.randrange(p)) for _ in range(E.n)))
        U = span(E, gens)
        if rp.is_reduction(U):
            return U
    raise RetryExhaustedError(
        f"no reduction with {count} elements after {RETRY_CAP} draws; "
        "analytic spread may be wrong or the field too small"
    )


@dataclass
class ReductionNumber:
    value: int | None
    exact: bool
    max_degree: int

    def __repr__(self):
        return f"r = {self.value}" if self.exact else f"r >= {self.max_degree}"


def reduction_number(U: Submodule, E: PresentedModule, max_degree: int = DEFAULT_T_CAP) -> ReductionNumber:
    """Least r with U * [R(E)]_r = [R(E)]_{r+1}, stable at r+1.

    Each graded-piece equality is decided by a Nakayama rank test over GF(p):
    the quotient is generated in a single degree, so it vanishes iff the
    scalar parts of its relation columns have full rank.
    """
    rp = rees_package(E)
    p = E.ring.char
    lams = [rp._scalar_coords(v) for v in U.gens]
    nT = len(rp.tvars)

    def piece_is_covered(r: int) -> bool:
        basis = {m: i for i, m in enumerate(rp.t_monomials(r + 1))}
        cols = []
        for g in rp.rees_ideal().groebner_basis():
            if any(g.lm()[: rp.nx]):
                continue  # positive x-degree: no scalar part
            t = rp._tdeg(g)
            if t > r + 1:
                continue
            tonly = {m[rp.nx:]: c for m, c in g.terms}
            for beta in _monomials_of_degree(nT, r + 1 - t):
                col = [0] * len(basis)
                for tm, c in tonly.items():
                    col[basis[tuple(a + b for a, b in zip(tm, beta))]] = c
                cols.append(col)
        for lam in lams:
            for beta in _monomials_of_degree(nT, r):
                col = [0] * len(basis)
                for i, c in enumerate(lam):
                    if c:
                        shifted = list(beta)
                        shifted[i] += 1
                        col[basis[tuple(shifted)]] = (col[basis[tuple(shifted)]] + c) % p
                cols.append(col)
        return _rank_mod_p(cols, len(basis), p) == len(basis)

    hit = None
    for r in range(max_degree + 1):
        if piece_is_covered(r):
            hit = r
            break
    if hit is None:
        return ReductionNumber(None, False, max_degree)
    if not piece_is_covered(hit + 1):
        raise ModcoreError("graded pieces failed to stabilize; bug")
    return ReductionNumber(hit, True, max_degree)


def _rank_mod_p(cols, width, p) -> int:
    rows = [list(c) for c in cols]  # row-reduce the transpose; rank is symmetric
    rk = 0
    for col in range(width):
        piv = None
        for k in range(rk, len(rows)):
            if rows[k][col] % p:
                piv = k
                break
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = pow(rows[rk][col], -1, p)
        rows[rk] = [(v * inv) % p for v in rows[rk]]
        for k in range(len(rows)):
            if k != rk and rows[k][col] % p:
                f = rows[k][col]
                rows[k] = [(a - f * b) % p for a, b in zip(rows[k], rows[rk])]
        rk += 1
        if rk == len(rows):
            break
    return rk


def core_monte_carlo(E: PresentedModule, samples: int = 12, stabilization_window: int = 3, rng=None):
    """Intersection of successive random minimal reductions.

    Returns (submodule, samples_used).  The value is a Monte Carlo upper
    approximation of core(E) unless a theorem route confirms it.
    """
    if rng is None:
        raise ModcoreError("randomized operations require a seed")
    if samples < stabilization_window:
        raise ModcoreError("samples must be at least the stabilization window")
    rng = _rng(rng)
    rp = rees_package(E)
    if rp.analytic_spread() == mu(E):
        # no proper reductions: core(E) = E, and every draw returns E
        return whole_module(E), 0
    current = whole_module(E)
    stable = 0
    for k in range(1, samples + 1):
        U = random_reduction(E, rng=rng)
        nxt = submodule_intersect(current, U)
        if nxt == current:
            stable += 1
        else:
            stable = 0
            current = nxt
        if stable >= stabilization_window:
            return current, k
    raise RetryExhaustedError(f"core failed to stabilize within {samples} samples")

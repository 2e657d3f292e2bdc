"""Shared fixtures: corpus rings/ideals/modules and small exact-linear-algebra
helpers used as independent oracles (never the engine under test)."""

from __future__ import annotations

import random

import pytest

from modcore.groebner import Ideal, _monomials_of_degree
from modcore.modalg import direct_sum, free_module, module_from_ideal
from modcore.poly import PolyRing

P = 32003


@pytest.fixture(scope="session")
def R2():
    return PolyRing(P, ("x", "y"))


@pytest.fixture(scope="session")
def R3():
    return PolyRing(P, ("x", "y", "z"))


@pytest.fixture(scope="session")
def R4():
    return PolyRing(P, ("x1", "x2", "x3", "x4"))


@pytest.fixture(scope="session")
def RH():
    return PolyRing(P, ("x0", "x1", "x2", "x3"))


@pytest.fixture(scope="session")
def msq(R2):
    x, y = R2.gens()
    return Ideal(R2, [x**2, x * y, y**2])


@pytest.fixture(scope="session")
def E_msq(msq):
    return module_from_ideal(msq)


@pytest.fixture(scope="session")
def E_msq_plus(E_msq, R2):
    return direct_sum(E_msq, free_module(R2, 1), twist=2)


@pytest.fixture(scope="session")
def edge(R4):
    x1, x2, x3, x4 = R4.gens()
    return Ideal(R4, [x1 * x2, x2 * x3, x3 * x4, x1 * x4])


@pytest.fixture(scope="session")
def E_edge(edge):
    return module_from_ideal(edge)


@pytest.fixture(scope="session")
def E_edge_plus(E_edge, R4):
    return direct_sum(E_edge, free_module(R4, 1), twist=2)


@pytest.fixture(scope="session")
def tri(R3):
    x, y, z = R3.gens()
    return Ideal(R3, [x * y, x * z, y * z])


@pytest.fixture(scope="session")
def E_tri(tri):
    return module_from_ideal(tri)


@pytest.fixture(scope="session")
def minors43(R3):
    """3x3 minors of a structured 4x3 linear matrix: perfect height-2 ideal
    with mu = 4 > ell = 3 and reduction number 2, the boundary case of the
    pd-1 core formula."""
    from itertools import combinations

    x, y, z = R3.gens()
    zero = R3.zero()
    phi = [[x, zero, zero], [y, x, zero], [z, y, x], [zero, z, y]]

    def det3(rs):
        (a, b, c), (d, e, f), (g, h, i) = [phi[r] for r in rs]
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)

    return Ideal(R3, [det3(rs) for rs in combinations(range(4), 3)])


@pytest.fixture(scope="session")
def E_minors43(minors43):
    return module_from_ideal(minors43)


@pytest.fixture(scope="session")
def H(RH):
    x0, x1, x2, x3 = RH.gens()
    return Ideal(RH, [x1 * x3 - x2**2, x0 * x3 - x1 * x2, x0 * x2 - x1**2])


@pytest.fixture(scope="session")
def E_H(H):
    return module_from_ideal(H)


@pytest.fixture(scope="session")
def E_H_plus(E_H, RH):
    return direct_sum(E_H, free_module(RH, 1), twist=2)


# -- oracle-side linear algebra over GF(p) -------------------------------------


def rref(rows, p=P):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(r) for r in rows if any(v % p for v in r)]
    pivots = []
    r = 0
    width = len(rows[0]) if rows else 0
    for c in range(width):
        piv = None
        for k in range(r, len(rows)):
            if rows[k][c] % p:
                piv = k
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c] % p:
                f = rows[k][c]
                rows[k] = [(a - f * b) % p for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def row_rank(rows, p=P):
    return len(rref(rows, p)[0])


def in_row_space(vec, rows, p=P):
    base = row_rank(rows, p)
    return row_rank(list(rows) + [list(vec)], p) == base


def monomials_of_degree(nvars, deg):
    return list(_monomials_of_degree(nvars, deg))


def poly_coeff_vector(f, monos):
    d = dict(f.terms)
    return [d.get(m, 0) for m in monos]


def ideal_degree_basis(I, deg):
    """Row space of the degree-`deg` piece of I, over the monomial basis."""
    ring = I.ring
    monos = monomials_of_degree(ring.nvars, deg)
    rows = []
    for g in I.gens:
        gd = g.degree()
        if gd > deg:
            continue
        for m in monomials_of_degree(ring.nvars, deg - gd):
            shifted = ring.monomial(m) * g
            rows.append(poly_coeff_vector(shifted, monos))
    return rows, monos


def submodule_degree_basis(vectors, gen_degrees, ring, deg):
    """Row space of the degree-`deg` piece of an R-span of vectors in R^n."""
    n = len(gen_degrees)
    cells = []
    for pos in range(n):
        for m in monomials_of_degree(ring.nvars, deg - gen_degrees[pos]) if deg >= gen_degrees[pos] else []:
            cells.append((pos, m))
    index = {c: i for i, c in enumerate(cells)}
    rows = []
    for v in vectors:
        from modcore.modalg import vector_degree

        vd = vector_degree(v, gen_degrees)
        if vd is None or vd > deg:
            continue
        for m in monomials_of_degree(ring.nvars, deg - vd):
            shift = ring.monomial(m)
            row = [0] * len(cells)
            for pos, f in enumerate(v):
                if f:
                    for mono, c in (shift * f).terms:
                        row[index[(pos, mono)]] = c
            rows.append(row)
    return rows, cells


def random_poly(ring, rng, maxdeg=2, nterms=3):
    d = {}
    for _ in range(nterms):
        deg = rng.randrange(maxdeg + 1)
        m = [0] * ring.nvars
        for _ in range(deg):
            m[rng.randrange(ring.nvars)] += 1
        d[tuple(m)] = rng.randrange(1, ring.char)
    return ring.from_dict(d)


def random_homogeneous_poly(ring, rng, deg, nterms=3):
    d = {}
    for _ in range(nterms):
        m = [0] * ring.nvars
        for _ in range(deg):
            m[rng.randrange(ring.nvars)] += 1
        d[tuple(m)] = rng.randrange(1, ring.char)
    return ring.from_dict(d)


def seeded(seed):
    return random.Random(seed)

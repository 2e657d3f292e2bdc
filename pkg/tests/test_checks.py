"""Theorem checkers: G_s, residual intersections, AN_s, Ext vanishing,
CM Rees rings, free quotients, balanced equivalences, ideal modules."""

import pytest

from modcore.errors import ModcoreError
from modcore.groebner import Ideal, height
from modcore.modalg import (
    colon_into,
    fitting_ideal,
    free_module,
    ideal_times_module,
    rank,
    span,
    whole_module,
)
from modcore.rees import analytic_spread, core_monte_carlo, random_reduction
from modcore.checks import (
    build_ideal_module,
    check_an,
    check_cm_rees,
    check_ext_vanishing,
    check_gs,
    hypothesis_report,
    residual_intersection,
    verify_balanced,
    verify_free_quotient,
    verify_pd1_core,
)


def test_check_gs_free(R2):
    assert check_gs(free_module(R2, 2), 5).ok


def test_check_gs_msq(E_msq):
    # Fitt_2 = (x, y) has height 2 >= 2
    assert check_gs(E_msq, 2).ok


def test_check_gs_edge(E_edge):
    # oracle (by-hand localization): mu(I_p) <= 2 at all height-<=2 primes
    assert check_gs(E_edge, 3).ok


def test_check_gs_monotone(E_msq, E_edge, E_H_plus):
    for E, smax in ((E_msq, 2), (E_edge, 3), (E_H_plus, 3)):
        if check_gs(E, smax).ok:
            for s in range(1, smax + 1):
                assert check_gs(E, s).ok


def test_residual_intersection_msq(E_msq):
    cert = residual_intersection(E_msq, whole_module(E_msq), 2, rng=11)
    assert cert.proper
    assert cert.height_K >= 2
    assert cert.cm is True
    assert len(cert.prefix_heights) == 3
    for i, h in enumerate(cert.prefix_heights):
        assert h >= i - rank(E_msq) + 1


def test_residual_intersection_explicit_x2_y2(R2, E_msq, msq):
    # explicit draws x^2, y^2: K = ((x^2,y^2) : m^2) = (x, y) of height 2
    from modcore.groebner import quotient_ideal

    x, y = R2.gens()
    K = quotient_ideal(Ideal(R2, [x**2, y**2]), msq)
    assert K == Ideal(R2, [x, y]) and height(K) == 2


def test_residual_intersection_free_trivial_bound(R2):
    F = free_module(R2, 2, twist=1)
    cert = residual_intersection(F, whole_module(F), 2, rng=4)
    # i - e + 1 <= 1 for i <= e: bounds hold trivially; K may be improper
    for i, h in enumerate(cert.prefix_heights):
        assert h >= i - 2 + 1


def test_residual_intersection_free_with_proper_w(R2):
    # W = m*F is a proper equigenerated submodule with ht(W:F) = 2 = e = s
    x, y = R2.gens()
    zero, one = R2.zero(), R2.one()
    F = free_module(R2, 2, twist=1)
    W = span(F, [(x, zero), (y, zero), (zero, x), (zero, y)])
    assert colon_into(W, F) == Ideal(R2, [x, y])
    cert = residual_intersection(F, W, 2, rng=4)
    for i, h in enumerate(cert.prefix_heights):
        assert h >= i - 2 + 1
    assert cert.proper  # two elements of mF never generate F


def test_residual_intersection_twisted_cubic_improper(E_H):
    # mu(H) = s = 3: three general elements generate H, so K = R is improper
    # and is reported, not raised; the sentinel height clears the bound
    cert = residual_intersection(E_H, whole_module(E_H), 3, rng=7)
    assert not cert.proper
    assert cert.height_K >= 3


def test_residual_intersection_requires_height(E_msq):
    U = span(E_msq, [E_msq.basis_vector(0)])
    with pytest.raises(ModcoreError, match="ht"):
        residual_intersection(E_msq, U, 2, rng=1)


def test_check_an_msq(E_msq):
    rows = check_an(E_msq, trials=10, rng=3)
    assert [r.i for r in rows] == [1, 2]
    for r in rows:
        assert r.proper + r.improper == 10
        assert r.cm_passes == r.proper
        assert r.tight_heights == r.proper


def test_check_an_free_vacuous(R2):
    rows = check_an(free_module(R2, 2, twist=1), trials=4, rng=5)
    for r in rows:
        assert r.cm_passes == r.proper  # no proper K arises in the free case


def test_check_an_tri(E_tri):
    rows = check_an(E_tri, trials=10, rng=17)
    for r in rows:
        assert r.cm_passes == r.proper
        assert r.tight_heights == r.proper


def test_check_an_reports_gs_failure_as_note(R3, tri):
    # tri + tri fails G_3 (mu jumps to 4 at the height-2 minimal primes), so
    # the i = 3 row must carry the reason instead of raising
    from modcore.modalg import direct_sum, module_from_ideal

    M = direct_sum(module_from_ideal(tri), module_from_ideal(tri))
    rows = check_an(M, trials=2, rng=5)
    by_i = {r.i: r for r in rows}
    assert by_i[2].note == ""
    assert "G_3" in by_i[3].note


def test_check_an_detects_non_cm_residuals(E_edge_plus):
    # edge + R(-2) has projective dimension 2, outside the CM guarantee for
    # pd-1 modules, and its 3-residual intersections really are non-CM: the
    # checker must report the failures, not rubber-stamp them
    rows = check_an(E_edge_plus, trials=2, rng=5)
    by_i = {r.i: r for r in rows}
    assert by_i[3].proper == 2 and by_i[3].cm_passes == 0
    assert by_i[2].cm_passes == by_i[2].proper  # low codimension still CM


def test_depth_of_rees_powers(E_H_plus, E_minors43):
    # depth(E^j) >= d - j across the hypothesis range, tight on both corpora
    from modcore.modalg import depth as depth_of
    from modcore.rees import graded_component

    for E in (E_H_plus, E_minors43):
        d = E.ring.nvars
        for j in (1, 2):
            Ej = graded_component(E, j)
            assert depth_of(Ej) == d - j


def test_ext_vanishing_vacuous(E_msq):
    rep = check_ext_vanishing(E_msq)
    assert rep.vacuous and rep.ok


def test_ext_vanishing_H_plus_free(E_H_plus):
    rep = check_ext_vanishing(E_H_plus)
    assert rep.jrange == [1]
    assert rep.verdicts[1] is True and rep.ok


def test_ext_vanishing_negative_control(E_edge_plus):
    rep = check_ext_vanishing(E_edge_plus)
    assert rep.jrange == [1]
    assert rep.verdicts[1] is False and not rep.ok


def test_cm_rees_free(R2):
    v = check_cm_rees(free_module(R2, 2, twist=1))
    assert v.cm  # polynomial ring


def test_cm_rees_msq(E_msq):
    v = check_cm_rees(E_msq)
    assert v.cm and v.depth == 3 and v.dim == 3


def test_cm_rees_twisted_cubic(E_H):
    v = check_cm_rees(E_H)
    assert v.cm and v.dim == 5  # dim R(E) = d + e


def test_verify_free_quotient_msq(R2, E_msq):
    one, zero = R2.one(), R2.zero()
    U = span(E_msq, [(one, zero, zero), (zero, zero, one)])
    v = verify_free_quotient(E_msq, U)
    assert v.ok and v.mu_U == 2
    assert v.K == Ideal(R2, [R2.var(0), R2.var(1)])


def test_verify_free_quotient_no_proper_reduction(E_H):
    v = verify_free_quotient(E_H, whole_module(E_H))
    assert v.ok  # (E:E) = R: vacuous pass over the zero ring


def test_verify_free_quotient_random_H_plus(E_H_plus):
    U = random_reduction(E_H_plus, rng=23)
    assert verify_free_quotient(E_H_plus, U).ok


def test_free_quotient_hilbert_oracle(R2, E_msq):
    # independent check that U/KU really is (R/K)^ell: Hilbert functions
    from modcore.checks import _submodule_presentation
    from modcore.modalg import PresentedModule, cyclic_module

    one, zero = R2.one(), R2.zero()
    U = span(E_msq, [(one, zero, zero), (zero, zero, one)])
    K = colon_into(U, E_msq)
    ell = analytic_spread(E_msq)
    P_U = _submodule_presentation(U)
    KU_cols = [
        tuple(f if k == i else zero for k in range(P_U.n))
        for f in K.gens
        for i in range(P_U.n)
    ]
    Q = PresentedModule(R2, P_U.gen_degrees, list(P_U.relations) + KU_cols, _validate=False)
    RK = cyclic_module(R2, K)
    D = E_msq.common_degree()
    for d in range(8):
        assert Q.hilbert_function(d) == ell * RK.hilbert_function(d - D)


def test_hypothesis_report_fields(E_H_plus):
    rep = hypothesis_report(E_H_plus, "E")
    assert rep.ok and rep.e == 2 and rep.ell == 4 and rep.d == 4
    assert "finite projective dimension" in rep.orientability
    d = rep.to_dict()
    assert d["gs"]["ok"] and d["cm_rees"]["cm"]


def test_verify_balanced_msq(R2, E_msq):
    rep = verify_balanced(E_msq, reductions=8, rng=42)
    assert rep.status == "ok"
    assert rep.independent and rep.products_equal and rep.equals_core
    assert all(K == ["x", "y"] for K in rep.K_values)


def test_verify_balanced_trivial(E_H_plus):
    rep = verify_balanced(E_H_plus, reductions=6, rng=7)
    assert rep.status == "ok"
    assert rep.independent and rep.products_equal and rep.equals_core


def test_verify_balanced_failed_hypothesis(E_edge_plus):
    rep = verify_balanced(E_edge_plus, reductions=6, rng=9)
    assert rep.status == "failed-hypothesis"
    assert rep.independent is None and rep.equals_core is None


def test_verify_balanced_partial_on_inconclusive(E_msq):
    # an inconclusive sub-computation (here: an Ext verdict lost to a cap)
    # must mark the report partial, not failed-hypothesis
    from modcore.checks import BalancedReport, ExtVanishingReport, hypothesis_report
    import modcore.checks as checks

    hyp = hypothesis_report(E_msq)
    forced = ExtVanishingReport(
        ell=hyp.ext.ell, e=hyp.ext.e, jrange=[1], verdicts={1: "inconclusive"},
        ok=False, vacuous=False,
    )
    assert forced.inconclusive() and not forced.refuted()
    original = checks.check_ext_vanishing
    checks.check_ext_vanishing = lambda E, t_cap=6: forced
    try:
        rep = verify_balanced(E_msq, reductions=3, rng=1)
    finally:
        checks.check_ext_vanishing = original
    assert rep.status == "partial"
    assert rep.independent is None


def test_build_ideal_module_rejects_mixed_degrees(R2):
    from modcore.errors import DegreeMixError

    x, y = R2.gens()
    with pytest.raises(DegreeMixError):
        build_ideal_module(Ideal(R2, [x, y**2]), 2, "plus_free")


def test_lemma41_consequence_on_sampled_reductions(E_msq, E_msq_plus, E_H_plus):
    # ht(U:E) >= ell - e + 1 for sampled minimal reductions
    for E in (E_msq, E_msq_plus, E_H_plus):
        ell, e = analytic_spread(E), rank(E)
        for seed in (31, 32):
            U = random_reduction(E, rng=seed)
            assert height(colon_into(U, E)) >= ell - e + 1


def test_verify_pd1_core_msq(R2, E_msq):
    v = verify_pd1_core(E_msq, rng=5)
    assert v.status == "ok"
    assert v.r_value == 1 and v.r_bound == 1
    assert v.fitting_equals_core and v.colons_equal_fitting
    assert v.fitt == ["x", "y"]


def test_verify_pd1_core_msq_plus(R2, E_msq_plus):
    v = verify_pd1_core(E_msq_plus, rng=8)
    assert v.status == "ok"
    assert v.fitting_equals_core and v.colons_equal_fitting


def test_verify_pd1_core_free(R2):
    # free module: Fitt_e = R, core = E; pd = 0 != 1, so hypotheses unmet
    v = verify_pd1_core(free_module(R2, 2, twist=1), rng=2)
    assert v.status == "hypotheses-unmet"
    assert v.pd == 0


def test_verify_pd1_core_fitting_of_free(R2):
    F = free_module(R2, 2, twist=1)
    assert fitting_ideal(F, rank(F)).is_unit()
    C, _ = core_monte_carlo(F, rng=3)
    assert C == whole_module(F)


def test_build_ideal_module_verdicts(edge):
    E, v = build_ideal_module(edge, 2, "plus_free")
    assert v.ell_E == 4 and v.spread_additive
    assert v.nonfree_codim == 2 and v.nonfree_matches_height
    assert v.mu_E == 5 and v.mu_exceeds_spread
    M, vm = build_ideal_module(edge, 2, "power_sum")
    assert vm.ell_E == 4 and vm.mu_E == 8 and vm.mu_exceeds_spread
    assert vm.nonfree_codim == 2


def test_build_ideal_module_rank_one(edge):
    E, v = build_ideal_module(edge, 1, "plus_free")
    assert E.n == 4 and rank(E) == 1 and v.ell_E == v.ell_I


def test_balanced_internal_consistency(E_msq, E_msq_plus):
    # the (iii) => (i) implication is machine-visible: whenever the sampled
    # colons agree, (U:E)E lands inside every sampled reduction
    for E, seed in ((E_msq, 71), (E_msq_plus, 72)):
        rep = verify_balanced(E, reductions=5, rng=seed)
        if rep.status == "ok" and rep.independent:
            K_gens = rep.K_values[0]
            KE = ideal_times_module(
                Ideal(E.ring, [E.ring.parse(g) for g in K_gens]), E
            )
            for s in range(3):
                V = random_reduction(E, rng=900 + seed + s)
                for g in KE.gens:
                    assert V.contains(g)
            assert rep.equals_core


def test_theorem32_prediction_msq(E_msq):
    # pd-1 module: every proper residual intersection is CM with tight height
    for seed in range(5):
        cert = residual_intersection(E_msq, whole_module(E_msq), 2, rng=200 + seed)
        if cert.proper:
            assert cert.cm and cert.height_K == 2


def test_balanced_nontrivial_boundary_case(R3, minors43, E_minors43):
    # four structured cubics: mu = 4 > ell = 3 = e + 2, reduction number
    # exactly ell - e = 2, so the core is proper and the balanced
    # equivalences are non-vacuous: K = (x,y,z) and core = (x,y,z)*I
    x, y, z = R3.gens()
    m = Ideal(R3, [x, y, z])
    assert height(minors43) == 2
    from modcore.modalg import mu, projective_dimension

    assert mu(E_minors43) == 4
    assert projective_dimension(E_minors43) == 1
    assert analytic_spread(E_minors43) == 3
    assert check_gs(E_minors43, 3).ok
    ext = check_ext_vanishing(E_minors43)
    assert ext.jrange == [1] and ext.ok
    assert check_cm_rees(E_minors43).cm
    bal = verify_balanced(E_minors43, reductions=5, rng=11)
    assert bal.status == "ok"
    assert bal.independent and bal.products_equal and bal.equals_core
    assert bal.K_values[0] == ["x", "y", "z"]
    pd1 = verify_pd1_core(E_minors43, rng=13)
    assert pd1.status == "ok"
    assert pd1.r_value == 2 and pd1.r_bound == 2
    assert pd1.fitting_equals_core and pd1.colons_equal_fitting
    assert pd1.fitt == ["x", "y", "z"]
    core, _ = core_monte_carlo(E_minors43, rng=17)
    assert core == ideal_times_module(m, E_minors43)

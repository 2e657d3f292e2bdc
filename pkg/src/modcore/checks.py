"""Hypothesis checkers and theorem verdicts: G_s, residual intersections,
Artin-Nagata, Ext vanishing, Cohen-Macaulay Rees rings, free-quotient
criterion, balanced-core equivalences, and the ideal-module builder.

Randomized constructions replace prime avoidance by field-coefficient draws;
every required conclusion is verified a posteriori, so a bad draw is detected
and redrawn, never silently accepted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CapExceededError,
    DegreeMixError,
    ModcoreError,
    RetryExhaustedError,
)
from .groebner import Ideal, height, krull_dimension
from .modalg import (
    PresentedModule,
    Submodule,
    colon_into,
    cyclic_module,
    depth,
    direct_sum,
    ext_module,
    fitting_ideal,
    free_module,
    ideal_times_module,
    ideal_times_submodule,
    is_torsionfree,
    minimal_presentation,
    module_from_ideal,
    mu,
    projective_dimension,
    rank,
    span,
    syzygies,
    whole_module,
)
from .rees import (
    DEFAULT_T_CAP,
    RETRY_CAP,
    analytic_spread,
    core_monte_carlo,
    graded_component,
    random_reduction,
    reduction_number,
    rees_package,
    _rng,
)


def _ideal_str(I: Ideal):
    return sorted(str(g) for g in I.groebner_basis())


def _height_at_least(I: Ideal, bound: int) -> bool:
    """ht(I) >= bound, with the unit ideal passing vacuously (no prime
    contains it, so height conditions on its primes hold trivially)."""
    return I.is_unit() or height(I) >= bound


# -- G_s ---------------------------------------------------------------------------


@dataclass
class GsVerdict:
    s: int
    ok: bool
    failing_t: int | None
    heights: dict  # t -> (height of Fitt_{t+e-1}, required t+1)

    def to_dict(self):
        return {
            "s": self.s,
            "ok": self.ok,
            "failing_t": self.failing_t,
            "heights": {str(t): list(v) for t, v in self.heights.items()},
        }


def check_gs(E: PresentedModule, s: int) -> GsVerdict:
    """G_s via Fitting ideals: ht(Fitt_{t+e-1}(E)) >= t+1 for 1 <= t <= s-1."""
    if s < 1:
        raise ModcoreError("G_s needs s >= 1")
    e = rank(E)
    heights = {}
    for t in range(1, s):
        F = fitting_ideal(E, t + e - 1)
        h = height(F)
        heights[t] = (h, t + 1)
        if not _height_at_least(F, t + 1):
            return GsVerdict(s, False, t, heights)
    return GsVerdict(s, True, None, heights)


# -- residual intersections -----------------------------------------------------------


@dataclass
class ResidualCertificate:
    s: int
    elements: list  # coordinate vectors drawn from W
    prefix_heights: list  # ht((a_1..a_i):E) for i = 0..s
    subset_checked: bool
    K: Ideal
    proper: bool
    height_K: int
    cm: bool | None  # Cohen-Macaulay verdict of R/K; None when improper
    mu_drop_ok: bool  # mu(W / sum Ra_j) = max(0, mu(W) - s) at the maximal ideal
    retries: int
    failures: list  # (attempt, failing prefix or subset) log

    def to_dict(self):
        return {
            "s": self.s,
            "elements": [[str(c) for c in v] for v in self.elements],
            "prefix_heights": self.prefix_heights,
            "subset_checked": self.subset_checked,
            "K": _ideal_str(self.K),
            "proper": self.proper,
            "height_K": self.height_K,
            "cm": self.cm,
            "mu_drop_ok": self.mu_drop_ok,
            "retries": self.retries,
            "failures": self.failures,
        }


def _random_elements(W: Submodule, count: int, rng):
    """Random field combinations of W's generators (they share one degree).

    Returns (ambient vectors, W-coordinate rows); the rows express each draw
    in W's generators, which the generator-drop check needs."""
    E = W.parent
    degs = {d for v in W.gens for d in [_vector_degree_or_none(v, E)] if d is not None}
    if len(degs) > 1:
        raise DegreeMixError("W has generators in mixed degrees; cannot draw homogeneous elements")
    ring = E.ring
    p = ring.char
    out = []
    coords = []
    for _ in range(count):
        v = [ring.zero()] * E.n
        row = []
        for g in W.gens:
            c = rng.randrange(p)
            row.append(c)
            if c:
                for i, a in enumerate(g):
                    if a:
                        v[i] = v[i] + a.scale(c)
        out.append(tuple(v))
        coords.append(row)
    return out, coords


def _mu_drop_holds(W: Submodule, coords, s: int) -> bool:
    """Theorem-2.2 statement (1) at the maximal ideal: the drawn elements cut
    the minimal generator count of W by exactly s (to a floor of zero)."""
    from .modalg import PresentedModule, mu as mu_of

    E = W.parent
    ring = E.ring
    P_W = _submodule_presentation(W)
    extra = [tuple(ring.const(c) for c in row) for row in coords]
    Q = PresentedModule(ring, P_W.gen_degrees, list(P_W.relations) + extra, _validate=False)
    return mu_of(Q) == max(0, mu_of(P_W) - s)


def _vector_degree_or_none(v, E):
    from .modalg import vector_degree

    return vector_degree(v, E.gen_degrees)


def _cm_of_quotient(ring, K: Ideal) -> bool:
    Q = cyclic_module(ring, K)
    return depth(Q) == krull_dimension(K)


def residual_intersection(
    E: PresentedModule,
    W: Submodule,
    s: int,
    rng,
    subset_limit: int = 5,
    retry_cap: int = RETRY_CAP,
) -> ResidualCertificate:
    """Draw s random elements of W and certify Theorem-style height bounds.

    Verifies ht((a_1..a_i) :_R E) >= i-e+1 along the prefix chain, and over
    every index subset when s <= subset_limit (2^s colons; prefixes only
    beyond that).  Failed draws are logged and retried.
    """
    rng = _rng(rng)
    e = rank(E)
    KW = colon_into(W, E)
    htW = height(KW)
    if htW < s:
        raise ModcoreError(f"ht(W:E) = {htW} < s = {s}; Theorem hypotheses unmet")
    gs = check_gs(E, s)
    if not gs.ok:
        raise ModcoreError(f"E is not G_{s} (fails at t = {gs.failing_t})")

    failures = []
    for attempt in range(retry_cap):
        elems, coords = _random_elements(W, s, rng)
        prefix_heights = []
        ok = True
        for i in range(s + 1):
            Ki = colon_into(span(E, elems[:i]), E)
            prefix_heights.append(height(Ki))
            if not _height_at_least(Ki, i - e + 1):
                failures.append((attempt, f"prefix {i}"))
                ok = False
                break
        if ok and s <= subset_limit:
            from itertools import combinations

            for m in range(1, s + 1):
                if m - e + 1 <= 0:
                    continue
                for S in combinations(range(s), m):
                    if S == tuple(range(m)):
                        continue  # prefix, already checked
                    KS = colon_into(span(E, [elems[v] for v in S]), E)
                    if not _height_at_least(KS, m - e + 1):
                        failures.append((attempt, f"subset {list(S)}"))
                        ok = False
                        break
                if not ok:
                    break
        if ok and not _mu_drop_holds(W, coords, s):
            failures.append((attempt, "generator drop"))
            ok = False
        if ok:
            K = colon_into(span(E, elems), E)
            proper = not K.is_unit()
            return ResidualCertificate(
                s=s,
                elements=elems,
                prefix_heights=prefix_heights,
                subset_checked=s <= subset_limit,
                K=K,
                proper=proper,
                height_K=height(K),
                cm=_cm_of_quotient(E.ring, K) if proper else None,
                mu_drop_ok=True,
                retries=attempt,
                failures=failures,
            )
    raise RetryExhaustedError(
        f"height verification failed {retry_cap} times; last failures: {failures[-3:]}"
    )


# -- Artin-Nagata ---------------------------------------------------------------------


@dataclass
class AnRow:
    i: int
    trials: int
    proper: int
    improper: int
    cm_passes: int
    tight_heights: int  # trials with ht(K) == i-e+1 exactly
    failures: list
    note: str = ""

    def to_dict(self):
        return {
            "i": self.i,
            "trials": self.trials,
            "proper": self.proper,
            "improper": self.improper,
            "cm_passes": self.cm_passes,
            "tight_heights": self.tight_heights,
            "failures": self.failures,
            "note": self.note,
        }


def check_an(E: PresentedModule, s: int | None = None, trials: int = 10, rng=None):
    """AN_s evidence: for each e <= i <= min(s, d+e-1), `trials` random
    i-residual intersections; proper K must give Cohen-Macaulay R/K.

    An i whose construction preconditions fail (e.g. E is not G_i) gets a
    zero-trial row carrying the reason, not an exception."""
    rng = _rng(rng)
    e = rank(E)
    d = E.ring.nvars
    if s is None:
        s = d + e - 1
    W = whole_module(E)
    rows = []
    for i in range(e, min(s, d + e - 1) + 1):
        proper = improper = cm_passes = tight = 0
        fails = []
        note = ""
        for t in range(trials):
            try:
                cert = residual_intersection(E, W, i, rng)
            except ModcoreError as exc:
                note = str(exc)
                break
            if not cert.proper:
                improper += 1
                continue
            proper += 1
            if cert.cm:
                cm_passes += 1
            else:
                fails.append(t)
            if cert.height_K == i - e + 1:
                tight += 1
        rows.append(AnRow(i, trials, proper, improper, cm_passes, tight, fails, note))
    return rows


# -- Ext vanishing ----------------------------------------------------------------------


@dataclass
class ExtVanishingReport:
    ell: int
    e: int
    jrange: list
    verdicts: dict  # j -> True/False/"inconclusive"
    ok: bool
    vacuous: bool

    def refuted(self) -> bool:
        """Some verdict is a definite False (inconclusive does not refute)."""
        return any(v is False for v in self.verdicts.values())

    def inconclusive(self) -> bool:
        return any(v == "inconclusive" for v in self.verdicts.values())

    def to_dict(self):
        return {
            "ell": self.ell,
            "e": self.e,
            "jrange": self.jrange,
            "verdicts": {str(j): v for j, v in self.verdicts.items()},
            "ok": self.ok,
            "vacuous": self.vacuous,
        }


def check_ext_vanishing(E: PresentedModule, t_cap: int = DEFAULT_T_CAP) -> ExtVanishingReport:
    """Ext^{j+1}(E^j, R) = 0 for 1 <= j <= ell-e-1 (vacuous when the range is empty)."""
    ell = analytic_spread(E)
    e = rank(E)
    js = list(range(1, ell - e))
    verdicts = {}
    ok = True
    for j in js:
        try:
            Ej = graded_component(E, j, t_cap)
        except CapExceededError:
            verdicts[j] = "inconclusive"
            ok = False
            continue
        _, iszero = ext_module(Ej, j + 1)
        verdicts[j] = iszero
        if not iszero:
            ok = False
    return ExtVanishingReport(ell, e, js, verdicts, ok, vacuous=not js)


# -- Cohen-Macaulayness of the Rees ring ---------------------------------------------------


@dataclass
class CmReesVerdict:
    cm: bool
    depth: int
    dim: int
    note: str = "CM implies (S_2); a non-CM verdict does not refute (S_2)"

    def to_dict(self):
        return {"cm": self.cm, "depth": self.depth, "dim": self.dim, "note": self.note}


def check_cm_rees(E: PresentedModule) -> CmReesVerdict:
    """Depth = dim test for R(E) over the ambient polynomial ring on x's and T's.

    The big-ring resolution dominates the cost, so the verdict is cached on
    the module."""
    cached = E._cache.get("cm_rees")
    if cached is not None:
        return cached
    rp = rees_package(E)
    big = rp.big_ring
    rees = rp.rees_ideal()
    # present on the reduced basis: its elements are homogeneous
    Q = cyclic_module(big, Ideal(big, rees.groebner_basis()))
    pd = projective_dimension(Q)
    dep = big.nvars - pd
    dim = krull_dimension(rees)
    verdict = CmReesVerdict(cm=dep == dim, depth=dep, dim=dim)
    E._cache["cm_rees"] = verdict
    return verdict


# -- hypothesis report ------------------------------------------------------------------


@dataclass
class HypothesisReport:
    module: str
    e: int
    ell: int
    d: int
    mu: int
    gs: GsVerdict
    ext: ExtVanishingReport
    cm_rees: CmReesVerdict
    orientability: str
    torsionfree: bool
    ok: bool

    def to_dict(self):
        return {
            "module": self.module,
            "e": self.e,
            "ell": self.ell,
            "d": self.d,
            "mu": self.mu,
            "gs": self.gs.to_dict(),
            "ext_vanishing": self.ext.to_dict(),
            "cm_rees": self.cm_rees.to_dict(),
            "orientability": self.orientability,
            "torsionfree": self.torsionfree,
            "ok": self.ok,
        }


def hypothesis_report(E: PresentedModule, label: str = "E") -> HypothesisReport:
    """The Theorem-4.2-style hypothesis suite for the balanced-core check."""
    e = rank(E)
    ell = analytic_spread(E)
    gs = check_gs(E, ell - e + 1)
    ext = check_ext_vanishing(E)
    cm = check_cm_rees(E)
    pd = projective_dimension(E)
    tf = is_torsionfree(E)
    ok = gs.ok and ext.ok and cm.cm and tf
    return HypothesisReport(
        module=label,
        e=e,
        ell=ell,
        d=E.ring.nvars,
        mu=mu(E),
        gs=gs,
        ext=ext,
        cm_rees=cm,
        orientability=f"finite projective dimension (pd = {pd})",
        torsionfree=tf,
        ok=ok,
    )


# -- free quotient criterion (Prop-4.3 style) ------------------------------------------------


@dataclass
class FreeQuotientVerdict:
    ok: bool
    mu_U: int
    ell: int
    K: Ideal
    entries_in_K: bool

    def to_dict(self):
        return {
            "ok": self.ok,
            "mu_U": self.mu_U,
            "ell": self.ell,
            "K": _ideal_str(self.K),
            "entries_in_K": self.entries_in_K,
        }


def _submodule_presentation(U: Submodule) -> PresentedModule:
    """U as an abstract module: relations among its generators inside E."""
    E = U.parent
    k = len(U.gens)
    degs = tuple(_vector_degree_or_none(v, E) for v in U.gens)
    syz = syzygies(list(U.gens) + list(E.relations), E.ring, E.n)
    cols = []
    for s in syz:
        head = tuple(s[:k])
        if any(head):
            cols.append(head)
    return PresentedModule(E.ring, degs, cols, _validate=False)


def verify_free_quotient(E: PresentedModule, U: Submodule) -> FreeQuotientVerdict:
    """U/(U:E)U free of rank ell over R/(U:E): checked as I_1(phi_U) <= (U:E)
    on a minimal ell-generator presentation of U."""
    ell = analytic_spread(E)
    P = minimal_presentation(_submodule_presentation(U))
    mu_U = P.n
    K = colon_into(U, E)
    if K.is_unit():
        # zero quotient ring: the criterion is vacuous
        return FreeQuotientVerdict(ok=True, mu_U=mu_U, ell=ell, K=K, entries_in_K=True)
    if mu_U != ell:
        return FreeQuotientVerdict(ok=False, mu_U=mu_U, ell=ell, K=K, entries_in_K=False)
    entries_ok = all(
        (not f) or K.contains(f) for col in P.relations for f in col
    )
    return FreeQuotientVerdict(ok=entries_ok, mu_U=mu_U, ell=ell, K=K, entries_in_K=entries_ok)


# -- balanced-core equivalences ------------------------------------------------------------


@dataclass
class BalancedReport:
    status: str  # ok | failed-hypothesis | partial
    hypothesis: HypothesisReport
    reductions: int
    seed: object
    K_values: list
    independent: bool | None  # (iii): (U:E) same for all sampled U
    products_equal: bool | None  # (ii): (U:E)U = (U:E)E for each sample
    equals_core: bool | None  # (ii): these equal the Monte Carlo core
    core_samples: int | None
    core_label: str | None

    def to_dict(self):
        return {
            "status": self.status,
            "hypothesis": self.hypothesis.to_dict(),
            "reductions": self.reductions,
            "seed": self.seed,
            "K_values": self.K_values,
            "independent": self.independent,
            "products_equal": self.products_equal,
            "equals_core": self.equals_core,
            "core_samples": self.core_samples,
            "core_label": self.core_label,
        }


def verify_balanced(E: PresentedModule, reductions: int, rng=None, core_samples: int = 12) -> BalancedReport:
    """Machine form of the balanced-core equivalences.

    Samples minimal reductions U_i, sets K_i = (U_i : E), and reports whether
    (a) all K_i agree, (b) K_i*U_i = K_i*E as submodules, (c) these equal the
    Monte Carlo core.  A refuted hypothesis gives status failed-hypothesis
    and no equivalence is asserted; an inconclusive sub-computation (a degree
    cap, a non-stabilizing core) marks the report partial instead.
    """
    seed = rng
    rng = _rng(rng)
    hyp = hypothesis_report(E)
    if not hyp.ok:
        status = "partial" if (hyp.ext.inconclusive() and not hyp.ext.refuted()
                               and hyp.gs.ok and hyp.cm_rees.cm and hyp.torsionfree) else "failed-hypothesis"
        return BalancedReport(
            status=status,
            hypothesis=hyp,
            reductions=reductions,
            seed=seed,
            K_values=[],
            independent=None,
            products_equal=None,
            equals_core=None,
            core_samples=None,
            core_label=None,
        )
    Us = [random_reduction(E, rng=rng) for _ in range(reductions)]
    Ks = [colon_into(U, E) for U in Us]
    independent = all(K == Ks[0] for K in Ks[1:])
    products = []
    KEs = []
    for U, K in zip(Us, Ks):
        KE = ideal_times_module(K, E)
        KU = ideal_times_submodule(K, U)
        KEs.append(KE)
        products.append(KE == KU)
    products_equal = all(products)
    try:
        core, used = core_monte_carlo(E, samples=core_samples, stabilization_window=3, rng=rng)
        equals_core = all(KE == core for KE in KEs)
        status = "ok"
    except RetryExhaustedError:
        used = None
        equals_core = None
        status = "partial"
    core_label = (
        "confirmed by balanced equivalences"
        if independent and products_equal and equals_core
        else "Monte Carlo upper approximation"
    )
    return BalancedReport(
        status=status,
        hypothesis=hyp,
        reductions=reductions,
        seed=seed,
        K_values=[_ideal_str(K) for K in Ks],
        independent=independent,
        products_equal=products_equal,
        equals_core=equals_core,
        core_samples=used,
        core_label=core_label,
    )


# -- projective-dimension-one core formula ----------------------------------------------------


@dataclass
class Pd1CoreVerdict:
    status: str  # ok | hypotheses-unmet
    pd: int
    torsionfree: bool
    gs_ok: bool
    r_value: int | None
    r_bound: int
    fitting_equals_core: bool | None
    colons_equal_fitting: bool | None
    fitt: list | None

    def to_dict(self):
        return {
            "status": self.status,
            "pd": self.pd,
            "torsionfree": self.torsionfree,
            "gs_ok": self.gs_ok,
            "r_value": self.r_value,
            "r_bound": self.r_bound,
            "fitting_equals_core": self.fitting_equals_core,
            "colons_equal_fitting": self.colons_equal_fitting,
            "fitting_ideal": self.fitt,
        }


def verify_pd1_core(E: PresentedModule, rng=None, samples: int = 5) -> Pd1CoreVerdict:
    """core(E) = Fitt_ell(E)*E and (U:E) = Fitt_ell(E), gated on pd = 1,
    torsionfreeness, G_{ell-e+1}, and the confirmed bound r(E) <= ell-e."""
    rng = _rng(rng)
    e = rank(E)
    ell = analytic_spread(E)
    pd = projective_dimension(E)
    tf = is_torsionfree(E)
    gs = check_gs(E, ell - e + 1)
    bound = ell - e
    U = random_reduction(E, rng=rng)
    r = reduction_number(U, E)
    if pd != 1 or not tf or not gs.ok or not r.exact or r.value > bound:
        return Pd1CoreVerdict(
            status="hypotheses-unmet",
            pd=pd,
            torsionfree=tf,
            gs_ok=gs.ok,
            r_value=r.value if r.exact else None,
            r_bound=bound,
            fitting_equals_core=None,
            colons_equal_fitting=None,
            fitt=None,
        )
    F = fitting_ideal(E, ell)
    core, _ = core_monte_carlo(E, rng=rng)
    fit_core = ideal_times_module(F, E) == core
    colons_ok = True
    for _ in range(samples):
        Ui = random_reduction(E, rng=rng)
        if colon_into(Ui, E) != F:
            colons_ok = False
            break
    return Pd1CoreVerdict(
        status="ok",
        pd=pd,
        torsionfree=tf,
        gs_ok=gs.ok,
        r_value=r.value,
        r_bound=bound,
        fitting_equals_core=fit_core,
        colons_equal_fitting=colons_ok,
        fitt=_ideal_str(F),
    )


# -- ideal modules (Prop-2.7 style) ------------------------------------------------------------


@dataclass
class IdealModuleVerdicts:
    mode: str
    e: int
    ell_I: int
    ell_E: int
    spread_additive: bool
    nonfree_codim: int
    height_I: int
    nonfree_matches_height: bool
    mu_I: int
    mu_E: int
    mu_expected: int
    mu_exceeds_spread: bool

    def to_dict(self):
        return {
            "mode": self.mode,
            "e": self.e,
            "ell_I": self.ell_I,
            "ell_E": self.ell_E,
            "spread_additive": self.spread_additive,
            "nonfree_codim": self.nonfree_codim,
            "height_I": self.height_I,
            "nonfree_matches_height": self.nonfree_matches_height,
            "mu_I": self.mu_I,
            "mu_E": self.mu_E,
            "mu_expected": self.mu_expected,
            "mu_exceeds_spread": self.mu_exceeds_spread,
        }


def build_ideal_module(I: Ideal, e: int, mode: str = "plus_free"):
    """I + R(-D)^{e-1} or I + ... + I (e times), with the spread/codim verdicts."""
    if e < 1:
        raise ModcoreError("rank must be at least 1")
    if mode not in ("plus_free", "power_sum"):
        raise ModcoreError(f"unknown mode {mode!r}")
    EI = module_from_ideal(I)
    D = EI.common_degree()
    if D is None:
        raise DegreeMixError("ideal generators must share one degree")
    if mode == "plus_free":
        E = direct_sum(EI, free_module(I.ring, e - 1), twist=D) if e > 1 else EI
        mu_expected = mu(EI) + e - 1
    else:
        E = EI
        for _ in range(e - 1):
            E = direct_sum(E, EI)
        mu_expected = e * mu(EI)
    ell_I = analytic_spread(EI)
    ell_E = analytic_spread(E)
    ht_I = height(I)
    codim = height(fitting_ideal(E, e))
    verdicts = IdealModuleVerdicts(
        mode=mode,
        e=e,
        ell_I=ell_I,
        ell_E=ell_E,
        spread_additive=ell_E == ell_I + e - 1,
        nonfree_codim=codim,
        height_I=ht_I,
        nonfree_matches_height=codim == ht_I,
        mu_I=mu(EI),
        mu_E=mu(E),
        mu_expected=mu_expected,
        mu_exceeds_spread=mu(E) > ell_E,
    )
    return E, verdicts

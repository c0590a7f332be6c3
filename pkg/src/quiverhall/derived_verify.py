"""Mechanical verification of derived-side identities.

Every verifier materializes both sides of its identity over an explicit
truncation profile and compares exact rationals pointwise.  Truncation
honesty uses a margin probe: pools are rebuilt over an enlarged profile and
any difference between the core-pool and margin-pool values is reported as
a residual (status "residual"), distinct from a genuine failure.
"""

from __future__ import annotations

from fractions import Fraction

from .abelian_verify import inversion_tuples
from .catalog import IndecompCatalog
from .derived import (
    DerivedClass,
    TruncationProfile,
    cone_spectrum,
    d_element,
    d_u,
    dclass_k0,
    dclass_total_dim,
    dhall_number,
    make_dclass,
    materialize_product,
    module_dclass,
    product_pointwise,
    profile_classes,
    shift_dclass,
)
from .dstability import (
    StabilityCondition,
    StandardHeart,
    build_SS_sigma,
    d_is_grouplike,
    derived_charge,
    hn_filtration_derived,
    is_sigma_semistable,
    is_sigma_stable,
    nonzero_profile_classes,
    occupied_phase_points,
    phi_m_of,
    semistable_classes,
    sigma_phase,
)
from .errors import CommutationFailure
from .quivers import dim_add, dim_sub
from .reports import class_json, failure, make_report
from . import rayalgebra as ra

_A2_TRIANGLES = (
    # (sub, ext, quot) as (id, shift offset): rotations of S2 -> P1 -> S1.
    (("2.2", 0), ("1.2", 0), ("1.1", 0)),
    (("1.2", 0), ("1.1", 0), ("2.2", 1)),
    (("1.1", 0), ("2.2", 1), ("1.2", 1)),
)


def margin_profile(profile: TruncationProfile, window_pad: int = 1, dim_pad: int = 2) -> TruncationProfile:
    return TruncationProfile(profile.lo - window_pad, profile.hi + window_pad, profile.dim_cap + dim_pad)


# ---------------------------------------------------------------------------
# Unit products along HN towers
# ---------------------------------------------------------------------------


def verify_lemma_wc(cat: IndecompCatalog, sigma: StabilityCondition, p: int, profile: TruncationProfile) -> dict:
    """∏_i F^{X_i}_{X_{i−1}, A_i} = 1 along the HN tower of every in-profile
    class (X_0 = 0, A_i the HN factors from the top phase down)."""
    failures = []
    checked = 0
    for x in nonzero_profile_classes(cat, profile):
        hn = hn_filtration_derived(cat, sigma, x, p)
        prod = Fraction(1)
        prev: DerivedClass = ()
        for (a, _), xi in zip(hn.factors, hn.partials):
            prod *= dhall_number(cat, prev, a, xi, p)
            prev = xi
        checked += 1
        if prod != 1:
            failures.append(failure(x, prod, 1))
    return make_report(
        "lemma-wc", profile.dim_cap, failures, window=[profile.lo, profile.hi], checked=checked
    )


# ---------------------------------------------------------------------------
# HN-fine expansions (chains of refined semistable elements)
# ---------------------------------------------------------------------------


def _chain_evaluator(cat: IndecompCatalog, sigma: StabilityCondition, pool, p: int):
    """Pointwise evaluator of Σ over strictly-phase-descending chains of
    semistable characteristic functions.

    pool: list of (class, phase).  Returns rec(y, bound) — a dict mapping
    the window of the chain's last factor to the chain sum Σ ∏ F values at
    target y, over chains whose leading phase is < bound (None = no bound).
    Peeling the first factor M off a product at Y contributes
    F^Y_{M,N}·(tail at N) over cone classes N of morphisms M → Y; phases
    strictly decrease along a chain, so recursion depth is bounded by the
    number of distinct pool phases.  Targets outside the interval category
    of the allowed pool phases are zero and pruned at entry.
    """
    memo: dict = {}
    bottom = min((ph for _, ph in pool), default=None)

    def rec(y: DerivedClass, bound) -> dict:
        if not y:
            return {}
        key = (y, bound)
        if key in memo:
            return memo[key]
        hn = hn_filtration_derived(cat, sigma, y, p)
        if bottom is None or hn.phi_minus < bottom or (bound is not None and hn.phi_plus >= bound):
            memo[key] = {}
            return memo[key]
        out: dict[int, Fraction] = {}
        for m_cls, ph in pool:
            if bound is not None and not ph < bound:
                continue
            for n in cone_spectrum(cat, m_cls, y, p):
                fv = dhall_number(cat, m_cls, n, y, p)
                if not fv:
                    continue
                if not n:
                    out[ph.window] = out.get(ph.window, Fraction(0)) + fv
                else:
                    for w, v in rec(n, ph).items():
                        out[w] = out.get(w, Fraction(0)) + fv * v
        out = {w: v for w, v in out.items() if v}
        memo[key] = out
        return out

    return rec


def verify_hn_fine(
    cat: IndecompCatalog,
    sigma: StabilityCondition,
    p: int,
    profile: TruncationProfile,
    gammas,
    ms,
    window_pad: int = 1,
    dim_pad: int = 2,
) -> dict:
    """Two expansions over strictly-descending chains of refined semistable
    elements: the class characteristic function κ_γ equals the chain sum
    over all last windows, and its window-m refinement ^mκ_γ equals the
    chain sum restricted to last window m."""
    gammas = [tuple(g) for g in gammas]
    marg = margin_profile(profile, window_pad, dim_pad)
    rec_core = _chain_evaluator(cat, sigma, semistable_classes(cat, sigma, profile, p), p)
    rec_full = _chain_evaluator(cat, sigma, semistable_classes(cat, sigma, marg, p), p)
    failures = []
    residuals = []
    checked = 0
    for x in nonzero_profile_classes(cat, profile):
        if dclass_k0(cat, x) not in gammas:
            continue
        full = rec_full(x, None)
        core = rec_core(x, None)
        hn = hn_filtration_derived(cat, sigma, x, p)
        v_full = sum(full.values(), Fraction(0))
        checked += 1
        if v_full != 1:
            failures.append(failure(x, v_full, 1))
        for m in ms:
            lhs = Fraction(1 if hn.phi_minus.window == m else 0)
            rhs = full.get(m, Fraction(0))
            checked += 1
            if rhs != lhs:
                failures.append(
                    {"class": class_json(x), "lhs": str(rhs), "rhs": str(lhs), "m": m}
                )
        if full != core:
            residuals.append({"class": class_json(x), "margin_difference": {
                str(w): str(full.get(w, Fraction(0)) - core.get(w, Fraction(0)))
                for w in set(full) | set(core)
                if full.get(w, Fraction(0)) != core.get(w, Fraction(0))
            }})
    return make_report(
        "hn-fine",
        profile.dim_cap,
        failures,
        window=[profile.lo, profile.hi],
        residual_tuples=residuals,
        checked=checked,
        extra={"gammas": [list(g) for g in gammas], "ms": list(ms)},
    )


# ---------------------------------------------------------------------------
# Inversion: refined semistables from refined class characteristic functions
# ---------------------------------------------------------------------------


def _carrier_dims(gamma):
    """(abelian dimension vector, shift parity) of the single shifted copy of
    the module category carrying the semistable classes of γ.

    Semistable classes are shifts of heart objects, so their classes are
    componentwise ≥ 0 («plus», even shifts) or ≤ 0 («minus», odd shifts);
    a mixed-sign γ is carried by no shifted copy and (None, None) is
    returned.
    """
    if all(g >= 0 for g in gamma):
        return tuple(gamma), 0
    if all(g <= 0 for g in gamma):
        return tuple(-g for g in gamma), -1
    return None, None


def _heart_kappa(cat: IndecompCatalog, d, shift: int, q: int):
    """Characteristic function of the module classes of dimension vector d,
    placed at one shift."""
    coeffs = {
        module_dclass(cat, c, shift): 1
        for c in cat.all_classes(sum(d))
        if c and cat.class_dims(c) == d
    }
    return d_element(q, coeffs)


def verify_reineke_inversion_derived(
    cat: IndecompCatalog,
    sigma: StabilityCondition,
    p: int,
    profile: TruncationProfile,
    gammas,
    ms,
    window_pad: int = 1,
    dim_pad: int = 1,
) -> dict:
    """Inverts the HN-fine expansion: ^mδ_γ as an alternating sum of ordered
    products of refined class elements ^m₁κ_γ₁ ⋯ ^mₙκ_γₙ with
    (Σγ_i, min m_i) = (γ, m), subject to the proper-prefix condition
    φ_{min(m₁..m_i)}(γ₁+…+γ_i) > φ_m(γ) for i < n.

    The unrestricted tuple family is not pointwise summable: partial sums
    under any dimension/length cap oscillate with growing amplitude (the
    prefix condition no longer telescopes once charges wrap past the
    negative real axis, and cone classes of non-injective maps re-enter the
    support at every length), so a directly truncated enumeration would
    only ever report residuals.  Two finite facets are verified instead;
    together they carry the identity's full content over the profile.

    (a) Defining recursion ^mδ_γ = ^mκ_γ − Σ(chains of length ≥ 2): the
        window-m class element minus all strictly-phase-descending chains
        of two or more refined semistable elements ending in window m.
        This is the HN-fine expansion solved for its leading term, and it
        determines ^mδ_γ from the ^mκ_γ uniquely by induction on the
        number of occupied phases.  Chain pools are margin-probed; any
        core/margin disagreement is a residual.

    (b) Closed alternating form on the carrier: the semistable classes of a
        plus-sign (resp. minus-sign) γ all lie in the single shifted module
        category at shift 2m (resp. 2m − 1), where every window side
        condition holds automatically and the prefix condition transports
        to the abelian one on |γ| (negating a charge shifts its phase by
        exactly one window, preserving strict comparisons), so the tuple
        family collapses to the finite abelian composition family and the
        sum is exact — no truncation, no residuals.  Products are still
        evaluated with derived structure constants at derived classes.
        Mixed-sign γ admit no carrier and no semistable classes at all, so
        ^mδ_γ must vanish on the profile; that support statement is what
        rules the cross-carrier tuples out of facet (b), and it is asserted
        directly.  Facet (b) requires the standard heart (carrier geometry
        of tilted hearts differs) and is skipped with a note otherwise.

    Both printed sign conventions are evaluated on facet (b) — (−1)^(n−1)
    against ^mδ_γ and (−1)^n against −^mδ_γ — and the report records which
    one balances.
    """
    gammas = [tuple(g) for g in gammas]
    marg = margin_profile(profile, window_pad, dim_pad)
    pools = {
        "core": semistable_classes(cat, sigma, profile, p),
        "full": semistable_classes(cat, sigma, marg, p),
    }
    evaluators = {k: _chain_evaluator(cat, sigma, pool, p) for k, pool in pools.items()}

    def chain_tail(which: str, x: DerivedClass) -> dict:
        """Window of the last factor ↦ Σ ∏F over descending chains of
        length ≥ 2 at x (the first factor is peeled explicitly and the
        remainder is required to be nonzero)."""
        out: dict[int, Fraction] = {}
        rec = evaluators[which]
        for m_cls, ph in pools[which]:
            for n in cone_spectrum(cat, m_cls, x, p):
                if not n:
                    continue
                fv = dhall_number(cat, m_cls, n, x, p)
                if not fv:
                    continue
                for w, v in rec(n, ph).items():
                    out[w] = out.get(w, Fraction(0)) + fv * v
        return out

    failures = []
    residuals = []
    checked = 0
    gamma_set = set(gammas)

    # --- facet (a): defining recursion over the profile -------------------
    for x in nonzero_profile_classes(cat, profile):
        if dclass_k0(cat, x) not in gamma_set:
            continue
        hn = hn_filtration_derived(cat, sigma, x, p)
        ss_window = hn.phi_minus.window if len(hn.factors) == 1 else None
        tail_full = chain_tail("full", x)
        tail_core = chain_tail("core", x)
        for m in ms:
            delta_val = Fraction(1 if ss_window == m else 0)
            kappa_val = Fraction(1 if hn.phi_minus.window == m else 0)
            rhs = kappa_val - tail_full.get(m, Fraction(0))
            checked += 1
            if rhs != delta_val:
                failures.append(
                    {
                        "class": class_json(x),
                        "lhs": str(delta_val),
                        "rhs": str(rhs),
                        "gamma": list(dclass_k0(cat, x)),
                        "m": m,
                        "which": "defining-recursion",
                    }
                )
            gap = tail_full.get(m, Fraction(0)) - tail_core.get(m, Fraction(0))
            if gap:
                residuals.append(
                    {
                        "class": class_json(x),
                        "gamma": list(dclass_k0(cat, x)),
                        "m": m,
                        "margin_difference": str(gap),
                    }
                )

    # --- facet (b): closed alternating form on the carrier ----------------
    balanced = {"(-1)^n": 0, "(-1)^(n-1)": 0}
    carriers = []
    closed_form = isinstance(sigma.heart, StandardHeart)
    for gamma in gammas:
        d, parity = _carrier_dims(gamma)
        if d is None:
            carriers.append({"gamma": list(gamma), "carrier": None})
            for x in nonzero_profile_classes(cat, profile):
                if dclass_k0(cat, x) != gamma:
                    continue
                checked += 1
                if is_sigma_semistable(cat, sigma, x, p):
                    failures.append(
                        {
                            "class": class_json(x),
                            "lhs": "semistable",
                            "rhs": "no semistable class has a mixed-sign K0 class",
                            "gamma": list(gamma),
                            "which": "mixed-class-support",
                        }
                    )
            continue
        if not closed_form:
            continue
        z = sigma.heart.z
        targets = [c for c in cat.all_classes(sum(d)) if c and cat.class_dims(c) == d]
        for m in ms:
            shift = 2 * m + parity
            rhs_at = {t: Fraction(0) for t in targets}
            tuple_count = 0
            for parts in inversion_tuples(z, d):
                tuple_count += 1
                factors = [_heart_kappa(cat, part, shift, p) for part in parts]
                sign = (-1) ** (len(parts) - 1)
                memo: dict = {}
                for t in targets:
                    rhs_at[t] += sign * product_pointwise(
                        cat, factors, module_dclass(cat, t, shift), p, memo=memo
                    )
            for t in targets:
                td = module_dclass(cat, t, shift)
                hn = hn_filtration_derived(cat, sigma, td, p)
                lhs = Fraction(
                    1 if len(hn.factors) == 1 and hn.phi_minus.window == m else 0
                )
                checked += 1
                if rhs_at[t] == lhs:
                    balanced["(-1)^(n-1)"] += 1
                if -rhs_at[t] == lhs and lhs != 0:
                    balanced["(-1)^n"] += 1
                if rhs_at[t] != lhs:
                    failures.append(
                        {
                            "class": class_json(td),
                            "lhs": str(lhs),
                            "rhs": str(rhs_at[t]),
                            "gamma": list(gamma),
                            "m": m,
                            "which": "carrier-closed-form",
                        }
                    )
            carriers.append(
                {
                    "gamma": list(gamma),
                    "m": m,
                    "carrier_shift": shift,
                    "tuples": tuple_count,
                    "targets": len(targets),
                }
            )

    extra = {
        "sign_convention": "(-1)^(n-1)",
        "balanced_counts": balanced,
        "carriers": carriers,
    }
    if not closed_form:
        extra["closed_form"] = "skipped: carrier enumeration is implemented for the standard heart"
    return make_report(
        "reineke-derived",
        profile.dim_cap,
        failures,
        window=[profile.lo, profile.hi],
        residual_tuples=residuals,
        checked=checked,
        extra=extra,
    )


# ---------------------------------------------------------------------------
# Wall crossing: the ordered product of semistable factors is the unit
# ---------------------------------------------------------------------------


def _capacity_engage(cat: IndecompCatalog, factors):
    """Sound pruning for unit-product checks.  A branch is dead once (a) the
    remainder's dimension exceeds what the remaining factors can consume
    (each peel F^Y_{M,N} ≠ 0 forces dim N ≥ dim Y − dim M), or (b) the
    remainder's K₀ class leaves the subset sums of the remaining supports
    (every term of ∏_{i>j} SS_i is carried by such a sum)."""
    maxdims = [
        max((dclass_total_dim(cat, c) for c in f.coeffs if c), default=0) for f in factors
    ]
    suffix = [0] * (len(factors) + 1)
    for j in range(len(factors) - 1, -1, -1):
        suffix[j] = suffix[j + 1] + maxdims[j]
    zero = (0,) * cat.quiver.n
    reach = [None] * (len(factors) + 1)
    reach[len(factors)] = {zero}
    for j in range(len(factors) - 1, -1, -1):
        opts = {zero} | {dclass_k0(cat, c) for c in factors[j].coeffs if c}
        reach[j] = {dim_add(s, o) for s in reach[j + 1] for o in opts}

    def engage(j, y, m):
        if dclass_total_dim(cat, y) - dclass_total_dim(cat, m) > suffix[j + 1]:
            return False
        return dim_sub(dclass_k0(cat, y), dclass_k0(cat, m)) in reach[j + 1]

    def feasible(j, y):
        if dclass_total_dim(cat, y) > suffix[j]:
            return False
        return dclass_k0(cat, y) in reach[j]

    return engage, feasible


def verify_wall_crossing_derived(
    cat: IndecompCatalog,
    sigma: StabilityCondition,
    p: int,
    profile: TruncationProfile,
    window_pad: int = 1,
    dim_pad: int = 2,
    grouplike_profile: TruncationProfile | None = None,
) -> dict:
    """(∏_{φ desc} SS^σ_φ)(X) = 1 for every in-profile class X, where SS^σ_φ
    is the unit plus the characteristic function of phase-φ semistables.
    Factors are built over the core and over a margin profile; value
    disagreements between the two pools are residuals.  Each core factor is
    also checked to be grouplike."""
    marg = margin_profile(profile, window_pad, dim_pad)

    def factor_list(prof):
        phases = occupied_phase_points(cat, sigma, prof, p)
        return phases, [build_SS_sigma(cat, sigma, phi, prof, p) for phi in phases]

    def chain_feasible(phases, cap_feasible):
        """States outside the interval category of the remaining phases are
        zero: the suffix product is carried by classes whose HN phases lie
        in [min pool phase, current factor phase]."""
        bottom = phases[-1]

        def feas(j, y):
            if not y:
                return True
            if not cap_feasible(j, y):
                return False
            hn = hn_filtration_derived(cat, sigma, y, p)
            return hn.phi_minus >= bottom and hn.phi_plus <= phases[j]

        return feas

    phases_core, core_factors = factor_list(profile)
    phases_full, full_factors = factor_list(marg)
    engage_core, cap_core = _capacity_engage(cat, core_factors)
    engage_full, cap_full = _capacity_engage(cat, full_factors)
    feasible_core = chain_feasible(phases_core, cap_core)
    feasible_full = chain_feasible(phases_full, cap_full)
    memo_core: dict = {}
    memo_full: dict = {}
    failures = []
    residuals = []
    checked = 0
    for x in profile_classes(cat, profile):
        v_full = product_pointwise(cat, full_factors, x, p, engage=engage_full, feasible=feasible_full, memo=memo_full)
        v_core = product_pointwise(cat, core_factors, x, p, engage=engage_core, feasible=feasible_core, memo=memo_core)
        checked += 1
        if v_full != 1:
            failures.append(failure(x, v_full, Fraction(1)))
        if v_full != v_core:
            residuals.append({"class": class_json(x), "margin_difference": str(v_core - v_full)})
    gl_profile = grouplike_profile or profile
    grouplike_ok = 0
    for f in core_factors:
        if d_is_grouplike(cat, f, gl_profile):
            grouplike_ok += 1
        else:
            failures.append(
                {"class": [], "lhs": "not grouplike", "rhs": "grouplike", "factor_support": [class_json(c) for c in sorted(f.coeffs)]}
            )
    return make_report(
        "wall-crossing-derived",
        profile.dim_cap,
        failures,
        window=[profile.lo, profile.hi],
        residual_tuples=residuals,
        checked=checked,
        extra={"ss_factors": len(core_factors), "grouplike_ok": grouplike_ok},
    )


# ---------------------------------------------------------------------------
# Left part: commuting even-shift rays and the exp/product identity
# ---------------------------------------------------------------------------


def verify_left_part(
    cat: IndecompCatalog,
    sigma: StabilityCondition,
    p: int,
    profile: TruncationProfile,
    ray_ids,
    weight_cap: int = 4,
) -> dict:
    """On each ray through a stable generator's charge: (a) even-shift ray
    classes commute in the q → 1 specialization (their finite-q products are
    cross-checked against the general engine, and the finite-q commutator
    defect is reported); (b) exp(Σ_γ ε^σ_γ) = ∏_m SS^σ_{φ+2m} holds exactly
    in the weight-truncated ray algebra at q = 1, with the windowed Joyce
    elements extracted two independent ways (logarithm of the single-window
    series, and the alternating 1/n chain sum)."""
    m_lo = -(-profile.lo // 2)  # ceil(lo/2)
    m_hi = profile.hi // 2
    if m_lo > m_hi:
        raise ValueError(f"profile window [{profile.lo}, {profile.hi}] holds no even shift")
    windows = list(range(m_lo, m_hi + 1))
    failures = []
    checked = 0
    finite_q_witnesses = []
    for raw_id in ray_ids:
        s_id = cat.resolve_alias(raw_id)
        s_class = ((s_id, 0),)
        if not is_sigma_stable(cat, sigma, s_class, p):
            raise CommutationFailure(f"{raw_id} is not stable for this condition; its ray is not available")
        base = sigma_phase(cat, sigma, s_class, p)

        # Route-tie: the semistables on this ray inside the profile are
        # exactly the even-shift powers of the generator.
        ray_dir = base.ray()
        expected = set()
        for m in windows:
            for d in range(1, weight_cap + 1):
                c = ra.ray_to_dclass(cat, s_id, ra.ray_vec([(m, d)]))
                if profile.contains(cat, c):
                    expected.add(c)
                    ph = sigma_phase(cat, sigma, c, p)
                    assert ph == base.shifted(2 * m), f"ray class {c} has phase {ph}, expected {base.shifted(2 * m)}"
        actual = {
            c
            for c, ph in semistable_classes(cat, sigma, profile, p)
            if ph.ray() == ray_dir and ph.window in windows and dclass_k0(cat, c) != (0,) * cat.quiver.n
            and all(i == s_id for i, _ in c)
        }
        on_ray_others = {
            c
            for c, ph in semistable_classes(cat, sigma, profile, p)
            if ph.ray() == ray_dir and ph.window in windows and any(i != s_id for i, _ in c)
        }
        checked += 1
        if actual != expected or on_ray_others:
            failures.append(
                {
                    "class": [[s_id, 0]],
                    "lhs": f"ray semistables {sorted(actual | on_ray_others)}",
                    "rhs": f"expected {sorted(expected)}",
                }
            )
            continue

        # (a) commutation at q = 1 over single-window vectors; finite-q
        # engine cross-check and commutator defect on a sample pair.
        vecs = [
            ra.ray_vec([(m, d)]) for m in windows for d in range(1, weight_cap + 1)
        ]
        for a in vecs:
            for b in vecs:
                c_ab = ra.ray_coeff(a, b, 1)
                c_ba = ra.ray_coeff(b, a, 1)
                checked += 1
                if c_ab != c_ba:
                    raise CommutationFailure(
                        f"ray through {raw_id}: q=1 coefficients differ on {a}, {b}: {c_ab} vs {c_ba}"
                    )
                if ra.ray_weight(ra.ray_add(a, b)) <= weight_cap:
                    da = ra.ray_to_dclass(cat, s_id, a)
                    db = ra.ray_to_dclass(cat, s_id, b)
                    if profile.contains(cat, da) and profile.contains(cat, db):
                        got = materialize_product(cat, d_u(p, da), d_u(p, db), p)
                        want_cls = ra.ray_to_dclass(cat, s_id, ra.ray_add(a, b))
                        assert got.coeffs == {want_cls: ra.ray_coeff(a, b, p)}, (
                            f"engine product disagrees with ray algebra on {a}·{b}"
                        )
                if a != b and ra.ray_coeff(a, b, p) != ra.ray_coeff(b, a, p) and len(finite_q_witnesses) < 3:
                    finite_q_witnesses.append(
                        {
                            "ray": raw_id,
                            "a": list(a),
                            "b": list(b),
                            "ab": str(ra.ray_coeff(a, b, p)),
                            "ba": str(ra.ray_coeff(b, a, p)),
                        }
                    )

        # (b) exp/product identity at q = 1, truncated at the weight cap.
        ss_series = []
        for m in windows:
            ss_series.append(
                {ra.ray_vec([(m, d)]): Fraction(1) for d in range(weight_cap + 1)}
            )
        eps_total: dict = {}
        for m, ss_m in zip(windows, ss_series):
            log_route = ra.ray_log(ss_m, 1, weight_cap)
            chain_route: dict = {}
            # alternating 1/n sums over ordered same-window decompositions
            def chains(prefix_weight, prefix_elem, n_parts):
                nonlocal chain_route
                for d in range(1, weight_cap - prefix_weight + 1):
                    term = ra.ray_mul(prefix_elem, {ra.ray_vec([(m, d)]): Fraction(1)}, 1, weight_cap)
                    chain_route = ra.ray_addel(
                        chain_route,
                        ra.ray_scale(term, Fraction((-1) ** n_parts, n_parts + 1)),
                    )
                    chains(prefix_weight + d, term, n_parts + 1)

            chains(0, {(): Fraction(1)}, 0)
            checked += 1
            if log_route != chain_route:
                failures.append(
                    {
                        "class": [[s_id, 2 * m]],
                        "lhs": f"log route {log_route}",
                        "rhs": f"chain route {chain_route}",
                    }
                )
            eps_total = ra.ray_addel(eps_total, log_route)
        lhs = ra.ray_exp(eps_total, 1, weight_cap)
        rhs = {(): Fraction(1)}
        for ss_m in reversed(ss_series):  # descending phase order
            rhs = ra.ray_mul(rhs, ss_m, 1, weight_cap)
        checked += 1
        if lhs != rhs:
            failures.append(
                {
                    "class": [[s_id, 0]],
                    "lhs": f"exp(Σ ε) = {lhs}",
                    "rhs": f"∏ SS = {rhs}",
                }
            )
    return make_report(
        "left-part",
        weight_cap,
        failures,
        window=[profile.lo, profile.hi],
        checked=checked,
        extra={"finite_q_noncommutation": finite_q_witnesses, "rays": list(ray_ids)},
    )


def verify_left_part_direction(
    cat: IndecompCatalog,
    sigma: StabilityCondition,
    p: int,
    profile: TruncationProfile,
    direction,
    weight_cap: int = 4,
) -> dict:
    """Ray picked by an exact direction pair instead of a generator id.

    The stable generators whose charges lie on the ray are resolved and
    handed to `verify_left_part`; a ray containing no semistable class makes
    both sides of the identity the unit series, which passes trivially.
    """
    re, im = Fraction(direction[0]), Fraction(direction[1])
    if re == 0 and im == 0:
        raise ValueError("ray direction must be nonzero")
    hits = []
    for e in cat.entries:
        c = ((e.id, 0),)
        ch = derived_charge(cat, sigma, dclass_k0(cat, c))
        # same open ray: positive proportionality of direction pairs
        if ch[0] * im == ch[1] * re and (ch[0] * re > 0 or ch[1] * im > 0):
            if is_sigma_stable(cat, sigma, c, p):
                hits.append(e.id)
    if not hits:
        report = make_report(
            "left-part",
            weight_cap,
            [],
            window=[profile.lo, profile.hi],
            checked=1,
            extra={"rays": [], "note": "ray contains no semistable class; both sides are the unit series"},
        )
        return report
    return verify_left_part(cat, sigma, p, profile, hits, weight_cap)


# ---------------------------------------------------------------------------
# Structural lemma suite
# ---------------------------------------------------------------------------


def check_lemma_suite_derived(
    cat: IndecompCatalog,
    sigmas,
    p: int,
    profile: TruncationProfile,
) -> dict:
    """Structural invariants across stability conditions: shift equivariance
    of HN data, direct sums semistable exactly for equal phases, stability
    implying indecomposability, phase monotonicity along the rotation
    triangles, and prime independence of HN factor sequences."""
    failures = []
    checked = 0
    classes = nonzero_profile_classes(cat, profile)
    for idx, sigma in enumerate(sigmas):
        for x in classes:
            hn = hn_filtration_derived(cat, sigma, x, p)
            for t in (-2, -1, 1, 2):
                shifted = shift_dclass(x, t)
                hn_t = hn_filtration_derived(cat, sigma, shifted, p)
                checked += 1
                if [
                    (shift_dclass(c, t), ph.shifted(t).sort_key) for c, ph in hn.factors
                ] != [(c, ph.sort_key) for c, ph in hn_t.factors]:
                    failures.append(
                        {"class": class_json(x), "lhs": f"shift {t} mismatch", "rhs": "equivariant", "sigma": idx}
                    )
            other = hn_filtration_derived(cat, sigma, x, 3 if p != 3 else 2)
            checked += 1
            if [(c, ph.sort_key) for c, ph in hn.factors] != [
                (c, ph.sort_key) for c, ph in other.factors
            ]:
                failures.append(
                    {"class": class_json(x), "lhs": "p-dependent HN", "rhs": "p-independent", "sigma": idx}
                )
            if is_sigma_stable(cat, sigma, x, p):
                checked += 1
                if len(x) != 1:
                    failures.append(
                        {"class": class_json(x), "lhs": "stable but decomposable", "rhs": "indecomposable", "sigma": idx}
                    )
        sems = semistable_classes(cat, sigma, profile, p)
        for a_cls, a_ph in sems:
            for b_cls, b_ph in sems:
                both = make_dclass(cat, a_cls + b_cls)
                if not profile.contains(cat, both):
                    continue
                ss = is_sigma_semistable(cat, sigma, both, p)
                checked += 1
                if ss != (a_ph == b_ph):
                    failures.append(
                        {"class": class_json(both), "lhs": f"sum semistable={ss}", "rhs": f"equal phases={a_ph == b_ph}", "sigma": idx}
                    )
        if cat.quiver.name == "a2":
            for (si, so), (ei, eo), (qi, qo) in _A2_TRIANGLES:
                for j in range(profile.lo, profile.hi + 1):
                    trio = [
                        ((si, so + j),),
                        ((ei, eo + j),),
                        ((qi, qo + j),),
                    ]
                    if not all(profile.contains(cat, t) for t in trio):
                        continue
                    if all(is_sigma_semistable(cat, sigma, t, p) for t in trio):
                        phs = [sigma_phase(cat, sigma, t, p) for t in trio]
                        checked += 1
                        if not (phs[0] <= phs[1] <= phs[2]):
                            failures.append(
                                {"class": [class_json(t) for t in trio], "lhs": str([str(q) for q in phs]), "rhs": "increasing along triangle", "sigma": idx}
                            )
    return make_report(
        "lemma-suite-derived",
        profile.dim_cap,
        failures,
        window=[profile.lo, profile.hi],
        checked=checked,
        extra={"sigmas": len(list(sigmas))},
    )

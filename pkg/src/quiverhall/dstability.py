"""Stability conditions on the bounded derived category.

A stability condition is specified by a heart (the standard module heart with
an abelian stability function, or one of the A2 tilted/semisimple hearts) and
exact-rational central charges on its generators, extended additively to the
Grothendieck group.  Phases are tracked as `PhasePoint`s — a window integer m
together with an exact direction — realizing real phases in (2m−1, 2m+1]
without floating point.

Two HN backends are provided.  The standard-heart backend splits an object
into per-shift module parts and runs the abelian HN algorithm in each shift;
the tilted backend resolves each indecomposable summand through the triangle
rotations among the three A2 indecomposables.  On the standard A2 heart both
backends run and must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .catalog import IndecompCatalog
from .derived import (
    DerivedClass,
    DHallElement,
    TruncationProfile,
    d_add,
    d_element,
    d_scale,
    dclass_k0,
    dhom_dim_formula,
    make_dclass,
    materialize_product,
    module_dclass,
    profile_classes,
    shift_dclass,
)
from .errors import (
    ImpossibleConfiguration,
    InvalidSpec,
    UndefinedPhase,
    UnsupportedHeart,
    ZeroObject,
)
from .stability import StabilityFunction, hn_filtration_abelian, is_stable
from .quivers import dim_add

# ---------------------------------------------------------------------------
# Phase points
# ---------------------------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class PhasePoint:
    """A real phase φ ∈ (2·window−1, 2·window+1] stored exactly.

    The direction pair is the central charge (re, im) up to positive scaling;
    the represented phase is window·2 + arg(re + i·im)/π with the argument
    taken in (−1, 1].  Ordering and equality compare the realized phase.
    """

    window: int
    re: Fraction
    im: Fraction

    def __post_init__(self):
        if self.re == 0 and self.im == 0:
            raise UndefinedPhase("phase point needs a nonzero direction")

    @property
    def _segment(self) -> int:
        # argument/π bands: (−1,0) < {0} < (0,1) < {1}
        if self.im < 0:
            return 0
        if self.im == 0:
            return 1 if self.re > 0 else 3
        return 2

    @property
    def sort_key(self):
        slope = Fraction(-self.re, 1) / self.im if self.im else Fraction(0)
        return (self.window, self._segment, slope)

    def __eq__(self, other):
        return isinstance(other, PhasePoint) and self.sort_key == other.sort_key

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __hash__(self):
        return hash(self.sort_key)

    def shifted(self, t: int) -> "PhasePoint":
        """The phase point of X[t] when self is the phase of X (φ ↦ φ + t)."""
        window, re, im = self.window, self.re, self.im
        if t % 2:
            steps = t
            while steps > 0:
                if im > 0 or (im == 0 and re < 0):
                    window += 1
                re, im = -re, -im
                steps -= 1
            while steps < 0:
                re, im = -re, -im
                if im > 0 or (im == 0 and re < 0):
                    window -= 1
                steps += 1
        else:
            window += t // 2
        return PhasePoint(window, re, im)

    def ray(self):
        """Direction up to positive scaling (ignores the window)."""
        key = self.sort_key
        return (key[1], key[2])

    def __repr__(self):
        return f"PhasePoint(window={self.window}, dir=({self.re}, {self.im}))"


def base_phase_point(re: Fraction, im: Fraction) -> PhasePoint:
    """Phase in (0, 1] of a heart object with charge in ℍ ∪ ℝ₋."""
    if not (im > 0 or (im == 0 and re < 0)):
        raise InvalidSpec(f"charge ({re}, {im}) is outside the admissible region")
    return PhasePoint(0, Fraction(re), Fraction(im))


def phi_m(charge: tuple[Fraction, Fraction], m: int) -> PhasePoint:
    """The representative of the charge direction in window m."""
    re, im = charge
    if re == 0 and im == 0:
        raise UndefinedPhase("phi_m needs a nonzero central charge")
    return PhasePoint(m, Fraction(re), Fraction(im))


# ---------------------------------------------------------------------------
# Hearts and stability conditions
# ---------------------------------------------------------------------------

# Rotations of the A2 triangle S2 -> P1 -> S1 -> S2[1]: for each id e, the
# two HN factors of e[j] when e[j] is destabilized, as (id, shift offset)
# pairs ordered by descending phase (first = the subobject side).
_A2_TRIANGLE_RULE = {
    "1.2": (("2.2", 0), ("1.1", 0)),
    "2.2": (("1.1", -1), ("1.2", 0)),
    "1.1": (("1.2", 0), ("2.2", 1)),
}
_A2_IDS = ("1.1", "2.2", "1.2")


@dataclass(frozen=True)
class StandardHeart:
    """The module category placed at shift 0, with an abelian stability
    function supplying charges of the vertex simples."""

    z: StabilityFunction


@dataclass(frozen=True)
class TiltedA2Heart:
    """A length-2 or length-3 heart of D^b(rep A2) given by generator
    placements (id, shift) and their charges, in aligned order."""

    members: tuple[tuple[str, int], ...]
    charges: tuple[tuple[Fraction, Fraction], ...]

    def position(self, i: str):
        for (j, s) in self.members:
            if j == i:
                return s
        return None

    def charge_of(self, i: str) -> tuple[Fraction, Fraction]:
        for (j, s), c in zip(self.members, self.charges):
            if j == i:
                return c
        raise KeyError(i)

    @property
    def ext_member(self):
        """(id, shift) of the extension object when the heart has length 3."""
        if len(self.members) != 3:
            return None
        for e, s in self.members:
            (f1, o1), (f2, o2) = _A2_TRIANGLE_RULE[e]
            if self.position(f1) == s + o1 and self.position(f2) == s + o2:
                return (e, s)
        raise InvalidSpec(f"members {self.members} do not form an A2 heart")

    @property
    def missing_id(self):
        if len(self.members) != 2:
            return None
        present = {i for i, _ in self.members}
        (only,) = set(_A2_IDS) - present
        return only


def make_tilted_heart(cat: IndecompCatalog, members, charges) -> TiltedA2Heart:
    """Validated constructor: checks the generators form one of the A2
    hearts, charges lie in ℍ ∪ ℝ₋, and additivity/phase constraints hold."""
    if cat.quiver.name != "a2":
        raise UnsupportedHeart("tilted hearts are implemented for the a2 preset only")
    resolved = []
    for i, s in members:
        resolved.append((cat.resolve_alias(i), int(s)))
    charge_pairs = tuple((Fraction(a), Fraction(b)) for a, b in charges)
    if len(resolved) != len(charge_pairs) or len(resolved) not in (2, 3):
        raise InvalidSpec("a tilted A2 heart needs 2 or 3 generators with matching charges")
    if len({i for i, _ in resolved}) != len(resolved):
        raise InvalidSpec("duplicate generator ids")
    order = {i: k for k, i in enumerate(_A2_IDS)}
    pairs = sorted(zip(resolved, charge_pairs), key=lambda t: order[t[0][0]])
    heart = TiltedA2Heart(tuple(m for m, _ in pairs), tuple(c for _, c in pairs))
    for c in heart.charges:
        base_phase_point(*c)
    if len(heart.members) == 3:
        e, s = heart.ext_member
        (f1, o1), (f2, o2) = _A2_TRIANGLE_RULE[e]
        expected = tuple(a + b for a, b in zip(heart.charge_of(f1), heart.charge_of(f2)))
        if heart.charge_of(e) != expected:
            raise InvalidSpec(f"charge of {e} must be the sum of its triangle factors, got {heart.charge_of(e)} != {expected}")
    else:
        e = heart.missing_id
        (f1, o1), (f2, o2) = _A2_TRIANGLE_RULE[e]
        p1 = base_phase_point(*heart.charge_of(f1)).shifted(o1 - heart.position(f1))
        p2 = base_phase_point(*heart.charge_of(f2)).shifted(o2 - heart.position(f2))
        if not p1 > p2:
            raise InvalidSpec(f"generators {heart.members} do not bound the missing object's factors")
        for (i, si) in heart.members:
            for (j, sj) in heart.members:
                if dhom_dim_formula(cat, ((i, si),), ((j, sj + 1),), 0):
                    raise InvalidSpec(f"generators {i}[{si}], {j}[{sj}] admit extensions; the heart is not semisimple")
    return heart


@dataclass(frozen=True)
class StabilityCondition:
    """Heart plus charges; the derived central charge is the additive
    extension of the heart charges to the Grothendieck group."""

    heart: object  # StandardHeart | TiltedA2Heart


def standard_condition(z: StabilityFunction) -> StabilityCondition:
    return StabilityCondition(StandardHeart(z))


def tilted_condition(cat: IndecompCatalog, members, charges) -> StabilityCondition:
    return StabilityCondition(make_tilted_heart(cat, members, charges))


def tilted_twin_of_standard(cat: IndecompCatalog, z: StabilityFunction) -> StabilityCondition:
    """The standard a2 heart expressed in the tilted backend (for cross-checks)."""
    z1, z2 = z.z[0], z.z[1]
    return tilted_condition(
        cat,
        [("1.1", 0), ("2.2", 0), ("1.2", 0)],
        [z1, z2, (z1[0] + z2[0], z1[1] + z2[1])],
    )


def derived_charge(cat: IndecompCatalog, sigma: StabilityCondition, gamma) -> tuple[Fraction, Fraction]:
    """Central charge of a Grothendieck-group class (components may be < 0)."""
    heart = sigma.heart
    if isinstance(heart, StandardHeart):
        re = sum(Fraction(g) * heart.z.z[v][0] for v, g in enumerate(gamma))
        im = sum(Fraction(g) * heart.z.z[v][1] for v, g in enumerate(gamma))
        return (re, im)
    basis = heart.members[:2]
    (i1, s1), (i2, s2) = basis
    g1 = tuple(((-1) ** s1) * d for d in cat.entry(i1).dims)
    g2 = tuple(((-1) ** s2) * d for d in cat.entry(i2).dims)
    det = g1[0] * g2[1] - g1[1] * g2[0]
    if det == 0:
        raise ImpossibleConfiguration("heart generators do not span the Grothendieck group")
    x = Fraction(gamma[0] * g2[1] - gamma[1] * g2[0], det)
    y = Fraction(g1[0] * gamma[1] - g1[1] * gamma[0], det)
    c1, c2 = heart.charge_of(i1), heart.charge_of(i2)
    return (x * c1[0] + y * c2[0], x * c1[1] + y * c2[1])


def phi_m_of(cat: IndecompCatalog, sigma: StabilityCondition, gamma, m: int) -> PhasePoint:
    z = derived_charge(cat, sigma, gamma)
    if z == (0, 0):
        raise UndefinedPhase(f"class {gamma} has zero central charge")
    return phi_m(z, m)


# ---------------------------------------------------------------------------
# HN filtrations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DHNFiltration:
    """Factors (class, phase) with strictly decreasing phases, plus the tower
    objects X_1 ⊆ … ⊆ X_n = X (as isomorphism classes)."""

    factors: tuple[tuple[DerivedClass, PhasePoint], ...]
    partials: tuple[DerivedClass, ...]

    @property
    def hn_type(self):
        return tuple(f[0] for f in self.factors)

    @property
    def phi_plus(self) -> PhasePoint:
        return self.factors[0][1]

    @property
    def phi_minus(self) -> PhasePoint:
        return self.factors[-1][1]


_indec_hn_cache: dict = {}
_hn_cache: dict = {}


def _indec_hn(cat: IndecompCatalog, sigma: StabilityCondition, i: str, s: int, p: int):
    """HN data of the single indecomposable i[s]: (factors, partial classes)."""
    key = (cat.quiver.name, sigma, i, s, p)
    if key in _indec_hn_cache:
        return _indec_hn_cache[key]
    heart = sigma.heart
    if isinstance(heart, StandardHeart):
        ab = hn_filtration_abelian(cat, heart.z, cat.make_class([i]), p)
        factors = tuple(
            (module_dclass(cat, mc, s), PhasePoint(0, pv.re, pv.im).shifted(s))
            for mc, pv in ab.factors
        )
        partials = tuple(module_dclass(cat, mc, s) for mc in ab.partials)
    else:
        pos = heart.position(i)
        ext = heart.ext_member
        if pos is not None and (ext is None or (i, pos) != ext):
            phase = base_phase_point(*heart.charge_of(i)).shifted(s - pos)
            factors = ((make_dclass(cat, [(i, s)]), phase),)
            partials = (make_dclass(cat, [(i, s)]),)
        else:
            (f1, o1), (f2, o2) = _A2_TRIANGLE_RULE[i]
            ph1 = base_phase_point(*heart.charge_of(f1)).shifted(s + o1 - heart.position(f1))
            ph2 = base_phase_point(*heart.charge_of(f2)).shifted(s + o2 - heart.position(f2))
            if pos is not None and not ph1 > ph2:
                own = base_phase_point(*heart.charge_of(i)).shifted(s - pos)
                assert ph1 <= own <= ph2, "extension phase must sit between its factors"
                factors = ((make_dclass(cat, [(i, s)]), own),)
                partials = (make_dclass(cat, [(i, s)]),)
            else:
                if not ph1 > ph2:
                    raise ImpossibleConfiguration(f"factors of absent object {i}[{s}] are not strictly ordered")
                c1 = make_dclass(cat, [(f1, s + o1)])
                c2 = make_dclass(cat, [(f2, s + o2)])
                factors = ((c1, ph1), (c2, ph2))
                partials = (c1, make_dclass(cat, [(i, s)]))
    _indec_hn_cache[key] = (factors, partials)
    return factors, partials


def _merge_summands(cat: IndecompCatalog, parts):
    """Merge per-summand HN data into one filtration (phases merged by ⊎)."""
    buckets: dict[PhasePoint, list] = {}
    for factors, _ in parts:
        for c, ph in factors:
            buckets.setdefault(ph, []).append(c)
    phases = sorted(buckets, reverse=True)
    merged = tuple(
        (make_dclass(cat, [pair for c in buckets[ph] for pair in c]), ph) for ph in phases
    )
    partials = []
    for cut in phases:
        items = []
        for factors, partial_classes in parts:
            taken = sum(1 for _, ph in factors if ph >= cut)
            if taken:
                items.extend(partial_classes[taken - 1])
        partials.append(make_dclass(cat, items))
    return merged, tuple(partials)


def _hn_core(cat: IndecompCatalog, sigma: StabilityCondition, x: DerivedClass, p: int) -> DHNFiltration:
    mult: dict[tuple[str, int], int] = {}
    for pair in x:
        mult[pair] = mult.get(pair, 0) + 1
    parts = []
    for (i, s), k in mult.items():
        factors, partials = _indec_hn(cat, sigma, i, s, p)
        if k > 1:
            factors = tuple((make_dclass(cat, list(c) * k), ph) for c, ph in factors)
            partials = tuple(make_dclass(cat, list(c) * k) for c in partials)
        parts.append((factors, partials))
    merged, partials = _merge_summands(cat, parts)
    assert all(p1 > p2 for (_, p1), (_, p2) in zip(merged, merged[1:])), "phases must strictly decrease"
    total = dclass_k0(cat, x)
    summed = (0,) * cat.quiver.n
    for c, _ in merged:
        summed = dim_add(summed, dclass_k0(cat, c))
    assert summed == total, "HN factor classes must sum to the object's class"
    assert partials[-1] == x, "the last tower object must be X itself"
    return DHNFiltration(merged, partials)


def hn_filtration_derived(cat: IndecompCatalog, sigma: StabilityCondition, x: DerivedClass, p: int) -> DHNFiltration:
    """HN filtration of a nonzero derived class; on the standard a2 heart the
    tilted backend is run as well and must agree."""
    if not x:
        raise ZeroObject("the zero object has no HN filtration")
    key = (cat.quiver.name, sigma, x, p)
    if key in _hn_cache:
        return _hn_cache[key]
    result = _hn_core(cat, sigma, x, p)
    if isinstance(sigma.heart, StandardHeart) and cat.quiver.name == "a2":
        twin = tilted_twin_of_standard(cat, sigma.heart.z)
        other = _hn_core(cat, twin, x, p)
        assert [(c, ph.sort_key) for c, ph in result.factors] == [
            (c, ph.sort_key) for c, ph in other.factors
        ], f"standard and tilted HN backends disagree on {x}"
        assert result.partials == other.partials, f"backends disagree on tower objects of {x}"
    _hn_cache[key] = result
    return result


def is_sigma_semistable(cat: IndecompCatalog, sigma: StabilityCondition, x: DerivedClass, p: int) -> bool:
    if not x:
        raise ZeroObject("semistability is undefined for the zero object")
    hn = hn_filtration_derived(cat, sigma, x, p)
    shifted = hn_filtration_derived(cat, sigma, shift_dclass(x, 1), p)
    assert [(shift_dclass(c, 1), ph.shifted(1).sort_key) for c, ph in hn.factors] == [
        (c, ph.sort_key) for c, ph in shifted.factors
    ], f"HN filtration of {x} is not shift-equivariant"
    return len(hn.factors) == 1


def sigma_phase(cat: IndecompCatalog, sigma: StabilityCondition, x: DerivedClass, p: int) -> PhasePoint:
    """Phase of a σ-semistable class."""
    hn = hn_filtration_derived(cat, sigma, x, p)
    assert len(hn.factors) == 1, f"{x} is not semistable"
    return hn.factors[0][1]


def is_sigma_stable(cat: IndecompCatalog, sigma: StabilityCondition, x: DerivedClass, p: int) -> bool:
    """Stable = semistable and simple in its phase slice."""
    if not is_sigma_semistable(cat, sigma, x, p):
        return False
    if len(x) != 1:
        return False
    (i, s) = x[0]
    heart = sigma.heart
    if isinstance(heart, StandardHeart):
        return is_stable(cat, heart.z, cat.make_class([i]), p)
    ext = heart.ext_member
    pos = heart.position(i)
    if ext is not None and pos is not None and (i, pos) == ext:
        (f1, o1), (f2, o2) = _A2_TRIANGLE_RULE[i]
        ph1 = base_phase_point(*heart.charge_of(f1)).shifted(s + o1 - heart.position(f1))
        ph2 = base_phase_point(*heart.charge_of(f2)).shifted(s + o2 - heart.position(f2))
        return ph1 < ph2
    return True


# ---------------------------------------------------------------------------
# Characteristic and Joyce elements
# ---------------------------------------------------------------------------


def nonzero_profile_classes(cat: IndecompCatalog, profile: TruncationProfile) -> list[DerivedClass]:
    return [c for c in profile_classes(cat, profile) if c]


def build_kappa_derived(cat: IndecompCatalog, gamma, profile: TruncationProfile, q: int) -> DHallElement:
    """Characteristic function of all nonzero in-profile classes of class γ."""
    gamma = tuple(gamma)
    coeffs = {c: 1 for c in nonzero_profile_classes(cat, profile) if dclass_k0(cat, c) == gamma}
    return d_element(q, coeffs)


def build_refined(cat: IndecompCatalog, sigma: StabilityCondition, kind: str, gamma, m: int, profile: TruncationProfile, p: int) -> DHallElement:
    """^mκ (lowest HN phase in window m) or ^mδ (semistable with phase in
    window m) for a fixed Grothendieck class γ, materialized over a profile."""
    gamma = tuple(gamma)
    coeffs = {}
    for c in nonzero_profile_classes(cat, profile):
        if dclass_k0(cat, c) != gamma:
            continue
        hn = hn_filtration_derived(cat, sigma, c, p)
        if kind == "kappa":
            if hn.phi_minus.window == m:
                coeffs[c] = 1
        elif kind == "delta":
            if len(hn.factors) == 1 and hn.phi_minus.window == m:
                coeffs[c] = 1
        else:
            raise ValueError(f"unknown refined kind {kind!r}")
    return d_element(p, coeffs)


def build_chi(cat: IndecompCatalog, sigma: StabilityCondition, gamma_list, profile: TruncationProfile, p: int) -> DHallElement:
    """Characteristic function of classes whose HN type (sequence of factor
    Grothendieck classes) equals the given tuple."""
    target = tuple(tuple(g) for g in gamma_list)
    coeffs = {}
    for c in nonzero_profile_classes(cat, profile):
        hn = hn_filtration_derived(cat, sigma, c, p)
        if tuple(dclass_k0(cat, f) for f in hn.hn_type) == target:
            coeffs[c] = 1
    return d_element(p, coeffs)


def semistable_classes(cat: IndecompCatalog, sigma: StabilityCondition, profile: TruncationProfile, p: int):
    """In-profile semistable classes with their phases."""
    out = []
    for c in nonzero_profile_classes(cat, profile):
        hn = hn_filtration_derived(cat, sigma, c, p)
        if len(hn.factors) == 1:
            out.append((c, hn.factors[0][1]))
    return out


def occupied_phase_points(cat: IndecompCatalog, sigma: StabilityCondition, profile: TruncationProfile, p: int) -> list[PhasePoint]:
    return sorted({ph for _, ph in semistable_classes(cat, sigma, profile, p)}, reverse=True)


def build_SS_sigma(cat: IndecompCatalog, sigma: StabilityCondition, phi: PhasePoint, profile: TruncationProfile, p: int) -> DHallElement:
    """1 + (characteristic function of in-profile semistables of phase φ)."""
    coeffs = {(): 1}
    for c, ph in semistable_classes(cat, sigma, profile, p):
        if ph == phi:
            coeffs[c] = 1
    return d_element(p, coeffs)


def _ray_part_dims(cat: IndecompCatalog, sigma: StabilityCondition, gamma, pool_dims):
    """Dims from the pool whose charge is a positive multiple of Z(γ);
    returns pairs (dims, modulus parameter t > 0) with Z(d) = t·Z(γ)."""
    zg = derived_charge(cat, sigma, gamma)
    out = []
    for d in pool_dims:
        zd = derived_charge(cat, sigma, d)
        if zd == (0, 0):
            continue
        # zd = t·zg with t > 0
        if zg[0] * zd[1] != zg[1] * zd[0]:
            continue
        t = None
        for a, b in zip(zd, zg):
            if b != 0:
                t = Fraction(a) / b
                break
        if t is not None and t > 0 and all(a == t * b for a, b in zip(zd, zg)):
            out.append((d, t))
    return out


def _ordered_ray_tuples(parts, total: Fraction):
    """Ordered tuples of parts (dims, t) whose moduli sum to the target."""
    out = []

    def rec(prefix, remaining):
        if remaining == 0 and prefix:
            out.append(tuple(prefix))
            return
        for d, t in parts:
            if t <= remaining:
                rec(prefix + [d], remaining - t)

    rec([], total)
    return out


def build_m_epsilon(cat: IndecompCatalog, sigma: StabilityCondition, gamma, m: int, profile: TruncationProfile, p: int) -> DHallElement:
    """Windowed Joyce element: alternating 1/n sum of ^mδ products over
    ordered decompositions of γ into same-ray parts inside window m."""
    gamma = tuple(gamma)
    phi_m_of(cat, sigma, gamma, m)
    deltas: dict[tuple, DHallElement] = {}
    pool_dims = sorted({dclass_k0(cat, c) for c in nonzero_profile_classes(cat, profile)})
    parts = []
    for d, t in _ray_part_dims(cat, sigma, gamma, pool_dims):
        el = build_refined(cat, sigma, "delta", d, m, profile, p)
        if el.coeffs:
            deltas[d] = el
            parts.append((d, t))
    total = d_element(p, {})
    for tup in _ordered_ray_tuples(parts, Fraction(1)):
        if sum_dims(tup) != gamma:
            continue
        prod = deltas[tup[0]]
        for d in tup[1:]:
            prod = materialize_product(cat, prod, deltas[d], p)
        n = len(tup)
        total = d_add(total, _scale_element(prod, Fraction((-1) ** (n - 1), n)))
    return total


def sum_dims(dims_tuple):
    it = iter(dims_tuple)
    first = tuple(next(it))
    for d in it:
        first = dim_add(first, d)
    return first


def _scale_element(f: DHallElement, a: Fraction) -> DHallElement:
    return d_scale(f, a)


def windows_in_profile(cat: IndecompCatalog, sigma: StabilityCondition, profile: TruncationProfile, p: int) -> list[int]:
    return sorted({ph.window for _, ph in semistable_classes(cat, sigma, profile, p)})


def build_epsilon_sigma(cat: IndecompCatalog, sigma: StabilityCondition, gamma, profile: TruncationProfile, p: int) -> DHallElement:
    """Σ_m ^mε over all windows met by in-profile semistables."""
    total = d_element(p, {})
    for m in windows_in_profile(cat, sigma, profile, p):
        total = d_add(total, build_m_epsilon(cat, sigma, gamma, m, profile, p))
    return total


def build_naive_epsilon(cat: IndecompCatalog, sigma: StabilityCondition, gamma, profile: TruncationProfile, p: int) -> DHallElement:
    """The unwindowed alternating sum over same-ray decompositions with the
    full (window-summed) semistable characteristic functions as factors."""
    gamma = tuple(gamma)
    pool_dims = sorted({dclass_k0(cat, c) for c in nonzero_profile_classes(cat, profile)})
    parts = []
    deltas = {}
    for d, t in _ray_part_dims(cat, sigma, gamma, pool_dims):
        coeffs = {}
        for c, _ in semistable_classes(cat, sigma, profile, p):
            if dclass_k0(cat, c) == d:
                coeffs[c] = 1
        if coeffs:
            deltas[d] = d_element(p, coeffs)
            parts.append((d, t))
    total = d_element(p, {})
    for tup in _ordered_ray_tuples(parts, Fraction(1)):
        if sum_dims(tup) != gamma:
            continue
        prod = deltas[tup[0]]
        for d in tup[1:]:
            prod = materialize_product(cat, prod, deltas[d], p)
        n = len(tup)
        total = d_add(total, _scale_element(prod, Fraction((-1) ** (n - 1), n)))
    return total


def d_is_grouplike(cat: IndecompCatalog, f: DHallElement, profile: TruncationProfile) -> bool:
    """f(0) = 1 and f(X ⊕ Y) = f(X)·f(Y), checked over in-profile pairs
    whose direct sum stays in the profile (the comultiplication sends u_L to
    a sum over split decompositions, so this is grouplikeness pointwise)."""
    if f.coeff(()) != 1:
        return False
    pool = nonzero_profile_classes(cat, profile)
    for a in range(len(pool)):
        for b in range(a, len(pool)):
            both = make_dclass(cat, pool[a] + pool[b])
            if not profile.contains(cat, both):
                continue
            if f.coeff(both) != f.coeff(pool[a]) * f.coeff(pool[b]):
                return False
    return True


def d_is_primitive(f: DHallElement) -> bool:
    """f(0) = 0 and the support holds no decomposable class (so the split
    comultiplication gives Δf = f⊗1 + 1⊗f)."""
    if f.coeff(()):
        return False
    return all(len(c) == 1 for c in f.coeffs)


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def condition_from_json(cat: IndecompCatalog, obj: dict) -> StabilityCondition:
    """σ config: {"heart": "standard", "Z": {...}} or
    {"heart": {"tilted_a2": {"generators": [[id, shift], ...],
                             "charges": [[re, im], ...]}}}."""
    from .stability import stability_from_json

    heart = obj.get("heart", "standard")
    if heart == "standard":
        z = stability_from_json(obj["Z"], cat.quiver.n)
        return standard_condition(z)
    if isinstance(heart, dict) and "tilted_a2" in heart:
        spec = heart["tilted_a2"]
        return tilted_condition(cat, spec["generators"], spec["charges"])
    raise InvalidSpec(f"unrecognized heart specification {heart!r}")

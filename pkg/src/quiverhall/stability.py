"""Slopes, stability functions, and abelian Harder–Narasimhan filtrations.

A stability function assigns an exact rational charge (re, im) to each
vertex; the charge of a dimension vector must land in the upper half plane
or on the negative real axis.  Phases are never evaluated numerically:
PhaseValue compares arguments by cross products, so ties are genuine
equalities.

The HN filtration is computed greedily (maximal destabilizing subobject by
maximal phase, then maximal total dimension) on a canonical representative
over F_p, with the uniqueness of the maximizer and the independence of the
result from p asserted at runtime.  Alongside the semistable factors the
filtration records the isomorphism classes of the partial subobjects
0 ⊂ X₁ ⊂ … ⊂ X, which downstream identity checks need; these are obtained
by pulling subobjects of successive quotients back through the quotient
projections with exact F_p linear algebra.

The module also builds the characteristic-function elements of the Hall
algebra attached to a stability function: κ (all objects of a dimension),
δ (semistable objects of a dimension), the semistable series SS per phase,
and the logarithmic element ε per dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import product as iproduct

from . import gf
from .catalog import IndecompCatalog, ModuleClass
from .errors import (
    CapExceeded,
    InvalidSpec,
    NonUniqueMaximal,
    ZeroCharge,
    ZeroObject,
    ZeroVector,
)
from .hall import HallAlgebra, HallElement
from .quivers import dim_is_zero, dim_total
from .reps import Representation, enumerate_subreps, sub_quotient

RationalPair = tuple[Fraction, Fraction]


# ---------------------------------------------------------------------------
# Slopes
# ---------------------------------------------------------------------------


def slope(theta: tuple[int, ...], d: tuple[int, ...]) -> Fraction:
    """Slope Θ(d) / Σ_v d_v of a nonzero nonnegative dimension vector."""
    if len(theta) != len(d):
        raise InvalidSpec(f"linear form length {len(theta)} does not match dimension vector length {len(d)}")
    if any(x < 0 for x in d):
        raise ValueError(f"dimension vector must be nonnegative, got {d}")
    total = sum(d)
    if total == 0:
        raise ZeroVector("slope of the zero dimension vector is undefined")
    return Fraction(sum(t * x for t, x in zip(theta, d)), total)


# ---------------------------------------------------------------------------
# Phases
# ---------------------------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class PhaseValue:
    """The phase of a charge in the upper half plane or negative real axis.

    Stores the charge (re, im) but compares by argument only: two values are
    equal exactly when their arguments agree, regardless of magnitude.  The
    argument lies in (0, 1] in half-turns; 1 is attained on the negative real
    axis and is the maximum.  Comparisons use cross products — no floats.
    """

    re: Fraction
    im: Fraction

    def __post_init__(self):
        if self.re == 0 and self.im == 0:
            raise ZeroCharge("phase of the zero charge is undefined")
        if self.im < 0 or (self.im == 0 and self.re > 0):
            raise InvalidSpec(f"charge ({self.re}, {self.im}) lies outside the closed upper half plane sector")

    @property
    def is_axis(self) -> bool:
        """True when the phase equals 1 (charge on the negative real axis)."""
        return self.im == 0

    @property
    def sort_key(self):
        """Tuple key realizing the phase order: larger key = larger phase.

        Interior charges are ordered by −re/im (the cotangent reversal of the
        argument); the axis outranks every interior value.
        """
        if self.is_axis:
            return (1,)
        return (0, Fraction(-self.re, 1) / self.im)

    def __eq__(self, other):
        if not isinstance(other, PhaseValue):
            return NotImplemented
        return self.sort_key == other.sort_key

    def __lt__(self, other):
        if not isinstance(other, PhaseValue):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __hash__(self):
        return hash(self.sort_key)

    def __repr__(self):
        return f"PhaseValue({self.re}, {self.im})"


# ---------------------------------------------------------------------------
# Stability functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilityFunction:
    """Exact central charge data: one rational pair per vertex.

    Validity (every nonzero nonnegative dimension vector lands in the upper
    half plane or on the negative real axis) is checked per vertex; the
    admissible region is closed under sums, so per-vertex validity is
    equivalent to validity on all of them.  `validate_against` additionally
    walks a catalog's dimension vectors as a belt-and-braces check.
    """

    z: tuple[RationalPair, ...]

    def __post_init__(self):
        for v, (re, im) in enumerate(self.z, start=1):
            if im < 0 or (im == 0 and re >= 0):
                raise InvalidSpec(
                    f"charge {re}+{im}i at vertex {v} is not in the upper half plane or negative real axis"
                )

    @classmethod
    def make(cls, pairs) -> "StabilityFunction":
        z = tuple((Fraction(re), Fraction(im)) for re, im in pairs)
        return cls(z)

    @classmethod
    def from_linear_form(cls, theta: tuple[int, ...]) -> "StabilityFunction":
        """Embed slope stability: Z(d) = −Θ(d) + i·(Σ_v d_v).

        The imaginary part is the total dimension, so charges always lie in
        the open upper half plane, and −re/im equals the slope — the phase
        order coincides with the slope order.
        """
        return cls.make([(-t, 1) for t in theta])

    @property
    def n(self) -> int:
        return len(self.z)

    def charge(self, d: tuple[int, ...]) -> RationalPair:
        if len(d) != self.n:
            raise InvalidSpec(f"dimension vector length {len(d)} does not match charge data for {self.n} vertices")
        re = sum((Fraction(x) * zre for x, (zre, _) in zip(d, self.z)), Fraction(0))
        im = sum((Fraction(x) * zim for x, (_, zim) in zip(d, self.z)), Fraction(0))
        return (re, im)

    def phase(self, d: tuple[int, ...]) -> PhaseValue:
        if dim_is_zero(d):
            raise ZeroVector("phase of the zero dimension vector is undefined")
        re, im = self.charge(d)
        if re == 0 and im == 0:
            raise ZeroCharge(f"Z({d}) = 0 has no phase")
        return PhaseValue(re, im)

    def validate_against(self, cat: IndecompCatalog) -> None:
        """Check admissibility on every catalog dimension vector."""
        for e in cat.entries:
            self.phase(e.dims)

    def class_phase(self, cat: IndecompCatalog, c: ModuleClass) -> PhaseValue:
        if not c:
            raise ZeroObject("phase of the zero object is undefined")
        return self.phase(cat.class_dims(c))


def stability_from_json(obj: dict, n: int) -> StabilityFunction:
    """Parse {"1": ["-1", "1"], ...} vertex-charge data (exact rationals)."""
    if not isinstance(obj, dict):
        raise InvalidSpec("charge specification must be an object keyed by vertex")
    pairs = []
    for v in range(1, n + 1):
        key = str(v)
        if key not in obj:
            raise InvalidSpec(f"charge specification missing vertex {key!r}")
        val = obj[key]
        if not isinstance(val, (list, tuple)) or len(val) != 2:
            raise InvalidSpec(f"charge for vertex {key} must be a [re, im] pair")
        pairs.append((Fraction(str(val[0])), Fraction(str(val[1]))))
    return StabilityFunction.make(pairs)


# ---------------------------------------------------------------------------
# Semistability
# ---------------------------------------------------------------------------

_subdim_cache: dict = {}
_ss_cache: dict = {}


def _interval_subdims(cat: IndecompCatalog, id_: str) -> frozenset:
    """Dimension vectors of subobjects of one interval indecomposable.

    Submodules of the interval [a, b] (identity arrows inside) are exactly
    the tail intervals [c, b] for a ≤ c ≤ b, plus zero.
    """
    a, b = cat.entry(id_).interval
    n = cat.quiver.n
    out = {(0,) * n}
    for c in range(a, b + 1):
        out.add(tuple(1 if c <= v <= b else 0 for v in range(1, n + 1)))
    return frozenset(out)


def realizable_subdims(cat: IndecompCatalog, x: ModuleClass, p: int, route: str = "auto") -> frozenset:
    """All dimension vectors of subobjects of the class x over F_p.

    Route "sum": Minkowski sum of per-summand subobject dims (for W ⊆ M⊕N,
    W∩M and the image of W in N are subobjects with dims adding to dim W,
    and conversely direct sums realize every pair).  Route "enumerate":
    existence check via subrepresentation enumeration.  "auto" uses the sum
    route and is cross-checked against enumeration in the test suite.
    """
    key = (cat.quiver.name, x, p, route)
    if key in _subdim_cache:
        return _subdim_cache[key]
    if route in ("auto", "sum"):
        acc = {(0,) * cat.quiver.n}
        for id_ in x:
            acc = {tuple(a + b for a, b in zip(u, v)) for u in acc for v in _interval_subdims(cat, id_)}
        result = frozenset(acc)
    elif route == "enumerate":
        rep = cat.class_rep(x, p)
        found = set()
        for dims in iproduct(*(range(d + 1) for d in rep.dims)):
            if next(enumerate_subreps(rep, tuple(dims)), None) is not None:
                found.add(tuple(dims))
        result = frozenset(found)
    else:
        raise ValueError(f"unknown route {route!r}")
    _subdim_cache[key] = result
    return result


def is_semistable(cat: IndecompCatalog, z: StabilityFunction, m: ModuleClass, p: int) -> bool:
    """φ(U) ≤ φ(M) for every nonzero subobject U of M."""
    m = cat.make_class(m)
    if not m:
        raise ZeroObject("semistability of the zero object is undefined")
    key = (cat.quiver.name, z, m, p)
    if key in _ss_cache:
        return _ss_cache[key]
    target = z.phase(cat.class_dims(m))
    ok = all(
        z.phase(d) <= target
        for d in realizable_subdims(cat, m, p)
        if not dim_is_zero(d)
    )
    _ss_cache[key] = ok
    return ok


def is_stable(cat: IndecompCatalog, z: StabilityFunction, m: ModuleClass, p: int) -> bool:
    """φ(U) < φ(M) for every nonzero proper subobject U of M.

    Stability implies indecomposability; that implication is asserted.
    """
    m = cat.make_class(m)
    if not m:
        raise ZeroObject("stability of the zero object is undefined")
    full = cat.class_dims(m)
    target = z.phase(full)
    stable = all(
        z.phase(d) < target
        for d in realizable_subdims(cat, m, p)
        if not dim_is_zero(d) and d != full
    )
    if stable:
        assert len(m) == 1, f"stable class {m} must be indecomposable"
    return stable


# ---------------------------------------------------------------------------
# Harder–Narasimhan filtrations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HNFiltrationA:
    """HN data of a module: semistable factors (top phase first) and the
    isomorphism classes of the partial subobjects X₁ ⊂ … ⊂ Xₙ = X."""

    factors: tuple[tuple[ModuleClass, PhaseValue], ...]
    partials: tuple[ModuleClass, ...]

    @property
    def hn_type(self) -> tuple[ModuleClass, ...]:
        return tuple(c for c, _ in self.factors)


def _projection_matrices(x: Representation, sub_bases) -> list[list[list[int]]]:
    """Per-vertex matrices of the quotient projection X → X/U.

    Quotient coordinates are the non-pivot standard coordinates of each
    vertex (matching `sub_quotient`); the projection of a vector is its
    residue modulo the subspace, read off at those coordinates.
    """
    p = x.p
    mats = []
    for v in range(x.quiver.n):
        basis = [list(r) for r in sub_bases[v]]
        pivots = [next(i for i, val in enumerate(row) if val) for row in basis] if basis else []
        free = [c for c in range(x.dims[v]) if c not in pivots]
        cols = []
        for c in range(x.dims[v]):
            vec = [0] * x.dims[v]
            vec[c] = 1
            w = gf.reduce_mod_span(vec, basis, pivots, p)
            cols.append([w[f] for f in free])
        mats.append([[cols[c][i] for c in range(x.dims[v])] for i in range(len(free))])
    return mats


def _max_destabilizer(x: Representation, z: StabilityFunction, cost_cap: int = 500_000):
    """The subrepresentation with (maximal phase, then maximal total dim).

    Returns its per-vertex RREF bases.  The theory guarantees the maximizer
    is unique as a subobject; if the search finds two distinct subspace
    tuples at the optimum, NonUniqueMaximal is raised.
    """
    cost = 1
    for d in x.dims:
        cost *= sum(gf.num_subspaces(d, k, x.p) for k in range(d + 1))
    if cost > cost_cap:
        raise CapExceeded(f"destabilizer search over ~{cost} subspace tuples exceeds the work cap")
    best_key = None
    best_bases = []
    for dims in iproduct(*(range(d + 1) for d in x.dims)):
        if not any(dims):
            continue
        phi = z.phase(tuple(dims))
        key = (phi, sum(dims))
        if best_key is not None and key < best_key:
            continue
        for bases in enumerate_subreps(x, tuple(dims)):
            if best_key is None or key > best_key:
                best_key = key
                best_bases = [bases]
            elif key == best_key:
                best_bases.append(bases)
    if len(best_bases) != 1:
        raise NonUniqueMaximal(f"{len(best_bases)} maximal destabilizing subobjects found (expected exactly one)")
    return best_bases[0]


def _hn_core(cat: IndecompCatalog, z: StabilityFunction, x: Representation):
    """Recursive greedy HN computation on a concrete representation.

    Returns (factors, partial_bases): partial bases are per-vertex RREF
    bases of X₁ ⊂ … ⊂ Xₙ = X inside x.
    """
    bases = _max_destabilizer(x, z)
    sub, quot = sub_quotient(x, bases)
    sub_phase = z.phase(sub.dims)
    if quot.total_dim == 0:
        return [(cat.decompose(sub), sub_phase)], [bases]
    factors, quot_partials = _hn_core(cat, z, quot)
    assert sub_phase > factors[0][1], "greedy HN factor phases must strictly decrease"
    proj = _projection_matrices(x, bases)
    partials = [bases]
    for qbases in quot_partials:
        pulled = []
        for v in range(x.quiver.n):
            if not proj[v]:
                # Quotient vertex is zero: the preimage is the whole space.
                basis = gf.identity(x.dims[v])
            else:
                basis = gf.preimage(proj[v], [list(r) for r in qbases[v]], x.p)
            pulled.append(tuple(tuple(row) for row in basis))
        partials.append(tuple(pulled))
    return [(cat.decompose(sub), sub_phase)] + factors, partials


_hn_cache: dict = {}


def hn_filtration_abelian(cat: IndecompCatalog, z: StabilityFunction, x: ModuleClass, p: int) -> HNFiltrationA:
    """HN filtration of the class x over F_p.

    Asserts the defining invariants (strictly decreasing phases, dims adding
    to dim x, semistable factors) and that the factor sequence is identical
    over p ∈ {2, 3} (plus the requested prime).
    """
    gf.check_prime(p)
    x = cat.make_class(x)
    if not x:
        raise ZeroObject("the zero object has no HN filtration")
    key = (cat.quiver.name, z, x, p)
    if key in _hn_cache:
        return _hn_cache[key]

    def run(prime: int) -> HNFiltrationA:
        rep = cat.class_rep(x, prime)
        factors, partial_bases = _hn_core(cat, z, rep)
        partials = []
        for bases in partial_bases:
            sub, _ = sub_quotient(rep, bases)
            partials.append(cat.decompose(sub))
        return HNFiltrationA(tuple(factors), tuple(partials))

    result = run(p)
    for check_p in (2, 3):
        if check_p != p:
            other = run(check_p)
            assert other.factors == result.factors, f"HN factors differ between p={p} and p={check_p}"
    phases = [phi for _, phi in result.factors]
    assert all(a > b for a, b in zip(phases, phases[1:])), "HN phases must strictly decrease"
    dims = (0,) * cat.quiver.n
    for c, _ in result.factors:
        dims = tuple(a + b for a, b in zip(dims, cat.class_dims(c)))
    assert dims == cat.class_dims(x), "HN factor dims must sum to the object's dims"
    assert all(is_semistable(cat, z, c, p) for c, _ in result.factors), "HN factors must be semistable"
    assert result.partials[-1] == x, "last partial subobject must be the object itself"
    _hn_cache[key] = result
    return result


# ---------------------------------------------------------------------------
# Characteristic-function elements
# ---------------------------------------------------------------------------


def _semistability_prime(alg: HallAlgebra) -> int:
    """Field used for subobject tests; semistability itself is p-independent."""
    return alg.q if isinstance(alg.q, int) else 2


def nonzero_dims_within(cat: IndecompCatalog, dim_cap: int) -> list[tuple[int, ...]]:
    """All dimension vectors of nonzero classes with total dim ≤ cap."""
    seen = []
    for c in cat.all_classes(dim_cap):
        if c:
            d = cat.class_dims(c)
            if d not in seen:
                seen.append(d)
    return seen


def build_kappa(alg: HallAlgebra, gamma: tuple[int, ...]) -> HallElement:
    """Characteristic function of all classes of dimension γ."""
    gamma = alg.cat.quiver.check_dim(gamma)
    if dim_total(gamma) > alg.dim_cap:
        raise CapExceeded(f"dimension {gamma} exceeds the cap {alg.dim_cap}")
    return alg.element({c: 1 for c in alg.cat.classes_of_dim(gamma)})


def build_delta(alg: HallAlgebra, z: StabilityFunction, gamma: tuple[int, ...]) -> HallElement:
    """Characteristic function of the semistable classes of dimension γ."""
    gamma = alg.cat.quiver.check_dim(gamma)
    if dim_total(gamma) > alg.dim_cap:
        raise CapExceeded(f"dimension {gamma} exceeds the cap {alg.dim_cap}")
    p = _semistability_prime(alg)
    return alg.element({c: 1 for c in alg.cat.classes_of_dim(gamma) if c and is_semistable(alg.cat, z, c, p)})


def build_SS(alg: HallAlgebra, z: StabilityFunction, phi: PhaseValue) -> HallElement:
    """Semistable series at one phase: 1 + Σ_{φ(γ)=φ} δ_γ within the cap."""
    out = alg.unit()
    for gamma in nonzero_dims_within(alg.cat, alg.dim_cap):
        if z.phase(gamma) == phi:
            out = alg.add(out, build_delta(alg, z, gamma))
    return out


def equal_phase_decompositions(z: StabilityFunction, gamma: tuple[int, ...]):
    """Ordered tuples of nonzero vectors summing to γ with all phases φ(γ)."""
    target = z.phase(gamma)

    def parts_of(remaining):
        if dim_is_zero(remaining):
            yield ()
            return
        for cand in iproduct(*(range(r + 1) for r in remaining)):
            if not any(cand):
                continue
            if z.phase(cand) != target:
                continue
            rest = tuple(a - b for a, b in zip(remaining, cand))
            for tail in parts_of(rest):
                yield (cand,) + tail

    yield from parts_of(gamma)


def build_epsilon(alg: HallAlgebra, z: StabilityFunction, gamma: tuple[int, ...]) -> HallElement:
    """The logarithmic element: Σ over equal-phase ordered decompositions of
    γ of ((−1)^{n−1}/n)·δ_{γ₁}*…*δ_{γₙ}."""
    gamma = alg.cat.quiver.check_dim(gamma)
    if dim_is_zero(gamma):
        raise ZeroVector("the logarithmic element needs a nonzero dimension")
    if dim_total(gamma) > alg.dim_cap:
        raise CapExceeded(f"dimension {gamma} exceeds the cap {alg.dim_cap}")
    total = alg.zero()
    for parts in equal_phase_decompositions(z, gamma):
        n = len(parts)
        term = alg.product([build_delta(alg, z, g) for g in parts])
        total = alg.add(total, alg.scale(term, Fraction((-1) ** (n - 1), n)))
    return total


def occupied_phases(cat: IndecompCatalog, z: StabilityFunction, dim_cap: int, p: int) -> list[PhaseValue]:
    """Distinct phases of semistable classes within the cap, descending."""
    phases = set()
    for c in cat.all_classes(dim_cap):
        if c and is_semistable(cat, z, c, p):
            phases.add(z.phase(cat.class_dims(c)))
    return sorted(phases, reverse=True)

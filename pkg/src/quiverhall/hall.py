"""The Ringel–Hall algebra of a type-A module category.

Basis elements are isomorphism classes (sorted id tuples from the catalog);
coefficients are exact rationals.  The product counts filtrations over F_p:

    (u_M * u_N)(L) = #{ submodules U of L : U ≅ M and L/U ≅ N }

extended bilinearly.  A "euler" coefficient tag replaces each count by the
value of its interpolated Hall polynomial at q = 1.

Two independent routes compute the counts: brute-force subrepresentation
enumeration (any preset; the oracle), and the closed Gaussian-binomial form
for the two-vertex preset (the fast path).  Tests compare them wherever
both run; production dispatch picks per preset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import gf
from .catalog import IndecompCatalog, ModuleClass
from .errors import BadConstantTerm, CapExceeded, FieldMismatch
from .hallpoly import a2_hall_closed, poly_eval, stabilized_fit
from .quivers import dim_sub, dim_total

QTag = int | str  # a prime, or the string "euler"

_g_table_cache: dict = {}
_euler_cache: dict = {}
_count_cache: dict = {}


def a2_iso_type(cat: IndecompCatalog, c: ModuleClass) -> tuple[int, int, int]:
    """(dim at 1, dim at 2, arrow rank) — a complete invariant on the a2 preset."""
    d1, d2 = cat.class_dims(c)
    rank = sum(1 for i in c if i == "1.2")
    return (d1, d2, rank)


def _enumeration_cost(cat: IndecompCatalog, l_class: ModuleClass, p: int) -> int:
    dims = cat.class_dims(l_class)
    cost = 1
    for d in dims:
        cost *= sum(gf.num_subspaces(d, k, p) for k in range(d + 1))
    return cost


def g_table(cat: IndecompCatalog, l_class: ModuleClass, p: int, cost_cap: int = 500_000) -> dict:
    """All one-step filtration counts of L at once, by brute enumeration.

    Returns {(sub_class, quotient_class): count} over every subrepresentation
    of the canonical representative of L.  Memoized per (preset, L, p).
    """
    key = (cat.quiver.name, l_class, p)
    if key in _g_table_cache:
        return _g_table_cache[key]
    cost = _enumeration_cost(cat, l_class, p)
    if cost > cost_cap:
        raise CapExceeded(f"subrepresentation enumeration for {l_class} at p={p} needs ~{cost} subspace tuples")
    from .reps import enumerate_subreps, sub_quotient

    rep = cat.class_rep(l_class, p)
    dims = rep.dims
    table: dict = {}
    from itertools import product as iproduct

    for sub_dims in iproduct(*(range(d + 1) for d in dims)):
        for bases in enumerate_subreps(rep, tuple(sub_dims)):
            sub, quot = sub_quotient(rep, bases)
            pair = (cat.decompose(sub), cat.decompose(quot))
            table[pair] = table.get(pair, 0) + 1
    _g_table_cache[key] = table
    return table


def hall_number(cat: IndecompCatalog, m: ModuleClass, n: ModuleClass, l: ModuleClass, q: QTag, route: str = "auto") -> Fraction:
    """Structure constant (u_m * u_n)(l) at field size q (or its euler value)."""
    if q == "euler":
        return euler_hall_number(cat, m, n, l)
    if tuple(x + y for x, y in zip(cat.class_dims(m), cat.class_dims(n))) != cat.class_dims(l):
        return Fraction(0)
    if route == "auto" and cat.quiver.name == "a2":
        route = "closed"
    if route == "closed":
        if cat.quiver.name != "a2":
            raise CapExceeded("closed-form route only exists on the a2 preset")
        val = a2_hall_closed(a2_iso_type(cat, m), a2_iso_type(cat, n), a2_iso_type(cat, l), q)
        assert val.denominator == 1 and val >= 0
        return val
    return Fraction(g_table(cat, l, q).get((m, n), 0))


def count_filtrations(cat: IndecompCatalog, parts, x: ModuleClass, p: int, route: str = "auto") -> int:
    """#chains 0 = X_0 ⊆ ... ⊆ X_r = X with X_i/X_{i-1} ≅ parts[i] over F_p.

    Recursive: pick the bottom subobject (≅ parts[0]), bucket by quotient
    class, recurse on the tail.  Counts depend only on isomorphism classes,
    so the recursion runs at class level and memoizes.
    """
    parts = tuple(cat.make_class(part) for part in parts)
    x = cat.make_class(x)
    key = (cat.quiver.name, parts, x, p, route)
    if key in _count_cache:
        return _count_cache[key]
    part_sum = (0,) * cat.quiver.n
    for part in parts:
        part_sum = tuple(a + b for a, b in zip(part_sum, cat.class_dims(part)))
    if part_sum != cat.class_dims(x):
        _count_cache[key] = 0
        return 0
    if not parts:
        return 1  # dims matched, so x is the zero class
    if len(parts) == 1:
        val = 1 if parts[0] == x else 0
        _count_cache[key] = val
        return val
    total = 0
    quot_dims = dim_sub(cat.class_dims(x), cat.class_dims(parts[0]))
    for quot in cat.classes_of_dim(quot_dims):
        g = hall_number(cat, parts[0], quot, x, p, route=route)
        if g:
            tail = count_filtrations(cat, parts[1:], quot, p, route=route)
            if tail:
                total += int(g) * tail
    _count_cache[key] = total
    return total


def hall_polynomial(cat: IndecompCatalog, parts, x: ModuleClass, route: str = "auto"):
    """Interpolated polynomial in q for the filtration count of `parts` in x.

    Samples count_filtrations at successive primes until two consecutive
    Lagrange fits agree.  The degree budget starts at the total dimension of
    x and is relaxed quadratically (Gaussian binomials can exceed the linear
    budget); NoStabilization is raised if the fits never settle.
    """
    x = cat.make_class(x)
    budget = max(2, cat.class_total_dim(x))
    budget = max(budget, budget * budget // 4 + 2)
    return stabilized_fit(lambda p: count_filtrations(cat, parts, x, p, route=route), budget)


def euler_hall_number(cat: IndecompCatalog, m: ModuleClass, n: ModuleClass, l: ModuleClass) -> Fraction:
    """q -> 1 value of the Hall polynomial of (m, n; l)."""
    key = (cat.quiver.name, m, n, l)
    if key not in _euler_cache:
        if tuple(x + y for x, y in zip(cat.class_dims(m), cat.class_dims(n))) != cat.class_dims(l):
            _euler_cache[key] = Fraction(0)
        else:
            poly = hall_polynomial(cat, (m, n), l)
            _euler_cache[key] = poly_eval(poly, 1)
    return _euler_cache[key]


# ---------------------------------------------------------------------------
# Elements and the algebra wrapper
# ---------------------------------------------------------------------------


@dataclass
class HallElement:
    """Finitely supported coefficient map over module classes."""

    q: QTag
    coeffs: dict[ModuleClass, Fraction] = field(default_factory=dict)

    def coeff(self, c: ModuleClass) -> Fraction:
        return self.coeffs.get(c, Fraction(0))

    def support(self):
        return set(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, HallElement) and self.q == other.q and self.coeffs == other.coeffs


class HallAlgebra:
    """Hall algebra operations truncated at a total-dimension cap.

    Truncation is loss-free for products of elements supported within the
    cap when the target class is within the cap: filtration factor dims add
    up exactly, so no discarded class ever feeds back into a retained one.
    """

    def __init__(self, cat: IndecompCatalog, q: QTag, dim_cap: int):
        if q != "euler":
            gf.check_prime(q)
        if dim_cap < 1:
            raise ValueError("dim_cap must be >= 1")
        self.cat = cat
        self.q = q
        self.dim_cap = dim_cap

    # -- constructors --------------------------------------------------------

    def element(self, coeffs: dict) -> HallElement:
        clean = {}
        for c, v in coeffs.items():
            c = self.cat.make_class(c)
            v = Fraction(v)
            if v:
                clean[c] = v
        return HallElement(self.q, clean)

    def u(self, c) -> HallElement:
        return self.element({tuple(self.cat.make_class(c)): Fraction(1)})

    def unit(self) -> HallElement:
        return self.element({(): Fraction(1)})

    def zero(self) -> HallElement:
        return HallElement(self.q, {})

    def one_series(self) -> HallElement:
        """Characteristic function of all classes within the cap (the
        truncated all-objects series)."""
        return self.element({c: 1 for c in self.cat.all_classes(self.dim_cap)})

    # -- linear structure ----------------------------------------------------

    def _check(self, *elems: HallElement):
        for e in elems:
            if e.q != self.q:
                raise FieldMismatch(f"element tagged {e.q!r} used in algebra tagged {self.q!r}")

    def add(self, f: HallElement, g: HallElement) -> HallElement:
        self._check(f, g)
        out = dict(f.coeffs)
        for c, v in g.coeffs.items():
            w = out.get(c, Fraction(0)) + v
            if w:
                out[c] = w
            else:
                out.pop(c, None)
        return HallElement(self.q, out)

    def scale(self, f: HallElement, a) -> HallElement:
        self._check(f)
        a = Fraction(a)
        if not a:
            return self.zero()
        return HallElement(self.q, {c: a * v for c, v in f.coeffs.items()})

    def sub(self, f: HallElement, g: HallElement) -> HallElement:
        return self.add(f, self.scale(g, -1))

    # -- multiplication ------------------------------------------------------

    def mul(self, f: HallElement, g: HallElement) -> HallElement:
        self._check(f, g)
        out: dict[ModuleClass, Fraction] = {}
        for m, fm in f.coeffs.items():
            dm = self.cat.class_dims(m)
            for n, gn in g.coeffs.items():
                dl = tuple(a + b for a, b in zip(dm, self.cat.class_dims(n)))
                if sum(dl) > self.dim_cap:
                    continue
                for l in self.cat.classes_of_dim(dl):
                    h = hall_number(self.cat, m, n, l, self.q)
                    if h:
                        w = out.get(l, Fraction(0)) + fm * gn * h
                        if w:
                            out[l] = w
                        else:
                            out.pop(l, None)
        return HallElement(self.q, out)

    def product(self, factors) -> HallElement:
        result = self.unit()
        for fct in factors:
            result = self.mul(result, fct)
        return result

    # -- comultiplication and shape tests ------------------------------------

    def comultiply_at(self, f: HallElement, m, n) -> Fraction:
        """Δ(f)(M, N) = f(M ⊕ N)."""
        self._check(f)
        m = self.cat.make_class(m)
        n = self.cat.make_class(n)
        if self.cat.class_total_dim(m) + self.cat.class_total_dim(n) > self.dim_cap:
            raise CapExceeded("direct sum exceeds the truncation cap")
        return f.coeff(self.cat.make_class(m + n))

    def _pairs_in_window(self):
        classes = self.cat.all_classes(self.dim_cap)
        for m in classes:
            dm = self.cat.class_total_dim(m)
            for n in classes:
                if dm + self.cat.class_total_dim(n) <= self.dim_cap:
                    yield m, n

    def grouplike_failures(self, f: HallElement) -> list:
        self._check(f)
        bad = []
        for m, n in self._pairs_in_window():
            lhs = self.comultiply_at(f, m, n)
            rhs = f.coeff(m) * f.coeff(n)
            if lhs != rhs:
                bad.append({"pair": (m, n), "delta": str(lhs), "product": str(rhs)})
        return bad

    def is_grouplike(self, f: HallElement) -> bool:
        return not self.grouplike_failures(f)

    def is_primitive(self, f: HallElement) -> bool:
        """Δ(f)(M,N) = f(M)·[N=0] + [M=0]·f(N) on the window.

        Also asserts the support characterization: primitive iff every
        supported class is a single indecomposable.
        """
        self._check(f)
        zero = ()
        ok = True
        for m, n in self._pairs_in_window():
            lhs = self.comultiply_at(f, m, n)
            rhs = f.coeff(m) * (1 if n == zero else 0) + (1 if m == zero else 0) * f.coeff(n)
            if lhs != rhs:
                ok = False
                break
        support_ok = all(len(c) == 1 for c in f.coeffs) and zero not in f.coeffs
        assert ok == support_ok, "primitivity test disagrees with singleton-support characterization"
        return ok

    # -- exp / log -----------------------------------------------------------

    def exp(self, x: HallElement) -> HallElement:
        self._check(x)
        if x.coeff(()) != 0:
            raise BadConstantTerm("exp requires zero coefficient at the zero class")
        result = self.unit()
        power = self.unit()
        for k in range(1, self.dim_cap + 1):
            power = self.mul(power, x)
            if not power.coeffs:
                break
            result = self.add(result, self.scale(power, Fraction(1, factorial(k))))
        return result

    def log(self, y: HallElement) -> HallElement:
        self._check(y)
        if y.coeff(()) != 1:
            raise BadConstantTerm("log requires coefficient 1 at the zero class")
        z = self.sub(y, self.unit())
        result = self.zero()
        power = self.unit()
        for k in range(1, self.dim_cap + 1):
            power = self.mul(power, z)
            if not power.coeffs:
                break
            result = self.add(result, self.scale(power, Fraction((-1) ** (k - 1), k)))
        return result


def element_to_json(cat: IndecompCatalog, f: HallElement) -> dict:
    """Canonical JSON form: field tag plus terms in catalog order."""
    tag = "euler" if f.q == "euler" else f"F{f.q}"
    terms = []
    for c in sorted(f.coeffs, key=lambda c: (cat.class_total_dim(c), [cat.index[i] for i in c])):
        terms.append({"class": list(c), "coeff": str(f.coeffs[c])})
    return {"field": tag, "terms": terms}

"""Closed-form algebra on even-shift powers of one rigid indecomposable.

For a rigid indecomposable S (one-dimensional endomorphisms, no
self-extensions), the classes X_a = ⊕_k S[2k]^{a_k} — with a a finitely
supported assignment of multiplicities to even-shift windows k — span a
subalgebra of the derived Hall algebra with split-only products:

    u_{X_a} · u_{X_b} = q^(Σ_{k<l} a_k·b_l) · ∏_k C(a_k+b_k, b_k)_q · u_{X_(a+b)}

where C(·,·)_q is the Gaussian binomial.  Between distinct even shifts the
only nonvanishing morphism spaces sit in even degree and contribute the
pure twist q^(a_k·b_l); within one shift the count is the classical number
of split subobjects S^b ⊆ S^(a+b).  The formula is cross-checked against
the general derived-product engine at q = p in the verification layer; its
q = 1 specialization is the commutative algebra in which the exp/log
identities for semistable generating elements are verified exactly.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import BadConstantTerm
from .hallpoly import gaussian_binomial

# A ray vector: ((window, multiplicity), ...) sorted by window, mult > 0.
RayVector = tuple


def ray_vec(pairs) -> RayVector:
    acc: dict[int, int] = {}
    for k, m in pairs:
        if m < 0:
            raise ValueError("ray multiplicities must be nonnegative")
        if m:
            acc[k] = acc.get(k, 0) + m
    return tuple(sorted(acc.items()))


def ray_add(a: RayVector, b: RayVector) -> RayVector:
    return ray_vec(list(a) + list(b))


def ray_weight(a: RayVector) -> int:
    return sum(m for _, m in a)


def ray_coeff(a: RayVector, b: RayVector, q) -> Fraction:
    """Structure constant of u_a · u_b on u_(a+b)."""
    q = Fraction(q)
    da, db = dict(a), dict(b)
    exponent = sum(
        ma * mb for k, ma in da.items() for l, mb in db.items() if k < l
    )
    value = q**exponent
    for k in set(da) | set(db):
        value *= gaussian_binomial(da.get(k, 0) + db.get(k, 0), db.get(k, 0), q)
    return value


# Elements: dict[RayVector, Fraction] over a fixed q (possibly 1).


def ray_el(coeffs: dict) -> dict:
    return {v: Fraction(c) for v, c in coeffs.items() if Fraction(c)}


def ray_mul(x: dict, y: dict, q, cap: int | None = None) -> dict:
    out: dict[RayVector, Fraction] = {}
    for a, xa in x.items():
        for b, yb in y.items():
            c = ray_add(a, b)
            if cap is not None and ray_weight(c) > cap:
                continue
            w = out.get(c, Fraction(0)) + xa * yb * ray_coeff(a, b, q)
            if w:
                out[c] = w
            else:
                out.pop(c, None)
    return out


def ray_addel(x: dict, y: dict) -> dict:
    out = dict(x)
    for v, c in y.items():
        w = out.get(v, Fraction(0)) + c
        if w:
            out[v] = w
        else:
            out.pop(v, None)
    return out


def ray_scale(x: dict, s) -> dict:
    s = Fraction(s)
    return {v: s * c for v, c in x.items()} if s else {}


def ray_exp(x: dict, q, cap: int) -> dict:
    """Exponential series, exact in the weight-truncated algebra."""
    if x.get((), Fraction(0)):
        raise BadConstantTerm("exp needs a vanishing constant term")
    out = {(): Fraction(1)}
    power = {(): Fraction(1)}
    for n in range(1, cap + 1):
        power = ray_mul(power, x, q, cap)
        if not power:
            break
        out = ray_addel(out, ray_scale(power, Fraction(1, factorial(n))))
    return out


def ray_log(x: dict, q, cap: int) -> dict:
    """Logarithm of 1 + nilpotent part, exact in the truncated algebra."""
    if x.get((), Fraction(0)) != 1:
        raise BadConstantTerm("log needs constant term exactly 1")
    rest = {v: c for v, c in x.items() if v != ()}
    out: dict = {}
    power = {(): Fraction(1)}
    for n in range(1, cap + 1):
        power = ray_mul(power, rest, q, cap)
        if not power:
            break
        out = ray_addel(out, ray_scale(power, Fraction((-1) ** (n - 1), n)))
    return out


def ray_to_dclass(cat, s_id: str, v: RayVector):
    from .derived import make_dclass

    items = []
    for k, m in v:
        items.extend([(s_id, 2 * k)] * m)
    return make_dclass(cat, items)


def dclass_to_ray(cat, s_id: str, c) -> RayVector | None:
    """The ray vector of a class, or None if it is not an even-shift power
    of the given indecomposable."""
    s_id = cat.resolve_alias(s_id)
    pairs = []
    for i, s in c:
        if i != s_id or s % 2:
            return None
        pairs.append((s // 2, 1))
    return ray_vec(pairs)

"""Hall polynomials: exact counts as polynomials in the field size q.

Two routes are kept deliberately separate:

  * an interpolation route (the official one): sample filtration counts at
    several primes and Lagrange-fit, extending the prime set until two
    consecutive fits coincide;
  * a closed-form route for the two-vertex quiver, where isomorphism
    classes are determined by (dim at 1, dim at 2, rank of the arrow map)
    and subobject counts reduce to Gaussian binomials.  This is the fast
    path for products and for sampling at large primes; it is validated
    against brute-force subrepresentation enumeration in the test suite.

Polynomials are tuples of Fractions in ascending degree with no trailing
zeros.  The q -> 1 value ("euler value") of a Hall polynomial is the
Euler-characteristic form of the same structure constant.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NoStabilization
from .gf import INTERPOLATION_PRIMES

Poly = tuple[Fraction, ...]


def poly_trim(coeffs) -> Poly:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_eval(poly: Poly, x) -> Fraction:
    val = Fraction(0)
    for c in reversed(poly):
        val = val * x + c
    return val


def lagrange_fit(points: list[tuple[int, int]]) -> Poly:
    """Exact Lagrange interpolation through (x, y) points with distinct x."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        # Build the i-th Lagrange basis polynomial iteratively.
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            denom *= xi - xj
            new = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k] -= c * xj
                new[k + 1] += c
            basis = new
        scale = Fraction(yi) / denom
        for k, c in enumerate(basis):
            coeffs[k] += scale * c
    return poly_trim(coeffs)


def gaussian_binomial(n: int, k: int, q) -> Fraction:
    """[n choose k]_q evaluated exactly at q (integer or Fraction)."""
    if k < 0 or n < 0 or k > n:
        return Fraction(0)
    q = Fraction(q)
    if q == 1:
        from math import comb

        return Fraction(comb(n, k))
    num = Fraction(1)
    den = Fraction(1)
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num / den


# ---------------------------------------------------------------------------
# Closed form for the two-vertex quiver 1 -> 2.
#
# An isomorphism class is the triple (d1, d2, r): dims and the rank of the
# arrow map.  The number of subrepresentations U of L with U of type
# (k1, k2, s) and L/U of type (n1, n2, t) factors as A * B:
#   A counts subspaces U1 of F^{d1} of dim k1 with dim(U1 ∩ ker f) = k1 − s;
#   B counts subspaces U2 ⊇ f(U1) of dim k2 with dim(U2 ∩ im f) = ρ − t.
# Both are classical Grassmannian-with-fixed-intersection counts.
# ---------------------------------------------------------------------------


def a2_hall_closed(m_type, n_type, l_type, q) -> Fraction:
    """Filtration count g^L_{M,N}(q) for the two-vertex quiver.

    Types are (dim at vertex 1, dim at vertex 2, rank).  M is the subobject
    type, N the quotient type, L the ambient type.
    """
    k1, k2, s = m_type
    n1, n2, t = n_type
    d1, d2, rho = l_type
    if k1 + n1 != d1 or k2 + n2 != d2:
        return Fraction(0)
    kappa = d1 - rho  # dim ker f
    j1 = k1 - s  # dim(U1 ∩ ker f)
    j2 = rho - t  # dim(U2 ∩ im f)
    if s < 0 or j1 < 0 or j1 > kappa or s > rho:
        return Fraction(0)
    if j2 < s or j2 > rho or k2 - j2 < 0 or k2 - j2 > d2 - rho:
        return Fraction(0)
    q = Fraction(q)
    a = q ** (s * (kappa - j1)) * gaussian_binomial(kappa, j1, q) * gaussian_binomial(rho, s, q)
    b = q ** ((k2 - j2) * (rho - j2)) * gaussian_binomial(rho - s, j2 - s, q) * gaussian_binomial(d2 - rho, k2 - j2, q)
    return a * b


def stabilized_fit(sampler, degree_budget: int, primes=INTERPOLATION_PRIMES) -> Poly:
    """Interpolate sampler(p) over primes until two consecutive fits agree.

    `sampler` maps a prime to an exact integer/Fraction.  The fit through
    the first k points must equal the fit through the first k+1 points for
    acceptance.  `degree_budget` bounds the polynomial degree that will be
    attempted; the prime list bounds the sample count.
    """
    max_points = min(len(primes), degree_budget + 3)
    points: list[tuple[int, int]] = []
    prev_fit: Poly | None = None
    for p in primes[:max_points]:
        points.append((p, sampler(p)))
        if len(points) >= 2:
            fit = lagrange_fit(points)
            if prev_fit is not None and fit == prev_fit:
                return fit
            prev_fit = fit
    raise NoStabilization(
        f"interpolation did not stabilize within {max_points} primes (degree budget {degree_budget})"
    )

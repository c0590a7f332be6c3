"""quiverhall: exact Hall-algebra computations for type-A quiver categories.

The package computes Ringel–Hall algebras of the module categories of the
linear quivers A1..A4 over small prime fields, Hall algebras of their bounded
derived categories, Harder–Narasimhan filtrations under abelian stability
functions and derived stability conditions, and mechanical verifications of
the wall-crossing identities relating them.  All arithmetic is exact
(integers, rationals, and F_p linear algebra) — no floating point anywhere.
"""

__version__ = "0.1.0"

"""Finite-field quiver representations and their morphism spaces.

A representation assigns F_p^{d_v} to each vertex and a (d_target x d_source)
matrix to each arrow.  Morphism spaces are computed as null spaces of the
commuting-square linear system; subrepresentations are enumerated as tuples
of per-vertex subspaces (RREF bases) closed under the arrow maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import gf
from .errors import DimensionMismatch, FieldMismatch
from .quivers import Quiver, euler_form


@dataclass(frozen=True)
class Representation:
    """A representation of a quiver over F_p.

    Attributes:
        quiver: the underlying quiver.
        p: field characteristic.
        dims: per-vertex dimensions.
        mats: one matrix per arrow, shape (dims[target] x dims[source]),
            stored as tuples of tuples of ints reduced mod p.
    """

    quiver: Quiver
    p: int
    dims: tuple[int, ...]
    mats: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        self.quiver.check_dim(self.dims)
        if len(self.mats) != len(self.quiver.arrows):
            raise DimensionMismatch("one matrix per arrow required")
        for (s, t), m in zip(self.quiver.arrows, self.mats):
            rows, cols = self.dims[t - 1], self.dims[s - 1]
            if len(m) != rows or any(len(r) != cols for r in m):
                raise DimensionMismatch(f"matrix for arrow {s}->{t} must be {rows}x{cols}")

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def mat(self, arrow_index: int) -> list[list[int]]:
        return [list(r) for r in self.mats[arrow_index]]


def make_rep(quiver: Quiver, p: int, dims, mats) -> Representation:
    return Representation(
        quiver,
        p,
        tuple(int(x) for x in dims),
        tuple(tuple(tuple(int(x) % p for x in row) for row in m) for m in mats),
    )


def zero_rep(quiver: Quiver, p: int) -> Representation:
    dims = (0,) * quiver.n
    return make_rep(quiver, p, dims, [[] for _ in quiver.arrows])


def direct_sum(a: Representation, b: Representation) -> Representation:
    if a.quiver is not b.quiver and a.quiver != b.quiver:
        raise FieldMismatch("direct sum requires the same quiver")
    if a.p != b.p:
        raise FieldMismatch(f"direct sum requires the same field, got p={a.p} and p={b.p}")
    dims = tuple(x + y for x, y in zip(a.dims, b.dims))
    mats = []
    for k, (s, t) in enumerate(a.quiver.arrows):
        rows = dims[t - 1]
        cols = dims[s - 1]
        m = gf.zeros(rows, cols)
        am, bm = a.mats[k], b.mats[k]
        for i, row in enumerate(am):
            for j, x in enumerate(row):
                m[i][j] = x
        ro, co = a.dims[t - 1], a.dims[s - 1]
        for i, row in enumerate(bm):
            for j, x in enumerate(row):
                m[ro + i][co + j] = x
        mats.append(m)
    return make_rep(a.quiver, a.p, dims, mats)


def _check_pair(m: Representation, n: Representation):
    if m.quiver != n.quiver:
        raise FieldMismatch("morphisms require the same quiver")
    if m.p != n.p:
        raise FieldMismatch(f"morphisms require the same field, got p={m.p} and p={n.p}")


def hom_space(m: Representation, n: Representation) -> list[tuple[list[list[int]], ...]]:
    """Basis of Hom(m, n) as tuples of per-vertex matrices.

    A morphism f is a tuple (f_v)_v, f_v of shape (n.dims[v] x m.dims[v]),
    subject to f_t @ m_a = n_a @ f_s for every arrow a: s -> t.  The basis
    is the null space of that linear system in the stacked entries of f.
    """
    _check_pair(m, n)
    p = m.p
    q = m.quiver
    # Variable layout: per vertex v, the entries of f_v in row-major order.
    offsets = []
    nvars = 0
    for v in range(q.n):
        offsets.append(nvars)
        nvars += n.dims[v] * m.dims[v]
    if nvars == 0:
        return []

    def var(v: int, i: int, j: int) -> int:
        return offsets[v] + i * m.dims[v] + j

    equations: list[list[int]] = []
    for k, (s, t) in enumerate(q.arrows):
        sv, tv = s - 1, t - 1
        ma, na = m.mats[k], n.mats[k]
        # (f_t @ m_a − n_a @ f_s)[i][j] = 0 for all i < n.dims[t], j < m.dims[s]
        for i in range(n.dims[tv]):
            for j in range(m.dims[sv]):
                row = [0] * nvars
                for l in range(m.dims[tv]):
                    row[var(tv, i, l)] = (row[var(tv, i, l)] + ma[l][j]) % p
                for l in range(n.dims[sv]):
                    row[var(sv, l, j)] = (row[var(sv, l, j)] - na[i][l]) % p
                if any(row):
                    equations.append(row)
    basis_vecs = gf.nullspace(equations, p) if equations else [
        [1 if i == j else 0 for i in range(nvars)] for j in range(nvars)
    ]

    def unflatten(vec: list[int]) -> tuple[list[list[int]], ...]:
        out = []
        for v in range(q.n):
            rows, cols = n.dims[v], m.dims[v]
            block = [[vec[var(v, i, j)] for j in range(cols)] for i in range(rows)]
            out.append(block)
        return tuple(out)

    return [unflatten(v) for v in basis_vecs]


def hom_dim(m: Representation, n: Representation) -> int:
    return len(hom_space(m, n))


def ext_space_dim(m: Representation, n: Representation) -> int:
    """dim Ext¹(m, n) via the hereditary identity hom − ext = <dim m, dim n>."""
    _check_pair(m, n)
    val = hom_dim(m, n) - euler_form(m.quiver, m.dims, n.dims)
    assert val >= 0, "negative Ext dimension: euler form inconsistency"
    return val


def enumerate_subreps(x: Representation, d: tuple[int, ...]):
    """All subrepresentations of x with dimension vector d.

    Yields tuples of per-vertex RREF bases (a basis is a tuple of row
    vectors; the empty tuple is the zero subspace).  A tuple qualifies iff
    each arrow maps the source subspace into the target subspace.
    """
    x.quiver.check_dim(d)
    if any(k < 0 or k > dv for k, dv in zip(d, x.dims)):
        return
    p = x.p
    per_vertex = [list(gf.subspaces(x.dims[v], d[v], p)) for v in range(x.quiver.n)]
    arrow_data = [(s - 1, t - 1, x.mat(k)) for k, (s, t) in enumerate(x.quiver.arrows)]
    for combo in product(*per_vertex):
        ok = True
        for sv, tv, mat in arrow_data:
            # target bases from gf.subspaces are already RREF; recover pivots.
            red = [list(r) for r in combo[tv]]
            pivots = [next(i for i, x_ in enumerate(row) if x_) for row in red] if red else []
            for vec in combo[sv]:
                img = gf.mat_vec(mat, list(vec), p)
                if any(img) and not gf.in_span(img, red, pivots, p):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield combo


def sub_quotient(x: Representation, sub_bases) -> tuple[Representation, Representation]:
    """(subrepresentation, quotient representation) for a closed subspace tuple.

    The sub is expressed in the given bases; the quotient in complement
    coordinates (standard basis vectors completing each RREF basis).
    """
    p = x.p
    q = x.quiver
    sub_dims = tuple(len(b) for b in sub_bases)
    quot_dims = tuple(dv - sv for dv, sv in zip(x.dims, sub_dims))

    # Per vertex: projection to quotient coordinates.  Choose the non-pivot
    # standard coordinates as a complement; the projection sends a vector to
    # its residue's non-pivot coordinates after reduction mod the sub.
    proj = []
    pivots_per_vertex = []
    for v in range(q.n):
        basis = [list(r) for r in sub_bases[v]]
        pivots = [next(i for i, val in enumerate(row) if val) for row in basis] if basis else []
        pivots_per_vertex.append((basis, pivots))
        free = [c for c in range(x.dims[v]) if c not in pivots]
        rows = []
        for c in free:
            # row functional: coordinate c of (vec reduced mod sub)
            row = [0] * x.dims[v]
            row[c] = 1
            rows.append(row)
        proj.append((free, rows))

    sub_mats = []
    quot_mats = []
    for k, (s, t) in enumerate(q.arrows):
        sv, tv = s - 1, t - 1
        mat = x.mat(k)
        # Sub matrix: image of each sub basis vector of source, in target sub basis coords.
        tb, tp = pivots_per_vertex[tv]
        cols = []
        for vec in sub_bases[sv]:
            img = gf.mat_vec(mat, list(vec), p)
            coords = []
            w = img[:]
            for row, c in zip(tb, tp):
                coef = w[c] % p
                coords.append(coef)
                if coef:
                    w = [(a - coef * b) % p for a, b in zip(w, row)]
            assert not any(w), "subspace tuple not closed under arrows"
            cols.append(coords)
        sub_mat = [[cols[j][i] for j in range(sub_dims[sv])] for i in range(sub_dims[tv])]
        sub_mats.append(sub_mat)

        # Quotient matrix: push each complement coordinate of source through
        # the arrow, reduce mod target sub, read complement coordinates.
        sfree, _ = proj[sv]
        tfree, _ = proj[tv]
        qcols = []
        for c in sfree:
            vec = [0] * x.dims[sv]
            vec[c] = 1
            img = gf.mat_vec(mat, vec, p)
            w = gf.reduce_mod_span(img, tb, tp, p)
            qcols.append([w[cc] % p for cc in tfree])
        quot_mat = [[qcols[j][i] for j in range(quot_dims[sv])] for i in range(quot_dims[tv])]
        quot_mats.append(quot_mat)

    sub = make_rep(q, p, sub_dims, sub_mats)
    quot = make_rep(q, p, quot_dims, quot_mats)
    return sub, quot


def end_unit_count(x: Representation, dim_cap: int = 12) -> int:
    """|Aut(x)| by brute-force unit counting in End(x).

    Enumerates all p^dim End(x) endomorphisms and counts the invertible
    ones (invertible iff every vertex matrix is invertible).  Guarded by
    p^dim <= p^dim_cap; intended as an oracle cross-check, not a fast path.
    """
    basis = hom_space(x, x)
    d = len(basis)
    if x.p**d > x.p**dim_cap:
        from .errors import CapExceeded

        raise CapExceeded(f"End dimension {d} too large for brute-force unit counting")
    count = 0
    for coeffs in product(range(x.p), repeat=d):
        mats = [gf.zeros(x.dims[v], x.dims[v]) for v in range(x.quiver.n)]
        for c, b in zip(coeffs, basis):
            if c:
                for v in range(x.quiver.n):
                    mats[v] = gf.mat_add(mats[v], gf.mat_scale(b[v], c, x.p), x.p)
        if all(gf.rank(mats[v], x.p) == x.dims[v] for v in range(x.quiver.n)):
            count += 1
    return count

"""Bounded complexes of projectives over type-A path algebras.

For the linear quiver 1 -> 2 -> ... -> n the indecomposable projectives are
the intervals P_a = [a, n], and Hom(P_a, P_c) is one-dimensional exactly
when c ≤ a, spanned by a canonical "inclusion" map whose composites are
again canonical maps.  Morphisms between direct sums of projectives are
therefore scalar matrices supported on allowed positions (target label ≤
source label), and matrix multiplication realizes composition.  This makes
the homotopy category of bounded projective complexes — a model of the
bounded derived category — computable with plain F_p linear algebra:

  * chain maps and homotopies are solutions of linear systems in the
    allowed matrix entries;
  * morphism spaces in the derived category are chain maps modulo
    null-homotopic ones, enumerated by coset representatives;
  * cones are block complexes, and their cohomology is computed vertexwise
    as ker/im with induced arrow maps, then decomposed through the catalog.

Degree convention: the module class (id, shift s) sits in cohomological
degree −s, so cohomology in degree d contributes summands at shift −d.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from . import gf
from .catalog import IndecompCatalog, ModuleClass
from .errors import DimensionMismatch
from .reps import Representation, make_rep

Matrix = list[list[int]]


def _allowed(dst_label: int, src_label: int) -> bool:
    """Nonzero maps P_src -> P_dst exist exactly when dst ≤ src."""
    return dst_label <= src_label


@dataclass(frozen=True)
class ProjComplex:
    """A bounded complex of direct sums of indecomposable projectives.

    `degrees` maps a cohomological degree to the tuple of projective labels
    (vertex indices a for P_a) of its summands; `diffs` maps degree d to the
    scalar matrix of d^d: C^d -> C^{d+1} (rows indexed by degree-(d+1)
    summands).  Entries at disallowed positions must be zero, and d∘d = 0.
    """

    cat: IndecompCatalog
    p: int
    degrees: tuple[tuple[int, tuple[int, ...]], ...]  # sorted (degree, labels)
    diffs: tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]  # (degree, matrix)

    def __post_init__(self):
        deg = dict(self.degrees)
        dif = dict(self.diffs)
        for d, labels in self.degrees:
            for a in labels:
                if not 1 <= a <= self.cat.quiver.n:
                    raise DimensionMismatch(f"projective label {a} outside vertex range")
        for d, m in self.diffs:
            src = deg.get(d, ())
            dst = deg.get(d + 1, ())
            if len(m) != len(dst) or any(len(row) != len(src) for row in m):
                raise DimensionMismatch(f"differential at degree {d} has the wrong shape")
            for i, row in enumerate(m):
                for j, x in enumerate(row):
                    if x % self.p and not _allowed(dst[i], src[j]):
                        raise DimensionMismatch(
                            f"nonzero entry at disallowed position P_{src[j]} -> P_{dst[i]}"
                        )
        # d ∘ d = 0
        for d in dif:
            if d + 1 in dif:
                prod = gf.mat_mul([list(r) for r in dif[d + 1]], [list(r) for r in dif[d]], self.p)
                if any(any(row) for row in prod):
                    raise DimensionMismatch(f"d∘d ≠ 0 between degrees {d} and {d + 2}")

    # -- access helpers ------------------------------------------------------

    def labels(self, d: int) -> tuple[int, ...]:
        return dict(self.degrees).get(d, ())

    def diff(self, d: int) -> Matrix:
        m = dict(self.diffs).get(d)
        if m is None:
            return [[0] * len(self.labels(d)) for _ in range(len(self.labels(d + 1)))]
        return [list(r) for r in m]

    @property
    def support(self) -> list[int]:
        return sorted(d for d, labels in self.degrees if labels)

    def __bool__(self):
        return bool(self.support)


def make_complex(cat: IndecompCatalog, p: int, degrees: dict, diffs: dict) -> ProjComplex:
    deg = tuple(sorted((d, tuple(labels)) for d, labels in degrees.items() if labels))
    keep = {d for d, _ in deg}
    dif = tuple(
        sorted(
            (d, tuple(tuple(int(x) % p for x in row) for row in m))
            for d, m in diffs.items()
            if d in keep and (d + 1) in keep
        )
    )
    return ProjComplex(cat, p, deg, dif)


def resolve_class(cat: IndecompCatalog, dclass, p: int) -> ProjComplex:
    """Canonical projective resolution of a multiset of shifted indecomposables.

    The module [a,b] at shift s contributes P_a in degree −s, and (when
    b < n) P_{b+1} in degree −s−1 mapping in by the canonical inclusion.
    """
    n = cat.quiver.n
    degrees: dict[int, list[int]] = {}
    blocks: list[tuple[int, int, int | None, int | None]] = []  # (deg0, pos0, deg1, pos1)
    for id_, s in dclass:
        a, b = cat.entry(id_).interval
        d0 = -s
        degrees.setdefault(d0, []).append(a)
        pos0 = len(degrees[d0]) - 1
        if b < n:
            d1 = -s - 1
            degrees.setdefault(d1, []).append(b + 1)
            blocks.append((d0, pos0, d1, len(degrees[d1]) - 1))
    diffs: dict[int, Matrix] = {}
    for d in degrees:
        if d + 1 in degrees:
            diffs[d] = [[0] * len(degrees[d]) for _ in range(len(degrees[d + 1]))]
    for d0, pos0, d1, pos1 in blocks:
        diffs[d1][pos0][pos1] = 1
    return make_complex(cat, p, degrees, diffs)


# ---------------------------------------------------------------------------
# Degreewise representations (for cohomology)
# ---------------------------------------------------------------------------


def _vertex_coords(labels: tuple[int, ...], v: int) -> list[int]:
    """Indices of summands P_a with a nonzero space at vertex v (a ≤ v)."""
    return [i for i, a in enumerate(labels) if a <= v]


def _vertex_matrix(mat: Matrix, src_labels, dst_labels, v: int, p: int) -> Matrix:
    """Realization of a scalar matrix at vertex v (rows/cols filtered)."""
    rows = _vertex_coords(dst_labels, v)
    cols = _vertex_coords(src_labels, v)
    return [[mat[i][j] % p for j in cols] for i in rows]


def _arrow_matrix(labels: tuple[int, ...], v: int) -> Matrix:
    """Per-vertex matrix of the arrow v -> v+1 on a sum of projectives.

    Each P_a contributes the identity where both spaces are nonzero.
    """
    rows = _vertex_coords(labels, v + 1)
    cols = _vertex_coords(labels, v)
    return [[1 if r == c else 0 for c in cols] for r in rows]


def _coh_data(x: ProjComplex, d: int) -> tuple[list[list[list[int]]], list[list[list[int]]]]:
    """(image bases, cohomology coset-representative bases) per vertex at degree d."""
    p = x.p
    q = x.cat.quiver
    labels = x.labels(d)
    images, reps = [], []
    for v in range(1, q.n + 1):
        dim_v = len(_vertex_coords(labels, v))
        identity = [[1 if i == j else 0 for i in range(dim_v)] for j in range(dim_v)]
        if x.labels(d + 1):
            mat = _vertex_matrix(x.diff(d), labels, x.labels(d + 1), v, p)
            kernel = gf.nullspace(mat, p) if mat else identity
        else:
            kernel = identity
        if x.labels(d - 1):
            pmat = _vertex_matrix(x.diff(d - 1), x.labels(d - 1), labels, v, p)
            image = [list(col) for col in zip(*pmat)] if pmat and pmat[0] else []
        else:
            image = []
        image_red, _ = gf.rref(image, p) if image else ([], [])
        images.append(image_red)
        reps.append(gf.complement_basis(image_red, kernel, p))
    return images, reps


def _express_in_cohomology(images, reps, v: int, vec: list[int], p: int) -> list[int] | None:
    """Coordinates of a kernel vector in the cohomology basis at vertex v."""
    span = images[v - 1] + reps[v - 1]
    if not span:
        return [] if not any(vec) else None
    coeffs = gf.solve([list(col) for col in zip(*span)], vec, p)
    if coeffs is None:
        return None
    return [c % p for c in coeffs[len(images[v - 1]) :]]


def cohomology_reps(x: ProjComplex) -> dict[int, Representation]:
    """Cohomology of the complex, degree by degree, as quiver representations.

    At each degree and vertex, cohomology is ker/im with a basis of coset
    representatives extending the image; arrow maps are induced from the
    degreewise inclusion pattern by reduction modulo the image.
    """
    p = x.p
    q = x.cat.quiver
    out: dict[int, Representation] = {}
    for d in sorted({deg for deg, _ in x.degrees}):
        labels = x.labels(d)
        images, reps = _coh_data(x, d)
        dims = tuple(len(b) for b in reps)
        if not any(dims):
            continue
        mats = []
        for (sv, tv) in q.arrows:
            arrow = _arrow_matrix(labels, sv)
            cols = []
            for vec in reps[sv - 1]:
                img = gf.mat_vec(arrow, vec, p) if arrow else []
                coords = _express_in_cohomology(images, reps, tv, img, p)
                assert coords is not None, "induced arrow image escapes cohomology span"
                cols.append(coords)
            mat = [[cols[j][i] for j in range(dims[sv - 1])] for i in range(dims[tv - 1])]
            mats.append(mat)
        out[d] = make_rep(q, p, dims, mats)
    return out


def cohomology_classes(x: ProjComplex) -> dict[int, ModuleClass]:
    """Krull–Schmidt classes of the cohomology, degree by degree."""
    return {d: x.cat.decompose(rep) for d, rep in cohomology_reps(x).items()}


# ---------------------------------------------------------------------------
# Chain maps, homotopies, cones
# ---------------------------------------------------------------------------


class _VarLayout:
    """Variable layout for per-degree scalar matrices with allowed support."""

    def __init__(self, x: ProjComplex, y: ProjComplex, offset: int):
        # Variables for maps x^d -> y^{d + offset}.
        self.slots: list[tuple[int, int, int]] = []  # (degree, row, col)
        self.index: dict[tuple[int, int, int], int] = {}
        degs = sorted({d for d, _ in x.degrees} | {d - offset for d, _ in y.degrees})
        self.degrees = degs
        for d in degs:
            src = x.labels(d)
            dst = y.labels(d + offset)
            for i, ai in enumerate(dst):
                for j, aj in enumerate(src):
                    if _allowed(ai, aj):
                        self.index[(d, i, j)] = len(self.slots)
                        self.slots.append((d, i, j))

    @property
    def nvars(self) -> int:
        return len(self.slots)

    def matrices(self, vec: list[int], x: ProjComplex, y: ProjComplex, offset: int, p: int) -> dict[int, Matrix]:
        out: dict[int, Matrix] = {}
        for d in self.degrees:
            src = x.labels(d)
            dst = y.labels(d + offset)
            m = [[0] * len(src) for _ in range(len(dst))]
            for i in range(len(dst)):
                for j in range(len(src)):
                    k = self.index.get((d, i, j))
                    if k is not None:
                        m[i][j] = vec[k] % p
            out[d] = m
        return out


def _chain_map_system(x: ProjComplex, y: ProjComplex):
    """Layout and equations for degree-0 maps commuting with differentials."""
    p = x.p
    layout = _VarLayout(x, y, 0)
    equations: list[list[int]] = []
    for d in layout.degrees:
        # f^{d+1} ∘ dX^d  =  dY^d ∘ f^d   (rows: y-labels at d+1, cols: x at d)
        xs = x.labels(d)
        yd1 = y.labels(d + 1)
        if not xs or not yd1:
            continue
        dx = x.diff(d)
        dy = y.diff(d)
        xs1 = x.labels(d + 1)
        ysd = y.labels(d)
        for i in range(len(yd1)):
            for j in range(len(xs)):
                row = [0] * layout.nvars
                for k in range(len(xs1)):
                    idx = layout.index.get((d + 1, i, k))
                    if idx is not None and dx[k][j] % p:
                        row[idx] = (row[idx] + dx[k][j]) % p
                for k in range(len(ysd)):
                    idx = layout.index.get((d, k, j))
                    if idx is not None and dy[i][k] % p:
                        row[idx] = (row[idx] - dy[i][k]) % p
                if any(row):
                    equations.append(row)
    return layout, equations


def chain_map_basis(x: ProjComplex, y: ProjComplex) -> tuple["_VarLayout", list[list[int]]]:
    layout, equations = _chain_map_system(x, y)
    if layout.nvars == 0:
        return layout, []
    if not equations:
        return layout, [[1 if i == j else 0 for i in range(layout.nvars)] for j in range(layout.nvars)]
    return layout, gf.nullspace(equations, x.p)


def homotopy_boundaries(x: ProjComplex, y: ProjComplex, layout: "_VarLayout") -> list[list[int]]:
    """Chain maps of the form dY∘h + h∘dX, in the layout's coordinates."""
    p = x.p
    hlayout = _VarLayout(x, y, -1)
    out = []
    for k in range(hlayout.nvars):
        hvec = [0] * hlayout.nvars
        hvec[k] = 1
        hmats = hlayout.matrices(hvec, x, y, -1, p)
        vec = [0] * layout.nvars
        for d in layout.degrees:
            xs = x.labels(d)
            ys = y.labels(d)
            if not xs or not ys:
                continue
            h_d = hmats.get(d, [[0] * len(xs) for _ in range(len(y.labels(d - 1)))])
            h_d1 = hmats.get(d + 1, [[0] * len(x.labels(d + 1)) for _ in range(len(ys))])
            term1 = gf.mat_mul(y.diff(d - 1), h_d, p) if y.labels(d - 1) else [[0] * len(xs) for _ in range(len(ys))]
            term2 = gf.mat_mul(h_d1, x.diff(d), p) if x.labels(d + 1) else [[0] * len(xs) for _ in range(len(ys))]
            total = gf.mat_add(term1, term2, p)
            for i in range(len(ys)):
                for j in range(len(xs)):
                    idx = layout.index.get((d, i, j))
                    if total[i][j] % p:
                        assert idx is not None, "homotopy boundary hit a disallowed entry"
                        vec[idx] = total[i][j] % p
        if any(vec):
            out.append(vec)
    return out


@dataclass(frozen=True)
class DMorphism:
    """A morphism in the homotopy category: a chain map between resolutions."""

    src: ProjComplex
    dst: ProjComplex
    coords: tuple[int, ...]  # coordinates in the source->dst variable layout

    def matrices(self, layout: "_VarLayout") -> dict[int, Matrix]:
        return layout.matrices(list(self.coords), self.src, self.dst, 0, self.src.p)


class HomSpace:
    """Hom in the homotopy category between two complexes.

    Holds the chain-map space, the null-homotopic subspace, and coset
    representatives; `dim` is the derived Hom dimension and `elements()`
    iterates one chain map per homotopy class (q^dim of them).
    """

    def __init__(self, x: ProjComplex, y: ProjComplex):
        self.x = x
        self.y = y
        self.p = x.p
        self.layout, self.chain_basis = chain_map_basis(x, y)
        boundaries = homotopy_boundaries(x, y, self.layout)
        bred, _ = gf.rref(boundaries, self.p) if boundaries else ([], [])
        if bred:
            chain_red, chain_piv = gf.rref(self.chain_basis, self.p)
            assert all(gf.in_span(b, chain_red, chain_piv, self.p) for b in bred), (
                "null-homotopic map is not a chain map"
            )
        self.coset_reps = gf.complement_basis(bred, self.chain_basis, self.p)
        self.boundary_basis = bred
        self.boundary_dim = len(bred)

    @property
    def dim(self) -> int:
        return len(self.coset_reps)

    def elements(self):
        """One DMorphism per homotopy class."""
        n = len(self.coset_reps)
        for coeffs in iproduct(range(self.p), repeat=n):
            vec = [0] * self.layout.nvars
            for c, basis in zip(coeffs, self.coset_reps):
                if c:
                    for i, b in enumerate(basis):
                        vec[i] = (vec[i] + c * b) % self.p
            yield DMorphism(self.x, self.y, tuple(vec))

    def zero(self) -> DMorphism:
        return DMorphism(self.x, self.y, tuple([0] * self.layout.nvars))


def cone_of(f: DMorphism, layout: "_VarLayout") -> ProjComplex:
    """Mapping cone: Z^d = X^{d+1} ⊕ Y^d with differential [[−dX, 0], [f, dY]]."""
    x, y = f.src, f.dst
    p = x.p
    fmats = f.matrices(layout)
    degrees: dict[int, list[int]] = {}
    all_d = sorted({d - 1 for d, _ in x.degrees} | {d for d, _ in y.degrees})
    for d in all_d:
        labels = list(x.labels(d + 1)) + list(y.labels(d))
        if labels:
            degrees[d] = labels
    diffs: dict[int, Matrix] = {}
    for d in all_d:
        if d + 1 not in degrees or d not in degrees:
            continue
        xs1, ys = x.labels(d + 1), y.labels(d)
        xs2, ys1 = x.labels(d + 2), y.labels(d + 1)
        rows = len(xs2) + len(ys1)
        cols = len(xs1) + len(ys)
        m = [[0] * cols for _ in range(rows)]
        dx = x.diff(d + 1)
        dy = y.diff(d)
        fm = fmats.get(d + 1, [[0] * len(xs1) for _ in range(len(ys1))])
        for i in range(len(xs2)):
            for j in range(len(xs1)):
                m[i][j] = (-dx[i][j]) % p
        for i in range(len(ys1)):
            for j in range(len(xs1)):
                m[len(xs2) + i][j] = fm[i][j] % p
        for i in range(len(ys1)):
            for j in range(len(ys)):
                m[len(xs2) + i][len(xs1) + j] = dy[i][j] % p
        diffs[d] = m
    return make_complex(x.cat, p, degrees, diffs)


def induced_cohomology_iso(f: DMorphism, layout: "_VarLayout") -> bool:
    """Does the chain map induce isomorphisms on all cohomologies?

    Used for brute-force automorphism counting: a self-map of a bounded
    complex of projectives is invertible in the homotopy category exactly
    when it is a quasi-isomorphism.
    """
    x, y = f.src, f.dst
    p = x.p
    q = x.cat.quiver
    fmats = f.matrices(layout)
    degrees = {d for d, _ in x.degrees} | {d for d, _ in y.degrees}
    for d in sorted(degrees):
        ximages, xreps = _coh_data(x, d)
        yimages, yreps = _coh_data(y, d)
        if [len(b) for b in xreps] != [len(b) for b in yreps]:
            return False
        fm = fmats.get(d, [[0] * len(x.labels(d)) for _ in range(len(y.labels(d)))])
        for v in range(1, q.n + 1):
            if not xreps[v - 1]:
                continue
            fv = _vertex_matrix(fm, x.labels(d), y.labels(d), v, p)
            cols = []
            for vec in xreps[v - 1]:
                img = gf.mat_vec(fv, vec, p) if fv else []
                coords = _express_in_cohomology(yimages, yreps, v, img, p)
                if coords is None:
                    return False
                cols.append(coords)
            mat = [[cols[j][i] for j in range(len(xreps[v - 1]))] for i in range(len(yreps[v - 1]))]
            if gf.rank(mat, p) != len(yreps[v - 1]):
                return False
    return True

"""Exact linear algebra over prime fields F_p.

Matrices are plain lists of lists of ints reduced mod p (rows of equal
length); vectors are lists of ints.  Everything is exact — no floating
point anywhere.  The routines are deliberately simple Gaussian-elimination
code: per-vertex dimensions in all supported computations are tiny (≤ 6),
so asymptotics are irrelevant and transparency wins.
"""

from __future__ import annotations

from itertools import combinations, product

ALLOWED_PRIMES = (2, 3, 5, 7, 11)

# Primes used for polynomial interpolation sampling only (never exposed as
# a field preset for direct computations).
INTERPOLATION_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    """Validate a field characteristic against the allowlist."""
    if p not in ALLOWED_PRIMES:
        raise ValueError(f"field characteristic must be one of {ALLOWED_PRIMES}, got {p}")
    return p


def zeros(rows: int, cols: int) -> list[list[int]]:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> list[list[int]]:
    mat = zeros(n, n)
    for i in range(n):
        mat[i][i] = 1
    return mat


def mat_mul(a: list[list[int]], b: list[list[int]], p: int) -> list[list[int]]:
    """Matrix product a @ b over F_p; shapes (m x k) @ (k x n)."""
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} @ {len(b)}x{len(b[0])}")
    if not a or not b:
        return zeros(len(a), len(b[0]) if b else 0)
    n = len(b[0])
    out = zeros(len(a), n)
    for i, row in enumerate(a):
        oi = out[i]
        for k, aik in enumerate(row):
            if aik:
                brow = b[k]
                for j in range(n):
                    oi[j] = (oi[j] + aik * brow[j]) % p
    return out


def mat_vec(a: list[list[int]], v: list[int], p: int) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) % p for row in a]


def mat_add(a: list[list[int]], b: list[list[int]], p: int, sign: int = 1) -> list[list[int]]:
    return [[(x + sign * y) % p for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: list[list[int]], c: int, p: int) -> list[list[int]]:
    return [[(c * x) % p for x in row] for row in a]


def transpose(a: list[list[int]]) -> list[list[int]]:
    return [list(col) for col in zip(*a)] if a else []


def rref(mat: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over F_p.

    Returns (nonzero rows of the RREF, pivot column indices).
    """
    m = [row[:] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if m[i][c] % p), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = pow(m[r][c], p - 2, p) if p > 2 else m[r][c]
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] % p:
                f = m[i][c] % p
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m[:r], pivots


def rank(mat: list[list[int]], p: int) -> int:
    return len(rref(mat, p)[0])


def nullspace(mat: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the right null space {v : mat @ v = 0} over F_p."""
    if not mat:
        return []
    cols = len(mat[0])
    red, pivots = rref(mat, p)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-red[r][fc]) % p
        basis.append(v)
    return basis


def solve(mat: list[list[int]], rhs: list[int], p: int) -> list[int] | None:
    """One solution of mat @ x = rhs over F_p, or None if inconsistent."""
    if not mat:
        return [] if not any(x % p for x in rhs) else None
    cols = len(mat[0])
    aug = [row[:] + [b % p] for row, b in zip(mat, rhs)]
    red, pivots = rref(aug, p)
    for row in red:
        if not any(x for x in row[:cols]) and row[cols]:
            return None
    x = [0] * cols
    for r, pc in enumerate(pivots):
        if pc < cols:
            x[pc] = red[r][cols]
        elif red[r][cols]:
            return None
    return x


def reduce_mod_span(v: list[int], basis_rref: list[list[int]], pivots: list[int], p: int) -> list[int]:
    """Reduce a vector modulo the row span of an RREF basis."""
    w = [x % p for x in v]
    for row, c in zip(basis_rref, pivots):
        if w[c]:
            f = w[c]
            w = [(x - f * y) % p for x, y in zip(w, row)]
    return w


def in_span(v: list[int], basis_rref: list[list[int]], pivots: list[int], p: int) -> bool:
    return not any(reduce_mod_span(v, basis_rref, pivots, p))


def complement_basis(sub: list[list[int]], ambient: list[list[int]], p: int) -> list[list[int]]:
    """Vectors from `ambient` extending a basis of span(sub) to span(ambient).

    Both inputs are lists of vectors (not necessarily reduced).  The result
    is the chosen subset of `ambient` whose classes form a basis of
    span(ambient)/span(sub).
    """
    red, pivots = rref(sub, p) if sub else ([], [])
    out = []
    for v in ambient:
        if not in_span(v, red, pivots, p):
            out.append(v)
            red, pivots = rref(red + [v], p)
    return out


def preimage(proj: list[list[int]], target: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the preimage {x : proj @ x in span(target rows)} over F_p.

    `proj` is an (m x n) matrix; `target` is a list of m-vectors spanning a
    subspace of the codomain.  The preimage is the x-projection of the null
    space of the block matrix [proj | -target^T]; the result is returned as
    a row-reduced basis.
    """
    if not proj:
        return []
    n = len(proj[0])
    block = [row[:] + [(-t[i]) % p for t in target] for i, row in enumerate(proj)]
    kernel = nullspace(block, p)
    xs = [v[:n] for v in kernel]
    red, _ = rref(xs, p) if xs else ([], [])
    return red


def gl_order(n: int, q: int) -> int:
    """|GL_n(F_q)|."""
    total = 1
    for i in range(n):
        total *= q**n - q**i
    return total


def subspaces(d: int, k: int, p: int):
    """Iterate all k-dimensional subspaces of F_p^d as RREF row bases.

    Standard enumeration: choose pivot columns, then fill the free entries
    (positions right of each pivot that are not pivot columns).
    """
    if k < 0 or k > d:
        return
    if k == 0:
        yield ()
        return
    for pivots in combinations(range(d), k):
        free_positions = []
        for r, pc in enumerate(pivots):
            for c in range(pc + 1, d):
                if c not in pivots:
                    free_positions.append((r, c))
        for values in product(range(p), repeat=len(free_positions)):
            rows = [[0] * d for _ in range(k)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), val in zip(free_positions, values):
                rows[r][c] = val
            yield tuple(tuple(row) for row in rows)


def num_subspaces(d: int, k: int, q: int) -> int:
    """Gaussian binomial [d choose k]_q as an exact integer."""
    if k < 0 or k > d:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den

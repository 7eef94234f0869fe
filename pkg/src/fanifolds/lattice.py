"""Exact integer lattice arithmetic: Smith normal form, quotients, annihilators.

Everything works on plain Python ints (arbitrary precision), vectors are
tuples, matrices are tuples of row tuples.  A matrix M maps column vectors on
the right: (M @ v)[i] = sum_j M[i][j] * v[j].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]


# ---------------------------------------------------------------------------
# small matrix/vector helpers


def vec(xs: Iterable[int]) -> Vec:
    return tuple(int(x) for x in xs)


def mat(rows: Iterable[Iterable[int]]) -> Mat:
    return tuple(vec(r) for r in rows)


def identity_matrix(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zero_vector(n: int) -> Vec:
    return (0,) * n


def mat_shape(m: Mat) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def mat_mul(a: Mat, b: Mat) -> Mat:
    rows_a = len(a)
    if rows_a == 0:
        return ()
    inner = len(a[0])
    cols_b = len(b[0]) if b else 0
    if inner != len(b):
        raise ValueError(f"shape mismatch: {mat_shape(a)} @ {mat_shape(b)}")
    bt = list(zip(*b)) if b else []
    return tuple(
        tuple(sum(ra[k] * bc[k] for k in range(inner)) for bc in bt) for ra in a
    )


def mat_vec(m: Mat, v: Sequence[int]) -> Vec:
    if m and len(m[0]) != len(v):
        raise ValueError(f"shape mismatch: {mat_shape(m)} @ vec{len(v)}")
    return tuple(sum(r[k] * v[k] for k in range(len(v))) for r in m)


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def vec_add(u: Sequence[int], v: Sequence[int]) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence[int], v: Sequence[int]) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: int, v: Sequence[int]) -> Vec:
    return tuple(c * a for a in v)


def content(v: Sequence[int]) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for a in v:
        g = gcd(g, abs(a))
    return g


def primitivize(v: Sequence[int]) -> Vec:
    """Divide a nonzero integer vector by the gcd of its entries."""
    g = content(v)
    if g == 0:
        return vec(v)
    return tuple(a // g for a in v)


def det(m: Mat) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def matrix_rank(m: Mat) -> int:
    """Rank over Q, by fraction elimination (exact)."""
    rows = [[Fraction(x) for x in r] for r in m]
    rank = 0
    ncols = len(m[0]) if m else 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / pr[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
        col += 1
    return rank


def invert_unimodular(m: Mat) -> Mat:
    """Inverse of an integer matrix with determinant +-1."""
    n = len(m)
    d = det(m)
    if d not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det = {d})")
    # Gauss-Jordan over Q; the result is integral because |det| = 1.
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pr = aug[col]
        inv = 1 / pr[col]
        aug[col] = [a * inv for a in pr]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    out = []
    for r in aug:
        row = r[n:]
        assert all(x.denominator == 1 for x in row)
        out.append(tuple(int(x) for x in row))
    return tuple(out)


def is_unimodular(m: Mat) -> bool:
    return len(m) == (len(m[0]) if m else 0) and det(m) in (1, -1)


# ---------------------------------------------------------------------------
# lattices and maps


@dataclass(frozen=True)
class Lattice:
    """A finitely generated free Z-module with a chosen basis."""

    rank: int

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")

    def zero(self) -> Vec:
        return zero_vector(self.rank)

    def contains(self, v: Sequence[int]) -> bool:
        return len(v) == self.rank and all(isinstance(x, int) for x in v)


@dataclass(frozen=True)
class LatticeMap:
    """Z-linear map given by an integer matrix (source rank = #columns)."""

    matrix: Mat
    source: Lattice
    target: Lattice

    def __post_init__(self):
        rows, cols = mat_shape(self.matrix)
        if rows != self.target.rank and not (rows == 0 and self.target.rank == 0):
            raise ValueError("matrix rows != target rank")
        if rows and cols != self.source.rank:
            raise ValueError("matrix cols != source rank")

    def __call__(self, v: Sequence[int]) -> Vec:
        if self.target.rank == 0:
            return ()
        return mat_vec(self.matrix, v)

    def compose(self, other: "LatticeMap") -> "LatticeMap":
        """self after other."""
        if other.target.rank != self.source.rank:
            raise ValueError("composition rank mismatch")
        if self.target.rank == 0 or other.source.rank == 0:
            m = tuple(() for _ in range(self.target.rank))
        else:
            m = mat_mul(self.matrix, other.matrix)
        return LatticeMap(m, other.source, self.target)

    def is_unimodular(self) -> bool:
        return self.source.rank == self.target.rank and (
            self.source.rank == 0 or det(self.matrix) in (1, -1)
        )


def lattice_map(rows: Iterable[Iterable[int]], source_rank: int, target_rank: int) -> LatticeMap:
    m = mat(rows)
    if target_rank == 0:
        m = ()
    return LatticeMap(m, Lattice(source_rank), Lattice(target_rank))


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFResult:
    """Decomposition A = U @ D @ V with U, V unimodular and D diagonal.

    The diagonal entries are nonnegative and satisfy d1 | d2 | ... ; trailing
    entries may be zero.
    """

    U: Mat
    D: Mat
    V: Mat

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(mat_shape(self.D))))

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 0)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


class _SNFWork:
    """Mutable state for the SNF reduction, maintaining A = U @ D @ V."""

    def __init__(self, a: Mat):
        self.m, self.n = mat_shape(a)
        self.D = [list(r) for r in a]
        self.U = [list(r) for r in identity_matrix(self.m)]
        self.V = [list(r) for r in identity_matrix(self.n)]

    # Row ops act as D <- E @ D, so U <- U @ E^-1 (column ops on U).
    def swap_rows(self, i, j):
        if i == j:
            return
        self.D[i], self.D[j] = self.D[j], self.D[i]
        for r in self.U:
            r[i], r[j] = r[j], r[i]

    def add_row(self, i, j, q):
        """row i += q * row j."""
        if q == 0:
            return
        Di, Dj = self.D[i], self.D[j]
        for k in range(self.n):
            Di[k] += q * Dj[k]
        for r in self.U:
            r[j] -= q * r[i]

    def negate_row(self, i):
        self.D[i] = [-x for x in self.D[i]]
        for r in self.U:
            r[i] = -r[i]

    # Column ops act as D <- D @ F, so V <- F^-1 @ V (row ops on V).
    def swap_cols(self, i, j):
        if i == j:
            return
        for r in self.D:
            r[i], r[j] = r[j], r[i]
        self.V[i], self.V[j] = self.V[j], self.V[i]

    def add_col(self, i, j, q):
        """col i += q * col j."""
        if q == 0:
            return
        for r in self.D:
            r[i] += q * r[j]
        Vi, Vj = self.V[i], self.V[j]
        for k in range(self.n):
            Vj[k] -= q * Vi[k]

    def find_pivot(self, s):
        """Smallest-absolute-value nonzero entry of D[s:, s:], row-major ties."""
        best = None
        best_abs = None
        for i in range(s, self.m):
            row = self.D[i]
            for j in range(s, self.n):
                x = row[j]
                if x != 0 and (best_abs is None or abs(x) < best_abs):
                    best = (i, j)
                    best_abs = abs(x)
                    if best_abs == 1:
                        return best
        return best

    def clear_at(self, s):
        """Diagonalize position s; returns False when the tail block is zero."""
        while True:
            piv = self.find_pivot(s)
            if piv is None:
                return False
            self.swap_rows(s, piv[0])
            self.swap_cols(s, piv[1])
            if self.D[s][s] < 0:
                self.negate_row(s)
            p = self.D[s][s]
            # Row elimination first, then column elimination (pinned order).
            for i in range(s + 1, self.m):
                self.add_row(i, s, -(self.D[i][s] // p))
            for j in range(s + 1, self.n):
                self.add_col(j, s, -(self.D[s][j] // p))
            if all(self.D[i][s] == 0 for i in range(s + 1, self.m)) and all(
                self.D[s][j] == 0 for j in range(s + 1, self.n)
            ):
                return True

    def clear_pair(self, s):
        """Re-diagonalize the 2x2 block at (s, s) after a chain-fix fold.

        Only rows/columns s and s+1 are touched; everything outside the block
        in those rows and columns is zero and stays zero.
        """
        t = s + 1
        while True:
            entries = [(i, j) for i in (s, t) for j in (s, t) if self.D[i][j] != 0]
            if not entries:
                return
            i, j = min(entries, key=lambda ij: (abs(self.D[ij[0]][ij[1]]), ij))
            self.swap_rows(s, i)
            self.swap_cols(s, j)
            if self.D[s][s] < 0:
                self.negate_row(s)
            p = self.D[s][s]
            self.add_row(t, s, -(self.D[t][s] // p))
            self.add_col(t, s, -(self.D[s][t] // p))
            if self.D[t][s] == 0 and self.D[s][t] == 0:
                return


def smith_normal_form(a: Mat | Iterable[Iterable[int]]) -> SNFResult:
    """Smith normal form A = U @ D @ V over Z.

    The reduction repeatedly moves the smallest-absolute-value entry of the
    remaining block to the pivot position and eliminates its row and column
    (rows first); afterwards the diagonal is fixed up to satisfy the
    divisibility chain.  The pivoting rule makes the transforms reproducible.
    """
    a = mat(a)
    w = _SNFWork(a)
    r = 0
    for s in range(min(w.m, w.n)):
        if not w.clear_at(s):
            break
        r += 1
    # Enforce d1 | d2 | ...: a violating pair (ds, dt) is fixed by folding
    # column s+1 into column s and re-eliminating the 2x2 block, which
    # replaces ds by gcd(ds, dt).  Earlier entries still divide the new gcd,
    # later ones may need a rescan, so restart; ds strictly drops each fix.
    while True:
        for i in range(r):
            if w.D[i][i] < 0:
                w.negate_row(i)
        bad = next((s for s in range(r - 1) if w.D[s + 1][s + 1] % w.D[s][s] != 0), None)
        if bad is None:
            break
        w.add_col(bad, bad + 1, 1)
        w.clear_pair(bad)
    U = mat(w.U)
    D = mat(w.D)
    V = mat(w.V)
    result = SNFResult(U, D, V)
    assert mat_mul(mat_mul(U, D), V) == a, "SNF reconstruction failed"
    return result


# ---------------------------------------------------------------------------
# quotients and annihilators


@dataclass(frozen=True)
class QuotientResult:
    """M / span(vectors): free part with projection, plus torsion invariants.

    ``projection`` maps M onto the free quotient Z^free_rank (kernel = the
    saturation of the span); ``section`` is a right inverse of it;
    ``torsion`` lists the invariant factors > 1 of M / Zspan(vectors).
    """

    free_rank: int
    torsion: tuple[int, ...]
    projection: LatticeMap
    section: LatticeMap
    span_rank: int

    @property
    def has_torsion(self) -> bool:
        return bool(self.torsion)


def quotient_with_torsion(ambient_rank: int, vectors: Sequence[Sequence[int]]) -> QuotientResult:
    """Quotient of Z^ambient_rank by the integer span of the given vectors."""
    for v in vectors:
        if len(v) != ambient_rank:
            raise ValueError("vector length != ambient rank")
    n = ambient_rank
    k = len(vectors)
    if k == 0:
        b: Mat = tuple((0,) * 0 for _ in range(n)) if n else ()
        snf = SNFResult(identity_matrix(n), tuple(() for _ in range(n)), ())
        rank = 0
    else:
        b = tuple(zip(*[vec(v) for v in vectors]))  # n x k, columns = vectors
        snf = smith_normal_form(b)
        rank = snf.rank
    uinv = invert_unimodular(snf.U) if n else ()
    free = n - rank
    proj_rows = uinv[rank:] if n else ()
    # section: columns rank..n of U, i.e. rows of U^T
    ucols = transpose(snf.U)
    sec_cols = ucols[rank:]
    sec = transpose(sec_cols) if free else tuple(() for _ in range(n))
    return QuotientResult(
        free_rank=free,
        torsion=snf.torsion,
        projection=lattice_map(proj_rows, n, free),
        section=lattice_map(sec, free, n),
        span_rank=rank,
    )


@dataclass(frozen=True)
class AnnihilatorResult:
    """Dual sublattice {u : <u, v> = 0 for all v}, with component group data."""

    basis: Mat  # rows form a basis of the annihilator in the dual lattice
    component_group: tuple[int, ...]  # invariant factors > 1 of M / Zspan

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def group_order(self) -> int:
        order = 1
        for d in self.component_group:
            order *= d
        return order


def annihilator(ambient_rank: int, vectors: Sequence[Sequence[int]]) -> AnnihilatorResult:
    """Basis of {u in dual(Z^n) : u.v = 0 for all given v}.

    The component group records the torsion of Z^n / Zspan(vectors); it is the
    pi_0 of the subgroup of the compact torus dual cut out by the vectors (the
    finite part that shows up alongside non-primitive generator data).
    """
    q = quotient_with_torsion(ambient_rank, vectors)
    return AnnihilatorResult(basis=q.projection.matrix, component_group=q.torsion)


def solve_integer(a: Mat, b: Sequence[int]) -> Vec | None:
    """One integer solution x of A x = b, or None if none exists."""
    m, n = mat_shape(a)
    if len(b) != m:
        raise ValueError("rhs length mismatch")
    if m == 0:
        return (0,) * n
    snf = smith_normal_form(a)
    c = mat_vec(invert_unimodular(snf.U), b)
    diag = snf.diagonal
    y = [0] * n
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            if i < n:
                y[i] = c[i] // d
    return mat_vec(invert_unimodular(snf.V), y) if n else ()


def right_inverse(a: Mat, rows: int, cols: int) -> Mat:
    """Integer right inverse of a surjective map Z^cols -> Z^rows."""
    if rows == 0:
        return tuple(() for _ in range(cols)) if cols else ()
    snf = smith_normal_form(a)
    if snf.invariant_factors != (1,) * rows:
        raise ValueError("map is not surjective onto the lattice")
    vinv = invert_unimodular(snf.V)
    uinv = invert_unimodular(snf.U)
    dplus = tuple(tuple(1 if (i == j) else 0 for j in range(rows)) for i in range(cols))
    return mat_mul(mat_mul(vinv, dplus), uinv)


def integer_kernel(a: Mat, rows: int, cols: int) -> tuple[Vec, ...]:
    """Basis of the saturated lattice {x in Z^cols : A x = 0}."""
    if cols == 0:
        return ()
    if rows == 0:
        return tuple(identity_matrix(cols))
    snf = smith_normal_form(a)
    vinv = invert_unimodular(snf.V)
    r = snf.rank
    return tuple(tuple(row[j] for row in vinv) for j in range(r, cols))


def row_hermite(vectors: Sequence[Sequence[int]], rank: int) -> Mat:
    """Canonical (row-style Hermite) basis of the lattice spanned by the rows.

    The result depends only on the spanned sublattice, so it doubles as an
    equality key for sublattices of Z^rank.
    """
    work = [list(vec(v)) for v in vectors]
    for v in work:
        if len(v) != rank:
            raise ValueError("vector length does not match rank")
    r = 0
    for c in range(rank):
        while True:
            live = [i for i in range(r, len(work)) if work[i][c] != 0]
            if not live:
                break
            i0 = min(live, key=lambda i: (abs(work[i][c]), i))
            work[r], work[i0] = work[i0], work[r]
            if work[r][c] < 0:
                work[r] = [-x for x in work[r]]
            done = True
            for i in range(r + 1, len(work)):
                if work[i][c] != 0:
                    q = work[i][c] // work[r][c]
                    work[i] = [x - q * y for x, y in zip(work[i], work[r])]
                    if work[i][c] != 0:
                        done = False
            if done:
                break
        if r < len(work) and work[r][c] != 0:
            for i in range(r):
                q = work[i][c] // work[r][c]
                work[i] = [x - q * y for x, y in zip(work[i], work[r])]
            r += 1
    return mat(work[:r])

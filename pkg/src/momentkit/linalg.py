"""Exact linear algebra over the rationals.

Everything downstream (boundary operators, cochain differentials, kernel
bases, solvers) reduces to the handful of primitives in this module.  All
entries are `fractions.Fraction`; there are no tolerances anywhere.

Conventions:
  * a matrix is a `Mat`: dense list-of-rows with explicit ncols so that
    0-row and 0-column shapes stay well defined,
  * `rref` returns the unique reduced row echelon form (forward pass is
    fraction-free integer elimination after clearing denominators, which
    only changes row scaling and therefore not the RREF),
  * `nullspace` returns the canonical RREF-normalized kernel basis: one
    vector per free column, with entry 1 in that free column,
  * `solve` returns the particular solution with all free variables set
    to zero (deterministic minimal-pivot-support choice), or None.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Mat:
    """Dense exact-rational matrix with explicit shape."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows, ncols=None):
        rows = [[frac(x) for x in row] for row in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ragged rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def zeros(cls, m, n):
        return cls([[ZERO] * n for _ in range(m)], n)

    @classmethod
    def identity(cls, n):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols, nrows):
        m = cls.zeros(nrows, len(cols))
        for j, col in enumerate(cols):
            if len(col) != nrows:
                raise ValueError("column length mismatch")
            for i, x in enumerate(col):
                m.rows[i][j] = frac(x)
        return m

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def copy(self):
        return Mat([row[:] for row in self.rows], self.ncols)

    def col(self, j):
        return [row[j] for row in self.rows]

    def transpose(self):
        return Mat([[self.rows[i][j] for i in range(self.nrows)]
                    for j in range(self.ncols)], self.nrows)

    def is_zero(self):
        return all(x == 0 for row in self.rows for x in row)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.shape == other.shape
                and self.rows == other.rows)

    def __repr__(self):
        return f"Mat({self.nrows}x{self.ncols})"


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a.ncols != b.nrows:
        raise ValueError(f"shape mismatch {a.shape} * {b.shape}")
    out = Mat.zeros(a.nrows, b.ncols)
    brows = b.rows
    for i, arow in enumerate(a.rows):
        orow = out.rows[i]
        for k, x in enumerate(arow):
            if x:
                brow = brows[k]
                for j, y in enumerate(brow):
                    if y:
                        orow[j] += x * y
    return out


def mat_vec(a: Mat, v) -> list:
    if a.ncols != len(v):
        raise ValueError("shape mismatch in mat_vec")
    out = []
    for row in a.rows:
        s = ZERO
        for x, y in zip(row, v):
            if x and y:
                s += x * y
        out.append(s)
    return out


def mat_add(a: Mat, b: Mat) -> Mat:
    if a.shape != b.shape:
        raise ValueError("shape mismatch in mat_add")
    return Mat([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a.rows, b.rows)],
               a.ncols)


def mat_scale(a: Mat, c) -> Mat:
    c = frac(c)
    return Mat([[c * x for x in row] for row in a.rows], a.ncols)


def mat_hstack(a: Mat, b: Mat) -> Mat:
    if a.nrows != b.nrows:
        raise ValueError("shape mismatch in mat_hstack")
    return Mat([ra + rb for ra, rb in zip(a.rows, b.rows)], a.ncols + b.ncols)


def mat_vstack(a: Mat, b: Mat) -> Mat:
    if a.ncols != b.ncols:
        raise ValueError("shape mismatch in mat_vstack")
    return Mat([row[:] for row in a.rows] + [row[:] for row in b.rows], a.ncols)


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product (row/col index = a-index major, b-index minor)."""
    out = Mat.zeros(a.nrows * b.nrows, a.ncols * b.ncols)
    for i, arow in enumerate(a.rows):
        for k, x in enumerate(arow):
            if x:
                for p, brow in enumerate(b.rows):
                    orow = out.rows[i * b.nrows + p]
                    base = k * b.ncols
                    for q, y in enumerate(brow):
                        if y:
                            orow[base + q] += x * y
    return out


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

def _integer_rows(m: Mat):
    """Scale each row by the lcm of denominators: same row space, int entries."""
    out = []
    for row in m.rows:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _forward_eliminate(rows, ncols, pivot_order=None):
    """Fraction-free (Bareiss) forward elimination on integer rows, in place.

    Returns the list of (row, col) pivot positions.  `pivot_order` selects the
    pivot row among candidates (default: first nonzero, which yields the
    row-order-determined echelon form used for RREF).
    """
    pivots = []
    prev = 1
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        cand = [i for i in range(r, nrows) if rows[i][c]]
        if not cand:
            continue
        if pivot_order is not None:
            cand.sort(key=pivot_order(rows, c))
        i = cand[0]
        if i != r:
            rows[r], rows[i] = rows[i], rows[r]
        piv = rows[r][c]
        for k in range(r + 1, nrows):
            x = rows[k][c]
            rowk, rowr = rows[k], rows[r]
            if x:
                for j in range(c, ncols):
                    rowk[j] = (piv * rowk[j] - x * rowr[j]) // prev
            else:
                # Bareiss needs the uniform update on every row to keep all
                # later divisions exact; with x == 0 it is a pure rescale.
                for j in range(c, ncols):
                    if rowk[j]:
                        rowk[j] = (piv * rowk[j]) // prev
        prev = piv
        pivots.append((r, c))
        r += 1
        if r == nrows:
            break
    return pivots


def _sparse_pivot_key(rows, c):
    def key(i):
        nz = sum(1 for x in rows[i] if x)
        return (nz, abs(rows[i][c]), i)
    return key


def rank(m: Mat) -> int:
    """Exact rank, fraction-free elimination with sparsity-aware pivoting."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    rows = _integer_rows(m)
    pivots = _forward_eliminate(rows, m.ncols,
                                pivot_order=lambda rs, c: _sparse_pivot_key(rs, c))
    return len(pivots)


def rref(m: Mat):
    """Unique reduced row echelon form.  Returns (Mat, pivot column tuple)."""
    if m.nrows == 0 or m.ncols == 0:
        return m.copy(), ()
    rows = _integer_rows(m)
    pivots = _forward_eliminate(rows, m.ncols)
    frows = [[Fraction(x) for x in row] for row in rows]
    # normalize pivot rows and eliminate above the pivots
    for r, c in reversed(pivots):
        piv = frows[r][c]
        frows[r] = [x / piv for x in frows[r]]
        for i in range(r):
            x = frows[i][c]
            if x:
                frows[i] = [a - x * b for a, b in zip(frows[i], frows[r])]
    out = Mat(frows, m.ncols)
    return out, tuple(c for _, c in pivots)


def nullspace(m: Mat):
    """Canonical kernel basis (RREF-normalized), as a list of vectors."""
    r, pivots = rref(m)
    pivset = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivset]
    basis = []
    for j in free:
        v = [ZERO] * m.ncols
        v[j] = ONE
        for i, c in enumerate(pivots):
            v[c] = -r.rows[i][j]
        basis.append(v)
    return basis


def solve(a: Mat, b):
    """Particular solution of a x = b with free variables set to zero, or None."""
    if a.nrows != len(b):
        raise ValueError("shape mismatch in solve")
    if a.ncols == 0:
        return [] if all(x == 0 for x in b) else None
    aug = mat_hstack(a, Mat.from_columns([b], a.nrows))
    r, pivots = rref(aug)
    if pivots and pivots[-1] == a.ncols:
        return None  # inconsistent: pivot in the augmented column
    x = [ZERO] * a.ncols
    for i, c in enumerate(pivots):
        x[c] = r.rows[i][a.ncols]
    return x


def solve_many(a: Mat, b: Mat):
    """Column-wise solve of a X = b; returns Mat or None if any column fails."""
    cols = []
    for j in range(b.ncols):
        x = solve(a, b.col(j))
        if x is None:
            return None
        cols.append(x)
    return Mat.from_columns(cols, a.ncols)


def in_span(vectors, v) -> bool:
    """Is v in the span of the given vectors (all plain lists)?"""
    if not vectors:
        return all(x == 0 for x in v)
    a = Mat.from_columns(vectors, len(v))
    return solve(a, v) is not None

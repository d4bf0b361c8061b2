"""Exact integer and rational linear algebra.

Vectors are tuples of ``int`` or :class:`fractions.Fraction`; matrices are
lists (or tuples) of rows. Nothing here ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Optional, Sequence

Vector = tuple
Matrix = list


class DimensionError(ValueError):
    """Raised when matrix or vector shapes do not fit the operation."""


class NonUniqueSolution(ValueError):
    """Raised by :func:`solve_linear_rational` for consistent, underdetermined systems."""


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(s, v):
    return tuple(s * a for a in v)


def transpose(m):
    return [list(col) for col in zip(*m)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m, v) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def _shape(m) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise DimensionError("ragged matrix")
    return rows, cols


def integer_determinant(m) -> int:
    """Determinant of a square integer matrix by fraction-free (Bareiss) elimination."""
    n, cols = _shape(m)
    if n != cols:
        raise DimensionError(f"determinant needs a square matrix, got {n}x{cols}")
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def determinant(m):
    """Exact determinant; integer input goes through Bareiss, rational through Gauss."""
    if all(isinstance(x, int) for row in m for x in row):
        return integer_determinant(m)
    n, cols = _shape(m)
    if n != cols:
        raise DimensionError(f"determinant needs a square matrix, got {n}x{cols}")
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


def rref(m):
    """Reduced row echelon form over Q. Returns (rows, pivot_columns)."""
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a[:r], pivots


def rank(m) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def nullspace(m) -> list:
    """Basis (over Q) of {x : m x = 0}, each vector scaled to a primitive integer vector."""
    _, cols = _shape(m)
    red, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * cols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(integral_direction(x))
    return basis


def inverse(m) -> Matrix:
    """Exact rational inverse of a square matrix."""
    n, cols = _shape(m)
    if n != cols:
        raise DimensionError("inverse needs a square matrix")
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def adjugate(m) -> Matrix:
    """Integer adjugate: ``adj(m) @ m == det(m) * I``."""
    n, _ = _shape(m)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(map(list, m)) if k != i]
            adj[j][i] = (-1) ** (i + j) * integer_determinant(minor)
    return adj


def solve_linear_rational(a, b) -> Optional[Vector]:
    """Solve ``a x = b`` exactly.

    Returns the unique solution, or ``None`` when the system is inconsistent.
    A consistent system with a free variable raises :class:`NonUniqueSolution`.
    """
    rows, cols = _shape(a)
    if len(b) != rows:
        raise DimensionError("right-hand side length does not match row count")
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    if len(pivots) < cols:
        raise NonUniqueSolution("system has free variables")
    x = [Fraction(0)] * cols
    for row, p in zip(red, pivots):
        x[p] = row[cols]
    return tuple(x)


def content(v) -> int:
    return reduce(gcd, (int(x) for x in v), 0)


def primitive_vector(v) -> Vector:
    """Divide an integer vector by the gcd of its entries (same ray)."""
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return tuple(int(x) // g for x in v)


def integral_direction(v) -> Vector:
    """Primitive integer vector on the ray through a nonzero rational vector."""
    den = reduce(lcm, (Fraction(x).denominator for x in v), 1)
    return primitive_vector([int(Fraction(x) * den) for x in v])


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(m) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u @ m == h`` and ``u`` unimodular. ``h`` is in
    row echelon (upper triangular) form, every pivot is positive and the
    entries above a pivot lie in ``[0, pivot)``. Zero rows come last.
    """
    rows, cols = _shape(m)
    h = [list(map(int, row)) for row in m]
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            # [[x, y], [-q, p]] has determinant 1
            hr, hi = h[r], h[i]
            h[r] = [x * s + y * t for s, t in zip(hr, hi)]
            h[i] = [-q * s + p * t for s, t in zip(hr, hi)]
            ur, ui = u[r], u[i]
            u[r] = [x * s + y * t for s, t in zip(ur, ui)]
            u[i] = [-q * s + p * t for s, t in zip(ur, ui)]
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        piv = h[r][c]
        for i in range(r):
            f = h[i][c] // piv
            if f:
                h[i] = [s - f * t for s, t in zip(h[i], h[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
        r += 1
    return h, u


def smith_normal_form(m) -> tuple[list, Matrix, Matrix]:
    """Smith normal form ``left @ m @ right == diag``.

    Returns the diagonal (length ``min(rows, cols)``, each entry dividing the
    next, nonnegative) and the two unimodular transforms.
    """
    rows, cols = _shape(m)
    a = [list(map(int, row)) for row in m]
    left = identity(rows)
    right = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def combine_rows(i, j, x, y, p, q):
        # row_i <- x row_i + y row_j ; row_j <- -q row_i + p row_j
        for mat in (a, left):
            ri, rj = mat[i], mat[j]
            mat[i] = [x * s + y * t for s, t in zip(ri, rj)]
            mat[j] = [-q * s + p * t for s, t in zip(ri, rj)]

    def combine_cols(i, j, x, y, p, q):
        for mat in (a, right):
            for row in mat:
                s, t = row[i], row[j]
                row[i] = x * s + y * t
                row[j] = -q * s + p * t

    n = min(rows, cols)
    for k in range(n):
        # bring a nonzero entry of the remaining block to (k, k)
        pos = next(((i, j) for i in range(k, rows) for j in range(k, cols) if a[i][j]), None)
        if pos is None:
            break
        swap_rows(k, pos[0])
        swap_cols(k, pos[1])
        while True:
            changed = False
            for i in range(k + 1, rows):
                if a[i][k]:
                    if a[i][k] % a[k][k] == 0:
                        combine_rows(k, i, 1, 0, 1, a[i][k] // a[k][k])
                    else:
                        g, x, y = _xgcd(a[k][k], a[i][k])
                        combine_rows(k, i, x, y, a[k][k] // g, a[i][k] // g)
                        changed = True
            for j in range(k + 1, cols):
                if a[k][j]:
                    if a[k][j] % a[k][k] == 0:
                        combine_cols(k, j, 1, 0, 1, a[k][j] // a[k][k])
                    else:
                        g, x, y = _xgcd(a[k][k], a[k][j])
                        combine_cols(k, j, x, y, a[k][k] // g, a[k][j] // g)
                    changed = True
            if changed:
                continue
            piv = a[k][k]
            bad = next(((i, j) for i in range(k + 1, rows) for j in range(k + 1, cols)
                        if a[i][j] % piv), None)
            if bad is None:
                break
            # fold the offending row into row k, then keep clearing
            i = bad[0]
            for mat in (a, left):
                mat[k] = [s + t for s, t in zip(mat[k], mat[i])]
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            left[k] = [-x for x in left[k]]
    diag = [a[i][i] for i in range(n)]
    return diag, left, right


def torsion_order(m) -> int:
    """Order of the torsion part of Z^cols / (row lattice of m)."""
    diag, _, _ = smith_normal_form(m)
    out = 1
    for x in diag:
        if x:
            out *= x
    return out


def saturation_basis(vectors) -> list:
    """Integer basis of Z^n intersected with the rational span of ``vectors``."""
    rows = [integral_direction(v) for v in vectors if any(v)]
    if not rows:
        return []
    diag, _, right = smith_normal_form(rows)
    r = sum(1 for x in diag if x)
    rinv = inverse(right)
    return [tuple(int(x) for x in rinv[i]) for i in range(r)]


def lattice_basis(vectors) -> list:
    """Z-basis of the lattice generated by rational vectors (row-style HNF rows)."""
    vectors = [tuple(Fraction(x) for x in v) for v in vectors]
    den = reduce(lcm, (x.denominator for v in vectors for x in v), 1)
    h, _ = hermite_normal_form([[int(x * den) for x in v] for v in vectors])
    return [tuple(Fraction(x, den) for x in row) for row in h if any(row)]

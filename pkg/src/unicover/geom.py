"""Cones, lattice simplices, lattice polytopes and affine lattices.

All predicates are exact. Generator and vertex lists are kept in
lexicographic order so that every derived object serializes the same way
no matter how it was built.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .exactmath import (
    adjugate,
    dot,
    hermite_normal_form,
    integer_determinant,
    integral_direction,
    inverse,
    mat_vec,
    nullspace,
    primitive_vector,
    rank,
    rref,
    saturation_basis,
    solve_linear_rational,
    torsion_order,
    transpose,
    vsub,
    NonUniqueSolution,
)


class GeometryError(ValueError):
    """Input violates a geometric precondition (not pointed, degenerate, ...)."""


def _as_int_vector(v) -> tuple:
    out = []
    for x in v:
        f = Fraction(x)
        if f.denominator != 1:
            raise GeometryError(f"expected an integer vector, got {tuple(v)}")
        out.append(int(f))
    return tuple(out)


def _as_rat_vector(v) -> tuple:
    return tuple(x if isinstance(x, int) else Fraction(x) for x in v)


def _independent_columns(vectors):
    """Coordinates on which projection is injective over span(vectors)."""
    _, piv = rref(vectors)
    return piv


def _facets_full_dim(gens):
    """Facet normals (primitive, inward) of the full-dimensional cone spanned by gens.

    Returns ``None`` when no nonzero functional is nonnegative on all gens
    with the right facet count, i.e. the cone is not pointed.
    """
    d = len(gens[0])
    if d == 1:
        signs = {1 if g[0] > 0 else -1 for g in gens}
        return [(s,) for s in signs] if len(signs) == 1 else []
    normals = set()
    for sub in combinations(gens, d - 1):
        ns = nullspace(list(sub))
        if len(ns) != 1:
            continue
        n = ns[0]
        vals = [dot(n, g) for g in gens]
        if all(v >= 0 for v in vals):
            normals.add(tuple(n))
        elif all(v <= 0 for v in vals):
            normals.add(tuple(-x for x in n))
    return sorted(normals)


def _project(vectors, coords):
    return [tuple(v[i] for i in coords) for v in vectors]


class Cone:
    """Pointed rational polyhedral cone given by generators.

    The stored ``generators`` are the extreme integral generators: one
    primitive vector per edge, sorted lexicographically.
    """

    def __init__(self, generators: Iterable[Sequence]):
        gens = [integral_direction(g) for g in generators if any(g)]
        if not gens:
            raise GeometryError("a cone needs at least one nonzero generator")
        self.dim = len(gens[0])
        if any(len(g) != self.dim for g in gens):
            raise GeometryError("generators of different lengths")
        gens = sorted(set(gens))
        self.rank = rank(gens)
        self._coords = _independent_columns(gens) if self.rank < self.dim else list(range(self.dim))
        proj = _project(gens, self._coords)
        normals = _facets_full_dim(proj)
        if self.rank > 0 and (not normals or rank(normals) < self.rank):
            raise GeometryError("cone is not pointed")
        self._normals = normals
        extreme = []
        for g, p in zip(gens, proj):
            tight = [n for n in normals if dot(n, p) == 0]
            if self.rank == 1 or (tight and rank(tight) == self.rank - 1):
                extreme.append(g)
        self.generators = tuple(extreme)

    @property
    def facet_normals(self):
        """Inward facet normals (in the chosen span coordinates when not full-dimensional)."""
        return list(self._normals)

    @property
    def is_full_dimensional(self) -> bool:
        return self.rank == self.dim

    @property
    def is_simplicial(self) -> bool:
        return len(self.generators) == self.rank

    def contains(self, p) -> bool:
        if len(p) != self.dim:
            raise GeometryError("dimension mismatch")
        if not self.is_full_dimensional:
            if rank(list(self.generators) + [tuple(p)]) > self.rank:
                return False
        q = tuple(p[i] for i in self._coords)
        return all(dot(n, q) >= 0 for n in self._normals)

    def __eq__(self, other):
        return isinstance(other, Cone) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        return f"{type(self).__name__}({[list(g) for g in self.generators]})"


class SimplicialCone(Cone):
    """Cone whose extreme generators are linearly independent."""

    def __init__(self, generators: Iterable[Sequence]):
        super().__init__(generators)
        if len(self.generators) != self.rank:
            raise GeometryError("generators are not linearly independent")
        self.multiplicity = torsion_order(list(self.generators))
        if self.is_full_dimensional:
            self._det = integer_determinant(list(self.generators))
            self._adj = adjugate(transpose(list(self.generators)))
        else:
            self._det = None
            self._adj = None

    @classmethod
    def from_cone(cls, cone: Cone) -> "SimplicialCone":
        return cls(cone.generators)

    @property
    def is_unimodular(self) -> bool:
        return self.multiplicity == 1

    def coefficients(self, p) -> tuple:
        """Coordinates of p in the generator basis (exact rationals)."""
        if self._adj is not None:
            det = self._det
            return tuple(Fraction(x, det) for x in mat_vec(self._adj, p))
        sol = solve_linear_rational(transpose(list(self.generators)), list(p))
        if sol is None:
            raise GeometryError("point is not in the span of the cone")
        return sol

    def contains(self, p) -> bool:
        if len(p) != self.dim:
            raise GeometryError("dimension mismatch")
        if self._adj is not None:
            s = 1 if self._det > 0 else -1
            return all(s * x >= 0 for x in mat_vec(self._adj, p))
        try:
            return all(x >= 0 for x in self.coefficients(p))
        except GeometryError:
            return False

    def height(self, p) -> Fraction:
        """Sum of coefficients: ``p`` lies in ``t * base_simplex`` iff ``p`` in cone and height <= t."""
        return sum(self.coefficients(p), Fraction(0))

    def box_points(self) -> list:
        return lattice_points_in_box(self.generators)

    def base_simplex(self) -> "LatticeSimplex":
        return base_simplex(self)


class LatticeSimplex:
    """Simplex given by affinely independent vertices (rational allowed)."""

    def __init__(self, vertices: Iterable[Sequence], *, canonical: bool = True):
        verts = [_as_rat_vector(v) for v in vertices]
        if not verts:
            raise GeometryError("empty vertex list")
        if canonical:
            verts = sorted(set(verts))
        self.vertices = tuple(verts)
        self.ambient_dim = len(verts[0])
        edges = [vsub(v, verts[0]) for v in verts[1:]]
        if edges and rank(edges) != len(edges):
            raise GeometryError("vertices are not affinely independent")
        self.dim = len(edges)

    @property
    def is_lattice(self) -> bool:
        return all(Fraction(x).denominator == 1 for v in self.vertices for x in v)

    def edge_matrix(self):
        return [vsub(v, self.vertices[0]) for v in self.vertices[1:]]

    @property
    def multiplicity(self) -> int:
        if not self.is_lattice:
            raise GeometryError("multiplicity is defined for lattice simplices only")
        if self.dim == 0:
            return 1
        return torsion_order([_as_int_vector(e) for e in self.edge_matrix()])

    def normalized_volume(self) -> Fraction:
        """``dim! * vol`` for a full-dimensional simplex (|det| of the edge matrix)."""
        if self.dim != self.ambient_dim:
            raise GeometryError("normalized volume needs a full-dimensional simplex")
        from .exactmath import determinant
        return abs(Fraction(determinant(self.edge_matrix())))

    def barycentric(self, p) -> Optional[tuple]:
        """Barycentric coordinates of p, or None if p is off the affine hull."""
        if len(p) != self.ambient_dim:
            raise GeometryError("dimension mismatch")
        a = [list(row) for row in zip(*self.vertices)] + [[1] * len(self.vertices)]
        return solve_linear_rational(a, list(p) + [1])

    def contains(self, p, scale=1) -> bool:
        """Closed membership of p in ``scale * self`` (dilation about the origin)."""
        scale = Fraction(scale)
        if scale == 0:
            return not any(p)
        q = tuple(Fraction(x) / scale for x in p)
        bc = self.barycentric(q)
        return bc is not None and all(x >= 0 for x in bc)

    def lattice_points(self) -> list:
        """All integer points in the simplex (bounding box scan + exact membership)."""
        lo = [min(int(Fraction(v[i]).__floor__()) for v in self.vertices) for i in range(self.ambient_dim)]
        hi = [max(int(Fraction(v[i]).__ceil__()) for v in self.vertices) for i in range(self.ambient_dim)]
        out = []
        for p in _box_iter(lo, hi):
            if self.contains(p):
                out.append(p)
        return out

    def is_empty(self) -> bool:
        return is_empty_simplex(self)

    def __eq__(self, other):
        return isinstance(other, LatticeSimplex) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"LatticeSimplex({[list(map(str, v)) for v in self.vertices]})"


def _box_iter(lo, hi):
    if not lo:
        yield ()
        return
    for x in range(lo[0], hi[0] + 1):
        for rest in _box_iter(lo[1:], hi[1:]):
            yield (x,) + rest


class LatticePolytope:
    """Lattice polytope; the stored vertices are exactly its extreme points."""

    def __init__(self, points: Iterable[Sequence]):
        pts = [_as_int_vector(p) for p in points]
        if not pts:
            raise GeometryError("empty point set")
        self.ambient_dim = len(pts[0])
        homog = Cone([p + (1,) for p in pts])
        self.vertices = tuple(sorted(g[:-1] for g in homog.generators))
        self.dim = homog.rank - 1
        self._homog = homog

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def contains(self, p, scale=1) -> bool:
        scale = Fraction(scale)
        q = tuple(Fraction(x) / scale for x in p) + (Fraction(1),)
        return self._homog.contains(integral_direction(q))

    def lattice_points(self) -> list:
        lo = [min(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        return [p for p in _box_iter(lo, hi) if self.contains(p)]

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"LatticePolytope({[list(v) for v in self.vertices]})"


class AffineLattice:
    """``origin + sum Z * basis_i`` with linearly independent rational basis vectors."""

    def __init__(self, origin: Sequence, basis: Iterable[Sequence]):
        self.origin = _as_rat_vector(origin)
        self.basis = tuple(_as_rat_vector(b) for b in basis)
        if self.basis and rank(list(self.basis)) != len(self.basis):
            raise GeometryError("lattice basis is linearly dependent")

    @classmethod
    def of_simplex(cls, vertices: Sequence[Sequence]) -> "AffineLattice":
        v0 = vertices[0]
        return cls(v0, [vsub(v, v0) for v in vertices[1:]])

    def coordinates(self, p) -> Optional[tuple]:
        if not self.basis:
            return () if tuple(p) == self.origin else None
        try:
            return solve_linear_rational(transpose(list(self.basis)), list(vsub(p, self.origin)))
        except NonUniqueSolution:  # pragma: no cover - basis is independent
            raise

    def contains(self, p) -> bool:
        c = self.coordinates(p)
        return c is not None and all(Fraction(x).denominator == 1 for x in c)

    def is_unimodular_simplex(self, vertices: Sequence[Sequence]) -> bool:
        """True iff the simplex's own affine lattice equals this lattice."""
        if len(vertices) != len(self.basis) + 1:
            return False
        if not all(self.contains(v) for v in vertices):
            return False
        edges = [self.coordinates(v) for v in vertices]
        e0 = edges[0]
        m = [[int(x - y) for x, y in zip(e, e0)] for e in edges[1:]]
        return not m or abs(integer_determinant(m)) == 1


# --- free functions mirroring the operation list ---------------------------------

def extreme_generators(c: Cone) -> list:
    return list(c.generators)


def base_simplex(c: SimplicialCone) -> LatticeSimplex:
    """Convex hull of the origin and the extreme integral generators."""
    return LatticeSimplex([(0,) * c.dim] + list(c.generators))


def simplex_multiplicity(s: LatticeSimplex) -> int:
    return s.multiplicity


def is_empty_simplex(s: LatticeSimplex) -> bool:
    """True iff the only lattice points of s are its vertices."""
    if not s.is_lattice:
        raise GeometryError("emptiness is defined for lattice simplices")
    verts = set(tuple(int(x) for x in v) for v in s.vertices)
    return all(p in verts for p in s.lattice_points())


def contains_point(region, p, scale=1) -> bool:
    """Exact closed membership of p in a cone, or in ``scale * simplex``."""
    if isinstance(region, Cone):
        return region.contains(p)
    if isinstance(region, (LatticeSimplex, LatticePolytope)):
        if len(p) != region.ambient_dim:
            raise GeometryError("dimension mismatch")
        return region.contains(p, scale)
    raise TypeError(f"unsupported region {type(region).__name__}")


def lattice_points_in_box(gens: Sequence[Sequence]) -> list:
    """Integer points ``sum xi_i * gens_i`` with every ``xi_i`` in ``[0, 1)``.

    Works for any number of linearly independent integer generators: the
    points are enumerated as Hermite coset representatives of the generated
    lattice inside its saturation and folded back into the half-open box.
    The result is sorted and has exactly ``multiplicity`` elements.
    """
    gens = [_as_int_vector(g) for g in gens]
    k = len(gens)
    if k == 0:
        return []
    n = len(gens[0])
    if rank(gens) != k:
        raise GeometryError("box generators are linearly dependent")
    if k < n:
        basis = saturation_basis(gens)
        # coordinates of gens in the saturated basis are integral
        bt = transpose(basis)
        coords = [tuple(int(x) for x in solve_linear_rational(bt, list(g))) for g in gens]
        pts = lattice_points_in_box(coords)
        return sorted(tuple(sum(c * b[i] for c, b in zip(p, basis)) for i in range(n)) for p in pts)
    h, _ = hermite_normal_form(gens)
    pivots = [h[i][i] for i in range(n)]
    gt = transpose(gens)
    adj = adjugate(gt)  # adj @ gt = det * I, so xi = adj @ x / det
    det = integer_determinant(gt)
    if det < 0:
        adj = [[-x for x in row] for row in adj]
        det = -det
    out = []
    for r in _box_iter([0] * n, [p - 1 for p in pivots]):
        num = [sum(a * x for a, x in zip(row, r)) for row in adj]
        floors = [x // det for x in num]
        out.append(tuple(r[i] - sum(f * g[i] for f, g in zip(floors, gens)) for i in range(n)))
    return sorted(out)

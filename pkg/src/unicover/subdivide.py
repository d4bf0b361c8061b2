"""Triangulations and stellar subdivisions.

Everything works on rays: a polytope is handled as the cone over
``P x {1}``, so a single placing routine serves cones and polytopes alike.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactmath import adjugate, dot, integer_determinant, nullspace, primitive_vector, rank, solve_linear_rational, transpose
from .geom import (
    Cone,
    GeometryError,
    LatticePolytope,
    LatticeSimplex,
    SimplicialCone,
    _as_int_vector,
)


@dataclass(frozen=True)
class SubdivisionEvent:
    parent: SimplicialCone
    point: tuple
    children: tuple
    depth: int


@dataclass
class Fan:
    """Simplicial cones with disjoint interiors and the events that produced them."""

    members: list
    provenance: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


def _facet_normal(facet, opposite):
    """Normal of the hyperplane spanned by ``facet``, positive on ``opposite``."""
    (n,) = nullspace([list(v) for v in facet])
    s = dot(n, opposite)
    if s == 0:
        raise GeometryError("degenerate simplex in placing triangulation")
    return n if s > 0 else tuple(-x for x in n)


def _facets(simplex):
    for i in range(len(simplex)):
        yield simplex[:i] + simplex[i + 1:], simplex[i]


def _key(vectors):
    return tuple(sorted(vectors))


def place_rays(rays, *, insert_interior: bool = False) -> list:
    """Placing triangulation of the cone spanned by integer ``rays``.

    Rays are placed in the given order. A ray outside the current cone is
    joined to every visible boundary facet. With ``insert_interior`` a ray
    that already lies in the cone is inserted by stellar subdivision of
    every simplex containing it, so every ray ends up as a generator.
    Returns a list of simplices, each a tuple of rays.
    """
    rays = [tuple(r) for r in rays]
    if not rays:
        return []
    d = len(rays[0])
    start = []
    for r in rays:
        if rank(start + [r]) > len(start):
            start.append(r)
        if len(start) == d:
            break
    if len(start) < d:
        raise GeometryError("rays do not span a full-dimensional cone")
    simplices = [tuple(start)]
    used = set(start)
    for r in rays:
        if r in used:
            continue
        used.add(r)
        boundary = {}
        for s in simplices:
            for facet, opp in _facets(s):
                k = _key(facet)
                if k in boundary:
                    boundary[k] = None
                else:
                    boundary[k] = (facet, opp)
        visible = []
        for item in boundary.values():
            if item is None:
                continue
            facet, opp = item
            if dot(_facet_normal(facet, opp), r) < 0:
                visible.append(facet)
        if visible:
            simplices.extend(tuple(f) + (r,) for f in visible)
            continue
        if not insert_interior:
            continue
        new = []
        for s in simplices:
            coeffs = _coefficients(s, r)
            if coeffs is None or any(c < 0 for c in coeffs):
                new.append(s)
                continue
            pos = [i for i, c in enumerate(coeffs) if c > 0]
            if len(pos) == 1:
                # same ray as a generator already present
                new.append(s)
                continue
            for i in pos:
                new.append(s[:i] + (r,) + s[i + 1:])
        simplices = new
    return simplices


def _coefficients(simplex, p) -> Optional[tuple]:
    return solve_linear_rational(transpose([list(v) for v in simplex]), list(p))


def triangulate_cone(c: Cone) -> Fan:
    """Placing triangulation of a full-dimensional pointed cone.

    Generators are placed in lexicographic order; every member is spanned
    by extreme generators of ``c``.
    """
    if not isinstance(c, Cone):
        c = Cone(c)
    if not c.is_full_dimensional:
        raise GeometryError("triangulate_cone needs a full-dimensional cone")
    if c.is_simplicial:
        return Fan([SimplicialCone(c.generators)])
    members = [SimplicialCone(s) for s in place_rays(sorted(c.generators))]
    return Fan(sorted(members, key=lambda m: m.generators))


def stellar_subdivision(c: SimplicialCone, w) -> list:
    """Replace each generator with a positive coefficient of ``w`` by ``w``."""
    w = _as_int_vector(w)
    if not any(w):
        raise GeometryError("subdivision point must be nonzero")
    coeffs = c.coefficients(w)
    if any(x < 0 for x in coeffs):
        raise GeometryError(f"{w} is not in the cone")
    pos = [i for i, x in enumerate(coeffs) if x > 0]
    if len(pos) < 2:
        raise GeometryError(f"{w} lies on an extreme ray")
    w = primitive_vector(w)
    gens = c.generators
    return [SimplicialCone(gens[:i] + (w,) + gens[i + 1:]) for i in pos]


def _empty_split_point(c: SimplicialCone):
    """Non-vertex lattice point of the base simplex with least coefficient sum."""
    gens = list(c.generators)
    if len(gens) == c.dim:
        # height * |det| = ell . p with ell the signed column sums of the adjugate
        adj = adjugate(transpose(gens))
        det = integer_determinant(gens)
        s = 1 if det > 0 else -1
        ell = [s * sum(col) for col in zip(*adj)]
        bound = abs(det)
        best = None
        for p in c.box_points():
            h = dot(ell, p)
            if 0 < h <= bound and (best is None or (h, p) < best):
                best = (h, p)
        return None if best is None else best[1]
    best = None
    for p in c.box_points():
        if not any(p):
            continue
        h = c.height(p)
        if h <= 1 and (best is None or (h, p) < best):
            best = (h, p)
    return None if best is None else best[1]


def is_empty_cone(c: SimplicialCone) -> bool:
    """True iff the base simplex has no lattice points besides its vertices."""
    return _empty_split_point(c) is None


def refine_to_empty(c: SimplicialCone) -> Fan:
    """Stellar subdivisions until every member has an empty base simplex."""
    if not isinstance(c, SimplicialCone):
        c = SimplicialCone(c.generators if isinstance(c, Cone) else c)
    members, events = [], []
    work = [(c, 0)]
    while work:
        cone, depth = work.pop()
        w = _empty_split_point(cone)
        if w is None:
            members.append(cone)
            continue
        children = stellar_subdivision(cone, w)
        for ch in children:
            assert ch.multiplicity < cone.multiplicity
        events.append(SubdivisionEvent(cone, w, tuple(children), depth + 1))
        work.extend((ch, depth + 1) for ch in reversed(children))
    return Fan(sorted(members, key=lambda m: m.generators), events)


def triangulate_polytope_empty(p: LatticePolytope) -> list:
    """Triangulation of a lattice polytope into empty lattice simplices.

    All lattice points of ``p`` are placed in lexicographic order; points
    inside the current hull are inserted by stellar subdivision so each of
    them becomes a vertex.
    """
    if not isinstance(p, LatticePolytope):
        p = LatticePolytope(p)
    if not p.is_full_dimensional:
        raise GeometryError("triangulate_polytope_empty needs a full-dimensional polytope")
    pts = sorted(p.lattice_points())
    simplices = place_rays([q + (1,) for q in pts], insert_interior=True)
    out = [LatticeSimplex([v[:-1] for v in s]) for s in simplices]
    return sorted(out, key=lambda s: s.vertices)


def simplex_volume_sum(simplices) -> Fraction:
    return sum((s.normalized_volume() for s in simplices), Fraction(0))

"""Hilbert bases of pointed rational cones.

For a simplicial cone every element of the Hilbert basis is either an
extreme generator or a lattice point of the half-open parallelotope, so the
basis is obtained by reducing that finite candidate set. General cones are
triangulated first and the union of the simplicial bases is reduced again.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exactmath import vsub
from .geom import Cone, GeometryError, LatticePolytope, LatticeSimplex, SimplicialCone


@dataclass(frozen=True)
class HilbertBasis:
    elements: tuple
    cone: Cone

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, v):
        return tuple(v) in self.elements


def _dominated(small, big) -> bool:
    return all(s <= b for s, b in zip(small, big))


def hilbert_basis_simplicial(c: SimplicialCone) -> HilbertBasis:
    """Hilbert basis of a simplicial cone from its box points.

    A nonzero box point ``x`` is reducible iff some irreducible ``y != x``
    has ``x - y`` in the cone, i.e. the coefficient vector of ``y`` is
    componentwise below that of ``x``. Processing candidates by increasing
    coefficient sum means every such ``y`` is already known.
    """
    if not isinstance(c, SimplicialCone):
        c = SimplicialCone(c.generators)
    gens = list(c.generators)
    d = len(gens)
    basis_coeffs = [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    found = list(zip(gens, basis_coeffs))
    cands = []
    for p in c.box_points():
        if any(p):
            xi = c.coefficients(p)
            cands.append((sum(xi), xi, p))
    cands.sort()
    for _, xi, p in cands:
        if not any(_dominated(yc, xi) for _, yc in found):
            found.append((p, xi))
    return HilbertBasis(tuple(sorted(v for v, _ in found)), c)


def hilbert_basis(c: Cone) -> HilbertBasis:
    """Hilbert basis of a pointed cone, independent of the triangulation used."""
    if not isinstance(c, Cone):
        c = Cone(c)
    if c.is_simplicial:
        return hilbert_basis_simplicial(SimplicialCone(c.generators))
    if not c.is_full_dimensional:
        raise GeometryError("non-simplicial cones must be full-dimensional")
    from .subdivide import triangulate_cone

    union = set()
    for member in triangulate_cone(c).members:
        union.update(hilbert_basis_simplicial(member).elements)
    elements = sorted(
        x for x in union
        if not any(y != x and c.contains(vsub(x, y)) for y in union)
    )
    return HilbertBasis(tuple(elements), c)


def check_hilbert_containment(
    hb: Union[HilbertBasis, list], base: Union[LatticeSimplex, LatticePolytope], factor
) -> bool:
    """True iff every element lies in ``factor * base`` (closed, exact)."""
    factor = Fraction(factor)
    return all(base.contains(x, factor) for x in hb)


def box_complement_containment(c: SimplicialCone, hb: HilbertBasis = None) -> bool:
    """Check the parallelotope bound for an empty simplicial cone.

    Every Hilbert basis element other than an extreme generator must lie in
    the half-open box and outside ``v_1 + ... + v_d - base_simplex``, which
    amounts to a coefficient sum strictly below ``d - 1``.
    """
    hb = hb if hb is not None else hilbert_basis_simplicial(c)
    d = len(c.generators)
    gens = set(c.generators)
    for x in hb:
        if x in gens:
            continue
        xi = c.coefficients(x)
        if not all(0 <= t < 1 for t in xi):
            return False
        if sum(xi) >= d - 1:
            return False
    return True

"""Bounded resolution of simplicial cones into unimodular cones.

Cones are refined generation by generation. Each new generator is a box
point of the cone it splits, possibly replaced by its mirror image
``u_{i_1} + ... + u_{i_k} - w`` so that its height over the base simplex
of the input cone stays within the budget ``h_k`` of its generation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactmath import primitive_vector, vsub
from .geom import GeometryError, SimplicialCone
from .subdivide import stellar_subdivision


@lru_cache(maxsize=None)
def h_value(d: int, k: int) -> Fraction:
    """``h_k = 1`` for ``k <= 1``, ``h_2 = d/2``, ``h_k = (h_{k-1}+...+h_{k-d})/2``."""
    if d < 2:
        raise ValueError("h_k is defined for d >= 2")
    if k <= 1:
        return Fraction(1)
    if k == 2:
        return Fraction(d, 2)
    return sum((h_value(d, k - j) for j in range(1, d + 1)), Fraction(0)) / 2


@dataclass(frozen=True)
class HSequence:
    d: int
    kmax: int

    @property
    def values(self) -> dict:
        return {k: h_value(self.d, k) for k in range(-(self.d - 2), self.kmax + 1)}

    def __getitem__(self, k):
        return h_value(self.d, k)


def resolution_bound(d: int, mu: int) -> Fraction:
    """``(d/2)(3/2)^(mu-2)``, the containment factor for a cone of multiplicity ``mu``."""
    return Fraction(d, 2) * Fraction(3, 2) ** (mu - 2)


@dataclass(frozen=True)
class LedgerEntry:
    point: tuple
    generation: int
    height: Fraction
    budget: Fraction
    parent_generations: tuple
    replaced: bool


@dataclass
class Resolution:
    input: SimplicialCone
    members: list
    ledger: list = field(default_factory=list)
    generations: int = 1

    @property
    def bound_factor(self) -> Fraction:
        return resolution_bound(self.input.dim, self.input.multiplicity)

    def __len__(self):
        return len(self.members)


def _base_height(c: SimplicialCone, p) -> Fraction:
    return c.height(p)


def _resolve_2d(c: SimplicialCone) -> Resolution:
    """Consecutive Hilbert basis elements span the unimodular members."""
    from .hilbert import hilbert_basis_simplicial

    hb = [x for x in hilbert_basis_simplicial(c).elements]
    coeff = {x: c.coefficients(x) for x in hb}
    # sort by position between the first and second generator
    hb.sort(key=lambda x: coeff[x][1] / (coeff[x][0] + coeff[x][1]))
    members = [SimplicialCone([hb[i], hb[i + 1]]) for i in range(len(hb) - 1)]
    gens = set(c.generators)
    ledger = [
        LedgerEntry(x, 2, c.height(x), Fraction(1), (1, 0), False)
        for x in hb if x not in gens
    ]
    for m in members:
        assert m.multiplicity == 1
    return Resolution(c, sorted(members, key=lambda m: m.generators), ledger, 2 if ledger else 1)


def _choose_point(cone: SimplicialCone, base: SimplicialCone):
    """Box point of least coefficient sum, mirrored if that lowers its base height."""
    best = None
    for p in cone.box_points():
        if not any(p):
            continue
        xi = cone.coefficients(p)
        key = (sum(xi), p)
        if best is None or key < best[0]:
            best = (key, p, xi)
    _, w, xi = best
    support = [u for u, x in zip(cone.generators, xi) if x > 0]
    mirror = vsub(tuple(map(sum, zip(*support))), w)
    if _base_height(base, mirror) < _base_height(base, w):
        return mirror, True
    return w, False


def resolve_cone(c: SimplicialCone) -> Resolution:
    """Unimodular triangulation of ``c`` with certified generator heights.

    Original generators carry generations ``1, 0, ..., -(d-2)``. A point
    splitting a cone of generation ``k-1`` gets generation ``k`` and is
    recorded with its height over the base simplex of ``c``, which the
    construction keeps at most ``h_k``.
    """
    if not isinstance(c, SimplicialCone):
        c = SimplicialCone(c)
    if not c.is_full_dimensional:
        raise GeometryError("resolve_cone needs a full-dimensional cone")
    d = c.dim
    if c.multiplicity == 1:
        return Resolution(c, [c], [], 1)
    if d == 2:
        return _resolve_2d(c)
    # each cone travels with the generations of its generators
    current = [(c, {v: 1 - i for i, v in enumerate(c.generators)})]
    done = []
    ledger = []
    k = 1
    while current:
        nxt = []
        done.extend(m for m, _ in current if m.multiplicity == 1)
        alive = [(m, g) for m, g in current if m.multiplicity > 1]
        while alive:
            cone, gens = alive.pop(0)
            w, replaced = _choose_point(cone, c)
            w = primitive_vector(w)
            parents = tuple(gens[u] for u in cone.generators)
            assert len(set(parents)) == len(parents), "parent generations must be distinct"
            budget = h_value(d, k + 1)
            height = _base_height(c, w)
            assert height <= budget, (w, height, budget)
            ledger.append(LedgerEntry(w, k + 1, height, budget, parents, replaced))
            split = [(cone, gens)]
            keep = []
            for other, ogens in alive:
                xi = other.coefficients(w)
                if all(0 <= x < 1 for x in xi) and sum(1 for x in xi if x > 0) >= 2:
                    split.append((other, ogens))
                else:
                    keep.append((other, ogens))
            alive = keep
            for s, sg in split:
                for child in stellar_subdivision(s, w):
                    assert child.multiplicity < s.multiplicity
                    cg = {u: sg.get(u, k + 1) for u in child.generators}
                    nxt.append((child, cg))
        current = nxt
        if current:
            k += 1
    members = sorted(done, key=lambda m: m.generators)
    return Resolution(c, members, ledger, k)

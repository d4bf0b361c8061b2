"""Weyl-chamber simplices and slope-independent tile covers.

The integral translates of the simplices ``Delta_sigma`` triangulate space.
``tile_cover`` transports that triangulation into the lattice of a frame
simplex and keeps the translates that fit inside a dilated target simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import floor
from typing import Sequence

from .exactmath import dot, integer_determinant, solve_linear_rational, transpose, vadd, vscale, vsub
from .geom import GeometryError, LatticePolytope, LatticeSimplex, _as_rat_vector


@dataclass(frozen=True)
class WeylSimplex:
    sigma: tuple
    translate: tuple

    @property
    def vertices(self) -> tuple:
        x = tuple(self.translate)
        out = [x]
        for i in self.sigma:
            x = x[: i - 1] + (x[i - 1] + 1,) + x[i:]
            out.append(x)
        return tuple(out)

    @property
    def multiplicity(self) -> int:
        return LatticeSimplex(self.vertices).multiplicity


def weyl_simplex(sigma: Sequence[int], translate: Sequence[int]) -> WeylSimplex:
    """Simplex ``x_0 = translate``, ``x_i = x_{i-1} + e_{sigma(i)}`` (1-based sigma)."""
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{len(sigma)}")
    if len(translate) != len(sigma):
        raise ValueError("translate has the wrong length")
    return WeylSimplex(sigma, tuple(int(t) for t in translate))


def directional_width(p, a) -> Fraction:
    """Squared Euclidean width of ``p`` in direction ``a``."""
    a = _as_rat_vector(a)
    norm2 = dot(a, a)
    if norm2 == 0:
        raise GeometryError("zero functional")
    verts = p.vertices if isinstance(p, (LatticeSimplex, LatticePolytope)) else p
    vals = [dot(a, v) for v in verts]
    spread = Fraction(max(vals) - min(vals))
    return spread * spread / norm2


def _ratio_on_ray(v, w):
    """``t`` with ``w = t v`` (t > 0), or None."""
    t = None
    for x, y in zip(v, w):
        if x == 0:
            if y != 0:
                return None
            continue
        r = Fraction(y) / Fraction(x)
        if t is None:
            t = r
        elif r != t:
            return None
    return t if t is not None and t > 0 else None


def reorder_by_ratio(frame_vertices, target_vertices) -> tuple:
    """Permutation of the non-apex indices sorting ``|w_i|/|v_i|`` decreasingly.

    Both lists start with the common apex. Ties keep the original order.
    """
    apex = frame_vertices[0]
    if tuple(target_vertices[0]) != tuple(apex):
        raise GeometryError("frame and target must share the first vertex")
    ratios = []
    for v, w in zip(frame_vertices[1:], target_vertices[1:]):
        t = _ratio_on_ray(vsub(v, apex), vsub(w, apex))
        if t is None:
            raise GeometryError("target vertex is not on the corresponding frame ray")
        ratios.append(t)
    return tuple(sorted(range(len(ratios)), key=lambda i: -ratios[i]))


@dataclass
class TileCover:
    frame: tuple
    target: tuple
    scale: Fraction
    epsilon: Fraction
    tiles: list
    ratios: tuple

    def __len__(self):
        return len(self.tiles)


class PreconditionError(ValueError):
    def __init__(self, message, minimal_scale=None):
        super().__init__(message)
        self.minimal_scale = minimal_scale


def minimal_scale(epsilon, e: int) -> int:
    """Least integer ``c`` with ``c^2 epsilon^2 >= e``."""
    epsilon = Fraction(epsilon)
    c = 1
    while (c * epsilon) ** 2 < e:
        c += 1
    return c


def _frame_coordinates(a):
    """Map v-basis coefficients to standard-simplex coordinates: y_i = a_i + ... + a_e."""
    y, acc = [], 0
    for x in reversed(a):
        acc += x
        y.append(acc)
    return tuple(reversed(y))


def tile_cover(frame, target, epsilon, c) -> TileCover:
    """Unimodular tiles of the frame lattice inside ``c * target``.

    ``frame`` and ``target`` are vertex lists whose first entry is the common
    apex; the i-th target vertex lies on the ray from the apex through the
    i-th frame vertex, no closer than it. Dilation by ``c`` is about the
    apex. The frame may be lower-dimensional. After reordering the rays by
    decreasing ratio, the frame becomes ``conv(O, e_1, e_1+e_2, ...)`` and
    every translate of every ``Delta_sigma`` lying in ``c * target`` is kept.
    """
    frame = [_as_rat_vector(v) for v in frame]
    target = [_as_rat_vector(v) for v in target]
    epsilon, c = Fraction(epsilon), Fraction(c)
    e = len(frame) - 1
    if len(target) != e + 1:
        raise GeometryError("frame and target need the same number of vertices")
    if not 0 < epsilon < 1:
        raise PreconditionError("epsilon must lie strictly between 0 and 1")
    if c * c * epsilon * epsilon < e:
        m = minimal_scale(epsilon, e)
        raise PreconditionError(f"scale too small: need c^2 eps^2 >= {e}; least integer c is {m}", m)
    LatticeSimplex(frame, canonical=False)  # affine independence
    order = reorder_by_ratio(frame, target)
    apex = frame[0]
    v = [vsub(frame[i + 1], apex) for i in order]
    lam = [_ratio_on_ray(v[k], vsub(target[order[k] + 1], apex)) for k in range(e)]
    if any(t < 1 for t in lam):
        raise GeometryError("frame is not contained in target")
    # membership in c*target, in v-coefficients a: a_k >= 0 and sum a_k / lam_k <= c
    inv = [1 / t for t in lam]

    def inside(y):
        a = [y[k] - (y[k + 1] if k + 1 < e else 0) for k in range(e)]
        return all(x >= 0 for x in a) and sum(x * w for x, w in zip(a, inv)) <= c

    bounds = [floor(c * lam[k]) for k in range(e)]
    perms = list(permutations(range(1, e + 1)))
    tiles = []

    def rec(prefix):
        k = len(prefix)
        if k == e:
            z = tuple(prefix)
            for sigma in perms:
                verts = WeylSimplex(sigma, z).vertices
                if all(inside(x) for x in verts):
                    tiles.append(tuple(_from_frame(x, v, apex) for x in verts))
            return
        for t in range(0, bounds[k] + 1):
            # the translate is itself a vertex, so its coordinates are nonincreasing
            if k and t > prefix[-1]:
                break
            rec(prefix + [t])

    rec([])
    tiles.sort()
    return TileCover(tuple(frame), tuple(target), c, epsilon, tiles, tuple(lam))


def _from_frame(y, v, apex):
    e = len(y)
    a = [y[k] - (y[k + 1] if k + 1 < e else 0) for k in range(e)]
    p = apex
    for coef, vec in zip(a, v):
        if coef:
            p = vadd(p, vscale(coef, vec))
    return p


def frame_lattice_unimodular(frame, tile) -> bool:
    """True iff ``tile`` is unimodular for the affine lattice of ``frame``."""
    apex = frame[0]
    basis = [vsub(f, apex) for f in frame[1:]]
    bt = transpose(basis)
    coords = []
    for p in tile:
        sol = solve_linear_rational(bt, list(vsub(p, apex)))
        if sol is None or any(Fraction(x).denominator != 1 for x in sol):
            return False
        coords.append([int(x) for x in sol])
    edges = [[x - y for x, y in zip(q, coords[0])] for q in coords[1:]]
    return not edges or abs(integer_determinant(edges)) == 1


def tile_inside(target, c, tile) -> bool:
    """Every vertex of ``tile`` lies in the dilation of ``target`` about its first vertex."""
    apex = target[0]
    scaled = LatticeSimplex([vadd(apex, vscale(Fraction(c), vsub(t, apex))) for t in target], canonical=False)
    return all(scaled.contains(p) for p in tile)


def distance_bound_holds(lam) -> bool:
    """Hyperplane through ``lam_i (e_1+...+e_i)`` is at distance >= lam_min from O.

    With ``lam`` nonincreasing the hyperplane is ``alpha . y = 1`` where
    ``alpha = (1/lam_1, 1/lam_2 - 1/lam_1, ...)``; squared distance is
    ``1 / |alpha|^2``. The claim checked is ``|alpha|^2 * lam_e^2 <= 1``.
    """
    lam = [Fraction(t) for t in lam]
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError("ratios must be nonincreasing")
    alpha = [1 / lam[0]] + [1 / lam[i] - 1 / lam[i - 1] for i in range(1, len(lam))]
    return dot(alpha, alpha) * lam[-1] ** 2 <= 1

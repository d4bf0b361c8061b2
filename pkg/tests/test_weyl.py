from fractions import Fraction
from itertools import permutations
from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from unicover.geom import GeometryError, LatticePolytope, LatticeSimplex
from unicover.verify import simplex_coverage
from unicover.weyl import (
    PreconditionError,
    directional_width,
    distance_bound_holds,
    frame_lattice_unimodular,
    minimal_scale,
    reorder_by_ratio,
    tile_cover,
    tile_inside,
    weyl_simplex,
)


def test_weyl_simplex_examples():
    assert weyl_simplex((1, 2, 3), (0, 0, 0)).vertices == ((0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1))
    assert weyl_simplex((2, 1), (0, 0)).vertices == ((0, 0), (0, 1), (1, 1))
    for sigma in permutations((1, 2, 3)):
        assert weyl_simplex(sigma, (4, -2, 7)).multiplicity == 1
    with pytest.raises(ValueError):
        weyl_simplex((1, 1), (0, 0))


def test_weyl_simplices_triangulate_cube():
    d = 3
    vols = [LatticeSimplex(weyl_simplex(s, (0,) * d).vertices).normalized_volume() for s in permutations(range(1, d + 1))]
    assert sum(vols) == 6  # d! * vol([0,1]^3)


def test_directional_width_examples():
    cube = LatticePolytope([(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)])
    assert directional_width(cube, (1, 0, 0)) == 1
    assert directional_width([(0, 0), (3, 0)], (1, 0)) == 9
    a = (Fraction(3, 5), Fraction(4, 5))
    for sigma in permutations((1, 2)):
        assert directional_width(weyl_simplex(sigma, (0, 0)).vertices, a) <= 2
    with pytest.raises(GeometryError):
        directional_width(cube, (0, 0, 0))


def test_reorder_examples():
    apex = (0, 0)
    assert reorder_by_ratio([apex, (1, 0), (0, 1)], [apex, (3, 0), (0, 2)]) == (0, 1)
    assert reorder_by_ratio([apex, (1, 0), (0, 1)], [apex, (2, 0), (0, 5)]) == (1, 0)
    assert reorder_by_ratio([apex, (1, 0), (0, 1)], [apex, (2, 0), (0, 2)]) == (0, 1)
    with pytest.raises(GeometryError):
        reorder_by_ratio([apex, (1, 0), (0, 1)], [apex, (1, 1), (0, 2)])


def test_tile_cover_triangulates_when_frame_is_target():
    frame = [(0, 0), (1, 0), (1, 1)]
    tc = tile_cover(frame, frame, Fraction(1, 2), 3)
    assert len(tc) == 9
    total = sum(LatticeSimplex(t).normalized_volume() for t in tc.tiles)
    assert total == 9 * LatticeSimplex(frame).normalized_volume()
    assert simplex_coverage([[(0, 0), (3, 0), (3, 3)]], tc.tiles)["verdict"] == "pass"


def test_tile_cover_stretched_target():
    frame = [(0, 0), (1, 0), (1, 1)]
    target = [(0, 0), (1, 0), (3, 3)]
    tc = tile_cover(frame, target, Fraction(1, 2), 3)
    assert all(frame_lattice_unimodular(frame, t) and tile_inside(target, 3, t) for t in tc.tiles)
    half = [[(0, 0), (Fraction(3, 2), 0), (Fraction(9, 2), Fraction(9, 2))]]
    assert simplex_coverage(half, tc.tiles)["verdict"] == "pass"


def test_tile_cover_one_dimensional():
    tc = tile_cover([(0,), (1,)], [(0,), (1,)], Fraction(1, 2), 2)
    assert sorted(tc.tiles) == [((0,), (1,)), ((1,), (2,))]


def test_tile_cover_refuses_small_scale():
    with pytest.raises(PreconditionError) as err:
        tile_cover([(0, 0), (1, 0), (1, 1)], [(0, 0), (1, 0), (1, 1)], Fraction(1, 3), 4)
    assert err.value.minimal_scale == 5 == minimal_scale(Fraction(1, 3), 2)
    with pytest.raises(PreconditionError):
        tile_cover([(0, 0), (1, 0), (1, 1)], [(0, 0), (1, 0), (1, 1)], Fraction(1), 9)


@settings(max_examples=200)
@given(st.lists(st.fractions(min_value=1, max_value=50), min_size=1, max_size=6))
def test_distance_bound(lam):
    assert distance_bound_holds(sorted(lam, reverse=True))


def random_pair(rng, d):
    """Frame conv(O, v_i) and target conv(O, t_i v_i) with t_i >= 1."""
    while True:
        vs = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(d)]
        try:
            if LatticeSimplex([(0,) * d] + vs).dim == d:
                break
        except GeometryError:
            pass
    ts = [Fraction(rng.randint(2, 8), 2) for _ in range(d)]
    frame = [(0,) * d] + vs
    target = [(0,) * d] + [tuple(t * x for x in v) for t, v in zip(ts, vs)]
    return frame, target


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([Fraction(1, 2), Fraction(1, 3)]))
def test_tile_cover_properties_2d(seed, eps):
    frame, target = random_pair(Random(seed), 2)
    c = minimal_scale(eps, 2)
    tc = tile_cover(frame, target, eps, c)
    assert all(frame_lattice_unimodular(frame, t) for t in tc.tiles)
    assert all(tile_inside(target, c, t) for t in tc.tiles)
    inner = [[tuple((1 - eps) * c * x for x in v) for v in target]]
    assert simplex_coverage(inner, tc.tiles)["verdict"] == "pass"

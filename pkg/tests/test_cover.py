from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from unicover.cover import (
    cone_cover_bounds,
    corner_cover,
    cover_cone,
    cover_polytope_multiple,
    minimal_multiple,
    probe_minimal_factor,
)
from unicover.exactmath import lcm, primitive_vector, vadd, vscale, vsub
from unicover.geom import Cone, GeometryError, LatticePolytope, SimplicialCone
from unicover.hilbert import hilbert_basis
from unicover.subdivide import is_empty_cone
from unicover.verify import cone_coverage, verify_cover
from unicover.weyl import PreconditionError
from conftest import random_simplicial


def test_bounds_examples():
    b = cone_cover_bounds(2)
    assert (b.gamma, b.kappa) == (1, 2)
    b = cone_cover_bounds(3)
    assert (b.gamma, b.kappa) == (4, 54)
    b = cone_cover_bounds(4)
    assert (b.gamma, b.kappa) == (6, Fraction(1215, 4))
    with pytest.raises(ValueError):
        cone_cover_bounds(1)


def test_bounds_pol_factor_is_least_admissible():
    for d in range(2, 11):
        b = cone_cover_bounds(d)
        assert b.pol_factor ** 2 >= d * (d + 1) ** 2 > (b.pol_factor - 1) ** 2
        assert b.pol_bound == b.pol_factor * b.kappa


def test_kappa_strictly_increasing():
    ks = [cone_cover_bounds(d).kappa for d in range(2, 16)]
    assert all(a < b for a, b in zip(ks, ks[1:]))


def test_corner_cover_unimodular_cone():
    c = SimplicialCone([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    cc = corner_cover(c, 0)
    assert cc.members == [c]
    assert cc.eta > 0


def test_corner_cover_2d_example():
    cc = corner_cover(SimplicialCone([(1, 0), (1, 2)]), 0)
    assert [m.generators for m in cc.members] == [((1, 0), (1, 1))]
    assert cc.vertex == (1, 0)


def corner_region(c, v1, eta):
    """The cone over conv(v1, v1 + eta (v_i - v1)), with integral generators."""
    pts = [v1] + [vadd(v1, vscale(eta, vsub(v, v1))) for v in c.generators if v != v1]
    gens = []
    for p in pts:
        L = 1
        for x in p:
            L = lcm(L, Fraction(x).denominator)
        gens.append(primitive_vector(tuple(int(x * L) for x in p)))
    return Cone(gens)


def check_corner(c, i):
    cc = corner_cover(c, i)
    v1 = c.generators[i]
    for m in cc.members:
        assert m.multiplicity == 1
        assert v1 in m.generators
        assert all(c.contains(g) for g in m.generators)
        for w in hilbert_basis(m):
            if w != v1:
                assert c.coefficients(w)[i] < 1
    assert cone_coverage(corner_region(c, v1, cc.eta), cc.members)["verdict"] == "pass"
    return cc


def test_corner_cover_3d_example():
    c = SimplicialCone([(1, 0, 0), (0, 1, 0), (1, 1, 2)])
    for i in range(3):
        check_corner(c, i)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_corner_cover_properties(seed):
    rng = Random(seed)
    c = random_simplicial(rng, 3, 4, max_mult=10)
    check_corner(c, rng.randrange(3))


def test_cover_cone_2d_examples():
    uni = Cone([(1, 0), (0, 1)])
    cert = cover_cone(uni)
    assert [m.generators for m in cert.members] == [((0, 1), (1, 0))]
    assert cert.claimed_factor <= 2
    cert = cover_cone(Cone([(1, 0), (1, 2)]))
    assert [m.generators for m in cert.members] == [((1, 0), (1, 1)), ((1, 1), (1, 2))]
    assert verify_cover(cert).verdict == "pass"
    ref = cert.reference
    assert all(ref.contains(g, 2) for m in cert.members for g in m.generators)


def test_cover_cone_3d_example():
    cert = cover_cone(Cone([(1, 0, 0), (0, 1, 0), (1, 1, 2)]))
    assert cert.claimed_factor == 54
    assert verify_cover(cert).verdict == "pass"
    assert all(cert.diagnostics["theta_containment"])


def test_cover_cone_preconditions():
    with pytest.raises(ValueError):
        cover_cone(Cone([(1,)]))
    with pytest.raises(GeometryError):
        cover_cone(Cone([(1, 0, 0), (0, 1, 0)]))


def test_cover_cone_nonsimplicial():
    cert = cover_cone(Cone([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)]))
    assert verify_cover(cert).verdict == "pass"


def test_factor_override_is_only_a_claim():
    cert = cover_cone(Cone([(1, 0, 0), (0, 1, 0), (1, 1, 5)]), factor_override=Fraction(1, 2))
    report = verify_cover(cert)
    assert report.verdict == "fail" and "claimed multiple" in report.reason


def test_polytope_examples():
    sq = LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)])
    cert = cover_polytope_multiple(sq, 7)
    assert verify_cover(cert).verdict == "pass"
    tri = LatticePolytope([(0, 0), (1, 0), (0, 1)])
    assert verify_cover(cover_polytope_multiple(tri, 5)).verdict == "pass"
    seg = cover_polytope_multiple(LatticePolytope([(0,), (1,)]), 4)
    assert [tuple(s.vertices) for s in seg.members] == [((k,), (k + 1,)) for k in range(4)]


def test_polytope_refusal_reports_minimal_multiple():
    tri = LatticePolytope([(0, 0), (1, 0), (0, 1)])
    assert minimal_multiple(tri) == 5
    with pytest.raises(PreconditionError) as err:
        cover_polytope_multiple(tri, 4)
    assert err.value.minimal_scale == 5


def test_probe_examples():
    rows = probe_minimal_factor(Cone([(1, 0), (1, 2)]), [1, 2, 3])
    assert [v for _, v in rows] == ["pass"] * 3
    assert probe_minimal_factor(Cone([(1, 0), (0, 1)]), [1]) == [(1, "pass")]
    rows = probe_minimal_factor(Cone([(1, 0, 0), (0, 1, 0), (1, 1, 2)]), range(1, 55))
    verdicts = [v for _, v in rows]
    assert verdicts[-1] == "pass"
    first = verdicts.index("pass")
    assert all(v == "pass" for v in verdicts[first:])


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_cover_cone_random_3d(seed):
    c = random_simplicial(Random(seed), 3, 3, max_mult=6)
    cert = cover_cone(c)
    assert all(m.multiplicity == 1 for m in cert.members)
    assert verify_cover(cert).verdict == "pass"

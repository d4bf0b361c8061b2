from fractions import Fraction

import pytest

from unicover.cover import CoverCertificate, cover_cone, cover_polytope_multiple
from unicover.geom import Cone, LatticePolytope, LatticeSimplex, SimplicialCone, contains_point
from unicover.verify import (
    CertificateError,
    corrupt_member,
    coverage_lower_bound,
    deletion_mutant,
    spot_check,
    verify_cover,
    witness_is_valid,
)

DEMO = Cone([(1, 0), (1, 2)])


def demo_cert():
    return cover_cone(DEMO)


def test_demo_passes():
    report = verify_cover(demo_cert())
    assert report.verdict == "pass"
    assert report.claimed_factor == 2
    assert all(c["unimodular"] and c["inside"] and c["contained"] for c in report.member_checks)
    assert report.witness is None


def test_deleted_member_gives_witness_in_removed_cone():
    cert = demo_cert()
    removed = cert.members[1]
    broken = CoverCertificate(cert.kind, cert.region, cert.members[:1], cert.claimed_factor)
    report = verify_cover(broken)
    assert report.verdict == "fail"
    w = report.witness
    assert w == (Fraction(1, 2), Fraction(3, 4))  # on the ray through (2, 3)
    assert contains_point(removed, w)
    assert not any(contains_point(m, w) for m in broken.members)
    assert witness_is_valid(broken, report)


def test_determinant_two_member_fails_first_check():
    cert = CoverCertificate("cone-cover", DEMO, [SimplicialCone([(1, 0), (1, 2)])], Fraction(2))
    report = verify_cover(cert)
    assert report.verdict == "fail"
    assert report.reason == "member 0 is not unimodular"
    assert report.coverage["member"] == 0


def test_member_outside_region_fails():
    cert = CoverCertificate("cone-cover", DEMO, [SimplicialCone([(1, -1), (1, 0)]), SimplicialCone([(1, 0), (1, 1)]),
                                                   SimplicialCone([(1, 1), (1, 2)])], Fraction(2))
    report = verify_cover(cert)
    assert report.verdict == "fail" and "outside the region" in report.reason


def test_malformed_certificate():
    with pytest.raises(CertificateError):
        verify_cover(CoverCertificate("mystery", DEMO, [], Fraction(1)))
    with pytest.raises(CertificateError):
        verify_cover(CoverCertificate("polytope-cover", LatticePolytope([(0, 0), (1, 0), (0, 1)]), [], Fraction(1)))


def test_inconclusive_at_small_depth():
    cert = cover_cone(Cone([(1, 0, 0), (0, 1, 0), (1, 1, 5)]))
    report = verify_cover(cert, max_depth=1)
    assert report.verdict == "inconclusive"
    assert report.coverage["deepest_cell"] is not None
    assert verify_cover(cert).verdict == "pass"


def test_coverage_lower_bound():
    cert = demo_cert()
    assert coverage_lower_bound(cert) == 1
    empty = CoverCertificate(cert.kind, cert.region, [], cert.claimed_factor)
    assert coverage_lower_bound(empty) == 0
    half = CoverCertificate(cert.kind, cert.region, cert.members[:1], cert.claimed_factor)
    shallow, deep = coverage_lower_bound(half, 6), coverage_lower_bound(half, 12)
    assert 0 < shallow <= deep < 1


def test_coverage_lower_bound_monotone_in_depth():
    cert = cover_polytope_multiple(LatticePolytope([(0, 0), (1, 0), (0, 1)]), 5)
    mutant, _ = deletion_mutant(cert)
    values = [coverage_lower_bound(mutant, k) for k in (2, 4, 8, 16)]
    assert all(a <= b for a, b in zip(values, values[1:]))
    assert 0 < values[-1] < 1


def test_spot_check_agrees_with_pass():
    for cert in (demo_cert(), cover_cone(Cone([(1, 0, 0), (0, 1, 0), (1, 1, 3)])),
                 cover_polytope_multiple(LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)]), 5)):
        assert verify_cover(cert).verdict == "pass"
        assert spot_check(cert, 2000, seed=1) is None


def test_mutations_flip_verdict():
    for cert in (demo_cert(), cover_cone(Cone([(1, 0, 0), (0, 1, 0), (1, 1, 4)])),
                 cover_polytope_multiple(LatticePolytope([(0, 0), (2, 0), (0, 1)]), 5)):
        mutant, removed = deletion_mutant(cert)
        report = verify_cover(mutant)
        assert report.verdict == "fail" and witness_is_valid(mutant, report)
        bad = corrupt_member(cert, 0)
        report = verify_cover(bad)
        assert report.verdict == "fail" and witness_is_valid(bad, report)


def test_polytope_witness_is_affine():
    cert = cover_polytope_multiple(LatticePolytope([(0, 0), (1, 0), (0, 1)]), 5)
    mutant, removed = deletion_mutant(cert)
    report = verify_cover(mutant)
    assert len(report.witness) == 2
    assert removed.contains(report.witness)

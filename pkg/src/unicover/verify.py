"""Independent verification of cover certificates.

Coverage is decided on rays. In cone mode a cell is a simplicial subcone
of the target cone; in polytope mode points ``x`` become rays ``(x, 1)`` and
member simplices become cones. A cell is discharged once a single member
contains all of its rays. Otherwise it is bisected along its longest edge
(measured on the cross-section) or, when only a few members remain in
play, cut along a facet hyperplane of the member containing its
barycenter. Cutting is what makes the search finish on closed covers whose
members share boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import reduce
from math import prod
from random import Random

from .exactmath import adjugate, dot, integer_determinant, lcm, primitive_vector, transpose
from .geom import LatticeSimplex, SimplicialCone, contains_point
from .hilbert import check_hilbert_containment, hilbert_basis_simplicial
from .subdivide import place_rays, triangulate_cone


class CertificateError(ValueError):
    """The certificate is structurally malformed."""


@dataclass
class VerificationReport:
    verdict: str
    claimed_factor: Fraction
    member_checks: list = field(default_factory=list)
    coverage: dict = field(default_factory=dict)
    depth_used: int = 0
    reason: str = ""

    @property
    def witness(self):
        return self.coverage.get("witness")


class _Member:
    """Member cone with integer facet normals (rows of the signed adjugate)."""

    __slots__ = ("rays", "normals", "det")

    def __init__(self, rays):
        self.rays = [tuple(r) for r in rays]
        self.det = integer_determinant(self.rays)
        if self.det == 0:
            raise CertificateError("member is degenerate")
        adj = adjugate(transpose(self.rays))
        s = 1 if self.det > 0 else -1
        self.normals = [tuple(s * x for x in row) for row in adj]

    def contains(self, v) -> bool:
        return all(dot(n, v) >= 0 for n in self.normals)

    def separated(self, cell) -> bool:
        return any(all(dot(n, v) <= 0 for v in cell) for n in self.normals)


def _homogeneous_members(cert):
    if cert.kind == "cone-cover":
        return [m.generators for m in cert.members]
    return [tuple(tuple(int(x) for x in v) + (1,) for v in m.vertices) for m in cert.members]


def _region_cells(cert):
    """Initial cells (integer rays) and the cross-section functional."""
    if cert.kind == "cone-cover":
        region = cert.region
        lam = tuple(map(sum, zip(*region.facet_normals)))
        cells = [m.generators for m in triangulate_cone(region).members]
        return cells, lam
    p, c = cert.region, cert.multiple
    d = p.ambient_dim
    rays = [tuple(c * x for x in v) + (1,) for v in p.vertices]
    cells = [tuple(s) for s in place_rays(sorted(rays))]
    return cells, (0,) * d + (1,)


def _member_checks(cert, check_containment: bool):
    checks = []
    if cert.kind == "cone-cover":
        region = cert.region
        ref = cert.reference
        for i, m in enumerate(cert.members):
            gens = list(m.generators)
            det = integer_determinant(gens) if len(gens) == region.dim else 0
            unimodular = abs(det) == 1
            inside = all(region.contains(g) for g in gens)
            contained = True
            if check_containment and unimodular:
                hb = hilbert_basis_simplicial(SimplicialCone(gens))
                contained = check_hilbert_containment(hb, ref, cert.claimed_factor)
            checks.append({"index": i, "unimodular": unimodular, "inside": inside, "contained": contained})
    else:
        p, c = cert.region, cert.multiple
        for i, m in enumerate(cert.members):
            unimodular = m.dim == p.ambient_dim and m.is_lattice and m.multiplicity == 1
            inside = all(p.contains(v, c) for v in m.vertices)
            checks.append({"index": i, "unimodular": unimodular, "inside": inside, "contained": True})
    return checks


def _affine(v, lam):
    h = dot(lam, v)
    return tuple(Fraction(x, h) for x in v)


def _barycenter(cell, lam):
    hs = [dot(lam, v) for v in cell]
    L = reduce(lcm, hs, 1)
    b = tuple(sum((L // h) * v[k] for h, v in zip(hs, cell)) for k in range(len(cell[0])))
    return primitive_vector(b)


def _edge_length2(u, v, lam):
    hu, hv = dot(lam, u), dot(lam, v)
    diff = [hv * a - hu * b for a, b in zip(u, v)]
    return Fraction(dot(diff, diff), (hu * hv) ** 2)


def _midpoint(u, v, lam):
    hu, hv = dot(lam, u), dot(lam, v)
    return primitive_vector(tuple(hv * a + hu * b for a, b in zip(u, v)))


def _volume(cell, lam):
    return Fraction(abs(integer_determinant(list(cell))), prod(dot(lam, v) for v in cell))


def _bisect(cell, lam):
    best = None
    n = len(cell)
    for i in range(n):
        for j in range(i + 1, n):
            key = (_edge_length2(cell[i], cell[j], lam), cell[i], cell[j])
            if best is None or key[0] > best[0][0]:
                best = (key, i, j)
    _, i, j = best
    m = _midpoint(cell[i], cell[j], lam)
    a = cell[:i] + (m,) + cell[i + 1:]
    b = cell[:j] + (m,) + cell[j + 1:]
    return [a, b]


def _cut(cell, normal):
    """Split ``cell`` along ``normal . x = 0`` by splitting crossing edges one at a time."""
    vals = [dot(normal, v) for v in cell]
    i = next((k for k, s in enumerate(vals) if s > 0), None)
    j = next((k for k, s in enumerate(vals) if s < 0), None)
    if i is None or j is None:
        return [cell]
    p, q = cell[i], cell[j]
    x = primitive_vector(tuple(-vals[j] * a + vals[i] * b for a, b in zip(p, q)))
    return _cut(cell[:i] + (x,) + cell[i + 1:], normal) + _cut(cell[:j] + (x,) + cell[j + 1:], normal)


def _crossing_normal(member, cell):
    for n in member.normals:
        vals = [dot(n, v) for v in cell]
        if min(vals) < 0 < max(vals):
            return n
    return None


def _coverage(members, cells, lam, max_depth, *, stop_on_fail=True, cut_below=None, bisect_until=8):
    """Worklist coverage search. Returns a dict with verdict, witness, volumes."""
    dim = len(lam)
    if cut_below is None:
        cut_below = 4 * dim
    total = sum((_volume(c, lam) for c in cells), Fraction(0))
    discharged = Fraction(0)
    stack = [(tuple(c), 0, list(range(len(members)))) for c in reversed(cells)]
    depth_used = 0
    result = {"verdict": "pass", "witness": None, "deepest_cell": None}
    used = set()
    while stack:
        cell, depth, cands = stack.pop()
        depth_used = max(depth_used, depth)
        cands = [k for k in cands if not members[k].separated(cell)]
        owners = [k for k in cands if all(members[k].contains(v) for v in cell)]
        if owners:
            # prefer members already in use so that `used` stays small
            used.add(next((k for k in owners if k in used), owners[0]))
            discharged += _volume(cell, lam)
            continue
        bary = _barycenter(cell, lam)
        holder = next((k for k in cands if members[k].contains(bary)), None)
        if holder is None:
            if result["verdict"] != "fail":
                result.update(verdict="fail", witness=_affine(bary, lam))
            if stop_on_fail:
                break
            continue
        if depth >= max_depth:
            if result["verdict"] == "pass":
                result.update(verdict="inconclusive", deepest_cell=[_affine(v, lam) for v in cell])
            if stop_on_fail:
                break
            continue
        normal = None
        if len(cands) <= cut_below or depth >= bisect_until:
            normal = _crossing_normal(members[holder], cell)
        children = _cut(cell, normal) if normal is not None else _bisect(cell, lam)
        for ch in reversed(children):
            stack.append((ch, depth + 1, cands))
    result["depth_used"] = depth_used
    result["used"] = sorted(used)
    result["fraction"] = discharged / total if total else Fraction(1)
    return result


def _prepare(cert):
    if cert.kind not in ("cone-cover", "polytope-cover"):
        raise CertificateError(f"unknown certificate kind {cert.kind!r}")
    if cert.kind == "polytope-cover" and not cert.multiple:
        raise CertificateError("polytope certificate lacks the multiple")
    rays = _homogeneous_members(cert)
    dim = len(rays[0][0]) if rays else None
    members = []
    for r in rays:
        if len(r) != dim or any(len(v) != dim for v in r):
            raise CertificateError("member has the wrong number of generators or coordinates")
        try:
            members.append(_Member(r))
        except CertificateError:
            members.append(None)
    return members


def verify_cover(cert, max_depth: int = 40, *, check_containment: bool = True) -> VerificationReport:
    """Check unimodularity, containment in the region, Hilbert containment, coverage."""
    members = _prepare(cert)
    report = VerificationReport("pass", cert.claimed_factor)
    report.member_checks = _member_checks(cert, check_containment)
    for name, label in (("unimodular", "not unimodular"), ("inside", "outside the region"),
                        ("contained", "outside the claimed multiple of the base simplex")):
        bad = next((c for c in report.member_checks if not c[name]), None)
        if bad is not None:
            report.verdict = "fail"
            report.reason = f"member {bad['index']} is {label}"
            report.coverage = {"verdict": "skipped", "witness": None, "member": bad["index"]}
            return report
    cells, lam = _region_cells(cert)
    cov = _coverage(members, cells, lam, max_depth)
    if cert.kind == "polytope-cover":
        # drop the homogenizing coordinate
        if cov["witness"] is not None:
            cov["witness"] = cov["witness"][:-1]
        if cov["deepest_cell"] is not None:
            cov["deepest_cell"] = [v[:-1] for v in cov["deepest_cell"]]
    report.coverage = cov
    report.depth_used = cov["depth_used"]
    report.verdict = cov["verdict"]
    if cov["verdict"] == "fail":
        report.reason = "uncovered point found"
    elif cov["verdict"] == "inconclusive":
        report.reason = f"depth limit {max_depth} reached"
    return report


def coverage_lower_bound(cert, max_depth: int = 40) -> Fraction:
    """Fraction of the region's volume discharged by the search (1 on pass)."""
    members = [m for m in _prepare(cert) if m is not None]
    cells, lam = _region_cells(cert)
    if not members:
        return Fraction(0)
    return _coverage(members, cells, lam, max_depth, stop_on_fail=False)["fraction"]


def _homogenize(point):
    """Primitive integer ray through ``(point, 1)``."""
    q = tuple(Fraction(x) for x in point) + (Fraction(1),)
    L = reduce(lcm, (x.denominator for x in q), 1)
    return primitive_vector(tuple(int(x * L) for x in q))


def cone_coverage(region, members, max_depth: int = 40) -> dict:
    """Coverage search of a full-dimensional cone by simplicial cones.

    Members may stick out of the region; only coverage is decided.
    """
    lam = tuple(map(sum, zip(*region.facet_normals)))
    cells = [m.generators for m in triangulate_cone(region).members]
    ms = [_Member(m.generators if hasattr(m, "generators") else m) for m in members]
    return _coverage(ms, cells, lam, max_depth)


def simplex_coverage(region, members, max_depth: int = 40) -> dict:
    """Coverage search of a union of rational simplices by rational simplices.

    ``region`` and ``members`` are lists of vertex lists; all simplices are
    full-dimensional. The witness is returned in affine coordinates.
    """
    cells = [tuple(_homogenize(v) for v in s) for s in region]
    ms = [_Member([_homogenize(v) for v in s]) for s in members]
    lam = (0,) * (len(cells[0][0]) - 1) + (1,)
    cov = _coverage(ms, cells, lam, max_depth)
    if cov["witness"] is not None:
        cov["witness"] = cov["witness"][:-1]
    return cov


def point_covered(cert, point) -> bool:
    """Exact membership of a point of the region in some member."""
    return any(contains_point(m, point) for m in cert.members)


def witness_is_valid(cert, report) -> bool:
    """Re-check a fail verdict independently of the search that produced it."""
    if report.verdict != "fail":
        return False
    cov = report.coverage
    if cov.get("witness") is not None:
        w = cov["witness"]
        if cert.kind == "polytope-cover":
            if not cert.region.contains(w, cert.multiple):
                return False
        elif not cert.region.contains(w):
            return False
        return not point_covered(cert, w)
    idx = cov.get("member")
    if idx is None:
        return False
    checks = _member_checks(cert, True)[idx]
    return not (checks["unimodular"] and checks["inside"] and checks["contained"])


def sample_points(cert, n: int, seed: int = 0) -> list:
    """Exact random points of the region (of ``multiple * P`` in polytope mode)."""
    rng = Random(seed)
    cells, lam = _region_cells(cert)
    weights = [_volume(c, lam) for c in cells]
    out = []
    for _ in range(n):
        cell = rng.choices(cells, weights=[float(w) for w in weights])[0]
        raw = [rng.randint(1, 1000) for _ in cell]
        total = sum(raw)
        pts = [_affine(v, lam) for v in cell]
        p = tuple(sum(Fraction(r, total) * q[k] for r, q in zip(raw, pts)) for k in range(len(lam)))
        out.append(p[:-1] if cert.kind == "polytope-cover" else p)
    return out


def spot_check(cert, n: int = 10_000, seed: int = 0):
    """First sampled point covered by no member, or None."""
    for p in sample_points(cert, n, seed):
        if not point_covered(cert, p):
            return p
    return None


def _interior_ray(member_rays):
    return tuple(map(sum, zip(*member_rays)))


def used_subcover(cert, max_depth: int = 40):
    """Certificate restricted to the members that discharged some cell.

    On a passing certificate the result passes as well and is usually far
    less redundant, which makes single deletions detectable.
    """
    members = _prepare(cert)
    cells, lam = _region_cells(cert)
    cov = _coverage(members, cells, lam, max_depth)
    if cov["verdict"] != "pass":
        raise ValueError("only a passing certificate has a subcover")
    return replace(cert, members=[cert.members[k] for k in cov["used"]], diagnostics={})


def essential_member(cert, max_depth: int = 40) -> int:
    """Index of a member whose removal uncovers part of the region, or -1.

    A member whose interior point lies in no other member is essential.
    Failing that, members are tried one at a time with the coverage search.
    """
    rays = _homogeneous_members(cert)
    members = [_Member(r) for r in rays]
    for i, r in enumerate(rays):
        x = _interior_ray(r)
        if sum(1 for m in members if m.contains(x)) == 1:
            return i
    cells, lam = _region_cells(cert)
    for i in range(len(members)):
        rest = members[:i] + members[i + 1:]
        if _coverage(rest, cells, lam, max_depth)["verdict"] == "fail":
            return i
    return -1


def deletion_mutant(cert, max_depth: int = 40):
    """A certificate with one essential member removed, plus that member.

    Redundant covers are first reduced to the subcover used by the search.
    Returns ``(mutant, removed_member)`` or None if nothing is essential.
    """
    base = cert
    i = essential_member(base, max_depth) if len(base.members) <= 64 else -1
    if i < 0:
        base = used_subcover(cert, max_depth)
        i = essential_member(base, max_depth)
    if i < 0:
        return None
    return delete_member(base, i), base.members[i]


def delete_member(cert, index: int):
    members = list(cert.members)
    del members[index]
    return replace(cert, members=members, diagnostics={})


def corrupt_member(cert, index: int = 0):
    """Make one member non-unimodular by changing one of its generators or vertices."""
    members = list(cert.members)
    m = members[index]
    if cert.kind == "cone-cover":
        gens = list(m.generators)
        # k*g0 + g1 keeps the span but multiplies the determinant by k,
        # unless normalization to a primitive vector cancels it
        for k in range(2, 100):
            g = primitive_vector(tuple(k * x + y for x, y in zip(gens[0], gens[1])))
            if abs(integer_determinant([g] + gens[1:])) != 1:
                break
        members[index] = SimplicialCone([g] + gens[1:])
    else:
        verts = [tuple(v) for v in m.vertices]
        a, b = verts[0], verts[1]
        verts[1] = tuple(2 * y - x for x, y in zip(a, b))
        members[index] = LatticeSimplex(verts)
    return replace(cert, members=members, diagnostics={})

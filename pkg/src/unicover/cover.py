"""Unimodular covers of cones and of multiples of lattice polytopes.

The cone construction works on one empty simplicial cone at a time:

* a corner cover at each extreme generator ``v1`` is obtained by projecting
  along ``v1``, covering the projected cone one dimension lower and lifting
  the Hilbert basis elements back;
* every corner cone is pushed beyond the hyperplane through the barycenter
  of ``conv(v_1..v_d)`` parallel to the facet opposite ``v1``; the part that
  sticks out is covered by Weyl tiles at level ``gamma`` and then resolved.

Polytope multiples reuse the cone covers at every vertex of every empty
simplex of a triangulation and fill the rest with Weyl tiles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, isqrt
from typing import Optional, Union

from .exactmath import (
    dot,
    hermite_normal_form,
    inverse,
    lattice_basis,
    mat_vec,
    solve_linear_rational,
    transpose,
    vadd,
    vscale,
    vsub,
)
from .geom import (
    Cone,
    GeometryError,
    LatticePolytope,
    LatticeSimplex,
    SimplicialCone,
    _as_int_vector,
)
from .resolve import resolve_cone
from .subdivide import refine_to_empty, triangulate_cone, triangulate_polytope_empty
from .weyl import PreconditionError, tile_cover


# --- bounds --------------------------------------------------------------------


def ceil_sqrt(n: int) -> int:
    if n <= 0:
        return 0
    return isqrt(n - 1) + 1


@dataclass(frozen=True)
class BoundParams:
    d: int
    gamma: int
    kappa: Fraction
    pol_factor: int
    pol_bound: Fraction


def cone_cover_bounds(d: int) -> BoundParams:
    """``gamma``, ``kappa`` and the polytope-side factors for dimension ``d``."""
    if d < 2:
        raise ValueError("bounds are defined for d >= 2")
    gamma = ceil_sqrt(d - 1) * (d - 1)
    kappa = gamma * Fraction(d * (d + 1), 2) * Fraction(3, 2) ** (gamma - 2)
    pol_factor = ceil_sqrt(d * (d + 1) ** 2)
    return BoundParams(d, gamma, kappa, pol_factor, pol_factor * kappa)


def _cone_factor(d: int) -> Fraction:
    """Containment factor our cone covers achieve in dimension ``d``."""
    return Fraction(1) if d <= 2 else cone_cover_bounds(d).kappa


# --- certificates --------------------------------------------------------------


@dataclass
class CoverCertificate:
    """A claimed cover. ``region`` is a Cone (cone mode) or a LatticePolytope.

    In polytope mode the covered set is ``multiple * region``.
    """

    kind: str
    region: Union[Cone, LatticePolytope]
    members: list
    claimed_factor: Fraction
    multiple: Optional[int] = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def reference(self):
        if self.kind == "cone-cover":
            return LatticePolytope([(0,) * self.region.dim] + list(self.region.generators))
        return (self.region, self.multiple)


def _dedupe(members):
    seen = {}
    for m in members:
        key = m.generators if isinstance(m, Cone) else m.vertices
        seen.setdefault(key, m)
    return [seen[k] for k in sorted(seen)]


# --- corner covers -------------------------------------------------------------


@dataclass
class CornerCover:
    cone: SimplicialCone
    vertex: tuple
    members: list
    eta: Fraction
    containment_factor: Fraction


def _unit_functional(v):
    """Integer ``a`` with ``a . v == 1`` for a primitive vector ``v``."""
    h, u = hermite_normal_form([[x] for x in v])
    assert h[0][0] == 1
    return tuple(u[0])


def _frac(x: Fraction) -> Fraction:
    return x - floor(x)


def corner_cover(c: SimplicialCone, vertex_index: int = 0) -> CornerCover:
    """Unimodular subcones of ``c`` covering a neighbourhood of one generator.

    Project along ``v1`` onto the span of ``w_i = v_i - v1`` with lattice
    ``pi(Z^d)``, cover the projected cone one dimension lower, and lift each
    Hilbert basis element ``x`` to the unique integral point of ``x + R v1``
    whose ``v1``-coefficient lies in ``[0, 1)``.
    """
    if not isinstance(c, SimplicialCone):
        c = SimplicialCone(c)
    d = c.dim
    if not c.is_full_dimensional or d < 2:
        raise GeometryError("corner covers need a full-dimensional cone of dimension >= 2")
    gens = list(c.generators)
    v1 = gens[vertex_index]
    others = gens[:vertex_index] + gens[vertex_index + 1:]
    ginv = inverse(transpose([v1] + others))
    # columns of rows 1..d-1 are the images of e_k in w-coordinates
    proj = [tuple(ginv[r][k] for r in range(1, d)) for k in range(d)]
    basis = lattice_basis(proj)  # rows, w-coordinates
    bt = transpose(basis)
    sub_gens = []
    for i in range(d - 1):
        e = [Fraction(int(j == i)) for j in range(d - 1)]
        y = solve_linear_rational(bt, e)
        sub_gens.append(_as_int_vector(y))
    sub_members = _cover_members(Cone(sub_gens))
    a = _unit_functional(v1)
    w = [vsub(o, v1) for o in others]
    members, eta = [], None
    for sm in sub_members:
        lifts, alphas, ns = [], [], []
        for x in sm.generators:
            alpha = mat_vec(bt, x)
            u = (0,) * d
            for coef, wi in zip(alpha, w):
                u = vadd(u, vscale(coef, wi))
            t = _frac(-dot(a, u) - sum(alpha))
            lift = vscale(t, v1)
            for coef, o in zip(alpha, others):
                lift = vadd(lift, vscale(coef, o))
            lifts.append(_as_int_vector(lift))
            alphas.append(alpha)
            ns.append(t + sum(alpha))
        m = SimplicialCone([v1] + lifts)
        assert m.multiplicity == 1, "lifted corner cone is not unimodular"
        members.append(m)
        xinv = inverse(transpose(alphas))
        norm = max(sum(abs(x) for x in row) for row in xinv)
        bound = 1 / ((d - 1) * norm * max(ns))
        eta = bound if eta is None else min(eta, bound)
    return CornerCover(c, v1, _dedupe(members), eta, _cone_factor(d - 1) + 1)


# --- cone covers ---------------------------------------------------------------


def _empty_pieces(c: Cone) -> list:
    pieces = []
    for m in triangulate_cone(c).members:
        pieces.extend(refine_to_empty(m).members)
    return pieces


def _cover_members(c: Cone, diagnostics: Optional[dict] = None) -> list:
    """Unimodular cones covering ``c`` (any dimension >= 1)."""
    if c.dim == 1:
        return [SimplicialCone(c.generators)]
    pieces = _empty_pieces(c)
    if c.dim == 2:
        return _dedupe(pieces)
    out = []
    for piece in pieces:
        out.extend(_empty_cone_cover(piece, diagnostics))
    return _dedupe(out)


def _bad_functional(gens, i):
    """``phi`` in generator coordinates: ``(d-1) xi_i - sum_{j != i} xi_j``."""
    d = len(gens)
    return tuple((d - 1) if j == i else -1 for j in range(d))


def _empty_cone_cover(c: SimplicialCone, diagnostics: Optional[dict] = None) -> list:
    d = c.dim
    params = cone_cover_bounds(d)
    gamma = params.gamma
    out = []
    for i in range(d):
        cc = corner_cover(c, i)
        v1 = c.generators[i]
        phi = _bad_functional(c.generators, i)
        for cj in cc.members:
            out.append(cj)
            out.extend(_extend_corner_member(c, v1, phi, cj, gamma, diagnostics))
    return out


def _extend_corner_member(c, v1, phi, cj, gamma, diagnostics=None) -> list:
    """Cover the part of the cone over ``cj``'s corner that lies below the cut."""
    d = c.dim
    ws = [g for g in cj.generators if g != v1]
    val = {w: dot(phi, c.coefficients(w)) for w in ws}
    bad = [w for w in ws if val[w] > 0]
    good = [w for w in ws if val[w] <= 0]
    z = {}
    for w in ws:
        t = Fraction(d - 1) / ((d - 1) - val[w])
        z[w] = vadd(v1, vscale(t, vsub(w, v1)))
    # theta(Gamma) inside (d+1) Delta_C
    ok = True
    for w in ws:
        q = vadd(v1, vscale(Fraction(d, d - 1), vsub(z[w], v1)))
        xi = c.coefficients(q)
        ok = ok and all(x >= 0 for x in xi) and sum(xi) <= d + 1
    if diagnostics is not None:
        diagnostics.setdefault("theta_containment", []).append(ok)
    if not bad:
        return []
    base = vscale(gamma, v1)
    frame = [base] + [vadd(base, vsub(w, v1)) for w in bad]
    target = [base] + [vadd(base, vsub(z[w], v1)) for w in bad]
    eps = Fraction(1, d)
    scale = Fraction(d * gamma, d - 1)
    tiles = tile_cover(frame, target, eps, scale).tiles
    coords_basis = transpose([v1] + bad)
    k = len(bad) + 1
    out = []
    seen = set()
    for tile in tiles:
        coords = [_as_int_vector(solve_linear_rational(coords_basis, list(p))) for p in tile]
        cone = SimplicialCone(coords)
        if cone.generators in seen:
            continue
        seen.add(cone.generators)
        for delta in resolve_cone(cone).members:
            gens = []
            for g in delta.generators:
                vec = (0,) * d
                for coef, b in zip(g, [v1] + bad):
                    vec = vadd(vec, vscale(coef, b))
                gens.append(vec)
            dt = SimplicialCone(gens + good)
            assert dt.multiplicity == 1, "assembled cone is not unimodular"
            out.append(dt)
    if diagnostics is not None:
        diagnostics["tiles"] = diagnostics.get("tiles", 0) + len(tiles)
        diagnostics["max_bad"] = max(diagnostics.get("max_bad", 0), k - 1)
    return out


def cover_cone(c, factor_override=None) -> CoverCertificate:
    """Unimodular cover of a pointed full-dimensional cone.

    The claimed factor is ``kappa(d)`` unless overridden; an override is
    only a claim and may well fail verification.
    """
    if not isinstance(c, Cone):
        c = Cone(c)
    if c.dim < 2:
        raise ValueError("cover_cone needs dimension >= 2")
    if not c.is_full_dimensional:
        raise GeometryError("cover_cone needs a full-dimensional cone")
    diagnostics = {}
    members = _cover_members(c, diagnostics)
    claimed = Fraction(factor_override) if factor_override is not None else cone_cover_bounds(c.dim).kappa
    diagnostics["members"] = len(members)
    return CoverCertificate("cone-cover", c, members, claimed, None, diagnostics)


# --- polytope multiples --------------------------------------------------------


def _corner_data(simplex: LatticeSimplex):
    """Per vertex: (vertex, corner cone, cover members, inner factor c')."""
    verts = [_as_int_vector(v) for v in simplex.vertices]
    out = []
    for i, vi in enumerate(verts):
        edges = [vsub(v, vi) for j, v in enumerate(verts) if j != i]
        corner = SimplicialCone(edges)
        members = _cover_members(corner)
        inner = max(corner.height(g) for m in members for g in m.generators)
        out.append((vi, corner, members, inner))
    return out


def minimal_multiple(p: LatticePolytope) -> int:
    """Least integer ``c`` accepted by :func:`cover_polytope_multiple`."""
    if not isinstance(p, LatticePolytope):
        p = LatticePolytope(p)
    d = p.dim
    if d <= 1:
        return 1
    need = 1
    for s in triangulate_polytope_empty(p):
        for _, _, _, inner in _corner_data(s):
            need = max(need, _ceil_sqrt_frac(d * (d + 1) ** 2 * inner * inner))
    return need


def _ceil_sqrt_frac(x: Fraction) -> int:
    c = max(0, isqrt(floor(x)))
    while c * c < x:
        c += 1
    return c


def cover_polytope_multiple(p, c: int) -> CoverCertificate:
    """Unimodular simplices covering ``c * p``.

    Each empty simplex of a triangulation is treated corner by corner: the
    corner cone's unimodular cover ``D`` is cut at the inner factor ``c'``
    and filled with Weyl tiles of scale ``c / c'`` and ``eps = 1/(d+1)``.
    Any integer ``c`` with ``c^2 >= d (d+1)^2 c'^2`` is accepted.
    """
    if not isinstance(p, LatticePolytope):
        p = LatticePolytope(p)
    if not p.is_full_dimensional:
        raise GeometryError("cover_polytope_multiple needs a full-dimensional polytope")
    c = int(c)
    if c < 1:
        raise ValueError("the multiple must be a positive integer")
    d = p.dim
    if d == 1:
        lo, hi = p.vertices[0][0], p.vertices[-1][0]
        members = [LatticeSimplex([(k,), (k + 1,)]) for k in range(c * lo, c * hi)]
        return CoverCertificate("polytope-cover", p, members, Fraction(c), c, {"members": len(members)})
    eps = Fraction(1, d + 1)
    members = []
    inner_max = Fraction(0)
    for s in triangulate_polytope_empty(p):
        for vi, corner, dmembers, inner in _corner_data(s):
            inner_max = max(inner_max, inner)
            if c * c < d * (d + 1) ** 2 * inner * inner:
                m = minimal_multiple(p)
                raise PreconditionError(f"multiple {c} is too small; least admissible multiple is {m}", m)
            shift = vscale(c, vi)
            for dm in dmembers:
                frame = [(0,) * d] + list(dm.generators)
                target = [(0,) * d] + [vscale(inner / corner.height(g), g) for g in dm.generators]
                for tile in tile_cover(frame, target, eps, Fraction(c) / inner).tiles:
                    members.append(LatticeSimplex([_as_int_vector(vadd(shift, q)) for q in tile]))
    members = _dedupe(members)
    diag = {"members": len(members), "inner_factor": inner_max}
    return CoverCertificate("polytope-cover", p, members, Fraction(c), c, diag)


# --- probing -------------------------------------------------------------------


def probe_minimal_factor(region, factors, max_depth: int = 40) -> list:
    """Verifier verdicts for a range of factors (cones) or multiples (polytopes).

    For a cone the cover is built once and each factor only changes the
    containment claim. Returns ``(factor, verdict)`` pairs.
    """
    from .verify import verify_cover

    rows = []
    if isinstance(region, LatticePolytope):
        for f in factors:
            try:
                cert = cover_polytope_multiple(region, int(f))
            except PreconditionError:
                rows.append((f, "refused"))
                continue
            rows.append((f, verify_cover(cert, max_depth).verdict))
        return rows
    if not isinstance(region, Cone):
        region = Cone(region)
    cert = cover_cone(region)
    report = verify_cover(cert, max_depth, check_containment=False)
    ref = cert.reference
    for f in factors:
        if report.verdict != "pass":
            rows.append((f, report.verdict))
            continue
        f = Fraction(f)
        ok = all(ref.contains(g, f) for m in cert.members for g in m.generators)
        rows.append((f, "pass" if ok else "fail"))
    return rows

"""Exact unimodular covers of rational cones and lattice polytope multiples."""

from .cover import CoverCertificate, cone_cover_bounds, corner_cover, cover_cone, cover_polytope_multiple, minimal_multiple
from .geom import Cone, GeometryError, LatticePolytope, LatticeSimplex, SimplicialCone
from .hilbert import HilbertBasis, hilbert_basis
from .resolve import h_value, resolve_cone
from .subdivide import refine_to_empty, stellar_subdivision, triangulate_cone, triangulate_polytope_empty
from .verify import VerificationReport, coverage_lower_bound, verify_cover
from .weyl import tile_cover

__all__ = [
    "Cone", "CoverCertificate", "GeometryError", "HilbertBasis", "LatticePolytope", "LatticeSimplex",
    "SimplicialCone", "VerificationReport", "cone_cover_bounds", "corner_cover", "cover_cone",
    "cover_polytope_multiple", "coverage_lower_bound", "h_value", "hilbert_basis", "minimal_multiple",
    "refine_to_empty", "resolve_cone", "stellar_subdivision", "tile_cover", "triangulate_cone",
    "triangulate_polytope_empty", "verify_cover",
]

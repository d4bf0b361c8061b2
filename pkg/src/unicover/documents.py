"""JSON documents with exact numerics.

Every coordinate, factor and table entry is written as a decimal string
("3", "-7", "27/2"); nothing passes through binary floating point.
Each document carries ``kind`` and ``format_version``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .cover import CoverCertificate
from .geom import Cone, GeometryError, LatticePolytope, LatticeSimplex, SimplicialCone
from .hilbert import HilbertBasis
from .resolve import LedgerEntry, Resolution
from .verify import VerificationReport

FORMAT_VERSION = "1"

KINDS = (
    "cone", "polytope", "cone-cover", "polytope-cover", "hilbert-basis", "resolution",
    "triangulation", "report", "bounds-table", "hseq-table", "probe-table", "ensemble-summary",
)


class DocumentError(ValueError):
    """Malformed document; ``field`` names the offending entry."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


def num(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_num(s, field) -> Fraction:
    if not isinstance(s, str):
        raise DocumentError(field, f"expected a decimal string, got {type(s).__name__}")
    try:
        x = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(field, f"not an exact number: {s!r}") from None
    if "." in s or "e" in s.lower():
        raise DocumentError(field, f"use integers or p/q, not {s!r}")
    return x


def parse_int(s, field) -> int:
    x = parse_num(s, field)
    if x.denominator != 1:
        raise DocumentError(field, f"expected an integer, got {s!r}")
    return int(x)


def _vec(v):
    return [num(x) for x in v]


def _parse_vec(v, field, integral=True):
    if not isinstance(v, list) or not v:
        raise DocumentError(field, "expected a nonempty list of numbers")
    f = parse_int if integral else parse_num
    return tuple(f(x, f"{field}[{i}]") for i, x in enumerate(v))


def _parse_vecs(vs, field, integral=True, dim=None):
    if not isinstance(vs, list) or not vs:
        raise DocumentError(field, "expected a nonempty list of vectors")
    out = [_parse_vec(v, f"{field}[{i}]", integral) for i, v in enumerate(vs)]
    n = dim if dim is not None else len(out[0])
    for i, v in enumerate(out):
        if len(v) != n:
            raise DocumentError(f"{field}[{i}]", f"expected {n} coordinates, got {len(v)}")
    return out


def _get(doc, key, field=""):
    if not isinstance(doc, dict):
        raise DocumentError(field or "document", "expected an object")
    if key not in doc:
        raise DocumentError(f"{field}.{key}" if field else key, "missing")
    return doc[key]


def _dim(doc, field):
    d = _get(doc, "dim", field)
    if isinstance(d, bool) or not isinstance(d, (int, str)):
        raise DocumentError(f"{field}.dim" if field else "dim", "expected an integer")
    return d if isinstance(d, int) else parse_int(d, f"{field}.dim" if field else "dim")


def _head(kind):
    return {"kind": kind, "format_version": FORMAT_VERSION}


# --- encoders --------------------------------------------------------------------


def cone_doc(c: Cone) -> dict:
    return {**_head("cone"), "dim": c.dim, "generators": [_vec(g) for g in c.generators]}


def polytope_doc(p: LatticePolytope) -> dict:
    return {**_head("polytope"), "dim": p.ambient_dim, "vertices": [_vec(v) for v in p.vertices]}


def _region_doc(region):
    return cone_doc(region) if isinstance(region, Cone) else polytope_doc(region)


def certificate_doc(cert: CoverCertificate) -> dict:
    doc = {**_head(cert.kind), "region": _region_doc(cert.region), "claimed_factor": num(cert.claimed_factor)}
    if cert.kind == "cone-cover":
        doc["members"] = [[_vec(g) for g in m.generators] for m in cert.members]
    else:
        doc["multiple"] = num(cert.multiple)
        doc["members"] = [[_vec(v) for v in m.vertices] for m in cert.members]
    return doc


def hilbert_doc(hb: HilbertBasis) -> dict:
    return {**_head("hilbert-basis"), "cone": cone_doc(hb.cone), "elements": [_vec(x) for x in hb.elements]}


def triangulation_doc(region, pieces) -> dict:
    if isinstance(region, Cone):
        members = [[_vec(g) for g in m.generators] for m in pieces]
    else:
        members = [[_vec(v) for v in s.vertices] for s in pieces]
    return {**_head("triangulation"), "region": _region_doc(region), "members": members}


def resolution_doc(res: Resolution) -> dict:
    return {
        **_head("resolution"),
        "cone": cone_doc(res.input),
        "generations": num(res.generations),
        "bound_factor": num(res.bound_factor),
        "members": [[_vec(g) for g in m.generators] for m in res.members],
        "ledger": [
            {
                "point": _vec(e.point),
                "generation": num(e.generation),
                "height": num(e.height),
                "budget": num(e.budget),
                "parent_generations": _vec(e.parent_generations),
                "replaced": e.replaced,
            }
            for e in res.ledger
        ],
    }


def report_doc(r: VerificationReport) -> dict:
    cov = r.coverage
    coverage = {"verdict": cov.get("verdict", r.verdict)}
    if cov.get("witness") is not None:
        coverage["witness"] = _vec(cov["witness"])
    if cov.get("member") is not None:
        coverage["member"] = num(cov["member"])
    if cov.get("deepest_cell") is not None:
        coverage["deepest_cell"] = [_vec(v) for v in cov["deepest_cell"]]
    if cov.get("fraction") is not None:
        coverage["fraction"] = num(cov["fraction"])
    return {
        **_head("report"),
        "verdict": r.verdict,
        "claimed_factor": num(r.claimed_factor),
        "depth_used": num(r.depth_used),
        "reason": r.reason,
        "member_checks": [
            {"index": num(c["index"]), "unimodular": c["unimodular"], "inside": c["inside"], "contained": c["contained"]}
            for c in r.member_checks
        ],
        "coverage": coverage,
    }


def table_doc(kind: str, columns, rows) -> dict:
    return {**_head(kind), "columns": list(columns), "rows": [[_cell(x) for x in row] for row in rows]}


def _cell(x):
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return "true" if x else "false"
    return num(x)


def to_document(obj) -> dict:
    if isinstance(obj, CoverCertificate):
        return certificate_doc(obj)
    if isinstance(obj, Cone):
        return cone_doc(obj)
    if isinstance(obj, LatticePolytope):
        return polytope_doc(obj)
    if isinstance(obj, HilbertBasis):
        return hilbert_doc(obj)
    if isinstance(obj, Resolution):
        return resolution_doc(obj)
    if isinstance(obj, VerificationReport):
        return report_doc(obj)
    raise TypeError(f"no document kind for {type(obj).__name__}")


# --- decoders --------------------------------------------------------------------


def _check_head(doc, kinds, field=""):
    kind = _get(doc, "kind", field)
    if kind not in kinds:
        raise DocumentError(f"{field}.kind" if field else "kind", f"expected one of {list(kinds)}, got {kind!r}")
    version = _get(doc, "format_version", field)
    if version != FORMAT_VERSION:
        raise DocumentError(f"{field}.format_version" if field else "format_version",
                            f"unsupported version {version!r}")
    return kind


def parse_cone(doc, field="") -> Cone:
    _check_head(doc, ("cone",), field)
    f = f"{field}.generators" if field else "generators"
    gens = _parse_vecs(_get(doc, "generators", field), f, dim=_dim(doc, field))
    try:
        return Cone(gens)
    except GeometryError as e:
        raise DocumentError(f, str(e)) from None


def parse_polytope(doc, field="") -> LatticePolytope:
    _check_head(doc, ("polytope",), field)
    f = f"{field}.vertices" if field else "vertices"
    verts = _parse_vecs(_get(doc, "vertices", field), f, dim=_dim(doc, field))
    try:
        return LatticePolytope(verts)
    except GeometryError as e:
        raise DocumentError(f, str(e)) from None


def parse_region(doc, field=""):
    kind = _check_head(doc, ("cone", "polytope"), field)
    return parse_cone(doc, field) if kind == "cone" else parse_polytope(doc, field)


def _parse_members(doc, dim, build):
    raw = _get(doc, "members")
    if not isinstance(raw, list):
        raise DocumentError("members", "expected a list")
    out = []
    for i, m in enumerate(raw):
        vs = _parse_vecs(m, f"members[{i}]", dim=dim)
        try:
            out.append(build(vs))
        except (GeometryError, ValueError) as e:
            raise DocumentError(f"members[{i}]", str(e)) from None
    return out


def parse_certificate(doc) -> CoverCertificate:
    kind = _check_head(doc, ("cone-cover", "polytope-cover"))
    claimed = parse_num(_get(doc, "claimed_factor"), "claimed_factor")
    if kind == "cone-cover":
        region = parse_cone(_get(doc, "region"), "region")
        members = _parse_members(doc, region.dim, SimplicialCone)
        for i, m in enumerate(members):
            if len(m.generators) != region.dim:
                raise DocumentError(f"members[{i}]", f"expected {region.dim} generators")
        return CoverCertificate(kind, region, members, claimed)
    region = parse_polytope(_get(doc, "region"), "region")
    multiple = parse_int(_get(doc, "multiple"), "multiple")
    if multiple < 1:
        raise DocumentError("multiple", "must be a positive integer")
    members = _parse_members(doc, region.ambient_dim, LatticeSimplex)
    for i, m in enumerate(members):
        if len(m.vertices) != region.ambient_dim + 1:
            raise DocumentError(f"members[{i}]", f"expected {region.ambient_dim + 1} vertices")
    return CoverCertificate(kind, region, members, claimed, multiple)


def parse_hilbert(doc) -> HilbertBasis:
    _check_head(doc, ("hilbert-basis",))
    cone = parse_cone(_get(doc, "cone"), "cone")
    elements = _parse_vecs(_get(doc, "elements"), "elements", dim=cone.dim)
    return HilbertBasis(tuple(elements), cone)


def parse_resolution(doc) -> Resolution:
    _check_head(doc, ("resolution",))
    cone = parse_cone(_get(doc, "cone"), "cone")
    members = _parse_members(doc, cone.dim, SimplicialCone)
    ledger = []
    raw = _get(doc, "ledger")
    if not isinstance(raw, list):
        raise DocumentError("ledger", "expected a list")
    for i, e in enumerate(raw):
        f = f"ledger[{i}]"
        ledger.append(LedgerEntry(
            _parse_vec(_get(e, "point", f), f + ".point"),
            parse_int(_get(e, "generation", f), f + ".generation"),
            parse_num(_get(e, "height", f), f + ".height"),
            parse_num(_get(e, "budget", f), f + ".budget"),
            _parse_vec(_get(e, "parent_generations", f), f + ".parent_generations"),
            bool(_get(e, "replaced", f)),
        ))
    gens = parse_int(_get(doc, "generations"), "generations")
    return Resolution(SimplicialCone(cone.generators), members, ledger, gens)


def parse_report(doc) -> VerificationReport:
    _check_head(doc, ("report",))
    verdict = _get(doc, "verdict")
    if verdict not in ("pass", "fail", "inconclusive"):
        raise DocumentError("verdict", f"unknown verdict {verdict!r}")
    checks = []
    for i, c in enumerate(_get(doc, "member_checks")):
        f = f"member_checks[{i}]"
        checks.append({
            "index": parse_int(_get(c, "index", f), f + ".index"),
            "unimodular": _get(c, "unimodular", f),
            "inside": _get(c, "inside", f),
            "contained": _get(c, "contained", f),
        })
    raw = _get(doc, "coverage")
    cov = {"verdict": _get(raw, "verdict", "coverage"), "witness": None, "deepest_cell": None}
    if "witness" in raw:
        cov["witness"] = _parse_vec(raw["witness"], "coverage.witness", integral=False)
    if "member" in raw:
        cov["member"] = parse_int(raw["member"], "coverage.member")
    if "deepest_cell" in raw:
        cov["deepest_cell"] = _parse_vecs(raw["deepest_cell"], "coverage.deepest_cell", integral=False)
    if "fraction" in raw:
        cov["fraction"] = parse_num(raw["fraction"], "coverage.fraction")
    return VerificationReport(
        verdict,
        parse_num(_get(doc, "claimed_factor"), "claimed_factor"),
        checks,
        cov,
        parse_int(_get(doc, "depth_used"), "depth_used"),
        _get(doc, "reason"),
    )


def from_document(doc):
    kind = _check_head(doc, KINDS)
    if kind == "cone":
        return parse_cone(doc)
    if kind == "polytope":
        return parse_polytope(doc)
    if kind in ("cone-cover", "polytope-cover"):
        return parse_certificate(doc)
    if kind == "hilbert-basis":
        return parse_hilbert(doc)
    if kind == "resolution":
        return parse_resolution(doc)
    if kind == "report":
        return parse_report(doc)
    return doc  # tables are plain data


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


def loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError("document", f"invalid JSON: {e.msg} at line {e.lineno}") from None

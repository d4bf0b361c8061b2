"""Command-line frontend.

Inputs and outputs are JSON documents (see ``documents``). Exit codes:
0 pass / success, 1 malformed input or refused request, 2 verification
failed, 3 verification inconclusive.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from random import Random

from . import documents as docs
from .cover import cone_cover_bounds, cover_cone, cover_polytope_multiple, minimal_multiple, probe_minimal_factor
from .exactmath import rank
from .geom import Cone, GeometryError, LatticePolytope, SimplicialCone
from .hilbert import hilbert_basis
from .resolve import h_value, resolve_cone
from .subdivide import refine_to_empty, triangulate_cone, triangulate_polytope_empty
from .verify import CertificateError, verify_cover
from .weyl import PreconditionError

EXIT_OK, EXIT_MALFORMED, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2, 3
VERDICT_EXIT = {"pass": EXIT_OK, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}


class UsageError(Exception):
    pass


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise docs.DocumentError("input", f"cannot read {path}: {e.strerror}") from None


def _load(path):
    return docs.loads(_read(path))


def _emit(args, doc):
    text = docs.dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_table(args, kind, columns, rows, extra=None):
    doc = docs.table_doc(kind, columns, rows)
    if extra:
        doc.update(extra)
    if args.format == "tsv":
        lines = ["\t".join(columns)] + ["\t".join(docs._cell(x) for x in row) for row in rows]
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(args, doc)


def _parse_range(s):
    try:
        a, b = s.split("..")
        a, b = Fraction(a), Fraction(b)
    except ValueError:
        raise UsageError(f"--range expects A..B, got {s!r}") from None
    if a > b or a.denominator != 1 or b.denominator != 1:
        raise UsageError(f"--range expects integers A <= B, got {s!r}")
    return list(range(int(a), int(b) + 1))


# --- subcommands ---------------------------------------------------------------


def cmd_hilbert(args):
    cone = docs.parse_cone(_load(args.input))
    _emit(args, docs.hilbert_doc(hilbert_basis(cone)))
    return EXIT_OK


def cmd_triangulate(args):
    region = docs.parse_region(_load(args.input))
    if isinstance(region, Cone):
        if not region.is_full_dimensional:
            raise GeometryError("the cone must be full-dimensional")
        pieces = [m for piece in triangulate_cone(region).members for m in refine_to_empty(piece).members]
        pieces.sort(key=lambda m: m.generators)
    else:
        pieces = triangulate_polytope_empty(region)
    _emit(args, docs.triangulation_doc(region, pieces))
    return EXIT_OK


def cmd_resolve(args):
    cone = docs.parse_cone(_load(args.input))
    if not cone.is_simplicial or not cone.is_full_dimensional:
        raise docs.DocumentError("generators", "resolve needs a full-dimensional simplicial cone")
    _emit(args, docs.resolution_doc(resolve_cone(SimplicialCone(cone.generators))))
    return EXIT_OK


def cmd_cover_cone(args):
    cone = docs.parse_cone(_load(args.input))
    factor = None
    if args.factor_override is not None:
        try:
            factor = Fraction(args.factor_override)
        except ValueError:
            raise UsageError(f"--factor-override expects a rational, got {args.factor_override!r}") from None
    _emit(args, docs.certificate_doc(cover_cone(cone, factor)))
    return EXIT_OK


def cmd_cover_poly(args):
    p = docs.parse_polytope(_load(args.input))
    c = args.multiple if args.multiple is not None else minimal_multiple(p)
    _emit(args, docs.certificate_doc(cover_polytope_multiple(p, c)))
    return EXIT_OK


def cmd_verify(args):
    cert = docs.parse_certificate(_load(args.input))
    report = verify_cover(cert, args.max_depth)
    _emit(args, docs.report_doc(report))
    return VERDICT_EXIT[report.verdict]


def cmd_bounds(args):
    if args.dmax < 2:
        raise UsageError("--dmax must be at least 2")
    rows = []
    for d in range(2, args.dmax + 1):
        b = cone_cover_bounds(d)
        rows.append((d, b.gamma, b.kappa, b.pol_factor, b.pol_bound))
    _emit_table(args, "bounds-table", ("d", "gamma", "kappa", "pol_factor", "pol_bound"), rows)
    return EXIT_OK


def cmd_hseq(args):
    if args.d < 2:
        raise UsageError("--d must be at least 2")
    rows = [(k, h_value(args.d, k)) for k in range(-(args.d - 2), args.kmax + 1)]
    _emit_table(args, "hseq-table", ("k", "h"), rows, {"d": docs.num(args.d)})
    return EXIT_OK


def _probe_one(item):
    region, f, depth = item
    return probe_minimal_factor(region, [f], depth)[0]


def cmd_probe(args):
    region = docs.parse_region(_load(args.input))
    factors = _parse_range(args.range)
    if isinstance(region, Cone) or args.jobs <= 1:
        # a cone cover is built once and shared by every factor
        rows = probe_minimal_factor(region, factors, args.max_depth)
    else:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_probe_one, [(region, f, args.max_depth) for f in factors]))
    _emit_table(args, "probe-table", ("factor", "verdict"), rows)
    return EXIT_OK


def random_cone(d: int, max_entry: int, rng: Random) -> Cone:
    """Simplicial full-dimensional cone with entries uniform in [-M, M]."""
    while True:
        gens = [tuple(rng.randint(-max_entry, max_entry) for _ in range(d)) for _ in range(d)]
        if rank(gens) == d:
            return Cone(gens)


def _ensemble_item(item):
    seed, i, d, m, depth = item
    rng = Random(f"{seed}:{i}")
    cone = random_cone(d, m, rng)
    cert = cover_cone(cone)
    report = verify_cover(cert, depth)
    mu = SimplicialCone(cone.generators).multiplicity
    return (i, mu, len(cert.members), report.verdict)


def cmd_ensemble(args):
    if args.d < 2 or args.count < 0 or args.max_entry < 1:
        raise UsageError("need --d >= 2, --count >= 0, --max-entry >= 1")
    items = [(args.seed, i, args.d, args.max_entry, args.max_depth) for i in range(args.count)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_ensemble_item, items))
    else:
        rows = [_ensemble_item(it) for it in items]
    summary = {v: sum(1 for r in rows if r[3] == v) for v in ("pass", "fail", "inconclusive")}
    extra = {"summary": {k: docs.num(v) for k, v in summary.items()}}
    _emit_table(args, "ensemble-summary", ("item", "multiplicity", "members", "verdict"), rows, extra)
    if summary["fail"]:
        return EXIT_FAIL
    return EXIT_INCONCLUSIVE if summary["inconclusive"] else EXIT_OK


# --- entry point ---------------------------------------------------------------


def _common(defaults: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global flags with suppressed defaults so that
    # a value given before the subcommand is not overwritten
    def d(x):
        return x if defaults else argparse.SUPPRESS

    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--jobs", type=int, default=d(1), help="worker processes for batch commands")
    p.add_argument("--seed", type=int, default=d(0), help="seed for all randomness")
    p.add_argument("--format", choices=("json", "tsv"), default=d("json"), help="table output format")
    p.add_argument("--out", default=d(None), help="write the output document here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common(False)

    parser = argparse.ArgumentParser(prog="unicover", description="Unimodular covers of lattice cones and polytopes.",
                                     parents=[_common(True)])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, input_=True):
        p = sub.add_parser(name, help=help_, parents=[common])
        if input_:
            p.add_argument("input", help="input JSON document, or - for stdin")
        p.set_defaults(func=func)
        return p

    add("hilbert", cmd_hilbert, "Hilbert basis of a cone")
    add("triangulate", cmd_triangulate, "triangulation into empty simplicial pieces")
    add("resolve", cmd_resolve, "unimodular resolution of a simplicial cone with height ledger")
    p = add("cover-cone", cmd_cover_cone, "unimodular cover certificate for a cone")
    p.add_argument("--factor-override", help="claim this containment factor instead of the default")
    p = add("cover-poly", cmd_cover_poly, "unimodular cover certificate for a polytope multiple")
    p.add_argument("--multiple", type=int, help="the multiple c (default: least admissible)")
    p = add("verify", cmd_verify, "verify a cover certificate")
    p.add_argument("--max-depth", type=int, default=40)
    p = add("bounds", cmd_bounds, "table of gamma, kappa and polytope bounds", input_=False)
    p.add_argument("--dmax", type=int, required=True)
    p = add("hseq", cmd_hseq, "table of the height sequence h_k", input_=False)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p = add("probe", cmd_probe, "verifier verdicts over a range of factors or multiples")
    p.add_argument("--range", required=True, help="A..B")
    p.add_argument("--max-depth", type=int, default=40)
    p = add("ensemble", cmd_ensemble, "cover and verify a batch of random cones", input_=False)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--max-entry", type=int, required=True)
    p.add_argument("--max-depth", type=int, default=40)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_MALFORMED if e.code else EXIT_OK
    try:
        return args.func(args)
    except docs.DocumentError as e:
        print(f"malformed input: {e}", file=sys.stderr)
    except (CertificateError, GeometryError, UsageError, PreconditionError, ValueError) as e:
        msg = str(e)
        if isinstance(e, PreconditionError) and e.minimal_scale is not None:
            msg += f" (minimal: {e.minimal_scale})"
        print(f"error: {msg}", file=sys.stderr)
    return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())

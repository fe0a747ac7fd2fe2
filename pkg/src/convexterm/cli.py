"""Command-line front end.

Every subcommand prints one JSON report on stdout (``simulate`` prints JSON
lines) and a short human summary on stderr. Exit status: 0 success,
1 property violation, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .algebra import Semilattice, check_axioms, semilattice_algebra
from .automata import parse_pa, run_word
from .dist import Dist, parse_dist
from .extensions import (
    STAR,
    BlackHole,
    CssAlgebra,
    build_extension,
    element_to_json,
    eligible_case4,
    is_extremal_in_KD_simplex,
    probe_extension,
    simplex_css,
    spec_from_json,
    spec_to_json,
)
from .geometry.decompose import decompose_2d
from .geometry.flagged import FlaggedPolygon, vih_2d
from .geometry.polytope import minkowski_combine, polytope_from_json, polytope_to_json
from .geometry.simplex import homothety_normalize, simplex
from .rational import as_rational, format_rational, reduced_pq_pairs, resolve_grid
from .sampling import body_samples, dist_samples

OK, VIOLATION, INPUT_ERROR = 0, 1, 2
# associativity is cubic in the sample count, so axiom checks default smaller
AXIOM_SAMPLES, PROBE_SAMPLES = 8, 20


class InputError(Exception):
    pass


def _load(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return format_rational(value)
    if value is STAR or isinstance(value, Dist) or hasattr(value, "vertices"):
        return element_to_json(value)
    return value


def _common(args, report: dict) -> dict:
    report["pgrid"] = [format_rational(p) for p in args.grid]
    report.setdefault("samples", [])
    return report


def _pq_pairs(args):
    return None if args.full_pq else reduced_pq_pairs(args.grid)


def _samples_for(base, count: int, seed: int):
    if isinstance(base, CssAlgebra):
        return body_samples(base.domain.dim, count, seed)
    return dist_samples(base.labels, count, seed)


def cmd_check_axioms(args):
    if args.semilattice:
        alg = semilattice_algebra(Semilattice.from_json(_load(args.semilattice)))
        samples = list(alg.elements)
    elif args.ext:
        base, spec = spec_from_json(_load(args.ext))
        alg = build_extension(base, spec, validate=not args.force)
        samples = _samples_for(base, args.samples, args.seed) + [STAR]
    elif args.css:
        alg = simplex_css([str(i + 1) for i in range(args.css)])
        samples = body_samples(args.css, args.samples, args.seed)
    else:
        raise InputError("give one of --semilattice, --ext or --css")
    rep = check_axioms(alg, args.grid, samples, pq_pairs=_pq_pairs(args))
    report = {"pass": rep.passed, "checks": rep.checks, "counterexample": _jsonable(rep.counterexample)}
    report["samples"] = _jsonable(samples)
    summary = "axioms hold on the grid" if rep.passed else f"{rep.counterexample['law']} fails"
    return (OK if rep.passed else VIOLATION), report, summary


def cmd_build_extension(args):
    base, spec = spec_from_json(_load(args.ext))
    try:
        ext = build_extension(base, spec, validate=not args.force)
    except ValueError as exc:
        return VIOLATION, {"built": False, "reason": str(exc), "spec": spec_to_json(spec)}, "rejected"
    samples = _samples_for(base, args.samples, args.seed)
    half = Fraction(1, 2)
    table = [
        {"x": element_to_json(x), "result": element_to_json(ext.op(half, x, STAR))}
        for x in samples
    ]
    rep = check_axioms(ext, args.grid, samples + [STAR], pq_pairs=_pq_pairs(args))
    report = {
        "built": True,
        "spec": spec_to_json(spec),
        "half_with_star": table,
        "axioms": {"pass": rep.passed, "counterexample": _jsonable(rep.counterexample)},
        "samples": _jsonable(samples),
    }
    return (OK if rep.passed else VIOLATION), report, "built" if rep.passed else "built, but axioms fail"


def cmd_probe_extension(args):
    base, spec = spec_from_json(_load(args.ext))
    if isinstance(base, CssAlgebra):
        raise InputError("probing classifies extensions of free algebras only")
    ext = build_extension(base, spec)
    samples = dist_samples(base.labels, args.samples, args.seed)
    try:
        rep = probe_extension(ext, samples, args.grid)
    except ValueError as exc:
        return VIOLATION, {"error": str(exc), "samples": _jsonable(samples)}, "not classifiable"
    report = rep.to_json()
    report["samples"] = _jsonable(samples)
    return OK, report, f"case {rep.case}"


def _body_and_n(args):
    body = polytope_from_json(_load(args.body))
    return body, args.simplex


def cmd_eligible_case4(args):
    body, n = _body_and_n(args)
    domain = polytope_from_json(_load(args.domain)) if args.domain else simplex(n)
    rep = eligible_case4(body, domain)
    return OK, dict(rep), "eligible" if rep["eligible"] else "not eligible"


def cmd_extremal_kd(args):
    body, n = _body_and_n(args)
    ok = is_extremal_in_KD_simplex(body, n)
    return OK, {"extremal": ok}, "extremal" if ok else "not extremal"


def cmd_vih(args):
    poly = FlaggedPolygon.from_json(_load(args.polygon))
    out = vih_2d(poly)
    return OK, {"vih": out.to_json(), "changed": out != poly}, "visibility hull computed"


def cmd_minkowski(args):
    a = polytope_from_json(_load(args.a))
    b = polytope_from_json(_load(args.b))
    p = as_rational(args.p)
    return OK, {"p": format_rational(p), "result": polytope_to_json(minkowski_combine(p, a, b))}, "combined"


def cmd_decompose(args):
    poly = polytope_from_json(_load(args.polytope))
    found = decompose_2d(poly)
    if found is None:
        return OK, {"decomposable": False}, "indecomposable"
    b, c = found
    return OK, {"decomposable": True, "B": polytope_to_json(b), "C": polytope_to_json(c)}, "decomposed"


def cmd_normalize(args):
    poly = polytope_from_json(_load(args.polytope))
    return OK, {"normalized": polytope_to_json(homothety_normalize(poly))}, "normalised"


def cmd_simulate(args):
    pa = parse_pa(_load(args.pa))
    if args.ext in ("blackhole", "black_hole"):
        ext = BlackHole()
    else:
        doc = _load(args.ext)
        doc.setdefault("labels", list(pa.states))
        _, ext = spec_from_json(doc)
    init = args.init
    xi = parse_dist(init) if init.startswith("dirac:") else parse_dist(json.loads(init))
    word = [w for w in args.word.split(",") if w] if args.word else []
    traj = run_word(pa, ext, xi, word)
    lines = traj.json_lines(pa.states)
    head = json.loads(lines[0])
    head["pgrid"] = [format_rational(p) for p in args.grid]
    lines[0] = json.dumps(head, sort_keys=True)
    return OK, lines, f"{len(word)} step(s)"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="convexterm", description="Convex algebras and their one-point extensions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pgrid", help="comma-separated coefficients in (0,1), overrides CONVEXTERM_PGRID")
    common.add_argument(
        "--samples", type=int, default=None,
        help=f"sample family size (default {AXIOM_SAMPLES} for axiom checks, {PROBE_SAMPLES} otherwise)",
    )
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-axioms", parents=[common], help="certify the convex-algebra laws")
    p.add_argument("--semilattice", help="semilattice JSON")
    p.add_argument("--ext", help="extension spec JSON")
    p.add_argument("--css", type=int, help="convex powerset of the simplex on N labels")
    p.add_argument("--force", action="store_true", help="skip extension preconditions")
    p.add_argument("--full-pq", action="store_true", help="check associativity on every grid pair (slow)")
    p.set_defaults(func=cmd_check_axioms)

    p = sub.add_parser("build-extension", parents=[common], help="build and certify an extension")
    p.add_argument("--ext", required=True)
    p.add_argument("--force", action="store_true")
    p.add_argument("--full-pq", action="store_true", help="check associativity on every grid pair (slow)")
    p.set_defaults(func=cmd_build_extension)

    p = sub.add_parser("probe-extension", parents=[common], help="classify an extension of a free algebra")
    p.add_argument("--ext", required=True)
    p.set_defaults(func=cmd_probe_extension)

    for name, func in (("eligible-case4", cmd_eligible_case4), ("extremal-kd", cmd_extremal_kd)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--simplex", type=int, default=3, help="number of labels")
        p.add_argument("--body", required=True, help="polytope JSON")
        if name == "eligible-case4":
            p.add_argument("--domain", help="carrier polytope JSON (default: the simplex)")
        p.set_defaults(func=func)

    p = sub.add_parser("vih", parents=[common], help="visibility hull of a flagged polygon")
    p.add_argument("--polygon", required=True)
    p.set_defaults(func=cmd_vih)

    p = sub.add_parser("minkowski", parents=[common], help="p A + (1-p) B")
    p.add_argument("--p", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_minkowski)

    p = sub.add_parser("decompose", parents=[common], help="Minkowski decomposition of a polygon")
    p.add_argument("--polytope", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("normalize", parents=[common], help="homothety normal form")
    p.add_argument("--polytope", required=True)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("simulate", parents=[common], help="run a word on a probabilistic automaton")
    p.add_argument("--pa", required=True)
    p.add_argument("--ext", default="blackhole", help="'blackhole' or an extension spec JSON")
    p.add_argument("--init", required=True, help="'dirac:STATE' or a JSON distribution")
    p.add_argument("--word", default="", help="comma-separated actions")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.grid = resolve_grid(args.pgrid, args.seed)
        if args.samples is None:
            axiom_cmd = args.command in ("check-axioms", "build-extension")
            args.samples = AXIOM_SAMPLES if axiom_cmd else PROBE_SAMPLES
        if args.samples < 1:
            raise InputError("--samples must be positive")
        code, report, summary = args.func(args)
    except (InputError, ValueError, TypeError, KeyError) as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True))
        print(f"convexterm: {exc}", file=sys.stderr)
        return INPUT_ERROR
    if isinstance(report, list):
        for line in report:
            print(line)
    else:
        print(json.dumps(_common(args, report), sort_keys=True))
    print(f"convexterm {args.command}: {summary}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Commands: validate | fiber | nabla | delta | betti | minimalize | harvest
| scan | verify.  Exit codes: 0 success, 1 verification failure, 2 invalid
input.  With --format json every command emits one JSON document carrying
a "config" header; identical invocations with a shared --cache directory
produce byte-identical output.
"""
from __future__ import annotations

import argparse
import sys

from . import serialize
from .config import Config
from .orders import mono_str
from .resolution import ResolutionEngine
from .semigroup import Semigroup, SemigroupError


def _parse_degree(text: str, dim: int):
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise SemigroupError(f"bad degree {text!r}: {exc}") from exc
    if len(parts) != dim:
        raise SemigroupError(f"degree {text!r} should have {dim} coordinates")
    return parts


def _parse_exponents(text: str, r: int):
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise SemigroupError(f"bad exponent vector {text!r}: {exc}") from exc
    if len(parts) != r or any(e < 0 for e in parts):
        raise SemigroupError(
            f"exponent vector {text!r} should have {r} nonnegative entries"
        )
    return parts


def _field_value(text: str):
    if text == "rational":
        return "rational"
    cleaned = text.removeprefix("prime:")
    try:
        return int(cleaned)
    except ValueError as exc:
        raise SemigroupError(f"bad field {text!r}") from exc


def _add_global_options(parser, suppress: bool):
    # registered on the main parser and again on every subcommand, so the
    # flags are accepted on either side of the command word
    default = (lambda v: argparse.SUPPRESS if suppress else v)
    parser.add_argument("--order", default=default("degrevlex"),
                        choices=["degrevlex", "lex"])
    parser.add_argument("--field", default=default("rational"),
                        help="'rational' (default) or a prime, e.g. 32003")
    parser.add_argument("--cache", default=default(None),
                        help="directory for the basis cache")
    parser.add_argument("--format", default=default("text"),
                        choices=["text", "json"])
    parser.add_argument("--output", default=default(None),
                        help="also write the result here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricsyz",
        description="Exact minimal generators and syzygies of semigroup algebras",
    )
    _add_global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_global_options(p, suppress=True)
        p.add_argument("semigroup", help="semigroup JSON file")
        return p

    add("validate", "check combinatorial finiteness and print the grading")

    p = add("fiber", "list the monomials of one degree")
    p.add_argument("-m", "--degree", required=True)

    p = add("nabla", "export the fiber complex of one degree")
    p.add_argument("-m", "--degree", required=True)

    p = add("delta", "export the index-set comparison complex of one degree")
    p.add_argument("-m", "--degree", required=True)

    p = add("betti", "multigraded Betti ranks at one degree")
    p.add_argument("-m", "--degree", required=True)
    p.add_argument("--jmax", type=int, default=None)
    p.add_argument("--delta-crosscheck", action="store_true")

    p = add("minimalize", "decompose a homogeneous binomial over minimal generators")
    p.add_argument("--lead", required=True, help="comma separated exponents")
    p.add_argument("--trail", required=True, help="comma separated exponents")

    p = add("harvest", "extract the resolution fragment one degree teaches")
    p.add_argument("-m", "--degree", required=True)
    p.add_argument("--max-level", type=int, default=1)
    p.add_argument("--face-cap", type=int, default=None,
                   help="walk at most this many faces per dimension")

    p = add("scan", "Betti table over all degrees up to a weight bound")
    p.add_argument("--w-bound", required=True)
    p.add_argument("--jmax", type=int, default=None)
    p.add_argument("--delta-crosscheck", action="store_true")

    p = add("verify", "re-check a fragment JSON produced by harvest")
    p.add_argument("fragment", help="fragment JSON file")
    return parser


def _engine(args) -> ResolutionEngine:
    sg = Semigroup.from_file(args.semigroup)
    config = Config(
        term_order=args.order,
        field=_field_value(args.field),
        cache_dir=args.cache,
        output_format=args.format,
    )
    return ResolutionEngine(sg, config)


def _cmd_validate(args):
    engine = _engine(args)
    sg = engine.semigroup
    w = tuple(str(x) for x in sg.grading)
    payload = {
        "config": engine.config.describe(),
        "kind": "validate",
        "combinatorially_finite": True,
        "grading": [str(x) for x in sg.grading],
    }
    text = f"combinatorially finite, w = ({', '.join(w)})"
    return 0, text, payload


def _cmd_fiber(args):
    engine = _engine(args)
    m = _parse_degree(args.degree, engine.semigroup.dim)
    fiber = engine.semigroup.fiber(m, engine.order)
    payload = {
        "config": engine.config.describe(),
        "kind": "fiber",
        "degree": list(m),
        "monomials": [list(v) for v in fiber],
    }
    lines = [f"fiber of {m}: {len(fiber)} monomial(s)"]
    lines += [f"  {mono_str(v)}" for v in fiber]
    return 0, "\n".join(lines), payload


def _cmd_nabla(args):
    engine = _engine(args)
    m = _parse_degree(args.degree, engine.semigroup.dim)
    cx = engine.nabla(m)
    payload = {"config": engine.config.describe(), "kind": "nabla", **cx.to_dict()}
    lines = [
        f"fiber complex at {m}: {len(cx.vertices)} vertices, "
        f"{len(cx.components()) if cx.vertices else 0} component(s)"
    ]
    if cx.is_void:
        lines.append("  (empty complex: degree not in the semigroup)")
    for f in cx.facets():
        lines.append(f"  facet {list(f)}")
    return 0, "\n".join(lines), payload


def _cmd_delta(args):
    engine = _engine(args)
    m = _parse_degree(args.degree, engine.semigroup.dim)
    cx = engine.delta(m)
    payload = {"config": engine.config.describe(), "kind": "delta", **cx.to_dict()}
    lines = [f"comparison complex at {m}: {len(cx.faces)} face(s) including the empty one"]
    for f in cx.facets():
        lines.append(f"  facet {list(f)}")
    return 0, "\n".join(lines), payload


def _cmd_betti(args):
    engine = _engine(args)
    m = _parse_degree(args.degree, engine.semigroup.dim)
    jmax = args.jmax if args.jmax is not None else engine.semigroup.num_generators - 1
    ranks = {j: engine.multigraded_betti(m, j) for j in range(jmax + 1)}
    payload = {
        "config": engine.config.describe(),
        "kind": "betti",
        "degree": list(m),
        "ranks": {str(j): v for j, v in ranks.items()},
    }
    lines = [f"degree {m}"]
    lines += [f"  j={j}: {v}" for j, v in ranks.items()]
    if args.delta_crosscheck:
        delta_ranks = {j: engine.betti_delta(m, j) for j in range(jmax + 1)}
        agree = delta_ranks == ranks
        payload["delta_ranks"] = {str(j): v for j, v in delta_ranks.items()}
        payload["crosscheck_ok"] = agree
        lines.append(f"  delta crosscheck: {'OK' if agree else 'MISMATCH'}")
        if not agree:
            return 1, "\n".join(lines), payload
    return 0, "\n".join(lines), payload


def _cmd_minimalize(args):
    engine = _engine(args)
    r = engine.semigroup.num_generators
    lead = _parse_exponents(args.lead, r)
    trail = _parse_exponents(args.trail, r)
    result = engine.minimalize_binomial(lead, trail)
    payload = serialize.decomposition_to_json(
        result, engine, {"lead": list(lead), "trail": list(trail)}
    )
    text = serialize.decomposition_text(result, engine)
    return 0, text, payload


def _cmd_harvest(args):
    engine = _engine(args)
    m = _parse_degree(args.degree, engine.semigroup.dim)
    fragment = engine.harvest(m, args.max_level, face_cap=args.face_cap)
    payload = serialize.fragment_to_json(fragment, engine)
    report = fragment.report
    lines = [f"harvest at {m}, levels 0..{args.max_level}"]
    for level, count in sorted(fragment.ranks().items()):
        lines.append(f"  level {level}: {count} generator(s)")
    lines.append(f"verification: {'passed' if report['passed'] else 'FAILED'}")
    lines += [f"  violation: {v}" for v in report["violations"]]
    return (0 if report["passed"] else 1), "\n".join(lines), payload


def _cmd_scan(args):
    engine = _engine(args)
    sg = engine.semigroup
    jmax = args.jmax if args.jmax is not None else sg.num_generators - 1
    obstruction_dim = sg.num_generators - sg.matrix_rank()
    rows = []
    disagreements = []
    for m in sg.degrees_up_to(args.w_bound):
        ranks = [engine.multigraded_betti(m, j) for j in range(jmax + 1)]
        cm_rank = (engine.multigraded_betti(m, obstruction_dim)
                   if obstruction_dim > jmax else ranks[obstruction_dim])
        rows.append({
            "degree": list(m),
            "ranks": ranks,
            "cm_obstruction": bool(cm_rank),
        })
        if args.delta_crosscheck:
            delta = [engine.betti_delta(m, j) for j in range(jmax + 1)]
            if delta != ranks:
                disagreements.append({"degree": list(m), "nabla": ranks, "delta": delta})
    payload = {
        "config": engine.config.describe(),
        "kind": "scan",
        "w_bound": str(args.w_bound),
        "jmax": jmax,
        "rows": rows,
        "obstruction_dim": obstruction_dim,
    }
    lines = [f"scan up to weight {args.w_bound}, j <= {jmax}"]
    for row in rows:
        flag = "  CM-obstruction!" if row["cm_obstruction"] else ""
        lines.append(f"  {tuple(row['degree'])}: {row['ranks']}{flag}")
    if args.delta_crosscheck:
        payload["crosscheck_disagreements"] = disagreements
        lines.append(f"delta crosscheck disagreements: {len(disagreements)}")
        if disagreements:
            return 1, "\n".join(lines), payload
    return 0, "\n".join(lines), payload


def _cmd_verify(args):
    import json as json_mod

    engine = _engine(args)
    try:
        with open(args.fragment, "r", encoding="utf-8") as fh:
            data = json_mod.load(fh)
    except (OSError, json_mod.JSONDecodeError) as exc:
        raise SemigroupError(f"cannot read fragment: {exc}") from exc
    report = serialize.verify_fragment_json(data, engine)
    payload = {
        "config": engine.config.describe(),
        "kind": "verify",
        "report": report,
    }
    lines = [f"verification: {'passed' if report['passed'] else 'FAILED'}"]
    lines += [f"  violation: {v}" for v in report["violations"]]
    return (0 if report["passed"] else 1), "\n".join(lines), payload


_HANDLERS = {
    "validate": _cmd_validate,
    "fiber": _cmd_fiber,
    "nabla": _cmd_nabla,
    "delta": _cmd_delta,
    "betti": _cmd_betti,
    "minimalize": _cmd_minimalize,
    "harvest": _cmd_harvest,
    "scan": _cmd_scan,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text, payload = _HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        # SemigroupError and ResolutionError are ValueErrors too
        sys.stderr.write(f"error: {exc}\n")
        return 2
    output = serialize.dumps(payload) if args.format == "json" else text + "\n"
    sys.stdout.write(output)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(output)
    return code


def entry_point():
    raise SystemExit(main())


if __name__ == "__main__":
    entry_point()

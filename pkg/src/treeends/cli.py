"""Command-line interface.

Every subcommand reads a germ file (``-`` means stdin) except ``proseq``,
which takes a sequence literal like ``prefix:3,0;cycle:2,1``.  Results go
to stdout, diagnostics to stderr, and output for a fixed input is byte
identical from run to run.  Exit codes: 0 success, 1 domain failure
(parse error, invalid germ, failed oracle), 2 usage, 3 size ceiling.

DOT conventions: nodes are emitted in id order as ``n<id>``, labeled with
their germ vertex; positive nodes are colored black, everything else gray.
Edges run parent to child carrying the multiplication label as the edge
label, drawn solid into positive nodes and dashed into null ones.  In
clone trees the same rules apply, with clone copies gray and null copies
reached by dashed edges.
"""

from __future__ import annotations

import argparse
import json
import sys

from .classify import cross_checks, full_report, render_text, to_json_dict
from .coset import DASHED, lambda_of_coset, lambda_plus
from .errors import SizeCeilingError, TreeEndsError
from .germ import GermGraph, parse_germ, render_germ, require_valid, validate_germ
from .proseq import classify_mult, format_sequence, inverse_limit_mult, parse_sequence
from .reduce import elementary_reduction, germ_power
from .unfold import DEFAULT_CEILING, TruncatedTree, null_forest, positive_part, truncate


def _at_least(minimum: int):
    def convert(text: str) -> int:
        value = int(text)
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}")
        return value

    return convert


def _load_germ(path: str, validate: bool = True) -> GermGraph:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    g = parse_germ(text)
    if validate:
        require_valid(g)
    return g


def _reject_format(fmt: str, command: str) -> int:
    print(f"error: format {fmt} is not available for {command}", file=sys.stderr)
    return 2


def render_tree_text(t: TruncatedTree) -> str:
    lines = [f"depth {t.depth}"]
    for node in t.nodes:
        if node.parent is None:
            lines.append(f"node {node.id} tier 0 root {node.germ_vertex}")
        else:
            kind = "positive" if node.positive else "null"
            lines.append(
                f"node {node.id} tier {node.tier} parent {node.parent} "
                f"vertex {node.germ_vertex} label {node.label} {kind}"
            )
    return "\n".join(lines) + "\n"


def tree_json_dict(t: TruncatedTree) -> dict:
    return {
        "schema": 1,
        "depth": t.depth,
        "nodes": [
            {
                "id": n.id,
                "tier": n.tier,
                "parent": n.parent,
                "vertex": n.germ_vertex,
                "label": n.label,
                "positive": n.positive,
            }
            for n in t.nodes
        ],
    }


def emit_dot(t: TruncatedTree, name: str = "unfold") -> str:
    lines = [f"digraph {name} {{"]
    for node in t.nodes:
        color = "black" if node.positive else "gray"
        lines.append(f'  n{node.id} [label="{node.germ_vertex}", color={color}];')
    for node in t.nodes:
        if node.parent is not None:
            style = "solid" if node.positive else "dashed"
            lines.append(
                f'  n{node.parent} -> n{node.id} '
                f'[label="{node.label}", style={style}];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot_colored(ct, name: str = "clone_tree") -> str:
    lines = [f"digraph {name} {{"]
    for node in ct.nodes:
        color = "gray" if node.color in ("gray", "dashed") else "black"
        lines.append(f'  n{node.id} [label="{node.germ_vertex}", color={color}];')
    for node in ct.nodes:
        if node.parent is not None:
            style = "dashed" if node.color == DASHED else "solid"
            lines.append(
                f'  n{node.parent} -> n{node.id} '
                f'[label="{node.label}", style={style}];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def colored_tree_text(ct) -> str:
    lines = [f"nodes {len(ct)}"]
    for n in ct.nodes:
        parent = "-" if n.parent is None else str(n.parent)
        color = n.color if n.color is not None else "root"
        label = "-" if n.label is None else str(n.label)
        residue = "-" if n.residue is None else str(n.residue)
        kind = "original" if n.original else "clone"
        lines.append(
            f"node {n.id} parent {parent} color {color} vertex {n.germ_vertex} "
            f"label {label} residue {residue} {kind}"
        )
    return "\n".join(lines) + "\n"


def colored_tree_json_dict(ct) -> dict:
    return {
        "schema": 1,
        "nodes": [
            {
                "id": n.id,
                "parent": n.parent,
                "color": n.color,
                "original": n.original,
                "vertex": n.germ_vertex,
                "label": n.label,
                "residue": n.residue,
            }
            for n in ct.nodes
        ],
    }


def germ_json_dict(g: GermGraph) -> dict:
    return {
        "schema": 1,
        "root": g.root,
        "vertices": list(g.vertices),
        "edges": [
            {"src": e.src, "dst": e.dst, "label": e.label} for e in g.edges
        ],
    }


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


def _cmd_validate(args) -> int:
    g = _load_germ(args.germ, validate=False)
    report = validate_germ(g)
    if args.format == "dot":
        return _reject_format("dot", "validate")
    if args.format == "json":
        _print_json(
            {
                "schema": 1,
                "ok": report.ok,
                "violations": [
                    {"rule": v.rule, "subject": v.subject, "message": v.message}
                    for v in report.violations
                ],
            }
        )
    else:
        if report.ok:
            print("ok")
        for v in report.violations:
            print(f"violation {v.rule} {v.subject}: {v.message}")
    return 0 if report.ok else 1


def _cmd_classify(args) -> int:
    g = _load_germ(args.germ)
    if args.format == "dot":
        return _reject_format("dot", "classify")
    report = full_report(g, depth=args.depth, height=args.height, ceiling=args.ceiling)
    if args.format == "json":
        _print_json(to_json_dict(report))
    else:
        sys.stdout.write(render_text(report))
    return 0


def _cmd_unfold(args) -> int:
    g = _load_germ(args.germ)
    t = truncate(g, args.depth, ceiling=args.ceiling)
    if args.format == "dot":
        sys.stdout.write(emit_dot(t))
    elif args.format == "json":
        _print_json(tree_json_dict(t))
    else:
        sys.stdout.write(render_tree_text(t))
    return 0


def _cmd_lambda(args) -> int:
    g = _load_germ(args.germ)
    t = truncate(g, args.depth, ceiling=args.ceiling)
    coset = lambda_plus(positive_part(t), ceiling=args.ceiling)
    ct = lambda_of_coset(coset, null_forest(t))
    if args.format == "dot":
        sys.stdout.write(emit_dot_colored(ct))
    elif args.format == "json":
        _print_json(colored_tree_json_dict(ct))
    else:
        sys.stdout.write(colored_tree_text(ct))
    return 0


def _cmd_reduce(args) -> int:
    g = _load_germ(args.germ)
    if args.power is not None:
        powered = germ_power(g, args.power, ceiling=args.ceiling)
        if args.format == "dot":
            sys.stdout.write(emit_dot(truncate(powered, args.depth, ceiling=args.ceiling)))
        elif args.format == "json":
            _print_json(germ_json_dict(powered))
        else:
            sys.stdout.write(render_germ(powered))
        return 0
    i, j = args.interval
    t = truncate(g, args.depth, ceiling=args.ceiling)
    reduced = elementary_reduction(t, i, j)
    if args.format == "dot":
        sys.stdout.write(emit_dot(reduced, name="reduced"))
    elif args.format == "json":
        _print_json(tree_json_dict(reduced))
    else:
        sys.stdout.write(render_tree_text(reduced))
    return 0


def _cmd_proseq(args) -> int:
    if args.format == "dot":
        return _reject_format("dot", "proseq")
    seq = parse_sequence(args.sequence)
    flags = classify_mult(seq)
    limit = inverse_limit_mult(seq)
    if args.format == "json":
        payload = {"schema": 1, "sequence": format_sequence(seq)}
        payload.update(flags.as_dict())
        payload["inverse_limit"] = limit.value
        _print_json(payload)
    else:
        print(f"sequence: {format_sequence(seq)}")
        for key, value in flags.as_dict().items():
            print(f"{key}: {str(value).lower()}")
        print(f"inverse_limit: {limit.value}")
    return 0


def _cmd_oracle(args) -> int:
    g = _load_germ(args.germ)
    if args.format == "dot":
        return _reject_format("dot", "oracle")
    checks = cross_checks(g, depth=args.depth, height=args.height, ceiling=args.ceiling)
    counts = {"pass": 0, "fail": 0, "skip": 0}
    for c in checks:
        counts[c.status] += 1
    if args.format == "json":
        _print_json(
            {
                "schema": 1,
                "checks": [
                    {"name": c.name, "status": c.status, "detail": c.detail}
                    for c in checks
                ],
                "summary": counts,
            }
        )
    else:
        for c in checks:
            print(f"check {c.name}: {c.status} ({c.detail})")
        print(
            f"oracle: {counts['pass']} pass, {counts['fail']} fail, "
            f"{counts['skip']} skip"
        )
    return 0 if counts["fail"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treeends",
        description="Classify end structure of edge-labeled germ graphs.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--depth", type=_at_least(1), default=4, help="truncation depth (default 4)"
    )
    common.add_argument(
        "--height", type=_at_least(1), default=4, help="cover height bound (default 4)"
    )
    common.add_argument(
        "--ceiling",
        type=_at_least(1000),
        default=DEFAULT_CEILING,
        help="hard cap on constructed cells or vertices",
    )
    common.add_argument(
        "--format", choices=("text", "json", "dot"), default="text"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a germ file")
    p.add_argument("germ", help="germ file path, or - for stdin")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("classify", parents=[common], help="full end-structure report")
    p.add_argument("germ", help="germ file path, or - for stdin")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("unfold", parents=[common], help="truncated unfolding tree")
    p.add_argument("germ", help="germ file path, or - for stdin")
    p.set_defaults(func=_cmd_unfold)

    p = sub.add_parser("lambda", parents=[common], help="truncated clone tree")
    p.add_argument("germ", help="germ file path, or - for stdin")
    p.set_defaults(func=_cmd_lambda)

    p = sub.add_parser("reduce", parents=[common], help="power or interval reduction")
    p.add_argument("germ", help="germ file path, or - for stdin")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--power", type=_at_least(1), metavar="M")
    group.add_argument("--interval", nargs=2, type=int, metavar=("I", "J"))
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("proseq", parents=[common], help="classify a sequence literal")
    p.add_argument("sequence", help='for example "prefix:3,0;cycle:2,1"')
    p.set_defaults(func=_cmd_proseq)

    p = sub.add_parser("oracle", parents=[common], help="run the cross-check battery")
    p.add_argument("germ", help="germ file path, or - for stdin")
    p.set_defaults(func=_cmd_oracle)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SizeCeilingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except TreeEndsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

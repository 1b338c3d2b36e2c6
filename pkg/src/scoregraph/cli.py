"""Batch front door: everything runs headless for CI and scripted use.

Subcommands wrap the library one to one. Errors leave as machine-readable
JSON on stderr with a nonzero exit code.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .catalogs import (
    Catalog,
    CatalogError,
    builtin_catalog,
    load_catalog,
)
from .encoding import (
    Answer,
    Session,
    SessionOptions,
    WeakOrderOracle,
    drive_session,
    replay as replay_log,
    start_session,
)
from .graph import ConstraintGraph, GraphError, SchemaError
from .metrics import ordering_distance, pairwise_inconsistency
from .prioritization import format_ranked_sets, prioritize, ranked_sets_json
from .scoring import (
    ScoringConfig,
    ScoringError,
    feasible_distances,
    generate_scores,
    peg_and_regenerate,
)
from .unification import UnificationInputError, unify_with_degrees


class CliError(Exception):
    def __init__(self, message: str, code: str = "error") -> None:
        super().__init__(message)
        self.code = code


def _load_graph(path: str) -> ConstraintGraph:
    try:
        return ConstraintGraph.load(path)
    except FileNotFoundError:
        raise CliError(f"graph file not found: {path}", code="file-not-found")
    except SchemaError as exc:
        raise CliError(str(exc), code="schema-mismatch")
    except GraphError as exc:
        raise CliError(str(exc), code="invalid-graph")


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=1) + "\n"
    if path:
        Path(path).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)


def _resolve_catalog(spec: str) -> Catalog:
    if Path(spec).exists():
        return load_catalog(spec)
    try:
        return builtin_catalog(spec)
    except CatalogError:
        raise CliError(
            f"catalog {spec!r} is neither a file nor a builtin name", code="file-not-found"
        )


# -- encode ---------------------------------------------------------------------

_ANSWER_KEYS = {
    "1": Answer.MUCH_LESS,
    "2": Answer.LESS,
    "3": Answer.EQUAL,
    "4": Answer.GREATER,
    "5": Answer.MUCH_GREATER,
}


def _interactive_oracle(session: Session, catalog: Catalog | None):
    def render(element: str) -> str:
        if catalog is not None and element in catalog.elements:
            info = catalog.render_element(element)
            title = info.get("title")
            return f"{info['id']}" + (f"  {title}" if title else "")
        return element

    class _Terminal:
        def compare(self, new_element: str, probe: str) -> Answer:
            allowed = session.options.allowed_answers()
            print()
            print(f"  new element : {render(new_element)}")
            print(f"  compared to : {render(probe)}")
            keys = [k for k, a in _ANSWER_KEYS.items() if a in allowed]
            legend = ", ".join(f"[{k}] {a.value}" for k, a in _ANSWER_KEYS.items() if a in allowed)
            while True:
                choice = input(f"  {legend} > ").strip()
                if choice in keys:
                    return _ANSWER_KEYS[choice]
                print("  unrecognized choice")

    return _Terminal()


def cmd_encode(args: argparse.Namespace) -> int:
    catalog = _resolve_catalog(args.catalog)
    elements = list(catalog.elements[: args.limit] if args.limit else catalog.elements)
    options = SessionOptions(
        rng_seed=args.seed,
        allow_equal=not args.no_equal,
        allow_degree2=not args.no_much,
    )
    session = start_session(catalog.ref, elements, options, provenance=args.provenance)
    if args.oracle:
        try:
            oracle = WeakOrderOracle.from_json_dict(json.loads(Path(args.oracle).read_text("utf-8")))
        except FileNotFoundError:
            raise CliError(f"oracle file not found: {args.oracle}", code="file-not-found")
        drive_session(session, oracle)
    else:
        drive_session(session, _interactive_oracle(session, catalog))
    graph = session.graph()
    graph.save(args.output)
    if args.log:
        Path(args.log).write_text(json.dumps(session.log_json_dict(), indent=1), "utf-8")
    print(
        f"encoded {len(graph.nodes)} elements into {len(graph.edges)} edges "
        f"({session.answered_count} answers)"
    )
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        log = json.loads(Path(args.log).read_text("utf-8"))
    except FileNotFoundError:
        raise CliError(f"log file not found: {args.log}", code="file-not-found")
    session = replay_log(log)
    if args.output:
        session.graph().save(args.output)
    print(
        f"replayed {session.answered_count} answers, state {session.state.value}"
    )
    return 0


def cmd_unify(args: argparse.Namespace) -> int:
    graphs = [_load_graph(p) for p in args.graphs]
    try:
        unified, report = unify_with_degrees(graphs)
    except UnificationInputError as exc:
        raise CliError(str(exc), code="unification-input")
    unified.save(args.output)
    if args.report:
        _write_json(args.report, report.to_json_dict())
    print(
        f"unified {len(graphs)} graphs: applied={report.applied} "
        f"disputed={report.disputed} contradictory={report.contradictory}"
    )
    return 0


def _config_from_args(args: argparse.Namespace) -> ScoringConfig:
    pegs = {}
    if getattr(args, "pegs", None):
        pegs = {str(k): float(v) for k, v in json.loads(Path(args.pegs).read_text("utf-8")).items()}
    try:
        return ScoringConfig(
            min_score=args.min,
            max_score=args.max,
            dist1=args.d1,
            dist2=args.d2,
            decimals=args.decimals,
            pegs=pegs,
        )
    except ScoringError as exc:
        raise CliError(str(exc), code="infeasible-config")


def cmd_score(args: argparse.Namespace) -> int:
    graph = _load_graph(args.graph)
    cfg = _config_from_args(args)
    try:
        assignment = generate_scores(graph, cfg)
    except ScoringError as exc:
        raise CliError(str(exc), code="infeasible-config")
    _write_json(args.output, assignment.to_json_dict())
    if args.curve:
        curve = feasible_distances(graph, cfg.min_score, cfg.max_score, args.curve_step)
        Path(args.curve).write_text(curve.to_csv(), "utf-8")
    chosen = ", ".join(f"{s.chosen:.{cfg.decimals}f}" for s in assignment.sets)
    print(f"scores: {chosen}")
    return 0


def cmd_peg(args: argparse.Namespace) -> int:
    graph = _load_graph(args.graph)
    cfg = _config_from_args(args)
    pegs = {str(k): float(v) for k, v in json.loads(Path(args.set).read_text("utf-8")).items()}
    try:
        assignment = peg_and_regenerate(graph, cfg, pegs)
    except ScoringError as exc:
        raise CliError(str(exc), code="infeasible-config")
    _write_json(args.output, assignment.to_json_dict())
    return 0


def cmd_feasibility(args: argparse.Namespace) -> int:
    graph = _load_graph(args.graph)
    curve = feasible_distances(graph, args.min, args.max, args.step)
    text = curve.to_csv()
    if args.output:
        Path(args.output).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_prioritize(args: argparse.Namespace) -> int:
    graph = _load_graph(args.graph)
    ranked = prioritize(graph)
    if args.output:
        _write_json(args.output, ranked_sets_json(ranked))
    print(format_ranked_sets(ranked))
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    graphs = [(p, _load_graph(p)) for p in args.graphs]
    lines = ["graph_a,graph_b,total,differing,opposing,adjacent_swaps,footrule"]
    for i in range(len(graphs)):
        for j in range(i + 1, len(graphs)):
            (pa, ga), (pb, gb) = graphs[i], graphs[j]
            inc = pairwise_inconsistency(ga, gb)
            dist = ordering_distance(ga, gb)
            lines.append(
                f"{Path(pa).name},{Path(pb).name},{inc.total},{inc.differing},"
                f"{inc.opposing},{dist.adjacent_swaps},{dist.footrule}"
            )
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app, default_catalogs

    catalogs = default_catalogs()
    for spec in args.catalog or []:
        c = _resolve_catalog(spec)
        catalogs[c.ref] = c
    app = create_app(args.data_dir, catalogs, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scoregraph",
        description="Elicit, unify, score and prioritize constraint graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="run an elicitation session")
    p.add_argument("--catalog", required=True, help="catalog file or builtin name")
    p.add_argument("--limit", type=int, default=0, help="use only the first N elements")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-equal", action="store_true", help="forbid equal answers")
    p.add_argument("--no-much", action="store_true", help="forbid much-less/much-greater")
    p.add_argument("--oracle", help="scripted oracle JSON (ranks + optional muchGap)")
    p.add_argument("--provenance", default="")
    p.add_argument("-o", "--output", required=True, help="graph JSON output")
    p.add_argument("--log", help="session log JSON output")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("replay", help="rebuild a session from its log")
    p.add_argument("--log", required=True)
    p.add_argument("-o", "--output", help="graph JSON output")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("unify", help="merge graphs by voting")
    p.add_argument("graphs", nargs="+", help="two or more graph JSON files")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--report", help="unification report JSON output")
    p.set_defaults(func=cmd_unify)

    def add_config_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--d1", type=float, required=True, help="minimum gap for degree 1")
        p.add_argument("--d2", type=float, required=True, help="minimum gap for degree 2")
        p.add_argument("--min", type=float, default=0.0)
        p.add_argument("--max", type=float, default=10.0)
        p.add_argument("--decimals", type=int, default=1)
        p.add_argument("--pegs", help="JSON file of element to pegged score")

    p = sub.add_parser("score", help="generate a rational scoring system")
    p.add_argument("graph")
    add_config_args(p)
    p.add_argument("-o", "--output", help="assignment JSON output")
    p.add_argument("--curve", help="feasibility curve CSV output")
    p.add_argument("--curve-step", type=float, default=0.01)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("peg", help="peg scores and regenerate")
    p.add_argument("graph")
    add_config_args(p)
    p.add_argument("--set", required=True, help="JSON file of new pegs")
    p.add_argument("-o", "--output", help="assignment JSON output")
    p.set_defaults(func=cmd_peg)

    p = sub.add_parser("feasibility", help="sample the valid distance region")
    p.add_argument("graph")
    p.add_argument("--min", type=float, default=0.0)
    p.add_argument("--max", type=float, default=10.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("-o", "--output", help="CSV output (stdout otherwise)")
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("prioritize", help="ranked equivalency sets")
    p.add_argument("graph")
    p.add_argument("-o", "--output", help="JSON output")
    p.set_defaults(func=cmd_prioritize)

    p = sub.add_parser("compare", help="pairwise consistency metrics")
    p.add_argument("graphs", nargs="+", help="two or more graph JSON files")
    p.add_argument("-o", "--output", help="CSV output (stdout otherwise)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument(
        "--data-dir",
        default=os.environ.get("SCOREGRAPH_DATA_DIR", "./scoregraph-data"),
    )
    p.add_argument("--host", default=os.environ.get("SCOREGRAPH_HOST", "127.0.0.1"))
    p.add_argument(
        "--port", type=int, default=int(os.environ.get("SCOREGRAPH_PORT", "8400"))
    )
    p.add_argument(
        "--catalog",
        action="append",
        default=_env_list("SCOREGRAPH_CATALOG"),
        help="extra catalog file or builtin name (repeatable)",
    )
    p.add_argument("--ui-dir", default=os.environ.get("SCOREGRAPH_UI_DIR"))
    p.set_defaults(func=cmd_serve)

    return parser


def _env_list(name: str) -> list[str]:
    raw = os.environ.get(name)
    return [part for part in raw.split(":") if part] if raw else []


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        json.dump({"error": exc.code, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    except (GraphError, ScoringError, UnificationInputError, CatalogError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

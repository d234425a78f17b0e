"""Command-line surface: construction, queries, verification, export, report.

Exit codes: 0 success / all checks pass, 1 verification failure, 2 usage
error, 3 refused because an implicit level cannot answer.  All output files
are UTF-8 with LF line endings; identical flags and seed give byte-identical
output.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path as FsPath
from xml.sax.saxutils import escape, quoteattr

from .covering import fiber_hex
from .embedding import negative_type_suite, wall_embedding
from .errors import InvalidInputError, UnsupportedOnImplicitError
from .multigraph import bfs_distance, to_edge_list_text
from .reporting import (
    SUITES,
    distance_matrix_csv,
    level_stats_csv,
    render_report,
    run_suites,
    write_figures,
)
from .tower import (
    BoxSpace,
    TowerLevel,
    build_tower,
    implicit_graph_distance,
    implicit_wall_distance,
    manifest_text,
)
from .walls import ExceedsCap, wall_structure


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        FsPath(path).write_text(text, encoding="utf-8", newline="\n")


def _node_name(level: TowerLevel, vid: int) -> tuple[str, str]:
    """DOT/GraphML node name "v{base}_{fiberhex}" and the cloud label."""
    if level.cover is None:
        return f"v{vid}_{fiber_hex(0, 0)}", fiber_hex(0, 0)
    b, k = level.cover.vertex_coord(vid)
    fh = fiber_hex(level.fiber_width, k)
    return f"v{b}_{fh}", fh


def _base_edge_label(level: TowerLevel, eid: int) -> int:
    return eid if level.cover is None else level.cover.project_edge(eid)


def _dot_text(level: TowerLevel) -> str:
    g = level._need_explicit()
    lines = [f"graph level{level.index} {{"]
    names = []
    for vid in range(g.vertex_count):
        name, cloud = _node_name(level, vid)
        names.append(name)
        lines.append(f'  {name} [cloud="{cloud}"];')
    for eid, (u, v) in enumerate(g.edges):
        lines.append(f'  {names[u]} -- {names[v]} [label="{_base_edge_label(level, eid)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _graphml_text(level: TowerLevel) -> str:
    g = level._need_explicit()
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="cloud" for="node" attr.name="cloud" attr.type="string"/>',
        '  <key id="base_edge" for="edge" attr.name="base_edge" attr.type="int"/>',
        f'  <graph id={quoteattr(f"level{level.index}")} edgedefault="undirected">',
    ]
    names = []
    for vid in range(g.vertex_count):
        name, cloud = _node_name(level, vid)
        names.append(name)
        lines.append(
            f"    <node id={quoteattr(name)}><data key=\"cloud\">{escape(cloud)}</data></node>"
        )
    for eid, (u, v) in enumerate(g.edges):
        lines.append(
            f"    <edge id=\"e{eid}\" source={quoteattr(names[u])} target={quoteattr(names[v])}>"
            f"<data key=\"base_edge\">{_base_edge_label(level, eid)}</data></edge>"
        )
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


def _parse_point(token: str):
    """Explicit points are "v<id>"; implicit points are "v<base id>:<fiber hex>"."""
    if not token.startswith("v"):
        raise InvalidInputError(f"vertex spec {token!r} must start with 'v'")
    body = token[1:]
    try:
        if ":" in body:
            vs, hexs = body.split(":", 1)
            return int(vs), int(hexs, 16)
        return int(body), None
    except ValueError as exc:
        raise InvalidInputError(f"bad vertex spec {token!r}") from exc


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def cmd_tower(args) -> int:
    tower = build_tower(args.levels, args.explicit_cap)
    _write_text(args.out, manifest_text(tower, args.explicit_cap))
    return 0


def cmd_dist(args) -> int:
    tower = build_tower(max(4, args.level + 1))
    if not 0 <= args.level < len(tower):
        raise InvalidInputError(f"level {args.level} out of range")
    level = tower[args.level]
    (ub, uf), (vb, vf) = _parse_point(args.x), _parse_point(args.y)
    if level.is_explicit:
        if uf is not None or vf is not None:
            raise InvalidInputError(
                f"level {args.level} is explicit; use dense vertex ids like v17"
            )
        if not (0 <= ub < level.vertex_count and 0 <= vb < level.vertex_count):
            raise InvalidInputError("vertex id out of range")
        if args.metric == "graph":
            print(bfs_distance(level.graph, ub, vb))
        else:
            masks = level.point_masks
            print((masks[ub] ^ masks[vb]).bit_count())
        return 0
    if uf is None or vf is None:
        raise InvalidInputError(
            f"level {args.level} is implicit; use points like v5:{'0' * ((level.fiber_width + 3) // 4)}"
        )
    x, y = (ub, uf), (vb, vf)
    if args.metric == "wall":
        print(implicit_wall_distance(tower, x, y))
        return 0
    result = implicit_graph_distance(tower, x, y, args.cap)
    print("EXCEEDS_CAP" if result is ExceedsCap else result)
    return 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    tower = build_tower(4)
    results = run_suites(names, tower, args.seed)
    report = render_report(results, args.seed)
    sys.stdout.write(report)
    if args.out is not None:
        out = FsPath(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "verify_report.txt").write_text(report, encoding="utf-8", newline="\n")
        (out / "tower_manifest.txt").write_text(manifest_text(tower), encoding="utf-8", newline="\n")
        if "kernel" in names:
            kernel = negative_type_suite(BoxSpace(tower, "wall"), args.seed, 1000)
            (out / "kernel_report.txt").write_text(kernel.text(), encoding="utf-8", newline="\n")
    return 0 if all(r.passed for r in results) else 1


def cmd_export(args) -> int:
    tower = build_tower(max(4, args.level + 1))
    if not 0 <= args.level < len(tower):
        raise InvalidInputError(f"level {args.level} out of range")
    level = tower[args.level]
    if args.format == "dot":
        text = _dot_text(level)
    elif args.format == "graphml":
        text = _graphml_text(level)
    elif args.format == "csv":
        text = distance_matrix_csv(level)
    else:
        text = to_edge_list_text(level._need_explicit())
    _write_text(args.out, text)
    return 0


def cmd_report(args) -> int:
    out = FsPath(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tower = build_tower(args.levels)
    written: list[str] = []

    def emit(name: str, text: str) -> None:
        (out / name).write_text(text, encoding="utf-8", newline="\n")
        written.append(name)

    emit("tower_manifest.txt", manifest_text(tower))
    results = run_suites(list(SUITES), tower, args.seed)
    emit("verify_report.txt", render_report(results, args.seed))
    kernel = negative_type_suite(BoxSpace(tower, "wall"), args.seed, 1000)
    emit("kernel_report.txt", kernel.text())
    emit("level_stats.csv", level_stats_csv(tower))
    for level in tower:
        if not level.is_explicit:
            continue
        emit(f"level{level.index}.edgelist", to_edge_list_text(level.graph))
        if level.cover is not None:
            ws = wall_structure(level.cover)
            emit(f"walls_level{level.index}.csv", ws.csv_text())
            emit(f"embedding_level{level.index}.csv", wall_embedding(level.cover, ws).csv_text())
    top = max((lv for lv in tower if lv.is_explicit), key=lambda lv: lv.index)
    emit(f"distance_matrix_level{top.index}.csv", distance_matrix_csv(top))
    written.extend(write_figures(out, tower))
    for name in written:
        print(name)
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxcover",
        description="Iterated Z/2-homology covers: tower construction, wall/graph "
        "metrics, verification suites, and exports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tower = sub.add_parser("tower", help="build the tower and print its manifest")
    p_tower.add_argument("--levels", type=_positive_int, default=4,
                         help="number of levels X_0..X_{n-1} (default 4)")
    p_tower.add_argument("--explicit-cap", type=_positive_int, default=10_000,
                         help="materialize levels only up to this vertex count")
    p_tower.add_argument("--out", default=None, help="write the manifest to a file")
    p_tower.set_defaults(func=cmd_tower)

    p_dist = sub.add_parser("dist", help="distance between two vertices of one level")
    p_dist.add_argument("--level", type=_nonnegative_int, required=True)
    p_dist.add_argument("--metric", choices=("graph", "wall"), default="graph")
    p_dist.add_argument("--cap", type=_nonnegative_int, default=12,
                        help="radius cap for implicit graph-metric queries (default 12)")
    p_dist.add_argument("x", help="vertex: v<id> (explicit) or v<base>:<fiberhex> (implicit)")
    p_dist.add_argument("y")
    p_dist.set_defaults(func=cmd_dist)

    p_verify = sub.add_parser("verify", help="run verification suites")
    p_verify.add_argument("--suite", choices=("all", *SUITES), default="all")
    p_verify.add_argument("--seed", type=int, default=42)
    p_verify.add_argument("--out", default=None,
                          help="directory for verify_report.txt and tower_manifest.txt")
    p_verify.set_defaults(func=cmd_verify)

    p_export = sub.add_parser("export", help="export one explicit level")
    p_export.add_argument("--level", type=_nonnegative_int, required=True)
    p_export.add_argument("--format", choices=("dot", "graphml", "csv", "edgelist"),
                          required=True)
    p_export.add_argument("--out", default=None)
    p_export.set_defaults(func=cmd_export)

    p_report = sub.add_parser(
        "report", help="write the full report bundle: manifests, CSVs, and figures"
    )
    p_report.add_argument("--out", required=True)
    p_report.add_argument("--seed", type=int, default=42)
    p_report.add_argument("--levels", type=_positive_int, default=4)
    p_report.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedOnImplicitError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

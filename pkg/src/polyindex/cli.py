"""Command-line front end.

Subcommands:
  char       print d2 and characteristic signatures of graph files
  build      build a model database from view drawings or graph files
  recognize  rank characteristic views for scene drawings against a database
  collide    signature collision study over all small connected graphs
  synth      emit a synthetic view set plus degraded query scenes

Exit codes: 0 success, 2 usage, 3 malformed input, 4 size limit, 5 I/O.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import indexdb, synth
from .decompose import DEFAULT_MAX_NODES, DEFAULT_MIN_NODES, DEFAULT_RADIUS
from .errors import GraphError, ParseError, PolyindexError, SizeLimitError
from .graphs import WeightedGraph, format_graph, laplacian, parse_graphs
from .linedraw import DEFAULT_COLLINEAR_DEG, parse_line_drawing, split_image_graph, format_line_drawing
from .signatures import DEFAULT_N_MAX, char_signature, d2_signature
from .smallgraphs import collision_study

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_SIZE = 4
EXIT_IO = 5


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by the indexing commands."""

    p: int = DEFAULT_RADIUS
    min_nodes: int = DEFAULT_MIN_NODES
    max_nodes: int = DEFAULT_MAX_NODES
    collinear_deg: float = DEFAULT_COLLINEAR_DEG
    mode: str = "weighted"
    n_max: int = DEFAULT_N_MAX
    seed: int = 0

    def __post_init__(self):
        if self.p < 1:
            raise GraphError(f"--p must be >= 1, got {self.p}")
        if self.min_nodes < 2 or self.max_nodes < self.min_nodes:
            raise GraphError(
                f"bad size window [{self.min_nodes}, {self.max_nodes}]"
            )
        if not (0.0 < self.collinear_deg < 45.0):
            raise GraphError(
                f"--collinear-deg must be in (0, 45), got {self.collinear_deg}"
            )

    def db_params(self) -> indexdb.DbParams:
        return indexdb.DbParams(
            self.p, self.min_nodes, self.max_nodes, self.mode, self.n_max
        )


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        p=args.p,
        min_nodes=args.min_nodes,
        max_nodes=args.max_nodes,
        collinear_deg=args.collinear_deg,
        mode=args.mode,
        n_max=args.n_max,
        seed=args.seed,
    )


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _named_graphs(path: str, cfg: RunConfig) -> list[tuple[str, WeightedGraph]]:
    """(name, graph) pairs from one file: graph records pass through,
    drawings run through the splitting pipeline."""
    text = _read(path)
    first = next(
        (ln.split()[0] for ln in text.splitlines() if ln.split("#", 1)[0].strip()),
        "",
    )
    if first == "graph":
        return parse_graphs(text)
    drawing = parse_line_drawing(text)
    stem = Path(path).stem
    graphs = split_image_graph(
        drawing,
        collinear_deg=cfg.collinear_deg,
        mode=cfg.mode,
    )
    return [(f"{stem}.{i}", g) for i, g in enumerate(graphs)]


def _scene_graphs(path: str, cfg: RunConfig) -> list[WeightedGraph]:
    return [g for _, g in _named_graphs(path, cfg)]


# --- char ---------------------------------------------------------------------


def _cmd_char(args) -> int:
    cfg = _config_from_args(args)
    emitted = []
    for path in args.files:
        for name, g in _named_graphs(path, cfg):
            lap = laplacian(g)
            d2 = d2_signature(lap, cfg.n_max)
            ch = char_signature(lap, cfg.n_max)
            d2_str = " ".join(map(str, d2.coeffs))
            ch_str = " ".join(map(str, ch.coeffs))
            if args.format == "kv":
                print(f"d2 {name} {d2.size} {d2_str}")
                print(f"charpoly {name} {ch.size} {ch_str}")
            else:
                print(f"{name} (n={g.node_count})")
                print(f"  d2:   {d2_str}")
                print(f"  char: {ch_str}")
            emitted.append(format_graph(g, name))
    if args.out:
        Path(args.out).write_text("".join(emitted), encoding="utf-8")
    return EXIT_OK


# --- build --------------------------------------------------------------------


def _load_views(manifest_path: str, cfg: RunConfig) -> list[tuple[str, str, WeightedGraph]]:
    base = Path(manifest_path).parent
    views = []
    for line_no, raw in enumerate(_read(manifest_path).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("expected '<object_id> <view_id> <path>'", line_no)
        object_id, view_id, rel = parts
        path = Path(rel)
        if not path.is_absolute():
            path = base / rel
        graphs = _scene_graphs(str(path), cfg)
        if len(graphs) != 1:
            raise GraphError(
                f"view {view_id!r}: expected exactly one relevant graph, "
                f"got {len(graphs)} from {path}"
            )
        views.append((object_id, view_id, graphs[0]))
    return views


def _cmd_build(args) -> int:
    cfg = _config_from_args(args)
    views = _load_views(args.manifest, cfg)
    db, report = indexdb.build_database(views, cfg.db_params())
    Path(args.db).write_text(indexdb.save_database(db), encoding="utf-8")
    print(f"objects {report.object_count}")
    print(f"views {report.view_count}")
    print(f"subgraphs {report.subgraph_count}")
    print(f"entries {report.entry_count}")
    print(f"sharing_ratio {report.sharing_ratio:.3f}")
    for note in report.skipped:
        print(f"skipped {note}")
    for note in report.accidents:
        print(f"accident {note}")
    print(f"db {args.db}")
    return EXIT_OK


# --- recognize ------------------------------------------------------------------


def _load_truth(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    truth = {}
    for line_no, raw in enumerate(_read(path).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected '<scene-name> <cv_id>'", line_no)
        truth[parts[0]] = parts[1]
    return truth


def _cmd_recognize(args) -> int:
    cfg = _config_from_args(args)
    db = indexdb.load_database(_read(args.db))
    truth = _load_truth(args.truth)
    for path in args.scenes:
        scene_name = Path(path).name
        graphs = _scene_graphs(path, cfg)
        result = indexdb.recognize(db, graphs)
        expected = truth.get(scene_name)
        if args.format == "kv":
            for gi, tally in enumerate(result.per_graph):
                ranked = tally.ranked()
                top = ranked[0][1] if ranked else 0
                for rank, (cv, count) in enumerate(ranked, start=1):
                    marks = f"top={int(count == top)} truth={int(cv == expected)}"
                    print(f"vote {scene_name} {gi} {cv} {count} rank={rank} {marks}")
        else:
            print(f"scene {scene_name}")
            for gi, tally in enumerate(result.per_graph):
                ranked = tally.ranked()
                if not ranked:
                    print(f"  graph {gi}: (no votes)")
                    continue
                top = ranked[0][1]
                cells = []
                for cv, count in ranked:
                    star = "*" if count == top else ""
                    mark = "!" if cv == expected else ""
                    cells.append(f"{cv}{star}{mark}={count}")
                print(f"  graph {gi}: " + "  ".join(cells))
            combined = result.ranked()
            if combined:
                top = combined[0][1]
                cells = [
                    f"{cv}{'*' if count == top else ''}={count}"
                    for cv, count in combined
                ]
                print("  combined: " + "  ".join(cells))
    return EXIT_OK


# --- collide --------------------------------------------------------------------


def _cmd_collide(args) -> int:
    report = collision_study(args.n)
    print(
        f"n={report.n} classes={report.class_count} "
        f"d2_collisions={report.d2_collision_pairs} "
        f"charpoly_collisions={report.char_collision_pairs}"
    )
    for group in report.d2_groups:
        print(f"d2_group {' '.join(map(str, group))}")
    for group in report.char_groups:
        print(f"charpoly_group {' '.join(map(str, group))}")
    return EXIT_OK


# --- synth ----------------------------------------------------------------------


def _cmd_synth(args) -> int:
    cfg = _config_from_args(args)
    out = Path(args.out)
    views_dir = out / "views"
    scenes_dir = out / "scenes"
    views_dir.mkdir(parents=True, exist_ok=True)
    scenes_dir.mkdir(parents=True, exist_ok=True)

    catalog = synth.view_catalog(cfg.seed)
    manifest_lines = []
    for object_id, view_id, drawing in catalog:
        rel = f"views/{view_id}.draw"
        (out / rel).write_text(format_line_drawing(drawing), encoding="utf-8")
        manifest_lines.append(f"{object_id} {view_id} {rel}")
    (out / "manifest.txt").write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")

    truth_lines = []
    scene_no = 0
    for object_id, view_id, drawing in catalog:
        for k in range(args.scenes_per_view):
            rng = random.Random(f"{cfg.seed}:{view_id}:{k}")
            scene = synth.generate_query_scene(
                drawing,
                rng,
                deletion_rate=args.deletion_rate,
                occlude=not args.no_occlude,
                jitter_sigma=args.jitter,
            )
            name = f"scene_{scene_no:03d}.draw"
            (scenes_dir / name).write_text(format_line_drawing(scene), encoding="utf-8")
            truth_lines.append(f"{name} {view_id}")
            scene_no += 1
    (out / "truth.txt").write_text("\n".join(truth_lines) + "\n", encoding="utf-8")
    print(f"views {len(catalog)}")
    print(f"scenes {scene_no}")
    print(f"out {out}")
    return EXIT_OK


# --- entry point ------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--p", type=int, default=DEFAULT_RADIUS, help="neighborhood radius")
    p.add_argument("--min-nodes", type=int, default=DEFAULT_MIN_NODES)
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.add_argument("--collinear-deg", type=float, default=DEFAULT_COLLINEAR_DEG)
    p.add_argument("--mode", choices=("weighted", "binary"), default="weighted")
    p.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("table", "kv"), default="table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyindex",
        description="Graph-indexing recognition of polyhedral objects "
        "from 2-D line drawings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_char = sub.add_parser(
        "char", help="print signatures of graph files or drawings"
    )
    p_char.add_argument("files", nargs="+")
    p_char.add_argument(
        "--out", help="also write the graphs in graph-record format"
    )
    _add_common(p_char)
    p_char.set_defaults(func=_cmd_char)

    p_build = sub.add_parser("build", help="build a model database")
    p_build.add_argument("manifest", help="lines: <object_id> <view_id> <path>")
    p_build.add_argument("--db", required=True, help="output database path")
    _add_common(p_build)
    p_build.set_defaults(func=_cmd_build)

    p_rec = sub.add_parser("recognize", help="rank views for scene drawings")
    p_rec.add_argument("scenes", nargs="+")
    p_rec.add_argument("--db", required=True)
    p_rec.add_argument("--truth", help="optional '<scene-name> <cv_id>' file")
    _add_common(p_rec)
    p_rec.set_defaults(func=_cmd_recognize)

    p_col = sub.add_parser("collide", help="signature collision study")
    p_col.add_argument("n", type=int)
    _add_common(p_col)
    p_col.set_defaults(func=_cmd_collide)

    p_syn = sub.add_parser("synth", help="emit synthetic views and scenes")
    p_syn.add_argument("--out", required=True)
    p_syn.add_argument("--scenes-per-view", type=int, default=1)
    p_syn.add_argument("--deletion-rate", type=float, default=0.0)
    p_syn.add_argument("--jitter", type=float, default=0.0)
    p_syn.add_argument("--no-occlude", action="store_true")
    _add_common(p_syn)
    p_syn.set_defaults(func=_cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (ParseError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PolyindexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry points: run the pipeline on local inputs, export SVG,
replay event logs, and serve the HTTP API.

Exit codes: 0 success, 2 usage problems (bad arguments, missing input files),
3 pipeline or data errors (with a diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .adapters import make_adapters
from .chapters import chapters_from_dicts
from .errors import BadLogLine, CourseGraphError
from .feedback import FeedbackStore
from .framestream import load_frame_stream
from .pipeline import DEFAULT_HEX_SIDE, EngineConfig, run_pipeline
from .svg import render_svg

USAGE_EXIT = 2
ERROR_EXIT = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coursegraph",
        description="Lecture-video knowledge graph engine and feedback service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    process = sub.add_parser("process", help="run the full pipeline on a frame stream")
    process.add_argument("stream", help="path to a TSCF frame stream")
    process.add_argument("chapters", help="path to a JSON chapter annotation file")
    process.add_argument("--adapters", default="mock:fixtures", metavar="SPEC",
                         help="adapter config: mock:<fixture-dir> or an http(s) base URL")
    process.add_argument("--out-dir", default=".", help="directory for graph.json and keyframes.json")
    process.add_argument("--video-id", default=None, help="identifier recorded in the outputs")
    _add_engine_flags(process)

    export = sub.add_parser("export-svg", help="render a graph JSON export as SVG")
    export.add_argument("graph", help="path to graph.json")
    export.add_argument("-o", "--out", default=None, help="output file (default: stdout)")

    replay = sub.add_parser("replay", help="replay a newline-delimited JSON event log")
    replay.add_argument("log", help="path to the event log")
    replay.add_argument("--graph", default=None,
                        help="graph.json used to register concept ids (default: from markings)")
    replay.add_argument("--chapters", default=None, help="chapter annotation JSON file")
    replay.add_argument("--duration", type=int, default=None,
                        help="video duration in seconds (default: max second in the log)")

    serve = sub.add_parser("serve", help="serve the HTTP API")
    serve.add_argument("--serve", default="127.0.0.1:8000", metavar="ADDR:PORT",
                       help="bind address (default 127.0.0.1:8000)")
    serve.add_argument("--store", default=os.environ.get("COURSEGRAPH_STORE", "coursegraph.db"))
    serve.add_argument("--adapters", default=os.environ.get("COURSEGRAPH_ADAPTERS", "mock:fixtures"))
    serve.add_argument("--workers", type=int,
                       default=int(os.environ.get("COURSEGRAPH_WORKERS", "2")))
    _add_engine_flags(serve)

    return parser


def _add_engine_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--window-len", type=int, default=9,
                        help="Hann smoothing window length (odd, default 9)")
    parser.add_argument("--dedup-threshold", type=float, default=0.9,
                        help="keyframe similarity threshold (default 0.9)")
    parser.add_argument("--noise-floor", type=float, default=None,
                        help="peak floor for maxima detection (default: 2%% of series max)")
    parser.add_argument("--hex-side", type=float, default=DEFAULT_HEX_SIDE,
                        help=f"hexagon side length in pixels (default {DEFAULT_HEX_SIDE})")


def _engine_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> EngineConfig:
    if not 0 < args.dedup_threshold <= 1:
        parser.error(f"--dedup-threshold must be in (0, 1], got {args.dedup_threshold}")
    if args.window_len < 3 or args.window_len % 2 == 0:
        parser.error(f"--window-len must be odd and >= 3, got {args.window_len}")
    return EngineConfig(
        window_len=args.window_len,
        dedup_threshold=args.dedup_threshold,
        noise_floor=args.noise_floor,
        hex_side=args.hex_side,
    )


def _require_file(parser_error, path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        parser_error(f"{what} not found: {path}")
    return p


def cmd_process(args, parser: argparse.ArgumentParser) -> int:
    stream_path = _require_file(parser.error, args.stream, "frame stream")
    chapters_path = _require_file(parser.error, args.chapters, "chapters file")

    chapters = chapters_from_dicts(json.loads(chapters_path.read_text(encoding="utf-8")))
    video_id = args.video_id or stream_path.stem
    seq = load_frame_stream(stream_path.read_bytes(), video_id=video_id)
    adapters = make_adapters(args.adapters)
    result = run_pipeline(seq, chapters, adapters, _engine_config(args, parser))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "graph.json").write_bytes(result.graph_json)
    manifest = result.keyframe_manifest()
    (out_dir / "keyframes.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )

    print(f"{video_id}: {len(result.keyframes)} keyframes, "
          f"{len(result.graph.nodes)} nodes, {result.graph.edge_count()} edges")
    for line in manifest["warnings"]:
        print(f"warning: {line}", file=sys.stderr)
    return 0


def cmd_export_svg(args, parser: argparse.ArgumentParser) -> int:
    graph_path = _require_file(parser.error, args.graph, "graph JSON")
    doc = json.loads(graph_path.read_text(encoding="utf-8"))
    svg = render_svg(doc)
    if args.out:
        Path(args.out).write_text(svg, encoding="utf-8")
    else:
        sys.stdout.write(svg)
    return 0


def cmd_replay(args, parser: argparse.ArgumentParser) -> int:
    log_path = _require_file(parser.error, args.log, "event log")

    records: list[tuple[int, dict]] = []
    with log_path.open(encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                record = json.loads(stripped)
                if not isinstance(record, dict) or "type" not in record:
                    raise ValueError("record must be an object with a 'type' field")
            except ValueError as exc:
                raise BadLogLine(number, str(exc)) from exc
            records.append((number, record))

    chapters = []
    if args.chapters:
        chapters_path = _require_file(parser.error, args.chapters, "chapters file")
        chapters = chapters_from_dicts(json.loads(chapters_path.read_text(encoding="utf-8")))

    store = FeedbackStore(":memory:")
    video_ids = sorted({r["video_id"] for _, r in records if "video_id" in r}) or ["video"]
    for video_id in video_ids:
        seconds = [
            int(r.get("video_second", 0)) for _, r in records if r.get("video_id") == video_id
        ]
        duration = args.duration if args.duration is not None else max(seconds, default=0)
        store.register_video(video_id, video_id, duration, chapters, state="ready")
        if args.graph:
            graph_path = _require_file(parser.error, args.graph, "graph JSON")
            doc = json.loads(graph_path.read_text(encoding="utf-8"))
            store.register_concepts(video_id, [n["id"] for n in doc["nodes"]])
        else:
            concept_ids = sorted(
                {
                    str(r["payload"]["concept_id"])
                    for _, r in records
                    if r.get("type") == "marking" and r.get("video_id") == video_id
                }
            )
            store.register_concepts(video_id, concept_ids)

    for number, record in records:
        try:
            store.apply_log_record(record)
        except (CourseGraphError, ValueError, KeyError, TypeError) as exc:
            raise BadLogLine(number, str(exc)) from exc

    for video_id in video_ids:
        print_aggregate_report(store, video_id)
    return 0


def print_aggregate_report(store: FeedbackStore, video_id: str) -> None:
    timeline = store.aggregate_timeline(video_id)
    print(f"== timeline {video_id} ==")
    print("second\tplays\tpauses\tavg_speed\tcumulative_comments")
    for s in range(len(timeline.plays)):
        print(
            f"{s}\t{timeline.plays[s]}\t{timeline.pauses[s]}"
            f"\t{timeline.avg_speed[s]:.6f}\t{timeline.cumulative_comments[s]}"
        )
    print(f"== concepts {video_id} ==")
    print("concept_id\tmean_score\tmarker_count\tintensity\talpha")
    for agg in store.aggregate_concept_scores(video_id):
        print(
            f"{agg.concept_id}\t{agg.mean_score:.6f}\t{agg.marker_count}"
            f"\t{agg.intensity:.6f}\t{agg.alpha:.6f}"
        )


def cmd_serve(args, parser: argparse.ArgumentParser) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    addr, _, port = args.serve.rpartition(":")
    if not addr or not port.isdigit():
        parser.error(f"--serve expects ADDR:PORT, got {args.serve!r}")
    config = ServiceConfig(
        adapters=make_adapters(args.adapters),
        store_path=args.store,
        workers=args.workers,
        engine=_engine_config(args, parser),
    )
    uvicorn.run(create_app(config), host=addr, port=int(port))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "process": cmd_process,
        "export-svg": cmd_export_svg,
        "replay": cmd_replay,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args, parser)
    except BadLogLine as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR_EXIT
    except CourseGraphError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return ERROR_EXIT
    except (json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR_EXIT


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end.

Subcommands map one-to-one onto library entry points: synth writes
synthetic scene files, generate builds a dataset directory from scene
files, bench replays a dataset and prints metrics, split partitions
scenes, serve exposes the HTTP API over a dataset.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .bench import (BenchError, generate_dataset, load_dataset, run_bench,
                    split_scenes, write_bench_outputs)
from .language import GenerationConfig
from .metrics import format_report
from .relations import RelationConfig, load_relation_config
from .scene import SceneError

_THRESHOLD_FLAGS = ("near_gap_max", "on_zgap_max", "in_containment_min",
                    "footprint_overlap_min", "between_corridor_halfwidth")


def _scene_files(paths: list[str]) -> list[Path]:
    files: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            files.extend(sorted(p.glob("*.json")))
        else:
            files.append(p)
    return files


def _relation_config(args) -> RelationConfig:
    config = (load_relation_config(args.relation_config)
              if args.relation_config else RelationConfig())
    overrides = {name: getattr(args, name) for name in _THRESHOLD_FLAGS
                 if getattr(args, name) is not None}
    if overrides:
        config = dataclasses.replace(config, **overrides)
    return config


def cmd_synth(args) -> int:
    from .synth import write_scenes

    paths = write_scenes(args.out, args.count, args.seed)
    print(f"wrote {len(paths)} scenes to {args.out}")
    return 0


def cmd_generate(args) -> int:
    files = _scene_files(args.scenes)
    if not files:
        print("error: no scene files found", file=sys.stderr)
        return 2
    generation = GenerationConfig(statements_per_target=args.statements_per_target,
                                  space_targets=args.space_targets)
    summary = generate_dataset(
        files, args.out, seed=args.seed, imperfect_ratio=args.imperfect_ratio,
        relation_config=_relation_config(args), generation_config=generation)
    stats = summary["statements"]
    print(f"dataset at {args.out}: {stats['perfect']} statements, "
          f"{stats['imperfect']} imperfect, {stats['skipped_targets']} targets skipped")
    return 0


def cmd_bench(args) -> int:
    report, rows = run_bench(args.data, parser_mode=args.parser, alt_mode=args.alt)
    if args.out:
        write_bench_outputs(report, rows, args.out)
    print(format_report(report))
    return 0


def cmd_split(args) -> int:
    if args.data:
        manifest, _, _ = load_dataset(args.data)
        ids = [entry["scene_id"] for entry in manifest["scenes"]]
    else:
        ids = [json.loads(Path(p).read_text())["scene_id"] for p in _scene_files(args.scenes)]
    ratios = tuple(float(r) for r in args.ratios.split(","))
    result = split_scenes(ids, ratios, args.seed)
    text = json.dumps(result, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(args.data), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="refground",
                                     description="scene graph grounding toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write synthetic scene files")
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("generate", help="build a dataset from scene files")
    p.add_argument("--scenes", nargs="+", required=True,
                   help="scene json files or directories of them")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--imperfect-ratio", type=float, default=1.0)
    p.add_argument("--statements-per-target", type=int, default=1)
    p.add_argument("--space-targets", action="store_true",
                   help="also describe walkable free spaces")
    p.add_argument("--relation-config", help="toml or json threshold file")
    for name in _THRESHOLD_FLAGS:
        p.add_argument(f"--{name.replace('_', '-')}", type=float, default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="replay a dataset and report metrics")
    p.add_argument("--data", required=True)
    p.add_argument("--parser", choices=("grammar", "external"), default="grammar")
    p.add_argument("--alt", choices=("heuristic", "external-mcqa"), default="heuristic")
    p.add_argument("--out", help="write report json (+ .log.jsonl) here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("split", help="partition scenes into parts")
    p.add_argument("--data", help="dataset directory to take scene ids from")
    p.add_argument("--scenes", nargs="*", default=[],
                   help="scene json files when no dataset is given")
    p.add_argument("--ratios", default="0.8,0.2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("serve", help="serve the grounding API over a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BenchError, SceneError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

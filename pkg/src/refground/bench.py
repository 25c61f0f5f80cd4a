"""Dataset generation, scene splits, and benchmark execution.

A dataset directory is self-contained and immutable once written:

    manifest.json              seed, config, scene/region inventory
    graphs/<scene>/<region>.json   one graph document per region
    statements/<scene>.jsonl   one statement record per line
    summary.json               relation and statement counts

Benchmarks replay the statements through parse, ground, and (for
negatives) alternative suggestion, and reduce the outcomes to a metrics
report.  Everything is keyed off the run seed, so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import asdict, dataclass
from pathlib import Path

from .freespace import FreeSpaceConfig, annotate_free_spaces
from .graph import SceneGraph, build_graph, load_graph, serialize_graph
from .grounding import ScoreWeights, classify_existence, select_alternative
from .language import (GenerationConfig, StatementRecord, SynonymTable,
                       default_synonyms, generate_statements, perturb_statement,
                       record_from_dict, record_to_dict, render_query_text)
from .metrics import MetricsReport, compute_report
from .parsing import ParseError, Parser, build_vocabulary
from .relations import RelationConfig, generate_relations
from .scene import Scene, load_scene
from .seeding import derive_seed

logger = logging.getLogger(__name__)


class BenchError(RuntimeError):
    """Dataset unreadable or generation failed for every scene."""


def _dump_json(path: Path, doc) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def _config_doc(relation_config: RelationConfig, generation_config: GenerationConfig,
                freespace_config: FreeSpaceConfig, imperfect_ratio: float) -> dict:
    rel = asdict(relation_config)
    rel["class_filter"] = sorted(rel["class_filter"])
    gen = asdict(generation_config)
    gen["class_filter"] = sorted(gen["class_filter"])
    fsc = asdict(freespace_config)
    fsc["exempt_classes"] = sorted(fsc["exempt_classes"])
    return {
        "relation": rel,
        "generation": gen,
        "freespace": fsc,
        "imperfect_ratio": imperfect_ratio,
    }


def process_scene(scene: Scene, relation_config: RelationConfig,
                  generation_config: GenerationConfig,
                  freespace_config: FreeSpaceConfig, synonyms: SynonymTable,
                  seed: int, imperfect_ratio: float):
    """Graphs plus verified statements for one scene.

    Returns (graphs by region id, perfect records, imperfect records,
    skipped target ids).  The imperfect quota is floor(ratio * perfect)
    for the scene, filled in record order while perturbations succeed.
    """
    scene = annotate_free_spaces(scene, freespace_config)
    graphs: dict[str, SceneGraph] = {}
    perfect: list[StatementRecord] = []
    skipped: list[str] = []
    all_objects = list(scene.objects.values())
    for region in scene.regions:
        relations = generate_relations(region, all_objects, relation_config)
        graph = build_graph(region, all_objects, list(scene.freespaces.values()),
                            relations, relation_config)
        graphs[region.id] = graph
        result = generate_statements(graph, generation_config, seed, synonyms)
        perfect.extend(result.records)
        skipped.extend(result.skipped)
    quota = int(imperfect_ratio * len(perfect))
    imperfect: list[StatementRecord] = []
    for record in perfect:
        if len(imperfect) >= quota:
            break
        twin = perturb_statement(record, graphs[record.region_id], seed,
                                 synonyms, generation_config)
        if twin is not None:
            imperfect.append(twin)
    return graphs, perfect, imperfect, skipped


def generate_dataset(scene_paths, out_dir: str | Path, seed: int = 0,
                     imperfect_ratio: float = 1.0,
                     relation_config: RelationConfig | None = None,
                     generation_config: GenerationConfig | None = None,
                     freespace_config: FreeSpaceConfig | None = None,
                     synonyms: SynonymTable | None = None) -> dict:
    """Run the full pipeline over scene files and write a dataset directory.

    Scenes that fail to process are logged and skipped; if every scene
    fails, BenchError is raised.  Returns the summary document.
    """
    if imperfect_ratio < 0:
        raise ValueError("imperfect_ratio must be non-negative")
    relation_config = relation_config or RelationConfig()
    generation_config = generation_config or GenerationConfig()
    freespace_config = freespace_config or FreeSpaceConfig()
    synonyms = synonyms or default_synonyms()
    out = Path(out_dir)

    scenes: list[Scene] = []
    for path in sorted(Path(p) for p in scene_paths):
        try:
            scene = load_scene(path)
        except Exception as exc:
            logger.error("skipping scene %s: %s", path, exc)
            continue
        scenes.append(scene)
    ids = [s.id for s in scenes]
    if len(set(ids)) != len(ids):
        raise BenchError("duplicate scene ids across inputs")
    if not scenes:
        raise BenchError("no scene could be loaded")
    scenes.sort(key=lambda s: s.id)

    manifest_scenes = []
    relation_counts: dict[str, int] = {}
    per_scene: dict[str, dict] = {}
    totals = {"perfect": 0, "imperfect": 0, "skipped_targets": 0}
    processed = 0
    for scene in scenes:
        try:
            graphs, perfect, imperfect, skipped = process_scene(
                scene, relation_config, generation_config, freespace_config,
                synonyms, seed, imperfect_ratio)
        except Exception as exc:
            logger.error("skipping scene %s: %s", scene.id, exc)
            continue
        processed += 1
        graph_dir = out / "graphs" / scene.id
        graph_dir.mkdir(parents=True, exist_ok=True)
        for rid in sorted(graphs):
            (graph_dir / f"{rid}.json").write_text(serialize_graph(graphs[rid]))
            for edge in graphs[rid].edges:
                relation_counts[edge.type.value] = relation_counts.get(edge.type.value, 0) + 1
        lines = [json.dumps(record_to_dict(r), sort_keys=True, separators=(",", ":"))
                 for r in (*perfect, *imperfect)]
        stmt_path = out / "statements" / f"{scene.id}.jsonl"
        stmt_path.parent.mkdir(parents=True, exist_ok=True)
        stmt_path.write_text("".join(line + "\n" for line in lines))
        manifest_scenes.append({
            "scene_id": scene.id,
            "source": scene.source,
            "regions": sorted(graphs),
        })
        per_scene[scene.id] = {
            "perfect": len(perfect),
            "imperfect": len(imperfect),
            "skipped_targets": len(skipped),
            "regions": len(graphs),
        }
        totals["perfect"] += len(perfect)
        totals["imperfect"] += len(imperfect)
        totals["skipped_targets"] += len(skipped)
    if processed == 0:
        raise BenchError("every scene failed to process")

    manifest = {
        "seed": seed,
        "config": _config_doc(relation_config, generation_config,
                              freespace_config, imperfect_ratio),
        "scenes": manifest_scenes,
    }
    summary = {
        "relation_counts": dict(sorted(relation_counts.items())),
        "statements": totals,
        "per_scene": per_scene,
    }
    _dump_json(out / "manifest.json", manifest)
    _dump_json(out / "summary.json", summary)
    return summary


def load_dataset(data_dir: str | Path):
    """Manifest, graphs keyed by (scene, region), and records keyed by scene."""
    data = Path(data_dir)
    manifest_path = data / "manifest.json"
    if not manifest_path.exists():
        raise BenchError(f"no manifest.json under {data}")
    manifest = json.loads(manifest_path.read_text())
    graphs: dict[tuple[str, str], SceneGraph] = {}
    records: dict[str, list[StatementRecord]] = {}
    for entry in manifest["scenes"]:
        sid = entry["scene_id"]
        for rid in entry["regions"]:
            graphs[(sid, rid)] = load_graph(data / "graphs" / sid / f"{rid}.json")
        records[sid] = []
        stmt_path = data / "statements" / f"{sid}.jsonl"
        for line in stmt_path.read_text().splitlines():
            if line.strip():
                records[sid].append(record_from_dict(json.loads(line)))
    return manifest, graphs, records


def run_bench(data_dir: str | Path, parser_mode: str = "grammar",
              alt_mode: str = "heuristic", weights: ScoreWeights | None = None,
              synonyms: SynonymTable | None = None):
    """Parse, ground, and score every statement in a dataset.

    Returns (MetricsReport, per-statement rows).  parser_mode "external"
    sends text to the configured endpoint instead of the grammar parser;
    grounding and metrics are identical either way.
    """
    if parser_mode not in ("grammar", "external"):
        raise ValueError(f"unknown parser mode {parser_mode!r}")
    weights = weights or ScoreWeights()
    synonyms = synonyms or default_synonyms()
    manifest, graphs, records_by_scene = load_dataset(data_dir)

    labels = {n.label for g in graphs.values() for n in g.nodes.values()}
    grammar = Parser(synonyms, build_vocabulary(extra_labels=labels))
    external = None
    if parser_mode == "external":
        from .external import ExternalParserClient
        external = ExternalParserClient.from_env()
        if external is None:
            raise BenchError("parser mode 'external' needs a configured endpoint")

    tp = fn = tn = fp = parsed_correct = total = parse_failures = 0
    alt_scores: list[float] = []
    rows: list[dict] = []
    for sid in sorted(records_by_scene):
        for record in records_by_scene[sid]:
            graph = graphs[(sid, record.region_id)]
            total += 1
            query = None
            if external is not None:
                from .external import ExternalServiceError
                try:
                    query = external.parse(record.text)
                except ExternalServiceError as exc:
                    logger.warning("external parse failed (%s); falling back", exc)
            if query is None:
                try:
                    query = grammar.parse(record.text).query
                except ParseError:
                    query = None
            parse_ok = query is not None
            if not parse_ok:
                parse_failures += 1
            parse_hit = parse_ok and query == record.query
            if parse_hit:
                parsed_correct += 1
            existence = classify_existence(graph, query) if parse_ok else None
            predicted = bool(existence and existence.exists)
            bound = existence.match.bindings[0] if predicted else None
            alternative = None
            if record.is_imperfect:
                if predicted:
                    outcome = "fp"
                    fp += 1
                else:
                    outcome = "tn"
                    tn += 1
                    if parse_ok:
                        choice = select_alternative(
                            graph, query, alt_mode, weights,
                            statement_text=record.text, synonyms=synonyms)
                        if choice is not None:
                            alt_scores.append(choice.score.value)
                            alternative = {
                                "object_id": choice.target_node,
                                "score": choice.score.value,
                                "statement": render_query_text(choice.query, synonyms, 0),
                            }
            else:
                if predicted and bound == record.target_id:
                    outcome = "tp"
                    tp += 1
                else:
                    outcome = "fn"
                    fn += 1
            rows.append({
                "scene_id": sid,
                "region_id": record.region_id,
                "text": record.text,
                "is_imperfect": record.is_imperfect,
                "parse_ok": parse_ok,
                "parse_correct": parse_hit,
                "predicted_exists": predicted,
                "bound_target": bound,
                "expected_target": record.target_id,
                "outcome": outcome,
                "alternative": alternative,
            })
    config = dict(manifest.get("config", {}))
    config.update({"parser_mode": parser_mode, "alt_mode": alt_mode,
                   "weights": asdict(weights)})
    report = compute_report(tp, fn, tn, fp, parsed_correct, total, alt_scores,
                            config, extra_counts={"parse_failures": parse_failures})
    return report, rows


def write_bench_outputs(report: MetricsReport, rows: list[dict], out_path: str | Path) -> None:
    """Report JSON at out_path, per-statement log next to it (.log.jsonl)."""
    from .metrics import report_to_dict

    out = Path(out_path)
    _dump_json(out, report_to_dict(report))
    log_path = out.with_suffix(out.suffix + ".log.jsonl")
    log_path.write_text("".join(
        json.dumps(row, sort_keys=True, separators=(",", ":")) + "\n" for row in rows))


def split_scenes(scene_ids, ratios=(0.8, 0.2), seed: int = 0) -> dict:
    """Deterministic seeded partition of scenes.

    Part sizes use round() on ratio * n (ties to even) for all but the
    last part, which takes the remainder.  Two-part splits are named
    train/validation.
    """
    ids = sorted(scene_ids)
    if len(set(ids)) != len(ids):
        raise ValueError("scene ids must be unique")
    ratios = tuple(float(r) for r in ratios)
    if not ratios or any(r <= 0 for r in ratios):
        raise ValueError("ratios must be positive")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError("ratios must sum to 1")
    if len(ids) < len(ratios):
        raise ValueError(f"cannot split {len(ids)} scenes into {len(ratios)} parts")
    rng = random.Random(derive_seed(seed, "split"))
    shuffled = ids[:]
    rng.shuffle(shuffled)
    counts = [round(r * len(ids)) for r in ratios[:-1]]
    counts.append(len(ids) - sum(counts))
    if min(counts) < 1:
        raise ValueError("ratios leave a part empty")
    names = (["train", "validation"] if len(ratios) == 2
             else [f"part{i + 1}" for i in range(len(ratios))])
    parts = {}
    offset = 0
    for name, count in zip(names, counts):
        parts[name] = sorted(shuffled[offset:offset + count])
        offset += count
    return {"seed": seed, "ratios": list(ratios), "parts": parts}

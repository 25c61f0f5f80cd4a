"""Benchmark metrics for existence classification and parsing.

Rates follow the population convention: tp and fn are fractions of the
perfect (positive) statements, tn and fp fractions of the imperfect
(negative) ones, so tp + fn = 1 and tn + fp = 1 whenever the respective
population is non-empty.  F1 is computed from the raw counts.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass


@dataclass(frozen=True)
class MetricsReport:
    tp: float
    tn: float
    fp: float
    fn: float
    f1: float
    parse_accuracy: float
    avg_alternative_similarity: float | None
    counts: dict
    config_hash: str


def config_digest(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.blake2s(blob, digest_size=8).hexdigest()


def compute_report(tp_count: int, fn_count: int, tn_count: int, fp_count: int,
                   parsed_correct: int, statements_total: int,
                   alternative_scores: list[float], config: dict,
                   extra_counts: dict | None = None) -> MetricsReport:
    positives = tp_count + fn_count
    negatives = tn_count + fp_count
    precision_den = tp_count + fp_count
    precision = tp_count / precision_den if precision_den else 0.0
    recall = tp_count / positives if positives else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    counts = {
        "positives": positives,
        "negatives": negatives,
        "tp": tp_count,
        "fn": fn_count,
        "tn": tn_count,
        "fp": fp_count,
        "parsed_correct": parsed_correct,
        "statements_total": statements_total,
        "alternatives_evaluated": len(alternative_scores),
    }
    if extra_counts:
        counts.update(extra_counts)
    return MetricsReport(
        tp=tp_count / positives if positives else 0.0,
        fn=fn_count / positives if positives else 0.0,
        tn=tn_count / negatives if negatives else 0.0,
        fp=fp_count / negatives if negatives else 0.0,
        f1=f1,
        parse_accuracy=parsed_correct / statements_total if statements_total else 0.0,
        avg_alternative_similarity=(sum(alternative_scores) / len(alternative_scores)
                                    if alternative_scores else None),
        counts=counts,
        config_hash=config_digest(config),
    )


def report_to_dict(report: MetricsReport) -> dict:
    return {
        "tp": report.tp,
        "tn": report.tn,
        "fp": report.fp,
        "fn": report.fn,
        "f1": report.f1,
        "parse_accuracy": report.parse_accuracy,
        "avg_alternative_similarity": report.avg_alternative_similarity,
        "counts": report.counts,
        "config_hash": report.config_hash,
    }


def format_report(report: MetricsReport) -> str:
    """Human-readable table, one metric per row."""
    rows = [
        ("TP rate (positives)", report.tp),
        ("FN rate (positives)", report.fn),
        ("TN rate (negatives)", report.tn),
        ("FP rate (negatives)", report.fp),
        ("F1", report.f1),
        ("Parse accuracy", report.parse_accuracy),
    ]
    lines = ["metric                        value", "-" * 37]
    for name, value in rows:
        lines.append(f"{name:<28}  {value:7.4f}")
    alt = report.avg_alternative_similarity
    lines.append(f"{'Avg alternative similarity':<28}  "
                 + (f"{alt:7.4f}" if alt is not None else "    n/a"))
    c = report.counts
    lines.append("-" * 37)
    lines.append(f"statements: {c['statements_total']}  positives: {c['positives']}"
                 f"  negatives: {c['negatives']}")
    lines.append(f"config hash: {report.config_hash}")
    return "\n".join(lines)

"""Grounding queries in scene graphs and suggesting alternatives.

The optimized search scans nodes for target candidates, then extends
each candidate depth first over anchor slots, checking every relation
edge as soon as its slots are bound.  When nothing matches, single-edit
relaxations of the query are searched instead and their matches are
scored by a weighted share of the original aspects they preserve, so the
caller can offer the closest existing configuration.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

from .bruteforce import node_matches_spec
from .external import ExternalServiceError, McqaClient
from .graph import SceneGraph
from .language import default_synonyms, render_query_text
from .query import (Aspect, Attribute, ObjectSpec, RelationSpec, SubgraphQuery,
                    query_to_dict)
from .relations import RelationType

logger = logging.getLogger(__name__)

# relation types usable as single-anchor substitutes
_BINARY_TYPES = (
    RelationType.ON,
    RelationType.IN,
    RelationType.ABOVE,
    RelationType.BELOW,
    RelationType.NEAR,
    RelationType.CLOSEST,
    RelationType.FARTHEST,
)

MCQA_CHOICE_CAP = 10


@dataclass(frozen=True)
class ScoreWeights:
    class_weight: float = 3.0
    relation_weight: float = 2.0
    attribute_weight: float = 1.0

    def __post_init__(self) -> None:
        if min(self.class_weight, self.relation_weight, self.attribute_weight) <= 0:
            raise ValueError("aspect weights must be positive")

    def weight(self, aspect: Aspect) -> float:
        if aspect.kind == "class":
            return self.class_weight
        if aspect.kind == "relation":
            return self.relation_weight
        return self.attribute_weight


@dataclass(frozen=True)
class SimilarityScore:
    value: float
    numerator: float
    denominator: float
    weights: ScoreWeights


@dataclass(frozen=True)
class MatchResult:
    bindings: dict[int, str]  # query slot -> node id
    complete: bool
    matched_aspects: tuple[Aspect, ...]


@dataclass(frozen=True)
class AlternativeCandidate:
    query: SubgraphQuery
    target_node: str
    matched_aspects: tuple[Aspect, ...]
    score: SimilarityScore


def subgraph_search(graph: SceneGraph, query: SubgraphQuery) -> list[MatchResult]:
    """All complete bindings of the query into the graph.

    Results are ordered by bound target id, then the full binding tuple.
    """
    k = len(query.anchors) + 1
    by_last_slot: dict[int, list[RelationSpec]] = {}
    for rel in query.relations:
        last = max(rel.target_slot, *rel.anchor_slots)
        by_last_slot.setdefault(last, []).append(rel)

    node_ids = sorted(graph.nodes)
    results: list[MatchResult] = []
    all_aspects = query.aspects()

    def relations_hold(binding: list[str], slot: int) -> bool:
        for rel in by_last_slot.get(slot, []):
            anchors = tuple(binding[s] for s in rel.anchor_slots)
            if not graph.has_edge(rel.type, binding[rel.target_slot], anchors):
                return False
        return True

    def extend(binding: list[str]) -> None:
        slot = len(binding)
        if slot == k:
            results.append(MatchResult(dict(enumerate(binding)), True, all_aspects))
            return
        spec = query.spec_at(slot)
        for nid in node_ids:
            if nid in binding:
                continue
            if not node_matches_spec(graph.nodes[nid], spec):
                continue
            binding.append(nid)
            if relations_hold(binding, slot):
                extend(binding)
            binding.pop()

    # candidate scan over target nodes, depth-first extension per candidate
    for nid in node_ids:
        if not node_matches_spec(graph.nodes[nid], query.target):
            continue
        binding = [nid]
        if relations_hold(binding, 0):
            extend(binding)
    results.sort(key=lambda m: tuple(m.bindings[s] for s in range(k)))
    return results


@dataclass(frozen=True)
class ExistenceResult:
    exists: bool
    match: MatchResult | None = None


def classify_existence(graph: SceneGraph, query: SubgraphQuery) -> ExistenceResult:
    """Does the described configuration exist?  First canonical match if so."""
    matches = subgraph_search(graph, query)
    if matches:
        return ExistenceResult(True, matches[0])
    return ExistenceResult(False, None)


def score_aspects(query: SubgraphQuery, matched, weights: ScoreWeights | None = None) -> SimilarityScore:
    """Weighted share of the query's aspects present in the matched set."""
    weights = weights or ScoreWeights()
    aspects = query.aspects()
    if not aspects:
        raise ValueError("cannot score a query with no aspects")
    matched = set(matched)
    numerator = sum(weights.weight(a) for a in aspects if a in matched)
    denominator = sum(weights.weight(a) for a in aspects)
    return SimilarityScore(numerator / denominator, numerator, denominator, weights)


def score_similarity(query: SubgraphQuery, candidate: AlternativeCandidate,
                     weights: ScoreWeights | None = None) -> SimilarityScore:
    return score_aspects(query, candidate.matched_aspects, weights)


def _matched_input_aspects(graph: SceneGraph, query: SubgraphQuery,
                           bindings: dict[int, str]) -> tuple[Aspect, ...]:
    """Which of the original query's aspects the bound nodes satisfy.

    Relaxed queries keep the slot layout of the original, so each input
    aspect can be checked directly against the node bound to its slot.
    The walk mirrors SubgraphQuery.aspects() so identities line up.
    """
    matched = []
    class_aspect = Aspect("class", query.target.class_name, 0)
    if graph.nodes[bindings[0]].matches_class(class_aspect.value):
        matched.append(class_aspect)
    for rel in query.relations:
        anchor_classes = tuple(query.spec_at(s).class_name for s in rel.anchor_slots)
        if rel.type.ternary:
            anchor_classes = tuple(sorted(anchor_classes))
        anchors = tuple(bindings[s] for s in rel.anchor_slots)
        ok = graph.has_edge(rel.type, bindings[rel.target_slot], anchors)
        if ok:
            ok = all(graph.nodes[bindings[s]].matches_class(query.spec_at(s).class_name)
                     for s in rel.anchor_slots)
        if ok:
            matched.append(Aspect("relation", (rel.type.value, *anchor_classes),
                                  rel.target_slot))
    for slot in range(len(query.anchors) + 1):
        node = graph.nodes[bindings[slot]]
        for attr in query.spec_at(slot).attributes:
            if attr.kind == "color":
                ok = attr.value in node.colors
            else:
                ok = attr.value == node.size_label
            if ok:
                matched.append(Aspect(attr.kind, attr.value, slot))
    return tuple(matched)


def _relaxed_queries(graph: SceneGraph, query: SubgraphQuery) -> list[SubgraphQuery]:
    """Single-aspect edits: drop/substitute an attribute, swap the relation
    type, or swap the target or an anchor class for one present in the graph."""
    out: list[SubgraphQuery] = []
    present_classes = sorted({n.label for n in graph.nodes.values()})
    present_colors = sorted({c for n in graph.nodes.values() for c in n.colors})

    def spec_variants(spec: ObjectSpec) -> list[ObjectSpec]:
        variants = []
        for i, attr in enumerate(spec.attributes):
            rest = spec.attributes[:i] + spec.attributes[i + 1:]
            variants.append(ObjectSpec(spec.class_name, rest))  # drop
            if attr.kind == "color":
                subs = [c for c in present_colors if c != attr.value]
            else:
                subs = ["small" if attr.value == "large" else "large"]
            for value in subs:
                variants.append(ObjectSpec(
                    spec.class_name, rest + (Attribute(attr.kind, value),)))
        for cls in present_classes:
            if cls != spec.class_name:
                variants.append(ObjectSpec(cls, spec.attributes))
        return variants

    for variant in spec_variants(query.target):
        out.append(SubgraphQuery(variant, query.anchors, query.relations))
    for i, anchor in enumerate(query.anchors):
        for variant in spec_variants(anchor):
            new_anchors = tuple(variant if j == i else a
                                for j, a in enumerate(query.anchors))
            out.append(SubgraphQuery(query.target, new_anchors, query.relations))
    for i, rel in enumerate(query.relations):
        if rel.type.ternary:
            continue
        for other in _BINARY_TYPES:
            if other is rel.type:
                continue
            new_rel = RelationSpec(other, rel.anchor_slots, rel.target_slot)
            new_rels = tuple(new_rel if j == i else r
                             for j, r in enumerate(query.relations))
            out.append(SubgraphQuery(query.target, query.anchors, new_rels))
    return out


def _candidate_sort_key(candidate: AlternativeCandidate):
    return (-candidate.score.value, candidate.target_node,
            json.dumps(query_to_dict(candidate.query), sort_keys=True))


def partial_matches(graph: SceneGraph, query: SubgraphQuery,
                    weights: ScoreWeights | None = None) -> list[AlternativeCandidate]:
    """Existing configurations one edit away from the query, scored.

    Each relaxed query is searched in full; every distinct (query,
    target) match becomes a candidate carrying the original aspects it
    still satisfies.  Ordered by descending score, then target id.
    """
    weights = weights or ScoreWeights()
    seen: dict[tuple, AlternativeCandidate] = {}
    for relaxed in _relaxed_queries(graph, query):
        for match in subgraph_search(graph, relaxed):
            key = (relaxed, match.bindings[0])
            if key in seen:
                continue
            matched = _matched_input_aspects(graph, query, match.bindings)
            candidate = AlternativeCandidate(
                query=relaxed,
                target_node=match.bindings[0],
                matched_aspects=matched,
                score=score_aspects(query, matched, weights),
            )
            seen[key] = candidate
    return sorted(seen.values(), key=_candidate_sort_key)


def select_alternative(graph: SceneGraph, query: SubgraphQuery, mode: str = "heuristic",
                       weights: ScoreWeights | None = None,
                       mcqa: McqaClient | None = None,
                       statement_text: str | None = None,
                       synonyms=None) -> AlternativeCandidate | None:
    """Best alternative for a query that grounded to nothing.

    Heuristic mode takes the highest-scoring candidate (ties to the
    smaller target id).  external-mcqa renders the top candidates as
    statements and asks the configured endpoint to pick; any failure
    falls back to the heuristic answer with a warning.
    """
    if mode not in ("heuristic", "external-mcqa"):
        raise ValueError(f"unknown alternative-selection mode {mode!r}")
    candidates = partial_matches(graph, query, weights)
    if not candidates:
        return None
    if mode == "external-mcqa":
        synonyms = synonyms or default_synonyms()
        client = mcqa or McqaClient.from_env()
        if client is None:
            logger.warning("no MCQA endpoint configured; using heuristic selection")
        else:
            pool = candidates[:MCQA_CHOICE_CAP]
            statement = statement_text or render_query_text(query, synonyms, 0)
            choices = [render_query_text(c.query, synonyms, 0) for c in pool]
            try:
                return pool[client.choose(statement, choices)]
            except ExternalServiceError as exc:
                logger.warning("MCQA endpoint failed (%s); using heuristic selection", exc)
    return candidates[0]

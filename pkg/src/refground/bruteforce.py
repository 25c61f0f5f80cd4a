"""Exhaustive query matching by flat enumeration of node tuples.

This is the slow, obviously-correct checker: every injective assignment
of query slots to graph nodes is tested in full.  Statement generation
runs it before emitting anything, so uniqueness and zero-match claims
never depend on the optimized search being right.
"""

from __future__ import annotations

import itertools

from .graph import GraphNode, SceneGraph
from .query import ObjectSpec, SubgraphQuery


def node_matches_spec(node: GraphNode, spec: ObjectSpec) -> bool:
    """Class term plus every attribute must hold on the node."""
    if not node.matches_class(spec.class_name):
        return False
    for attr in spec.attributes:
        if attr.kind == "color":
            if attr.value not in node.colors:
                return False
        elif attr.value != node.size_label:
            return False
    return True


def enumerate_matches(graph: SceneGraph, query: SubgraphQuery) -> list[tuple[str, ...]]:
    """All complete slot bindings, as node-id tuples ordered slot 0..k."""
    k = len(query.anchors) + 1
    node_ids = sorted(graph.nodes)
    out = []
    for combo in itertools.permutations(node_ids, k):
        if not all(node_matches_spec(graph.nodes[combo[s]], query.spec_at(s))
                   for s in range(k)):
            continue
        ok = True
        for rel in query.relations:
            anchors = tuple(combo[s] for s in rel.anchor_slots)
            if not graph.has_edge(rel.type, combo[rel.target_slot], anchors):
                ok = False
                break
        if ok:
            out.append(combo)
    return out


def match_targets(graph: SceneGraph, query: SubgraphQuery) -> list[str]:
    """Distinct target nodes with at least one complete binding, sorted."""
    return sorted({combo[0] for combo in enumerate_matches(graph, query)})


def match_count(graph: SceneGraph, query: SubgraphQuery) -> int:
    """How many distinct nodes the statement could refer to."""
    return len(match_targets(graph, query))

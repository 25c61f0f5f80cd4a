"""Per-region scene graphs over object and free-space nodes.

A graph is built once from a region's objects, free spaces, and generated
relations, then treated as immutable: adjacency indices are derived at
construction and queries never mutate.  Free-space nodes get their own
near edges to the region's objects here, since relation generation only
covers object pairs.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from .geometry import OrientedBox
from .relations import Relation, RelationConfig, RelationType, eval_binary
from .scene import FreeSpace, Region, SceneObject

SPACE_CLASS = "space"  # node class used for free spaces in queries and text


class GraphError(ValueError):
    """Graph construction or document validation failure."""


@dataclass(frozen=True)
class GraphNode:
    id: str
    kind: str  # "object" or "space"
    label: str  # open-vocabulary label; "space" for free spaces
    class_nyu40: str
    colors: tuple[str, ...]
    size_label: str | None
    box: OrientedBox

    def matches_class(self, name: str) -> bool:
        """A class term matches either the raw label or the schema class."""
        return name == self.label or name == self.class_nyu40


def _size_labels(objects: list[SceneObject]) -> dict[str, str | None]:
    """Volume relative to the class median: strictly larger, smaller, or neither."""
    by_class: dict[str, list[float]] = {}
    for o in objects:
        by_class.setdefault(o.class_nyu40, []).append(o.box.volume)
    medians = {c: statistics.median(vs) for c, vs in by_class.items()}
    labels: dict[str, str | None] = {}
    for o in objects:
        med = medians[o.class_nyu40]
        if o.box.volume > med:
            labels[o.id] = "large"
        elif o.box.volume < med:
            labels[o.id] = "small"
        else:
            labels[o.id] = None
    return labels


@dataclass(frozen=True)
class SceneGraph:
    region_id: str
    nodes: dict[str, GraphNode]
    edges: tuple[Relation, ...]
    _as_target: dict = field(init=False, compare=False, repr=False, default_factory=dict)
    _as_anchor: dict = field(init=False, compare=False, repr=False, default_factory=dict)
    _edge_keys: set = field(init=False, compare=False, repr=False, default_factory=set)

    def __post_init__(self) -> None:
        for edge in self.edges:
            if edge.region_id != self.region_id:
                raise GraphError(
                    f"edge for region {edge.region_id!r} in graph of {self.region_id!r}"
                )
            for endpoint in (edge.target_id, *edge.anchor_ids):
                if endpoint not in self.nodes:
                    raise GraphError(f"edge references unknown node id {endpoint!r}")
            self._as_target.setdefault(edge.target_id, []).append(edge)
            for aid in edge.anchor_ids:
                self._as_anchor.setdefault(aid, []).append(edge)
            self._edge_keys.add((edge.type, edge.target_id, edge.anchor_ids))

    def node(self, node_id: str) -> GraphNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise GraphError(f"unknown node id {node_id!r}") from None

    def neighbors(self, node_id: str, rtype: RelationType | None = None,
                  direction: str = "as-target") -> list[Relation]:
        """Edges incident to a node, optionally filtered by type.

        direction "as-target" lists edges where the node is the target,
        "as-anchor" those where it appears among the anchors.  Order is
        the canonical edge order.
        """
        self.node(node_id)
        if direction == "as-target":
            edges = self._as_target.get(node_id, [])
        elif direction == "as-anchor":
            edges = self._as_anchor.get(node_id, [])
        else:
            raise ValueError(f"direction must be as-target or as-anchor, got {direction!r}")
        if rtype is not None:
            edges = [e for e in edges if e.type is rtype]
        return sorted(edges, key=lambda e: (e.type.value, e.target_id, e.anchor_ids))

    def has_edge(self, rtype: RelationType, target_id: str, anchor_ids: tuple[str, ...]) -> bool:
        """Edge truth with storage conventions unfolded.

        Below is the stored Above reversed; near holds in either stored
        orientation; between anchors are order-free.
        """
        anchors = tuple(anchor_ids)
        if rtype is RelationType.BELOW:
            return (RelationType.ABOVE, anchors[0], (target_id,)) in self._edge_keys
        if rtype is RelationType.NEAR:
            return ((RelationType.NEAR, target_id, anchors) in self._edge_keys
                    or (RelationType.NEAR, anchors[0], (target_id,)) in self._edge_keys)
        if rtype is RelationType.BETWEEN:
            anchors = tuple(sorted(anchors))
        return (rtype, target_id, anchors) in self._edge_keys

    def object_nodes(self) -> list[GraphNode]:
        return [n for n in sorted(self.nodes.values(), key=lambda n: n.id) if n.kind == "object"]

    def space_nodes(self) -> list[GraphNode]:
        return [n for n in sorted(self.nodes.values(), key=lambda n: n.id) if n.kind == "space"]


def build_graph(region: Region, objects: list[SceneObject], freespaces: list[FreeSpace],
                relations: list[Relation], config: RelationConfig | None = None) -> SceneGraph:
    """Assemble a region's graph from its parts.

    ``objects`` may be the scene-wide list; size labels are computed over
    everything passed so "large" means large for the class in the whole
    scene, while nodes cover only the region's members.
    """
    config = config or RelationConfig()
    sizes = _size_labels(list(objects))
    nodes: dict[str, GraphNode] = {}
    region_objs = sorted((o for o in objects if o.region_id == region.id), key=lambda o: o.id)
    for o in region_objs:
        nodes[o.id] = GraphNode(
            id=o.id, kind="object", label=o.raw_label, class_nyu40=o.class_nyu40,
            colors=o.colors, size_label=sizes[o.id], box=o.box,
        )
    region_spaces = sorted((f for f in freespaces if f.region_id == region.id), key=lambda f: f.id)
    for f in region_spaces:
        nodes[f.id] = GraphNode(
            id=f.id, kind="space", label=SPACE_CLASS, class_nyu40=SPACE_CLASS,
            colors=(), size_label=None, box=f.box,
        )
    edges = list(relations)
    for f in region_spaces:
        for o in region_objs:
            if eval_binary(RelationType.NEAR, f, o, config):
                edges.append(Relation(RelationType.NEAR, f.id, (o.id,), region.id))
    edges = list(dict.fromkeys(edges))
    edges.sort(key=lambda e: (e.type.value, e.target_id, e.anchor_ids))
    return SceneGraph(region_id=region.id, nodes=nodes, edges=tuple(edges))


def graph_to_dict(graph: SceneGraph) -> dict:
    return {
        "region_id": graph.region_id,
        "nodes": [
            {
                "id": n.id,
                "kind": n.kind,
                "label": n.label,
                "class_nyu40": n.class_nyu40,
                "colors": list(n.colors),
                "size_label": n.size_label,
                "box": {"center": list(n.box.center), "size": list(n.box.size), "yaw": n.box.yaw},
            }
            for n in sorted(graph.nodes.values(), key=lambda n: n.id)
        ],
        "edges": [
            {"type": e.type.value, "target": e.target_id, "anchors": list(e.anchor_ids)}
            for e in graph.edges
        ],
    }


def serialize_graph(graph: SceneGraph) -> str:
    """Canonical JSON text; identical graphs serialize to identical bytes."""
    return json.dumps(graph_to_dict(graph), sort_keys=True, separators=(",", ":")) + "\n"


def graph_from_dict(doc: dict) -> SceneGraph:
    if not isinstance(doc, dict):
        raise GraphError("graph document must be a JSON object")
    for key in ("region_id", "nodes", "edges"):
        if key not in doc:
            raise GraphError(f"graph document missing {key!r}")
    nodes: dict[str, GraphNode] = {}
    for ndoc in doc["nodes"]:
        try:
            box = ndoc["box"]
            node = GraphNode(
                id=ndoc["id"], kind=ndoc["kind"], label=ndoc["label"],
                class_nyu40=ndoc["class_nyu40"], colors=tuple(ndoc["colors"]),
                size_label=ndoc.get("size_label"),
                box=OrientedBox(tuple(box["center"]), tuple(box["size"]), box["yaw"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed node record: {exc}") from exc
        if node.kind not in ("object", "space"):
            raise GraphError(f"node {node.id!r} has unknown kind {node.kind!r}")
        if node.id in nodes:
            raise GraphError(f"duplicate node id {node.id!r}")
        nodes[node.id] = node
    edges = []
    for edoc in doc["edges"]:
        try:
            rtype = RelationType(edoc["type"])
            edges.append(Relation(rtype, edoc["target"], tuple(edoc["anchors"]),
                                  doc["region_id"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed edge record: {exc}") from exc
    graph = SceneGraph(region_id=doc["region_id"], nodes=nodes, edges=tuple(edges))
    return graph


def deserialize_graph(text: str) -> SceneGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"graph document is not valid JSON: {exc}") from exc
    return graph_from_dict(doc)


def load_graph(path: str | Path) -> SceneGraph:
    return deserialize_graph(Path(path).read_text())

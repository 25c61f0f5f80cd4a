"""Referential statement generation from scene graphs.

Statements are built from aspect sets: the target class, exactly one
spatial relation, and as few attributes as disambiguation needs.  Every
candidate is checked by exhaustive matching before emission, so a
perfect statement provably refers to exactly one node and an imperfect
one to none.

Rendering is template based.  Relation surface forms come from a
synonym table; a seeded draw picks among them, so identical inputs give
identical text.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .bruteforce import match_count
from .graph import SceneGraph
from .query import Aspect, Attribute, ObjectSpec, QueryError, RelationSpec, SubgraphQuery
from .relations import RelationType
from .scene import ClassMapping, default_class_mapping
from .seeding import derive_seed

# Descriptor preference when several relations could disambiguate: contact
# and containment are the most specific claims, superlatives the fallback
# when plain adjacency fails to single anything out.
_RELATION_PREFERENCE = (
    RelationType.ON,
    RelationType.IN,
    RelationType.ABOVE,
    RelationType.BELOW,
    RelationType.NEAR,
    RelationType.BETWEEN,
    RelationType.CLOSEST,
    RelationType.FARTHEST,
)
_PREF_RANK = {t: i for i, t in enumerate(_RELATION_PREFERENCE)}

# Fixed substitution order for relation-type perturbations.
_BINARY_SWAPS = (
    RelationType.ON,
    RelationType.IN,
    RelationType.ABOVE,
    RelationType.BELOW,
    RelationType.NEAR,
    RelationType.CLOSEST,
    RelationType.FARTHEST,
)


class SynonymTable:
    """Surface forms per relation type; the first form is canonical."""

    def __init__(self, forms: dict[RelationType, tuple[str, ...]]):
        for rtype in RelationType:
            if not forms.get(rtype):
                raise ValueError(f"no surface forms for {rtype.value}")
        self.forms = {t: tuple(forms[t]) for t in RelationType}

    @classmethod
    def load(cls, path: str | Path | None = None) -> "SynonymTable":
        if path is None:
            text = resources.files("refground.data").joinpath("synonyms.json").read_text()
        else:
            text = Path(path).read_text()
        doc = json.loads(text)
        return cls({RelationType(k): tuple(v) for k, v in doc.items()})

    def canonical(self, rtype: RelationType) -> str:
        return self.forms[rtype][0]

    def choose(self, rtype: RelationType, rng: random.Random) -> str:
        return rng.choice(self.forms[rtype])

    def all_forms(self) -> dict[RelationType, tuple[str, ...]]:
        return dict(self.forms)


_DEFAULT_SYNONYMS: SynonymTable | None = None


def default_synonyms() -> SynonymTable:
    global _DEFAULT_SYNONYMS
    if _DEFAULT_SYNONYMS is None:
        _DEFAULT_SYNONYMS = SynonymTable.load()
    return _DEFAULT_SYNONYMS


class ClassGroups:
    """Coarse groupings of schema classes, for "similar class" substitution."""

    def __init__(self, groups: dict[str, tuple[str, ...]], mapping: ClassMapping | None = None):
        self.groups = {name: tuple(classes) for name, classes in groups.items()}
        self.mapping = mapping or default_class_mapping()
        self._group_of: dict[str, str] = {}
        for name, classes in self.groups.items():
            for cls in classes:
                self._group_of[cls] = name

    @classmethod
    def load(cls, path: str | Path | None = None) -> "ClassGroups":
        if path is None:
            text = resources.files("refground.data").joinpath("nyu40_groups.json").read_text()
        else:
            text = Path(path).read_text()
        doc = json.loads(text)
        return cls({k: tuple(v) for k, v in doc.items()})

    def siblings(self, class_name: str) -> tuple[str, ...]:
        """Other labels in the same coarse group, schema and raw alike."""
        schema = class_name if class_name in self._group_of else None
        if schema is None:
            mapped = self.mapping.mapping.get(class_name)
            schema = mapped if mapped in self._group_of else None
        if schema is None:
            return ()
        group = self._group_of[schema]
        members = set(self.groups[group])
        for raw, cls in self.mapping.mapping.items():
            if cls in self.groups[group]:
                members.add(raw)
        members.discard(class_name)
        return tuple(sorted(members))


_DEFAULT_GROUPS: ClassGroups | None = None


def default_class_groups() -> ClassGroups:
    global _DEFAULT_GROUPS
    if _DEFAULT_GROUPS is None:
        _DEFAULT_GROUPS = ClassGroups.load()
    return _DEFAULT_GROUPS


@dataclass(frozen=True)
class GenerationConfig:
    statements_per_target: int = 1
    space_targets: bool = False  # free spaces as statement subjects
    class_filter: frozenset[str] = field(default=frozenset({"wall", "floor", "ceiling"}))
    perturb_retries: int = 20

    def __post_init__(self) -> None:
        object.__setattr__(self, "class_filter", frozenset(self.class_filter))
        if self.statements_per_target < 1:
            raise ValueError("statements_per_target must be at least 1")


@dataclass(frozen=True)
class StatementRecord:
    text: str
    query: SubgraphQuery
    target_id: str | None
    region_id: str
    is_imperfect: bool
    perturbation: str | None
    seed: int

    def __post_init__(self) -> None:
        if self.is_imperfect != (self.target_id is None) or \
                self.is_imperfect != (self.perturbation is not None):
            raise ValueError(
                "imperfect records have a perturbation and no target;"
                " perfect records the reverse"
            )


def record_to_dict(record: StatementRecord) -> dict:
    from .query import query_to_dict

    doc = {
        "text": record.text,
        "region_id": record.region_id,
        "query": query_to_dict(record.query),
        "is_imperfect": record.is_imperfect,
        "seed": record.seed,
    }
    if record.is_imperfect:
        doc["perturbation"] = record.perturbation
    else:
        doc["target_id"] = record.target_id
    return doc


def record_from_dict(doc: dict) -> StatementRecord:
    from .query import query_from_dict

    try:
        return StatementRecord(
            text=doc["text"],
            query=query_from_dict(doc["query"]),
            target_id=doc.get("target_id"),
            region_id=doc["region_id"],
            is_imperfect=doc["is_imperfect"],
            perturbation=doc.get("perturbation"),
            seed=doc["seed"],
        )
    except KeyError as exc:
        raise ValueError(f"statement record missing field {exc}") from exc


def _spec_phrase(spec: ObjectSpec) -> str:
    words = ["the", *[a.value for a in spec.attributes], spec.class_name]
    return " ".join(words)


def render_query_text(query: SubgraphQuery, synonyms: SynonymTable | None = None,
                      seed: int = 0) -> str:
    """Sentence for a single-relation query relating the target to its anchors."""
    synonyms = synonyms or default_synonyms()
    if len(query.relations) != 1:
        raise ValueError("only single-relation queries are renderable")
    rel = query.relations[0]
    if rel.target_slot != 0:
        raise ValueError("renderable queries must relate the target itself")
    rng = random.Random(seed)
    phrase = synonyms.choose(rel.type, rng)
    anchors = [query.spec_at(s) for s in rel.anchor_slots]
    head = _spec_phrase(query.target)
    if rel.type.ternary:
        return f"{head} {phrase} {_spec_phrase(anchors[0])} and {_spec_phrase(anchors[1])}"
    return f"{head} {phrase} {_spec_phrase(anchors[0])}"


def query_from_aspects(aspects) -> SubgraphQuery:
    """Build the query an aspect set denotes (single relation, slot attributes)."""
    classes = [a for a in aspects if a.kind == "class" and a.slot == 0]
    rels = [a for a in aspects if a.kind == "relation"]
    if len(classes) != 1:
        raise QueryError("aspect set needs exactly one target class")
    if len(rels) != 1:
        raise QueryError("aspect set needs exactly one relation")
    rtype = RelationType(rels[0].value[0])
    anchor_classes = rels[0].value[1:]
    attrs_by_slot: dict[int, list[Attribute]] = {}
    for a in aspects:
        if a.kind in ("color", "size"):
            attrs_by_slot.setdefault(a.slot, []).append(Attribute(a.kind, a.value))
    target = ObjectSpec(classes[0].value, tuple(attrs_by_slot.get(0, ())))
    anchors = tuple(
        ObjectSpec(cls, tuple(attrs_by_slot.get(i + 1, ())))
        for i, cls in enumerate(anchor_classes)
    )
    rel = RelationSpec(rtype, tuple(range(1, len(anchors) + 1)))
    return SubgraphQuery(target, anchors, (rel,))


def render_statement(aspects, synonyms: SynonymTable | None = None, seed: int = 0) -> str:
    """Render an aspect set; requires a class aspect (and one relation)."""
    return render_query_text(query_from_aspects(aspects), synonyms, seed)


def _relation_aspect(rtype: RelationType, anchor_classes: tuple[str, ...]) -> Aspect:
    if rtype.ternary:
        anchor_classes = tuple(sorted(anchor_classes))
    return Aspect("relation", (rtype.value, *anchor_classes), 0)


def candidate_descriptors(graph: SceneGraph, target_id: str) -> list[tuple[RelationType, tuple[str, ...]]]:
    """Relation descriptors available for a node, in preference order.

    Stored edges where the node is the target are taken as is; an above
    edge anchored on the node yields a below descriptor, and stored near
    edges work from either end.
    """
    seen: list[tuple[RelationType, tuple[str, ...]]] = []
    for e in graph.neighbors(target_id, direction="as-target"):
        classes = tuple(graph.nodes[a].label for a in e.anchor_ids)
        seen.append((e.type, classes))
    for e in graph.neighbors(target_id, direction="as-anchor"):
        if e.type is RelationType.ABOVE:
            seen.append((RelationType.BELOW, (graph.nodes[e.target_id].label,)))
        elif e.type is RelationType.NEAR:
            seen.append((RelationType.NEAR, (graph.nodes[e.target_id].label,)))
    unique = sorted(set(seen), key=lambda d: (_PREF_RANK[d[0]], d[1]))
    return unique


def select_descriptors(graph: SceneGraph, target_id: str):
    """Smallest aspect set that refers to exactly this node, or None.

    Tried in order of growing attribute count: bare class + relation,
    then one attribute (each color before size), then color + size.
    Within a stage, relation descriptors are tried in preference order.
    Uniqueness is decided by exhaustive matching, so the minimality
    guarantee (dropping any attribute leaves >= 2 referents) holds by
    construction.
    """
    node = graph.node(target_id)
    descriptors = candidate_descriptors(graph, target_id)
    if not descriptors:
        return None
    class_aspect = Aspect("class", node.label, 0)
    attr_combos: list[tuple[Aspect, ...]] = [()]
    color_aspects = [Aspect("color", c, 0) for c in node.colors]
    size_aspect = Aspect("size", node.size_label, 0) if node.size_label else None
    attr_combos += [(c,) for c in color_aspects]
    if size_aspect:
        attr_combos.append((size_aspect,))
        attr_combos += [(c, size_aspect) for c in color_aspects]
    for combo in attr_combos:
        for rtype, anchor_classes in descriptors:
            aspects = (class_aspect, _relation_aspect(rtype, anchor_classes), *combo)
            if match_count(graph, query_from_aspects(aspects)) == 1:
                return aspects
    return None


@dataclass(frozen=True)
class GenerationResult:
    records: tuple[StatementRecord, ...]
    skipped: tuple[str, ...]  # targets with no unambiguous descriptor


def generate_statements(graph: SceneGraph, config: GenerationConfig | None = None,
                        seed: int = 0, synonyms: SynonymTable | None = None) -> GenerationResult:
    """One verified statement set per disambiguable target in the region."""
    config = config or GenerationConfig()
    synonyms = synonyms or default_synonyms()
    nodes = list(graph.object_nodes())
    if config.space_targets:
        nodes += list(graph.space_nodes())
    records: list[StatementRecord] = []
    skipped: list[str] = []
    for node in sorted(nodes, key=lambda n: n.id):
        if node.kind == "object" and node.class_nyu40 in config.class_filter:
            continue
        aspects = select_descriptors(graph, node.id)
        if aspects is None:
            skipped.append(node.id)
            continue
        query = query_from_aspects(aspects)
        for i in range(config.statements_per_target):
            stmt_seed = derive_seed(seed, graph.region_id, node.id, i)
            records.append(StatementRecord(
                text=render_query_text(query, synonyms, stmt_seed),
                query=query,
                target_id=node.id,
                region_id=graph.region_id,
                is_imperfect=False,
                perturbation=None,
                seed=stmt_seed,
            ))
    return GenerationResult(tuple(records), tuple(skipped))


def _region_colors(graph: SceneGraph) -> list[str]:
    present = {c for n in graph.object_nodes() for c in n.colors}
    return sorted(present)


def _candidate_edits(query: SubgraphQuery, graph: SceneGraph, groups: ClassGroups,
                     rng: random.Random) -> list[tuple[str, SubgraphQuery]]:
    """Single-aspect edits in preference order: attributes, relation, classes.

    Attribute edits come first because they leave the most of the
    statement intact, which keeps suggested alternatives close to the
    original phrasing.  Order within a category is a seeded shuffle.
    """
    target = query.target
    rel = query.relations[0]
    edits: list[tuple[str, SubgraphQuery]] = []

    def with_target(spec: ObjectSpec) -> SubgraphQuery:
        return SubgraphQuery(spec, query.anchors, query.relations)

    colors = [a for a in target.attributes if a.kind == "color"]
    color_edits = []
    for attr in colors:
        for other in _region_colors(graph):
            if other == attr.value:
                continue
            new_attrs = tuple(a if a is not attr else Attribute("color", other)
                              for a in target.attributes)
            color_edits.append((
                f"color {attr.value} -> {other}",
                with_target(ObjectSpec(target.class_name, new_attrs)),
            ))
    rng.shuffle(color_edits)
    edits += color_edits

    for attr in target.attributes:
        if attr.kind == "size":
            flipped = "small" if attr.value == "large" else "large"
            new_attrs = tuple(a if a is not attr else Attribute("size", flipped)
                              for a in target.attributes)
            edits.append((
                f"size {attr.value} -> {flipped}",
                with_target(ObjectSpec(target.class_name, new_attrs)),
            ))

    relation_edits = []
    if not rel.type.ternary:
        for other in _BINARY_SWAPS:
            if other is rel.type:
                continue
            relation_edits.append((
                f"relation {rel.type.value} -> {other.value}",
                SubgraphQuery(target, query.anchors,
                              (RelationSpec(other, rel.anchor_slots, rel.target_slot),)),
            ))
    rng.shuffle(relation_edits)
    edits += relation_edits

    anchor_edits = []
    for i, anchor in enumerate(query.anchors):
        for sibling in groups.siblings(anchor.class_name):
            new_anchors = tuple(
                a if j != i else ObjectSpec(sibling, a.attributes)
                for j, a in enumerate(query.anchors)
            )
            anchor_edits.append((
                f"anchor class {anchor.class_name} -> {sibling}",
                SubgraphQuery(target, new_anchors, query.relations),
            ))
    rng.shuffle(anchor_edits)
    edits += anchor_edits

    class_edits = []
    for sibling in groups.siblings(target.class_name):
        class_edits.append((
            f"target class {target.class_name} -> {sibling}",
            with_target(ObjectSpec(sibling, target.attributes)),
        ))
    rng.shuffle(class_edits)
    edits += class_edits
    return edits


def perturb_statement(record: StatementRecord, graph: SceneGraph, seed: int = 0,
                      synonyms: SynonymTable | None = None,
                      config: GenerationConfig | None = None,
                      groups: ClassGroups | None = None) -> StatementRecord | None:
    """Imperfect twin of a perfect statement: one aspect off, zero matches.

    Edits are tried until one yields no referent in the region (checked
    exhaustively) or the retry budget runs out.  The rendered text reuses
    the source statement's synonym seed so phrasing stays parallel.
    """
    if record.is_imperfect:
        raise ValueError("can only perturb a perfect statement")
    synonyms = synonyms or default_synonyms()
    config = config or GenerationConfig()
    groups = groups or default_class_groups()
    rng = random.Random(derive_seed(seed, "perturb", record.region_id,
                                    record.target_id, record.seed))
    edits = _candidate_edits(record.query, graph, groups, rng)
    for description, new_query in edits[:config.perturb_retries]:
        if match_count(graph, new_query) == 0:
            return StatementRecord(
                text=render_query_text(new_query, synonyms, record.seed),
                query=new_query,
                target_id=None,
                region_id=record.region_id,
                is_imperfect=True,
                perturbation=description,
                seed=record.seed,
            )
    return None

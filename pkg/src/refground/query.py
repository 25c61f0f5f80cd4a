"""Structured subgraph queries, the machine form of a referential statement.

A query names a target object spec, any anchor specs, and one or more
typed relations over slots (slot 0 is the target, slot i >= 1 is
``anchors[i - 1]``).  Queries are value objects: hashable, comparable,
and round-trippable through a plain JSON document.

The aspect view flattens a query into its atomic claims (class,
relations, attributes) for similarity scoring.
"""

from __future__ import annotations

from dataclasses import dataclass

from .colors import PALETTE_NAMES
from .relations import RelationType

SIZE_LABELS = ("large", "small")
_ATTR_KIND_RANK = {"size": 0, "color": 1}  # rendering order: "the large red cup"


class QueryError(ValueError):
    """Query document malformed or structurally invalid."""


@dataclass(frozen=True)
class Attribute:
    kind: str  # "color" or "size"
    value: str

    def __post_init__(self) -> None:
        if self.kind == "color":
            if self.value not in PALETTE_NAMES:
                raise QueryError(f"color {self.value!r} is not in the palette")
        elif self.kind == "size":
            if self.value not in SIZE_LABELS:
                raise QueryError(f"size {self.value!r} must be one of {SIZE_LABELS}")
        else:
            raise QueryError(f"unknown attribute kind {self.kind!r}")


@dataclass(frozen=True)
class ObjectSpec:
    class_name: str
    attributes: tuple[Attribute, ...] = ()

    def __post_init__(self) -> None:
        if not self.class_name:
            raise QueryError("object spec needs a class name")
        attrs = tuple(sorted(self.attributes,
                             key=lambda a: (_ATTR_KIND_RANK[a.kind], a.value)))
        object.__setattr__(self, "attributes", attrs)

    def sort_key(self):
        return (self.class_name, tuple((a.kind, a.value) for a in self.attributes))


@dataclass(frozen=True)
class RelationSpec:
    type: RelationType
    anchor_slots: tuple[int, ...]
    target_slot: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "anchor_slots", tuple(self.anchor_slots))
        if len(self.anchor_slots) != self.type.anchor_count:
            raise QueryError(
                f"{self.type.value} takes {self.type.anchor_count} anchor(s),"
                f" got {len(self.anchor_slots)}"
            )
        if self.target_slot in self.anchor_slots:
            raise QueryError("relation target slot cannot also be an anchor slot")


@dataclass(frozen=True)
class SubgraphQuery:
    target: ObjectSpec
    anchors: tuple[ObjectSpec, ...]
    relations: tuple[RelationSpec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "anchors", tuple(self.anchors))
        if not self.relations:
            raise QueryError("a query must contain at least one relation")
        n_slots = len(self.anchors) + 1
        canon = []
        for rel in self.relations:
            for slot in (rel.target_slot, *rel.anchor_slots):
                if not 0 <= slot < n_slots:
                    raise QueryError(f"relation references slot {slot}, have {n_slots}")
            if rel.type.ternary:
                # anchor order carries no meaning; store slots sorted by the
                # referenced spec so equal queries compare equal
                ordered = tuple(sorted(rel.anchor_slots,
                                       key=lambda s: (self.spec_at(s).sort_key(), s)))
                rel = RelationSpec(rel.type, ordered, rel.target_slot)
            canon.append(rel)
        object.__setattr__(self, "relations", tuple(canon))

    def spec_at(self, slot: int) -> ObjectSpec:
        return self.target if slot == 0 else self.anchors[slot - 1]

    def aspects(self) -> tuple["Aspect", ...]:
        """Atomic claims, ordered class, then relations, then attributes."""
        out = [Aspect("class", self.target.class_name, 0)]
        for rel in self.relations:
            anchor_classes = tuple(self.spec_at(s).class_name for s in rel.anchor_slots)
            if rel.type.ternary:
                anchor_classes = tuple(sorted(anchor_classes))
            out.append(Aspect("relation", (rel.type.value, *anchor_classes), rel.target_slot))
        for slot in range(len(self.anchors) + 1):
            for attr in self.spec_at(slot).attributes:
                out.append(Aspect(attr.kind, attr.value, slot))
        return tuple(out)


@dataclass(frozen=True)
class Aspect:
    """One atomic claim of a statement.

    kind "class": value is the class name.  kind "relation": value is
    (relation type, anchor class [, second anchor class]).  kinds
    "color"/"size": value is the attribute word.  slot localizes the
    claim (0 = target).
    """

    kind: str
    value: str | tuple
    slot: int = 0


def _spec_to_dict(spec: ObjectSpec) -> dict:
    return {
        "class": spec.class_name,
        "attributes": [{"kind": a.kind, "value": a.value} for a in spec.attributes],
    }


def query_to_dict(query: SubgraphQuery) -> dict:
    return {
        "target": _spec_to_dict(query.target),
        "anchors": [_spec_to_dict(a) for a in query.anchors],
        "relations": [
            {"type": r.type.value, "target": r.target_slot, "anchors": list(r.anchor_slots)}
            for r in query.relations
        ],
    }


def _spec_from_dict(doc, where: str) -> ObjectSpec:
    if not isinstance(doc, dict) or "class" not in doc:
        raise QueryError(f"{where} must be an object with a 'class' field")
    attrs = []
    for adoc in doc.get("attributes", []):
        if not isinstance(adoc, dict) or "kind" not in adoc or "value" not in adoc:
            raise QueryError(f"{where} attribute needs 'kind' and 'value'")
        attrs.append(Attribute(adoc["kind"], adoc["value"]))
    if not isinstance(doc["class"], str):
        raise QueryError(f"{where} class must be a string")
    return ObjectSpec(doc["class"], tuple(attrs))


def query_from_dict(doc) -> SubgraphQuery:
    if not isinstance(doc, dict):
        raise QueryError("query document must be a JSON object")
    if "target" not in doc or "relations" not in doc:
        raise QueryError("query document needs 'target' and 'relations'")
    target = _spec_from_dict(doc["target"], "target")
    anchors = tuple(_spec_from_dict(a, f"anchors[{i}]")
                    for i, a in enumerate(doc.get("anchors", [])))
    relations = []
    for i, rdoc in enumerate(doc["relations"]):
        if not isinstance(rdoc, dict) or "type" not in rdoc or "anchors" not in rdoc:
            raise QueryError(f"relations[{i}] needs 'type' and 'anchors'")
        try:
            rtype = RelationType(rdoc["type"])
        except ValueError:
            raise QueryError(f"relations[{i}] has unknown type {rdoc['type']!r}") from None
        if not isinstance(rdoc["anchors"], list):
            raise QueryError(f"relations[{i}] anchors must be a list of slots")
        relations.append(RelationSpec(rtype, tuple(rdoc["anchors"]),
                                      rdoc.get("target", 0)))
    return SubgraphQuery(target, anchors, tuple(relations))

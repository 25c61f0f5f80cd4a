"""Spatial relation predicates on yawed boxes, and region-wide generation.

Eight relation types cover vertical order (above/below/on), containment
(in), adjacency (near), corridors (between), and per-class superlatives
(closest/farthest).  Predicates are pure functions of the two or three
boxes plus a threshold config; ``generate_relations`` enumerates every
holding relation in a region, pruning candidate pairs with vectorized
bounds before confirming each survivor with the exact scalar predicate,
so its output matches a naive triple loop while staying fast.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import math

import numpy as np

from .geometry import box_gap, footprint_overlap_area, intersection_volume
from .scene import Region, SceneObject

_EPS = 1e-9  # conservative margin so pruning never drops a boundary case


class RelationType(str, Enum):
    ABOVE = "above"
    BELOW = "below"
    CLOSEST = "closest"
    FARTHEST = "farthest"
    BETWEEN = "between"
    NEAR = "near"
    IN = "in"
    ON = "on"

    @property
    def symmetric(self) -> bool:
        return self is RelationType.NEAR

    @property
    def ternary(self) -> bool:
        return self is RelationType.BETWEEN

    @property
    def inter_class(self) -> bool:
        """Superlatives rank candidates of one class against an anchor of another."""
        return self in (RelationType.CLOSEST, RelationType.FARTHEST)

    @property
    def contact(self) -> bool:
        return self is RelationType.ON

    @property
    def anchor_count(self) -> int:
        return 2 if self.ternary else 1


BINARY_PREDICATES = (
    RelationType.ABOVE,
    RelationType.BELOW,
    RelationType.NEAR,
    RelationType.IN,
    RelationType.ON,
)
SUPERLATIVES = (RelationType.CLOSEST, RelationType.FARTHEST)


@dataclass(frozen=True)
class Relation:
    """One typed edge: target relates to one anchor (two for between)."""

    type: RelationType
    target_id: str
    anchor_ids: tuple[str, ...]
    region_id: str

    def __post_init__(self) -> None:
        anchors = tuple(self.anchor_ids)
        if self.type.ternary:
            anchors = tuple(sorted(anchors))  # anchor order never matters
        object.__setattr__(self, "anchor_ids", anchors)
        if len(anchors) != self.type.anchor_count:
            raise ValueError(
                f"{self.type.value} takes {self.type.anchor_count} anchor(s), got {len(anchors)}"
            )
        if self.target_id in anchors:
            raise ValueError(f"relation target {self.target_id!r} cannot be its own anchor")


@dataclass(frozen=True)
class RelationConfig:
    """Geometric thresholds; all lengths in meters, fractions of target extent."""

    near_gap_max: float = 0.5
    on_zgap_max: float = 0.05
    in_containment_min: float = 0.9
    footprint_overlap_min: float = 0.2
    between_corridor_halfwidth: float = 0.75
    class_filter: frozenset[str] = field(default=frozenset({"wall", "floor", "ceiling"}))

    def __post_init__(self) -> None:
        object.__setattr__(self, "class_filter", frozenset(self.class_filter))
        for name in ("near_gap_max", "on_zgap_max", "between_corridor_halfwidth"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("in_containment_min", "footprint_overlap_min"):
            if not 0 < getattr(self, name) <= 1:
                raise ValueError(f"{name} must be in (0, 1]")


def load_relation_config(path: str | Path) -> RelationConfig:
    """Read threshold overrides from a .toml or .json file."""
    path = Path(path)
    if path.suffix == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        doc = tomllib.loads(path.read_text())
    elif path.suffix == ".json":
        doc = json.loads(path.read_text())
    else:
        raise ValueError(f"unsupported config format {path.suffix!r} (want .toml or .json)")
    known = set(RelationConfig.__dataclass_fields__)
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown relation config keys: {sorted(unknown)}")
    if "class_filter" in doc:
        doc["class_filter"] = frozenset(doc["class_filter"])
    return replace(RelationConfig(), **doc)


def _is_above(target: SceneObject, anchor: SceneObject, config: RelationConfig) -> bool:
    z_gap = target.box.z_min - anchor.box.z_max
    if z_gap < 0:
        return False
    overlap = footprint_overlap_area(target.box, anchor.box)
    return overlap >= config.footprint_overlap_min * target.box.footprint_area


def eval_binary(rtype: RelationType, target, anchor, config: RelationConfig) -> bool:
    """Truth of one binary predicate (above, below, near, in, on).

    Accepts anything with ``id`` and ``box`` fields, so free spaces
    participate the same way objects do.
    """
    if rtype not in (set(BINARY_PREDICATES)):
        raise ValueError(f"{rtype.value} is not a binary predicate")
    if target.id == anchor.id:
        raise ValueError("target and anchor must be distinct")
    if rtype is RelationType.ABOVE:
        return _is_above(target, anchor, config)
    if rtype is RelationType.BELOW:
        return _is_above(anchor, target, config)
    if rtype is RelationType.NEAR:
        return box_gap(target.box, anchor.box) <= config.near_gap_max
    if rtype is RelationType.ON:
        return (
            _is_above(target, anchor, config)
            and target.box.z_min - anchor.box.z_max <= config.on_zgap_max
        )
    # in: enough of the target volume sits inside the anchor box
    contained = intersection_volume(target.box, anchor.box)
    return contained >= config.in_containment_min * target.box.volume


def eval_between(target, anchor1, anchor2, config: RelationConfig) -> bool:
    """Target center inside the corridor joining the two anchor centers.

    The projection onto the segment must fall strictly between the
    endpoints; coincident anchor centers make the corridor degenerate
    and the answer false.
    """
    if len({target.id, anchor1.id, anchor2.id}) != 3:
        raise ValueError("between needs three distinct objects")
    c1 = anchor1.box.center
    c2 = anchor2.box.center
    ct = target.box.center
    d = (c2[0] - c1[0], c2[1] - c1[1], c2[2] - c1[2])
    length_sq = d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
    if length_sq == 0.0:
        return False
    rel = (ct[0] - c1[0], ct[1] - c1[1], ct[2] - c1[2])
    t = (rel[0] * d[0] + rel[1] * d[1] + rel[2] * d[2]) / length_sq
    if not 0.0 < t < 1.0:
        return False
    perp = (rel[0] - t * d[0], rel[1] - t * d[1], rel[2] - t * d[2])
    dist = math.sqrt(perp[0] * perp[0] + perp[1] * perp[1] + perp[2] * perp[2])
    return dist <= config.between_corridor_halfwidth


def compute_superlatives(region: Region, objects: list[SceneObject],
                         config: RelationConfig | None = None) -> list[Relation]:
    """Closest and farthest member of every other class, per anchor object.

    Classes here are the open-vocabulary labels, so "the cup closest to
    the desk" and "the mug closest to the desk" stay distinct claims
    even when both map to one schema class.  Distance ties go to the
    lexicographically smaller object id for both superlatives.
    """
    config = config or RelationConfig()
    objs = sorted((o for o in objects if o.region_id == region.id), key=lambda o: o.id)
    by_class: dict[str, list[SceneObject]] = {}
    for o in objs:
        if o.class_nyu40 in config.class_filter:
            continue  # filtered classes never appear as targets
        by_class.setdefault(o.raw_label, []).append(o)
    rels: list[Relation] = []
    for anchor in objs:
        for cls, members in by_class.items():
            if cls == anchor.raw_label:
                continue
            scored = [(math.dist(m.box.center, anchor.box.center), m.id) for m in members]
            closest_id = min(scored)[1]
            farthest_id = min((-d, oid) for d, oid in scored)[1]
            rels.append(Relation(RelationType.CLOSEST, closest_id, (anchor.id,), region.id))
            rels.append(Relation(RelationType.FARTHEST, farthest_id, (anchor.id,), region.id))
    return rels


def generate_relations(region: Region, objects: list[SceneObject],
                       config: RelationConfig | None = None) -> list[Relation]:
    """Every relation holding among the region's objects, canonically ordered.

    Deduplication rules: near is stored once per unordered pair (target
    is the smaller id, or the only one whose class may be a target);
    the vertical order is stored as above, with below derived by readers;
    between anchors are stored sorted.  Output order is (type, target,
    anchors), so results do not depend on input order or scheduling.
    """
    config = config or RelationConfig()
    objs = sorted((o for o in objects if o.region_id == region.id), key=lambda o: o.id)
    n = len(objs)
    if n < 2:
        return []

    centers = np.array([o.box.center for o in objs], dtype=float)
    zlo = np.array([o.box.z_min for o in objs], dtype=float)
    zhi = np.array([o.box.z_max for o in objs], dtype=float)
    heights = np.array([o.box.size[2] for o in objs], dtype=float)
    rad = np.array([0.5 * math.hypot(o.box.size[0], o.box.size[1]) for o in objs], dtype=float)
    blocked = np.array([o.class_nyu40 in config.class_filter for o in objs], dtype=bool)

    dx = centers[:, None, 0] - centers[None, :, 0]
    dy = centers[:, None, 1] - centers[None, :, 1]
    dxy = np.hypot(dx, dy)
    rsum = rad[:, None] + rad[None, :]
    touch_xy = dxy <= rsum + _EPS  # necessary for any footprint overlap

    rels: list[Relation] = []

    # Vertical order: candidate (target, anchor) pairs need target bottom at
    # or over anchor top plus overlapping footprint circles.
    z_gap = zlo[:, None] - zhi[None, :]
    cand = (z_gap >= -_EPS) & touch_xy & ~blocked[:, None]
    np.fill_diagonal(cand, False)
    for i, j in zip(*np.nonzero(cand)):
        if eval_binary(RelationType.ABOVE, objs[i], objs[j], config):
            rels.append(Relation(RelationType.ABOVE, objs[i].id, (objs[j].id,), region.id))
            if eval_binary(RelationType.ON, objs[i], objs[j], config):
                rels.append(Relation(RelationType.ON, objs[i].id, (objs[j].id,), region.id))

    # Containment: z overlap alone already bounds the attainable volume share.
    z_over = np.minimum(zhi[:, None], zhi[None, :]) - np.maximum(zlo[:, None], zlo[None, :])
    cand = (z_over + _EPS >= config.in_containment_min * heights[:, None]) & touch_xy
    cand &= ~blocked[:, None]
    np.fill_diagonal(cand, False)
    for i, j in zip(*np.nonzero(cand)):
        if eval_binary(RelationType.IN, objs[i], objs[j], config):
            rels.append(Relation(RelationType.IN, objs[i].id, (objs[j].id,), region.id))

    # Adjacency: circumradius bound on the planar gap plus the exact z gap
    # lower-bounds the surface gap.
    xy_gap_lb = np.maximum(dxy - rsum, 0.0)
    z_sep = np.maximum(np.maximum(zlo[:, None], zlo[None, :])
                       - np.minimum(zhi[:, None], zhi[None, :]), 0.0)
    gap_lb = np.hypot(xy_gap_lb, z_sep)
    for i in range(n):
        for j in range(i + 1, n):
            if gap_lb[i, j] > config.near_gap_max + _EPS:
                continue
            if blocked[i] and blocked[j]:
                continue
            if not eval_binary(RelationType.NEAR, objs[i], objs[j], config):
                continue
            t, a = (j, i) if blocked[i] else (i, j)
            rels.append(Relation(RelationType.NEAR, objs[t].id, (objs[a].id,), region.id))

    # Corridors: for each anchor pair, test all targets at once, then let the
    # scalar predicate decide the survivors.
    hw = config.between_corridor_halfwidth
    idx = np.arange(n)
    for a1 in range(n):
        for a2 in range(a1 + 1, n):
            d = centers[a2] - centers[a1]
            length_sq = float(d @ d)
            if length_sq == 0.0:
                continue
            rel_c = centers - centers[a1]
            t = rel_c @ d / length_sq
            perp = rel_c - t[:, None] * d
            perp_sq = np.einsum("ij,ij->i", perp, perp)
            cand = (t > -_EPS) & (t < 1 + _EPS) & (perp_sq <= (hw + _EPS) ** 2)
            cand &= ~blocked & (idx != a1) & (idx != a2)
            for k in np.nonzero(cand)[0]:
                if eval_between(objs[k], objs[a1], objs[a2], config):
                    rels.append(Relation(
                        RelationType.BETWEEN, objs[k].id,
                        (objs[a1].id, objs[a2].id), region.id,
                    ))

    rels.extend(compute_superlatives(region, objs, config))
    rels.sort(key=lambda r: (r.type.value, r.target_id, r.anchor_ids))
    return rels

"""Scene data model: objects, regions, free spaces, and scene-file I/O.

Scene interchange is a JSON document:

    {
      "scene_id": "...", "source": "...",
      "regions": [
        {"region_id": "...", "label": "...",
         "bounds": {"min": [x, y, z], "max": [x, y, z]}}
      ],
      "objects": [
        {"object_id": "...", "raw_label": "...", "class_nyu40": "...",
         "region_id": "...",
         "box": {"center": [x, y, z], "size": [dx, dy, dz], "yaw": r},
         "colors": ["red", ...]}
      ]
    }

Lengths are meters, yaw is radians.  ``class_nyu40`` and ``colors`` are
optional on input: a missing class is filled through the shipped label
mapping, colors may be annotated later from point data.  Scenes are
immutable once loaded; annotation steps return new Scene values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .colors import PALETTE_NAMES
from .geometry import OrientedBox

CENTER_IN_BOUNDS_TOLERANCE = 0.5  # meters


class SceneError(ValueError):
    """Scene document malformed or violating referential integrity."""


@dataclass(frozen=True)
class ClassMapping:
    """Label schema: fixed class list plus raw-label lookup table."""

    classes: tuple[str, ...]
    mapping: dict[str, str]
    catch_all: str

    def __post_init__(self) -> None:
        for raw, cls in self.mapping.items():
            if cls not in self.classes:
                raise SceneError(f"mapping target {cls!r} for {raw!r} is not a schema class")
        if self.catch_all not in self.classes:
            raise SceneError(f"catch-all {self.catch_all!r} is not a schema class")


def load_class_mapping(path: str | Path | None = None) -> ClassMapping:
    """Load the label-mapping table (the shipped NYU40 table by default)."""
    if path is None:
        text = resources.files("refground.data").joinpath("nyu40_mapping.json").read_text()
    else:
        text = Path(path).read_text()
    doc = json.loads(text)
    return ClassMapping(
        classes=tuple(doc["classes"]),
        mapping=dict(doc["mapping"]),
        catch_all=doc["catch_all"],
    )


_DEFAULT_MAPPING: ClassMapping | None = None


def default_class_mapping() -> ClassMapping:
    global _DEFAULT_MAPPING
    if _DEFAULT_MAPPING is None:
        _DEFAULT_MAPPING = load_class_mapping()
    return _DEFAULT_MAPPING


def map_class(raw_label: str, mapping: ClassMapping | None = None) -> str:
    """Schema class for an open-vocabulary label; unknown labels map to the catch-all."""
    mapping = mapping or default_class_mapping()
    label = raw_label.strip().lower()
    if label in mapping.classes:
        return label
    return mapping.mapping.get(label, mapping.catch_all)


@dataclass(frozen=True)
class Aabb:
    min: tuple[float, float, float]
    max: tuple[float, float, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "min", tuple(float(v) for v in self.min))
        object.__setattr__(self, "max", tuple(float(v) for v in self.max))

    def contains_xyz(self, p: tuple[float, float, float], tol: float = 0.0) -> bool:
        return all(self.min[i] - tol <= p[i] <= self.max[i] + tol for i in range(3))


@dataclass(frozen=True)
class SceneObject:
    id: str
    raw_label: str
    class_nyu40: str
    box: OrientedBox
    colors: tuple[str, ...]
    region_id: str


@dataclass(frozen=True)
class Region:
    id: str
    label: str
    bounds: Aabb
    object_ids: tuple[str, ...] = ()
    freespace_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class FreeSpace:
    """Horizontally traversable sub-region, fitted with an oriented box.

    ``cells`` are (row, col) grid coordinates at ``cell_size`` resolution,
    anchored at ``origin`` (the region's min x/y corner).
    """

    id: str
    region_id: str
    cells: tuple[tuple[int, int], ...]
    cell_size: float
    origin: tuple[float, float]
    box: OrientedBox
    area: float


@dataclass(frozen=True)
class Scene:
    id: str
    source: str
    regions: tuple[Region, ...]
    objects: dict[str, SceneObject] = field(default_factory=dict)
    freespaces: dict[str, FreeSpace] = field(default_factory=dict)

    def region(self, region_id: str) -> Region:
        for r in self.regions:
            if r.id == region_id:
                return r
        raise SceneError(f"unknown region id {region_id!r}")

    def region_objects(self, region_id: str) -> list[SceneObject]:
        region = self.region(region_id)
        return [self.objects[oid] for oid in region.object_ids]

    def region_freespaces(self, region_id: str) -> list[FreeSpace]:
        region = self.region(region_id)
        return [self.freespaces[fid] for fid in region.freespace_ids]


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise SceneError(f"missing required field {key!r} in {where}")
    return doc[key]


def scene_from_dict(doc: dict, mapping: ClassMapping | None = None) -> Scene:
    mapping = mapping or default_class_mapping()
    if not isinstance(doc, dict):
        raise SceneError("scene document must be a JSON object")
    scene_id = _require(doc, "scene_id", "scene")
    source = doc.get("source", "unknown")

    regions: list[Region] = []
    seen_regions: set[str] = set()
    for i, rdoc in enumerate(_require(doc, "regions", "scene")):
        rid = _require(rdoc, "region_id", f"regions[{i}]")
        if rid in seen_regions:
            raise SceneError(f"duplicate region id {rid!r}")
        seen_regions.add(rid)
        bounds_doc = _require(rdoc, "bounds", f"region {rid!r}")
        bounds = Aabb(tuple(_require(bounds_doc, "min", f"region {rid!r} bounds")),
                      tuple(_require(bounds_doc, "max", f"region {rid!r} bounds")))
        regions.append(Region(id=rid, label=rdoc.get("label", "room"), bounds=bounds))

    objects: dict[str, SceneObject] = {}
    region_members: dict[str, list[str]] = {r.id: [] for r in regions}
    for i, odoc in enumerate(_require(doc, "objects", "scene")):
        oid = _require(odoc, "object_id", f"objects[{i}]")
        if oid in objects:
            raise SceneError(f"duplicate object id {oid!r}")
        raw_label = _require(odoc, "raw_label", f"object {oid!r}")
        region_id = _require(odoc, "region_id", f"object {oid!r}")
        if region_id not in region_members:
            raise SceneError(f"object {oid!r} references unknown region {region_id!r}")
        box_doc = _require(odoc, "box", f"object {oid!r}")
        try:
            box = OrientedBox(
                center=tuple(_require(box_doc, "center", f"object {oid!r} box")),
                size=tuple(_require(box_doc, "size", f"object {oid!r} box")),
                yaw=float(box_doc.get("yaw", 0.0)),
            )
        except ValueError as exc:
            raise SceneError(f"object {oid!r}: {exc}") from exc
        cls = odoc.get("class_nyu40") or map_class(raw_label, mapping)
        if cls not in mapping.classes:
            raise SceneError(f"object {oid!r}: {cls!r} is not a schema class")
        colors = tuple(odoc.get("colors", ()))
        for color in colors:
            if color not in PALETTE_NAMES:
                raise SceneError(f"object {oid!r}: color {color!r} not in the palette")
        region = next(r for r in regions if r.id == region_id)
        if not region.bounds.contains_xyz(box.center, tol=CENTER_IN_BOUNDS_TOLERANCE):
            raise SceneError(
                f"object {oid!r} center {box.center} lies outside region {region_id!r} bounds"
            )
        objects[oid] = SceneObject(
            id=oid, raw_label=raw_label.strip().lower(), class_nyu40=cls,
            box=box, colors=colors, region_id=region_id,
        )
        region_members[region_id].append(oid)

    regions = [replace(r, object_ids=tuple(sorted(region_members[r.id]))) for r in regions]
    return Scene(id=scene_id, source=source, regions=tuple(regions), objects=objects)


def load_scene(path: str | Path, mapping: ClassMapping | None = None) -> Scene:
    """Load and fully validate a scene JSON file."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SceneError(f"malformed scene document {path}: {exc}") from exc
    return scene_from_dict(doc, mapping)


def scene_to_dict(scene: Scene) -> dict:
    return {
        "scene_id": scene.id,
        "source": scene.source,
        "regions": [
            {
                "region_id": r.id,
                "label": r.label,
                "bounds": {"min": list(r.bounds.min), "max": list(r.bounds.max)},
            }
            for r in scene.regions
        ],
        "objects": [
            {
                "object_id": o.id,
                "raw_label": o.raw_label,
                "class_nyu40": o.class_nyu40,
                "region_id": o.region_id,
                "box": {
                    "center": list(o.box.center),
                    "size": list(o.box.size),
                    "yaw": o.box.yaw,
                },
                "colors": list(o.colors),
            }
            for o in sorted(scene.objects.values(), key=lambda o: o.id)
        ],
    }


def serialize_scene(scene: Scene) -> str:
    """Canonical JSON text; byte-stable for a given scene."""
    return json.dumps(scene_to_dict(scene), sort_keys=True, separators=(",", ":")) + "\n"


def with_colors(scene: Scene, colors_by_object: dict[str, tuple[str, ...]]) -> Scene:
    """New scene with color annotations applied to the named objects."""
    objects = dict(scene.objects)
    for oid, colors in colors_by_object.items():
        if oid not in objects:
            raise SceneError(f"unknown object id {oid!r}")
        objects[oid] = replace(objects[oid], colors=tuple(colors))
    return replace(scene, objects=objects)

"""Deterministic synthetic indoor scenes for tests and benchmarks.

Each region is a "cross" room: a center column of stacked objects on
the floor midpoint, one object pair mirrored left/right of it, and one
pair mirrored front/back.  The mirror symmetry makes every distance tie
exact, so the first pair member wins all superlative ties and the
second can only be singled out by color.  That guarantees every region
yields both relation-only and attribute-bearing statements, which keeps
benchmark datasets exercising the whole pipeline.

All coordinates sit on a quarter-meter lattice, heights are quarter
multiples (dyadic halves, so stacked z sums are exact and resting
contacts have a zero gap), and pair members share their height, so ties
are exact in float arithmetic rather than approximate.
"""

from __future__ import annotations

import math
import random
from pathlib import Path

from .colors import PALETTE_NAMES
from .scene import Scene, scene_from_dict, serialize_scene
from .seeding import derive_seed

FLOOR_TOP = 0.25
SOURCE = "synthetic:cross:v1"

# label, size, and the stacking of the center column ("floor" rests on the
# floor, "on" on the previous item, "in" shares the previous item's middle)
_TEMPLATES = (
    {
        "label": "living room",
        "x_pair": ("box", (0.4, 0.4, 0.5)),
        "y_pair": ("table", ((1.5, 1.0, 0.75), (1.25, 1.0, 0.75))),
        "center": (("lamp", (0.3, 0.3, 1.25), "floor"),),
        "ax": (0.5, 0.75),
        "ay": (0.75, 1.0),
    },
    {
        "label": "bedroom",
        "x_pair": ("pillow", (0.4, 0.3, 0.25)),
        "y_pair": ("nightstand", ((0.5, 0.5, 0.5), (0.5, 0.5, 0.5))),
        "center": (("bookshelf", (0.8, 0.4, 1.75), "floor"),
                   ("books", (0.5, 0.25, 0.25), "in")),
        "ax": (0.75,),
        "ay": (0.75,),
    },
    {
        "label": "study",
        "x_pair": ("bag", (0.35, 0.25, 0.5)),
        "y_pair": ("chair", ((0.5, 0.5, 1.0), (0.5, 0.5, 1.0))),
        "center": (("desk", (1.0, 0.6, 0.75), "floor"),
                   ("lamp", (0.25, 0.25, 0.5), "on")),
        "ax": (0.75,),
        "ay": (0.75, 1.0),
    },
)

_YAWS = (0.0, 0.3, math.pi / 4, math.pi / 2)


def _build_region(region_index: int, template_index: int, origin_x: float,
                  rng: random.Random) -> tuple[dict, list[dict], float]:
    """One cross room; returns (region doc, object docs, room width)."""
    tpl = _TEMPLATES[template_index]
    width = rng.choice((7.0, 8.0, 9.0))
    depth = rng.choice((5.5, 6.0, 6.5))
    cx = origin_x + width / 2
    cy = depth / 2
    rid = f"r{region_index}"
    pool = [c for c in PALETTE_NAMES if c != "gray"]
    colors = rng.sample(pool, 4 + len(tpl["center"]))

    counters: dict[str, int] = {}

    def obj(label: str, center, size, color: str, yaw: float = 0.0) -> dict:
        k = counters.get(label, 0)
        counters[label] = k + 1
        return {
            "object_id": f"{label}_{region_index}_{k}",
            "raw_label": label,
            "box": {"center": list(center), "size": list(size), "yaw": yaw},
            "colors": [color],
            "region_id": rid,
        }

    objects = [obj("floor", (cx, cy, FLOOR_TOP / 2), (width, depth, FLOOR_TOP), "gray")]

    ax = rng.choice(tpl["ax"])
    x_label, x_size = tpl["x_pair"]
    zc = FLOOR_TOP + x_size[2] / 2
    objects.append(obj(x_label, (cx - ax, cy, zc), x_size, colors[0]))
    objects.append(obj(x_label, (cx + ax, cy, zc), x_size, colors[1]))

    ay = rng.choice(tpl["ay"])
    y_label, (size_a, size_b) = tpl["y_pair"]
    zc = FLOOR_TOP + size_a[2] / 2  # pair heights are equal so ties hold
    objects.append(obj(y_label, (cx, cy - ay, zc), size_a, colors[2]))
    objects.append(obj(y_label, (cx, cy + ay, zc), size_b, colors[3]))

    top = FLOOR_TOP
    mid = FLOOR_TOP
    for slot, (label, size, mode) in enumerate(tpl["center"]):
        if mode == "in":
            zc = mid
        else:
            zc = top + size[2] / 2
            top = top + size[2]
            mid = zc
        yaw = rng.choice(_YAWS) if size[0] == size[1] else 0.0
        objects.append(obj(label, (cx, cy, zc), size, colors[4 + slot], yaw))

    region = {
        "region_id": rid,
        "label": tpl["label"],
        "bounds": {"min": [origin_x, 0.0, 0.0], "max": [origin_x + width, depth, 3.0]},
    }
    return region, objects, width


def synth_scene(index: int, seed: int = 0) -> Scene:
    """Scene number ``index``; even indices get two rooms, odd ones get one."""
    rng = random.Random(derive_seed(seed, "synth", index))
    n_regions = 2 if index % 2 == 0 else 1
    regions = []
    objects = []
    origin_x = 0.0
    for ri in range(n_regions):
        region, objs, width = _build_region(ri, (index + ri) % len(_TEMPLATES), origin_x, rng)
        regions.append(region)
        objects.extend(objs)
        origin_x += width + 1.0
    doc = {
        "scene_id": f"synth_{index:03d}",
        "source": SOURCE,
        "regions": regions,
        "objects": objects,
    }
    return scene_from_dict(doc)


def synth_scenes(count: int = 10, seed: int = 0) -> list[Scene]:
    return [synth_scene(i, seed) for i in range(count)]


def write_scenes(out_dir: str | Path, count: int = 10, seed: int = 0) -> list[Path]:
    """Scene JSON files scene_000.json .. under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(count):
        scene = synth_scene(i, seed)
        path = out / f"scene_{i:03d}.json"
        path.write_text(serialize_scene(scene))
        paths.append(path)
    return paths

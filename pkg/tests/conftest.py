import math
import random

import pytest

from refground.geometry import OrientedBox
from refground.graph import build_graph
from refground.relations import RelationConfig, generate_relations
from refground.scene import Aabb, Region, SceneObject


def mk_box(cx, cy, cz, sx, sy, sz, yaw=0.0) -> OrientedBox:
    return OrientedBox(center=(cx, cy, cz), size=(sx, sy, sz), yaw=yaw)


def mk_obj(oid, label, box, colors=(), region_id="r0", cls=None) -> SceneObject:
    return SceneObject(id=oid, raw_label=label, class_nyu40=cls or label,
                       box=box, colors=tuple(colors), region_id=region_id)


def mk_region(objects, rid="r0", label="room", pad=2.0) -> Region:
    xs = [o.box.center[0] for o in objects]
    ys = [o.box.center[1] for o in objects]
    zs = [o.box.center[2] for o in objects]
    bounds = Aabb((min(xs) - pad, min(ys) - pad, min(zs) - pad),
                  (max(xs) + pad, max(ys) + pad, max(zs) + pad))
    return Region(id=rid, label=label, bounds=bounds,
                  object_ids=tuple(sorted(o.id for o in objects)))


def graph_of(objects, config=None, freespaces=(), rid="r0"):
    region = mk_region(objects, rid)
    relations = generate_relations(region, objects, config)
    return build_graph(region, objects, list(freespaces), relations, config)


def random_box(rng: random.Random, span=4.0) -> OrientedBox:
    return OrientedBox(
        center=(rng.uniform(-span, span), rng.uniform(-span, span), rng.uniform(0, 2.5)),
        size=(rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0), rng.uniform(0.1, 1.5)),
        yaw=rng.uniform(-math.pi, math.pi),
    )


@pytest.fixture
def relation_config():
    return RelationConfig()


@pytest.fixture
def tiny_objects():
    """Cup on a table, lamp standing near the table, a rug farther away."""
    table = mk_obj("table_0", "table", mk_box(2.0, 2.0, 0.4, 1.2, 0.8, 0.8))
    cup = mk_obj("cup_0", "cup", mk_box(2.0, 2.0, 0.9, 0.1, 0.1, 0.2),
                 colors=("red",), cls="otherprop")
    lamp = mk_obj("lamp_0", "lamp", mk_box(2.9, 2.0, 0.75, 0.3, 0.3, 1.5))
    mat = mk_obj("mat_0", "floor mat", mk_box(5.5, 5.5, 0.01, 1.0, 1.0, 0.02),
                 colors=("blue",))
    return [table, cup, lamp, mat]


@pytest.fixture
def tiny_graph(tiny_objects):
    return graph_of(tiny_objects)


@pytest.fixture(scope="session")
def synth_dataset(tmp_path_factory):
    """Small generated dataset shared by bench, service, and CLI tests."""
    from refground.bench import generate_dataset
    from refground.synth import write_scenes

    root = tmp_path_factory.mktemp("dataset")
    scenes = write_scenes(root / "scenes", count=4, seed=7)
    generate_dataset(scenes, root / "data", seed=7, imperfect_ratio=1.0)
    return root / "data"

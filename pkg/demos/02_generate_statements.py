"""Minimal unambiguous statements, and their deliberately broken twins.

Builds a region graph, emits one verified referential statement per
describable object, then perturbs a few into imperfect statements that
match nothing in the region.  Each statement is shown with the query
it denotes.
"""

from refground.freespace import FreeSpaceConfig, extract_free_space
from refground.graph import build_graph
from refground.language import generate_statements, perturb_statement
from refground.relations import RelationConfig, generate_relations
from refground.synth import synth_scene

scene = synth_scene(0, seed=42)
region = scene.regions[0]
objects = scene.region_objects(region.id)
spaces = extract_free_space(region, objects, FreeSpaceConfig())
relations = generate_relations(region, objects, RelationConfig())
graph = build_graph(region, list(scene.objects.values()), spaces, relations)

result = generate_statements(graph, seed=7)
print(f"{len(result.records)} statements, {len(result.skipped)} targets skipped")
for rec in result.records:
    print(f"\n  \"{rec.text}\"")
    print(f"    target {rec.target_id}")
    for aspect in rec.query.aspects():
        print(f"    aspect {aspect.kind}: {aspect.value}")

print("\nimperfect twins (one aspect off, zero matches in the region):")
for rec in result.records[:3]:
    twin = perturb_statement(rec, graph, seed=11)
    if twin is None:
        print(f"  {rec.target_id}: no zero-match edit found")
        continue
    print(f"  \"{rec.text}\"")
    print(f"    -> \"{twin.text}\"  [{twin.perturbation}]")

"""From an annotated scene to a queryable region graph.

Synthesizes one scene, then walks the full front half of the pipeline
for its first region: free-space extraction, spatial relation
generation, and graph assembly.  Prints what each stage produced.
"""

from refground.freespace import FreeSpaceConfig, extract_free_space
from refground.graph import build_graph
from refground.relations import RelationConfig, generate_relations
from refground.synth import synth_scene

scene = synth_scene(0, seed=42)
print(f"scene {scene.id}: {len(scene.regions)} regions, {len(scene.objects)} objects")

region = scene.regions[0]
objects = scene.region_objects(region.id)
print(f"\nregion {region.id} ({region.label})")
for obj in objects:
    colors = ",".join(obj.colors) or "-"
    print(f"  {obj.id:<14} {obj.class_nyu40:<10} colors={colors}")

spaces = extract_free_space(region, objects, FreeSpaceConfig())
print(f"\nfree space: {len(spaces)} walkable component(s)")
for fs in spaces:
    print(f"  {fs.id}: area {fs.area:.2f} m^2, {len(fs.cells)} cells")

config = RelationConfig()
relations = generate_relations(region, objects, config)
print(f"\nrelations: {len(relations)} stored")
for rel in relations[:12]:
    print(f"  {rel.target_id} {rel.type.value} {' & '.join(rel.anchor_ids)}")
if len(relations) > 12:
    print(f"  ... and {len(relations) - 12} more")

graph = build_graph(region, list(scene.objects.values()), spaces, relations, config)
print(f"\ngraph: {len(graph.nodes)} nodes ({len(graph.object_nodes())} objects, "
      f"{len(graph.space_nodes())} spaces), {len(graph.edges)} edges")
for node in graph.object_nodes():
    size = node.size_label or "-"
    print(f"  {node.id:<14} label={node.label:<10} size={size}")

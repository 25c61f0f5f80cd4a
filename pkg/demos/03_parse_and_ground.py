"""Round trip: statement text -> query -> grounded object, or alternatives.

Parses generated statements back into subgraph queries with the grammar
parser, grounds them by exact search, and for a statement that matches
nothing shows the ranked alternatives with their similarity scores.
"""

from refground.freespace import FreeSpaceConfig, extract_free_space
from refground.graph import build_graph
from refground.grounding import classify_existence, partial_matches, select_alternative
from refground.language import generate_statements, perturb_statement, render_query_text
from refground.parsing import Parser, build_vocabulary
from refground.relations import RelationConfig, generate_relations
from refground.synth import synth_scene

scene = synth_scene(0, seed=42)
region = scene.regions[0]
objects = scene.region_objects(region.id)
spaces = extract_free_space(region, objects, FreeSpaceConfig())
relations = generate_relations(region, objects, RelationConfig())
graph = build_graph(region, list(scene.objects.values()), spaces, relations)

labels = {node.label for node in graph.nodes.values()}
parser = Parser(None, build_vocabulary(extra_labels=labels))

records = generate_statements(graph, seed=7).records
print("perfect statements ground to their targets:")
for rec in records:
    outcome = parser.parse(rec.text)
    verdict = classify_existence(graph, outcome.query)
    bound = verdict.match.bindings[0] if verdict.exists else None
    ok = "ok" if bound == rec.target_id else "MISMATCH"
    print(f"  \"{rec.text}\" -> {bound} [{ok}]")

twin = next(t for t in (perturb_statement(r, graph, seed=11) for r in records)
            if t is not None)
print(f"\nimperfect: \"{twin.text}\"")
outcome = parser.parse(twin.text)
verdict = classify_existence(graph, outcome.query)
print(f"  exists: {verdict.exists}")
print("  alternatives by weighted aspect similarity:")
for cand in partial_matches(graph, outcome.query)[:5]:
    gloss = render_query_text(cand.query, seed=0)
    print(f"    {cand.target_node:<14} score {cand.score.value:.4f}  \"{gloss}\"")
best = select_alternative(graph, outcome.query)
print(f"  heuristic pick: {best.target_node} at {best.score.value:.4f}")

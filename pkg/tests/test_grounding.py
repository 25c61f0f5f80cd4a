import logging
import random

import pytest

from refground.bruteforce import enumerate_matches, match_targets
from refground.external import ExternalServiceError
from refground.grounding import (
    MCQA_CHOICE_CAP,
    AlternativeCandidate,
    ScoreWeights,
    classify_existence,
    partial_matches,
    score_aspects,
    select_alternative,
    subgraph_search,
)
from refground.query import Aspect, Attribute, ObjectSpec, RelationSpec, SubgraphQuery
from refground.relations import RelationType

from conftest import graph_of, mk_box, mk_obj, random_box
from oracles import exhaustive_targets


def on_query(target="cup", anchor="table", attrs=()):
    return SubgraphQuery(
        ObjectSpec(target, tuple(attrs)),
        (ObjectSpec(anchor),),
        (RelationSpec(RelationType.ON, (1,)),),
    )


def test_subgraph_search_finds_binding(tiny_graph):
    matches = subgraph_search(tiny_graph, on_query())
    assert len(matches) == 1
    match = matches[0]
    assert match.complete
    assert match.bindings == {0: "cup_0", 1: "table_0"}
    assert Aspect("class", "cup", 0) in match.matched_aspects


def test_subgraph_search_respects_attributes(tiny_graph):
    assert subgraph_search(tiny_graph, on_query(attrs=(Attribute("color", "red"),)))
    assert not subgraph_search(tiny_graph, on_query(attrs=(Attribute("color", "blue"),)))
    assert not subgraph_search(tiny_graph, on_query(target="lamp"))


def test_subgraph_search_derived_edges(tiny_graph):
    below = SubgraphQuery(
        ObjectSpec("table"), (ObjectSpec("cup"),),
        (RelationSpec(RelationType.BELOW, (1,)),))
    assert [m.bindings[0] for m in subgraph_search(tiny_graph, below)] == ["table_0"]
    near = SubgraphQuery(
        ObjectSpec("table"), (ObjectSpec("lamp"),),
        (RelationSpec(RelationType.NEAR, (1,)),))
    assert [m.bindings[0] for m in subgraph_search(tiny_graph, near)] == ["table_0"]


def test_subgraph_search_injective():
    # two cups stacked: "the cup on the cup" must not bind one node twice
    low = mk_obj("cup_0", "cup", mk_box(0, 0, 0.125, 0.2, 0.2, 0.25))
    high = mk_obj("cup_1", "cup", mk_box(0, 0, 0.375, 0.2, 0.2, 0.25))
    g = graph_of([low, high])
    matches = subgraph_search(g, on_query(target="cup", anchor="cup"))
    assert [m.bindings for m in matches] == [{0: "cup_1", 1: "cup_0"}]


def random_query(g, rng):
    labels = sorted({n.label for n in g.nodes.values()})
    colors = sorted({c for n in g.nodes.values() for c in n.colors})
    if g.edges and rng.random() < 0.6:
        e = rng.choice(g.edges)
        target_label = g.nodes[e.target_id].label
        anchor_labels = [g.nodes[a].label for a in e.anchor_ids]
        rtype = e.type
    else:
        rtype = rng.choice([t for t in RelationType if not t.ternary])
        target_label = rng.choice(labels)
        anchor_labels = [rng.choice(labels)]
        if rng.random() < 0.3:
            rtype = RelationType.BETWEEN
            anchor_labels.append(rng.choice(labels))
    attrs = []
    if colors and rng.random() < 0.4:
        attrs.append(Attribute("color", rng.choice(colors)))
    if rng.random() < 0.2:
        attrs.append(Attribute("size", rng.choice(["large", "small"])))
    return SubgraphQuery(
        ObjectSpec(target_label, tuple(attrs)),
        tuple(ObjectSpec(a) for a in anchor_labels),
        (RelationSpec(rtype, tuple(range(1, len(anchor_labels) + 1))),),
    )


def test_search_agrees_with_exhaustive_oracle():
    rng = random.Random(555)
    labels = ["table", "chair", "lamp", "cup", "shelf", "box"]
    palette = ["red", "blue", "green", "white", "black"]
    for trial in range(30):
        objs = []
        for k in range(rng.randint(3, 8)):
            colors = tuple(rng.sample(palette, rng.randint(0, 2)))
            objs.append(mk_obj(f"{rng.choice(labels)}_{k}", f"{rng.choice(labels)}",
                               random_box(rng, span=4.0), colors=colors))
        g = graph_of(objs)
        for _ in range(8):
            q = random_query(g, rng)
            got = sorted({m.bindings[0] for m in subgraph_search(g, q)})
            assert got == exhaustive_targets(g, q), f"trial {trial}"
            assert got == match_targets(g, q)
            # full binding sets agree with the flat enumeration too
            bindings = {tuple(m.bindings[s] for s in range(len(q.anchors) + 1))
                        for m in subgraph_search(g, q)}
            assert bindings == set(enumerate_matches(g, q))


def test_classify_existence(tiny_graph):
    hit = classify_existence(tiny_graph, on_query())
    assert hit.exists and hit.match.bindings[0] == "cup_0"
    miss = classify_existence(tiny_graph, on_query(target="lamp"))
    assert not miss.exists and miss.match is None


def test_score_weights_validation():
    with pytest.raises(ValueError):
        ScoreWeights(class_weight=0.0)
    w = ScoreWeights()
    assert w.weight(Aspect("class", "cup", 0)) == 3.0
    assert w.weight(Aspect("relation", ("on", "table"), 0)) == 2.0
    assert w.weight(Aspect("color", "red", 0)) == 1.0
    assert w.weight(Aspect("size", "large", 0)) == 1.0


def test_score_aspects_arithmetic():
    q = on_query(attrs=(Attribute("color", "red"),))
    aspects = q.aspects()
    # class + relation matched, color missed: (3 + 2) / (3 + 2 + 1)
    matched = [a for a in aspects if a.kind in ("class", "relation")]
    score = score_aspects(q, matched)
    assert abs(score.value - 5.0 / 6.0) < 1e-12
    assert score.numerator == 5.0 and score.denominator == 6.0
    # two-aspect query, relation missed: 3 / 5
    q2 = on_query()
    score2 = score_aspects(q2, [Aspect("class", "cup", 0)])
    assert abs(score2.value - 0.6) < 1e-12
    # everything matched scores 1, nothing matched scores 0
    assert score_aspects(q, aspects).value == 1.0
    assert score_aspects(q, []).value == 0.0


def test_score_invariant_under_weight_rescale():
    q = on_query(attrs=(Attribute("color", "red"), Attribute("size", "large")))
    matched = [a for a in q.aspects() if a.kind != "size"]
    base = score_aspects(q, matched, ScoreWeights(3, 2, 1))
    scaled = score_aspects(q, matched, ScoreWeights(6, 4, 2))
    assert abs(base.value - scaled.value) < 1e-12
    other = score_aspects(q, matched, ScoreWeights(1, 1, 1))
    assert other.value != base.value


def test_partial_matches_color_relaxation(tiny_graph):
    # no blue cup exists; the red one on the table is one edit away
    q = on_query(attrs=(Attribute("color", "blue"),))
    assert not subgraph_search(tiny_graph, q)
    candidates = partial_matches(tiny_graph, q)
    assert candidates
    best = candidates[0]
    assert best.target_node == "cup_0"
    assert abs(best.score.value - 5.0 / 6.0) < 1e-12
    assert Aspect("color", "blue", 0) not in best.matched_aspects
    scores = [c.score.value for c in candidates]
    assert scores == sorted(scores, reverse=True)


def test_partial_matches_relation_relaxation(tiny_graph):
    # the cup is on the table, not in it
    q = SubgraphQuery(ObjectSpec("cup"), (ObjectSpec("table"),),
                      (RelationSpec(RelationType.IN, (1,)),))
    candidates = partial_matches(tiny_graph, q)
    by_target = {c.target_node: c for c in candidates}
    assert "cup_0" in by_target
    assert abs(by_target["cup_0"].score.value - 0.6) < 1e-12


def test_select_alternative_heuristic(tiny_graph):
    q = on_query(attrs=(Attribute("color", "blue"),))
    alt = select_alternative(tiny_graph, q, mode="heuristic")
    assert alt is not None and alt.target_node == "cup_0"
    with pytest.raises(ValueError, match="mode"):
        select_alternative(tiny_graph, q, mode="psychic")
    # a query nothing resembles yields no alternative
    faraway = SubgraphQuery(
        ObjectSpec("bathtub"), (ObjectSpec("toilet"),),
        (RelationSpec(RelationType.IN, (1,)),))
    assert select_alternative(tiny_graph, faraway) is None


class StubMcqa:
    def __init__(self, pick=None, error=None):
        self.pick = pick
        self.error = error
        self.calls = []

    def choose(self, statement, choices):
        self.calls.append((statement, list(choices)))
        if self.error is not None:
            raise self.error
        return self.pick


def test_select_alternative_mcqa_pick(tiny_graph):
    q = on_query(attrs=(Attribute("color", "blue"),))
    pool = partial_matches(tiny_graph, q)[:MCQA_CHOICE_CAP]
    stub = StubMcqa(pick=len(pool) - 1)
    alt = select_alternative(tiny_graph, q, mode="external-mcqa", mcqa=stub,
                             statement_text="the blue cup on the table")
    assert alt == pool[-1]
    (statement, choices), = stub.calls
    assert statement == "the blue cup on the table"
    assert len(choices) == len(pool)


def test_select_alternative_mcqa_failure_falls_back(tiny_graph, caplog):
    q = on_query(attrs=(Attribute("color", "blue"),))
    stub = StubMcqa(error=ExternalServiceError("boom"))
    with caplog.at_level(logging.WARNING):
        alt = select_alternative(tiny_graph, q, mode="external-mcqa", mcqa=stub)
    assert alt == partial_matches(tiny_graph, q)[0]
    assert any("heuristic" in r.message for r in caplog.records)

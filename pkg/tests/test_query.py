import pytest

from refground.query import (
    Aspect,
    Attribute,
    ObjectSpec,
    QueryError,
    RelationSpec,
    SubgraphQuery,
    query_from_dict,
    query_to_dict,
)
from refground.relations import RelationType


def near_query(target="cup", anchor="table", attrs=()):
    return SubgraphQuery(
        target=ObjectSpec(target, tuple(attrs)),
        anchors=(ObjectSpec(anchor),),
        relations=(RelationSpec(RelationType.NEAR, (1,)),),
    )


def test_attribute_validation():
    Attribute("color", "red")
    Attribute("size", "large")
    with pytest.raises(QueryError):
        Attribute("color", "maroon")
    with pytest.raises(QueryError):
        Attribute("size", "tiny")
    with pytest.raises(QueryError):
        Attribute("weight", "heavy")


def test_object_spec_sorts_attributes():
    spec = ObjectSpec("cup", (Attribute("color", "red"), Attribute("size", "large")))
    assert [a.kind for a in spec.attributes] == ["size", "color"]
    flipped = ObjectSpec("cup", (Attribute("size", "large"), Attribute("color", "red")))
    assert spec == flipped
    with pytest.raises(QueryError):
        ObjectSpec("")


def test_relation_spec_arity():
    RelationSpec(RelationType.BETWEEN, (1, 2))
    with pytest.raises(QueryError):
        RelationSpec(RelationType.BETWEEN, (1,))
    with pytest.raises(QueryError):
        RelationSpec(RelationType.NEAR, (1, 2))
    with pytest.raises(QueryError):
        RelationSpec(RelationType.NEAR, (0,))


def test_query_requires_relation_and_valid_slots():
    with pytest.raises(QueryError, match="relation"):
        SubgraphQuery(ObjectSpec("cup"), (), ())
    with pytest.raises(QueryError, match="slot"):
        SubgraphQuery(ObjectSpec("cup"), (),
                      relations=(RelationSpec(RelationType.NEAR, (1,)),))


def test_between_anchor_slots_canonicalized():
    q1 = SubgraphQuery(
        ObjectSpec("table"),
        (ObjectSpec("chair"), ObjectSpec("bed")),
        (RelationSpec(RelationType.BETWEEN, (1, 2)),),
    )
    q2 = SubgraphQuery(
        ObjectSpec("table"),
        (ObjectSpec("bed"), ObjectSpec("chair")),
        (RelationSpec(RelationType.BETWEEN, (1, 2)),),
    )
    # slots are reordered so the spec sequence, not the slot digits, compares
    a1 = [q1.spec_at(s).class_name for s in q1.relations[0].anchor_slots]
    a2 = [q2.spec_at(s).class_name for s in q2.relations[0].anchor_slots]
    assert a1 == a2 == ["bed", "chair"]


def test_queries_hashable_and_equal():
    assert near_query() == near_query()
    assert hash(near_query()) == hash(near_query())
    assert near_query(attrs=(Attribute("color", "red"),)) != near_query()


def test_aspects_flatten_claims():
    q = SubgraphQuery(
        ObjectSpec("cup", (Attribute("color", "red"),)),
        (ObjectSpec("table", (Attribute("size", "large"),)),),
        (RelationSpec(RelationType.ON, (1,)),),
    )
    aspects = q.aspects()
    assert aspects[0] == Aspect("class", "cup", 0)
    assert aspects[1] == Aspect("relation", ("on", "table"), 0)
    assert Aspect("color", "red", 0) in aspects
    assert Aspect("size", "large", 1) in aspects
    assert len(aspects) == 4


def test_aspects_between_anchor_classes_sorted():
    q = SubgraphQuery(
        ObjectSpec("lamp"),
        (ObjectSpec("sofa"), ObjectSpec("bed")),
        (RelationSpec(RelationType.BETWEEN, (1, 2)),),
    )
    rel_aspects = [a for a in q.aspects() if a.kind == "relation"]
    assert rel_aspects == [Aspect("relation", ("between", "bed", "sofa"), 0)]


def test_dict_round_trip():
    q = SubgraphQuery(
        ObjectSpec("cup", (Attribute("color", "red"),)),
        (ObjectSpec("table"), ObjectSpec("chair")),
        (RelationSpec(RelationType.ON, (1,)),
         RelationSpec(RelationType.NEAR, (2,))),
    )
    doc = query_to_dict(q)
    assert query_from_dict(doc) == q
    assert doc["target"]["class"] == "cup"
    assert doc["relations"][0] == {"type": "on", "target": 0, "anchors": [1]}


def test_query_from_dict_validation():
    with pytest.raises(QueryError):
        query_from_dict("not a dict")
    with pytest.raises(QueryError, match="target"):
        query_from_dict({"relations": []})
    base = query_to_dict(near_query())
    bad = dict(base, relations=[{"type": "orbits", "anchors": [1]}])
    with pytest.raises(QueryError, match="unknown type"):
        query_from_dict(bad)
    bad = dict(base, relations=[{"type": "near", "anchors": 1}])
    with pytest.raises(QueryError, match="list"):
        query_from_dict(bad)
    bad = dict(base, target={"class": 42})
    with pytest.raises(QueryError, match="string"):
        query_from_dict(bad)
    bad = dict(base, target={"class": "cup", "attributes": [{"kind": "color"}]})
    with pytest.raises(QueryError, match="value"):
        query_from_dict(bad)

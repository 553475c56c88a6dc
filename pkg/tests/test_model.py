import json
import random

import pytest
from hypothesis import given, strategies as st

from reebtorus import corpus as cp
from reebtorus.errors import InvariantViolation, SchemaError, UnsupportedSurface
from reebtorus.model import (VertexKind, canonical_code, detect_symmetry, dump_instance,
                             parse_instance, parse_rational, tree_from_document)


def relabel(piece, seed):
    """Same piece with fresh ids and shuffled vertex/edge lists."""
    rng = random.Random(seed)
    vids = {v["id"]: f"n{i}" for i, v in enumerate(rng.sample(piece["vertices"], len(piece["vertices"])))}
    eids = {e["id"]: f"x{i}" for i, e in enumerate(rng.sample(piece["edges"], len(piece["edges"])))}
    out = json.loads(json.dumps(piece))
    for v in out["vertices"]:
        v["id"] = vids[v["id"]]
        if isinstance(v.get("symmetry"), dict):
            s = v["symmetry"]
            s["invariant"] = [eids[e] for e in s["invariant"]]
            s["orbits"] = [[eids[e] for e in o] for o in s["orbits"]]
        if "cyclic_order" in v:
            v["cyclic_order"] = [eids[e] for e in v["cyclic_order"]]
    for e in out["edges"]:
        e["id"], e["from"], e["to"] = eids[e["id"]], vids[e["from"]], vids[e["to"]]
    out["root"] = vids[out["root"]]
    rng.shuffle(out["vertices"])
    rng.shuffle(out["edges"])
    return out


def test_minimal_cylinder():
    inst = cp.instance(cp.piece(cp.bnd(1)), genus=0, boundary=2)
    assert inst.pieces[0].euler_characteristic == 0
    assert inst.warnings == []


@pytest.mark.parametrize("genus, boundary, orientable", [(0, 0, True), (1, 0, True), (2, 1, False)])
def test_unsupported_surfaces(genus, boundary, orientable):
    doc = cp.document(cp.tree_a(), genus=genus, boundary=boundary)
    doc["surface"]["orientable"] = orientable
    with pytest.raises(UnsupportedSurface):
        parse_instance(doc)


def test_sphere_message_names_hypothesis():
    with pytest.raises(UnsupportedSurface, match="2-sphere"):
        parse_instance(cp.document(cp.tree_a(), genus=0, boundary=0))


def test_euler_rejection():
    # two maxima, no saddle: 2 - 0 != 1
    doc = cp.piece(cp.atom(1, cp.ext(2), cp.ext(3), saddles=1))
    doc["vertices"][1]["saddles"] = 0
    with pytest.raises(InvariantViolation):
        tree_from_document(doc)
    doc["vertices"][1]["saddles"] = 2
    with pytest.raises(InvariantViolation) as err:
        tree_from_document(doc)
    assert err.value.invariant == "euler_characteristic"


@given(st.integers(1, 5), st.integers(1, 6))
def test_euler_property(nleaves, saddles):
    doc = cp.piece(cp.atom("1/2", *[cp.ext(i + 1) for i in range(nleaves)], saddles=saddles))
    if nleaves - saddles == 1:
        assert tree_from_document(doc).kind.value == "disk"
    else:
        with pytest.raises(InvariantViolation):
            tree_from_document(doc)


def test_violations_name_ids():
    doc = cp.piece(cp.atom(1, cp.ext(2), cp.ext(3)))
    doc["vertices"][2]["f"] = "0"  # a max below its atom
    with pytest.raises(InvariantViolation) as err:
        tree_from_document(doc)
    assert err.value.invariant == "max_above_neighbor"
    assert "v2" in err.value.ids


def test_orbit_members_must_match():
    doc = cp.piece(cp.atom(1, cp.ext(2), cp.ext(3), symmetry={"m": 2, "orbits": [[0, 1]]}))
    with pytest.raises(InvariantViolation) as err:
        tree_from_document(doc)
    assert err.value.invariant == "orbit_members_isomorphic"


def test_schema_errors():
    base = cp.document(cp.tree_a())
    bad = json.loads(json.dumps(base))
    bad["extra"] = 1
    with pytest.raises(SchemaError):
        parse_instance(bad)
    bad = json.loads(json.dumps(base))
    bad["pieces"][0]["vertices"][0]["colour"] = "red"
    with pytest.raises(SchemaError):
        parse_instance(bad)
    bad = json.loads(json.dumps(base))
    bad["pieces"][0]["vertices"][1]["f"] = 1.5
    with pytest.raises(SchemaError):
        parse_instance(bad)
    with pytest.raises(SchemaError):
        parse_instance("{not json")


@pytest.mark.parametrize("text, value", [("3/2", (3, 2)), ("-4", (-4, 1)), ("6/4", (3, 2)), (7, (7, 1))])
def test_parse_rational(text, value):
    q = parse_rational(text)
    assert (q.numerator, q.denominator) == value


@pytest.mark.parametrize("text", ["1/0", "abc", "1.5", 2.0, True, None])
def test_parse_rational_rejects(text):
    with pytest.raises(SchemaError):
        parse_rational(text)


def test_codes_equal_for_isomorphic_subtrees():
    tree = tree_from_document(cp.small_trees()["z2_wr_z2"])
    top = tree.top
    kids = [w for _, w in tree.children(top)]
    assert canonical_code(tree, kids[0]) == canonical_code(tree, kids[1])


def test_codes_ignore_invariant_order():
    t1 = tree_from_document(cp.piece(cp.atom(1, cp.ext(2), cp.ext(3), symmetry={"m": 1, "invariant": [0, 1]})))
    t2 = tree_from_document(cp.piece(cp.atom(1, cp.ext(2), cp.ext(3), symmetry={"m": 1, "invariant": [1, 0]})))
    assert canonical_code(t1, t1.root) == canonical_code(t2, t2.root)


def test_codes_distinguish_f():
    tree = tree_from_document(cp.tree_b())
    a, b = [w for _, w in tree.children(tree.top)]
    assert canonical_code(tree, a) != canonical_code(tree, b)


@pytest.mark.parametrize("name", sorted(cp.small_trees()))
def test_codes_invariant_under_relabelling(name):
    piece = cp.small_trees()[name]
    t1 = tree_from_document(piece)
    for seed in range(3):
        t2 = tree_from_document(relabel(piece, seed))
        assert canonical_code(t1, t1.root) == canonical_code(t2, t2.root)


def test_detect_symmetry_examples():
    s = detect_symmetry([("e0", "a"), ("e1", "a")])
    assert (s.m, s.invariant, s.orbits) == (2, (), (("e0", "e1"),))
    s = detect_symmetry([("e0", "a"), ("e1", "b")])
    assert (s.m, set(s.invariant), s.orbits) == (1, {"e0", "e1"}, ())
    s = detect_symmetry([(f"c{i}", x) for i, x in enumerate("abab")])
    assert s.m == 2 and s.orbits == (("c0", "c2"), ("c1", "c3"))


@given(st.lists(st.sampled_from("abc"), min_size=1, max_size=9), st.integers(0, 8))
def test_detect_symmetry_rotation_invariant(codes, r):
    items = [(i, c) for i, c in enumerate(codes)]
    r %= len(items)
    s1 = detect_symmetry(items)
    s2 = detect_symmetry(items[r:] + items[:r])
    assert s1.m == s2.m
    assert {frozenset(o) for o in s1.orbits} == {frozenset(o) for o in s2.orbits}
    # maximality: rotating by L/m preserves codes and nothing shorter does
    L, d = len(codes), len(codes) // s1.m
    assert all(codes[i] == codes[(i + d) % L] for i in range(L))
    assert not any(all(codes[i] == codes[(i + e) % L] for i in range(L)) for e in range(1, d))


def test_auto_symmetry_resolved():
    tree = tree_from_document(cp.small_trees()["three_prong"])
    v = tree.vertex(tree.top)
    assert v.kind is VertexKind.ATOM and v.symmetry.m == 3 and v.auto_symmetry


def test_undeclared_defaults_to_trivial():
    tree = tree_from_document(cp.small_trees()["tree_a_undeclared"])
    assert tree.vertex(tree.top).symmetry.m == 1


@pytest.mark.parametrize("name", sorted(cp.small_trees()))
def test_round_trip(name):
    inst = cp.instance(cp.small_trees()[name], genus=2, boundary=1)
    again = parse_instance(dump_instance(inst))
    assert dump_instance(again) == dump_instance(inst)
    assert [canonical_code(t, t.root) for t in again.pieces] == \
           [canonical_code(t, t.root) for t in inst.pieces]


def test_euler_advisory():
    inst = parse_instance(cp.two_piece())
    assert inst.warnings and "advisory" in inst.warnings[0]

import json
import random

import pytest

from gpdkit import formats as F
from gpdkit.certificates import Certificate, canonical_json, digest
from gpdkit.constructions import (BundleAction, FiniteAction, canonical_shift_action,
                                  orbit_indexed_bundle, theta_from_basis)
from gpdkit.errors import FormatError
from gpdkit.groupoid import EquivRelation
from gpdkit.groups import GroupBundle, cyclic_group, symmetric_group
from gpdkit.neumann import NeumannFiber, OddSeqPrefix, distinguish
from gpdkit.suite import generate_suite, random_bundle_action


def assert_round_trip(dump, load, obj):
    text = dump(obj)
    back = load(text)
    assert dump(back) == text
    return back


def test_groupoids_round_trip():
    for name, G in generate_suite(7):
        back = assert_round_trip(F.dump_groupoid, F.load_groupoid, G)
        assert back == G, name


def test_relation_round_trip():
    R = EquivRelation.from_classes(("a", "b", "c"), [("a", "b"), ("c",)])
    assert assert_round_trip(F.dump_relation, F.load_relation, R) == R


def test_bundle_round_trip_with_neumann_fibers():
    B = GroupBundle(("p", "q"), {"p": NeumannFiber(OddSeqPrefix((5, 7))), "q": symmetric_group(3)})
    back = assert_round_trip(F.dump_bundle, F.load_bundle, B)
    assert back.fibers["p"].prefix == OddSeqPrefix((5, 7))


def test_action_round_trip():
    A = FiniteAction.from_function(symmetric_group(3), ("0", "1", "2"), lambda g, x: str(g[int(x)]))
    back = assert_round_trip(F.dump_action, F.load_action, A)
    assert back.act == A.act


def test_action_with_group_file(tmp_path):
    G = cyclic_group(3)
    (tmp_path / "c3.grp").write_text(G.to_text())
    A = FiniteAction.from_function(G, ("0", "1", "2"), lambda g, x: str(g[int(x)]))
    text = F.dump_action(A, group_ref="c3.grp")
    back = F.load_action(text, tmp_path)
    assert back.act == A.act and F.dump_action(back, group_ref="c3.grp") == text


def test_bundle_action_round_trip():
    rng = random.Random(5)
    for _ in range(20):
        D = random_bundle_action(rng)
        back = assert_round_trip(F.dump_bundle_action, F.load_bundle_action, D)
        assert back.relation == D.relation


def test_shift_action_round_trip():
    R = EquivRelation.full(("a", "b", "c"))
    base = GroupBundle(R.units, {u: cyclic_group(k) for u, k in zip(R.units, (2, 3, 2))})
    theta = theta_from_basis(R)
    D = canonical_shift_action(R, orbit_indexed_bundle(R, base, theta), theta)
    assert_round_trip(F.dump_bundle_action, F.load_bundle_action, D)


def test_certificate_round_trip():
    cert = distinguish(OddSeqPrefix((5, 7, 9)), OddSeqPrefix((5, 7, 11)))
    text = cert.to_text()
    assert Certificate.from_text(text) == cert
    assert Certificate.from_text(text).to_text() == text


def test_canonical_json_is_sorted_and_terminated():
    assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}\n'
    assert digest("x\n").startswith("sha256:")


@pytest.mark.parametrize("text", [
    "not json",
    '{"units": ["a"]}',
    json.dumps({"units": ["a"], "arrows": [{"id": 1, "src": "a", "tgt": "a"}], "unit_arrow": {"a": 1},
                "inverse": {"1": 1}, "compose": [[1, 1, 1]]}),
    json.dumps({"units": ["a"], "arrows": [{"id": 0, "src": "a", "tgt": "b"}], "unit_arrow": {"a": 0},
                "inverse": {"0": 0}, "compose": [[0, 0, 0]]}),
])
def test_malformed_groupoid(text):
    with pytest.raises(FormatError):
        F.load_groupoid(text)


def test_invalid_relation_rejected():
    with pytest.raises(FormatError):
        F.load_relation(json.dumps({"units": ["a", "b"], "pairs": [["a", "a"], ["b", "a"]]}))


def test_bad_certificate_text():
    with pytest.raises(FormatError):
        Certificate.from_text("{}")


def test_trivial_bundle_action_format():
    R = EquivRelation.full(("a", "b"))
    D = BundleAction.trivial(R, cyclic_group(2))
    obj = json.loads(F.dump_bundle_action(D))
    assert obj["delta"][0] == {"pair": ["a", "a"], "images": ["(1 2)"]}

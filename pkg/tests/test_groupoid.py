import random

import pytest

from gpdkit.constructions import (BundleAction, FiniteAction, relation_groupoid, semidirect,
                                  transformation_groupoid)
from gpdkit.errors import NotTransitive
from gpdkit.groupoid import (Bisection, EquivRelation, FiniteGroupoid, components, disjoint_union,
                             global_bisection_basis, icc_check, is_ergodic,
                             is_partition_into_global_bisections, isotropy, orbit_relation,
                             relabel_arrows, restrict, transitive_counts_ok, validate)
from gpdkit.groups import cyclic_group, trivial_group
from gpdkit.isocheck import groupoid_isomorphic
from gpdkit.suite import generate_suite, transitive_suite


def full(n, prefix="u"):
    return relation_groupoid(EquivRelation.full(tuple(f"{prefix}{i}" for i in range(n))))


def group_as_groupoid(G, unit="e"):
    return semidirect(BundleAction.trivial(EquivRelation.full((unit,)), G))


def rotation(n):
    pts = tuple(str(i) for i in range(n))
    return FiniteAction.from_function(cyclic_group(n), pts, lambda g, x: str(g[int(x)]))


def corrupt(G, key, value):
    comp = dict(G.compose)
    comp[key] = value
    return FiniteGroupoid(G.units, G.src, G.tgt, G.unit_arrow, G.inverse, comp, G.labels)


class TestValidate:
    def test_transformation_groupoid_valid(self):
        assert validate(transformation_groupoid(rotation(4))).ok

    def test_group_is_groupoid(self):
        assert validate(group_as_groupoid(cyclic_group(2))).ok

    def test_corrupted_entry_reports_witness(self):
        G = full(3)
        key = next(k for k in sorted(G.compose) if not G.is_unit(k[0]) and not G.is_unit(k[1]))
        wrong = next(a for a in range(G.n_arrows) if a != G.compose[key])
        rep = validate(corrupt(G, key, wrong))
        assert not rep.ok
        assert {v.law for v in rep.violations} & {"associativity", "typing", "unit-law", "inverse-law"}
        assert all(v.witness is not None for v in rep.violations)

    def test_every_single_corruption_is_caught(self):
        G = semidirect(BundleAction.trivial(EquivRelation.full(("p", "q")), cyclic_group(2)))
        rng = random.Random(3)
        keys = sorted(G.compose)
        for key in rng.sample(keys, 20):
            for wrong in rng.sample(range(G.n_arrows), 3):
                if wrong != G.compose[key]:
                    assert not validate(corrupt(G, key, wrong)).ok

    def test_report_json(self):
        assert validate(full(2)).to_json() == {"ok": True, "violations": []}


class TestIsotropyAndOrbits:
    def test_full_relation_trivial_isotropy(self):
        assert isotropy(full(3)).is_trivial()

    def test_trivial_action_gives_whole_group(self):
        A = FiniteAction.from_function(cyclic_group(2), ("a", "b"), lambda g, x: x)
        iso = isotropy(transformation_groupoid(A))
        assert iso.order("a") == iso.order("b") == 2

    def test_group_has_diagonal_relation(self):
        R = orbit_relation(group_as_groupoid(cyclic_group(3)))
        assert R.pairs == frozenset({("e", "e")})

    def test_rotation_orbit_is_full(self):
        R = orbit_relation(transformation_groupoid(rotation(4)))
        assert len(R.pairs) == 16 and len(R.classes()) == 1

    def test_two_classes(self):
        G = disjoint_union([full(2, "a"), full(3, "b")])
        assert len(orbit_relation(G).classes()) == 2


class TestComponents:
    def test_transitive_is_own_component(self):
        G = full(3)
        (C,) = components(G)
        assert C == G

    def test_mixed_orbit_sizes(self):
        G = disjoint_union([full(1, "a"), full(2, "b"), full(3, "c")])
        assert sorted(C.n_units for C in components(G)) == [1, 2, 3]

    def test_reassembly_isomorphic_on_suite(self):
        for name, G in generate_suite(5):
            H = disjoint_union(components(G))
            assert groupoid_isomorphic(H, G) is not None, name

    def test_restrict(self):
        G = full(4)
        assert restrict(G, G.units) == G
        assert restrict(G, ["u0", "u1"]).n_arrows == 4
        H = group_as_groupoid(cyclic_group(3))
        assert restrict(H, ["e"]).n_arrows == 3


class TestErgodicAndIcc:
    def test_ergodic(self):
        assert is_ergodic(group_as_groupoid(cyclic_group(2)))
        assert is_ergodic(full(5))
        assert not is_ergodic(disjoint_union([full(1, "a"), full(1, "b")]))

    def test_icc(self):
        assert icc_check(full(4)).icc
        v = icc_check(group_as_groupoid(cyclic_group(2)))
        assert not v.icc
        G = group_as_groupoid(cyclic_group(2))
        assert G.src[v.witness] == G.tgt[v.witness] and not G.is_unit(v.witness)


class TestBisections:
    @pytest.mark.parametrize("G,count", [
        (full(3), 3),
        (semidirect(BundleAction.trivial(EquivRelation.full(("p", "q")), cyclic_group(2))), 4),
        (group_as_groupoid(cyclic_group(5)), 5),
    ])
    def test_count(self, G, count):
        basis = global_bisection_basis(G)
        assert len(basis) == count
        assert is_partition_into_global_bisections(G, basis)

    def test_requires_transitive(self):
        with pytest.raises(NotTransitive):
            global_bisection_basis(disjoint_union([full(1, "a"), full(2, "b")]))

    def test_as_map_is_bijection(self):
        G = full(3)
        for b in global_bisection_basis(G):
            m = b.as_map(G)
            assert sorted(m) == sorted(m.values()) == list(G.units)

    def test_basis_is_reproducible(self):
        G = full(3)
        basis = global_bisection_basis(G)
        assert [sorted(b.arrows) for b in basis] == [sorted(b.arrows) for b in global_bisection_basis(G)]

    def test_non_bisection_detected(self):
        G = full(2)
        out_of_u0 = frozenset(G.arrows_from(0))
        assert not Bisection(out_of_u0).is_bisection(G)

    def test_counts_on_suite(self):
        for name, G in transitive_suite(3, 4):
            assert transitive_counts_ok(G), name


def test_relabel_keeps_structure():
    G = full(3)
    rng = random.Random(0)
    ids = list(range(G.n_arrows))
    rng.shuffle(ids)
    H = relabel_arrows(G, ids)
    assert validate(H).ok
    assert groupoid_isomorphic(G, H) is not None


def test_trivial_group_fiber():
    assert validate(group_as_groupoid(trivial_group())).ok

import itertools
import random

import pytest

from gpdkit import perm as P
from gpdkit.constructions import (BundleAction, FiniteAction, atomic_transformation_model,
                                  canonical_shift_action, coordinate_maps, orbit_indexed_bundle,
                                  relation_groupoid, semidirect, semidirect_presentation,
                                  shift_permutation, theta_from_basis, transformation_groupoid,
                                  transversal, validate_action, verify_isomorphism)
from gpdkit.errors import (ActionLawViolation, CoverageFailure, InvalidAction, NotInjective,
                           NotTransitive)
from gpdkit.groupoid import (EquivRelation, isotropy, orbit_relation, validate)
from gpdkit.groups import (GroupBundle, GroupHom, automorphisms, cyclic_group, direct_product,
                           group_isomorphic, small_groups, symmetric_group, trivial_group)


def units(n):
    return tuple(f"u{i}" for i in range(n))


def on_points(G, pts, fn):
    return FiniteAction.from_function(G, pts, fn)


def swap_action():
    return on_points(cyclic_group(2), ("0", "1"), lambda g, x: str(g[int(x)]))


class TestTransformationGroupoid:
    def test_free_swap_is_relation(self):
        A = swap_action()
        T = transformation_groupoid(A)
        assert T.n_arrows == 4 and isotropy(T).is_trivial()
        R = relation_groupoid(EquivRelation.full(("0", "1")))
        # (x, g) ↦ (g·x, x)
        pairs = R.labels
        f = []
        for a in range(T.n_arrows):
            x, g = T.units[T.src[a]], T.units[T.tgt[a]]
            f.append(pairs.index(f"{g}<-{x}"))
        assert verify_isomorphism(f, T, R)

    def test_trivial_action_on_point(self):
        T = transformation_groupoid(on_points(cyclic_group(2), ("p",), lambda g, x: x))
        assert T.n_units == 1 and T.n_arrows == 2 and validate(T).ok

    def test_rotation_is_free(self):
        T = transformation_groupoid(on_points(cyclic_group(4), tuple("0123"),
                                              lambda g, x: str(g[int(x)])))
        assert T.n_arrows == 16 and isotropy(T).is_trivial()

    def test_isotropy_is_stabilizer(self):
        S3 = symmetric_group(3)
        A = on_points(S3, ("0", "1", "2"), lambda g, x: str(g[int(x)]))
        T = transformation_groupoid(A)
        iso = isotropy(T)
        for x in A.points:
            stab = A.stabilizer(x)
            assert iso.order(x) == len(stab) == 2
            Gx, _ = iso.group(x)
            assert group_isomorphic(Gx, cyclic_group(2)) is not None

    def test_law_violation(self):
        bad = on_points(cyclic_group(2), ("0", "1"), lambda g, x: "0")
        with pytest.raises(ActionLawViolation) as exc:
            transformation_groupoid(bad)
        assert exc.value.witness is not None


class TestRelationGroupoid:
    def test_counts(self):
        assert relation_groupoid(EquivRelation.diagonal(units(4))).n_arrows == 4
        assert relation_groupoid(EquivRelation.full(units(3))).n_arrows == 9
        R = EquivRelation.from_classes(("1", "2", "3"), [("1", "2"), ("3",)])
        G = relation_groupoid(R)
        assert G.n_arrows == 5 and validate(G).ok and isotropy(G).is_trivial()


def twisted(R, G, images):
    """Replace delta on one off-diagonal pair by a different automorphism."""
    D = BundleAction.trivial(R, G)
    delta = dict(D.delta)
    delta[images[0]] = images[1]
    return BundleAction(R, D.bundle, delta)


class TestBundleActions:
    def test_trivial_valid(self):
        assert validate_action(BundleAction.trivial(EquivRelation.full(units(3)), cyclic_group(3))).ok

    def test_cocycle_corruption_has_triple(self):
        R = EquivRelation.full(units(3))
        G = cyclic_group(3)
        neg = next(GroupHom.from_mapping(G, G, m) for m in automorphisms(G)
                   if m[G.generators[0]] != G.generators[0])
        D = BundleAction.trivial(R, G)
        delta = dict(D.delta)
        delta[("u1", "u0")] = neg
        delta[("u0", "u1")] = neg.inverse()
        rep = validate_action(BundleAction(R, D.bundle, delta))
        laws = {v.law for v in rep.violations}
        assert "cocycle" in laws
        assert all(len(v.witness) == 4 for v in rep.violations if v.law == "cocycle")

    def test_one_sided_corruption_breaks_inverse_law(self):
        R = EquivRelation.full(units(2))
        G = cyclic_group(3)
        neg = next(GroupHom.from_mapping(G, G, m) for m in automorphisms(G)
                   if m[G.generators[0]] != G.generators[0])
        rep = validate_action(twisted(R, G, (("u1", "u0"), neg)))
        assert "inverse" in {v.law for v in rep.violations}

    def test_semidirect_rejects_invalid(self):
        R = EquivRelation.full(units(2))
        G = cyclic_group(3)
        neg = next(GroupHom.from_mapping(G, G, m) for m in automorphisms(G)
                   if m[G.generators[0]] != G.generators[0])
        with pytest.raises(InvalidAction):
            semidirect(twisted(R, G, (("u1", "u0"), neg)))


class TestSemidirect:
    def test_diagonal_is_disjoint_groups(self):
        R = EquivRelation.diagonal(("a", "b"))
        B = GroupBundle(("a", "b"), {"a": cyclic_group(2), "b": cyclic_group(3)})
        D = BundleAction(R, B, {("a", "a"): GroupHom.identity_of(B.finite("a")),
                                ("b", "b"): GroupHom.identity_of(B.finite("b"))})
        G = semidirect(D)
        assert G.n_arrows == 5
        assert len(orbit_relation(G).classes()) == 2

    @pytest.mark.parametrize("n,arrows", [(2, 8), (3, 18)])
    def test_counts(self, n, arrows):
        D = BundleAction.trivial(EquivRelation.full(units(n)), cyclic_group(2))
        G = semidirect(D)
        assert G.n_arrows == arrows and validate(G).ok
        assert all(isotropy(G).order(x) == 2 for x in G.units)

    def test_nontrivial_cocycle_valid(self):
        R = EquivRelation.full(units(3))
        G = direct_product([cyclic_group(2)] * 2)
        auts = [GroupHom.from_mapping(G, G, m) for m in automorphisms(G)]
        c = {"u0": GroupHom.identity_of(G), "u1": auts[3], "u2": auts[5]}
        delta = {(y, x): c[x].inverse().then(c[y]) for (y, x) in R.sorted_pairs()}
        D = BundleAction(R, GroupBundle.constant(R.units, G), delta)
        assert validate_action(D).ok
        H = semidirect(D)
        assert validate(H).ok and H.n_arrows == 36

    def test_composition_formula(self):
        # (h,(z,y))∘(g,(y,x)) has group part delta(x,y)(h)·g; on C5 with the
        # order-4 automorphism r ↦ r², delta(x,y) and delta(y,x) differ
        R = EquivRelation.full(units(2))
        G = cyclic_group(5)
        r = G.generators[0]
        sq = GroupHom(G, G, (P.power(r, 2),))
        D = BundleAction.trivial(R, G)
        delta = dict(D.delta)
        delta[("u1", "u0")] = sq
        delta[("u0", "u1")] = sq.inverse()
        H = semidirect(BundleAction(R, D.bundle, delta))
        arrows = [(g, p) for p in R.sorted_pairs() for g in G.elements()]
        idx = {a: i for i, a in enumerate(arrows)}
        a = idx[(r, ("u1", "u0"))]
        b = idx[(r, ("u0", "u1"))]
        # delta(u0, u1)(r) = r³, so b∘a = (r⁴, (u0, u0))
        assert arrows[H.mul(b, a)] == (P.power(r, 4), ("u0", "u0"))
        assert validate(H).ok


class TestOrbitBundle:
    def test_two_units_mixed_fibers(self):
        R = EquivRelation.full(("p", "q"))
        base = GroupBundle(("p", "q"), {"p": cyclic_group(2), "q": cyclic_group(3)})
        theta = [{"p": "p", "q": "q"}, {"p": "q", "q": "p"}]
        H = orbit_indexed_bundle(R, base, theta)
        target = direct_product([cyclic_group(2), cyclic_group(3)])
        for x in "pq":
            assert group_isomorphic(H.fibers[x].group, target) is not None

    def test_singleton(self):
        R = EquivRelation.full(("p",))
        base = GroupBundle(("p",), {"p": symmetric_group(3)})
        H = orbit_indexed_bundle(R, base, [{"p": "p"}])
        assert H.fibers["p"].group.order() == 6

    def test_non_isomorphic_base_gives_isomorphic_fibers(self):
        R = EquivRelation.full(units(3))
        base = GroupBundle(R.units, {"u0": cyclic_group(2), "u1": cyclic_group(3),
                                     "u2": cyclic_group(4)})
        H = orbit_indexed_bundle(R, base, theta_from_basis(R))
        groups = [H.fibers[x].group for x in R.units]
        for A, B in itertools.combinations(groups, 2):
            assert group_isomorphic(A, B) is not None

    def test_coverage_failure(self):
        R = EquivRelation.full(units(3))
        base = GroupBundle.constant(R.units, cyclic_group(2))
        with pytest.raises(CoverageFailure):
            orbit_indexed_bundle(R, base, [{u: u for u in R.units}])

    def test_requires_transitive(self):
        R = EquivRelation.diagonal(units(2))
        with pytest.raises(NotTransitive):
            orbit_indexed_bundle(R, GroupBundle.constant(R.units, cyclic_group(2)),
                                 [{u: u for u in R.units}])


class TestShiftAction:
    def test_swap(self):
        R = EquivRelation.full(("p", "q"))
        theta = [{"p": "p", "q": "q"}, {"p": "q", "q": "p"}]
        phi = coordinate_maps(R, theta)
        assert shift_permutation(phi, "q", "p") == [1, 0]
        assert shift_permutation(phi, "p", "p") == [0, 1]

    def test_diagonal_delta_is_identity(self):
        R = EquivRelation.full(units(3))
        base = GroupBundle(R.units, {u: cyclic_group(k) for u, k in zip(R.units, (2, 3, 5))})
        theta = theta_from_basis(R)
        D = canonical_shift_action(R, orbit_indexed_bundle(R, base, theta), theta)
        for x in R.units:
            d = D.delta[(x, x)]
            assert d.images == d.source.generators
        assert validate_action(D).ok

    def test_not_injective(self):
        R = EquivRelation.full(("p", "q"))
        theta = [{"p": "p", "q": "q"}, {"p": "q", "q": "p"}, {"p": "p", "q": "q"}]
        with pytest.raises(NotInjective):
            coordinate_maps(R, theta)

    def test_cocycle_identity_on_random_theta(self):
        rng = random.Random(11)
        for _ in range(30):
            n = rng.randint(1, 5)
            R = EquivRelation.full(units(n))
            off = len(R.pairs) - n
            order = list(range(off))
            rng.shuffle(order)
            theta = theta_from_basis(R, order)
            phi = coordinate_maps(R, theta)
            for (y, x) in R.pairs:
                sigma = shift_permutation(phi, y, x)
                for k in range(len(theta)):
                    assert theta[sigma[k]][y] == theta[k][x]


class TestAtomicModel:
    def test_two_unit_relation(self):
        G = relation_groupoid(EquivRelation.full(("p", "q")))
        M = atomic_transformation_model(G)
        assert M.action.group.order() == 2 and len(M.action.points) == 2
        assert len(M.phi) == 4 and verify_isomorphism(M.phi, M.model, G)

    def test_three_units_c2(self):
        G = semidirect(BundleAction.trivial(EquivRelation.full(units(3)), cyclic_group(2)))
        M = atomic_transformation_model(G)
        assert M.action.group.order() == 6
        assert group_isomorphic(M.action.group, cyclic_group(6)) is not None
        assert verify_isomorphism(M.phi, M.model, G)

    def test_one_unit_group(self):
        G = semidirect(BundleAction.trivial(EquivRelation.full(("e",)), symmetric_group(3)))
        M = atomic_transformation_model(G)
        assert M.action.points == ("0",)
        assert verify_isomorphism(M.phi, M.model, G)

    def test_phi_preserves_units(self):
        G = semidirect(BundleAction.trivial(EquivRelation.full(units(4)), cyclic_group(2)))
        M = atomic_transformation_model(G)
        for x, e in enumerate(M.model.unit_arrow):
            assert G.is_unit(M.phi[e])

    def test_non_transitive_rejected(self):
        G = relation_groupoid(EquivRelation.diagonal(units(2)))
        with pytest.raises(NotTransitive):
            atomic_transformation_model(G)

    def test_transversal_shape(self):
        G = relation_groupoid(EquivRelation.full(("b", "a", "c")))
        T = transversal(G)
        assert T.base == "a"
        for u, a in T.arrows.items():
            assert G.units[G.src[a]] == "a" and G.units[G.tgt[a]] == u

    def test_semidirect_presentation_round_trip(self):
        for name, K in small_groups(6):
            G = semidirect(BundleAction.trivial(EquivRelation.full(units(2)), K))
            D, arrow_of = semidirect_presentation(G)
            assert validate_action(D).ok
            H = semidirect(D)
            arrows = [(g, p) for p in D.relation.sorted_pairs() for g in D.bundle.finite(p[1]).elements()]
            assert verify_isomorphism([arrow_of[a] for a in arrows], H, G), name


class TestVerifyIsomorphism:
    def test_identity(self):
        G = relation_groupoid(EquivRelation.full(units(3)))
        assert verify_isomorphism(list(range(G.n_arrows)), G, G)

    def test_non_multiplicative_bijection(self):
        # Z/4 as a one-unit groupoid; swapping a generator with the
        # involution keeps units, sources and targets but breaks products
        T = semidirect(BundleAction.trivial(EquivRelation.full(("e",)), cyclic_group(4)))
        elem = {a: P.parse_perm(T.labels[a].split("|")[0], 4) for a in range(T.n_arrows)}
        r = next(a for a in elem if P.order(elem[a]) == 4)
        r2 = next(a for a in elem if P.order(elem[a]) == 2)
        f = list(range(T.n_arrows))
        f[r], f[r2] = r2, r
        v = verify_isomorphism(f, T, T)
        assert not v and v.reason == "multiplication not preserved" and len(v.witness) == 2

    def test_size_mismatch(self):
        A = relation_groupoid(EquivRelation.full(units(2)))
        B = relation_groupoid(EquivRelation.full(units(3)))
        assert not verify_isomorphism(list(range(4)), A, B)


def test_trivial_fibers_give_relation():
    R = EquivRelation.full(units(3))
    G = semidirect(BundleAction.trivial(R, trivial_group()))
    assert isotropy(G).is_trivial() and G.n_arrows == 9

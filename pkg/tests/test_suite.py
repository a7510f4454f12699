import random

from gpdkit import formats as F
from gpdkit.constructions import semidirect
from gpdkit.groupoid import isotropy, orbit_relation, validate
from gpdkit.suite import (SuiteBounds, generate_suite, random_bundle_action,
                          random_transitive_relation, transitive_suite)


def test_seed_reproduces_files():
    a = [(n, F.dump_groupoid(G)) for n, G in generate_suite(1)]
    b = [(n, F.dump_groupoid(G)) for n, G in generate_suite(1)]
    assert a == b
    assert a != [(n, F.dump_groupoid(G)) for n, G in generate_suite(2)]


def test_members_validate():
    for seed in range(4):
        for name, G in generate_suite(seed, SuiteBounds(max_units=4)):
            assert validate(G).ok, name


def test_principal_and_non_principal_per_size():
    members = generate_suite(0, SuiteBounds(max_units=4))
    for n in range(1, 5):
        sized = [G for _, G in members if G.n_units == n]
        kinds = {isotropy(G).is_trivial() for G in sized}
        assert kinds == {True, False}, n


def test_transitive_suite_size_and_validity():
    members = list(transitive_suite(3, 4))
    assert len({name for name, _ in members}) == len(members)
    for name, G in members:
        assert validate(G).ok and len(orbit_relation(G).classes()) == 1, name


def test_random_bundle_actions_are_valid():
    rng = random.Random(11)
    for _ in range(30):
        D = random_bundle_action(rng)
        G = semidirect(D)
        assert validate(G).ok
        assert orbit_relation(G) == D.relation


def test_random_transitive_relation():
    rng = random.Random(0)
    for _ in range(20):
        R = random_transitive_relation(rng)
        assert len(R.classes()) == 1 and 1 <= len(R.units) <= 5

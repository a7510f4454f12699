"""Deterministic corpora of finite groupoids, built only through the
constructions module.

``transitive_suite`` is exhaustive over a size box; ``generate_suite`` draws
a seeded sample mixing transitive and multi-component groupoids.
"""

from dataclasses import dataclass
import itertools
import random

from . import perm as P
from .constructions import (BundleAction, FiniteAction, relation_groupoid, semidirect,
                            transformation_groupoid)
from .groupoid import EquivRelation, disjoint_union, relabel_arrows
from .groups import (FinPermGroup, GroupBundle, GroupHom, automorphisms, small_groups, subgroups)


@dataclass(frozen=True)
class SuiteBounds:
    max_units: int = 3
    max_isotropy: int = 4
    per_size: int = 3
    max_components: int = 3

    def __post_init__(self):
        if self.max_units < 1 or self.max_isotropy < 1 or self.per_size < 2:
            raise ValueError("bounds must be positive and per_size >= 2")


def unit_names(n, prefix="u"):
    return tuple(f"{prefix}{i}" for i in range(n))


def _auto_homs(G):
    return [GroupHom.from_mapping(G, G, m) for m in automorphisms(G)]


def coboundary_action(R, G, twist):
    """Constant bundle G over R with delta(y, x) = twist[y] ∘ twist[x]⁻¹."""
    delta = {(y, x): twist[x].inverse().then(twist[y]) for (y, x) in R.sorted_pairs()}
    return BundleAction(R, GroupBundle.constant(R.units, G), delta)


def _coset_action(K, H, points):
    els = K.elements()
    reps, where = [], {}
    for g in els:
        if g not in where:
            for h in H:
                where[P.compose(g, h)] = len(reps)
            reps.append(g)
    act = {(k, points[i]): points[where[P.compose(k, r)]] for k in els for i, r in enumerate(reps)}
    return FiniteAction(K, tuple(points), act)


def transitive_suite(max_units=4, max_isotropy=4, max_group_order=12):
    """Every transitive groupoid in the box, in several presentations.

    Semidirect products over the full relation with every coboundary twist
    fixing the first unit, plus transformation groupoids of coset actions.
    Yields (name, groupoid).
    """
    cat = [(name, G) for name, G in small_groups(max_isotropy)]
    for n in range(1, max_units + 1):
        R = EquivRelation.full(unit_names(n))
        for gname, G in cat:
            auts = _auto_homs(G)
            for k, tw in enumerate(itertools.product(range(len(auts)), repeat=n - 1)):
                twist = {R.units[0]: GroupHom.identity_of(G)}
                twist.update({u: auts[t] for u, t in zip(R.units[1:], tw)})
                yield f"sd-n{n}-{gname}-t{k}", semidirect(coboundary_action(R, G, twist))
    for kname, K in small_groups(max_group_order):
        order = K.order()
        for si, H in enumerate(subgroups(K)):
            n = order // len(H)
            if len(H) <= max_isotropy and n <= max_units:
                A = _coset_action(K, H, unit_names(n))
                yield f"tg-{kname}-h{si}", transformation_groupoid(A)


def _random_transitive(rng, n, max_isotropy, units):
    cat = small_groups(max_isotropy)
    gname, G = cat[rng.randrange(len(cat))]
    R = EquivRelation.full(units)
    auts = _auto_homs(G)
    twist = {u: rng.choice(auts) for u in units}
    twist[units[0]] = GroupHom.identity_of(G)
    return gname, semidirect(coboundary_action(R, G, twist))


def _shuffle_arrows(rng, G):
    ids = list(range(G.n_arrows))
    rng.shuffle(ids)
    return relabel_arrows(G, ids)


def generate_suite(seed, bounds=SuiteBounds()):
    """Seeded sample: for each unit count, a principal relation groupoid, a
    non-principal semidirect product, then random transitive and
    multi-component members.  Arrow ids are shuffled.  Returns a list of
    (name, groupoid) in a fixed order."""
    rng = random.Random(seed)
    out = []
    for n in range(1, bounds.max_units + 1):
        units = unit_names(n)
        out.append((f"n{n}-principal", _shuffle_arrows(rng, relation_groupoid(EquivRelation.full(units)))))
        cat = [(name, G) for name, G in small_groups(bounds.max_isotropy) if G.order() > 1]
        if cat:
            gname, G = cat[rng.randrange(len(cat))]
            R = EquivRelation.full(units)
            D = BundleAction.trivial(R, G)
            out.append((f"n{n}-{gname}", _shuffle_arrows(rng, semidirect(D))))
        for k in range(bounds.per_size - 2):
            if n > 1 and rng.random() < 0.5:
                parts = _random_partition(rng, n, bounds.max_components)
                comps = []
                tags = []
                for i, m in enumerate(parts):
                    gname, C = _random_transitive(rng, m, bounds.max_isotropy, unit_names(m, f"c{i}u"))
                    comps.append(C)
                    tags.append(f"{m}{gname}")
                out.append((f"n{n}-multi{k}-" + "+".join(tags), _shuffle_arrows(rng, disjoint_union(comps))))
            else:
                gname, C = _random_transitive(rng, n, bounds.max_isotropy, units)
                out.append((f"n{n}-rand{k}-{gname}", _shuffle_arrows(rng, C)))
    return out


def _random_partition(rng, n, max_parts):
    parts = []
    left = n
    while left:
        if len(parts) == max_parts - 1:
            parts.append(left)
            break
        m = rng.randint(1, left)
        parts.append(m)
        left -= m
    return parts


def random_bundle_action(rng, max_units=4, max_order=4):
    """A valid BundleAction with a random partition, per-class isotropy and
    per-unit conjugated presentations of the fibers.

    Each fiber is a conjugate copy of a class representative Γ on a shuffled
    point set; with psi_x: fiber(x) → Γ an isomorphism twisted by a random
    automorphism, delta(y, x) = psi_y⁻¹ ∘ psi_x.
    """
    n = rng.randint(1, max_units)
    units = unit_names(n)
    parts = _random_partition(rng, n, n)
    classes, i = [], 0
    for m in parts:
        classes.append(units[i:i + m])
        i += m
    R = EquivRelation.from_classes(units, classes)
    cat = small_groups(max_order)
    fibers, psi = {}, {}
    for cls in classes:
        _, G = cat[rng.randrange(len(cat))]
        auts = _auto_homs(G)
        for x in cls:
            pi = list(range(G.degree))
            rng.shuffle(pi)
            pi = tuple(pi)
            Gx = FinPermGroup(G.degree, tuple(P.conjugate(pi, g) for g in G.generators))
            back = P.inverse(pi)
            to_rep = GroupHom(Gx, G, tuple(P.conjugate(back, g) for g in Gx.generators))
            fibers[x] = Gx
            psi[x] = to_rep.then(rng.choice(auts))
    delta = {(y, x): psi[x].then(psi[y].inverse()) for (y, x) in R.sorted_pairs()}
    return BundleAction(R, GroupBundle(units, fibers), delta)


def random_transitive_relation(rng, max_units=5):
    """Full relation on 1..max_units units listed in a shuffled order."""
    units = list(unit_names(rng.randint(1, max_units)))
    rng.shuffle(units)
    return EquivRelation.full(tuple(units))

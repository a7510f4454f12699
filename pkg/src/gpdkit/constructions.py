"""Builders for transformation groupoids, relation groupoids, semidirect
products over equivalence relations, orbit-indexed bundles with their shift
action, and the transformation-groupoid model of a transitive groupoid.

Bundle actions follow the convention delta[(y, x)]: fiber(x) → fiber(y).
"""

from dataclasses import dataclass

from . import perm as P
from .errors import (ActionLawViolation, CoverageFailure, InvalidAction, NotInjective,
                     NotTransitive)
from .groupoid import (EquivRelation, ValidationReport, Violation, build_groupoid, is_ergodic,
                       isotropy, matching_decomposition, orbit_relation)
from .groups import (FinPermGroup, GroupBundle, GroupHom, block_offsets, cyclic_group,
                     direct_product)


@dataclass(frozen=True)
class FiniteAction:
    group: FinPermGroup
    points: tuple
    act: dict  # (element, point) -> point

    @classmethod
    def from_function(cls, group, points, fn):
        points = tuple(points)
        return cls(group, points, {(g, x): fn(g, x) for g in group.elements() for x in points})

    def __call__(self, g, x):
        return self.act[(tuple(g), x)]

    def check(self):
        """First violated action law as (law, witness), or None."""
        G = self.group
        els = G.elements()
        pts = set(self.points)
        for g in els:
            for x in self.points:
                if (g, x) not in self.act or self.act[(g, x)] not in pts:
                    return "total", (P.format_perm(g), x)
        e = G.identity()
        for x in self.points:
            if self.act[(e, x)] != x:
                return "identity", (x,)
        # generators × all elements suffice for act(gh, x) = act(g, act(h, x))
        for g in G.generators:
            for h in els:
                gh = P.compose(g, h)
                for x in self.points:
                    if self.act[(gh, x)] != self.act[(g, self.act[(h, x)])]:
                        return "compatibility", (P.format_perm(g), P.format_perm(h), x)
        return None

    def stabilizer(self, x):
        return [g for g in self.group.elements() if self.act[(g, x)] == x]


def transformation_groupoid(A):
    """Arrows (x, g) from x to g·x; (g·x, h)(x, g) = (x, hg)."""
    bad = A.check()
    if bad is not None:
        raise ActionLawViolation(f"action law '{bad[0]}' fails", bad[1])
    els = A.group.elements()
    arrows = [(x, g) for x in A.points for g in els]
    e = A.group.identity()
    act = A.act
    return build_groupoid(
        A.points,
        arrows,
        src=lambda a: a[0],
        tgt=lambda a: act[(a[1], a[0])],
        mul=lambda b, a: (a[0], P.compose(b[1], a[1])),
        inv=lambda a: (act[(a[1], a[0])], P.inverse(a[1])),
        unit_of=lambda x: (x, e),
        label=lambda a: f"{a[0]}|{P.format_perm(a[1])}",
    )


def relation_groupoid(R):
    arrows = R.sorted_pairs()
    return build_groupoid(
        R.units,
        arrows,
        src=lambda p: p[1],
        tgt=lambda p: p[0],
        mul=lambda q, p: (q[0], p[1]),
        inv=lambda p: (p[1], p[0]),
        unit_of=lambda x: (x, x),
        label=lambda p: f"{p[0]}<-{p[1]}",
    )


@dataclass(frozen=True)
class BundleAction:
    relation: EquivRelation
    bundle: GroupBundle
    delta: dict  # (y, x) -> GroupHom fiber(x) -> fiber(y)

    @classmethod
    def trivial(cls, relation, G):
        """Constant bundle G with every delta the identity."""
        bundle = GroupBundle.constant(relation.units, G)
        idm = GroupHom.identity_of(G)
        return cls(relation, bundle, {p: idm for p in relation.pairs})


def validate_action(D):
    """Check that every delta is an isomorphism of the right fibers and the
    three action axioms hold on all composable pairs."""
    out = []
    R, B = D.relation, D.bundle
    for p in R.sorted_pairs():
        y, x = p
        d = D.delta.get(p)
        if d is None:
            out.append(Violation("missing", p, "no isomorphism for pair"))
            continue
        if d.source != B.finite(x) or d.target != B.finite(y):
            out.append(Violation("fibers", p, "isomorphism has wrong source or target"))
        elif not d.is_isomorphism():
            out.append(Violation("isomorphism", p, "not a group isomorphism"))
    if out:
        return ValidationReport(out)
    for x in R.units:
        d = D.delta[(x, x)]
        if d.images != d.source.generators:
            out.append(Violation("identity", (x, x), "delta(x,x) is not the identity"))
    for (y, x) in R.sorted_pairs():
        fwd, back = D.delta[(y, x)], D.delta[(x, y)]
        for i, g in enumerate(B.finite(x).generators):
            if back(fwd(g)) != g:
                out.append(Violation("inverse", (y, x, i), "delta(x,y)∘delta(y,x) != id"))
                break
    classes = R.classes()
    for c in classes:
        for x in c:
            gens = B.finite(x).generators
            for y in c:
                d_yx = D.delta[(y, x)]
                imgs = [d_yx(g) for g in gens]
                for z in c:
                    d_zy, d_zx = D.delta[(z, y)], D.delta[(z, x)]
                    for i, g in enumerate(gens):
                        if d_zy(imgs[i]) != d_zx(g):
                            out.append(Violation("cocycle", (z, y, x, i),
                                                 "delta(z,y)∘delta(y,x) != delta(z,x)"))
                            break
    return ValidationReport(out)


def semidirect(D):
    """Arrows (g, (y, x)) with g in fiber(x), from x to y.

    (h, (z, y))∘(g, (y, x)) = (delta(x,y)(h)·g, (z, x)) and
    (g, (y, x))⁻¹ = (delta(y,x)(g⁻¹), (x, y)).
    """
    report = validate_action(D)
    if not report.ok:
        raise InvalidAction(f"{len(report.violations)} action violations, first: "
                            f"{report.violations[0]}")
    B, delta = D.bundle, D.delta
    arrows = [(g, p) for p in D.relation.sorted_pairs() for g in B.finite(p[1]).elements()]

    def mul(b, a):
        (h, (z, y)), (g, (_, x)) = b, a
        return (P.compose(delta[(x, y)](h), g), (z, x))

    def inv(a):
        g, (y, x) = a
        return (delta[(y, x)](P.inverse(g)), (x, y))

    return build_groupoid(
        D.relation.units,
        arrows,
        src=lambda a: a[1][1],
        tgt=lambda a: a[1][0],
        mul=mul,
        inv=inv,
        unit_of=lambda x: (B.finite(x).identity(), (x, x)),
        label=lambda a: f"{P.format_perm(a[0])}|{a[1][0]}<-{a[1][1]}",
    )


def _check_theta(R, theta):
    if not is_transitive_relation(R):
        raise NotTransitive("orbit-indexed bundles need a transitive relation")
    units = R.units
    if not theta or any(theta[0][u] != u for u in units):
        raise CoverageFailure("theta[0] must be the identity")
    for n, th in enumerate(theta):
        if sorted(th[u] for u in units) != sorted(units) or set(th) != set(units):
            raise CoverageFailure(f"theta[{n}] is not a bijection of the units")
        for u in units:
            if (th[u], u) not in R.pairs:
                raise CoverageFailure(f"theta[{n}] leaves the relation at {u!r}")
    realized = {(th[x], x) for th in theta for x in units}
    missing = R.pairs - realized
    if missing:
        raise CoverageFailure(f"pairs realized by no theta: {sorted(missing)[:3]}")


def is_transitive_relation(R):
    return len(R.classes()) == 1


@dataclass(frozen=True)
class OrbitProduct:
    """Fiber of an orbit-indexed bundle: the product of base fibers at
    theta_n(x), coordinates ordered by n."""

    coordinates: tuple  # unit theta_n(x) for each n
    factors: tuple  # FinPermGroup per coordinate
    group: FinPermGroup


def orbit_indexed_bundle(R, base, theta):
    _check_theta(R, theta)
    fibers = {}
    for x in R.units:
        coords = tuple(th[x] for th in theta)
        factors = tuple(base.finite(u) for u in coords)
        fibers[x] = OrbitProduct(coords, factors, direct_product(factors))
    return GroupBundle(R.units, fibers)


def coordinate_maps(R, theta):
    """phi[x][n] = theta_n(x); raises NotInjective on a collision."""
    phi = {}
    for x in R.units:
        row = [th[x] for th in theta]
        if len(set(row)) != len(row):
            raise NotInjective(f"coordinates collide at unit {x!r}")
        phi[x] = row
    return phi


def shift_permutation(phi, y, x):
    """sigma(y,x) = phi_y⁻¹ ∘ phi_x as a list over coordinate indices."""
    pos_y = {u: m for m, u in enumerate(phi[y])}
    return [pos_y[u] for u in phi[x]]


def canonical_shift_action(R, H, theta):
    """Coordinate-permuting action on an orbit-indexed bundle.

    delta(y,x) moves the coordinate n of H_x to coordinate sigma(y,x)(n) of
    H_y; both coordinates sit at the unit theta_n(x), so the factor groups
    agree.
    """
    _check_theta(R, theta)
    phi = coordinate_maps(R, theta)
    delta = {}
    for (y, x) in R.sorted_pairs():
        sigma = shift_permutation(phi, y, x)
        Hx, Hy = H.fibers[x], H.fibers[y]
        offs_x, offs_y = block_offsets(Hx.factors), block_offsets(Hy.factors)
        images = []
        for n, factor in enumerate(Hx.factors):
            for g in factor.generators:
                images.append(P.relocate(g, offs_y[sigma[n]], Hy.group.degree))
        delta[(y, x)] = GroupHom(Hx.group, Hy.group, tuple(images))
    return BundleAction(R, H, delta)


def theta_from_basis(R, arrow_order=None):
    """Global bijections covering a transitive relation, identity first.

    The diagonal is taken as theta_0; the remaining pairs are split into
    global bisections by matching decomposition.  ``arrow_order`` (a
    permutation of the off-diagonal pairs) changes the tie-breaking.
    """
    if not is_transitive_relation(R):
        raise NotTransitive("theta needs a transitive relation")
    units = R.units
    off = [p for p in R.sorted_pairs() if p[0] != p[1]]
    if arrow_order is not None:
        off = [off[i] for i in arrow_order]
    theta = [{u: u for u in units}]
    uidx = {u: i for i, u in enumerate(units)}
    src = [uidx[p[1]] for p in off]
    tgt = [uidx[p[0]] for p in off]
    for m in matching_decomposition(len(units), src, tgt):
        theta.append({off[a][1]: off[a][0] for a in m})
    return theta


@dataclass(frozen=True)
class NeumannPipeline:
    """The orbit-indexed construction over a Neumann base bundle, with the
    provenance needed by genuineness certificates."""

    relation: EquivRelation
    base: GroupBundle
    theta: tuple
    bundle: GroupBundle
    action: BundleAction
    groupoid: object


def neumann_pipeline(R, base, theta=None):
    """Base bundle → orbit-indexed bundle H → shift action → semidirect."""
    theta = tuple(theta) if theta is not None else tuple(theta_from_basis(R))
    H = orbit_indexed_bundle(R, base, theta)
    D = canonical_shift_action(R, H, theta)
    return NeumannPipeline(R, base, theta, H, D, semidirect(D))


@dataclass(frozen=True)
class Transversal:
    base: str
    arrows: dict  # unit -> arrow from base to unit


def transversal(G):
    """Star-shaped transversal at the serialization-least unit."""
    base = min(G.units)
    b = G.unit_index(base)
    arrows = {}
    for i, u in enumerate(G.units):
        arrows[u] = G.unit_arrow[b] if i == b else min(G.hom(i, b))
    return Transversal(base, arrows)


def semidirect_presentation(G):
    """Write a transitive groupoid as isotropy bundle ⋊ orbit relation.

    Returns the BundleAction and a dict sending each semidirect arrow
    (perm, (y, x)) to the corresponding arrow id of G.
    """
    if not is_ergodic(G):
        raise NotTransitive("semidirect presentation implemented for transitive groupoids")
    T = transversal(G)
    iso = isotropy(G)
    reps = {}
    for x in G.units:
        reps[x] = iso.group(x)
    inv = G.inverse

    def conn(y, x):
        return G.mul(T.arrows[y], inv[T.arrows[x]])

    R = orbit_relation(G)
    bundle = GroupBundle(G.units, {x: reps[x][0] for x in G.units})
    delta = {}
    for (y, x) in R.sorted_pairs():
        c = conn(y, x)
        Gx, to_perm_x = reps[x]
        _, to_perm_y = reps[y]
        by_perm = {v: k for k, v in to_perm_x.items()}
        images = []
        for g in Gx.generators:
            a = by_perm[g]
            images.append(to_perm_y[G.mul(G.mul(c, a), inv[c])])
        delta[(y, x)] = GroupHom(Gx, reps[y][0], tuple(images))
    D = BundleAction(R, bundle, delta)
    arrow_of = {}
    for (y, x) in R.sorted_pairs():
        c = conn(y, x)
        for a, p in reps[x][1].items():
            arrow_of[(p, (y, x))] = G.mul(c, a)
    return D, arrow_of


@dataclass(frozen=True)
class AtomicModel:
    action: FiniteAction
    model: object  # FiniteGroupoid of the action
    phi: tuple  # model arrow id -> arrow id of the input groupoid
    transversal: Transversal
    unit_order: tuple  # unit name carried by the point "i"


def atomic_transformation_model(G):
    """A transitive groupoid as the transformation groupoid of
    (Z/n × Γ) acting on Z/n by (h, γ)·g = h + g.

    With t_x the transversal arrow from the base unit to x, the isomorphism
    sends the model arrow (g, (h, γ)) to t_{h+g} ∘ γ ∘ t_g⁻¹.
    """
    if not is_ergodic(G):
        raise NotTransitive("atomic model needs a transitive groupoid")
    T = transversal(G)
    n = G.n_units
    order = tuple(sorted(G.units))
    iso = isotropy(G)
    Gam, to_perm = iso.group(T.base)
    m = Gam.degree
    K = direct_product([cyclic_group(n), Gam])
    points = tuple(str(i) for i in range(n))
    action = FiniteAction.from_function(K, points, lambda k, x: str(k[int(x)]))
    M = transformation_groupoid(action)
    from_perm = {v: k for k, v in to_perm.items()}
    inv = G.inverse
    phi = []
    for a in range(M.n_arrows):
        g = int(M.units[M.src[a]])
        hg = int(M.units[M.tgt[a]])
        k = _element_of_arrow(M, a, action)
        gamma = from_perm[tuple(k[n + i] - n for i in range(m))]
        t_hg = T.arrows[order[hg]]
        t_g = T.arrows[order[g]]
        phi.append(G.mul(G.mul(t_hg, gamma), inv[t_g]))
    return AtomicModel(action, M, tuple(phi), T, order)


def _element_of_arrow(M, a, action):
    # transformation_groupoid enumerates arrows point-major, element-minor
    els = action.group.elements()
    return els[a % len(els)]


@dataclass(frozen=True)
class IsoVerdict:
    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def verify_isomorphism(f, A, B):
    """Check that the arrow map f: A → B is a groupoid isomorphism."""
    f = [f[a] for a in range(A.n_arrows)] if isinstance(f, dict) else list(f)
    if len(f) != A.n_arrows:
        return IsoVerdict(False, "not total", ())
    if A.n_arrows != B.n_arrows or A.n_units != B.n_units:
        return IsoVerdict(False, "sizes differ", ())
    if any(not 0 <= b < B.n_arrows for b in f) or len(set(f)) != len(f):
        return IsoVerdict(False, "not a bijection", ())
    units = [None] * A.n_units
    for x, e in enumerate(A.unit_arrow):
        fe = f[e]
        if not B.is_unit(fe):
            return IsoVerdict(False, "unit arrow not sent to a unit arrow", (e,))
        units[x] = B.src[fe]
    for a in range(A.n_arrows):
        if B.src[f[a]] != units[A.src[a]] or B.tgt[f[a]] != units[A.tgt[a]]:
            return IsoVerdict(False, "source/target not preserved", (a,))
    for (g, h), gh in A.compose.items():
        if B.compose.get((f[g], f[h])) != f[gh]:
            return IsoVerdict(False, "multiplication not preserved", (g, h))
    for a in range(A.n_arrows):
        if f[A.inverse[a]] != B.inverse[f[a]]:
            return IsoVerdict(False, "inverse not preserved", (a,))
    return IsoVerdict(True)


"""Finite discrete groupoids under counting measure.

A groupoid is stored as tables over dense arrow ids ``0..N-1``: source and
target unit indices, the unit arrow of each unit, the inverse of each arrow,
and the composition ``compose[(g, h)] = g∘h`` for every pair with
``src(g) == tgt(h)``.
"""

from collections import defaultdict
from dataclasses import dataclass, field

from .errors import NotTransitive
from .groups import regular_representation


@dataclass(frozen=True)
class FiniteGroupoid:
    units: tuple
    src: tuple
    tgt: tuple
    unit_arrow: tuple
    inverse: tuple
    compose: dict
    labels: tuple = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        for name in ("units", "src", "tgt", "unit_arrow", "inverse"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.units)) != len(self.units):
            raise ValueError("duplicate unit names")
        n = len(self.src)
        if not (len(self.tgt) == len(self.inverse) == n and len(self.unit_arrow) == len(self.units)):
            raise ValueError("table lengths disagree")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("one label per arrow required")

    @property
    def n_arrows(self):
        return len(self.src)

    @property
    def n_units(self):
        return len(self.units)

    def unit_index(self, x):
        idx = self._cache.get("unit_index")
        if idx is None:
            idx = self._cache["unit_index"] = {u: i for i, u in enumerate(self.units)}
        return idx[x]

    def _incidence(self):
        inc = self._cache.get("incidence")
        if inc is None:
            by_src = defaultdict(list)
            by_tgt = defaultdict(list)
            hom = defaultdict(list)
            for a, (s, t) in enumerate(zip(self.src, self.tgt)):
                by_src[s].append(a)
                by_tgt[t].append(a)
                hom[(t, s)].append(a)
            inc = self._cache["incidence"] = (dict(by_src), dict(by_tgt), dict(hom))
        return inc

    def arrows_from(self, x):
        """Arrows with source unit index x."""
        return self._incidence()[0].get(x, [])

    def arrows_to(self, x):
        return self._incidence()[1].get(x, [])

    def hom(self, y, x):
        """Arrows from unit index x to unit index y."""
        return self._incidence()[2].get((y, x), [])

    def mul(self, g, h):
        return self.compose[(g, h)]

    def is_unit(self, a):
        return self.unit_arrow[self.src[a]] == a

    def label(self, a):
        return self.labels[a] if self.labels is not None else str(a)


def build_groupoid(units, arrows, src, tgt, mul, inv, unit_of, label=str):
    """Tabulate a groupoid given by Python callables on arrow objects.

    ``src``/``tgt`` return unit names, ``mul(g, h)`` is called only on
    composable pairs, ``unit_of(x)`` gives the unit arrow at ``x``.
    """
    units = tuple(units)
    arrows = list(arrows)
    uidx = {u: i for i, u in enumerate(units)}
    aidx = {a: i for i, a in enumerate(arrows)}
    if len(aidx) != len(arrows):
        raise ValueError("duplicate arrows")
    s = tuple(uidx[src(a)] for a in arrows)
    t = tuple(uidx[tgt(a)] for a in arrows)
    by_tgt = defaultdict(list)
    for i, ti in enumerate(t):
        by_tgt[ti].append(i)
    compose = {}
    for gi, g in enumerate(arrows):
        for hi in by_tgt[s[gi]]:
            compose[(gi, hi)] = aidx[mul(g, arrows[hi])]
    return FiniteGroupoid(
        units,
        s,
        t,
        tuple(aidx[unit_of(u)] for u in units),
        tuple(aidx[inv(a)] for a in arrows),
        compose,
        tuple(label(a) for a in arrows),
    )


@dataclass(frozen=True)
class Violation:
    law: str
    witness: tuple
    detail: str = ""


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self):
        return not self.violations

    def to_json(self):
        return {"ok": self.ok,
                "violations": [{"law": v.law, "witness": list(v.witness), "detail": v.detail}
                               for v in self.violations]}


def validate(G, limit=None):
    """Check every groupoid law exhaustively; collect counterexamples.

    ``limit`` stops collecting after that many violations.
    """
    out = []

    def bad(law, witness, detail=""):
        out.append(Violation(law, tuple(witness), detail))
        return limit is not None and len(out) >= limit

    N, U = G.n_arrows, G.n_units
    for a in range(N):
        if not (0 <= G.src[a] < U and 0 <= G.tgt[a] < U and 0 <= G.inverse[a] < N):
            bad("shape", (a,), "endpoint or inverse out of range")
            return ValidationReport(out)
    for x, e in enumerate(G.unit_arrow):
        if not 0 <= e < N:
            bad("shape", (x,), "unit arrow out of range")
            return ValidationReport(out)
    for (g, h), gh in G.compose.items():
        if not (0 <= g < N and 0 <= h < N and 0 <= gh < N):
            bad("shape", (g, h), "compose entry out of range")
            return ValidationReport(out)

    by_tgt = defaultdict(list)
    for a in range(N):
        by_tgt[G.tgt[a]].append(a)
    for g, h in G.compose:
        if G.src[g] != G.tgt[h]:
            if bad("composability", (g, h), "defined on non-composable pair"):
                return ValidationReport(out)
    for g in range(N):
        for h in by_tgt[G.src[g]]:
            if (g, h) not in G.compose:
                if bad("composability", (g, h), "missing composable pair"):
                    return ValidationReport(out)
    for (g, h), gh in G.compose.items():
        if G.src[g] != G.tgt[h]:
            continue
        if G.src[gh] != G.src[h] or G.tgt[gh] != G.tgt[g]:
            if bad("typing", (g, h, gh), "endpoints of composite"):
                return ValidationReport(out)
    for x, e in enumerate(G.unit_arrow):
        if G.src[e] != x or G.tgt[e] != x:
            if bad("unit", (x, e), "unit arrow not a loop at its unit"):
                return ValidationReport(out)
    comp = G.compose
    for g in range(N):
        et, es = G.unit_arrow[G.tgt[g]], G.unit_arrow[G.src[g]]
        if comp.get((et, g)) != g or comp.get((g, es)) != g:
            if bad("unit-law", (g,), "e∘g = g = g∘e fails"):
                return ValidationReport(out)
        gi = G.inverse[g]
        if comp.get((gi, g)) != es or comp.get((g, gi)) != et:
            if bad("inverse-law", (g, gi), "g⁻¹∘g or g∘g⁻¹ is not a unit"):
                return ValidationReport(out)
    for g in range(N):
        for h in by_tgt[G.src[g]]:
            gh = comp.get((g, h))
            for k in by_tgt[G.src[h]]:
                hk = comp.get((h, k))
                left = comp.get((gh, k)) if gh is not None else None
                right = comp.get((g, hk)) if hk is not None else None
                if left != right or left is None:
                    if bad("associativity", (g, h, k), "(g∘h)∘k != g∘(h∘k)"):
                        return ValidationReport(out)
    return ValidationReport(out)


@dataclass(frozen=True)
class EquivRelation:
    """An equivalence relation on named units, stored as (y, x) pairs."""

    units: tuple
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "pairs", frozenset(tuple(p) for p in self.pairs))

    @classmethod
    def from_classes(cls, units, classes):
        return cls(tuple(units), frozenset((y, x) for c in classes for y in c for x in c))

    @classmethod
    def full(cls, units):
        return cls.from_classes(units, [units])

    @classmethod
    def diagonal(cls, units):
        return cls.from_classes(units, [[u] for u in units])

    def is_valid(self):
        us = set(self.units)
        if any(y not in us or x not in us for y, x in self.pairs):
            return False
        if any((u, u) not in self.pairs for u in self.units):
            return False
        if any((x, y) not in self.pairs for y, x in self.pairs):
            return False
        succ = defaultdict(set)
        for y, x in self.pairs:
            succ[x].add(y)
        return all(succ[y] <= succ[x] for y, x in self.pairs)

    def classes(self):
        """Classes as tuples, in order of each class's first unit."""
        succ = defaultdict(set)
        for y, x in self.pairs:
            succ[x].add(y)
        seen = set()
        out = []
        for u in self.units:
            if u in seen:
                continue
            cls_ = tuple(v for v in self.units if v in succ[u] or v == u)
            seen.update(cls_)
            out.append(cls_)
        return out

    def sorted_pairs(self):
        order = {u: i for i, u in enumerate(self.units)}
        return sorted(self.pairs, key=lambda p: (order[p[1]], order[p[0]]))


@dataclass(frozen=True)
class IsotropyBundle:
    groupoid: FiniteGroupoid
    fibers: dict  # unit name -> tuple of arrow ids, unit arrow first

    def order(self, x):
        return len(self.fibers[x])

    def group(self, x):
        """Left-regular permutation group of the fiber at x, plus the map
        arrow id → permutation."""
        G = self.groupoid
        els = list(self.fibers[x])
        return regular_representation(els, G.mul)

    def is_trivial(self):
        return all(len(f) == 1 for f in self.fibers.values())


def isotropy(G):
    fibers = {}
    for i, x in enumerate(G.units):
        loops = G.hom(i, i)
        e = G.unit_arrow[i]
        fibers[x] = (e,) + tuple(a for a in loops if a != e)
    return IsotropyBundle(G, fibers)


def orbit_relation(G):
    return EquivRelation(G.units, frozenset((G.units[t], G.units[s]) for s, t in zip(G.src, G.tgt)))


def restrict(G, E):
    """The full subgroupoid on the units in E, arrows renumbered in id order."""
    E = set(E)
    keep_units = [i for i, u in enumerate(G.units) if u in E]
    knew = {old: new for new, old in enumerate(keep_units)}
    keep = [a for a in range(G.n_arrows) if G.src[a] in knew and G.tgt[a] in knew]
    anew = {old: new for new, old in enumerate(keep)}
    compose = {(anew[g], anew[h]): anew[gh] for (g, h), gh in G.compose.items()
               if g in anew and h in anew}
    return FiniteGroupoid(
        tuple(G.units[i] for i in keep_units),
        tuple(knew[G.src[a]] for a in keep),
        tuple(knew[G.tgt[a]] for a in keep),
        tuple(anew[G.unit_arrow[i]] for i in keep_units),
        tuple(anew[G.inverse[a]] for a in keep),
        compose,
        None if G.labels is None else tuple(G.labels[a] for a in keep),
    )


def components(G):
    return [restrict(G, c) for c in orbit_relation(G).classes()]


def disjoint_union(groupoids, rename=False):
    """Disjoint union; with ``rename`` units become ``"<i>.<name>"``."""
    units, src, tgt, ua, inv, labels = [], [], [], [], [], []
    compose = {}
    uoff = aoff = 0
    for i, G in enumerate(groupoids):
        units.extend(f"{i}.{u}" if rename else u for u in G.units)
        src.extend(s + uoff for s in G.src)
        tgt.extend(t + uoff for t in G.tgt)
        ua.extend(a + aoff for a in G.unit_arrow)
        inv.extend(a + aoff for a in G.inverse)
        labels.extend(G.label(a) for a in range(G.n_arrows))
        compose.update({(g + aoff, h + aoff): gh + aoff for (g, h), gh in G.compose.items()})
        uoff += G.n_units
        aoff += G.n_arrows
    return FiniteGroupoid(tuple(units), tuple(src), tuple(tgt), tuple(ua), tuple(inv), compose,
                          tuple(labels))


def relabel_arrows(G, new_id):
    """Rename arrow a to new_id[a]; ``new_id`` is a permutation of range(N)."""
    N = G.n_arrows
    old_of = [0] * N
    for a, b in enumerate(new_id):
        old_of[b] = a
    return FiniteGroupoid(
        G.units,
        tuple(G.src[old_of[b]] for b in range(N)),
        tuple(G.tgt[old_of[b]] for b in range(N)),
        tuple(new_id[e] for e in G.unit_arrow),
        tuple(new_id[G.inverse[old_of[b]]] for b in range(N)),
        {(new_id[g], new_id[h]): new_id[gh] for (g, h), gh in G.compose.items()},
        None if G.labels is None else tuple(G.labels[old_of[b]] for b in range(N)),
    )


def is_ergodic(G):
    return len(orbit_relation(G).classes()) == 1


@dataclass(frozen=True)
class IccVerdict:
    icc: bool
    witness: int = None


def icc_check(G):
    """Finite groupoids are icc exactly when principal.

    Any non-unit isotropy arrow g gives E = {g} whose conjugacy closure is
    finite, so it serves as the witness.
    """
    for a in range(G.n_arrows):
        if G.src[a] == G.tgt[a] and not G.is_unit(a):
            return IccVerdict(False, a)
    return IccVerdict(True)


@dataclass(frozen=True)
class Bisection:
    arrows: frozenset

    def is_bisection(self, G):
        s = [G.src[a] for a in self.arrows]
        t = [G.tgt[a] for a in self.arrows]
        return len(set(s)) == len(s) and len(set(t)) == len(t)

    def is_global(self, G):
        n = G.n_units
        return (self.is_bisection(G) and len(self.arrows) == n
                and {G.src[a] for a in self.arrows} == set(range(n)))

    def as_map(self, G):
        """The unit bijection src(b) ↦ tgt(b), by unit name."""
        return {G.units[G.src[a]]: G.units[G.tgt[a]] for a in self.arrows}


def perfect_matching(n_units, src, tgt, available):
    """Augmenting-path matching of sources to targets over the available
    edges (arrow ids), trying edges in increasing id order.  None if no
    perfect matching exists."""
    out_edges = defaultdict(list)
    for a in sorted(available):
        out_edges[src[a]].append(a)
    match_t = {}

    def augment(u, seen):
        for a in out_edges[u]:
            v = tgt[a]
            if v in seen:
                continue
            seen.add(v)
            if v not in match_t or augment(src[match_t[v]], seen):
                match_t[v] = a
                return True
        return False

    for u in range(n_units):
        if not augment(u, set()):
            return None
    return frozenset(match_t.values())


def matching_decomposition(n_units, src, tgt):
    """Peel perfect matchings off a bipartite multigraph until no edge is
    left; raises NotTransitive when the multigraph is not regular."""
    available = set(range(len(src)))
    out = []
    while available:
        m = perfect_matching(n_units, src, tgt, available)
        if m is None:
            raise NotTransitive("source/target multigraph is not regular")
        out.append(m)
        available -= m
    return out


def global_bisection_basis(G):
    """Partition the arrows of a transitive groupoid into global bisections.

    The source/target bipartite multigraph is regular, so Hall's condition
    holds at every stage and perfect matchings can be peeled off one by one.
    """
    if not is_ergodic(G):
        raise NotTransitive("global bisection basis needs a transitive groupoid")
    return [Bisection(m) for m in matching_decomposition(G.n_units, G.src, G.tgt)]


def is_partition_into_global_bisections(G, basis):
    seen = set()
    for b in basis:
        if not b.is_global(G) or seen & b.arrows:
            return False
        seen |= b.arrows
    return seen == set(range(G.n_arrows))


def transitive_counts_ok(G):
    """|arrows| = |units|² · |Γ| for a transitive groupoid."""
    iso = isotropy(G)
    return G.n_arrows == G.n_units ** 2 * iso.order(G.units[0])


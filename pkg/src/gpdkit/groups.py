"""Finite permutation groups, lazily evaluated finitely generated groups, and
group bundles.

Finite groups always carry a permutation representation; element sets are
obtained by breadth-first closure under the generators.  Lazy groups expose
only identity, multiplication, inverse and a generating set, and are used for
wreath products with an infinite top group.
"""

from collections import Counter, deque
from dataclasses import dataclass, field
import math

from . import perm as P
from .errors import CapExceeded, FormatError, IndexMismatch

DEFAULT_CLOSURE_CAP = 200_000


def closure_enumerate(gens, cap=DEFAULT_CLOSURE_CAP, degree=None):
    """Breadth-first closure of ``gens`` starting from the identity.

    The order of the returned list is deterministic: identity first, then
    elements in the order they are discovered by left-multiplying queued
    elements with each generator in turn.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    gens = [tuple(g) for g in gens]
    if degree is None:
        degree = len(gens[0]) if gens else 1
    if any(len(g) != degree for g in gens):
        raise ValueError("generators of unequal degree")
    e = P.identity(degree)
    seen = {e}
    out = [e]
    queue = deque(out)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in seen:
                if len(out) >= cap:
                    raise CapExceeded(cap)
                seen.add(y)
                out.append(y)
                queue.append(y)
    return out


@dataclass(frozen=True)
class FinPermGroup:
    degree: int
    generators: tuple
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        gens = tuple(tuple(g) for g in self.generators)
        for g in gens:
            if not P.is_perm(g, self.degree):
                raise ValueError(f"generator {g} is not a permutation of degree {self.degree}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_cycles(cls, degree, *cycle_texts):
        return cls(degree, tuple(P.parse_perm(t, degree) for t in cycle_texts))

    def identity(self):
        return P.identity(self.degree)

    def mul(self, a, b):
        return P.compose(a, b)

    def inv(self, a):
        return P.inverse(a)

    def elements(self, cap=DEFAULT_CLOSURE_CAP):
        els = self._cache.get("elements")
        if els is None:
            els = tuple(closure_enumerate(self.generators, cap, self.degree))
            self._cache["elements"] = els
            self._cache["element_set"] = frozenset(els)
        return els

    def element_set(self, cap=DEFAULT_CLOSURE_CAP):
        self.elements(cap)
        return self._cache["element_set"]

    def order(self, cap=DEFAULT_CLOSURE_CAP):
        return len(self.elements(cap))

    def __contains__(self, p):
        return tuple(p) in self.element_set()

    def is_abelian(self):
        gens = self.generators
        return all(P.compose(a, b) == P.compose(b, a) for a in gens for b in gens)

    def center_size(self, cap=DEFAULT_CLOSURE_CAP):
        gens = self.generators
        return sum(
            1 for z in self.elements(cap) if all(P.compose(z, g) == P.compose(g, z) for g in gens)
        )

    def order_histogram(self, cap=DEFAULT_CLOSURE_CAP):
        return dict(sorted(Counter(P.order(x) for x in self.elements(cap)).items()))

    def to_text(self):
        lines = [f"degree {self.degree}"] + [P.format_perm(g) for g in self.generators]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("degree"):
            raise FormatError("group file must start with 'degree n'")
        try:
            n = int(lines[0].split()[1])
        except (IndexError, ValueError):
            raise FormatError(f"bad header {lines[0]!r}") from None
        return cls(n, tuple(P.parse_perm(ln, n) for ln in lines[1:]))


def trivial_group(degree=1):
    return FinPermGroup(degree, ())


def cyclic_group(n):
    return FinPermGroup(max(n, 1), (P.from_cycles(n, [list(range(n))]),) if n > 1 else ())


def symmetric_group(n):
    if n < 2:
        return trivial_group(max(n, 1))
    gens = [P.from_cycles(n, [[0, 1]])]
    if n > 2:
        gens.append(P.from_cycles(n, [list(range(n))]))
    return FinPermGroup(n, tuple(gens))


def alternating_group(n):
    if n < 3:
        return trivial_group(max(n, 1))
    return FinPermGroup(n, tuple(P.from_cycles(n, [[0, 1, i]]) for i in range(2, n)))


def dihedral_group(n):
    """Symmetries of the n-gon, order 2n, acting on n points (n >= 3)."""
    rot = P.from_cycles(n, [list(range(n))])
    ref = tuple((-i) % n for i in range(n))
    return FinPermGroup(n, (rot, ref))


def direct_product(groups):
    """Direct product acting on the disjoint union of the factors' points."""
    groups = list(groups)
    if not groups:
        return trivial_group()
    n = sum(g.degree for g in groups)
    gens = []
    off = 0
    for g in groups:
        gens.extend(P.relocate(x, off, n) for x in g.generators)
        off += g.degree
    return FinPermGroup(n, tuple(gens))


def block_offsets(groups):
    offs, off = [], 0
    for g in groups:
        offs.append(off)
        off += g.degree
    return offs


def regular_representation(elements, mul):
    """Left-regular permutation group of an abstract finite group.

    ``elements[0]`` must be the identity.  Returns the group and the map
    sending each element to its permutation.
    """
    index = {x: i for i, x in enumerate(elements)}
    images = {x: tuple(index[mul(x, y)] for y in elements) for x in elements}
    n = len(elements)
    return FinPermGroup(n, tuple(images[x] for x in elements if images[x] != P.identity(n))), images


def is_alternating(G, cap=DEFAULT_CLOSURE_CAP):
    """Return n if G is the full alternating group on its n letters, else None."""
    n = G.degree
    els = G.elements(cap)
    if 2 * len(els) != math.factorial(n):
        return None
    if not all(P.is_even(x) for x in els):
        return None
    if n > 1 and len(orbit(G, 0)) != n:
        return None
    return n


def orbit(G, point):
    seen = {point}
    queue = deque([point])
    while queue:
        x = queue.popleft()
        for g in G.generators:
            y = g[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def is_normal(H, G):
    H = {tuple(h) for h in H}
    return all({P.conjugate(g, h) for h in H} == H for g in G.generators)


def invariants(G, cap=DEFAULT_CLOSURE_CAP):
    """(order, element-order histogram, abelian, center size)."""
    return (G.order(cap), G.order_histogram(cap), G.is_abelian(), G.center_size(cap))


def _extend(G, gens, images, e_h, cap):
    """Extend a generator assignment to a map on G; None if inconsistent."""
    e = G.identity()
    mapping = {e: e_h}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        mx = mapping[x]
        for g, img in zip(gens, images):
            y = P.compose(g, x)
            my = P.compose(img, mx)
            prev = mapping.get(y)
            if prev is None:
                if len(mapping) >= cap:
                    raise CapExceeded(cap)
                mapping[y] = my
                queue.append(y)
            elif prev != my:
                return None
    return mapping


def _useful_generators(G):
    out = []
    for g in G.generators:
        if not P.is_identity(g) and g not in out:
            out.append(g)
    return out


def isomorphisms(G, H, cap=DEFAULT_CLOSURE_CAP):
    """Yield every isomorphism G → H as a dict on elements.

    Backtracking over generator images with pruning by element orders and
    by orders of pairwise products of generators.
    """
    if invariants(G, cap) != invariants(H, cap):
        return
    gens = _useful_generators(G)
    e_h = H.identity()
    if not gens:
        yield {G.identity(): e_h}
        return
    by_order = {}
    for h in H.elements(cap):
        by_order.setdefault(P.order(h), []).append(h)
    cands = [by_order.get(P.order(g), []) for g in gens]
    pair_orders = {
        (i, j): P.order(P.compose(gens[i], gens[j]))
        for i in range(len(gens)) for j in range(i)
    }
    size = G.order(cap)
    chosen = []

    def search(k):
        if k == len(gens):
            mapping = _extend(G, gens, chosen, e_h, cap)
            if mapping is not None and len(set(mapping.values())) == size:
                yield mapping
            return
        for h in cands[k]:
            if all(P.order(P.compose(h, chosen[j])) == pair_orders[(k, j)] for j in range(k)):
                chosen.append(h)
                yield from search(k + 1)
                chosen.pop()

    yield from search(0)


def group_isomorphic(G, H, cap=DEFAULT_CLOSURE_CAP):
    """An isomorphism G → H as a dict on elements, or None."""
    return next(isomorphisms(G, H, cap), None)


def automorphisms(G, cap=DEFAULT_CLOSURE_CAP):
    return list(isomorphisms(G, G, cap))


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by the images of the source generators."""

    source: FinPermGroup
    target: FinPermGroup
    images: tuple
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(tuple(x) for x in self.images))
        if len(self.images) != len(self.source.generators):
            raise ValueError("one image per source generator required")

    @classmethod
    def from_mapping(cls, source, target, mapping):
        return cls(source, target, tuple(mapping[g] for g in source.generators))

    @classmethod
    def identity_of(cls, G):
        return cls(G, G, G.generators)

    def mapping(self):
        m = self._cache.get("map", False)
        if m is False:
            m = _extend(self.source, self.source.generators, self.images,
                        self.target.identity(), DEFAULT_CLOSURE_CAP)
            self._cache["map"] = m
        return m

    def is_homomorphism(self):
        return self.mapping() is not None and all(x in self.target for x in self.images)

    def is_isomorphism(self):
        if not self.is_homomorphism():
            return False
        vals = set(self.mapping().values())
        return len(vals) == self.source.order() == self.target.order()

    def __call__(self, x):
        m = self.mapping()
        if m is None:
            raise ValueError("generator images do not define a homomorphism")
        return m[tuple(x)]

    def then(self, other):
        """other∘self."""
        return GroupHom(self.source, other.target, tuple(other(x) for x in self.images))

    def inverse(self):
        m = self.mapping()
        inv = {v: k for k, v in m.items()}
        return GroupHom(self.target, self.source, tuple(inv[g] for g in self.target.generators))


class LazyGroup:
    """A finitely generated group known only through its operations.

    Subclasses define ``generators``, ``identity``, ``mul`` and ``inv``;
    elements must be hashable and compare equal exactly when equal in the
    group.
    """

    generators = ()

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def ball(self, r):
        """Elements expressible as words of length <= r in gens and inverses."""
        letters = []
        for g in self.generators:
            letters.append(g)
            gi = self.inv(g)
            if gi != g:
                letters.append(gi)
        e = self.identity()
        seen = {e}
        out = [e]
        frontier = [e]
        for _ in range(r):
            nxt = []
            for x in frontier:
                for s in letters:
                    y = self.mul(s, x)
                    if y not in seen:
                        seen.add(y)
                        out.append(y)
                        nxt.append(y)
            frontier = nxt
        return out


class FiniteLazy(LazyGroup):
    def __init__(self, group):
        self.group = group
        self.generators = group.generators

    def identity(self):
        return self.group.identity()

    def mul(self, a, b):
        return P.compose(a, b)

    def inv(self, a):
        return P.inverse(a)


class IntegersLazy(LazyGroup):
    """The infinite cyclic group Z, generator 1."""

    generators = (1,)

    def identity(self):
        return 0

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a


class LazyDirectProduct(LazyGroup):
    def __init__(self, factors):
        self.factors = tuple(as_lazy(f) for f in factors)
        ids = tuple(f.identity() for f in self.factors)
        gens = []
        for i, f in enumerate(self.factors):
            for g in f.generators:
                gens.append(ids[:i] + (g,) + ids[i + 1:])
        self.generators = tuple(gens)
        self._ids = ids

    def identity(self):
        return self._ids

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))


class LazyWreath(LazyGroup):
    """Restricted wreath product base ≀ top.

    An element is ``(support, k)`` where ``support`` is a tuple of
    ``(position, value)`` pairs sorted by position, with no identity values,
    and ``k`` is an element of ``top``.  The top group moves the value at
    position l to position k·l.
    """

    def __init__(self, base, top):
        self.base = as_lazy(base)
        self.top = as_lazy(top)
        e_k = self.top.identity()
        gens = [(((e_k, b),), e_k) for b in self.base.generators]
        gens += [((), k) for k in self.top.generators]
        self.generators = tuple(gens)

    def element(self, support, k):
        e_b = self.base.identity()
        items = sorted((pos, v) for pos, v in dict(support).items() if v != e_b)
        return (tuple(items), k)

    def identity(self):
        return ((), self.top.identity())

    def mul(self, a, b):
        (f, k), (f2, k2) = a, b
        vals = dict(f)
        for pos, v in f2:
            q = self.top.mul(k, pos)
            vals[q] = self.base.mul(vals[q], v) if q in vals else v
        return self.element(vals, self.top.mul(k, k2))

    def inv(self, a):
        f, k = a
        ki = self.top.inv(k)
        return self.element({self.top.mul(ki, pos): self.base.inv(v) for pos, v in f}, ki)


def as_lazy(G):
    if isinstance(G, LazyGroup):
        return G
    if isinstance(G, FinPermGroup):
        return FiniteLazy(G)
    group = getattr(G, "group", None)
    if isinstance(group, FinPermGroup):
        return FiniteLazy(group)
    raise TypeError(f"not a group description: {G!r}")


def as_finite(desc):
    """The finite permutation group behind a description, or None."""
    if isinstance(desc, FinPermGroup):
        return desc
    group = getattr(desc, "group", None)
    return group if isinstance(group, FinPermGroup) else None


def wreath_product(G, K, cap=DEFAULT_CLOSURE_CAP):
    """G ≀ K.  Finite × finite is materialized in the imprimitive action on
    degree(G)·|K| points; a lazy K yields a LazyWreath."""
    Gf, Kf = as_finite(G), as_finite(K)
    if Gf is not None and Kf is not None:
        kels = Kf.elements(cap)
        m = len(kels)
        go = Gf.order(cap)
        if go ** m * m > cap:
            raise CapExceeded(cap, "wreath product order")
        d = Gf.degree
        n = d * m
        index = {k: i for i, k in enumerate(kels)}
        gens = [P.relocate(b, 0, n) for b in Gf.generators]
        for k in Kf.generators:
            img = [0] * n
            for l, kl in enumerate(kels):
                tgt = index[P.compose(k, kl)]
                for i in range(d):
                    img[l * d + i] = tgt * d + i
            gens.append(tuple(img))
        return FinPermGroup(n, tuple(gens))
    return LazyWreath(G, K)


def conjugacy_growth_probe(G, g, r):
    """Number of distinct conjugates h g h⁻¹ with h in the radius-r ball."""
    G = as_lazy(G)
    if g == G.identity():
        raise ValueError("conjugacy probe needs a non-identity element")
    if r < 0:
        raise ValueError("radius must be >= 0")
    return len({G.mul(G.mul(h, g), G.inv(h)) for h in G.ball(r)})


@dataclass(frozen=True)
class GroupBundle:
    """A finite indexed family of group descriptions."""

    index_set: tuple
    fibers: dict

    def __post_init__(self):
        object.__setattr__(self, "index_set", tuple(self.index_set))
        missing = [z for z in self.index_set if z not in self.fibers]
        if missing:
            raise IndexMismatch(f"no fiber at {missing}")

    @classmethod
    def constant(cls, index_set, G):
        return cls(tuple(index_set), {z: G for z in index_set})

    def fiber(self, z):
        return self.fibers[z]

    def finite(self, z):
        G = as_finite(self.fibers[z])
        if G is None:
            raise TypeError(f"fiber at {z!r} is not finite")
        return G

    def fiber_orders(self, cap=DEFAULT_CLOSURE_CAP):
        return {z: self.finite(z).order(cap) for z in self.index_set}


def direct_sum_bundle(bundles, index_set=None):
    """Fiberwise direct product of bundles over a shared index set."""
    bundles = list(bundles)
    if index_set is None:
        if not bundles:
            raise IndexMismatch("empty sum needs an explicit index set")
        index_set = bundles[0].index_set
    index_set = tuple(index_set)
    for b in bundles:
        if b.index_set != index_set:
            raise IndexMismatch("bundles are indexed over different sets")
    fibers = {}
    for z in index_set:
        descs = [b.fibers[z] for b in bundles]
        finite = [as_finite(d) for d in descs]
        if all(f is not None for f in finite):
            fibers[z] = direct_product(finite)
        else:
            fibers[z] = LazyDirectProduct(descs)
    return GroupBundle(index_set, fibers)


def small_groups(max_order=12):
    """One permutation representative of every group of order <= 12."""
    C = cyclic_group
    catalog = [
        ("C1", trivial_group()), ("C2", C(2)), ("C3", C(3)), ("C4", C(4)),
        ("C2xC2", direct_product([C(2), C(2)])), ("C5", C(5)), ("C6", C(6)),
        ("S3", symmetric_group(3)), ("C7", C(7)), ("C8", C(8)),
        ("C4xC2", direct_product([C(4), C(2)])),
        ("C2xC2xC2", direct_product([C(2), C(2), C(2)])), ("D4", dihedral_group(4)),
        ("Q8", FinPermGroup.from_cycles(8, "(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)")),
        ("C9", C(9)), ("C3xC3", direct_product([C(3), C(3)])), ("C10", C(10)),
        ("D5", dihedral_group(5)), ("C11", C(11)), ("C12", C(12)),
        ("C6xC2", direct_product([C(6), C(2)])), ("A4", alternating_group(4)),
        ("D6", dihedral_group(6)),
        ("Dic3", FinPermGroup.from_cycles(
            12, "(1 2 3 4 5 6)(7 8 9 10 11 12)", "(1 7 4 10)(2 12 5 9)(3 11 6 8)")),
    ]
    return [(name, G) for name, G in catalog if G.order() <= max_order]


def subgroups(G, cap=DEFAULT_CLOSURE_CAP):
    """All subgroups of a small group, as frozensets of elements."""
    els = G.elements(cap)
    found = set()
    layer = set()
    for x in els:
        layer.add(frozenset(closure_enumerate([x], cap, G.degree)))
    found |= layer
    while layer:
        nxt = set()
        for H in layer:
            for x in els:
                if x not in H:
                    K = frozenset(closure_enumerate(list(H) + [x], cap, G.degree))
                    if K not in found:
                        nxt.add(K)
        found |= nxt
        layer = nxt
    return sorted(found, key=lambda H: (len(H), sorted(H)))


def subgroup_as_group(H, degree):
    """A FinPermGroup generated by a small generating subset of H."""
    gens = []
    cur = {P.identity(degree)}
    for x in sorted(H):
        if x not in cur:
            gens.append(x)
            cur = set(closure_enumerate(gens, len(H) + 1, degree))
    return FinPermGroup(degree, tuple(gens))


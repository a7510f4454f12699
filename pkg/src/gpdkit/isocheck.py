"""Isomorphism search for finite groupoids, transformation-groupoid
recognition, and the certificates built on top of them.

A finite groupoid is a disjoint union of transitive components, and a
transitive component is determined up to isomorphism by its unit count and
its isotropy group.  The search therefore pairs components, then for each
pair looks for a group isomorphism between isotropy groups at base units and
transports it along star-shaped transversals.
"""

from collections import Counter, deque
from dataclasses import dataclass
import itertools

from . import perm as P
from .certificates import Certificate, digest
from .constructions import (FiniteAction, atomic_transformation_model, neumann_pipeline,
                            transformation_groupoid, verify_isomorphism)
from .errors import CapExceeded, MissingProvenance
from .formats import dump_bundle, dump_groupoid
from .groupoid import (Bisection, global_bisection_basis, is_ergodic,
                       is_partition_into_global_bisections, isotropy, orbit_relation)
from .groups import (DEFAULT_CLOSURE_CAP, as_finite, group_isomorphic, invariants, small_groups,
                     subgroup_as_group, subgroups)
from .neumann import NeumannFiber, distinguish, recheck_distinguish

DEFAULT_ARROW_CAP = 10_000
DEFAULT_GROUP_ORDER_CAP = 12

DISCLAIMER = ("Genuineness concerns diffuse measured groupoids. It is not claimed for this "
              "finite truncation, which is itself a transformation groupoid.")


# loop groups inside a groupoid, computed on arrow ids

def _arrow_order(G, a):
    e = G.unit_arrow[G.src[a]]
    k, x = 1, a
    while x != e:
        x = G.mul(a, x)
        k += 1
    return k


def _loop_closure(G, gens, e):
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.mul(g, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _loop_generators(G, loops):
    """Greedy generating set of a loop group, scanning arrows by id."""
    e = loops[0]
    gens, cur = [], {e}
    for a in sorted(loops):
        if a not in cur:
            gens.append(a)
            cur = _loop_closure(G, gens, e)
    return gens


def _loop_invariants(G, loops):
    hist = tuple(sorted(Counter(_arrow_order(G, a) for a in loops).items()))
    center = sum(1 for a in loops if all(G.mul(a, b) == G.mul(b, a) for b in loops))
    return (len(loops), hist, center == len(loops), center)


@dataclass
class _Component:
    units: list  # unit indices, increasing
    base: int
    loops: list  # isotropy arrows at base, unit first
    signature: tuple


def _components(G):
    iso = isotropy(G)
    out = []
    for cls in orbit_relation(G).classes():
        idx = sorted(G.unit_index(u) for u in cls)
        # base: least (isotropy order, degree sequence, index); all tie in a
        # transitive component, so this is the least index
        base = idx[0]
        loops = list(iso.fibers[G.units[base]])
        out.append(_Component(idx, base, loops, (len(idx),) + _loop_invariants(G, loops)))
    return out


@dataclass(frozen=True)
class GroupoidInvariant:
    n_units: int
    n_arrows: int
    orbits: tuple  # sorted (orbit size, isotropy order, order histogram, abelian, center)

    @classmethod
    def of(cls, G):
        return cls(G.n_units, G.n_arrows, tuple(sorted(c.signature for c in _components(G))))


def _loop_isomorphisms(A, la, B, lb):
    """Yield group isomorphisms between loop groups la ⊂ A and lb ⊂ B as
    dicts on arrow ids."""
    gens = _loop_generators(A, la)
    ea, eb = la[0], lb[0]
    if not gens:
        yield {ea: eb}
        return
    by_order = {}
    for b in lb:
        by_order.setdefault(_arrow_order(B, b), []).append(b)
    cands = [by_order.get(_arrow_order(A, g), []) for g in gens]
    pair = {(i, j): _arrow_order(A, A.mul(gens[i], gens[j]))
            for i in range(len(gens)) for j in range(i)}
    chosen = []

    def extend():
        mapping = {ea: eb}
        queue = deque([ea])
        while queue:
            x = queue.popleft()
            mx = mapping[x]
            for g, img in zip(gens, chosen):
                y, my = A.mul(g, x), B.mul(img, mx)
                prev = mapping.get(y)
                if prev is None:
                    mapping[y] = my
                    queue.append(y)
                elif prev != my:
                    return None
        return mapping if len(set(mapping.values())) == len(la) else None

    def search(k):
        if k == len(gens):
            m = extend()
            if m is not None:
                yield m
            return
        for b in cands[k]:
            if all(_arrow_order(B, B.mul(b, chosen[j])) == pair[(k, j)] for j in range(k)):
                chosen.append(b)
                yield from search(k + 1)
                chosen.pop()

    yield from search(0)


def _star(G, comp):
    """Arrow from the base unit to each unit of the component, least id."""
    return {u: (G.unit_arrow[u] if u == comp.base else min(G.hom(u, comp.base)))
            for u in comp.units}


def _component_map(A, ca, B, cb):
    """Arrow map on the component ca of A onto cb of B, or None."""
    psi = next(_loop_isomorphisms(A, ca.loops, B, cb.loops), None)
    if psi is None:
        return None
    pi = dict(zip(ca.units, cb.units))  # bases are first on both sides
    ta, tb = _star(A, ca), _star(B, cb)
    inv_a, inv_b = A.inverse, B.inverse
    f = {}
    for x in ca.units:
        for x2 in ca.units:
            for a in A.hom(x2, x):
                gamma = A.mul(A.mul(inv_a[ta[x2]], a), ta[x])
                f[a] = B.mul(B.mul(tb[pi[x2]], psi[gamma]), inv_b[tb[pi[x]]])
    return f


def groupoid_isomorphic(A, B, cap=DEFAULT_ARROW_CAP):
    """An isomorphism A → B as a tuple of arrow ids, or None.

    None is returned only after the search has been exhausted.
    """
    for G in (A, B):
        if G.n_arrows > cap:
            raise CapExceeded(cap, "arrow count")
    if A.n_arrows != B.n_arrows or A.n_units != B.n_units:
        return None
    comps_a, comps_b = _components(A), _components(B)
    if sorted(c.signature for c in comps_a) != sorted(c.signature for c in comps_b):
        return None
    # first-fail: components with the fewest candidate partners go first
    cand = {i: [j for j, cb in enumerate(comps_b) if cb.signature == ca.signature]
            for i, ca in enumerate(comps_a)}
    order = sorted(cand, key=lambda i: (len(cand[i]), comps_a[i].signature, i))
    memo = {}

    def pair_map(i, j):
        if (i, j) not in memo:
            memo[(i, j)] = _component_map(A, comps_a[i], B, comps_b[j])
        return memo[(i, j)]

    used = set()
    chosen = {}

    def search(k):
        if k == len(order):
            return True
        i = order[k]
        for j in cand[i]:
            if j in used or pair_map(i, j) is None:
                continue
            used.add(j)
            chosen[i] = j
            if search(k + 1):
                return True
            used.discard(j)
            del chosen[i]
        return False

    if not search(0):
        return None
    f = [None] * A.n_arrows
    for i, j in chosen.items():
        for a, b in memo[(i, j)].items():
            f[a] = b
    f = tuple(f)
    if not verify_isomorphism(f, A, B):
        raise AssertionError("constructed map failed verification")
    return f


# transformation-groupoid recognition

@dataclass(frozen=True)
class TransformationVerdict:
    verdict: str  # "found", "none" or "undecided"
    action: FiniteAction = None
    model: object = None
    phi: tuple = None  # model arrow id -> input arrow id
    group_name: str = None
    detail: str = ""

    def __bool__(self):
        return self.verdict == "found"

    def summary(self):
        out = {"verdict": self.verdict, "detail": self.detail}
        if self.action is not None:
            out["group_order"] = self.action.group.order()
        if self.group_name is not None:
            out["group"] = self.group_name
        return out


def _coset_action(K, H, names):
    """K acting on its left cosets of H, cosets named in first-seen order."""
    els = K.elements()
    cosets, label = [], {}
    for g in els:
        if g not in label:
            c = frozenset(P.compose(g, h) for h in H)
            for x in c:
                label[x] = len(cosets)
            cosets.append(c)
    pts = [names[i] for i in range(len(cosets))]
    act = {(k, pts[label[g]]): pts[label[P.compose(k, g)]]
           for k in els for g in (min(c) for c in cosets)}
    return pts, act


def is_transformation_groupoid(G, max_order=DEFAULT_GROUP_ORDER_CAP, cap=DEFAULT_ARROW_CAP):
    """Search for a finite group action whose transformation groupoid is G.

    Transitive input always succeeds through the atomic model.  With several
    components a group K must act with one orbit per component, so
    |K| = n_i·|Γ_i| for every component i; groups of that order up to
    ``max_order`` are searched exhaustively for stabilizers isomorphic to
    each Γ_i.
    """
    if is_ergodic(G):
        M = atomic_transformation_model(G)
        return TransformationVerdict("found", M.action, M.model, M.phi, None, "atomic model")
    comps = _components(G)
    iso = isotropy(G)
    sizes = {c.signature[0] * c.signature[1] for c in comps}
    if len(sizes) != 1:
        return TransformationVerdict("none", detail=f"orbit sizes times isotropy orders differ: {sorted(sizes)}")
    order = sizes.pop()
    if order > max_order:
        return TransformationVerdict("undecided", detail=f"candidate group order {order} exceeds {max_order}")
    if order * G.n_units > cap:
        raise CapExceeded(cap, "model arrow count")
    gammas = [iso.group(G.units[c.base])[0] for c in comps]
    for name, K in small_groups(max_order):
        if K.order() != order:
            continue
        subs = subgroups(K)
        chosen = []
        for c, gam in zip(comps, gammas):
            H = next((H for H in subs if len(H) == gam.order()
                      and group_isomorphic(subgroup_as_group(H, K.degree), gam) is not None), None)
            if H is None:
                break
            chosen.append((c, H))
        if len(chosen) != len(comps):
            continue
        points, act = [], {}
        for c, H in chosen:
            names = [G.units[u] for u in c.units]
            pts, a = _coset_action(K, H, names)
            points.extend(pts)
            act.update(a)
        action = FiniteAction(K, tuple(points), act)
        M = transformation_groupoid(action)
        phi = groupoid_isomorphic(M, G, cap)
        if phi is not None:
            return TransformationVerdict("found", action, M, phi, name, "coset actions")
    return TransformationVerdict("none", detail=f"no group of order {order} has the required stabilizers")


# certificates

def _fiber_code(desc):
    return f"neumann:{desc.prefix}" if isinstance(desc, NeumannFiber) else "explicit"


def _compare_fibers(a, b, cap):
    if isinstance(a, NeumannFiber) and isinstance(b, NeumannFiber):
        w = distinguish(a.prefix, b.prefix).witnesses
        if w["verdict"] == "witness":
            return {"verdict": "distinct", "method": "prefix", "index": w["index"],
                    "degree": w["degree"], "holder": w["holder"]}
        return {"verdict": "indistinguishable-at-depth", "method": "prefix", "depth": w["depth"]}
    Ga, Gb = as_finite(a), as_finite(b)
    oa, ob = Ga.order(cap), Gb.order(cap)
    if oa != ob:
        return {"verdict": "distinct", "method": "order", "orders": [oa, ob]}
    if invariants(Ga, cap) != invariants(Gb, cap):
        return {"verdict": "distinct", "method": "invariants"}
    iso = group_isomorphic(Ga, Gb, cap)
    if iso is None:
        return {"verdict": "distinct", "method": "exhaustive-search"}
    return {"verdict": "indistinguishable-at-depth", "method": "isomorphism",
            "images": [P.format_perm(iso[g]) for g in Ga.generators]}


def _mirror(report):
    r = dict(report)
    if "holder" in r:
        r["holder"] = {"U": "V", "V": "U"}[r["holder"]]
    if "orders" in r:
        r["orders"] = r["orders"][::-1]
    return r


def fiber_distinctness_certificate(B, cap=DEFAULT_CLOSURE_CAP):
    """Compare every pair of fibers of B; each unordered pair is reported in
    both orders, the second mirroring the first."""
    idx = B.index_set
    pairs = []
    for i, j in itertools.combinations(range(len(idx)), 2):
        r = _compare_fibers(B.fibers[idx[i]], B.fibers[idx[j]], cap)
        pairs.append(dict(r, pair=[idx[i], idx[j]]))
        pairs.append(dict(_mirror(r), pair=[idx[j], idx[i]]))
    pos = {z: k for k, z in enumerate(idx)}
    pairs.sort(key=lambda r: (pos[r["pair"][0]], pos[r["pair"][1]]))
    witnesses = {
        "fibers": {z: _fiber_code(B.fibers[z]) for z in idx},
        "pairs": pairs,
        "all_distinct": all(r["verdict"] == "distinct" for r in pairs),
    }
    return Certificate("NonIsomorphism", {"bundle": digest(dump_bundle(B))}, witnesses,
                       {"method": "fiber-comparison"})


def genuineness_ingredients(G, provenance=None):
    """Assemble the finite ingredients of the genuineness argument.

    ``provenance`` is the NeumannPipeline that produced G.  The certificate
    records nontrivial isotropy witnesses, the Neumann generators of the base
    fibers, pairwise distinctness of the base fibers, and the outcome of
    transformation-groupoid recognition on G.
    """
    if provenance is None:
        raise MissingProvenance("genuineness certificate needs the construction provenance")
    gtext = dump_groupoid(G)
    if dump_groupoid(provenance.groupoid) != gtext:
        raise MissingProvenance("provenance does not reproduce this groupoid")
    base = provenance.base
    iso = isotropy(G)
    a = []
    for x in G.units:
        loops = iso.fibers[x]
        w = loops[1] if len(loops) > 1 else None
        a.append({"unit": x, "arrow": w, "label": None if w is None else G.label(w),
                  "isotropy_order": len(loops)})
    a_ok = all(r["arrow"] is not None for r in a)
    b = []
    for z in base.index_set:
        f = base.fibers[z]
        if isinstance(f, NeumannFiber):
            b.append(dict(f.generator_record(), unit=z, prefix=str(f.prefix)))
        else:
            b.append({"unit": z, "prefix": None})
    b_ok = all(r["prefix"] is not None for r in b)
    c = []
    for y, z in itertools.combinations(base.index_set, 2):
        fy, fz = base.fibers[y], base.fibers[z]
        if isinstance(fy, NeumannFiber) and isinstance(fz, NeumannFiber):
            w = distinguish(fy.prefix, fz.prefix).witnesses
            entry = {"pair": [y, z], "verdict": w["verdict"]}
            if w["verdict"] == "witness":
                entry.update(index=w["index"], degree=w["degree"], holder=w["holder"])
            else:
                entry.update(depth=w["depth"])
        else:
            entry = {"pair": [y, z], "verdict": "no-provenance"}
        c.append(entry)
    c_ok = all(r["verdict"] == "witness" for r in c)
    model = is_transformation_groupoid(G)
    witnesses = {
        "status": "GenuineIngredients" if a_ok and b_ok and c_ok else "NotGenuineIngredients",
        "ingredients": {"nontrivial_isotropy": a_ok, "two_generated": b_ok, "pairwise_distinct": c_ok},
        "isotropy": a,
        "generators": b,
        "distinctness": c,
        "theta": [[th[u] for u in provenance.relation.units] for th in provenance.theta],
        "transformation_model": model.summary(),
        "disclaimer": DISCLAIMER,
    }
    inputs = {"groupoid": digest(gtext), "base": digest(dump_bundle(base))}
    return Certificate("GenuinenessIngredients", inputs, witnesses, {"method": "rebuild-pipeline"})


def isomorphism_certificate(A, B, f=None):
    """Isomorphism certificate for the map f (searched for when omitted);
    a NonIsomorphism certificate with the invariants when none exists."""
    inputs = {"A": digest(dump_groupoid(A)), "B": digest(dump_groupoid(B))}
    if f is None:
        f = groupoid_isomorphic(A, B)
    if f is None:
        ia, ib = GroupoidInvariant.of(A), GroupoidInvariant.of(B)
        witnesses = {"invariant_A": _invariant_json(ia), "invariant_B": _invariant_json(ib),
                     "invariants_differ": ia != ib}
        return Certificate("NonIsomorphism", inputs, witnesses, {"method": "exhaustive-search"})
    return Certificate("Isomorphism", inputs, {"map": list(f)}, {"method": "verify-map"})


def _invariant_json(inv):
    return {"n_units": inv.n_units, "n_arrows": inv.n_arrows,
            "orbits": [[s, o, [list(h) for h in hist], ab, z] for s, o, hist, ab, z in inv.orbits]}


def bisection_certificate(G, basis=None):
    basis = global_bisection_basis(G) if basis is None else basis
    witnesses = {"bisections": [sorted(b.arrows) for b in basis], "count": len(basis)}
    return Certificate("BisectionBasis", {"groupoid": digest(dump_groupoid(G))}, witnesses,
                       {"method": "partition-check"})


# rechecking

@dataclass(frozen=True)
class RecheckResult:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _digest_ok(cert, objects, dumpers):
    for role, dump in dumpers.items():
        if role not in objects:
            return RecheckResult(False, f"input object '{role}' not supplied")
        if digest(dump(objects[role])) != cert.inputs.get(role):
            return RecheckResult(False, f"digest mismatch for '{role}'")
    return None


def recheck(cert, objects=None):
    """Re-validate a certificate from its payload and the input objects it
    references (``objects`` maps input roles to parsed objects)."""
    objects = objects or {}
    method = cert.recheck.get("method")
    if cert.kind == "NonIsomorphism" and method == "prefix-discrepancy":
        return RecheckResult(recheck_distinguish(cert), "replayed distinguish")
    if cert.kind == "NonIsomorphism" and method == "fiber-comparison":
        bad = _digest_ok(cert, objects, {"bundle": dump_bundle})
        if bad is not None:
            return bad
        same = fiber_distinctness_certificate(objects["bundle"]) == cert
        return RecheckResult(same, "replayed fiber comparison")
    if cert.kind == "NonIsomorphism" and method == "exhaustive-search":
        bad = _digest_ok(cert, objects, {"A": dump_groupoid, "B": dump_groupoid})
        if bad is not None:
            return bad
        same = isomorphism_certificate(objects["A"], objects["B"]) == cert
        return RecheckResult(same, "replayed exhaustive search")
    if cert.kind == "Isomorphism":
        bad = _digest_ok(cert, objects, {"A": dump_groupoid, "B": dump_groupoid})
        if bad is not None:
            return bad
        v = verify_isomorphism(cert.witnesses["map"], objects["A"], objects["B"])
        return RecheckResult(v.ok, v.reason or "map verified")
    if cert.kind == "BisectionBasis":
        bad = _digest_ok(cert, objects, {"groupoid": dump_groupoid})
        if bad is not None:
            return bad
        G = objects["groupoid"]
        basis = [Bisection(frozenset(b)) for b in cert.witnesses["bisections"]]
        ok = (is_partition_into_global_bisections(G, basis)
              and len(basis) == cert.witnesses["count"] == G.n_arrows // G.n_units)
        return RecheckResult(ok, "partition verified" if ok else "not a partition into global bisections")
    if cert.kind == "GenuinenessIngredients":
        bad = _digest_ok(cert, objects, {"groupoid": dump_groupoid, "base": dump_bundle})
        if bad is not None:
            return bad
        G, base = objects["groupoid"], objects["base"]
        R = orbit_relation(G)
        theta = [dict(zip(R.units, row)) for row in cert.witnesses["theta"]]
        try:
            pipe = neumann_pipeline(R, base, theta)
            same = genuineness_ingredients(G, pipe) == cert
        except MissingProvenance as exc:
            return RecheckResult(False, str(exc))
        return RecheckResult(same, "pipeline rebuilt and certificate replayed")
    return RecheckResult(False, f"no recheck procedure for {cert.kind}/{method}")


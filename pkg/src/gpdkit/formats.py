"""Canonical text forms of gpdkit objects.

All structured formats are JSON with sorted keys, compact separators and a
trailing newline (see ``certificates.canonical_json``); printing a parsed
canonical file reproduces it byte for byte.
"""

import json
from pathlib import Path

from . import perm as P
from .certificates import canonical_json, digest
from .constructions import BundleAction, FiniteAction
from .errors import FormatError
from .groupoid import EquivRelation, FiniteGroupoid
from .groups import FinPermGroup, GroupBundle, GroupHom, as_finite
from .neumann import NeumannFiber, OddSeqPrefix


def _load(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None


def _need(obj, *keys):
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise FormatError(f"missing fields {missing}")


# groupoids

def groupoid_to_json(G):
    obj = {
        "units": list(G.units),
        "arrows": [{"id": a, "src": G.units[G.src[a]], "tgt": G.units[G.tgt[a]]}
                   for a in range(G.n_arrows)],
        "unit_arrow": {u: G.unit_arrow[i] for i, u in enumerate(G.units)},
        "inverse": {str(a): G.inverse[a] for a in range(G.n_arrows)},
        "compose": sorted([g, h, gh] for (g, h), gh in G.compose.items()),
    }
    if G.labels is not None:
        obj["labels"] = list(G.labels)
    return obj


def dump_groupoid(G):
    return canonical_json(groupoid_to_json(G))


def groupoid_from_json(obj):
    _need(obj, "units", "arrows", "unit_arrow", "inverse", "compose")
    units = tuple(obj["units"])
    if not all(isinstance(u, str) for u in units):
        raise FormatError("unit names must be strings")
    uidx = {u: i for i, u in enumerate(units)}
    arrows = sorted(obj["arrows"], key=lambda a: a["id"])
    if [a["id"] for a in arrows] != list(range(len(arrows))):
        raise FormatError("arrow ids must be dense 0..N-1")
    try:
        src = tuple(uidx[a["src"]] for a in arrows)
        tgt = tuple(uidx[a["tgt"]] for a in arrows)
        unit_arrow = tuple(obj["unit_arrow"][u] for u in units)
        inverse = tuple(obj["inverse"][str(a)] for a in range(len(arrows)))
    except KeyError as exc:
        raise FormatError(f"dangling reference {exc}") from None
    compose = {}
    for triple in obj["compose"]:
        if len(triple) != 3:
            raise FormatError("compose entries are [g, h, gh] triples")
        g, h, gh = triple
        compose[(g, h)] = gh
    try:
        return FiniteGroupoid(units, src, tgt, unit_arrow, inverse, compose, obj.get("labels"))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def load_groupoid(text):
    return groupoid_from_json(_load(text))


# relations

def relation_to_json(R):
    return {"units": list(R.units), "pairs": [list(p) for p in R.sorted_pairs()]}


def dump_relation(R):
    return canonical_json(relation_to_json(R))


def relation_from_json(obj):
    _need(obj, "units", "pairs")
    R = EquivRelation(tuple(obj["units"]), frozenset(tuple(p) for p in obj["pairs"]))
    if not R.is_valid():
        raise FormatError("pairs do not form an equivalence relation on the units")
    return R


def load_relation(text):
    return relation_from_json(_load(text))


# groups and bundles

def group_to_json(G):
    return {"degree": G.degree, "generators": [P.format_perm(g) for g in G.generators]}


def group_from_json(obj):
    _need(obj, "degree", "generators")
    n = obj["degree"]
    return FinPermGroup(n, tuple(P.parse_perm(t, n) for t in obj["generators"]))


def fiber_to_json(desc):
    if isinstance(desc, NeumannFiber):
        return {"neumann": str(desc.prefix)}
    G = as_finite(desc)
    if G is None:
        raise FormatError(f"cannot serialize lazy fiber {desc!r}")
    return group_to_json(G)


def fiber_from_json(obj):
    if isinstance(obj, dict) and "neumann" in obj:
        return NeumannFiber(OddSeqPrefix.parse(obj["neumann"]))
    return group_from_json(obj)


def bundle_to_json(B):
    return {"index_set": list(B.index_set),
            "fibers": {z: fiber_to_json(B.fibers[z]) for z in B.index_set}}


def dump_bundle(B):
    return canonical_json(bundle_to_json(B))


def bundle_from_json(obj):
    _need(obj, "index_set", "fibers")
    idx = tuple(obj["index_set"])
    try:
        return GroupBundle(idx, {z: fiber_from_json(obj["fibers"][z]) for z in idx})
    except KeyError as exc:
        raise FormatError(f"no fiber for index {exc}") from None


def load_bundle(text):
    return bundle_from_json(_load(text))


# actions

def action_to_json(A, group_ref=None):
    els = A.group.elements()
    return {
        "group": group_ref if group_ref is not None else group_to_json(A.group),
        "points": list(A.points),
        "act": [[P.format_perm(g), x, A.act[(g, x)]] for g in els for x in A.points],
    }


def dump_action(A, group_ref=None):
    return canonical_json(action_to_json(A, group_ref))


def action_from_json(obj, base_dir=None):
    _need(obj, "group", "points", "act")
    gref = obj["group"]
    if isinstance(gref, str):
        path = Path(base_dir or ".") / gref
        try:
            G = FinPermGroup.from_text(path.read_text())
        except OSError as exc:
            raise FormatError(f"cannot read group file {path}: {exc}") from None
    else:
        G = group_from_json(gref)
    act = {}
    for entry in obj["act"]:
        g, x, y = entry
        act[(P.parse_perm(g, G.degree), x)] = y
    return FiniteAction(G, tuple(obj["points"]), act)


def load_action(text, base_dir=None):
    return action_from_json(_load(text), base_dir)


def bundle_action_to_json(D):
    B = D.bundle
    return {
        "relation": relation_to_json(D.relation),
        "fibers": {x: group_to_json(B.finite(x)) for x in B.index_set},
        "delta": [{"pair": [y, x], "images": [P.format_perm(g) for g in D.delta[(y, x)].images]}
                  for (y, x) in D.relation.sorted_pairs()],
    }


def dump_bundle_action(D):
    return canonical_json(bundle_action_to_json(D))


def bundle_action_from_json(obj):
    _need(obj, "relation", "fibers", "delta")
    R = relation_from_json(obj["relation"])
    fibers = {x: group_from_json(obj["fibers"][x]) for x in R.units}
    delta = {}
    for entry in obj["delta"]:
        y, x = entry["pair"]
        tgt = fibers[y]
        delta[(y, x)] = GroupHom(fibers[x], tgt,
                                 tuple(P.parse_perm(t, tgt.degree) for t in entry["images"]))
    return BundleAction(R, GroupBundle(R.units, fibers), delta)


def load_bundle_action(text):
    return bundle_action_from_json(_load(text))


def object_digest(text):
    return digest(text)

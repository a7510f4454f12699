"""
Finite groupoids, isotropy and global bisections
================================================

Groupoids are stored as explicit composition tables over dense arrow ids.
We build a few, look at their isotropy and components, and split a
transitive one into global bisections.
"""

from gpdkit.constructions import BundleAction, FiniteAction, relation_groupoid, semidirect, \
    transformation_groupoid
from gpdkit.groupoid import (EquivRelation, components, disjoint_union, global_bisection_basis,
                             icc_check, isotropy, orbit_relation, validate)
from gpdkit.groups import cyclic_group, symmetric_group

# The full relation on three points: nine arrows, no isotropy.
R = EquivRelation.full(("a", "b", "c"))
pairs = relation_groupoid(R)
print("pair groupoid:", pairs.n_arrows, "arrows, valid =", validate(pairs).ok)

# S3 acting on {0, 1, 2}: isotropy at each point is a copy of S2.
act = FiniteAction.from_function(symmetric_group(3), "012", lambda g, x: str(g[int(x)]))
T = transformation_groupoid(act)
iso = isotropy(T)
print("S3 on 3 points, isotropy orders:", [iso.order(x) for x in T.units])

# Z/2 over a two-point relation, next to the pair groupoid.
Z = semidirect(BundleAction.trivial(EquivRelation.full(("p", "q")), cyclic_group(2)))
G = disjoint_union([pairs, Z])
print("orbits:", orbit_relation(G).classes())
print("component sizes:", [C.n_arrows for C in components(G)])

# Finite groupoids are icc exactly when they have no isotropy.
for name, H in (("pairs", pairs), ("S3 action", T)):
    v = icc_check(H)
    print(f"{name}: icc={v.icc}", "" if v.icc else f"(witness arrow {v.witness})")

# A transitive groupoid with n units and N arrows is a disjoint union of N/n bisections.
basis = global_bisection_basis(T)
print(len(basis), "global bisections of", T.n_arrows, "arrows")
for b in basis[:3]:
    print("  ", b.as_map(T))

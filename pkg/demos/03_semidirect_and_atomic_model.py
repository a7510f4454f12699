"""
Semidirect products and the atomic transformation model
=======================================================

A bundle of groups over an equivalence relation, with isomorphisms between
fibers along related pairs, gives a semidirect-product groupoid.  Every
transitive finite groupoid is also the transformation groupoid of some
group action, and we can build that action together with the isomorphism.
"""

import random

from gpdkit.constructions import (atomic_transformation_model, canonical_shift_action,
                                  neumann_pipeline, orbit_indexed_bundle, semidirect,
                                  theta_from_basis, verify_isomorphism)
from gpdkit.groupoid import EquivRelation, isotropy, orbit_relation, validate
from gpdkit.groups import GroupBundle, cyclic_group
from gpdkit.isocheck import is_transformation_groupoid
from gpdkit.neumann import NeumannFiber, OddSeqPrefix
from gpdkit.suite import random_bundle_action

rng = random.Random(9)
D = random_bundle_action(rng, max_units=4, max_order=4)
G = semidirect(D)
print("random bundle action over", D.relation.classes())
print("  semidirect:", G.n_arrows, "arrows, valid =", validate(G).ok,
      "orbit relation matches =", orbit_relation(G) == D.relation)

# Orbit-indexed bundles: the fiber at x is the product of base fibers at theta_n(x).
R = EquivRelation.full(("x", "y", "z"))
base = GroupBundle(R.units, {"x": cyclic_group(2), "y": cyclic_group(3), "z": cyclic_group(2)})
theta = theta_from_basis(R)
H = orbit_indexed_bundle(R, base, theta)
S = semidirect(canonical_shift_action(R, H, theta))
print("shift-action groupoid:", S.n_arrows, "arrows, isotropy order",
      isotropy(S).order("x"))

# The atomic model: Z/n x Gamma acting on Z/n by translation in the first factor.
M = atomic_transformation_model(S)
print("model group order", M.action.group.order(), "on", len(M.action.points), "points;",
      "isomorphism verified =", bool(verify_isomorphism(M.phi, M.model, S)))

# The same pipeline over Neumann fibers, which are seen through their order-3 shadow.
nbase = GroupBundle(R.units, {u: NeumannFiber(OddSeqPrefix.parse(c))
                              for u, c in zip(R.units, ("5,7,9", "5,7,11", "5,9,11"))})
pipe = neumann_pipeline(R, nbase)
print("Neumann pipeline:", pipe.groupoid.n_arrows, "arrows")
print(is_transformation_groupoid(pipe.groupoid).summary())

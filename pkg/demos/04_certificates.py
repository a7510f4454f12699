"""
Certificates and rechecking
===========================

Every decision comes with a JSON certificate that names its inputs by
content digest and carries enough witness data to be rechecked later
without trusting the code that produced it.
"""

import random

from gpdkit import formats as F
from gpdkit.certificates import Certificate
from gpdkit.constructions import neumann_pipeline, relation_groupoid
from gpdkit.groupoid import EquivRelation, relabel_arrows
from gpdkit.groups import GroupBundle
from gpdkit.isocheck import (bisection_certificate, fiber_distinctness_certificate,
                             genuineness_ingredients, isomorphism_certificate, recheck)
from gpdkit.neumann import NeumannFiber, OddSeqPrefix

R = EquivRelation.full(("x", "y", "z"))
A = relation_groupoid(R)
ids = list(range(A.n_arrows))
random.Random(0).shuffle(ids)
B = relabel_arrows(A, ids)

iso = isomorphism_certificate(A, B)
print(iso.kind, "-> recheck:", recheck(iso, {"A": A, "B": B}).reason)

bis = bisection_certificate(A)
print(bis.kind, bis.witnesses["count"], "bisections -> recheck:",
      recheck(bis, {"groupoid": A}).reason)

base = GroupBundle(R.units, {u: NeumannFiber(OddSeqPrefix.parse(c))
                             for u, c in zip(R.units, ("5,7,9", "5,7,11", "5,9,11"))})
fib = fiber_distinctness_certificate(base)
print("fibers pairwise distinct:", fib.witnesses["all_distinct"])

# Genuineness needs the construction's provenance, not just the groupoid.
pipe = neumann_pipeline(R, base)
gen = genuineness_ingredients(pipe.groupoid, pipe)
print("status:", gen.witnesses["status"])
print("ingredients:", gen.witnesses["ingredients"])

# Round trip through text, then recheck against the serialized inputs.
text = gen.to_text()
back = Certificate.from_text(text)
G2 = F.load_groupoid(F.dump_groupoid(pipe.groupoid))
print("round trip exact:", back.to_text() == text,
      "| recheck:", recheck(back, {"groupoid": G2, "base": base}).reason)

# A tampered input is caught by the digest.
print("against the wrong groupoid:", recheck(back, {"groupoid": A, "base": base}).reason)

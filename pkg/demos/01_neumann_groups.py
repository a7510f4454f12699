"""
Neumann groups from odd sequences
=================================

A strictly increasing sequence of odd numbers >= 5 determines a 2-generated
permutation group.  Here we only ever see a finite prefix, which is enough to
evaluate words, compute orders and tell two groups apart.
"""

from gpdkit import perm as P
from gpdkit.neumann import (OddSeqPrefix, Point, alpha_order_truncated, block_restriction,
                            distinguish, invariant_report, word_apply)

U = OddSeqPrefix.parse("5,7,9")
V = OddSeqPrefix.parse("5,7,11")

# Words act on points "block:slot", rightmost letter first.
for w in ("a", "b", "bbb", "abAB"):
    print(f"{w:>5} sends 1:1 to {word_apply(U, w, Point(1, 1))}")

# On block j the generators are a u_j-cycle and a 3-cycle.
b = block_restriction(U, 3)
print("block 3:", P.format_perm(b.alpha), "and", P.format_perm(b.beta))
print("alpha on the first three blocks has order", alpha_order_truncated(U, 3))

# Each block generates an alternating group; big blocks are declared, not enumerated.
for blk in invariant_report(OddSeqPrefix.parse("5,7,9,11")):
    print(f"  block {blk.block}: A_{blk.degree}, order {blk.order} ({blk.status})")

# The first differing entry gives a normal subgroup only one group has.
cert = distinguish(U, V)
print(cert.to_text())

"""B.H. Neumann's 2-generated groups, evaluated on finite prefixes.

A strictly increasing sequence U = (u_1, u_2, ...) of odd integers >= 5
labels a group generated by two permutations of the points x_{j,k}
(1 <= k <= u_j): ``alpha`` cycles every block, ``beta`` 3-cycles the first
three slots of every block.  Only a finite prefix of U is ever known, so
anything that would touch a block past the prefix raises BlockOutOfRange.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

from . import perm as P
from .certificates import Certificate, digest
from .errors import BlockOutOfRange, InvalidPoint, InvalidPrefix, RecognitionFailure
from .groups import DEFAULT_CLOSURE_CAP, FinPermGroup, LazyGroup, is_alternating

LETTERS = "aAbB"


@dataclass(frozen=True)
class OddSeqPrefix:
    entries: tuple

    def __post_init__(self):
        entries = tuple(int(u) for u in self.entries)
        if not entries:
            raise InvalidPrefix("prefix must have at least one entry")
        for u in entries:
            if u % 2 == 0 or u < 5:
                raise InvalidPrefix(f"entry {u} is not an odd integer >= 5")
        if any(a >= b for a, b in zip(entries, entries[1:])):
            raise InvalidPrefix(f"{entries} is not strictly increasing")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, text):
        try:
            return cls(tuple(int(t) for t in text.strip().split(",")))
        except ValueError as exc:
            if isinstance(exc, InvalidPrefix):
                raise
            raise InvalidPrefix(f"bad prefix {text!r}") from None

    def __str__(self):
        return ",".join(map(str, self.entries))

    def to_text(self):
        return str(self) + "\n"

    def __len__(self):
        return len(self.entries)

    def block_length(self, j):
        if not 1 <= j <= len(self.entries):
            raise BlockOutOfRange(f"block {j} is outside the prefix {self} (tail unknown)")
        return self.entries[j - 1]


@dataclass(frozen=True)
class Point:
    block: int
    slot: int

    @classmethod
    def parse(cls, text):
        try:
            j, k = text.strip().split(":")
            return cls(int(j), int(k))
        except ValueError:
            raise InvalidPoint(f"bad point {text!r}, expected j:k") from None

    def __str__(self):
        return f"{self.block}:{self.slot}"


@dataclass(frozen=True)
class GeneratorWord:
    """Word over a (alpha), A (alpha⁻¹), b (beta), B (beta⁻¹)."""

    letters: str = ""

    def __post_init__(self):
        bad = set(self.letters) - set(LETTERS)
        if bad:
            raise InvalidPoint(f"word letters must be in {LETTERS!r}, got {sorted(bad)}")

    def __str__(self):
        return self.letters

    def __len__(self):
        return len(self.letters)


@dataclass(frozen=True)
class BlockGenerators:
    degree: int
    alpha: tuple
    beta: tuple


def _check(U, p):
    u = U.block_length(p.block)
    if not 1 <= p.slot <= u:
        raise InvalidPoint(f"slot {p.slot} outside 1..{u} in block {p.block}")
    return u


def _step(c, k, u):
    if c == "a":
        return k + 1 if k < u else 1
    if c == "A":
        return k - 1 if k > 1 else u
    if k > 3:
        return k
    if c == "b":
        return k % 3 + 1
    return (k - 2) % 3 + 1


def alpha_apply(U, p):
    u = _check(U, p)
    return Point(p.block, _step("a", p.slot, u))


def beta_apply(U, p):
    u = _check(U, p)
    return Point(p.block, _step("b", p.slot, u))


def word_apply(U, w, p):
    """Apply w to p, rightmost letter first."""
    if isinstance(w, str):
        w = GeneratorWord(w)
    u = _check(U, p)
    k = p.slot
    for c in reversed(w.letters):
        k = _step(c, k, u)
    return Point(p.block, k)


def word_reduce(w):
    """Cancel adjacent inverse pairs and reduce beta-runs modulo 3.

    beta⁻¹ is rewritten as beta·beta.  The result acts identically on every
    point but is not a normal form for equality in the group.
    """
    if isinstance(w, str):
        w = GeneratorWord(w)
    stack = []
    for c in w.letters.replace("B", "bb"):
        if stack and {stack[-1], c} == {"a", "A"}:
            stack.pop()
        elif c == "b" and stack[-2:] == ["b", "b"]:
            del stack[-2:]
        else:
            stack.append(c)
    return GeneratorWord("".join(stack))


def block_restriction(U, j):
    n = U.block_length(j)
    return BlockGenerators(n, P.from_cycles(n, [list(range(n))]), P.from_cycles(n, [[0, 1, 2]]))


def block_group(U, j):
    b = block_restriction(U, j)
    return FinPermGroup(b.degree, (b.alpha, b.beta))


def alpha_order_truncated(U, m):
    if not 1 <= m <= len(U):
        raise BlockOutOfRange(f"depth {m} is outside the prefix {U}")
    return math.lcm(*U.entries[:m])


@dataclass(frozen=True)
class BlockInvariant:
    block: int
    degree: int
    order: int
    status: str  # "enumerated" or "declared"


@lru_cache(maxsize=64)
def _recognize_block(u, cap):
    n = block_restriction(OddSeqPrefix((u,)), 1)
    G = FinPermGroup(u, (n.alpha, n.beta))
    deg = is_alternating(G, cap)
    if deg != u:
        raise RecognitionFailure(f"block closure of degree {u} is not A_{u}")
    return G.order(cap)


def invariant_report(U, m=None, cap=DEFAULT_CLOSURE_CAP):
    """Per-block alternating recognition; blocks whose A_u exceeds ``cap``
    are reported as declared rather than enumerated."""
    m = len(U) if m is None else m
    if not 1 <= m <= len(U):
        raise BlockOutOfRange(f"depth {m} is outside the prefix {U}")
    out = []
    for j in range(1, m + 1):
        u = U.entries[j - 1]
        expected = math.factorial(u) // 2
        if expected <= cap:
            out.append(BlockInvariant(j, u, _recognize_block(u, cap), "enumerated"))
        else:
            out.append(BlockInvariant(j, u, expected, "declared"))
    return out


def alternating_invariant(U, m=None, cap=DEFAULT_CLOSURE_CAP):
    return sorted(b.degree for b in invariant_report(U, m, cap))


def distinguish(U, V):
    """Witness that the Neumann groups of U and V differ, from prefixes.

    At the first index i with u_i != v_i, the smaller entry d occurs in one
    sequence and, both being strictly increasing, never in the other; A_d is
    then a finite normal subgroup of exactly one of the two groups.
    """
    inputs = {"U": digest(U.to_text()), "V": digest(V.to_text())}
    depth = min(len(U), len(V))
    base = {"U": str(U), "V": str(V)}
    for i in range(depth):
        a, b = U.entries[i], V.entries[i]
        if a != b:
            d = min(a, b)
            witnesses = dict(
                base,
                verdict="witness",
                index=i + 1,
                entry_U=a,
                entry_V=b,
                order_U=math.factorial(a) // 2,
                order_V=math.factorial(b) // 2,
                degree=d,
                holder="U" if a < b else "V",
                claim=f"exactly one group has a finite normal subgroup A_{d} of order {math.factorial(d) // 2}",
            )
            return Certificate("NonIsomorphism", inputs, witnesses, {"method": "prefix-discrepancy"})
    witnesses = dict(base, verdict="inconclusive", depth=depth)
    return Certificate("NonIsomorphism", inputs, witnesses, {"method": "prefix-discrepancy"})


def recheck_distinguish(cert):
    w = cert.witnesses
    U, V = OddSeqPrefix.parse(w["U"]), OddSeqPrefix.parse(w["V"])
    if cert.inputs != {"U": digest(U.to_text()), "V": digest(V.to_text())}:
        return False
    return distinguish(U, V) == cert


def points(U):
    """All points of the truncated set, block by block."""
    return [Point(j, k) for j, u in enumerate(U.entries, 1) for k in range(1, u + 1)]


def _truncated(U, w):
    pts = points(U)
    index = {p: i for i, p in enumerate(pts)}
    return tuple(index[word_apply(U, w, p)] for p in pts)


def truncation_generators(U):
    """alpha and beta as permutations of the sum(U) truncated points."""
    return _truncated(U, "a"), _truncated(U, "b")


class NeumannTruncation(LazyGroup):
    """The image of the Neumann group in the symmetric group of the
    truncated point set; elements are permutation tuples, never enumerated."""

    def __init__(self, U):
        self.prefix = U
        self.degree = sum(U.entries)
        self.generators = truncation_generators(U)

    def identity(self):
        return P.identity(self.degree)

    def mul(self, a, b):
        return P.compose(a, b)

    def inv(self, a):
        return P.inverse(a)

    def evaluate(self, w):
        return _truncated(self.prefix, w)


@dataclass(frozen=True)
class NeumannFiber:
    """A bundle fiber standing for the Neumann group of ``prefix``.

    ``group`` is the finite subgroup materialized inside groupoids; by
    default the cyclic subgroup generated by beta acting on the truncated
    points.
    """

    prefix: OddSeqPrefix
    group: FinPermGroup = field(default=None)

    def __post_init__(self):
        if self.group is None:
            _, beta = truncation_generators(self.prefix)
            object.__setattr__(self, "group", FinPermGroup(len(beta), (beta,)))

    def generator_record(self):
        alpha, beta = truncation_generators(self.prefix)
        return {"alpha": P.format_perm(alpha), "beta": P.format_perm(beta)}

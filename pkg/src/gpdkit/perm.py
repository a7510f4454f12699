"""Permutations of {0..n-1} stored as image tuples.

Composition follows function order: ``compose(p, q)`` applies ``q`` first.
The text formats are 1-indexed: cycle notation ``(1 2 3)(4 5)`` or an
image list ``[2,3,1,5,4]``.
"""

import math
import re

from .errors import FormatError

Perm = tuple


def identity(n):
    return tuple(range(n))


def is_perm(p, n=None):
    if n is not None and len(p) != n:
        return False
    return sorted(p) == list(range(len(p)))


def compose(p, q):
    """Return p∘q, i.e. x ↦ p[q[x]]."""
    return tuple(p[i] for i in q)


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_identity(p):
    return all(i == j for i, j in enumerate(p))


def from_cycles(n, cycles):
    img = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a] = b
    return tuple(img)


def cycles(p):
    """Nontrivial cycles, each starting at its least point."""
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def cycle_type(p):
    return sorted((len(c) for c in cycles(p)), reverse=True)


def is_even(p):
    return sum(len(c) - 1 for c in cycles(p)) % 2 == 0


def order(p):
    return math.lcm(*(len(c) for c in cycles(p))) if not is_identity(p) else 1


def power(p, k):
    if k < 0:
        p, k = inverse(p), -k
    out = identity(len(p))
    base = p
    while k:
        if k & 1:
            out = compose(base, out)
        base = compose(base, base)
        k >>= 1
    return out


def conjugate(g, h):
    """g h g⁻¹."""
    return compose(compose(g, h), inverse(g))


def relocate(p, offset, n):
    """Embed p as acting on points offset..offset+len(p)-1 of {0..n-1}."""
    img = list(range(n))
    for i, j in enumerate(p):
        img[offset + i] = offset + j
    return tuple(img)


def format_perm(p):
    cyc = cycles(p)
    if not cyc:
        return "()"
    return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cyc)


_CYCLE = re.compile(r"\(\s*([\d\s,]*)\)")


def parse_perm(text, degree=None):
    """Parse cycle notation or an image list (both 1-indexed)."""
    s = text.strip()
    if s.startswith("["):
        if not s.endswith("]"):
            raise FormatError(f"bad image list {text!r}")
        body = s[1:-1].strip()
        imgs = [int(t) - 1 for t in re.split(r"[\s,]+", body) if t] if body else []
        n = degree if degree is not None else len(imgs)
        if len(imgs) > n:
            raise FormatError(f"image list longer than degree {n}")
        imgs += list(range(len(imgs), n))
        if not is_perm(imgs):
            raise FormatError(f"not a permutation: {text!r}")
        return tuple(imgs)
    pos = 0
    cyc_list = []
    for m in _CYCLE.finditer(s):
        if s[pos:m.start()].strip():
            raise FormatError(f"bad cycle notation {text!r}")
        pos = m.end()
        pts = [int(t) - 1 for t in re.split(r"[\s,]+", m.group(1).strip()) if t]
        if len(set(pts)) != len(pts) or any(x < 0 for x in pts):
            raise FormatError(f"bad cycle in {text!r}")
        if pts:
            cyc_list.append(pts)
    if s[pos:].strip() or not s:
        raise FormatError(f"bad cycle notation {text!r}")
    top = max((max(c) + 1 for c in cyc_list), default=0)
    n = degree if degree is not None else max(top, 1)
    if top > n:
        raise FormatError(f"point {top} exceeds degree {n}")
    seen = [x for c in cyc_list for x in c]
    if len(seen) != len(set(seen)):
        # non-disjoint cycles: multiply left to right as functions, rightmost first
        out = identity(n)
        for c in cyc_list:
            out = compose(out, from_cycles(n, [c]))
        return out
    return from_cycles(n, cyc_list)

"""Z^d with edges removed around labelled blocks.

Every construction in this package starts from the lattice and cuts the
edges between a block and the rest of the graph except for a few kept
ones.  ``label(p)`` names the block containing lattice point ``p`` (None
outside every block); an edge between points with different labels exists
only if ``keep(p, q, label_p, label_q)`` says so.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right

from ..space import Space


def surgery_lattice(d: int, label, keep, name: str, provenance: dict, budget=None) -> Space:
    def neighbors(v):
        p, t = v[:-1], v[-1]
        lp = label(p)
        out = []
        for i in range(d):
            for s in (1, -1):
                q = p[:i] + (p[i] + s,) + p[i + 1:]
                lq = label(q)
                if lp != lq and not keep(p, q, lp, lq):
                    continue
                out.append(((*q, t), 1))
        return out

    kw = {} if budget is None else {"budget": budget}
    return Space(neighbors, scale=1, unit_lengths=True, name=name, provenance=provenance, **kw)


def box_points(ranges):
    """All lattice points of a product of inclusive integer ranges ``(lo, hi)``."""
    return itertools.product(*(range(lo, hi + 1) for lo, hi in ranges))


def l1_ball_points(center, r):
    """Lattice points at L1 distance <= r from ``center``."""
    d = len(center)

    def rec(i, left):
        if i == d - 1:
            c = center[i]
            for x in range(c - left, c + left + 1):
                yield (x,)
            return
        c = center[i]
        for x in range(c - left, c + left + 1):
            for rest in rec(i + 1, left - abs(x - c)):
                yield (x,) + rest

    return rec(0, r)


def on_axis(p) -> bool:
    return all(c == 0 for c in p[1:])


class LazySequence:
    """Increasing integer sequence ``a_1 < a_2 < ...`` extended on demand."""

    def __init__(self, first, step):
        self.values = [first]
        self.step = step  # step(n, a_n) -> a_(n+1)

    def upto(self, x):
        """Extend until the last stored value exceeds ``x``."""
        vals = self.values
        while vals[-1] <= x:
            n = len(vals)
            vals.append(self.step(n, vals[-1]))
        return vals

    def __getitem__(self, n):
        """``a_n`` for n >= 1."""
        vals = self.values
        while len(vals) < n:
            k = len(vals)
            vals.append(self.step(k, vals[-1]))
        return vals[n - 1]

    def index_le(self, x) -> int:
        """Largest n with a_n <= x (0 when none)."""
        return bisect_right(self.upto(x), x)

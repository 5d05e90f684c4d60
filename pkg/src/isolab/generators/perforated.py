"""Z^d perforated around boxes whose boundary is mostly cut.

``A_n`` is the box ``x_1 in I_n``, ``|x_i| <= n/2`` for i >= 2, where the
axis intervals ``I_n`` have length ``floor(sqrt n)`` and consecutive ones
are ``2^n`` apart.  Each face of ``A_n`` is tiled into cubes of side
``floor(sqrt n)`` (the remainder joins the last tile), and of all the
edges leaving ``A_n`` only the one at the center of each tile is kept.
"""

from __future__ import annotations

from functools import lru_cache
from math import isqrt

from ..errors import BudgetExceeded, InvalidInput
from ..space import region, vid
from ._surgery import LazySequence, box_points, surgery_lattice
from .base import Generated, _prov


def interval_length(n: int) -> int:
    return isqrt(n)


def half_height(n: int) -> int:
    return n // 2


def _tiles(lo, hi, side):
    """Split ``[lo, hi]`` into runs of ``side`` cells, remainder in the last run."""
    length = hi - lo + 1
    count = max(1, length // side)
    out = []
    for k in range(count):
        a = lo + k * side
        b = hi if k == count - 1 else a + side - 1
        out.append((a, b))
    return out


def tile_center(a, b):
    return a + (b - a) // 2


class Perforated:
    def __init__(self, d: int):
        self.d = d
        self.starts = LazySequence(1, lambda n, s: s + interval_length(n) - 1 + 2 ** n)
        self.label = lru_cache(maxsize=1 << 20)(self._label)
        self._kept = lru_cache(maxsize=None)(self._kept_edges)

    def ranges(self, n):
        s = self.starts[n]
        h = half_height(n)
        return [(s, s + interval_length(n) - 1)] + [(-h, h)] * (self.d - 1)

    def _label(self, p):
        x = p[0]
        if x < 1:
            return None
        n = self.starts.index_le(x)
        if n == 0 or x > self.starts[n] + interval_length(n) - 1:
            return None
        h = half_height(n)
        if all(abs(c) <= h for c in p[1:]):
            return n
        return None

    def _kept_edges(self, n):
        """Kept crossing edges of A_n as (inside point, outside point) pairs."""
        rng = self.ranges(n)
        side = interval_length(n)
        kept = set()
        for i in range(self.d):
            others = [j for j in range(self.d) if j != i]
            tilings = [_tiles(*rng[j], side) for j in others]
            for sign in (-1, 1):
                fixed = rng[i][0] if sign < 0 else rng[i][1]
                for combo in box_points([(0, len(t) - 1) for t in tilings]):
                    p = [0] * self.d
                    p[i] = fixed
                    for j, t, k in zip(others, tilings, combo):
                        p[j] = tile_center(*t[k])
                    q = list(p)
                    q[i] += sign
                    kept.add((tuple(p), tuple(q)))
        return frozenset(kept)

    def keep(self, p, q, lp, lq):
        if lp is not None and (p, q) in self._kept(lp):
            return True
        if lq is not None and (q, p) in self._kept(lq):
            return True
        return False

    def volume(self, n):
        return interval_length(n) * (2 * half_height(n) + 1) ** (self.d - 1)

    def boundary_count(self, n):
        """|d_1 A_n|: endpoints of the kept crossing edges."""
        return len({v for e in self._kept(n) for v in e})


def gen_perforated(d: int = 2, n_list=(4, 9, 16, 25), budget: int = 2_000_000) -> Generated:
    if d < 2:
        raise InvalidInput("d must be >= 2")
    n_list = sorted({int(n) for n in n_list})
    if not n_list or n_list[0] < 1:
        raise InvalidInput("n_list must hold positive integers")
    model = Perforated(d)
    if sum(model.volume(n) for n in n_list) > budget:
        raise BudgetExceeded(budget, "perforated family")
    space = surgery_lattice(d, model.label, model.keep, f"perforated(d={d})",
                            _prov("perforated", {"d": d, "n_list": n_list}))
    family = {}
    counts = {}
    for n in n_list:
        A = region(space, (vid(*p) for p in box_points(model.ranges(n))))
        family[f"A_{n}"] = A
        counts[f"|A_{n}|"] = model.volume(n)
        counts[f"|dA_{n}|"] = model.boundary_count(n)
    info = {"intervals": {f"I_{n}": list(model.ranges(n)[0]) for n in n_list},
            "tile_side": {f"A_{n}": interval_length(n) for n in n_list}}
    return Generated(space, named=dict(family), families={"A": family}, counts=counts,
                     info=info, model=model)

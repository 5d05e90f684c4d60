"""Z^d with pairs of overlapping balls cut off except along the axis.

``C_n`` is the union of the L1 balls of radius n about
``x_n = (2^(n+1), n - L, 0, ...)`` and ``x'_n = (2^(n+1), L - n, 0, ...)``
with ``L = ceil(log2 n)``.  The two balls meet in a thin waist around the
axis, and the only edges leaving ``C_n`` are the two axis edges.
"""

from __future__ import annotations

from functools import lru_cache

from ..errors import BudgetExceeded, InvalidInput
from ..space import region, vid
from ._surgery import l1_ball_points, on_axis, surgery_lattice
from .base import Generated, _prov


def log_offset(n: int) -> int:
    """``ceil(log2 n)``."""
    return (n - 1).bit_length()


def centers(n: int, d: int):
    off = n - log_offset(n)
    tail = (0,) * (d - 2)
    return (2 ** (n + 1), off) + tail, (2 ** (n + 1), -off) + tail


def poles(n: int, d: int):
    """The points of C_n farthest from the waist, one in each ball."""
    (a, b) = centers(n, d)
    return (a[0], a[1] + n) + a[2:], (b[0], b[1] - n) + b[2:]


def _l1(p, q):
    return sum(abs(x - y) for x, y in zip(p, q))


class Constricted:
    def __init__(self, d: int):
        self.d = d
        self.label = lru_cache(maxsize=1 << 20)(self._label)

    def _label(self, p):
        x = p[0]
        if x < 2:
            return None
        guess = x.bit_length() - 2
        for n in (guess - 1, guess, guess + 1, guess + 2):
            if n < 1:
                continue
            a, b = centers(n, self.d)
            if _l1(p, a) <= n or _l1(p, b) <= n:
                return n
        return None

    @staticmethod
    def keep(p, q, lp, lq):
        return on_axis(p) and on_axis(q)

    def points(self, n):
        a, b = centers(n, self.d)
        return set(l1_ball_points(a, n)) | set(l1_ball_points(b, n))


def gen_constricted(d: int = 2, n_list=(8, 16, 32), budget: int = 2_000_000) -> Generated:
    if d < 2:
        raise InvalidInput("d must be >= 2")
    n_list = sorted({int(n) for n in n_list})
    if not n_list or n_list[0] < 1:
        raise InvalidInput("n_list must hold positive integers")
    model = Constricted(d)
    space = surgery_lattice(d, model.label, model.keep, f"constricted(d={d})",
                            _prov("constricted", {"d": d, "n_list": n_list}))
    family = {}
    named = {}
    counts = {}
    used = 0
    for n in n_list:
        pts = model.points(n)
        used += len(pts)
        if used > budget:
            raise BudgetExceeded(budget, "constricted family")
        C = region(space, (vid(*p) for p in pts))
        family[f"C_{n}"] = C
        named[f"C_{n}"] = C
        named[f"equator_{n}"] = region(space, (vid(*p) for p in pts if p[1] == 0))
        named[f"poles_{n}"] = region(space, (vid(*p) for p in poles(n, d)))
        counts[f"|C_{n}|"] = len(pts)
        counts[f"|equator_{n}|"] = len(named[f"equator_{n}"])
        counts[f"L_{n}"] = log_offset(n)
    info = {"centers": {f"C_{n}": [list(c) for c in centers(n, d)] for n in n_list}}
    return Generated(space, named=named, families={"C": family}, counts=counts,
                     info=info, model=model)

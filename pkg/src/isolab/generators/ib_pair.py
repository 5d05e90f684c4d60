"""A quasi-isometric pair: balls are isoperimetric in X but not in X'.

In ``X`` the L1 balls ``A_n`` of radius n sit on the axis, consecutive ones
``2^n`` apart, and every edge leaving them is cut except the two on the
axis.  ``X'`` is the image of ``X`` under the map fixing ``x_1`` and
multiplying the other coordinates by 4: every edge orthogonal to the axis
becomes a chain of four unit edges, axis-parallel edges are unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..coarse import CoarseMap
from ..errors import BudgetExceeded, InvalidInput
from ..space import Space, region, vid
from ._surgery import LazySequence, l1_ball_points, on_axis, surgery_lattice
from .base import Generated, _prov

RATIO = 4


class IbModel:
    def __init__(self, d: int):
        self.d = d
        self.centers = LazySequence(0, lambda n, c: c + 2 * n + 1 + 2 ** n)
        self.label = lru_cache(maxsize=1 << 20)(self._label)

    def center(self, n):
        return (self.centers[n],) + (0,) * (self.d - 1)

    def _label(self, p):
        x = p[0]
        if x < -1:
            return None
        n = self.centers.index_le(x)
        for m in (n, n + 1):
            if m < 1:
                continue
            c = self.centers[m]
            if abs(x - c) + sum(abs(y) for y in p[1:]) <= m:
                return m
        return None

    @staticmethod
    def keep(p, q, lp, lq):
        return on_axis(p) and on_axis(q)

    def has_edge(self, p, q) -> bool:
        lp, lq = self.label(p), self.label(q)
        return lp == lq or self.keep(p, q, lp, lq)

    # X' coordinates: (x1, 4 x2, ..., 4 xd) for lattice points, plus chain points.

    def split(self, y):
        """Return (base point in X, axis, offset) for a point of X'."""
        axis = None
        base = [y[0]]
        off = 0
        for i, c in enumerate(y[1:], start=1):
            q, r = divmod(c, RATIO)
            if r:
                if axis is not None:
                    return None
                axis, off = i, r
            base.append(q)
        return tuple(base), axis, off

    def prime_neighbors(self, v):
        y, t = v[:-1], v[-1]
        parts = self.split(y)
        if parts is None:
            return []
        base, axis, off = parts
        out = []
        if axis is None:
            for i in range(self.d):
                for s in (1, -1):
                    q = base[:i] + (base[i] + s,) + base[i + 1:]
                    if not self.has_edge(base, q):
                        continue
                    w = y[:i] + (y[i] + s,) + y[i + 1:]
                    out.append(((*w, t), 1))
            return out
        # interior of a chain: only present if the edge of X it replaces is kept
        top = base[:axis] + (base[axis] + 1,) + base[axis + 1:]
        if not self.has_edge(base, top):
            return []
        for s in (1, -1):
            w = y[:axis] + (y[axis] + s,) + y[axis + 1:]
            out.append(((*w, t), 1))
        return out

    def forward(self, v):
        return (v[0],) + tuple(RATIO * c for c in v[1:-1]) + (v[-1],)

    def preimage(self, w):
        parts = self.split(w[:-1])
        if parts is None or parts[1] is not None:
            return []
        return [(*parts[0], w[-1])]

    def image_points(self, pts):
        """Points of X' making up the image of a point set of X (with chains)."""
        pts = set(pts)
        out = set()
        for p in pts:
            out.add(self.forward((*p, 0))[:-1])
            for i in range(1, self.d):
                q = p[:i] + (p[i] + 1,) + p[i + 1:]
                if q in pts and self.has_edge(p, q):
                    for k in range(1, RATIO):
                        y = list(self.forward((*p, 0))[:-1])
                        y[i] += k
                        out.add(tuple(y))
        return out


@dataclass
class IbPair:
    x: Generated
    x_prime: Generated
    map: CoarseMap


def gen_ib_pair(d: int = 2, n_list=tuple(range(4, 10)), budget: int = 2_000_000) -> IbPair:
    if d < 2:
        raise InvalidInput("d must be >= 2")
    n_list = sorted({int(n) for n in n_list})
    if not n_list or n_list[0] < 1:
        raise InvalidInput("n_list must hold positive integers")
    model = IbModel(d)
    params = {"d": d, "n_list": n_list}
    X = surgery_lattice(d, model.label, model.keep, f"ib_pair.X(d={d})",
                        _prov("ib_pair", {**params, "side": "X"}))
    Xp = Space(model.prime_neighbors, scale=1, unit_lengths=True, name=f"ib_pair.X'(d={d})",
               provenance=_prov("ib_pair", {**params, "side": "X'"}))
    fam, fam_p, counts = {}, {}, {}
    used = 0
    for n in n_list:
        pts = list(l1_ball_points(model.center(n), n))
        used += len(pts) * RATIO
        if used > budget:
            raise BudgetExceeded(budget, "ib_pair family")
        fam[f"A_{n}"] = region(X, (vid(*p) for p in pts))
        fam_p[f"A'_{n}"] = region(Xp, (vid(*p) for p in model.image_points(pts)))
        counts[f"|A_{n}|"] = len(pts)
        counts[f"|A'_{n}|"] = len(fam_p[f"A'_{n}"])
    centers = {f"c_{n}": list(model.center(n)) for n in n_list}
    gx = Generated(X, named=dict(fam), families={"A": fam}, counts=counts,
                   info={"centers": centers}, model=model)
    gxp = Generated(Xp, named=dict(fam_p), families={"A'": fam_p}, counts=counts,
                    info={"centers": {k: list(model.forward((*v, 0))[:-1]) for k, v in centers.items()},
                          "ratio": RATIO}, model=model)
    f = CoarseMap(model.forward, X, Xp, C1=2, C2=RATIO, C3=1, preimage=model.preimage,
                  name="dilate")
    return IbPair(gx, gxp, f)

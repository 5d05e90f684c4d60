"""Chains of large cubes that only touch the rest of Z^d through a small face.

Level n holds the cubes ``C_n^0 .. C_n^(n-1)`` of side ``side(n)`` centred
on the axis; ``C_n^(m+1)`` is ``C_n^m`` translated by ``n side(n) e_1`` and
level n+1 starts ``(n+1) side(n+1)`` after the last cube of level n.  The
only edges leaving a cube are those with an endpoint in its face
``c_n^m``: a (d-1)-cube of volume ``face(n)`` on the left side of the cube,
centred on the axis.

``mode="exact"`` uses ``side(n) = 2^(2^n)`` and ``face(n) = 2^(n^2)``
(d = 2, n <= 3; a face larger than the cube side is clipped to it).
``mode="substituted"`` takes the sizes from named maps or explicit lists.
"""

from __future__ import annotations

from bisect import bisect_right
from functools import lru_cache

from ..errors import BudgetExceeded, InvalidInput, InvalidScaling
from ..space import region, vid
from ._surgery import box_points, surgery_lattice
from .base import Generated, _prov

MAPS = {
    "2^(2^n)": lambda n: 2 ** (2 ** n),
    "2^(n^2)": lambda n: 2 ** (n * n),
    "2^n": lambda n: 2 ** n,
    "n": lambda n: n,
    "n^2": lambda n: n * n,
}


def _sizes(spec, n_max, what):
    if isinstance(spec, str):
        if spec not in MAPS:
            raise InvalidInput(f"unknown {what} map {spec!r}; known: {sorted(MAPS)}")
        return [MAPS[spec](n) for n in range(1, n_max + 1)]
    vals = [int(v) for v in spec]
    if len(vals) < n_max:
        raise InvalidInput(f"{what} list needs {n_max} entries")
    return vals[:n_max]


def _iroot(x, k):
    """Integer k-th root if x is a perfect k-th power, else None."""
    r = round(x ** (1 / k))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** k == x:
            return c
    return None


def _centered(side):
    lo = -(side // 2)
    return (lo, lo + side - 1)


class CubeChain:
    def __init__(self, d, sides, faces):
        self.d = d
        self.sides = sides
        self.faces = faces
        self.face_sides = []
        for f in faces:
            s = _iroot(f, d - 1)
            if s is None:
                raise InvalidScaling(f"face volume {f} is not a perfect {d - 1}-th power")
            self.face_sides.append(s)
        self.starts = []  # (x start, n, m) for every cube in axis order
        x = 0
        for n in range(1, len(sides) + 1):
            side = sides[n - 1]
            if n > 1:
                x = self.starts[-1][0] + sides[n - 2] - 1 + n * side
            for m in range(n):
                self.starts.append((x + m * n * side, n, m))
        self._keys = [s[0] for s in self.starts]
        self.label = lru_cache(maxsize=1 << 20)(self._label)

    def cube_ranges(self, n, m):
        x = self.start(n, m)
        side = self.sides[n - 1]
        return [(x, x + side - 1)] + [_centered(side)] * (self.d - 1)

    def face_ranges(self, n, m):
        x = self.start(n, m)
        return [(x, x)] + [_centered(self.face_sides[n - 1])] * (self.d - 1)

    def start(self, n, m):
        return self.starts[n * (n - 1) // 2 + m][0]

    def _label(self, p):
        i = bisect_right(self._keys, p[0]) - 1
        if i < 0:
            return None
        x, n, m = self.starts[i]
        side = self.sides[n - 1]
        if p[0] > x + side - 1:
            return None
        lo, hi = _centered(side)
        if all(lo <= c <= hi for c in p[1:]):
            return (n, m)
        return None

    def in_face(self, p, lab):
        n, m = lab
        if p[0] != self.start(n, m):
            return False
        lo, hi = _centered(self.face_sides[n - 1])
        return all(lo <= c <= hi for c in p[1:])

    def keep(self, p, q, lp, lq):
        return (lp is not None and self.in_face(p, lp)) or (lq is not None and self.in_face(q, lq))

    def level_volume(self, n):
        return n * self.sides[n - 1] ** self.d

    def crossing_endpoints(self, n, m):
        """Endpoints of the kept edges leaving C_n^m."""
        out = set()
        for p in box_points(self.face_ranges(n, m)):
            lab = (n, m)
            for i in range(self.d):
                for s in (1, -1):
                    q = p[:i] + (p[i] + s,) + p[i + 1:]
                    if self.label(q) != lab:
                        out.add(p)
                        out.add(q)
        return out


def gen_cube_chain(d: int = 2, n_max: int = 3, mode: str = "exact", side="2^n", face="n",
                   budget: int = 2_000_000) -> Generated:
    if n_max < 1:
        raise InvalidInput("n_max must be >= 1")
    if mode == "exact":
        if d != 2 or n_max > 3:
            raise InvalidInput("exact mode is limited to d = 2 and n_max <= 3")
        sides = _sizes("2^(2^n)", n_max, "side")
        faces = [min(f, s) for f, s in zip(_sizes("2^(n^2)", n_max, "face"), sides)]
    elif mode == "substituted":
        if d < 2:
            raise InvalidInput("d must be >= 2")
        sides = _sizes(side, n_max, "side")
        faces = _sizes(face, n_max, "face")
        for n, (s, f) in enumerate(zip(sides, faces), start=1):
            if not 1 <= f < s ** (d - 1):
                raise InvalidScaling(f"face({n}) = {f} must be below side({n})^{d - 1} = {s ** (d - 1)}")
        for n in range(1, n_max):
            # face / side^(d-1) must not grow: face(n) side(n+1)^(d-1) >= face(n+1) side(n)^(d-1)
            if faces[n] * sides[n - 1] ** (d - 1) > faces[n - 1] * sides[n] ** (d - 1):
                raise InvalidScaling(f"face/side^(d-1) increases at n = {n + 1}")
    else:
        raise InvalidInput("mode must be 'exact' or 'substituted'")
    model = CubeChain(d, sides, faces)
    total = sum(model.level_volume(n) for n in range(1, n_max + 1))
    if total > budget:
        raise BudgetExceeded(budget, "cube chain")
    params = {"d": d, "n_max": n_max, "mode": mode}
    if mode == "substituted":
        params.update(side=side, face=face)
    space = surgery_lattice(d, model.label, model.keep, f"cube_chain({mode}, d={d})",
                            _prov("cube_chain", params))
    levels, cubes, named, counts = {}, {}, {}, {}
    for n in range(1, n_max + 1):
        level = set()
        crossing = 0
        for m in range(n):
            pts = [vid(*p) for p in box_points(model.cube_ranges(n, m))]
            cubes[f"C_{n}^{m}"] = region(space, pts)
            named[f"c_{n}^{m}"] = region(space, (vid(*p) for p in box_points(model.face_ranges(n, m))))
            level.update(pts)
            crossing += len(model.crossing_endpoints(n, m))
        levels[f"C_{n}"] = region(space, level)
        counts[f"N_{n}"] = model.level_volume(n)
        counts[f"|dC_{n}|"] = crossing
        counts[f"side_{n}"] = sides[n - 1]
        counts[f"face_{n}"] = faces[n - 1]
    named.update(levels)
    return Generated(space, named=named, families={"levels": levels, "cubes": cubes},
                     counts=counts, info={"starts": [list(s) for s in model.starts]}, model=model)

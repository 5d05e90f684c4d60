"""Isoperimetric profiles and their comparison up to constants.

``exact_profile`` enumerates every subset of a small finite space in Gray
code order, keeping for each vertex x the number of members of A within
distance h of x; x lies in the h-boundary iff that count is neither 0 nor
the size of its h-neighborhood.  Flipping one vertex touches only its own
h-neighborhood, so each step is cheap.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import EmptyAtT, InvalidInput, OutOfRange, TooLarge
from .space import GrowthCurve, Region, Space, h_boundary, region, search

ENUMERATION_LIMIT = 22
KINDS = ("exact", "exact-connected", "family-lower", "family-upper")


@dataclass(frozen=True)
class ProfileCurve:
    """Sampled profile ``t -> I(t)`` at realized measures."""

    points: tuple
    kind: str
    h: int
    provenance: str = ""
    undefined: tuple = ()

    @property
    def ts(self) -> list:
        return [t for t, _ in self.points]

    @property
    def values(self) -> list:
        return [v for _, v in self.points]

    def value(self, t):
        for s, v in self.points:
            if s == t:
                return v
        raise OutOfRange(f"profile is not sampled at t = {t}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "h": self.h, "provenance": self.provenance,
                "points": [[t, _num(v)] for t, v in self.points],
                "undefined": list(self.undefined)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self) -> str:
        return "t,value\n" + "".join(f"{t},{_num(v)}\n" for t, v in self.points)

    @classmethod
    def from_dict(cls, obj: dict) -> "ProfileCurve":
        try:
            pts = tuple((_parse(t), _parse(v)) for t, v in obj["points"])
            kind = obj["kind"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed profile document: {exc}") from exc
        if kind not in KINDS:
            raise InvalidInput(f"unknown profile kind {kind!r}")
        return cls(pts, kind, int(obj.get("h", 1)), obj.get("provenance", ""),
                   tuple(obj.get("undefined", ())))


def _num(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def _parse(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


@dataclass(frozen=True)
class FamilySpec:
    name: str
    members: dict

    @classmethod
    def of(cls, name: str, members) -> "FamilySpec":
        if isinstance(members, dict):
            return cls(name, dict(members))
        return cls(name, {f"{name}[{i}]": m for i, m in enumerate(members)})


# ---------------------------------------------------------------------------
# the enumeration oracle


def _masks(space: Space, order: Sequence, cap: int, strict: bool = False) -> list:
    index = {v: i for i, v in enumerate(order)}
    out = []
    for v in order:
        dist = search(space, [v], cap=cap)
        m = 0
        for w, d in dist.items():
            if strict and d >= cap:
                continue
            m |= 1 << index[w]
        out.append(m)
    return out


def _connected(mask: int, near: list) -> bool:
    low = mask & -mask
    comp = low
    frontier = low
    while frontier:
        grow = 0
        f = frontier
        while f:
            b = f & -f
            grow |= near[b.bit_length() - 1]
            f ^= b
        grow &= mask
        frontier = grow & ~comp
        comp |= grow
    return comp == mask


def exact_profile(space: Space, h: int, connected_only: bool = False, gap: int | None = None,
                  limit: int = ENUMERATION_LIMIT) -> ProfileCurve:
    """``I_h(t)`` on a finite space by enumerating every subset.

    ``value(t)`` is the least ``mu(d_h A)`` over A with
    ``t <= mu(A) <= mu(X)/2``; with ``connected_only`` only sets without a
    split into parts at distance ``>= gap`` count.
    """
    if not space.finite:
        raise InvalidInput("exact_profile needs a finite space")
    n = len(space.vertices)
    if n > limit:
        raise TooLarge(f"{n} vertices exceed the enumeration limit {limit}")
    if h < 1:
        raise InvalidInput("h must be at least one scaled unit")
    order = sorted(space.vertices)
    mu = [space.mu(v) for v in order]
    half = sum(mu) // 2
    nbr = [[j for j in range(n) if m >> j & 1] for m in _masks(space, order, h)]
    size = [len(x) for x in nbr]
    near = None
    if connected_only:
        gap = 10 * space.scale if gap is None else gap
        near = _masks(space, order, gap, strict=True)
    best = [None] * (half + 1)
    count = [0] * n
    members = 0
    measure = 0
    boundary = 0  # measure of vertices with 0 < count < size
    for step in range(1, 1 << n):
        v = (step & -step).bit_length() - 1
        bit = 1 << v
        members ^= bit
        add = 1 if members & bit else -1
        measure += add * mu[v]
        for x in nbr[v]:
            c = count[x]
            was = 0 < c < size[x]
            c += add
            count[x] = c
            now = 0 < c < size[x]
            if was != now:
                boundary += mu[x] if now else -mu[x]
        if measure > half or measure == 0:
            continue
        cur = best[measure]
        if cur is not None and cur <= boundary:
            continue
        if near is not None and not _connected(members, near):
            continue
        best[measure] = boundary
    points = []
    run = None
    for t in range(half, 0, -1):
        if best[t] is not None and (run is None or best[t] < run):
            run = best[t]
        if run is not None:
            points.append((t, run))
    points.reverse()
    kind = "exact-connected" if connected_only else "exact"
    prov = "all subsets" if not connected_only else f"metrically connected subsets (gap {gap})"
    return ProfileCurve(tuple(points), kind, h, prov)


# ---------------------------------------------------------------------------
# family profiles


def family_profile(space: Space, family: FamilySpec | dict, h: int, mode: str = "lower",
                   ts: Sequence | None = None, strict: bool = False) -> ProfileCurve:
    """Profile restricted to a family, sampled at member measures or ``ts``.

    Lower mode: least boundary over members with ``mu(A) >= t``.  Upper
    mode: largest boundary over members with ``mu(A) <= t``.  Requested
    points where no member qualifies are listed as undefined, or raise
    :class:`EmptyAtT` when ``strict``.
    """
    if isinstance(family, dict):
        family = FamilySpec("family", family)
    if not family.members:
        raise InvalidInput("family is empty")
    if mode not in ("lower", "upper"):
        raise InvalidInput("mode must be 'lower' or 'upper'")
    rows = sorted((A.measure, h_boundary(space, A, h).measure) for A in family.members.values())
    sample = sorted({m for m, _ in rows}) if ts is None else sorted(set(ts))
    points, undefined = [], []
    for t in sample:
        if mode == "lower":
            vals = [b for m, b in rows if m >= t]
            v = min(vals) if vals else None
        else:
            vals = [b for m, b in rows if m <= t]
            v = max(vals) if vals else None
        if v is None:
            if strict:
                raise EmptyAtT(f"no member of {family.name} qualifies at t = {t}")
            undefined.append(t)
        else:
            points.append((t, v))
    return ProfileCurve(tuple(points), f"family-{mode}", h, family.name, tuple(undefined))


def boundary_table(space: Space, family: FamilySpec | dict, h: int) -> list:
    """``(name, mu(A), mu(d_h A))`` for each member."""
    members = family.members if isinstance(family, FamilySpec) else family
    return [(name, A.measure, h_boundary(space, A, h).measure) for name, A in members.items()]


# ---------------------------------------------------------------------------
# the right inverse of growth


@dataclass(frozen=True)
class PhiCurve:
    """``phi(t) = least sampled r with V(r) >= t`` (scaled radii)."""

    volumes: tuple
    radii: tuple
    scale: int = 1

    def __call__(self, t):
        if t > self.volumes[-1]:
            raise OutOfRange(f"t = {t} exceeds the largest sampled volume {self.volumes[-1]}")
        return self.radii[bisect_left(self.volumes, t)]

    @property
    def points(self) -> tuple:
        return tuple((v, self(v)) for v in sorted(set(self.volumes)))


def phi_from_growth(growth: GrowthCurve) -> PhiCurve:
    vols = tuple(growth.volumes)
    if not vols:
        raise InvalidInput("empty growth curve")
    if any(a > b for a, b in zip(vols, vols[1:])):
        raise InvalidInput("growth must be nondecreasing")
    return PhiCurve(vols, tuple(growth.radii), growth.scale)


# ---------------------------------------------------------------------------
# comparison up to constants


@dataclass(frozen=True)
class Grid:
    """Candidate constants; ``max_product`` optionally bounds ``C1 * C2``."""

    values: tuple = tuple(Fraction(2 ** k) for k in range(11))
    max_product: Fraction | None = None

    def pairs(self) -> list:
        vals = sorted(Fraction(v) for v in self.values)
        out = [(a, b) for a in vals for b in vals
               if self.max_product is None or a * b <= self.max_product]
        return sorted(out, key=lambda p: (p[0] * p[1], p[0]))

    def maximal(self):
        return max(self.pairs(), key=lambda p: (p[0] * p[1], p[0]))

    def describe(self) -> str:
        vals = sorted(Fraction(v) for v in self.values)
        text = ",".join(str(v) for v in vals)
        if self.max_product is not None:
            text += f" with C1*C2 <= {self.max_product}"
        return text


def parse_grid(text: str) -> Grid:
    """``"2^0..2^10"``, ``"1,2,4"`` or ``"2^0..2^9:1000"`` (product bound)."""
    bound = None
    if ":" in text:
        text, b = text.split(":", 1)
        bound = Fraction(b)
    try:
        if ".." in text:
            lo, hi = text.split("..")
            base, e0 = lo.split("^")
            base2, e1 = hi.split("^")
            if base != base2:
                raise ValueError("mismatched bases")
            vals = tuple(Fraction(int(base)) ** k for k in range(int(e0), int(e1) + 1))
        else:
            vals = tuple(Fraction(v) for v in text.split(","))
    except ValueError as exc:
        raise InvalidInput(f"cannot parse grid {text!r}: {exc}") from exc
    if not vals or min(vals) <= 0:
        raise InvalidInput("grid constants must be positive")
    return Grid(vals, bound)


DEFAULT_GRID = Grid()


def grid_upto(k: int) -> Grid:
    return Grid(tuple(Fraction(2 ** i) for i in range(k + 1)))


@dataclass(frozen=True)
class ComparisonWitness:
    relation: str  # dominates | equivalent | refuted
    C1: Fraction | None = None
    C2: Fraction | None = None
    C3: Fraction | None = None
    C4: Fraction | None = None
    range: tuple = ()
    counterexample: object = None
    grid: str = ""
    note: str = ""

    @property
    def constants(self) -> list:
        return [c for c in (self.C1, self.C2, self.C3, self.C4) if c is not None]

    def to_dict(self) -> dict:
        return {"relation": self.relation, "C": [_num(c) for c in self.constants],
                "range": [_num(x) for x in self.range],
                "counterexample": _num(self.counterexample) if self.counterexample is not None else None,
                "grid": self.grid, "note": self.note}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class _Curve:
    """Uniform view of a sampled curve or a function."""

    def __init__(self, obj):
        self.fn = None
        self.ts = None
        self.vs = None
        self.ceil = False
        if isinstance(obj, ProfileCurve):
            pts = obj.points
            self.ceil = obj.kind != "family-upper"
        elif isinstance(obj, GrowthCurve):
            pts = obj.points
        elif isinstance(obj, PhiCurve):
            pts = obj.points
        elif callable(obj):
            self.fn = obj
            return
        else:
            pts = tuple(tuple(p) for p in obj)
        if not pts:
            raise InvalidInput("empty curve")
        pts = sorted(pts)
        self.ts = [t for t, _ in pts]
        self.vs = [v for _, v in pts]

    @property
    def sampled(self) -> bool:
        return self.fn is None

    def at(self, s):
        """Value at s, or None below the sampled range.

        Lower profiles read the first sample at or above s; other curves
        the last sample at or below it.  Past the last sample the last value
        is used, which can only make a domination check harder.
        """
        if self.fn is not None:
            return self.fn(s)
        ts = self.ts
        if s < ts[0]:
            return self.vs[0] if self.ceil else None
        if s >= ts[-1]:
            return self.vs[-1]
        if self.ceil:
            return self.vs[bisect_left(ts, s)]
        return self.vs[bisect_right(ts, s) - 1]


def _sample_points(fc: _Curve, gc: _Curve, ts, lo, hi):
    if ts is not None:
        base = sorted(set(ts))
    elif fc.sampled:
        base = fc.ts
    elif gc.sampled:
        base = gc.ts
    else:
        raise InvalidInput("two functions need explicit sample points")
    return [t for t in base if (lo is None or t >= lo) and (hi is None or t <= hi)]


def _range(fc: _Curve, gc: _Curve, rng):
    if rng is not None:
        return rng
    los = [c.ts[0] for c in (fc, gc) if c.sampled]
    his = [c.ts[-1] for c in (fc, gc) if c.sampled]
    return (max(los) if los else None, min(his) if his else None)


def _holds(fc, gc, ts, c1, c2):
    for t in ts:
        g = gc.at(c2 * t)
        if g is None or fc.at(t) > c1 * g:
            return t
    return None


def _dominate(fc, gc, ts, grid: Grid):
    for c1, c2 in grid.pairs():
        if _holds(fc, gc, ts, c1, c2) is None:
            return c1, c2, None
    c1, c2 = grid.maximal()
    bad = [t for t in ts if (gc.at(c2 * t) is None or fc.at(t) > c1 * gc.at(c2 * t))]
    return c1, c2, (max(bad) if bad else None)


def compare(f, g, grid: Grid = DEFAULT_GRID, mode: str = "dominates", ts=None,
            range: tuple | None = None) -> ComparisonWitness:
    """Witness for ``f <= C1 g(C2 t)`` on the common sampled range.

    Returns the smallest grid pair (by product, then C1).  ``mode =
    "equivalent"`` also checks ``g <= C3 f(C4 t)``.  Refutations carry the
    largest sampled t violating the grid's maximal constants.
    """
    if mode not in ("dominates", "equivalent"):
        raise InvalidInput("mode must be 'dominates' or 'equivalent'")
    if isinstance(grid, str):
        grid = parse_grid(grid)
    fc, gc = _Curve(f), _Curve(g)
    lo, hi = _range(fc, gc, range)
    if lo is not None and hi is not None and lo > hi:
        raise InvalidInput("curves have disjoint ranges")
    pts = _sample_points(fc, gc, ts, lo, hi)
    if not pts:
        raise InvalidInput("no sample points in the common range")
    rng = (pts[0], pts[-1])
    c1, c2, bad = _dominate(fc, gc, pts, grid)
    if bad is not None:
        return ComparisonWitness("refuted", c1, c2, range=rng, counterexample=bad,
                                 grid=grid.describe(), note="f <= C1 g(C2 t) fails")
    if mode == "dominates":
        return ComparisonWitness("dominates", c1, c2, range=rng, grid=grid.describe())
    back = _sample_points(gc, fc, ts, lo, hi)
    c3, c4, bad = _dominate(gc, fc, back, grid)
    if bad is not None:
        return ComparisonWitness("refuted", c3, c4, range=rng, counterexample=bad,
                                 grid=grid.describe(), note="g <= C3 f(C4 t) fails")
    return ComparisonWitness("equivalent", c1, c2, c3, c4, range=rng, grid=grid.describe())


def compose(w1: ComparisonWitness, w2: ComparisonWitness) -> tuple:
    """Constants certifying ``f <= h`` from ``f <= g`` and ``g <= h``.

    ``f(t) <= C1 g(C2 t) <= C1 D1 h(D2 C2 t)``.
    """
    return w1.C1 * w2.C1, w1.C2 * w2.C2


def strong_target(growth: GrowthCurve, ts: Iterable) -> list:
    """``(t, t / phi(t))`` in true length units, for t within the growth range."""
    phi = phi_from_growth(growth)
    out = []
    for t in ts:
        if t > phi.volumes[-1]:
            continue
        r = phi(t)
        if r == 0:
            continue
        out.append((t, Fraction(t * growth.scale, r)))
    return out


def strong_profile_check(profile: ProfileCurve, growth: GrowthCurve, grid: Grid = DEFAULT_GRID,
                         calibrate: float | None = 0.5) -> ComparisonWitness:
    """Test ``I >= id/phi`` up to constants on the sampled range.

    A plain comparison only fails when no grid constants fit anywhere.  With
    ``calibrate = q`` the smallest constants are fitted on the first
    fraction q of the samples and must then hold on the whole range; a
    ratio ``(t/phi(t)) / I(t)`` that keeps growing is reported as refuted
    at the first t where the fitted constants break.  For family profiles
    this speaks about the family only.
    """
    if isinstance(grid, str):
        grid = parse_grid(grid)
    target = strong_target(growth, profile.ts)
    if not target:
        raise InvalidInput("profile and growth ranges do not overlap")
    if calibrate is None:
        return compare(target, profile, grid)
    if not 0 < calibrate < 1:
        raise InvalidInput("calibrate must lie in (0, 1)")
    k = max(1, math.ceil(len(target) * calibrate))
    prefix = target[:k]
    fit = compare(prefix, profile, grid, range=(prefix[0][0], prefix[-1][0]))
    full_rng = (target[0][0], target[-1][0])
    if fit.relation != "dominates":
        return ComparisonWitness("refuted", fit.C1, fit.C2, range=full_rng,
                                 counterexample=fit.counterexample, grid=grid.describe(),
                                 note="no grid constants fit the calibration prefix")
    fc, gc = _Curve(target), _Curve(profile)
    ts = [t for t, _ in target]
    bad = _holds(fc, gc, ts, fit.C1, fit.C2)
    note = f"constants fitted on the first {k} of {len(ts)} samples"
    if bad is not None:
        return ComparisonWitness("refuted", fit.C1, fit.C2, range=full_rng, counterexample=bad,
                                 grid=grid.describe(), note=note + "; they fail later")
    return ComparisonWitness("dominates", fit.C1, fit.C2, range=full_rng, grid=grid.describe(),
                             note=note)


# ---------------------------------------------------------------------------
# annuli


@dataclass(frozen=True)
class AnnulusWitness:
    r: int
    r_best: int
    annulus_measure: int
    ball_measure: int
    ratio: Fraction


def _sorted_distances(space, x, cap):
    dist = search(space, [x], cap=cap)
    pairs = sorted((d, space.mu(v)) for v, d in dist.items())
    ds = [d for d, _ in pairs]
    acc = []
    s = 0
    for _, m in pairs:
        s += m
        acc.append(s)
    return dist, ds, acc


def _vol(ds, acc, r):
    i = bisect_right(ds, r)
    return acc[i - 1] if i else 0


def annulus_inf_check(space: Space, x, r: int) -> AnnulusWitness:
    """Least ``mu(C_{r'-1, r'}) * r / mu(B(x, r))`` over ``r <= r' <= 2r``.

    Radii and the unit shell width are in scaled units; the ratio uses the
    true radius ``r / scale``.
    """
    S = space.scale
    if r < S:
        raise InvalidInput("r must be at least one unit")
    _, ds, acc = _sorted_distances(space, x, 2 * r)
    vb = _vol(ds, acc, r)
    best = None
    for rp in range(r, 2 * r + 1):
        m = _vol(ds, acc, rp) - _vol(ds, acc, rp - S)
        if best is None or m < best[1]:
            best = (rp, m)
    rp, m = best
    return AnnulusWitness(r, rp, m, vb, Fraction(m * r, S * vb))


def sphere_inf_check(space: Space, x, r: int, r_max: int | None = None,
                     h: int | None = None, stride: int | None = None) -> AnnulusWitness:
    """Least ``mu(d_h B(x, r')) * r / mu(B(x, r))`` over ``r <= r' <= r_max``.

    Only radii where the ball changes are tried; with ``stride`` only
    ``r, r + stride, ...``, which still bounds the infimum from above.
    """
    S = space.scale
    h = S if h is None else h
    r_max = 2 * r if r_max is None else r_max
    dist, ds, acc = _sorted_distances(space, x, r_max)
    vb = _vol(ds, acc, r)
    if stride:
        radii = list(range(r, r_max + 1, stride))
    else:
        radii = sorted({r} | {d for d in ds if r <= d <= r_max})
    best = None
    for rp in radii:
        B = region(space, (v for v, d in dist.items() if d <= rp))
        m = h_boundary(space, B, h).measure
        if best is None or m < best[1]:
            best = (rp, m)
    rp, m = best
    return AnnulusWitness(r, rp, m, vb, Fraction(m * r, S * vb))

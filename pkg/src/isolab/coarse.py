"""Maps between spaces: quasi-isometry constants and boundary transport.

Distances are compared in true length (scaled integers divided by each
space's scale) so that maps between spaces of different scales behave.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import BudgetExceeded, InvalidInput
from .space import (Counterexample, Region, Space, distance, h_boundary, neighborhood,
                    region, search)

DEFAULT_GRID = tuple(2 ** k for k in range(11))


@dataclass(frozen=True, eq=False)
class CoarseMap:
    """A vertex map ``domain -> codomain`` with its coarse constants.

    ``C1`` is additive, in codomain scaled units; ``C2`` and ``C3`` are the
    distance and unit-ball measure distortions.  ``preimage(w)``, when
    given, lists the domain vertices mapped onto ``w``.
    """

    forward: Callable
    domain: Space
    codomain: Space
    C1: int = 0
    C2: Fraction | int = 1
    C3: Fraction | int = 1
    preimage: Callable | None = None
    name: str = ""

    def __call__(self, v):
        return self.forward(v)

    def image(self, A: Iterable) -> frozenset:
        f = self.forward
        return frozenset(f(v) for v in A)


def identity_map(space: Space) -> CoarseMap:
    return CoarseMap(lambda v: v, space, space, 0, 1, 1, preimage=lambda w: [w], name="identity")


@dataclass(frozen=True)
class Violation:
    reason: str
    sample: tuple

    def __bool__(self):
        return False


@dataclass(frozen=True)
class QIConstants:
    C1: int
    C2: Fraction
    C3: Fraction
    pairs: int
    net_samples: int


def thicken_image(fmap: CoarseMap, A: Region | Iterable, a: int) -> Region:
    """``[f(A)]_a``: the image of A thickened by ``a`` in the codomain."""
    img = fmap.image(A)
    if not img:
        return Region(frozenset(), 0)
    return neighborhood(fmap.codomain, img, a)


def _true(d, scale):
    return Fraction(d, scale)


def _dist(space, x, y, cap):
    d = distance(space, x, y, cap)
    if d is None:
        raise InvalidInput(f"{x} and {y} are farther apart than the cap {cap}")
    return d


def _in_image(fmap: CoarseMap):
    if fmap.preimage is not None:
        return lambda w: bool(fmap.preimage(w))
    if not fmap.domain.finite:
        raise InvalidInput("an infinite domain needs a preimage function")
    img = fmap.image(fmap.domain.vertices)
    return img.__contains__


def net_distance(fmap: CoarseMap, w, cap: int | None = None) -> int | None:
    """Distance in the codomain from ``w`` to the image ``f(X)``."""
    inside = _in_image(fmap)
    for v, d in _settled_order(fmap.codomain, w, cap):
        if inside(v):
            return d
    return None


def _settled_order(space: Space, source, cap):
    """Vertices in nondecreasing distance from ``source``, ties by vertex order."""
    heap = [(0, source)]
    best = {source: 0}
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if len(done) > space.budget:
            raise BudgetExceeded(space.budget)
        yield v, d
        for w, length in space.neighbors(v):
            nd = d + length
            if cap is not None and nd > cap:
                continue
            if nd < best.get(w, nd + 1):
                best[w] = nd
                heapq.heappush(heap, (nd, w))


def estimate_qi_constants(fmap: CoarseMap, samples: Sequence[tuple], grid=DEFAULT_GRID,
                          net_samples: Sequence = (), cap: int | None = None,
                          measure_samples: Sequence = ()) -> QIConstants | Violation:
    """Smallest grid ``C2`` for both distance inequalities on ``samples``.

    Also reports the exact net constant ``C1`` (largest codomain distance
    from a sampled point to the image) and the unit-ball measure ratio
    ``C3`` over ``measure_samples``.
    """
    grid = sorted(Fraction(c) for c in grid)
    S, S2 = fmap.domain.scale, fmap.codomain.scale
    measured = []
    for x, y in samples:
        d = _true(_dist(fmap.domain, x, y, cap), S)
        d2 = _true(_dist(fmap.codomain, fmap(x), fmap(y), None), S2)
        measured.append((x, y, d, d2))
    chosen = None
    for c in grid:
        if all(d / c - c <= d2 <= c * d + c for _, _, d, d2 in measured):
            chosen = c
            break
    if chosen is None:
        c = grid[-1]
        for x, y, d, d2 in measured:
            if not d / c - c <= d2 <= c * d + c:
                return Violation(f"distance distortion exceeds the grid maximum {c}", (x, y))
    C1 = 0
    for w in net_samples:
        nd = net_distance(fmap, w)
        if nd is None:
            return Violation("codomain point not reachable from the image", (w,))
        C1 = max(C1, nd)
    C3 = Fraction(1)
    for x in measure_samples:
        m = neighborhood(fmap.domain, [x], S).measure
        m2 = neighborhood(fmap.codomain, [fmap(x)], S2).measure
        C3 = max(C3, Fraction(m2, m), Fraction(m, m2))
    return QIConstants(C1, chosen, C3, len(measured), len(net_samples))


def nearest_preimage(fmap: CoarseMap, radius: int | None = None) -> Callable:
    """Approximate inverse: the smallest preimage of a nearest image point.

    Ties between image points at equal distance, and between several
    preimages, are broken by vertex order.
    """
    if fmap.preimage is not None:
        pre = fmap.preimage
    else:
        if not fmap.domain.finite:
            raise InvalidInput("an infinite domain needs a preimage function")
        table = {}
        for v in sorted(fmap.domain.vertices):
            table.setdefault(fmap(v), []).append(v)
        pre = lambda w: table.get(w, [])

    def g(w):
        found = None
        for v, d in _settled_order(fmap.codomain, w, radius):
            if found is not None and d > found[0]:
                break
            p = pre(v)
            if p:
                cand = (d, min(p))
                if found is None or cand < found:
                    found = cand
        if found is None:
            raise InvalidInput(f"no preimage within {radius} of {w}")
        return found[1]

    return g


def inverse_map(fmap: CoarseMap, radius: int | None = None) -> CoarseMap:
    g = nearest_preimage(fmap, radius)
    return CoarseMap(g, fmap.codomain, fmap.domain, fmap.C1, fmap.C2, fmap.C3,
                     name=f"inverse({fmap.name})")


@dataclass
class TransportReport:
    """Boundary measures of each set and of its thickened image."""

    rows: list = field(default_factory=list)
    K: Fraction | None = None
    reverse_rows: list = field(default_factory=list)
    K_reverse: Fraction | None = None
    margins: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = ["set-name,mu_boundary_src,mu_boundary_img,ratio"]
        for name, src, img, ratio in self.rows:
            lines.append(f"{name},{src},{img},{_fmt(ratio)}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        def rows(rs):
            return [{"set": n, "mu_boundary_src": s, "mu_boundary_img": i, "ratio": _fmt(r)}
                    for n, s, i, r in rs]
        return {"rows": rows(self.rows), "K": _fmt(self.K),
                "reverse_rows": rows(self.reverse_rows), "K_reverse": _fmt(self.K_reverse),
                "margins": self.margins}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _fmt(x):
    if x is None:
        return None
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    return str(x)


def _ratio(num, den):
    if den == 0:
        return Fraction(0) if num == 0 else None
    return Fraction(num, den)


def _kmax(rows):
    ratios = [r[3] for r in rows]
    if any(r is None for r in ratios):
        return None
    return max(ratios, default=Fraction(0))


def verify_boundary_transport(fmap: CoarseMap, family: dict, h: int, h_prime: int,
                              a: int | None = None, reverse: bool = True,
                              inverse_radius: int | None = None) -> TransportReport:
    """Compare ``mu(d_h A)`` with ``mu'(d_h' [f(A)]_a)`` over a family.

    ``K`` is the largest observed ratio, or None when some source boundary
    is empty while the image boundary is not.  The reverse rows push the
    thickened images back through the nearest-preimage inverse.
    """
    a = fmap.C1 if a is None else a
    rep = TransportReport(margins={"h": h, "h_prime": h_prime, "a": a})
    g = nearest_preimage(fmap, inverse_radius) if reverse else None
    for name, A in family.items():
        src = h_boundary(fmap.domain, A, h).measure
        img_set = thicken_image(fmap, A, a)
        img = h_boundary(fmap.codomain, img_set, h_prime).measure
        rep.rows.append((name, src, img, _ratio(img, src)))
        if reverse:
            back = neighborhood(fmap.domain, {g(w) for w in img_set}, _back_radius(fmap, a))
            back_b = h_boundary(fmap.domain, back, h).measure
            rep.reverse_rows.append((name, img, back_b, _ratio(back_b, img)))
    rep.K = _kmax(rep.rows)
    if reverse:
        rep.K_reverse = _kmax(rep.reverse_rows)
        rep.margins["a_reverse"] = _back_radius(fmap, a)
    return rep


def _back_radius(fmap: CoarseMap, a: int) -> int:
    # the inverse carries the same additive constant, measured in domain units
    return -(-a * fmap.domain.scale // fmap.codomain.scale)


def verify_measure_comparison(fmap: CoarseMap, family: dict, a: int | None = None,
                              grid=DEFAULT_GRID) -> Fraction | Violation:
    """Smallest grid ``C`` with ``mu(A) <= C mu'([f(A)]_a)`` over the family."""
    a = fmap.C1 if a is None else a
    pairs = []
    for name, A in family.items():
        pairs.append((name, A.measure, thicken_image(fmap, A, a).measure))
    for c in sorted(Fraction(c) for c in grid):
        if all(m <= c * m2 for _, m, m2 in pairs):
            return c
    c = max(Fraction(c) for c in grid)
    for name, m, m2 in pairs:
        if m > c * m2:
            return Violation(f"mu(A) = {m} exceeds {c} * {m2}", (name,))
    raise AssertionError("unreachable")


def check_ball_sandwich(fmap: CoarseMap, samples: Sequence[tuple], mult, add: int):
    """``B(f(x), r/mult - add) <= [f(B(x,r))]_add <= B(f(x), mult r + add)``.

    ``r`` is in domain scaled units and ``add`` in codomain scaled units.
    Returns True or a Counterexample naming the failing sample and side.
    """
    mult = Fraction(mult)
    S, S2 = fmap.domain.scale, fmap.codomain.scale
    for x, r in samples:
        B = region(fmap.domain, search(fmap.domain, [x], cap=r))
        mid = thicken_image(fmap, B, add).vertices
        r_true = Fraction(r, S)
        inner = (r_true / mult) * S2 - add
        outer = mult * r_true * S2 + add
        fx = fmap(x)
        if inner >= 0:
            small = search(fmap.codomain, [fx], cap=int(inner))
            if not set(small) <= mid:
                return Counterexample("inner ball not covered", (x, r))
        big = search(fmap.codomain, [fx], cap=int(outer))
        if not mid <= set(big):
            return Counterexample("thickened image leaves the outer ball", (x, r))
    return True

"""Metric measure graphs given by neighbor oracles.

Vertices are plain tuples ``(*coords, tag)``.  Edge lengths and radii are
integers in units of ``1/scale``: a space with ``scale=100`` stores an edge
of true length ``1/100`` as ``1``.  All balls are closed.

Infinite spaces are never materialized.  Every search counts the vertices it
settles and raises :class:`BudgetExceeded` instead of silently truncating.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import BudgetExceeded, InvalidInput

Vertex = tuple
Neighbors = Callable[[Vertex], Sequence[tuple[Vertex, int]]]

DEFAULT_BUDGET = 2_000_000


def vid(*coords: int, tag: int = 0) -> Vertex:
    """Build a vertex id from lattice coordinates and a tag."""
    return (*coords, tag)


def coords(v: Vertex) -> tuple:
    return v[:-1]


def tag(v: Vertex) -> int:
    return v[-1]


@dataclass(frozen=True, eq=False)
class Space:
    """An immutable metric measure graph.

    ``neighbors(v)`` lists ``(w, length)`` pairs with integer lengths >= 1.
    ``measure`` defaults to counting measure.  ``vertices`` is set only for
    finite spaces.  ``unit_lengths`` promises every edge has length 1, which
    lets searches use plain BFS.
    """

    neighbors: Neighbors
    scale: int = 1
    measure: Callable[[Vertex], int] | None = None
    vertices: frozenset | None = None
    unit_lengths: bool = False
    budget: int = DEFAULT_BUDGET
    name: str = ""
    provenance: dict | None = None

    @property
    def finite(self) -> bool:
        return self.vertices is not None

    def mu(self, v: Vertex) -> int:
        return 1 if self.measure is None else self.measure(v)

    def total(self, vertices: Iterable[Vertex]) -> int:
        if self.measure is None:
            return sum(1 for _ in vertices)
        m = self.measure
        return sum(m(v) for v in vertices)


@dataclass(frozen=True)
class Region:
    """A finite vertex set together with its total measure."""

    vertices: frozenset
    measure: int

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self.vertices

    def __iter__(self):
        return iter(self.vertices)


def region(space: Space, vertices: Iterable[Vertex]) -> Region:
    vs = frozenset(vertices)
    return Region(vs, space.total(vs))


@dataclass(frozen=True)
class DistanceMap:
    source: Region
    cap: int | None
    dist: dict


@dataclass(frozen=True)
class GrowthCurve:
    """Ball volumes ``V(r)`` around ``center`` at sampled scaled radii."""

    center: Vertex
    points: tuple
    scale: int = 1

    @property
    def radii(self) -> list:
        return [r for r, _ in self.points]

    @property
    def volumes(self) -> list:
        return [v for _, v in self.points]


@dataclass(frozen=True)
class Counterexample:
    """A sample that violates a checked property."""

    reason: str
    sample: tuple


@dataclass(frozen=True)
class Partition:
    """Witness that a set splits into two parts at mutual distance >= gap."""

    part1: frozenset
    part2: frozenset
    gap: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class DoublingReport:
    per_radius: dict = field(default_factory=dict)
    constant: Fraction = Fraction(1)


# ---------------------------------------------------------------------------
# searches


def search(space: Space, sources: Iterable[Vertex], cap: int | None = None,
           budget: int | None = None, stop: Vertex | None = None,
           allowed: Callable[[Vertex], bool] | None = None) -> dict:
    """Multi-source shortest paths, truncated at ``cap``.

    Returns ``{vertex: distance}`` for every vertex at distance ``<= cap``
    (all reachable vertices if ``cap`` is None).  With ``stop`` the search
    ends as soon as that vertex is settled.  ``allowed`` restricts which
    vertices may be entered (sources are always admitted).
    """
    budget = space.budget if budget is None else budget
    dist: dict = {}
    if space.unit_lengths:
        queue = deque()
        for s in sources:
            if s not in dist:
                dist[s] = 0
                queue.append(s)
        if len(dist) > budget:
            raise BudgetExceeded(budget)
        if stop is not None and stop in dist:
            return dist
        nbrs = space.neighbors
        while queue:
            v = queue.popleft()
            d = dist[v] + 1
            if cap is not None and d > cap:
                continue
            for w, _ in nbrs(v):
                if w in dist or (allowed is not None and not allowed(w)):
                    continue
                dist[w] = d
                if len(dist) > budget:
                    raise BudgetExceeded(budget)
                if w == stop:
                    return dist
                queue.append(w)
        return dist

    heap = []
    for s in sources:
        if s not in dist:
            dist[s] = 0
            heap.append((0, s))
    heapq.heapify(heap)
    settled = set()
    nbrs = space.neighbors
    while heap:
        d, v = heapq.heappop(heap)
        if v in settled or d > dist[v]:
            continue
        settled.add(v)
        if len(settled) > budget:
            raise BudgetExceeded(budget)
        if v == stop:
            break
        for w, length in nbrs(v):
            nd = d + length
            if cap is not None and nd > cap:
                continue
            if allowed is not None and not allowed(w):
                continue
            old = dist.get(w)
            if old is None or nd < old:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    # Tentative distances of unsettled vertices are only upper bounds.
    if stop is not None and stop in settled:
        return {v: dist[v] for v in settled}
    return dist


def distance(space: Space, x: Vertex, y: Vertex, cap: int | None) -> int | None:
    """Exact distance from ``x`` to ``y`` if it is at most ``cap``, else None."""
    if cap is not None and cap < 0:
        raise InvalidInput("cap must be >= 0")
    if x == y:
        return 0
    dist = search(space, [x], cap=cap, stop=y)
    return dist.get(y)


def distance_map(space: Space, source: Region, cap: int | None) -> DistanceMap:
    return DistanceMap(source, cap, search(space, source.vertices, cap=cap))


def ball(space: Space, x: Vertex, r: int, budget: int | None = None) -> Region:
    if r < 0:
        raise InvalidInput("radius must be >= 0")
    return region(space, search(space, [x], cap=r, budget=budget))


def annulus(space: Space, x: Vertex, r: int, r2: int, budget: int | None = None) -> Region:
    """``ball(x, r2) \\ ball(x, r)``."""
    if not 0 <= r < r2:
        raise InvalidInput("need 0 <= r < r2")
    dist = search(space, [x], cap=r2, budget=budget)
    return region(space, (v for v, d in dist.items() if d > r))


def neighborhood(space: Space, A: Region | Iterable[Vertex], h: int,
                 budget: int | None = None) -> Region:
    if h < 0:
        raise InvalidInput("h must be >= 0")
    verts = A.vertices if isinstance(A, Region) else frozenset(A)
    if not verts:
        return Region(frozenset(), 0)
    return region(space, search(space, verts, cap=h, budget=budget))


def h_boundary(space: Space, A: Region | Iterable[Vertex], h: int,
               budget: int | None = None) -> Region:
    """Vertices within ``h`` of both ``A`` and its complement.

    The complement is never built.  Outer candidates (within ``h`` of A but
    outside it) are at distance 0 from the complement.  For inner vertices
    the first exit from A on a shortest path to the complement is itself an
    outer candidate, so a search from the outer candidates that only walks
    through A gives ``d(x, A^c)`` exactly whenever it is ``<= h``.
    """
    if h < 1:
        raise InvalidInput("h must be at least one scaled unit")
    verts = A.vertices if isinstance(A, Region) else frozenset(A)
    if not verts:
        return Region(frozenset(), 0)
    near = search(space, verts, cap=h, budget=budget)
    outer = [v for v in near if v not in verts]
    if not outer:
        return Region(frozenset(), 0)
    inner = search(space, outer, cap=h, budget=budget, allowed=verts.__contains__)
    return region(space, inner)


def b_distance(space: Space, x: Vertex, y: Vertex, b: int, cap: int) -> int | None:
    """Length of the shortest b-chain from ``x`` to ``y`` (None past ``cap`` steps)."""
    if b < 1:
        raise InvalidInput("b must be at least one scaled unit")
    if x == y:
        return 0
    seen = {x}
    frontier = [x]
    for steps in range(1, cap + 1):
        nxt = []
        for u in frontier:
            for w in search(space, [u], cap=b):
                if w in seen:
                    continue
                if w == y:
                    return steps
                seen.add(w)
                nxt.append(w)
        if not nxt:
            return None
        frontier = nxt
    return None


def chain_radius(space: Space, x: Vertex, y: Vertex, b: int, max_radius: int) -> int | None:
    """Least E such that a b-chain from ``x`` to ``y`` stays inside ``B(x, E)``.

    Vertices are released in order of their distance to ``x``; the answer is
    the largest distance released before ``y`` becomes b-reachable.
    """
    around = search(space, [x], cap=max_radius)
    if y not in around:
        return None
    heap = [(0, x)]
    seen = {x}
    worst = 0
    while heap:
        d, u = heapq.heappop(heap)
        worst = max(worst, d)
        if u == y:
            return worst
        for w in search(space, [u], cap=b):
            if w in seen or w not in around:
                continue
            seen.add(w)
            heapq.heappush(heap, (around[w], w))
    return None


def check_uniform_b_connected(space: Space, b: int, E1: int,
                              samples: Sequence[tuple[Vertex, Vertex]],
                              max_radius: int | None = None) -> int | Counterexample:
    """Smallest ``E2 >= E1`` certifying uniform b-connectedness on ``samples``."""
    if not samples:
        raise InvalidInput("need at least one sample pair")
    max_radius = 10 * E1 if max_radius is None else max_radius
    E2 = E1
    for x, y in samples:
        if distance(space, x, y, E1) is None:
            raise InvalidInput(f"sample pair {x}, {y} is farther apart than E1")
        e = chain_radius(space, x, y, b, max_radius)
        if e is None:
            return Counterexample("no b-chain inside B(x, max_radius)", (x, y))
        E2 = max(E2, e)
    return E2


def dist_to_set(space: Space, y: Vertex, target: frozenset, cap: int | None = None) -> int | None:
    if y in target:
        return 0
    dist = {}
    if space.unit_lengths:
        dist = search(space, [y], cap=cap)
        found = [d for v, d in dist.items() if v in target]
        return min(found) if found else None
    heap = [(0, y)]
    best = {y: 0}
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        if v in target:
            return d
        done.add(v)
        if len(done) > space.budget:
            raise BudgetExceeded(space.budget)
        for w, length in space.neighbors(v):
            nd = d + length
            if cap is not None and nd > cap:
                continue
            if nd < best.get(w, nd + 1):
                best[w] = nd
                heapq.heappush(heap, (nd, w))
    return None


def check_property_M(space: Space, samples: Sequence[tuple[Vertex, int, Vertex]],
                     bound: int | None = None) -> int | Counterexample:
    """Largest ``d(y, B(x, r))`` over samples with ``y`` in ``B(x, r + scale)``."""
    worst = 0
    for x, r, y in samples:
        dist = search(space, [x], cap=r + space.scale)
        if y not in dist:
            raise InvalidInput(f"{y} is not in B({x}, r + 1)")
        if dist[y] <= r:
            continue
        inside = frozenset(v for v, d in dist.items() if d <= r)
        c = dist_to_set(space, y, inside, cap=dist[y])
        if c is None:
            return Counterexample("B(x, r) unreachable from y", (x, r, y))
        if bound is not None and c > bound:
            return Counterexample(f"d(y, B(x, r)) = {c} exceeds {bound}", (x, r, y))
        worst = max(worst, c)
    return worst


def check_sphere_inclusions(space: Space, samples: Sequence[tuple[Vertex, int]],
                            C: int) -> bool | Counterexample:
    """Both shell inclusions for balls at each sampled ``(x, r)``.

    (a) ``d_{S/2} B(x, r + S/2)`` lies in ``B(x, r + S) \\ B(x, r)``;
    (b) ``B(x, r + S) \\ B(x, r)`` lies in ``d_C B(x, r + S)``.
    Needs an even scale so that half a unit is a whole scaled length.
    """
    S = space.scale
    if S % 2:
        raise InvalidInput("the scale must be even; rescale the space first")
    for x, r in samples:
        dist = search(space, [x], cap=r + S + max(C, S))
        half = region(space, (v for v, d in dist.items() if d <= r + S // 2))
        shell = {v for v, d in dist.items() if r < d <= r + S}
        if not h_boundary(space, half, S // 2).vertices <= shell:
            return Counterexample("half-unit boundary leaves the shell", (x, r))
        big = region(space, (v for v, d in dist.items() if d <= r + S))
        if not shell <= h_boundary(space, big, C).vertices:
            return Counterexample(f"shell not inside the {C}-boundary", (x, r))
    return True


def _volumes(space: Space, x: Vertex, radii: Sequence[int]) -> list:
    dist = search(space, [x], cap=max(radii))
    by_d = sorted(dist.items(), key=lambda kv: kv[1])
    out = []
    i = 0
    acc = 0
    for r in radii:
        while i < len(by_d) and by_d[i][1] <= r:
            acc += space.mu(by_d[i][0])
            i += 1
        out.append(acc)
    return out


def growth_curve(space: Space, x: Vertex, radii: Sequence[int]) -> GrowthCurve:
    radii = list(radii)
    if radii != sorted(radii) or (radii and radii[0] < 0):
        raise InvalidInput("radii must be sorted and nonnegative")
    if not radii:
        return GrowthCurve(x, (), space.scale)
    return GrowthCurve(x, tuple(zip(radii, _volumes(space, x, radii))), space.scale)


def check_doubling(space: Space, samples: Sequence[tuple[Vertex, int]]) -> DoublingReport:
    """Worst ``mu(B(x,2r)) / mu(B(x,r))`` per radius and overall."""
    per = {}
    for x, r in samples:
        if r <= 0:
            raise InvalidInput("radii must be positive")
        small, big = _volumes(space, x, [r, 2 * r])
        ratio = Fraction(big, small)
        if ratio > per.get(r, 0):
            per[r] = ratio
    return DoublingReport(per, max(per.values(), default=Fraction(1)))


def metric_components(space: Space, A: Region | Iterable[Vertex], gap: int) -> list:
    """Classes of ``A`` under the relation "joined by steps shorter than gap"."""
    verts = A.vertices if isinstance(A, Region) else frozenset(A)
    left = set(verts)
    comps = []
    while left:
        seed = min(left)
        comp = {seed}
        frontier = [seed]
        left.discard(seed)
        while frontier:
            reach = search(space, frontier, cap=gap - 1)
            frontier = [v for v in reach if v in left]
            for v in frontier:
                left.discard(v)
                comp.add(v)
        comps.append(frozenset(comp))
    return comps


def is_connected(space: Space, A: Region | Iterable[Vertex], gap: int | None = None) -> bool | Partition:
    """True iff A has no split into two parts at distance >= gap (default 10 units)."""
    gap = 10 * space.scale if gap is None else gap
    comps = metric_components(space, A, gap)
    if len(comps) <= 1:
        return True
    rest = frozenset().union(*comps[1:])
    return Partition(comps[0], rest, gap)


# ---------------------------------------------------------------------------
# finite spaces and JSON


def finite_space(vertices: Sequence[Vertex], edges: Sequence[tuple[int, int, int]],
                 scale: int = 1, measures: Sequence[int] | None = None,
                 name: str = "finite", provenance: dict | None = None) -> Space:
    """A finite space from a vertex list and ``(i, j, length)`` edges."""
    verts = [tuple(v) for v in vertices]
    adj = {v: {} for v in verts}
    for i, j, length in edges:
        if length < 1:
            raise InvalidInput("edge lengths must be >= 1")
        if i == j:
            continue
        u, w = verts[i], verts[j]
        prev = adj[u].get(w)
        if prev is None or length < prev:
            adj[u][w] = length
            adj[w][u] = length
    table = {v: tuple(nb.items()) for v, nb in adj.items()}
    measure = None
    if measures is not None:
        if any(m < 1 for m in measures):
            raise InvalidInput("vertex measures must be >= 1")
        mtab = dict(zip(verts, measures))
        measure = mtab.__getitem__
    unit = all(length == 1 for nb in table.values() for _, length in nb)
    return Space(table.__getitem__, scale=scale, measure=measure,
                 vertices=frozenset(verts), unit_lengths=unit, name=name,
                 provenance=provenance)


def materialize(space: Space, vertices: Iterable[Vertex], name: str | None = None) -> Space:
    """The finite subspace induced on ``vertices`` (edges among them only)."""
    verts = sorted(set(vertices))
    index = {v: i for i, v in enumerate(verts)}
    edges = []
    for v in verts:
        for w, length in space.neighbors(v):
            j = index.get(w)
            if j is not None and index[v] < j:
                edges.append((index[v], j, length))
    measures = None if space.measure is None else [space.mu(v) for v in verts]
    return finite_space(verts, edges, scale=space.scale, measures=measures,
                        name=name or f"{space.name}[induced]")


def rescaled(space: Space, factor: int) -> Space:
    """The same space with every length and the scale multiplied by ``factor``."""
    if factor < 1:
        raise InvalidInput("factor must be a positive integer")
    nbrs = space.neighbors

    def neighbors(v):
        return [(w, length * factor) for w, length in nbrs(v)]

    prov = None
    if space.provenance is not None:
        prov = dict(space.provenance)
        prov["rescale"] = prov.get("rescale", 1) * factor
    return Space(neighbors, scale=space.scale * factor, measure=space.measure,
                 vertices=space.vertices, unit_lengths=False, budget=space.budget,
                 name=f"{space.name}x{factor}", provenance=prov)


def space_to_json(space: Space, explicit: bool = False) -> dict:
    """Generator form when available, else the explicit finite form."""
    if space.provenance is not None and not explicit:
        return dict(space.provenance)
    if not space.finite:
        raise InvalidInput("infinite space without generator provenance cannot be serialized")
    verts = sorted(space.vertices)
    index = {v: i for i, v in enumerate(verts)}
    edges = []
    for v in verts:
        for w, length in space.neighbors(v):
            if index[v] < index[w]:
                edges.append([index[v], index[w], length])
    edges.sort()
    out = {"scale": space.scale, "vertices": [list(v) for v in verts], "edges": edges}
    if space.measure is not None:
        out["measures"] = [space.mu(v) for v in verts]
    return out


def space_from_json(obj: dict) -> Space:
    if "generator" in obj:
        from .generators import build
        space = build(obj["generator"], obj.get("params", {})).space
        factor = int(obj.get("rescale", 1))
        return space if factor == 1 else rescaled(space, factor)
    try:
        verts = [tuple(v) for v in obj["vertices"]]
        edges = [tuple(e) for e in obj["edges"]]
        scale = int(obj.get("scale", 1))
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed space document: {exc}") from exc
    return finite_space(verts, edges, scale=scale, measures=obj.get("measures"))


def region_to_json(A: Region) -> dict:
    return {"vertices": [list(v) for v in sorted(A.vertices)], "measure": A.measure}


def region_from_json(space: Space, obj: dict) -> Region:
    return region(space, (tuple(v) for v in obj["vertices"]))

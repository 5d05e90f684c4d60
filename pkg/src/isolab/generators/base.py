"""Small spaces used as references and test beds, plus the shared result type."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InvalidInput
from ..space import Region, Space, finite_space, vid


@dataclass
class Generated:
    """A generated space with its distinguished subsets and exact counts."""

    space: Space
    named: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    model: object = None

    def describe(self) -> dict:
        named = {k: {"size": len(v), "measure": v.measure} for k, v in sorted(self.named.items())}
        families = {}
        for k, members in sorted(self.families.items()):
            families[k] = [{"name": m, "size": len(r), "measure": r.measure}
                           for m, r in members.items()]
        return {
            "generator": self.space.provenance.get("generator") if self.space.provenance else self.space.name,
            "params": self.space.provenance.get("params") if self.space.provenance else {},
            "scale": self.space.scale,
            "finite": self.space.finite,
            "vertex_count": len(self.space.vertices) if self.space.finite else None,
            "named": named,
            "families": families,
            "counts": self.counts,
            "info": self.info,
        }


def _prov(name, params):
    return {"generator": name, "params": dict(params)}


def lattice(d: int = 2, scale: int = 1) -> Space:
    """The Cayley graph of Z^d, every edge of length ``scale``."""
    if d < 1:
        raise InvalidInput("dimension must be >= 1")

    def neighbors(v):
        out = []
        for i in range(d):
            for s in (1, -1):
                w = list(v)
                w[i] += s
                out.append((tuple(w), scale))
        return out

    return Space(neighbors, scale=scale, unit_lengths=(scale == 1), name=f"Z^{d}",
                 provenance=_prov("lattice", {"d": d, "scale": scale}))


def cycle(n: int, scale: int = 1) -> Space:
    verts = [vid(i) for i in range(n)]
    edges = [(i, (i + 1) % n, scale) for i in range(n)]
    return finite_space(verts, edges, scale=scale, name=f"C{n}",
                        provenance=_prov("cycle", {"n": n, "scale": scale}))


def path(n: int, scale: int = 1) -> Space:
    verts = [vid(i) for i in range(n)]
    edges = [(i, i + 1, scale) for i in range(n - 1)]
    return finite_space(verts, edges, scale=scale, name=f"P{n}",
                        provenance=_prov("path", {"n": n, "scale": scale}))


def box(shape, scale: int = 1) -> Space:
    """The finite grid graph ``[0, shape[0]) x ... x [0, shape[-1])``."""
    shape = tuple(int(s) for s in shape)
    pts = [()]
    for s in shape:
        pts = [p + (i,) for p in pts for i in range(s)]
    verts = [vid(*p) for p in pts]
    index = {v: i for i, v in enumerate(verts)}
    edges = []
    for v, i in index.items():
        for k in range(len(shape)):
            w = list(v)
            w[k] += 1
            j = index.get(tuple(w))
            if j is not None:
                edges.append((i, j, scale))
    return finite_space(verts, edges, scale=scale, name="box" + "x".join(map(str, shape)),
                        provenance=_prov("box", {"shape": list(shape), "scale": scale}))


def ladder(rung: int, scale: int = 1) -> Space:
    """Two copies of Z joined at every point by an edge of length ``rung``."""

    def neighbors(v):
        x, side, t = v
        return [((x + 1, side, t), scale), ((x - 1, side, t), scale), ((x, 1 - side, t), rung)]

    return Space(neighbors, scale=scale, name="ladder",
                 provenance=_prov("ladder", {"rung": rung, "scale": scale}))


def wrap(space: Space, **named: Region) -> Generated:
    return Generated(space, named=dict(named))

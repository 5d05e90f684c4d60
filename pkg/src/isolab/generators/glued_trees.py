"""Chains of doubled, stretched binary trees (linear volume growth).

``G_n`` is the binary tree of depth n whose edges from generation k-1 to k
are paths of length ``2^(2^(n-k))``.  ``G'_n`` glues two copies of ``G_n``
along their last generation, and consecutive ``G'_n`` are chained by
identifying the root of the second copy of ``G'_n`` with the root of the
first copy of ``G'_(n+1)``.

Vertex ids are ``(n, copy, k, j, s, 0)``: the branch vertex ``j`` of
generation ``k`` has ``s = 0``; interior points of the path entering it
have ``s = 1 .. L-1`` counted from the parent side.
"""

from __future__ import annotations

from ..errors import BudgetExceeded, InvalidInput
from ..space import finite_space, region
from .base import Generated, _prov


def edge_length(n: int, k: int) -> int:
    """Length of the path from generation k-1 to k inside G_n."""
    return 2 ** (2 ** (n - k))


def predicted_vertex_count(n_max: int) -> int:
    """Closed-form vertex count of the chain G'_1 ... G'_(n_max)."""
    total = 0
    for n in range(1, n_max + 1):
        interior = sum(2 ** k * (edge_length(n, k) - 1) for k in range(1, n + 1))
        branch = 2 ** n - 1  # generations 0 .. n-1 of one copy
        total += 2 * (interior + branch) + 2 ** n
    # each gluing r'_n = r_(n+1) merges two roots
    return total - (n_max - 1)


def _canon(v, n_max):
    n, c, k, j, s, t = v
    if s == 0 and k == n and c == 1:
        return (n, 0, k, j, 0, t)
    if s == 0 and k == 0 and c == 1 and n < n_max:
        return (n + 1, 0, 0, 0, 0, t)
    return v


def gen_glued_trees(n_max: int = 4, budget: int = 2_000_000) -> Generated:
    if n_max < 1:
        raise InvalidInput("n_max must be >= 1")
    if predicted_vertex_count(n_max) > budget:
        raise BudgetExceeded(budget, "glued trees construction")
    edges = set()
    for n in range(1, n_max + 1):
        for c in (0, 1):
            for k in range(1, n + 1):
                L = edge_length(n, k)
                for j in range(2 ** k):
                    parent = (n, c, k - 1, j // 2, 0, 0)
                    chain = [parent] + [(n, c, k, j, s, 0) for s in range(1, L)] + [(n, c, k, j, 0, 0)]
                    for a, b in zip(chain, chain[1:]):
                        a, b = _canon(a, n_max), _canon(b, n_max)
                        edges.add((min(a, b), max(a, b)))
    verts = sorted({v for e in edges for v in e})
    index = {v: i for i, v in enumerate(verts)}
    space = finite_space(verts, [(index[a], index[b], 1) for a, b in sorted(edges)],
                         name=f"glued_trees(n_max={n_max})",
                         provenance=_prov("glued_trees", {"n_max": n_max}))
    named = {}
    roots = {}
    for n in range(1, n_max + 1):
        roots[f"r_{n}"] = _canon((n, 0, 0, 0, 0, 0), n_max)
        roots[f"r'_{n}"] = _canon((n, 1, 0, 0, 0, 0), n_max)
        for k in range(n + 1):
            named[f"G_{n}/gen_{k}"] = region(space, {_canon((n, 0, k, j, 0, 0), n_max) for j in range(2 ** k)})
    for key, v in roots.items():
        named[key] = region(space, [v])
    prefixes = {}
    for n in range(1, n_max + 1):
        prefixes[f"upto_G'_{n}"] = region(space, (v for v in verts if v[0] <= n))
    counts = {"vertices": len(verts), "predicted_vertices": predicted_vertex_count(n_max),
              "edges": len(edges)}
    info = {"roots": {k: list(v) for k, v in roots.items()}, "growth_constant": 8}
    return Generated(space, named=named, families={"prefixes": prefixes}, counts=counts, info=info)

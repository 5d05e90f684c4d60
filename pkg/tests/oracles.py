"""Independent reference computations for the tests.

Everything here goes through networkx shortest paths and plain itertools
subset enumeration; nothing is shared with the isolab engine.
"""

from __future__ import annotations

from itertools import combinations

import networkx as nx


def to_nx(space):
    """Weighted networkx graph of a finite space."""
    G = nx.Graph()
    for v in space.vertices:
        G.add_node(v)
        for w, length in space.neighbors(v):
            G.add_edge(v, w, weight=length)
    return G


def all_distances(G):
    return dict(nx.all_pairs_dijkstra_path_length(G, weight="weight"))


def boundary(G, dist, A, h):
    """Vertices within h of both A and its complement (by definition)."""
    A = set(A)
    comp = set(G.nodes) - A
    out = set()
    for x in G.nodes:
        dx = dist[x]
        near_a = any(dx.get(a, float("inf")) <= h for a in A)
        near_c = any(dx.get(c, float("inf")) <= h for c in comp)
        if near_a and near_c:
            out.add(x)
    return out


def gap_connected(dist, A, gap):
    """No split of A into parts at distance >= gap."""
    A = list(A)
    if len(A) <= 1:
        return True
    H = nx.Graph()
    H.add_nodes_from(A)
    for u, v in combinations(A, 2):
        if dist[u].get(v, float("inf")) < gap:
            H.add_edge(u, v)
    return nx.is_connected(H)


def profile(G, h, gap=None):
    """``{t: I(t)}`` by enumerating every subset of measure <= |X|/2."""
    nodes = sorted(G.nodes)
    dist = all_distances(G)
    half = len(nodes) // 2
    best = {}
    for k in range(1, half + 1):
        for A in combinations(nodes, k):
            if gap is not None and not gap_connected(dist, A, gap):
                continue
            b = len(boundary(G, dist, A, h))
            if k not in best or b < best[k]:
                best[k] = b
    out = {}
    run = None
    for t in range(half, 0, -1):
        if t in best and (run is None or best[t] < run):
            run = best[t]
        if run is not None:
            out[t] = run
    return out


def lattice_ball(center, r):
    """L1 ball of Z^d as coordinate tuples."""
    d = len(center)

    def rec(prefix, left):
        i = len(prefix)
        if i == d:
            yield tuple(prefix)
            return
        for s in range(-left, left + 1):
            yield from rec(prefix + [center[i] + s], left - abs(s))

    return set(rec([], r))

"""Z^2 with short edges along a sequence of self-similar subtrees.

The tree ``A_k`` is rooted at ``a_k = (4^k, 0)``.  A point belongs to it iff

    x = a_k + 2^k e_0 + 2^(k-1) e_1 + ... + 2^(k-i) e_i + r e_(i+1)

with unit vectors ``e_j``, no immediate reversal ``e_(j+1) != -e_j``,
``0 <= r <= 2^(k-i-1) - 1`` and ``-1 <= i <= k-1``.  ``i = -1`` covers the
first segment ``a_k + r e_0`` (``r < 2^k``), without which the tree would not
be connected.  Tree edges get length 1 and all other lattice edges length
100 under scale 100.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..errors import InvalidInput
from ..space import Space, region, vid
from .base import Generated, _prov

SCALE = 100
UNITS = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass(frozen=True)
class AkDecomposition:
    """Terms of the tree expansion of a point of ``A_k``.

    ``eps`` holds the full-length terms ``e_0 .. e_i``; ``tail`` is the
    direction of the partial last term of length ``r`` (None when r = 0).
    The root has ``i = None``.
    """

    k: int
    i: int | None
    eps: tuple
    r: int
    tail: tuple | None

    @property
    def depth(self) -> int:
        """Intrinsic tree distance to the root."""
        return sum(2 ** (self.k - j) for j in range(len(self.eps))) + self.r


def root(k: int) -> tuple:
    return (4 ** k, 0)


def leaf_depth(k: int) -> int:
    """Largest tree distance from a_k reached inside A_k."""
    return 2 ** (k + 1) - 2


def sphere_radius(k: int) -> int:
    """``r_k`` in scaled units: 2^(k+1) - 1."""
    return 2 ** (k + 1) - 1


def extent(k: int) -> int:
    """Sup-norm radius of A_k around its root."""
    return 2 ** (k + 1) - 2


def _neg(e):
    return (-e[0], -e[1])


def _decompose(dx, dy, scale, prev):
    """Terms for offset (dx, dy) when the next full term has length ``scale``."""
    if dx == 0 and dy == 0:
        return (), 0, None
    # partial term r * e with 0 < r < scale
    for e in UNITS:
        if prev is not None and e == _neg(prev):
            continue
        if e[0] * dy == e[1] * dx and e[0] * dx + e[1] * dy > 0:
            r = abs(dx) + abs(dy)
            if r < scale:
                return (), r, e
    if scale < 2:
        return None
    for e in UNITS:
        if prev is not None and e == _neg(prev):
            continue
        rx, ry = dx - scale * e[0], dy - scale * e[1]
        if abs(rx) + abs(ry) > scale - 1:
            continue
        rest = _decompose(rx, ry, scale // 2, e)
        if rest is not None:
            eps, r, tail = rest
            return (e,) + eps, r, tail
    return None


def decompose_ak(x, k: int) -> AkDecomposition | None:
    """Unique tree expansion of lattice point ``x`` in ``A_k``, or None."""
    if k < 1:
        raise InvalidInput("k must be >= 1")
    ax, ay = root(k)
    dx, dy = x[0] - ax, x[1] - ay
    if max(abs(dx), abs(dy)) > extent(k):
        return None
    res = _decompose(dx, dy, 2 ** k, None)
    if res is None:
        return None
    eps, r, tail = res
    if not eps and r == 0:
        return AkDecomposition(k, None, (), 0, None)
    return AkDecomposition(k, len(eps) - 1, eps, r, tail)


def recompose(dec: AkDecomposition) -> tuple:
    x, y = root(dec.k)
    for j, e in enumerate(dec.eps):
        x += 2 ** (dec.k - j) * e[0]
        y += 2 ** (dec.k - j) * e[1]
    if dec.r:
        x += dec.r * dec.tail[0]
        y += dec.r * dec.tail[1]
    return (x, y)


def parent(x, k: int):
    """Tree parent of a point of A_k (None for the root)."""
    dec = decompose_ak(x, k)
    if dec is None:
        raise InvalidInput(f"{x} is not in A_{k}")
    return _parent(x, dec)


def _parent(x, dec):
    if dec.r:
        step = dec.tail
    elif dec.eps:
        step = dec.eps[-1]
    else:
        return None
    return (x[0] - step[0], x[1] - step[1])


def walk_tree(k: int) -> dict:
    """Independent membership oracle: walk A_k outward from its root.

    Follows the construction directly (segments halving in length, never
    turning back) and returns ``{point: tree depth}``.
    """
    out = {root(k): 0}

    def grow(p, depth, length, prev, level):
        # a full segment of ``length`` steps along each allowed direction
        for e in UNITS:
            if prev is not None and e == _neg(prev):
                continue
            q = p
            for step in range(1, length + 1):
                q = (q[0] + e[0], q[1] + e[1])
                out.setdefault(q, depth + step)
            if level + 1 < k:
                grow(q, depth + length, length // 2, e, level + 1)

    grow(root(k), 0, 2 ** k, None, 0)
    return out


@lru_cache(maxsize=None)
def tree_points(k: int) -> frozenset:
    return frozenset(walk_tree(k))


def which_tree(p) -> int | None:
    """Index k of the tree whose bounding box contains p (at most one)."""
    x, y = p
    if x <= 0:
        return None
    k = max(1, (x.bit_length() - 1) // 2)
    for kk in (k - 1, k, k + 1):
        if kk >= 1 and max(abs(x - 4 ** kk), abs(y)) <= extent(kk):
            return kk
    return None


@lru_cache(maxsize=1 << 20)
def _tree_info(p):
    k = which_tree(p)
    if k is None:
        return None
    dec = decompose_ak(p, k)
    if dec is None:
        return None
    return k, dec


def is_tree_edge(p, q) -> bool:
    ip, iq = _tree_info(p), _tree_info(q)
    if ip is None or iq is None or ip[0] != iq[0]:
        return False
    return _parent(p, ip[1]) == q or _parent(q, iq[1]) == p


def _neighbors(v):
    x, y, t = v
    out = []
    for dx, dy in UNITS:
        w = (x + dx, y + dy)
        length = 1 if is_tree_edge((x, y), w) else SCALE
        out.append(((w[0], w[1], t), length))
    return out


def gen_vonkoch(k_max: int = 6) -> Generated:
    if not 1 <= k_max <= 7:
        raise InvalidInput("k_max must be in 1..7")
    space = Space(_neighbors, scale=SCALE, name=f"vonkoch(k_max={k_max})",
                  provenance=_prov("vonkoch", {"k_max": k_max}))
    named = {}
    counts = {}
    trees = {}
    for k in range(1, k_max + 1):
        pts = walk_tree(k)
        A = region(space, (vid(*p) for p in pts))
        top = leaf_depth(k)
        S = region(space, (vid(*p) for p, d in pts.items() if d == top))
        named[f"A_{k}"] = A
        named[f"S_{k}"] = S
        named[f"a_{k}"] = region(space, [vid(*root(k))])
        trees[f"A_{k}"] = A
        counts[f"|A_{k}|"] = len(A)
        counts[f"|S_{k}|"] = len(S)
        counts[f"r_{k}"] = sphere_radius(k)
        counts[f"leaf_depth_{k}"] = top
    info = {"roots": {f"a_{k}": list(root(k)) for k in range(1, k_max + 1)},
            "window": {f"A_{k}": 2 ** (k + 2) for k in range(1, k_max + 1)}}
    return Generated(space, named=named, families={"trees": trees}, counts=counts, info=info)

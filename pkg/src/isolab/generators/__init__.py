"""Constructions of the test spaces, addressable by name."""

from __future__ import annotations


from ..errors import InvalidInput
from .base import Generated, box, cycle, ladder, lattice, path, wrap
from .constricted import gen_constricted
from .cube_chain import gen_cube_chain
from .glued_trees import gen_glued_trees
from .ib_pair import IbPair, gen_ib_pair
from .perforated import gen_perforated
from .vonkoch import decompose_ak, gen_vonkoch, recompose


def _ib_pair(side="X", **params):
    pair = gen_ib_pair(**params)
    if side == "X":
        return pair.x
    if side == "X'":
        return pair.x_prime
    raise InvalidInput("side must be 'X' or \"X'\"")


REGISTRY = {
    "lattice": lambda **p: wrap(lattice(**p)),
    "cycle": lambda **p: wrap(cycle(**p)),
    "path": lambda **p: wrap(path(**p)),
    "box": lambda **p: wrap(box(**p)),
    "ladder": lambda **p: wrap(ladder(**p)),
    "glued_trees": gen_glued_trees,
    "vonkoch": gen_vonkoch,
    "perforated": gen_perforated,
    "constricted": gen_constricted,
    "ib_pair": _ib_pair,
    "cube_chain": gen_cube_chain,
}


def build(name: str, params: dict | None = None) -> Generated:
    """Build a generator by name from a JSON-style parameter dict."""
    if name not in REGISTRY:
        raise InvalidInput(f"unknown generator {name!r}; known: {sorted(REGISTRY)}")
    try:
        return REGISTRY[name](**(params or {}))
    except TypeError as exc:
        raise InvalidInput(f"bad parameters for {name}: {exc}") from exc


__all__ = ["Generated", "IbPair", "REGISTRY", "build", "box", "cycle", "decompose_ak",
           "gen_constricted", "gen_cube_chain", "gen_glued_trees", "gen_ib_pair",
           "gen_perforated", "gen_vonkoch", "ladder", "lattice", "path", "recompose", "wrap"]

from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from isolab.errors import BudgetExceeded, InvalidInput
from isolab.generators import gen_glued_trees, gen_vonkoch, lattice, path, cycle
from isolab.generators.vonkoch import root
from isolab.space import (Counterexample, Partition, annulus, b_distance, ball,
                          check_doubling, check_property_M, check_sphere_inclusions,
                          check_uniform_b_connected, distance, finite_space, growth_curve,
                          h_boundary, is_connected, materialize, neighborhood, region,
                          region_from_json, region_to_json, rescaled, search, space_from_json,
                          space_to_json, vid)

Z1, Z2 = lattice(1), lattice(2)
O = vid(0, 0)


def square(x0, y0, side):
    return region(Z2, (vid(x0 + i, y0 + j) for i in range(side) for j in range(side)))


# distances and balls


def test_distance_examples():
    assert distance(Z2, O, O, 5) == 0
    assert distance(Z2, O, vid(3, 4), 100) == 7
    assert distance(Z2, O, vid(3, 4), 6) is None
    with pytest.raises(InvalidInput):
        distance(Z2, O, vid(1, 0), -1)


def test_vonkoch_tree_path_is_short():
    sp = gen_vonkoch(3).space
    a = vid(*root(3))
    assert distance(sp, a, vid(root(3)[0] + 8, 0), 10_000) == 8


def test_ball_sizes_match_lattice_count():
    for r in range(5):
        B = ball(Z2, O, r)
        assert {v[:2] for v in B.vertices} == oracles.lattice_ball((0, 0), r)
    assert [len(ball(Z2, O, r)) for r in (1, 2, 3)] == [5, 13, 25]


def test_annulus_examples():
    assert {v[:2] for v in annulus(Z2, O, 0, 1).vertices} == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert len(annulus(Z2, O, 1, 2)) == 8
    P = path(3)
    x = min(P.vertices)
    assert len(annulus(P, x, 5, 9)) == 0


def test_neighborhood_examples():
    A = square(0, 0, 2)
    assert neighborhood(Z2, A, 0).vertices == A.vertices
    assert len(neighborhood(Z2, [O], 1)) == 5
    assert len(neighborhood(Z2, A, 1)) == 12


def test_h_boundary_examples():
    assert len(h_boundary(Z2, [O], 1)) == 5
    assert len(h_boundary(Z2, square(0, 0, 3), 1)) == 20
    C = cycle(6)
    assert len(h_boundary(C, C.vertices, 3)) == 0
    assert len(h_boundary(Z2, [], 1)) == 0


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        search(Z2, [O], cap=100, budget=50)


# chains, property (M), doubling


def test_b_distance_examples():
    assert b_distance(Z2, O, O, 1, 10) == 0
    assert b_distance(Z2, O, vid(5, 0), 1, 100) == 5
    assert b_distance(Z2, O, vid(5, 0), 2, 100) == 3


def test_uniform_b_connected_on_lattice():
    pairs = [(O, vid(3, 4)), (O, vid(-5, 5)), (vid(2, 2), vid(-2, -2))]
    assert check_uniform_b_connected(Z2, 1, 10, pairs) == 10


def test_uniform_b_connected_two_lines():
    # two unit-step lines joined only by rungs of length 5
    verts = [(i, j, 0) for j in (0, 1) for i in range(40)]
    idx = {v: k for k, v in enumerate(verts)}
    edges = [(idx[(i, j, 0)], idx[(i + 1, j, 0)], 1) for j in (0, 1) for i in range(39)]
    edges += [(idx[(i, 0, 0)], idx[(i, 1, 0)], 5) for i in range(40)]
    sp = finite_space(verts, edges)
    out = check_uniform_b_connected(sp, 1, 20, [((10, 0, 0), (10, 1, 0))])
    assert isinstance(out, Counterexample)


def test_uniform_b_connected_vonkoch():
    sp = gen_vonkoch(3).space
    a = root(3)
    pairs = [(vid(a[0] + i, 0), vid(a[0] + i, j)) for i in range(0, 8, 2) for j in (1, 3)]
    # b is one true unit; steps of one scaled unit only move along tree edges
    out = check_uniform_b_connected(sp, 100, 1000, pairs)
    assert isinstance(out, int) and out >= 1000


def test_property_M_lattice_and_inside():
    samples = [(O, 3, vid(4, 0)), (O, 3, vid(2, 2)), (O, 5, vid(1, 1))]
    assert check_property_M(Z2, samples) == 1
    assert check_property_M(Z2, [(O, 3, vid(1, 1))]) == 0


def test_property_M_glued_trees_window():
    sp = gen_glued_trees(3).space
    verts = sorted(sp.vertices)
    samples = []
    for x in verts[::7]:
        dist = search(sp, [x], cap=12)
        for r in (3, 8, 11):
            samples += [(x, r, y) for y, d in dist.items() if d == r + 1]
    assert check_property_M(sp, samples) <= 2


def test_doubling():
    rep = check_doubling(Z1, [(vid(0), r) for r in (10, 100, 1000)])
    assert rep.per_radius[1000] == Fraction(4001, 2001)
    rep2 = check_doubling(Z2, [(O, r) for r in (5, 10, 20)])
    assert rep2.constant <= Fraction(9, 2)
    P = path(4)
    assert check_doubling(P, [(min(P.vertices), 10)]).constant == 1


def test_growth_curve():
    g = growth_curve(Z2, O, [1, 2, 3])
    assert g.volumes == [5, 13, 25]
    assert growth_curve(Z2, O, [0]).volumes == [1]
    with pytest.raises(InvalidInput):
        growth_curve(Z2, O, [2, 1])


def test_glued_trees_balls_linear():
    sp = gen_glued_trees(3).space
    for x in sorted(sp.vertices)[::5]:
        g = growth_curve(sp, x, [1, 2, 4, 8, 16, 32])
        assert all(v <= 8 * r for r, v in g.points)


def test_is_connected():
    assert is_connected(Z2, ball(Z2, O, 4)) is True
    part = is_connected(Z2, [O, vid(100, 0)])
    assert isinstance(part, Partition) and not part


def test_sphere_inclusions_lattice():
    sp = rescaled(Z2, 2)
    samples = [(O, r) for r in range(2, 20, 3)] + [(vid(3, -1), 7)]
    assert check_sphere_inclusions(sp, samples, 2) is True
    with pytest.raises(InvalidInput):
        check_sphere_inclusions(Z2, samples, 1)


def test_sphere_inclusion_fails_on_dead_end():
    # a path seen from one end: the far end has nothing beyond it
    P = rescaled(path(5), 2)
    x = min(P.vertices)
    assert isinstance(check_sphere_inclusions(P, [(x, 6)], 2), Counterexample)


# JSON and derived spaces


def test_space_json_round_trip_generator_form():
    g = gen_glued_trees(2)
    doc = space_to_json(g.space)
    back = space_from_json(doc)
    assert back.vertices == g.space.vertices


def test_space_json_explicit_and_measures():
    sp = finite_space([(0, 0), (1, 0), (2, 0)], [(0, 1, 2), (1, 2, 3)], scale=2, measures=[1, 2, 3])
    doc = space_to_json(sp, explicit=True)
    back = space_from_json(doc)
    assert space_to_json(back, explicit=True) == doc
    A = region(back, [(1, 0), (2, 0)])
    assert A.measure == 5
    assert region_from_json(back, region_to_json(A)) == A


def test_rescaled_keeps_true_distances():
    sp = rescaled(cycle(8), 3)
    x = min(sp.vertices)
    assert sp.scale == 3
    assert max(search(sp, [x]).values()) == 12
    back = space_from_json(space_to_json(sp))
    assert back.scale == 3


def test_materialize():
    sub = materialize(Z2, ball(Z2, O, 2).vertices)
    assert len(sub.vertices) == 13
    assert len(h_boundary(sub, [O], 1)) == 5


# property tests against networkx


@st.composite
def weighted_graphs(draw, max_n=9):
    n = draw(st.integers(2, max_n))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1),
                                    st.integers(1, 4)), max_size=3 * n))
    edges = [(i, j, w) for i, j, w in edges if i != j]
    return finite_space([(i, 0) for i in range(n)], edges)


@settings(max_examples=60, deadline=None)
@given(weighted_graphs(), st.data())
def test_search_matches_dijkstra(sp, data):
    G = oracles.to_nx(sp)
    x = data.draw(st.sampled_from(sorted(sp.vertices)))
    ref = nx.single_source_dijkstra_path_length(G, x, weight="weight")
    assert search(sp, [x]) == dict(ref)
    cap = data.draw(st.integers(0, 8))
    assert search(sp, [x], cap=cap) == {v: d for v, d in ref.items() if d <= cap}


@settings(max_examples=60, deadline=None)
@given(weighted_graphs(), st.data())
def test_h_boundary_matches_definition(sp, data):
    G = oracles.to_nx(sp)
    dist = oracles.all_distances(G)
    verts = sorted(sp.vertices)
    A = data.draw(st.sets(st.sampled_from(verts)))
    h = data.draw(st.integers(1, 6))
    assert h_boundary(sp, A, h).vertices == oracles.boundary(G, dist, A, h)


def test_sphere_inclusion_fails_behind_the_chain_start():
    # the chain of glued trees starts at r_1, so balls around a later root
    # swallow the whole start while the complement lies on the far side
    sp = rescaled(gen_glued_trees(3).space, 2)
    x = (3, 0, 0, 0, 0, 0)
    out = check_sphere_inclusions(sp, [(x, 30)], 2)
    assert isinstance(out, Counterexample)
    dist = search(sp, [x], cap=32)
    samples = [(x, 30, y) for y, d in dist.items() if d > 30]
    assert check_property_M(sp, samples) <= 4

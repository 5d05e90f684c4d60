import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from isolab.errors import EmptyAtT, InvalidInput, OutOfRange, TooLarge
from isolab.generators import box, cycle, gen_glued_trees, gen_perforated, lattice, path
from isolab.profiles import (FamilySpec, Grid, PhiCurve, ProfileCurve, annulus_inf_check,
                             compare, compose, exact_profile, family_profile, grid_upto,
                             parse_grid, phi_from_growth, sphere_inf_check, strong_profile_check,
                             strong_target)
from isolab.space import GrowthCurve, ball, finite_space, growth_curve, h_boundary, vid

Z2 = lattice(2)
O = vid(0, 0)


# exact profiles


def test_eight_cycle():
    prof = exact_profile(cycle(8), 1)
    assert prof.points == ((1, 3), (2, 4), (3, 4), (4, 4))
    assert prof.points == tuple(sorted(oracles.profile(oracles.to_nx(cycle(8)), 1).items()))


def test_two_point_space():
    K2 = finite_space([(0,), (1,)], [(0, 1, 1)])
    assert exact_profile(K2, 1).points == ((1, 2),)


def test_connected_profile_dominates_exact():
    P = path(6)
    ex = dict(exact_profile(P, 1).points)
    co = dict(exact_profile(P, 1, connected_only=True).points)
    assert all(co[t] >= ex[t] for t in ex)


def test_connected_profile_matches_oracle():
    P = path(10)
    G = oracles.to_nx(P)
    for gap in (2, 3):
        ref = oracles.profile(G, 1, gap=gap)
        assert dict(exact_profile(P, 1, connected_only=True, gap=gap).points) == ref


def test_exact_profile_limits():
    with pytest.raises(TooLarge):
        exact_profile(box((5, 5)), 1)
    with pytest.raises(InvalidInput):
        exact_profile(Z2, 1)
    with pytest.raises(InvalidInput):
        exact_profile(cycle(4), 0)


def test_weighted_measures():
    sp = finite_space([(0,), (1,), (2,)], [(0, 1, 1), (1, 2, 1)], measures=[1, 3, 1])
    # mu(X)/2 = 2; {end} has boundary {end, middle} of measure 4, {both ends} has 5
    assert dict(exact_profile(sp, 1).points) == {1: 4, 2: 5}


@st.composite
def small_graphs(draw):
    n = draw(st.integers(2, 9))
    pairs = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    lengths = draw(st.lists(st.integers(1, 3), min_size=len(pairs), max_size=len(pairs)))
    edges = [(i, j, w) for (i, j), w in zip(sorted(pairs), lengths) if i != j]
    return finite_space([(i,) for i in range(n)], edges)


@settings(max_examples=40, deadline=None)
@given(small_graphs(), st.integers(1, 4))
def test_exact_profile_matches_brute_force(sp, h):
    ref = oracles.profile(oracles.to_nx(sp), h)
    assert dict(exact_profile(sp, h).points) == ref


@settings(max_examples=25, deadline=None)
@given(small_graphs(), st.integers(1, 3), st.integers(2, 5))
def test_connected_profile_matches_brute_force(sp, h, gap):
    ref = oracles.profile(oracles.to_nx(sp), h, gap=gap)
    assert dict(exact_profile(sp, h, connected_only=True, gap=gap).points) == ref


@settings(max_examples=25, deadline=None)
@given(small_graphs())
def test_profile_monotone_in_h(sp):
    a = dict(exact_profile(sp, 1).points)
    b = dict(exact_profile(sp, 2).points)
    assert all(b[t] >= a[t] for t in a)


# family profiles


def test_family_profile_balls_grow_like_sqrt():
    fam = {f"B{r}": ball(Z2, O, r) for r in range(1, 11)}
    prof = family_profile(Z2, fam, 1)
    for t, v in prof.points:
        assert 2 * math.sqrt(t) <= v <= 6 * math.sqrt(t)
    assert compare(prof, math.sqrt, grid_upto(3), mode="equivalent").relation == "equivalent"


def test_singleton_family():
    A = ball(Z2, O, 3)
    b = h_boundary(Z2, A, 1).measure
    prof = family_profile(Z2, FamilySpec.of("one", [A]), 1, ts=[1, 10, 25, 26])
    assert prof.points == ((1, b), (10, b), (25, b))
    assert prof.undefined == (26,)
    with pytest.raises(EmptyAtT):
        family_profile(Z2, {"A": A}, 1, ts=[26], strict=True)
    up = family_profile(Z2, {"A": A}, 1, mode="upper", ts=[24, 25])
    assert up.points == ((25, b),) and up.undefined == (24,)


def test_perforated_family_values():
    g = gen_perforated(2, [4, 9, 16, 25])
    prof = family_profile(g.space, g.families["A"], 1)
    for n in (4, 9, 16, 25):
        assert prof.value(g.counts[f"|A_{n}|"]) == g.counts[f"|dA_{n}|"]
    with pytest.raises(OutOfRange):
        prof.value(11)


def test_profile_json_round_trip():
    prof = exact_profile(cycle(6), 1)
    back = ProfileCurve.from_dict(json.loads(prof.to_json()))
    assert back == prof
    assert prof.to_csv().splitlines()[0] == "t,value"
    with pytest.raises(InvalidInput):
        ProfileCurve.from_dict({"kind": "nope", "points": []})


# phi and comparisons


def test_phi_examples():
    line = GrowthCurve(vid(0), tuple((r, r) for r in range(1, 20)), 1)
    phi = phi_from_growth(line)
    assert [phi(t) for t in (1, 5, 19)] == [1, 5, 19]
    z = growth_curve(Z2, O, [1, 2, 3])
    assert phi_from_growth(z)(6) == 2
    with pytest.raises(OutOfRange):
        phi_from_growth(z)(26)
    step = PhiCurve((3, 3, 3, 9), (1, 2, 3, 4))
    assert [step(t) for t in (1, 3, 4, 9)] == [1, 1, 4, 4]


def test_compare_examples():
    pts = [(t, t) for t in range(1, 50)]
    w = compare(pts, pts)
    assert (w.relation, w.C1, w.C2) == ("dominates", 1, 1)
    w = compare(pts, [(t, 2 * t) for t in range(1, 50)])
    assert (w.relation, w.C1, w.C2) == ("dominates", 1, 1)
    ts = [4 ** k for k in range(1, 11)]
    w = compare(lambda t: t, math.sqrt, parse_grid("2^0..2^10:1000"), ts=ts)
    assert w.relation == "refuted" and w.counterexample == ts[-1]


def test_compare_needs_samples():
    with pytest.raises(InvalidInput):
        compare(math.sqrt, math.sqrt)
    with pytest.raises(InvalidInput):
        compare([(1, 1)], [(5, 1)])


def test_compare_equivalent_reports_back_constants():
    f = [(t, 3 * t) for t in range(1, 30)]
    g = [(t, t) for t in range(1, 30)]
    w = compare(f, g, mode="equivalent")
    # grid constants are powers of two, so 3 rounds up to 4
    assert w.relation == "equivalent" and w.C1 * w.C2 == 4 and (w.C3, w.C4) == (1, 1)
    c1, c2 = compose(w, w)
    assert c1 * c2 == 16


def test_grid_parsing():
    assert parse_grid("1,2,4").values == (1, 2, 4)
    g = parse_grid("2^0..2^3:8")
    assert g.max_product == 8 and all(a * b <= 8 for a, b in g.pairs())
    assert g.maximal() in ((Fraction(8), Fraction(1)), (Fraction(4), Fraction(2)))
    for bad in ("x", "2^0..3^2", "0,1"):
        with pytest.raises(InvalidInput):
            parse_grid(bad)
    assert Grid().describe().startswith("1,2,4")


# strong profile


def test_strong_check_lattice_box_dominates():
    sp = box((3, 6))
    prof = exact_profile(sp, 1)
    growth = growth_curve(sp, vid(1, 2), range(0, 8))
    assert strong_profile_check(prof, growth).relation == "dominates"


def test_strong_check_perforated_refuted():
    g = gen_perforated(2, [k * k for k in range(2, 21)])
    prof = family_profile(g.space, g.families["A"], 1)
    growth = growth_curve(g.space, vid(0, 0), range(0, 140))
    w = strong_profile_check(prof, growth)
    assert w.relation == "refuted" and w.counterexample is not None


def test_strong_check_linear_tree():
    g = gen_glued_trees(3)
    sp = g.space
    x = next(iter(g.named["r_1"].vertices))
    fam = {f"B{r}": ball(sp, x, r) for r in range(1, 60)}
    prof = family_profile(sp, fam, 1)
    growth = growth_curve(sp, x, range(0, 120))
    assert strong_profile_check(prof, growth).relation == "dominates"


def test_strong_target_units():
    growth = GrowthCurve(vid(0), ((0, 1), (2, 5), (4, 9)), 2)
    assert strong_target(growth, [5, 9]) == [(5, Fraction(5)), (9, Fraction(9, 2))]


# annuli


def test_annulus_line_and_plane():
    w = annulus_inf_check(lattice(1), vid(0), 10)
    assert w.annulus_measure == 2 and w.ball_measure == 21
    assert w.ratio == Fraction(20, 21)
    w2 = annulus_inf_check(Z2, O, 8)
    assert w2.ratio <= 2
    with pytest.raises(InvalidInput):
        annulus_inf_check(Z2, O, 0)


def test_sphere_inf_stride_bounds_full_sweep():
    full = sphere_inf_check(Z2, O, 6)
    coarse = sphere_inf_check(Z2, O, 6, stride=3)
    assert full.ratio <= coarse.ratio

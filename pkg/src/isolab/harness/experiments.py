"""Named experiments, each turning one claim into exact checks on tables.

An experiment fills a :class:`Report` with data tables and declarative
assertions; :func:`run_experiment` evaluates the assertions, so the verdict
can always be recomputed from the stored rows.
"""

from __future__ import annotations

import math
import time
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from ..coarse import (estimate_qi_constants, verify_boundary_transport,
                      verify_measure_comparison)
from ..errors import BudgetExceeded, InvalidInput
from ..generators import (box, cycle, gen_constricted, gen_cube_chain, gen_glued_trees,
                          gen_ib_pair, gen_perforated, gen_vonkoch, lattice, path)
from ..generators import vonkoch as vk
from ..generators.glued_trees import edge_length
from ..profiles import (compare, exact_profile, family_profile, grid_upto, parse_grid,
                        strong_profile_check, annulus_inf_check, sphere_inf_check)
from ..space import (ball, growth_curve, h_boundary, is_connected, region, search, vid)
from .report import Report, Table, check, value
from .sampling import Lcg


@dataclass
class ExperimentSpec:
    name: str
    params: dict = field(default_factory=dict)
    budget: int = 2_000_000  # vertex cap handed to generators and searches
    wall_clock: float | None = None  # seconds; checked after the run


@dataclass(frozen=True)
class Experiment:
    claim: str
    defaults: dict
    run: object


def _assert(name, op, table, **kw):
    return {"name": name, "op": op, "table": table, **kw}


def _witness_row(w):
    return (w.relation, w.C1, w.C2, w.C3, w.C4, w.counterexample,
            w.range[0] if w.range else None, w.range[-1] if w.range else None, w.note)


WITNESS_COLUMNS = ["relation", "C1", "C2", "C3", "C4", "counterexample", "t_min", "t_max", "note"]


# ---------------------------------------------------------------------------
# linear growth of the glued trees


def _tree_linear_growth(p, rng, rep, budget):
    g = gen_glued_trees(p["n_max"], budget=budget)
    sp = g.space
    verts = sorted(sp.vertices)
    if p["centers"] != "all":
        verts = sorted(rng.sample(verts, int(p["centers"])))
    dists = {}
    diam = 0
    for x in verts:
        ds = sorted(search(sp, [x]).values())
        dists[x] = ds
        diam = max(diam, ds[-1])
    radii = sorted({max(1, round(i * diam / p["ladder"])) for i in range(1, p["ladder"] + 1)})
    t = Table(["r", "max_volume", "bound", "argmax"])
    C = p["C"]
    for r in radii:
        best, arg = -1, None
        for x in verts:
            v = bisect_right(dists[x], r)
            if v > best:
                best, arg = v, x
        t.add(r, best, C * r, list(arg))
    rep.tables["balls"] = t
    rep.assertions.append(_assert("volume_le_C_r", "all_le", "balls", lhs="max_volume", rhs="bound"))
    roots = Table(["n", "radius", "ball_volume", "boundary"])
    for n in range(1, p["n_max"] + 1):
        x = next(iter(g.named[f"r_{n}"].vertices))
        R = sum(edge_length(n, k) for k in range(1, n + 1))
        B = ball(sp, x, R)
        roots.add(n, R, B.measure, h_boundary(sp, B, 1).measure)
    rep.tables["root_balls"] = roots
    rep.assertions.append(_assert("root_boundaries_increase", "strictly_increasing", "root_balls",
                                  col="boundary"))
    rep.constants.update(C=C, diameter=diam, centers=len(verts))
    rep.curves.append(("max |B(x,r)|", [(r, v) for r, v, *_ in t.rows]))
    rep.curves.append((f"{C} r", [(r, C * r) for r in radii]))


# ---------------------------------------------------------------------------
# the weighted plane with self-similar trees


def _certify_power(mu, p, S):
    """``mu >= (p/S)^(log 3/log 2)`` exactly, using 317/200 > log 3/log 2."""
    if p <= S:
        return mu >= 1
    return mu ** 200 * S ** 317 >= p ** 317


def _vonkoch_spheres(p, rng, rep, budget):
    ks = sorted(p["k_list"])
    g = gen_vonkoch(max(ks))
    sp = g.space
    S = sp.scale
    t = Table(["k", "r_k", "shell_measure", "three_pow", "power_certified",
               "leaves", "literal_inclusion", "rho", "shifted_measure", "shifted_inclusion"])
    for k in ks:
        a = vid(*vk.root(k))
        r = vk.sphere_radius(k)
        rho = vk.leaf_depth(k) - 1
        dist = search(sp, [a], cap=r + S, budget=budget)
        shell = {v for v, d in dist.items() if r < d <= r + S}
        shifted = {v for v, d in dist.items() if rho < d <= rho + S}
        leaves = g.named[f"S_{k}"].vertices
        mu = len(shell)
        t.add(k, r, mu, 3 ** (k - 1), _certify_power(mu, r, S), len(leaves),
              leaves <= shell, rho, len(shifted), leaves <= shifted)
    rep.tables["spheres"] = t
    rep.assertions += [
        _assert("sphere_ge_3^(k-1)", "all_ge", "spheres", lhs="shell_measure", rhs="three_pow"),
        _assert("sphere_ge_r^alpha", "all_true", "spheres", col="power_certified"),
        _assert("leaves_ge_3^(k-1)", "all_ge", "spheres", lhs="leaves", rhs="three_pow"),
        _assert("leaves_in_shifted_shell", "all_true", "spheres", col="shifted_inclusion"),
    ]
    rep.constants.update(alpha_upper="317/200", scale=S)
    rep.curves.append(("sphere measure", [(r, m) for _, r, m, *_ in t.rows]))
    rep.curves.append(("3^(k-1)", [(r, p3) for _, r, _, p3, *_ in t.rows]))


def _vonkoch_geodesics(p, rng, rep, budget):
    ks = sorted(p["k_list"])
    g = gen_vonkoch(max(ks))
    sp = g.space
    geo = Table(["k", "size", "mismatches", "max_depth"])
    lem = Table(["k", "pairs", "violations", "min_slack"])
    for k in ks:
        a = vid(*vk.root(k))
        pts = sorted(g.named[f"A_{k}"].vertices)
        dist = search(sp, [a], cap=vk.leaf_depth(k), budget=budget)
        depth = {x: vk.decompose_ak(x[:2], k).depth for x in pts}
        bad = sum(1 for x in pts if dist.get(x) != depth[x])
        geo.add(k, len(pts), bad, max(depth.values()))
        viol, slack = 0, None
        for _ in range(p["pairs"]):
            u, v = pts[rng.below(len(pts))], pts[rng.below(len(pts))]
            s = 50 * (abs(u[0] - v[0]) + abs(u[1] - v[1])) - (depth[u] - depth[v])
            viol += s < 0
            slack = s if slack is None else min(slack, s)
        lem.add(k, p["pairs"], viol, slack)
    rep.tables["geodesics"] = geo
    rep.tables["lemma"] = lem
    rep.assertions += [
        _assert("plane_distance_equals_tree_depth", "all_eq_const", "geodesics",
                col="mismatches", value=0),
        _assert("lemma_50", "all_eq_const", "lemma", col="violations", value=0),
    ]
    rep.curves.append(("|A_k| by max depth", [(dep, size) for _, size, _, dep in geo.rows]))


# ---------------------------------------------------------------------------
# perforated lattice


def _perforated(p, rng, rep, budget):
    d = p["d"]
    g = gen_perforated(d, p["n_list"], budget=budget)
    sp = g.space
    t = Table(["n", "volume", "boundary", "generator_count", "u"])
    for n in sorted(p["n_list"]):
        A = g.families["A"][f"A_{n}"]
        b = h_boundary(sp, A, 1).measure
        t.add(n, A.measure, b, g.counts[f"|dA_{n}|"], Fraction(A.measure ** (d - 1), b ** d))
    rep.tables["boxes"] = t
    rep.assertions += [
        _assert("u_increasing", "strictly_increasing", "boxes", col="u"),
        _assert("boundary_matches_count", "all_eq", "boxes", lhs="boundary", rhs="generator_count"),
    ]
    big = gen_perforated(d, p["strong_n_list"], budget=budget)
    prof = family_profile(big.space, big.families["A"], 1, "lower")
    top = prof.ts[-1]
    r = 1
    while _l1_ball_volume(r, d) < top:
        r += 1
    growth = growth_curve(big.space, vid(*(0,) * d), range(0, 2 * r + 2))
    w = strong_profile_check(prof, growth, parse_grid(p["grid"]), p["calibrate"])
    s = Table(WITNESS_COLUMNS)
    s.add(*_witness_row(w))
    rep.tables["strong_check"] = s
    rep.tables["profile"] = Table(["t", "value"], [[a, b] for a, b in prof.points])
    rep.assertions.append(_assert("strong_profile_refuted", "all_eq_const", "strong_check",
                                  col="relation", value="refuted"))
    rep.curves.append(("u_n", [(n, float(value(u))) for n, *_, u in t.rows]))


# ---------------------------------------------------------------------------
# constricted balls


def _constricted(p, rng, rep, budget):
    d = p["d"]
    g = gen_constricted(d, p["n_list"], budget=budget)
    sp = g.space
    t = Table(["n", "size", "L", "equator_max", "equator_bound", "pole_min", "half_n_ok",
               "connected"])
    for n in sorted(p["n_list"]):
        C = g.named[f"C_{n}"]
        bd = h_boundary(sp, C, 1)
        dist = search(sp, bd.vertices, cap=2 * n + 2, budget=budget)
        eq = max(dist[v] for v in g.named[f"equator_{n}"].vertices)
        pole = min(dist[v] for v in g.named[f"poles_{n}"].vertices)
        L = g.counts[f"L_{n}"]
        t.add(n, len(C), L, eq, 2 * L + 4, pole, 2 * pole >= n,
              is_connected(sp, C, p["gap"]) is True)
    rep.tables["shape"] = t
    rep.assertions += [
        _assert("equator_near_boundary", "all_le", "shape", lhs="equator_max", rhs="equator_bound"),
        _assert("poles_far_from_boundary", "all_true", "shape", col="half_n_ok"),
        _assert("metrically_connected", "all_true", "shape", col="connected"),
    ]
    rep.curves.append(("equator max distance", [(r[0], r[3]) for r in t.rows]))
    rep.curves.append(("pole min distance", [(r[0], r[5]) for r in t.rows]))


# ---------------------------------------------------------------------------
# the (IB)/(NIB) pair


def _xprime_balls(pair, n_list, radii, extra):
    xp = pair.x_prime.space
    model = pair.x.model
    centers = [model.forward(vid(*model.center(n))) for n in sorted(n_list)]
    centers += [vid(*c) for c in extra]
    fam = {}
    for c in centers:
        for r in radii:
            fam[f"B({list(c[:-1])},{r})"] = ball(xp, c, r)
    return fam


def _ib_pair_contrast(p, rng, rep, budget):
    pair = gen_ib_pair(p["d"], p["n_list"], budget=budget)
    X = pair.x.space
    t = Table(["n", "volume", "boundary"])
    for n in sorted(p["n_list"]):
        A = pair.x.families["A"][f"A_{n}"]
        t.add(n, A.measure, h_boundary(X, A, 1).measure)
    rep.tables["X_boxes"] = t
    rep.assertions.append(_assert("X_boundary_constant", "constant", "X_boxes", col="boundary"))
    fam = _xprime_balls(pair, p["n_list"], range(1, p["r_max"] + 1), p["extra_centers"])
    prof = family_profile(pair.x_prime.space, fam, 1, "lower")
    grid = grid_upto(p["grid_exp"])
    w = compare(prof, math.sqrt, grid, mode="equivalent")
    c = Table(WITNESS_COLUMNS)
    c.add(*_witness_row(w))
    rep.tables["X'_comparison"] = c
    rep.tables["X'_profile"] = Table(["t", "value"], [[a, b] for a, b in prof.points])
    rep.assertions.append(_assert("X'_profile_equivalent_sqrt", "all_eq_const", "X'_comparison",
                                  col="relation", value="equivalent"))
    for k in ("C1", "C2", "C3", "C4"):
        rep.assertions.append(_assert(f"{k}_within_grid", "all_le_const", "X'_comparison",
                                      col=k, value=2 ** p["grid_exp"]))
    rep.constants["balls"] = len(fam)
    rep.curves.append(("X' ball profile", prof))
    rep.curves.append(("sqrt t", [(a, math.sqrt(a)) for a in prof.ts]))


def _transport(p, rng, rep, budget):
    pair = gen_ib_pair(p["d"], p["n_list"], budget=budget)
    X, Xp, f = pair.x.space, pair.x_prime.space, pair.map
    fam = dict(pair.x.families["A"])
    cx = vid(*p["ball_center"])
    for r in p["ball_radii"]:
        fam[f"B({p['ball_center']},{r})"] = ball(X, cx, r)
    tr = verify_boundary_transport(f, fam, p["h"], p["h_prime"])
    rows = Table(["set", "mu_boundary_src", "mu_boundary_img", "ratio"])
    for r in tr.rows:
        rows.add(*r)
    back = Table(["set", "mu_boundary_src", "mu_boundary_img", "ratio"])
    for r in tr.reverse_rows:
        back.add(*r)
    rep.tables["transport"] = rows
    rep.tables["reverse"] = back
    kt = Table(["direction", "K", "finite"])
    kt.add("forward", tr.K, tr.K is not None)
    kt.add("reverse", tr.K_reverse, tr.K_reverse is not None)
    rep.tables["K"] = kt
    C = verify_measure_comparison(f, fam, grid=parse_grid(p["grid"]).values)
    mt = Table(["C", "found"])
    mt.add(C if isinstance(C, Fraction) else None, isinstance(C, Fraction))
    rep.tables["measure"] = mt
    # sampled quasi-isometry constants near the boxes
    lo, hi = p["window"]
    pairs = []
    for _ in range(p["qi_pairs"]):
        x = (lo[0] + rng.below(hi[0] - lo[0] + 1), lo[1] + rng.below(hi[1] - lo[1] + 1))
        y = (x[0] + rng.below(2 * p["qi_offset"] + 1) - p["qi_offset"],
             x[1] + rng.below(2 * p["qi_offset"] + 1) - p["qi_offset"])
        pairs.append((vid(*x), vid(*y)))
    net = [vid(lo[0] + rng.below(hi[0] - lo[0] + 1),
               4 * lo[1] + rng.below(4 * (hi[1] - lo[1]) + 1)) for _ in range(p["net_samples"])]
    meas = [a for a, _ in pairs[: p["net_samples"]]]
    qi = estimate_qi_constants(f, pairs, net_samples=net, measure_samples=meas)
    qt = Table(["C1", "C2", "C3", "pairs", "ok"])
    if qi:
        qt.add(qi.C1, qi.C2, qi.C3, qi.pairs, True)
    else:
        qt.add(None, None, None, len(pairs), False)
        rep.constants["qi_violation"] = f"{qi.reason} at {qi.sample}"
    rep.tables["qi"] = qt
    cap = 2 ** p["cap_exp"]
    rep.assertions += [
        _assert("K_finite", "all_true", "K", col="finite", where={"direction": "forward"}),
        _assert("K_bounded", "all_le_const", "transport", col="ratio", value=cap),
        _assert("measure_C_found", "all_true", "measure", col="found"),
        _assert("measure_C_bounded", "all_le_const", "measure", col="C", value=cap),
        _assert("qi_C2_le_4", "all_le_const", "qi", col="C2", value=4),
    ]
    rep.constants.update(margins=tr.margins, map=f.name, map_C1=f.C1, map_C2=f.C2)
    rep.curves.append(("source boundary", sorted((i + 1, r[1]) for i, r in enumerate(rows.rows))))
    rep.curves.append(("image boundary", sorted((i + 1, r[2]) for i, r in enumerate(rows.rows))))


# ---------------------------------------------------------------------------
# connected profile and the cube chain


def _l1_ball_volume(r, d):
    return sum(2 ** k * comb(d, k) * comb(r, k) for k in range(d + 1))


def _iroot_ceil(x, k):
    r = round(x ** (1 / k))
    while r ** k < x:
        r += 1
    while r > 1 and (r - 1) ** k >= x:
        r -= 1
    return r


def _cube_chain(p, rng, rep, budget):
    t = Table(["mode", "n", "N", "disconnected_boundary", "generator_count", "ball_boundary",
               "square_boundary", "candidate_min", "ratio", "strictly_below"])
    runs = [("exact", dict(d=2, n_max=p["exact_n_max"], mode="exact"))]
    runs.append(("substituted", dict(d=p["d"], n_max=p["substituted_n_max"], mode="substituted",
                                     side=p["side"], face=p["face"])))
    for mode, kw in runs:
        g = gen_cube_chain(budget=budget, **kw)
        sp = g.space
        d = kw["d"]
        far = 4 * (max(g.counts[f"side_{n}"] for n in range(1, kw["n_max"] + 1)) + 10)
        for n in range(1, kw["n_max"] + 1):
            N = g.counts[f"N_{n}"]
            Cn = g.named[f"C_{n}"]
            b = h_boundary(sp, Cn, 1, budget=budget).measure
            r = 0
            while _l1_ball_volume(r, d) < N:
                r += 1
            center = vid(0, far + r, *(0,) * (d - 2))
            bb = h_boundary(sp, ball(sp, center, r, budget=budget), 1, budget=budget).measure
            s = _iroot_ceil(N, d)
            cube = region(sp, _box(center, s, d))
            sb = h_boundary(sp, cube, 1, budget=budget).measure
            m = min(bb, sb)
            t.add(mode, n, N, b, g.counts[f"|dC_{n}|"], bb, sb, m, Fraction(m, b), b < m)
    rep.tables["levels"] = t
    rep.assertions += [
        _assert("disconnected_strictly_below", "all_true", "levels", col="strictly_below"),
        _assert("boundary_matches_count", "all_eq", "levels", lhs="disconnected_boundary",
                rhs="generator_count"),
        _assert("ratio_increasing_exact", "strictly_increasing", "levels", col="ratio",
                where={"mode": "exact"}),
        _assert("ratio_increasing_substituted", "strictly_increasing", "levels", col="ratio",
                where={"mode": "substituted"}),
    ]
    for mode in ("exact", "substituted"):
        rep.curves.append((f"{mode}: candidate / disconnected",
                           [(r[2], float(value(r[8]))) for r in t.rows if r[0] == mode]))


def _box(corner, s, d):
    from itertools import product
    base = corner[:d]
    for off in product(range(s), repeat=d):
        yield vid(*(c + o for c, o in zip(base, off)))


def _connected_equality(p, rng, rep, budget):
    t = Table(["space", "gap", "t", "exact", "connected", "equal"])
    flags = Table(["space", "gap", "any_equal", "sublinear"])
    for name in p["spaces"]:
        sp = _small_space(name)
        ex = exact_profile(sp, p["h"])
        for gap in p["gaps"]:
            co = exact_profile(sp, p["h"], connected_only=True, gap=gap)
            cv = dict(co.points)
            eq = False
            for tt, v in ex.points:
                c = cv.get(tt)
                t.add(name, gap, tt, v, c, c == v)
                eq = eq or c == v
            (t0, v0), (t1, v1) = ex.points[0], ex.points[-1]
            flags.add(name, gap, eq, v1 * t0 < v0 * t1)
    rep.tables["profiles"] = t
    rep.tables["summary"] = flags
    rep.assertions += [
        _assert("connected_ge_exact", "all_ge", "profiles", lhs="connected", rhs="exact"),
        _assert("some_t_equal", "all_true", "summary", col="any_equal"),
        _assert("sublinear_test_spaces", "all_true", "summary", col="sublinear"),
    ]
    rep.curves.append(("exact", ex))
    rep.curves.append(("connected", co))


SMALL = {
    "box3x6": lambda: box((3, 6)),
    "box2x9": lambda: box((2, 9)),
    "box3x3x2": lambda: box((3, 3, 2)),
}


def _small_space(name):
    """``box3x6``-style names, ``cycle18``, ``path12``."""
    if name in SMALL:
        return SMALL[name]()
    for prefix, fn in (("cycle", cycle), ("path", path)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return fn(int(name[len(prefix):]))
    raise InvalidInput(f"unknown small space {name!r}")


def _h_independence(p, rng, rep, budget):
    t = Table(["space", "vertices", "h1", "h2", *WITNESS_COLUMNS])
    grid = grid_upto(p["grid_exp"])
    for name in p["spaces"]:
        sp = _small_space(name)
        S = sp.scale
        h1, h2 = p["h_units"]
        a = exact_profile(sp, h1 * S)
        b = exact_profile(sp, h2 * S)
        w = compare(a, b, grid, mode="equivalent")
        t.add(name, len(sp.vertices), h1 * S, h2 * S, *_witness_row(w))
        rep.curves.append((f"{name} h={h1}", a))
        rep.curves.append((f"{name} h={h2}", b))
    rep.tables["equivalence"] = t
    rep.assertions.append(_assert("profiles_equivalent", "all_eq_const", "equivalence",
                                  col="relation", value="equivalent"))
    for k in ("C1", "C2", "C3", "C4"):
        rep.assertions.append(_assert(f"{k}_within_grid", "all_le_const", "equivalence",
                                      col=k, value=2 ** p["grid_exp"]))


# ---------------------------------------------------------------------------
# annuli and spheres of balls


def _annulus(p, rng, rep, budget):
    t = Table(["space", "center", "r", "annulus_r", "annulus", "ball", "ratio",
               "sphere_r", "sphere", "sphere_ratio"])
    cases = []
    for d, r in p["lattice_cases"]:
        cases.append((f"Z^{d}", lattice(d), vid(*(0,) * d), r, None))
    if p["vonkoch_k"]:
        k = p["vonkoch_k"]
        sp = gen_vonkoch(k).space
        cases.append((f"vonkoch(a_{k})", sp, vid(*vk.root(k)), vk.sphere_radius(k) * p["vonkoch_mult"],
                      p["vonkoch_stride"]))
    for name, sp, x, r, stride in cases:
        a = annulus_inf_check(sp, x, r)
        s = sphere_inf_check(sp, x, r, h=sp.scale, stride=stride)
        t.add(name, list(x[:-1]), r, a.r_best, a.annulus_measure, a.ball_measure, a.ratio,
              s.r_best, s.annulus_measure, s.ratio)
    rep.tables["annuli"] = t
    rep.assertions += [
        _assert("annulus_inf_bounded", "all_le_const", "annuli", col="ratio", value=p["C"]),
        _assert("sphere_inf_bounded", "all_le_const", "annuli", col="sphere_ratio", value=p["C"]),
    ]
    rep.curves.append(("annulus ratio", [(i + 1, float(value(r[6]))) for i, r in enumerate(t.rows)]))
    rep.curves.append(("sphere ratio", [(i + 1, float(value(r[9]))) for i, r in enumerate(t.rows)]))


# ---------------------------------------------------------------------------
# registry and runner


EXPERIMENTS = {
    "tree_linear_growth": Experiment(
        "Chained glued stretched binary trees have linear volume growth, every ball "
        "satisfying |B(x,r)| <= 8r, while balls around the tree roots have unbounded boundary.",
        {"n_max": 4, "ladder": 50, "C": 8, "centers": "all", "seed": 0},
        _tree_linear_growth),
    "vonkoch_spheres": Experiment(
        "In the plane with short edges along self-similar trees, the sphere around the k-th "
        "root has measure at least 3^(k-1) and at least r_k^(log 3/log 2).",
        {"k_list": [3, 4, 5, 6], "seed": 0},
        _vonkoch_spheres),
    "vonkoch_geodesics": Experiment(
        "Tree paths are geodesics of the weighted plane, and tree depth differences are at "
        "most 50 times the lattice distance.",
        {"k_list": [1, 2, 3, 4, 5], "pairs": 10_000, "seed": 0},
        _vonkoch_geodesics),
    "perforated_nonstrong": Experiment(
        "Boxes of the perforated lattice have boundary growing like a square root of their "
        "volume ratio, so u_n increases and the strong isoperimetric inequality fails.",
        {"d": 2, "n_list": [4, 9, 16, 25], "strong_n_list": [k * k for k in range(2, 21)],
         "grid": "2^0..2^10", "calibrate": 0.5, "seed": 0},
        _perforated),
    "constricted_shape": Experiment(
        "Constricted balls are metrically connected, their equator stays within "
        "2 log2 n + 4 of the boundary, and both poles are at distance at least n/2.",
        {"d": 2, "n_list": [8, 16, 32], "gap": 10, "seed": 0},
        _constricted),
    "ib_pair_contrast": Experiment(
        "A space where some boxes keep a bounded boundary is large-scale equivalent to one "
        "whose ball profile is equivalent to the square root.",
        {"d": 2, "n_list": [4, 5, 6, 7, 8, 9], "r_max": 48, "grid_exp": 6,
         "extra_centers": [[-200, 0], [0, 400], [97, 28]], "seed": 0},
        _ib_pair_contrast),
    "cube_chain_connected": Experiment(
        "Unions of far-apart cubes joined by thin faces beat every connected candidate of "
        "the same volume, by a ratio that grows with the level.",
        {"d": 2, "exact_n_max": 3, "substituted_n_max": 6, "side": "2^n", "face": "n",
         "seed": 0},
        _cube_chain),
    "oracle_h_independence": Experiment(
        "Exact profiles at two boundary widths are equivalent up to constants.",
        {"spaces": ["box3x6", "cycle18"], "h_units": [2, 4], "grid_exp": 4, "seed": 0},
        _h_independence),
    "annulus_bound": Experiment(
        "Some unit annulus between radii r and 2r has measure at most a constant times "
        "|B(x,r)|/r, and likewise some sphere boundary.",
        {"lattice_cases": [[1, 10], [2, 8]], "vonkoch_k": 6, "vonkoch_mult": 1, "C": 8,
         "vonkoch_stride": 10,
         "seed": 0},
        _annulus),
    "transport_th1": Experiment(
        "A large-scale equivalence moves boundaries and measures of sets by bounded factors.",
        {"d": 2, "n_list": [4, 5, 6, 7, 8, 9], "ball_center": [-100, 7],
         "ball_radii": [4, 8, 16], "h": 1, "h_prime": 1, "grid": "2^0..2^10",
         "cap_exp": 8, "window": [[-40, -12], [560, 12]], "qi_pairs": 120, "qi_offset": 12,
         "net_samples": 40, "seed": 0},
        _transport),
    "connected_equality_points": Experiment(
        "On finite spaces with sublinear profile the profile over metrically connected sets "
        "agrees with the full profile at some t.",
        {"spaces": ["path14", "cycle14"], "gaps": [2, 10], "h": 1, "seed": 0},
        _connected_equality),
}


def run_experiment(spec: ExperimentSpec) -> Report:
    """Run a named experiment; budget exhaustion yields an ``error`` report."""
    if spec.name not in EXPERIMENTS:
        raise InvalidInput(f"unknown experiment {spec.name!r}; known: {sorted(EXPERIMENTS)}")
    exp = EXPERIMENTS[spec.name]
    unknown = set(spec.params) - set(exp.defaults)
    if unknown:
        raise InvalidInput(f"unknown parameters for {spec.name}: {sorted(unknown)}")
    params = {**exp.defaults, **spec.params}
    rng = Lcg(params.get("seed", 0))
    rep = Report(spec.name, exp.claim, params=params)
    start = time.perf_counter()
    try:
        exp.run(params, rng, rep, spec.budget)
    except BudgetExceeded as exc:
        rep.status = "error"
        rep.reason = f"budget exceeded: {exc}"
    rep.runtime = time.perf_counter() - start
    rep.sampling = rng.record()
    check(rep)
    if spec.wall_clock is not None and rep.runtime > spec.wall_clock and rep.status != "error":
        rep.status = "error"
        rep.reason = f"wall clock {rep.runtime:.1f}s exceeds {spec.wall_clock}s"
    return rep

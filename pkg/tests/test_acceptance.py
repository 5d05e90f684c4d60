"""Acceptance criteria, one test each.

Every test records a one-line verdict that is printed in the terminal
summary, and checks its own wall-clock limit.
"""

import math
import time
from fractions import Fraction

import networkx as nx
import pytest

import oracles
from conftest import ACCEPTANCE_LINES
from isolab.generators import cycle, gen_glued_trees, gen_perforated, lattice
from isolab.harness.experiments import ExperimentSpec, run_experiment
from isolab.harness.report import value
from isolab.harness.sampling import Lcg
from isolab.profiles import exact_profile
from isolab.space import (check_property_M, check_sphere_inclusions, finite_space, rescaled,
                          search, vid)

pytestmark = pytest.mark.acceptance


class Verdict:
    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.checks = []
        self.start = time.perf_counter()

    def check(self, name, ok):
        self.checks.append((name, bool(ok)))

    def finish(self, detail=""):
        elapsed = time.perf_counter() - self.start
        self.check(f"runtime {elapsed:.1f}s < {self.limit}s", elapsed < self.limit)
        failed = [n for n, ok in self.checks if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {self.number}: {status} {self.title} ({elapsed:.1f}s)"
        if detail:
            line += f" {detail}"
        if failed:
            line += " failed: " + "; ".join(failed)
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not failed, line


def table(rep, name):
    t = rep.tables[name]
    return [dict(zip(t.columns, row)) for row in t.rows]


def experiment(name, **params):
    rep = run_experiment(ExperimentSpec(name, params))
    assert rep.status != "error", rep.reason
    return rep


def random_graph(rng, n):
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.below(100) < 30:
                edges.append((i, j, 1 + rng.below(2)))
    return finite_space([(i,) for i in range(n)], edges)


def test_criterion_01_oracle_correctness():
    v = Verdict(1, "exact profiles agree with brute-force enumeration", 10)
    engine_time = 0.0
    t0 = time.perf_counter()
    prof = dict(exact_profile(cycle(8), 1).points)
    engine_time += time.perf_counter() - t0
    v.check("8-cycle I(1)=3, I(2..4)=4", prof == {1: 3, 2: 4, 3: 4, 4: 4})
    v.check("8-cycle oracle", prof == oracles.profile(oracles.to_nx(cycle(8)), 1))
    rng = Lcg(2024)
    agree = 0
    oracle_time = 0.0
    for _ in range(20):
        sp = random_graph(rng, 6 + rng.below(9))
        t0 = time.perf_counter()
        got = dict(exact_profile(sp, 1).points)
        engine_time += time.perf_counter() - t0
        t0 = time.perf_counter()
        ref = oracles.profile(oracles.to_nx(sp), 1)
        oracle_time += time.perf_counter() - t0
        agree += got == ref
    v.check(f"{agree}/20 random graphs agree", agree == 20)
    # the limit is on the engine; the brute-force oracle is reported apart
    v.start = time.perf_counter() - engine_time
    v.finish(f"engine {engine_time:.1f}s, oracle {oracle_time:.1f}s")


def test_criterion_02_glued_trees_linear_growth():
    v = Verdict(2, "glued trees: |B(x,r)| <= 8r for all x on a 50-point ladder", 60)
    rep = experiment("tree_linear_growth")
    rows = table(rep, "balls")
    v.check("experiment passes", rep.passed)
    G = oracles.to_nx(gen_glued_trees(4).space)
    v.check("one chained component", nx.is_connected(G))
    ladder = [r["r"] for r in rows]
    worst = {r: 0 for r in ladder}
    diameter = 0
    for x in G.nodes:
        dist = sorted(nx.single_source_dijkstra_path_length(G, x, weight="weight").values())
        diameter = max(diameter, dist[-1])
        for r in ladder:
            worst[r] = max(worst[r], sum(1 for d in dist if d <= r))
    v.check("all vertices used as centers", rep.constants["centers"] == G.number_of_nodes())
    v.check("50 radii up to the diameter", len(ladder) == 50 and ladder[-1] == diameter)
    v.check("volumes match networkx", [r["max_volume"] for r in rows] == [worst[r] for r in ladder])
    v.check("|B| <= 8r", all(worst[r] <= 8 * r for r in ladder))
    v.finish(f"max |B|/r = {max(Fraction(worst[r], r) for r in ladder)}")


def test_criterion_03_vonkoch_spheres():
    v = Verdict(3, "weighted plane: sphere measures >= 3^(k-1) and >= r_k^(log3/log2)", 120)
    rep = experiment("vonkoch_spheres")
    S = rep.constants["scale"]
    rows = table(rep, "spheres")
    v.check("k = 3..6", [r["k"] for r in rows] == [3, 4, 5, 6])
    for r in rows:
        mu, rk, k = r["shell_measure"], r["r_k"], r["k"]
        v.check(f"k={k} mu >= 3^(k-1)", mu >= 3 ** (k - 1))
        # log3/log2 < 317/200, so mu^200 S^317 >= r^317 certifies mu >= (r/S)^alpha when r > S
        v.check(f"k={k} mu >= r^alpha", rk <= S or mu ** 200 * S ** 317 >= rk ** 317)
    v.check("317/200 bounds log3/log2", Fraction(317, 200) > Fraction(math.log(3) / math.log(2)))
    v.check("experiment passes", rep.passed)
    v.finish("shells " + "/".join(str(r["shell_measure"]) for r in rows))


def test_criterion_04_vonkoch_geodesics():
    v = Verdict(4, "weighted plane: geodesics follow the tree; the /50 lemma holds", 120)
    rep = experiment("vonkoch_geodesics")
    geo = table(rep, "geodesics")
    v.check("every x in A_k, k <= 5", [r["size"] for r in geo] == [9, 41, 153, 521, 1689])
    v.check("distances equal tree depths", all(r["mismatches"] == 0 for r in geo))
    lem = table(rep, "lemma")
    v.check("10^4 pairs per k", all(r["pairs"] == 10 ** 4 for r in lem))
    v.check("no lemma violations", all(r["violations"] == 0 for r in lem))
    v.check("experiment passes", rep.passed)
    v.finish()


def test_criterion_05_perforated():
    v = Verdict(5, "perforated lattice: u_n increases, strong profile refuted", 60)
    rep = experiment("perforated_nonstrong")
    rows = table(rep, "boxes")
    v.check("n = 4, 9, 16, 25", [r["n"] for r in rows] == [4, 9, 16, 25])
    g = gen_perforated(2, [4, 9, 16, 25])
    us = []
    for r in rows:
        A = g.families["A"][f"A_{r['n']}"].vertices
        cand = set(A)
        for x in A:
            for w, length in g.space.neighbors(x):
                assert length == 1
                cand.add(w)
        ref = 0
        for x in cand:
            nbrs = [w for w, _ in g.space.neighbors(x)]
            near_a = x in A or any(w in A for w in nbrs)
            near_c = x not in A or any(w not in A for w in nbrs)
            ref += near_a and near_c
        v.check(f"n={r['n']} boundary = generator count = definition",
                r["boundary"] == r["generator_count"] == ref)
        us.append(Fraction(len(A), ref ** 2))
    v.check("u_n strictly increasing", all(a < b for a, b in zip(us, us[1:])))
    strong = table(rep, "strong_check")[0]
    v.check("strong check refuted", strong["relation"] == "refuted")
    v.check("experiment passes", rep.passed)
    v.finish("u = " + ", ".join(str(u) for u in us))


def test_criterion_06_constricted():
    v = Verdict(6, "constricted balls: equator near the boundary, poles far", 60)
    rep = experiment("constricted_shape")
    rows = table(rep, "shape")
    v.check("n = 8, 16, 32", [r["n"] for r in rows] == [8, 16, 32])
    for r in rows:
        n = r["n"]
        v.check(f"n={n} equator <= 2 log2 n + 4", r["equator_max"] <= 2 * math.log2(n) + 4)
        v.check(f"n={n} poles >= n/2", r["pole_min"] >= Fraction(n, 2))
        v.check(f"n={n} connected with gap 10", r["connected"] is True)
    v.check("experiment passes", rep.passed)
    v.finish()


def test_criterion_07_ib_contrast():
    v = Verdict(7, "(IB) pair: constant box boundary in X, sqrt profile in X'", 120)
    rep = experiment("ib_pair_contrast")
    boxes = table(rep, "X_boxes")
    v.check("n = 4..9", [r["n"] for r in boxes] == list(range(4, 10)))
    v.check("X boundary constant", len({r["boundary"] for r in boxes}) == 1)
    w = table(rep, "X'_comparison")[0]
    v.check("X' profile equivalent to sqrt", w["relation"] == "equivalent")
    v.check("constants <= 2^6", all(value(w[c]) <= 64 for c in ("C1", "C2", "C3", "C4")))
    v.check("experiment passes", rep.passed)
    v.finish(f"constants {w['C1']},{w['C2']},{w['C3']},{w['C4']}")


def test_criterion_08_transport():
    v = Verdict(8, "boundary transport along the dilation", 120)
    rep = experiment("transport_th1")
    rows = table(rep, "transport")
    names = [r["set"] for r in rows]
    v.check("family A_n plus balls at 3 radii",
            sum(n.startswith("A_") for n in names) == 6 and sum(n.startswith("B(") for n in names) == 3)
    K = {r["direction"]: r for r in table(rep, "K")}["forward"]
    v.check("K finite", K["finite"] is True)
    v.check("K <= 2^8", value(K["K"]) <= 256)
    C = table(rep, "measure")[0]
    v.check("measure C found and <= 2^8", C["found"] is True and value(C["C"]) <= 256)
    v.check("experiment passes", rep.passed)
    v.finish(f"K = {K['K']}, C = {C['C']}")


def test_criterion_09_h_independence():
    v = Verdict(9, "profiles at h=2S and h=4S are equivalent", 60)
    rep = experiment("oracle_h_independence")
    rows = table(rep, "equivalence")
    v.check("two spaces of <= 18 vertices", len(rows) == 2 and all(r["vertices"] <= 18 for r in rows))
    for r in rows:
        v.check(f"{r['space']} equivalent", r["relation"] == "equivalent")
        v.check(f"{r['space']} constants <= 2^4",
                all(value(r[c]) <= 16 for c in ("C1", "C2", "C3", "C4")))
    v.check("experiment passes", rep.passed)
    v.finish()


def test_criterion_10_connected_profile():
    v = Verdict(10, "cube chain beats connected candidates; connected profile meets exact", 180)
    rep = experiment("cube_chain_connected")
    rows = table(rep, "levels")
    ratios = {}
    for mode in ("exact", "substituted"):
        sel = [r for r in rows if r["mode"] == mode]
        ratios[mode] = [value(r["ratio"]) for r in sel]
        v.check(f"{mode}: strictly below", all(r["strictly_below"] is True for r in sel))
        v.check(f"{mode}: ratios {[str(x) for x in ratios[mode]]} increasing",
                all(a < b for a, b in zip(ratios[mode], ratios[mode][1:])))
    v.check("exact mode n <= 3", [r["n"] for r in rows if r["mode"] == "exact"] == [1, 2, 3])
    rep2 = experiment("connected_equality_points")
    summary = table(rep2, "summary")
    v.check("sublinear test spaces", all(r["sublinear"] is True for r in summary))
    v.check("some t with equal profiles", all(r["any_equal"] is True for r in summary))
    v.finish("exact ratios " + ", ".join(str(x) for x in ratios["exact"]))


def shell_samples(space, rng, centers, radii, count):
    out = []
    for _ in range(count):
        out.append((rng.choice(centers), rng.choice(radii)))
    return out


def test_criterion_11_sphere_inclusions_and_M():
    v = Verdict(11, "sphere inclusions and property (M) on Z^2 and glued trees", 30)
    rng = Lcg(11)
    Z = rescaled(lattice(2), 2)
    z_centers = [vid(x, y) for x in range(-20, 21) for y in range(-20, 21)]
    trees = rescaled(gen_glued_trees(3).space, 2)
    t_centers = sorted(trees.vertices)
    for name, sp, centers, rmax in (("Z^2", Z, z_centers, 40), ("glued trees", trees, t_centers, 60)):
        S = sp.scale
        samples = shell_samples(sp, rng, centers, list(range(0, rmax + 1)), 200)
        found = check_sphere_inclusions(sp, samples, S)
        v.check(f"{name}: inclusions at 200 samples with C=S"
                + ("" if found is True else f" ({found.reason} at {found.sample})"), found is True)
        m_samples = []
        for x, r in samples:
            shell = sorted(w for w, d in search(sp, [x], cap=r + S).items() if d > r)
            if shell:
                m_samples.append((x, r, rng.choice(shell)))
        c = check_property_M(sp, m_samples)
        v.check(f"{name}: property (M) constant {c} <= 2S", isinstance(c, int) and c <= 2 * S)
    v.finish()

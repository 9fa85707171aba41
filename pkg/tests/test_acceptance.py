"""Acceptance criteria 1-10, one check each with its stated tolerance and time budget.

Run under pytest (one test per criterion, summary printed at the end) or
directly with ``python3 tests/test_acceptance.py``.
"""

import functools
import itertools
import os
import random
import sys
import tempfile
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conftest import ACCEPTANCE_LINES, as_array, planted_homophily, random_net, random_values, to_communities, to_graph  # noqa: E402
from oracles import STATUS_FUNCS, brute_triads, exhaustive_expected_magnitude, friendship_statuses  # noqa: E402

from sentiparadox.analytics import binned_trend, group_degree_means  # noqa: E402
from sentiparadox.cli import MANIFEST, main  # noqa: E402
from sentiparadox.graph import ConnectionType, SocialGraph, TriadMode, triad_array  # noqa: E402
from sentiparadox.nullmodel import NullConfig, expected_magnitude, null_counts, surprise  # noqa: E402
from sentiparadox.paradox import AggKind, Kind, ParadoxVerdict, friendship_paradox, prepare  # noqa: E402
from sentiparadox.predict import GROUPS, ablate_feature_groups, cross_validate, extract_features  # noqa: E402
from sentiparadox.synth import GenSpec, Model, SwbAssignment, SwbMode, assign_swb, generate_graph, theorem1_check  # noqa: E402
from sentiparadox.synth import gnm_edges  # noqa: E402

F = ConnectionType.FRIENDS
CHECKS = {}


def criterion(num, title, budget_s):
    def deco(fn):
        CHECKS[num] = (title, budget_s, fn)
        return fn

    return deco


@functools.lru_cache(maxsize=None)
def config_graphs():
    return tuple(generate_graph(GenSpec(Model.CONFIG_POWER_LAW, 10_000, gamma=2.5, seed=s)) for s in range(20))


@functools.lru_cache(maxsize=None)
def big_er():
    e = gnm_edges(100_000, 1_000_000, np.random.default_rng(np.random.SeedSequence(2024)))
    return SocialGraph.from_edges(100_000, e)


# ---------------------------------------------------------------- 1


@criterion(1, "surprise formula on the two reference rows", 1.0)
def c1():
    a = surprise(79_453, 0.5511, 0.5010)
    b = surprise(81_941, 0.5411, 0.4950)
    ok = abs(a - 28.2) <= 0.1 and abs(b - 26.4) <= 0.1
    return ok, f"friends={a:.3f} (28.2+-0.1) followees={b:.3f} (26.4+-0.1)"


# ---------------------------------------------------------------- 2


@criterion(2, "four-node star end to end", 1.0)
def c2():
    g = SocialGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    x = np.array([0.1, -0.2, -0.3, -0.4])
    prep = prepare(Kind.GENERAL, g, x, F, AggKind.MEAN)
    ctx = prep.contexts
    aggs = {int(ctx.owner[i]): float(np.mean(x[ctx.members[ctx.indptr[i] : ctx.indptr[i + 1]]])) for i in range(ctx.n_units)}
    st = prep.stats()

    def mag(v):
        return prepare(Kind.GENERAL, g, np.asarray(v, dtype=float), F, AggKind.MEAN).stats().magnitude

    exact = exhaustive_expected_magnitude(mag, x.tolist())
    mc = expected_magnitude(prep, NullConfig(10_000, 0))
    ok = (
        abs(aggs[0] + 0.3) < 1e-12
        and all(abs(aggs[i] - 0.1) < 1e-12 for i in (1, 2, 3))
        and st.magnitude == 0.75
        and st.verdict is ParadoxVerdict.STRONGLY_HOLDS
        and abs(mc - exact) <= 0.02
    )
    return ok, f"u1 agg={aggs[0]:.3f} leaves={[round(aggs[i], 3) for i in (1, 2, 3)]} M={st.magnitude} {st.verdict.value} exact={exact:.4f} mc={mc:.4f}"


# ---------------------------------------------------------------- 3-5


@functools.lru_cache(maxsize=None)
def iid_report():
    return theorem1_check(list(config_graphs()), SwbAssignment(SwbMode.IID_NORMAL, 0.0, 0.08, seed=1), runs=20)


@criterion(3, "i.i.d. SWB on configuration-model graphs", 60.0)
def c3():
    rep = iid_report()
    ok = abs(rep.magnitude - 0.5) <= 0.02 and abs(rep.mean_diff) < 0.01 and abs(rep.median_diff) < 0.01
    return ok, f"M={rep.magnitude:.4f} (0.5+-0.02) mean_diff={rep.mean_diff:+.2e} median_diff={rep.median_diff:+.2e} (<0.01)"


@criterion(4, "degree-coupled SWB (rho=0.5) mechanism", 60.0)
def c4():
    a = SwbAssignment(SwbMode.DEGREE_COUPLED, 0.0, 0.08, rho=0.5, seed=1)
    rep = theorem1_check(list(config_graphs()), a, runs=20)
    deg_ok = slope_ok = 0
    slopes = []
    for r, g in enumerate(config_graphs()):
        x = assign_swb(g, a.with_seed(int(np.random.SeedSequence(a.seed, spawn_key=(r,)).generate_state(1)[0])))
        t = group_degree_means(x, g)
        deg_ok += t.mean("Positive", F) > t.mean("Negative", F)
        s = binned_trend(x, g.degree(F)).slope
        slopes.append(s)
        slope_ok += s > 0
    ok = rep.magnitude > 0.55 and deg_ok == 20 and slope_ok == 20
    return ok, f"M={rep.magnitude:.4f} (>0.55) pos>neg degree in {deg_ok}/20 seeds, slope>0 in {slope_ok}/20 (mean {np.mean(slopes):.2f})"


@criterion(5, "friendship vs sentiment paradox contrast", 30.0)
def c5():
    fr = float(np.mean([friendship_paradox(g).magnitude for g in config_graphs()]))
    sent = iid_report().magnitude
    ok = fr > 0.55 and abs(sent - 0.5) <= 0.02
    return ok, f"friendship M={fr:.4f} (>0.55) sentiment M={sent:.4f} (~0.5)"


# ---------------------------------------------------------------- 6-7


def impl_statuses(kind, g, values, t, agg, comms):
    present, st = prepare(kind, g, values, t, agg, comms).group_status()
    return {u: int(st[u]) for u in np.flatnonzero(present).tolist()}


@criterion(6, "all seven analyses vs brute force on 50 random graphs", 30.0)
def c6():
    checked = mismatched = 0
    for seed in range(50):
        rng = random.Random(1000 + seed)
        net = random_net(rng, rng.randint(2, 50), p_friend=rng.uniform(0.05, 0.3), p_follow=rng.uniform(0.05, 0.2), n_comm=5, p_member=0.35)
        vals = random_values(rng, net.n)
        act = [None if rng.random() < 0.1 else float(rng.choice([1, 2, 2.5, 4, 10])) for _ in range(net.n)]
        g, comms = to_graph(net), to_communities(net, 5)
        for t, agg in itertools.product(ConnectionType, AggKind):
            for kind in ("general", "triad", "common-neighbor", "community", "common-interest"):
                checked += 1
                mismatched += impl_statuses(Kind(kind), g, as_array(vals), t, agg, comms) != STATUS_FUNCS[kind](net, vals, t.value, agg.value)
            checked += 2
            mismatched += impl_statuses(Kind.ACTIVITY, g, as_array(act), t, agg, comms) != STATUS_FUNCS["activity"](net, act, t.value, agg.value)
            mismatched += impl_statuses(Kind.FRIENDSHIP, g, g.degree(t).astype(float), t, agg, comms) != friendship_statuses(net, t.value, agg.value)
    return mismatched == 0, f"{checked - mismatched}/{checked} (graph, analysis, type, agg) status maps identical"


@criterion(7, "triad enumeration vs cubic brute force", 5.0)
def c7():
    bad = 0
    for seed in range(10):
        net = random_net(random.Random(seed), 30, p_friend=0.25, p_follow=0.15)
        g = to_graph(net)
        for mode in TriadMode:
            bad += [tuple(r) for r in triad_array(g, mode).tolist()] != brute_triads(net, mode.value)
    k4 = len(triad_array(SocialGraph.from_edges(4, list(itertools.combinations(range(4), 2))), TriadMode.UNDIRECTED))
    return bad == 0 and k4 == 4, f"{20 - bad}/20 graph-mode pairs match, K4 triads={k4}"


# ---------------------------------------------------------------- 8


@criterion(8, "prediction on planted-homophily data", 120.0)
def c8():
    g, x, comms = planted_homophily(n=3000, seed=0)
    m = extract_features(g, x, comms)
    res = ablate_feature_groups(m, GROUPS, folds=10, seed=0)
    shuffled = cross_validate(m.with_labels(np.random.default_rng(1).permutation(m.labels)), folds=10, seed=0).auc
    best = max(res[k].auc for k in GROUPS)
    all_auc = res["all"].auc
    ok = all_auc > 0.55 and abs(shuffled - 0.5) <= 0.05 and all_auc >= best - 0.02
    return ok, f"all-39 AUC={all_auc:.3f} (>0.55) shuffled={shuffled:.3f} (0.5+-0.05) best single={best:.3f} all_sentiment={res['all_sentiment'].auc:.3f}"


# ---------------------------------------------------------------- 9


@criterion(9, "performance envelope at 1e5 nodes / 1e6 edges", 240.0)
def c9():
    g = big_er()
    triad_array(SocialGraph.from_edges(10, list(itertools.combinations(range(5), 2))), TriadMode.UNDIRECTED)  # compile
    t0 = time.perf_counter()
    tri = triad_array(g, TriadMode.UNDIRECTED, 8)
    t_tri = time.perf_counter() - t0
    x = assign_swb(g, SwbAssignment(seed=3))
    prep = prepare(Kind.GENERAL, g, x, F, AggKind.MEAN)
    cfg = NullConfig(1000, 11)
    null_counts(prep, NullConfig(2, 0), 8)  # compile
    t0 = time.perf_counter()
    c8w = null_counts(prep, cfg, 8)
    t_null = time.perf_counter() - t0
    same = all(np.array_equal(triad_array(g, TriadMode.UNDIRECTED, w), tri) for w in (1, 4))
    same &= all(null_counts(prep, cfg, w).tobytes() == c8w.tobytes() for w in (1, 4))
    ok = g.n_friend_edges == 1_000_000 and t_tri < 10 and t_null < 60 and same
    return ok, (
        f"edges={g.n_friend_edges} triads={len(tri)} in {t_tri:.2f}s (<10) null 1000 reps in {t_null:.1f}s (<60) "
        f"identical across 1/4/8 workers={same} cpus={os.cpu_count()}"
    )


# ---------------------------------------------------------------- 10


def _cli_outputs(out):
    return {n: open(os.path.join(out, n), "rb").read() for n in sorted(os.listdir(out)) if n != MANIFEST}


@criterion(10, "CLI byte-identical across consecutive runs", 120.0)
def c10():
    with tempfile.TemporaryDirectory() as tmp:
        data = os.path.join(tmp, "gen0")
        gen = ["synth", "planted", "--n", "500", "--n-communities", "10", "--community-size", "40", "--p-in", "0.2", "--swb", "coupled", "--rho", "0.3", "--homophily", "0.4", "--seed", "7"]
        d = "--data", data
        cmds = [
            ["ingest", *d],
            ["swb", *d],
            ["activity", *d],
            *[["paradox", k, *d, "--null-reps", "50"] for k in ("general", "triad", "common-neighbor", "community", "common-interest")],
            ["sweep", *d, "--null-reps", "20", "--bounds", "1", "80", "--buckets", "4"],
            ["correlate", *d],
            ["trend", *d],
            ["friendship", *d, "--null-reps", "50"],
            ["activity-paradox", *d, "--null-reps", "50"],
            ["theorem1", "--n", "2000", "--runs", "3"],
            ["features", *d],
            ["predict", *d, "--folds", "5"],
        ]
        failures = []
        for i, (cmd, seed) in enumerate([(gen, []), *((c, ["--seed", "3"]) for c in cmds)]):
            outs, codes = [], []
            for rep in range(2):
                out = os.path.join(tmp, "gen%d" % rep if cmd is gen else f"c{i}_{rep}")
                codes.append(main(cmd + seed + ["--out", out]))
                outs.append(_cli_outputs(out))
            if codes != [0, 0] or outs[0] != outs[1] or not outs[0]:
                failures.append(" ".join(cmd[:2]))
        n = len(cmds) + 1
    return not failures, f"{n - len(failures)}/{n} invocations byte-identical over two runs" + (f"; differing: {failures}" if failures else "")


# ---------------------------------------------------------------- driver


@functools.lru_cache(maxsize=None)
def warm_kernels():
    """Load the compiled kernels once so budgets measure computation, not JIT start-up."""
    g = SocialGraph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2)], [(0, 1)])
    for agg in AggKind:
        expected_magnitude(prepare(Kind.GENERAL, g, np.array([0.1, -0.2, -0.3, -0.4]), F, agg), NullConfig(2, 0))
    triad_array(g, TriadMode.DIRECTED)


def run_check(num):
    title, budget, fn = CHECKS[num]
    warm_kernels()
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    ok = ok and dt < budget
    line = f"[criterion {num}] {'PASS' if ok else 'FAIL'} {title}: {detail} ({dt:.1f}s, budget {budget:.0f}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok, line


@pytest.mark.parametrize("num", sorted(CHECKS))
def test_criterion(num):
    ok, line = run_check(num)
    assert ok, line


if __name__ == "__main__":
    results = [run_check(n)[0] for n in sorted(CHECKS)]
    print(f"{sum(results)}/{len(results)} acceptance criteria pass")
    sys.exit(0 if all(results) else 1)

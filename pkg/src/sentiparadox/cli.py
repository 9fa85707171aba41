"""Command-line front end: ingest, analyses, null models, synthesis and prediction.

Every subcommand writes its results under ``--out`` with atomic renames,
plus a ``run_manifest.json`` listing inputs, outputs and their digests.
Only the manifest carries wall-clock data, so all other outputs are
byte-identical for identical inputs, flags and seed.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import io
import json
import logging
import os
import sys
import tempfile
import time

import numpy as np

from . import __version__
from .analytics import Axis, binned_trend, community_sweep, format_p, group_degree_means, pearson
from .community import build_communities
from .graph import ConnectionType, build_graph, triad_array, triad_mode_for
from .ingest import Polarity, filter_min_posts, load_dataset, load_lexicon, resolve_paths
from .nullmodel import NullConfig, run_null_model
from .paradox import SENTIMENT_KINDS, AggKind, Kind, prepare
from .predict import FEATURE_NAMES, GROUPS, ablate_feature_groups, extract_features
from .sentiment import compute_activity, compute_swb
from .synth import (
    GenSpec,
    Model,
    SwbAssignment,
    SwbMode,
    assign_swb,
    generate_graph,
    generate_network,
    random_memberships,
    theorem1_check,
)

logger = logging.getLogger("sentiparadox")

REPORT_COLUMNS = (
    "kind,connection,agg,n_holds,n_not,n_unknown,total,magnitude,verdict,"
    "expected,surprise,empirical_p,replicates,seed"
).split(",")
MANIFEST = "run_manifest.json"
SYNTH_START = _dt.date(2010, 1, 1)


class UsageError(Exception):
    pass


def fmt_real(x) -> str:
    if x is None or (isinstance(x, float) and np.isnan(x)):
        return ""
    return f"{float(x):.6g}"


def fmt_prop(x) -> str:
    if x is None or (isinstance(x, float) and np.isnan(x)):
        return ""
    return f"{float(x):.6f}"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(str(c) for c in r) + "\n")
    return buf.getvalue()


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


class Run:
    """Collects outputs and writes them atomically into ``out_dir``."""

    def __init__(self, argv, args):
        self.argv = list(argv)
        self.args = args
        self.out_dir = args.out
        self.outputs: list[str] = []
        self.inputs: dict[str, str] = {}
        self.seeds: dict[str, int] = {}
        self.t0 = time.perf_counter()
        os.makedirs(self.out_dir, exist_ok=True)

    def path(self, name):
        return os.path.join(self.out_dir, name)

    def write(self, name, text: str):
        path = self.path(name)
        fd, tmp = tempfile.mkstemp(dir=self.out_dir, prefix=f".{name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        if name not in self.outputs:
            self.outputs.append(name)
        return path

    def write_csv(self, name, header, rows):
        return self.write(name, csv_text(header, rows))

    def write_json(self, name, obj):
        return self.write(name, json.dumps(obj, indent=2) + "\n")

    def add_input(self, path):
        self.inputs[os.path.abspath(path)] = sha256_file(path)

    def finish(self):
        manifest = {
            "command": self.argv,
            "version": __version__,
            "seeds": self.seeds,
            "inputs": self.inputs,
            "outputs": {name: sha256_file(self.path(name)) for name in self.outputs},
            "duration_s": round(time.perf_counter() - self.t0, 6),
        }
        self.write(MANIFEST, json.dumps(manifest, indent=2) + "\n")
        self.outputs.remove(MANIFEST)


# ---------------------------------------------------------------- loading


class Loaded:
    """Filtered bundle plus graph, communities, SWB and activity aligned to dense indices."""

    def __init__(self, run: Run, args):
        if not args.data:
            raise UsageError("--data DIR is required")
        if not os.path.isdir(args.data):
            raise FileNotFoundError(f"data directory not found: {args.data}")
        paths = resolve_paths(args.data)
        if "posts" not in paths:
            raise FileNotFoundError(f"{args.data}: posts.tsv missing")
        if args.lexicon:
            paths["moods"] = args.lexicon
        for p in paths.values():
            run.add_input(p)
        self.lexicon = load_lexicon(paths.get("moods"))
        raw = load_dataset(paths, self.lexicon)
        self.raw = raw
        self.bundle = filter_min_posts(raw, args.min_posts)
        self.graph = build_graph(self.bundle)
        self.communities = build_communities(self.bundle, self.graph) if len(self.bundle.memberships) else None
        self._swb = None
        self._activity = {}

    @property
    def swb(self):
        if self._swb is None:
            self._swb = compute_swb(self.bundle.posts, self.lexicon, users=self.bundle.users)
        return self._swb

    def activity(self, window):
        if window not in self._activity:
            self._activity[window] = compute_activity(self.bundle.posts, window, users=self.bundle.users)
        return self._activity[window]


def _connections(args):
    if args.connection == "all":
        return list(ConnectionType)
    return [ConnectionType(args.connection)]


def _aggs(args):
    if args.agg == "all":
        return list(AggKind)
    return [AggKind(args.agg)]


def _null_config(args):
    return NullConfig(args.null_reps, args.seed) if args.null_reps > 0 else None


def report_row(prep, cfg, threads):
    st = prep.stats()
    row = [
        st.kind.value, st.connection.value, st.agg.value, st.n_holds, st.n_not, st.n_unknown, st.total,
        fmt_prop(st.magnitude), st.verdict.value,
    ]
    if cfg is None or st.total == 0:
        return row + ["", "", "", 0 if cfg is None else cfg.replicates, "" if cfg is None else cfg.seed]
    res = run_null_model(prep, cfg, threads)
    s = res.surprise_for(0)
    return row + [fmt_prop(res.expected), fmt_real(s), fmt_prop(res.empirical_p()), cfg.replicates, cfg.seed]


def _paradox_report(run, args, kind, values_for, communities, name):
    g = run.loaded.graph
    cfg = _null_config(args)
    if cfg is not None:
        run.seeds["null"] = cfg.seed
    rows = []
    for t in _connections(args):
        triads = None
        if kind in (Kind.TRIAD, Kind.COMMON_NEIGHBOR):
            triads = triad_array(g, triad_mode_for(t), args.threads)
        for agg in _aggs(args):
            prep = prepare(kind, g, values_for(t), t, agg, communities, triads)
            rows.append(report_row(prep, cfg, args.threads))
    run.write_csv(name, REPORT_COLUMNS, rows)


# ---------------------------------------------------------------- commands


def cmd_ingest(run, args):
    ld = run.loaded
    b, raw = ld.bundle, ld.raw
    for kind, text in _dataset_texts(b).items():
        run.write(f"{kind}.tsv", text)
    rows = [
        ("users_raw", len(raw.users)),
        ("users", len(b.users)),
        ("friend_edges", len(b.friend_edges)),
        ("follow_edges", len(b.follow_edges)),
        ("posts", len(b.posts)),
        ("memberships", len(b.memberships)),
        ("communities", len(np.unique(b.memberships[:, 1])) if len(b.memberships) else 0),
        ("self_loops_dropped", raw.self_loops),
        ("unknown_mood_posts", sum(raw.unknown_moods.values())),
        ("min_posts", args.min_posts),
    ]
    run.write_csv("dataset_summary.csv", ["statistic", "value"], rows)
    logger.info("filtered dataset written to %s", run.out_dir)


def _dataset_texts(b):
    return {
        "friends": "".join(f"{x}\t{y}\n" for x, y in b.friend_edges.tolist()),
        "follows": "".join(f"{x}\t{y}\n" for x, y in b.follow_edges.tolist()),
        "communities": "".join(f"{x}\t{y}\n" for x, y in b.memberships.tolist()),
        "posts": "".join(f"{p.user_id}\t{p.timestamp.isoformat()}\t{p.mood}\n" for p in b.posts),
    }


def cmd_swb(run, args):
    s = run.loaded.swb
    rows = [
        (u, p, n, z, fmt_real(x))
        for u, p, n, z, x in zip(s.users.tolist(), s.n_pos.tolist(), s.n_neg.tolist(), s.n_neu.tolist(), s.swb.tolist())
    ]
    run.write_csv("swb.csv", ["user", "n_pos", "n_neg", "n_neu", "swb"], rows)


def cmd_activity(run, args):
    a = run.loaded.activity(args.window)
    rows = [
        (u, n, (d if n else ""), fmt_real(x))
        for u, n, d, x in zip(a.users.tolist(), a.n_posts.tolist(), a.span_days.tolist(), a.activity.tolist())
    ]
    run.write_csv("activity.csv", ["user", "n_posts", "span_days", "activity"], rows)


def cmd_paradox(run, args):
    kind = Kind(args.kind)
    comms = run.loaded.communities
    if kind in (Kind.COMMUNITY, Kind.COMMON_INTEREST) and comms is None:
        raise ValueError(f"{kind.value} paradox needs community memberships (communities.tsv)")
    swb = run.loaded.swb.swb
    _paradox_report(run, args, kind, lambda t: swb, comms, f"paradox_{kind.value}.csv")


def cmd_friendship(run, args):
    g = run.loaded.graph
    _paradox_report(run, args, Kind.FRIENDSHIP, lambda t: g.degree(t).astype(np.float64), None, "paradox_friendship.csv")


def cmd_activity_paradox(run, args):
    act = run.loaded.activity(args.window).activity
    _paradox_report(run, args, Kind.ACTIVITY, lambda t: act, None, "paradox_activity.csv")


def cmd_sweep(run, args):
    comms = run.loaded.communities
    if comms is None:
        raise ValueError("sweep needs community memberships (communities.tsv)")
    cfg = _null_config(args)
    if cfg is not None:
        run.seeds["null"] = cfg.seed
    axes = list(Axis) if args.axis == "all" else [Axis(args.axis)]
    header = [
        "axis", "connection", "agg", "lower", "upper", "n_communities",
        "prop_holds", "prop_not", "prop_unknown", "expected_prop_holds",
    ]
    for axis in axes:
        rows = []
        for t in _connections(args):
            for agg in _aggs(args):
                for b in community_sweep(run.loaded.graph, run.loaded.swb, comms, t, agg, axis, tuple(args.bounds), args.buckets, cfg):
                    rows.append((
                        axis.value, t.value, agg.value, fmt_real(b.lower), fmt_real(b.upper), b.n_communities,
                        fmt_prop(b.prop_holds), fmt_prop(b.prop_not), fmt_prop(b.prop_unknown), fmt_prop(b.expected_prop_holds),
                    ))
        run.write_csv(f"sweep_{axis.value}.csv", header, rows)


def cmd_correlate(run, args):
    ld = run.loaded
    g, swb = ld.graph, ld.swb.swb
    ok = ~np.isnan(swb)
    rows = []
    ys = [(t.value, g.degree(t).astype(np.float64)) for t in ConnectionType]
    ys.append(("activity", ld.activity(args.window).activity))
    for name, y in ys:
        m = ok & ~np.isnan(y)
        try:
            c = pearson(swb[m], y[m])
        except ValueError as exc:
            logger.warning("correlation swb~%s skipped: %s", name, exc)
            rows.append(("swb", name, "", "", int(m.sum())))
            continue
        rows.append(("swb", name, fmt_real(c.r), format_p(c.p_value), c.n))
    run.write_csv("correlations.csv", ["x", "y", "r", "p_value", "n"], rows)

    header = ["band", "group", "n", "friends", "followees", "followers"]
    grows = []
    for band in (None, (-0.5, 0.5)):
        tab = group_degree_means(swb, g, band)
        label = "all" if band is None else f"{band[0]:g}..{band[1]:g}"
        for grp in [p.label for p in (Polarity.POSITIVE, Polarity.NEGATIVE, Polarity.NEUTRAL)] + ["Overall"]:
            grows.append([label, grp, tab.counts[grp]] + [fmt_real(tab.mean(grp, t)) for t in ConnectionType])
    run.write_csv("group_degrees.csv", header, grows)


def cmd_trend(run, args):
    ld = run.loaded
    g, swb = ld.graph, ld.swb.swb
    series = [(f"degree_{t.value}", g.degree(t).astype(np.float64)) for t in ConnectionType]
    series.append(("activity", ld.activity(args.window).activity))
    band = tuple(args.fit_band)
    fits = []
    for name, y in series:
        tr = binned_trend(swb, y, args.bin_width, band)
        rows = [(fmt_real(b.lower), fmt_real(b.upper), b.n, fmt_real(b.mean_y)) for b in tr.bins]
        run.write_csv(f"trend_{name}.csv", ["lower", "upper", "n", "mean_y"], rows)
        fits.append((name, fmt_real(tr.slope), fmt_real(tr.intercept), tr.n_fit, fmt_real(band[0]), fmt_real(band[1])))
    run.write_csv("trend_fits.csv", ["name", "slope", "intercept", "n_fit", "fit_lo", "fit_hi"], fits)


def _gen_spec(args, seed):
    return GenSpec(
        Model(args.model), args.n, seed, p=args.p, gamma=args.gamma, kmin=args.kmin, kmax=args.kmax,
        n_communities=args.n_communities, community_size=args.community_size, p_in=args.p_in, p_out=args.p_out,
        reciprocity=args.reciprocity,
    )


def _assignment(args, seed):
    return SwbAssignment(SwbMode(args.swb), args.mu, args.sigma2, args.rho, seed, args.homophily)


def synth_posts(swb, per_user, lexicon, rng):
    """Posts whose polarity counts reproduce each SWB value to 1/per_user resolution."""
    pos = sorted(m for m in lexicon if lexicon[m] is Polarity.POSITIVE)
    neg = sorted(m for m in lexicon if lexicon[m] is Polarity.NEGATIVE)
    lines = []
    for u, s in enumerate(swb.tolist()):
        n_pos = int(round(per_user * (1 + s) / 2))
        moods = [pos[i] for i in rng.integers(len(pos), size=n_pos)]
        moods += [neg[i] for i in rng.integers(len(neg), size=per_user - n_pos)]
        days = np.sort(rng.integers(0, 365, size=per_user))
        order = rng.permutation(per_user)
        for d, j in zip(days.tolist(), order.tolist()):
            lines.append(f"{u}\t{(SYNTH_START + _dt.timedelta(days=d)).isoformat()}\t{moods[j]}\n")
    return "".join(lines)


def cmd_synth(run, args):
    run.seeds["graph"] = args.seed
    run.seeds["swb"] = args.seed
    spec = _gen_spec(args, args.seed)
    g, comms = generate_network(spec)
    if comms is None and args.memberships_per_user > 0:
        comms = random_memberships(g.n_users, args.n_communities, args.memberships_per_user, args.seed)
    swb = assign_swb(g, _assignment(args, args.seed))
    ptr, idx = g.adjacency(ConnectionType.FRIENDS)
    src = np.repeat(np.arange(g.n_users), np.diff(ptr))
    up = src < idx
    run.write("friends.tsv", "".join(f"{a}\t{b}\n" for a, b in zip(src[up].tolist(), idx[up].tolist())))
    optr, oidx = g.adjacency(ConnectionType.FOLLOWEES)
    osrc = np.repeat(np.arange(g.n_users), np.diff(optr))
    run.write("follows.tsv", "".join(f"{a}\t{b}\n" for a, b in zip(osrc.tolist(), oidx.tolist())))
    mem = ""
    if comms is not None:
        cu = np.repeat(np.arange(comms.n_users), np.diff(comms.user_ptr))
        mem = "".join(f"{a}\t{comms.community_ids[c]}\n" for a, c in zip(cu.tolist(), comms.user_comm.tolist()))
    run.write("communities.tsv", mem)
    rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(4,)))
    run.write("posts.tsv", synth_posts(swb, args.posts_per_user, load_lexicon(), rng))
    run.write_csv("swb_assigned.csv", ["user", "swb"], [(i, fmt_real(x)) for i, x in enumerate(swb.tolist())])


def cmd_theorem1(run, args):
    run.seeds["base"] = args.seed
    graphs = []
    for r in range(args.runs):
        s = int(np.random.SeedSequence(args.seed, spawn_key=(r,)).generate_state(1)[0])
        graphs.append(generate_graph(_gen_spec(args, s)))
    t = ConnectionType(args.connection if args.connection != "all" else "friends")
    rep = theorem1_check(graphs, _assignment(args, args.seed), args.runs, t, args.tolerance)
    rows = [(r, fmt_real(a), fmt_real(b)) for r, (a, b) in enumerate(zip(rep.per_run_mean, rep.per_run_median))]
    run.write_csv("theorem1.csv", ["run", "mean_diff", "median_diff"], rows)
    run.write_csv(
        "theorem1_summary.csv",
        ["runs", "mean_diff", "median_diff", "sigma_c2", "magnitude", "tolerance", "holds"],
        [(rep.runs, fmt_real(rep.mean_diff), fmt_real(rep.median_diff), fmt_real(rep.sigma_c2),
          fmt_prop(rep.magnitude), fmt_real(rep.tolerance), str(rep.holds).lower())],
    )


def _features(run):
    ld = run.loaded
    return extract_features(ld.graph, ld.swb, ld.communities)


def cmd_features(run, args):
    fm = _features(run)
    rows = [[uid] + [fmt_real(x) for x in row] + [lab] for uid, row, lab in zip(fm.ids.tolist(), fm.X.tolist(), fm.labels.tolist())]
    run.write_csv("features.csv", ["user", *FEATURE_NAMES, "label"], rows)


def cmd_predict(run, args):
    run.seeds["cv"] = args.seed
    fm = _features(run)
    groups = GROUPS if args.groups == "all" else [g.strip() for g in args.groups.split(",") if g.strip()]
    res = ablate_feature_groups(fm, groups, args.folds, args.seed)
    out = {
        "seed": args.seed,
        "folds": args.folds,
        "n_users": len(fm),
        "n_positive": int(fm.labels.sum()),
        "groups": {
            name: {
                "accuracy": r.accuracy,
                "auc": r.auc,
                "per_fold": [{"accuracy": f.accuracy, "auc": f.auc, "n_correct": f.n_correct, "n_test": f.n_test} for f in r.per_fold],
            }
            for name, r in res.items()
        },
    }
    run.write_json("eval.json", out)


# ---------------------------------------------------------------- parser


def _common(data=True, analysis=True, null=False):
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--seed", type=int, default=0, help="base random seed")
    p.add_argument("--threads", type=int, default=1, help="worker threads")
    p.add_argument("-v", "--verbose", action="store_true")
    if data:
        p.add_argument("--data", help="directory with friends/follows/posts/communities TSV files")
        p.add_argument("--lexicon", help="mood lexicon TSV (default: bundled table)")
        p.add_argument("--min-posts", type=int, default=10, help="drop users with fewer posts (default 10)")
        p.add_argument("--window", type=float, default=30.0, help="activity window in days (default 30)")
    if analysis:
        p.add_argument("--connection", choices=[t.value for t in ConnectionType] + ["all"], default="all")
        p.add_argument("--agg", choices=[a.value for a in AggKind] + ["all"], default="all")
    if null:
        p.add_argument("--null-reps", type=int, default=1000, help="null-model replicates; 0 disables")
    return p


def _synth_args(p, n_default):
    p.add_argument("--n", type=int, default=n_default, help="number of users")
    p.add_argument("--p", type=float, default=0.01, help="ER edge probability")
    p.add_argument("--gamma", type=float, default=2.5, help="power-law exponent")
    p.add_argument("--kmin", type=int, default=1)
    p.add_argument("--kmax", type=int, default=None, help="max degree (default floor(sqrt(n)))")
    p.add_argument("--n-communities", type=int, default=10)
    p.add_argument("--community-size", type=int, default=20)
    p.add_argument("--p-in", type=float, default=0.3)
    p.add_argument("--p-out", type=float, default=0.0)
    p.add_argument("--reciprocity", type=float, default=0.5)
    p.add_argument("--swb", choices=[m.value for m in SwbMode], default="iid")
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma2", type=float, default=0.08)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--homophily", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sentiparadox", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, fn, help, parents):
        p = sub.add_parser(name, help=help, description=help, parents=parents)
        p.set_defaults(func=fn, needs_data=any(a.dest == "data" for a in p._actions))
        return p

    add("ingest", cmd_ingest, "filter the dataset and write it back with summary statistics", [_common(analysis=False)])
    add("swb", cmd_swb, "per-user post polarity counts and SWB", [_common(analysis=False)])
    add("activity", cmd_activity, "per-user post count, span and activity", [_common(analysis=False)])
    p = add("paradox", cmd_paradox, "sentiment paradox report with null model", [_common(null=True)])
    p.add_argument("kind", choices=[k.value for k in SENTIMENT_KINDS])
    p = add("sweep", cmd_sweep, "community paradox by community size or density", [_common(null=True)])
    p.add_argument("--axis", choices=[a.value for a in Axis] + ["all"], default="all")
    p.add_argument("--bounds", type=float, nargs=2, default=(1, 1200), metavar=("LO", "HI"))
    p.add_argument("--buckets", type=int, default=12)
    add("correlate", cmd_correlate, "SWB correlations with degree/activity and group degree means", [_common(analysis=False)])
    p = add("trend", cmd_trend, "binned degree and activity trends over SWB", [_common(analysis=False)])
    p.add_argument("--bin-width", type=float, default=0.05)
    p.add_argument("--fit-band", type=float, nargs=2, default=(-0.5, 0.5), metavar=("LO", "HI"))
    add("friendship", cmd_friendship, "friendship paradox report", [_common(null=True)])
    add("activity-paradox", cmd_activity_paradox, "activity paradox report", [_common(null=True)])
    p = add("synth", cmd_synth, "generate a synthetic dataset in the input TSV formats", [_common(data=False, analysis=False)])
    p.add_argument("model", choices=[m.value for m in Model])
    _synth_args(p, 1000)
    p.add_argument("--posts-per-user", type=int, default=20)
    p.add_argument("--memberships-per-user", type=int, default=0, help="random memberships for non-planted models")
    p = add("theorem1", cmd_theorem1, "user-vs-connection SWB differences on configuration-model graphs", [_common(data=False)])
    _synth_args(p, 10000)
    p.set_defaults(model=Model.CONFIG_POWER_LAW.value)
    p.add_argument("--runs", type=int, default=20)
    p.add_argument("--tolerance", type=float, default=0.01)
    add("features", cmd_features, "39 paradox features per positive/negative user", [_common(analysis=False)])
    p = add("predict", cmd_predict, "10-fold CV of SWB polarity per feature group", [_common(analysis=False)])
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--groups", default="all", help=f"comma list from {','.join(GROUPS)} or 'all'")
    return ap


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.threads < 1 or getattr(args, "null_reps", 0) < 0:
        ap.print_usage(sys.stderr)
        print("sentiparadox: error: --threads must be >= 1 and --null-reps >= 0", file=sys.stderr)
        return 2
    try:
        run = Run(argv, args)
        if args.needs_data:
            run.loaded = Loaded(run, args)
        args.func(run, args)
        run.finish()
    except UsageError as exc:
        print(f"sentiparadox: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"sentiparadox: I/O error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"sentiparadox: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

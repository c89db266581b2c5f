"""Command-line orchestration: ingest, compute, rank-tc, analyze, simulate, report.

Exit codes: 0 on success, 1 for usage or configuration problems, 2 for
data problems. With a fixed config, every data file a command writes
is byte-identical across reruns and worker counts; wall-clock numbers
go to a separate ``timings.json`` so they never pollute that contract.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import logging
import os
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .adoption import (
    CLASS_NAMES,
    classify_adopters,
    interconnectedness,
    numeric_assortativity,
    overlap_matrix,
    reach_analysis,
    registration_stats,
    top_k,
)
from .config import RunConfig, derive_seed, load_config
from .diffusion import (
    ic_simulate,
    lt_simulate,
    thresholds_class_aware,
    thresholds_uniform_multiplier,
    thresholds_uniform_random,
    trivalency_probability,
    weighted_cascade_probability,
)
from .errors import AdoptRankError, ConfigError, DataError
from .graph import AdoptionFormat, AdoptionTable, EdgeListFormat, Graph, load_adoption, load_edge_list
from .measures import compute_measure, read_scores_csv
from .topcandidate import top_candidate_ranking

log = logging.getLogger("adoptrank")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

_DELIM_WORDS = {"tab": "\t", "comma": ",", "space": " ", "whitespace": None}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _delimiter(raw: str | None) -> str | None:
    if raw is None:
        return None
    return _DELIM_WORDS.get(raw.lower(), raw)


@contextmanager
def _locked_output(outdir: Path):
    # one process per output directory
    outdir.mkdir(parents=True, exist_ok=True)
    lock = outdir / ".lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise DataError(f"output directory is locked by another run: {lock}") from None
    try:
        os.close(fd)
        yield
    finally:
        lock.unlink(missing_ok=True)


def _set_workers(cfg: RunConfig) -> None:
    if cfg.workers > 0:
        import numba

        numba.set_num_threads(cfg.workers)


def _load_graph(cfg: RunConfig) -> Graph:
    if cfg.dataset:
        return Graph.from_npz(cfg.dataset)
    if not cfg.edges:
        raise ConfigError("an edge list (edges=) or ingested dataset (dataset=) is required", field="edges")
    fmt = EdgeListFormat(
        delimiter=_delimiter(cfg.delimiter), directed=cfg.directed, header=cfg.header
    )
    return load_edge_list(cfg.edges, fmt)


def _load_days(cfg: RunConfig, g: Graph) -> AdoptionTable:
    if cfg.dataset:
        with np.load(cfg.dataset, allow_pickle=False) as z:
            if "days" in z:
                return AdoptionTable(days=z["days"], has_day=z["has_day"])
    if not cfg.adoption:
        raise ConfigError("an adoption file (adoption=) is required for this command", field="adoption")
    kickoff = dt.date.fromisoformat(cfg.kickoff) if cfg.date_mode == "iso" else None
    fmt = AdoptionFormat(
        mode=cfg.date_mode, kickoff=kickoff, delimiter=_delimiter(cfg.delimiter), header=cfg.header
    )
    return load_adoption(cfg.adoption, g, fmt)


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _manifest(cfg: RunConfig, command: str, g: Graph, outputs: dict) -> dict:
    return {
        "command": command,
        "config": cfg.semantic_dict(),
        "config_hash": cfg.config_hash(),
        "n": g.n,
        "m": g.m,
        "outputs": outputs,
    }


def cmd_ingest(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    g = _load_graph(cfg)
    g.validate()
    out = Path(cfg.output_dir)
    with _locked_output(out):
        arrays = {
            "indptr": g.indptr,
            "indices": g.indices,
            "labels": np.array(g.labels, dtype=np.str_),
        }
        coverage = None
        if cfg.adoption:
            days = _load_days(cfg, g)
            arrays["days"] = days.days
            arrays["has_day"] = days.has_day
            coverage = days.coverage
        np.savez(out / "dataset.npz", **arrays)
        g.write_label_map(out / "labels.csv")
        outputs = {"dataset": "dataset.npz", "label_map": "labels.csv"}
        manifest = _manifest(cfg, "ingest", g, outputs)
        if coverage is not None:
            manifest["adoption_coverage"] = round(coverage, 6)
        _write_json(out / "manifest.json", manifest)
        _write_json(out / "timings.json", {"ingest_s": time.perf_counter() - t0})
    log.info("ingested graph: n=%d m=%d -> %s", g.n, g.m, out)
    return EXIT_OK


def cmd_compute(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    _set_workers(cfg)
    out = Path(cfg.output_dir)
    with _locked_output(out):
        outputs: dict = {}
        timings: dict = {}
        for name in cfg.measures:
            t0 = time.perf_counter()
            sv = compute_measure(g, name, cfg)
            timings[name] = round(time.perf_counter() - t0, 6)
            fname = f"scores_{name}.csv"
            sv.write_csv(out / fname, g.labels)
            outputs[name] = {"file": fname, "rows": sv.n, "params": sv.params}
            log.info("computed %-8s in %.2fs", name, timings[name])
        _write_json(out / "manifest.json", _manifest(cfg, "compute", g, outputs))
        _write_json(out / "timings.json", timings)
    return EXIT_OK


def cmd_rank_tc(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    _set_workers(cfg)
    out = Path(cfg.output_dir)
    t0 = time.perf_counter()
    ranking = top_candidate_ranking(g, cfg.tc_grid)
    with _locked_output(out):
        ranking.write_csv(out / "tc_ranking.csv", g.labels)
        ranking.write_membership_csv(out / "tc_membership.csv", g.labels)
        outputs = {
            "ranking": "tc_ranking.csv",
            "membership": "tc_membership.csv",
            "grid": list(ranking.grid),
        }
        _write_json(out / "manifest.json", _manifest(cfg, "rank-tc", g, outputs))
        _write_json(out / "timings.json", {"rank_tc_s": round(time.perf_counter() - t0, 6)})
    return EXIT_OK


def _day_histogram(days, members, bin_width: int = 30):
    have = days.has_day[members]
    d = days.days[members[have]]
    if d.size == 0:
        return []
    top = int(d.max() // bin_width)
    counts = np.bincount(d // bin_width, minlength=top + 1)
    return [(int(b * bin_width), int(c)) for b, c in enumerate(counts)]


def cmd_analyze(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    _set_workers(cfg)
    days = _load_days(cfg, g)
    classes = classify_adopters(days, cfg.cutoffs)
    if cfg.top_k > g.n:
        raise ConfigError(f"top_k {cfg.top_k} > node count {g.n}", field="top_k")

    scores_dir = Path(cfg.scores_dir or cfg.output_dir)
    scores = {}
    for name in cfg.measures:
        path = scores_dir / f"scores_{name}.csv"
        if not path.exists():
            raise DataError(f"missing score file for measure {name!r}: {path}")
        scores[name] = read_scores_csv(path, g, name)

    out = Path(cfg.output_dir)
    with _locked_output(out):
        group = interconnectedness(g, classes)
        group.write_csv(out / "interconnectedness.csv")

        # one shared tie-break seed: identical score files must yield
        # identical top-k sets, whatever the measure is called
        tie_seed = derive_seed(cfg.seed, "top-k")
        topks = {name: top_k(sv, cfg.top_k, tie_seed) for name, sv in scores.items()}
        names = list(cfg.measures)

        with open(out / "assortativity.csv", "w", encoding="utf-8") as f:
            f.write("measure,assortativity,degenerate\n")
            assort = {}
            for name in names:
                a = numeric_assortativity(g, scores[name])
                assort[name] = {"value": round(a.value, 6), "degenerate": a.degenerate}
                f.write(f"{name},{a.value!r},{int(a.degenerate)}\n")

        ov = overlap_matrix([topks[n] for n in names])
        with open(out / "overlap.csv", "w", encoding="utf-8") as f:
            f.write("measure," + ",".join(names) + "\n")
            for i, name in enumerate(names):
                f.write(name + "," + ",".join(str(int(x)) for x in ov[i]) + "\n")

        reg = {}
        with open(out / "registration_stats.csv", "w", encoding="utf-8") as f:
            f.write("measure,mean_day,median_day,counted,missing\n")
            for name in names:
                st = registration_stats(topks[name], days, classes)
                reg[name] = st
                f.write(f"{name},{st.mean!r},{st.median},{st.counted},{st.missing}\n")
            whole = registration_stats(np.arange(g.n), days, classes)
            f.write(f"whole_graph,{whole.mean!r},{whole.median},{whole.counted},{whole.missing}\n")

        with open(out / "class_distribution.csv", "w", encoding="utf-8") as f:
            f.write("measure," + ",".join(CLASS_NAMES) + "\n")
            for name in names:
                hist = reg[name].class_histogram
                f.write(name + "," + ",".join(str(int(x)) for x in hist) + "\n")

        reaches = {}
        with open(out / "reach.csv", "w", encoding="utf-8") as f:
            cols = ["innovator", "early_adopter", "early_majority"]
            f.write(
                "measure,"
                + ",".join(cols)
                + ","
                + ",".join(f"{c}_pct" for c in cols)
                + "\n"
            )
            for name in names:
                rep = reach_analysis(topks[name], classes, g, exclude=cfg.reach_exclude)
                reaches[name] = rep
                counts = ",".join(str(rep.counts[c]) for c in cols)
                pcts = ",".join(f"{rep.percent[c]:.4f}" for c in cols)
                f.write(f"{name},{counts},{pcts}\n")

        for name in names:
            with open(out / f"topk_{name}.csv", "w", encoding="utf-8") as f:
                f.write("label\n")
                for v in topks[name].members:
                    f.write(f"{g.labels[v]}\n")

        bundle = {
            "config_hash": cfg.config_hash(),
            "k": cfg.top_k,
            "cutoffs": list(cfg.cutoffs),
            "class_sizes": [int(x) for x in classes.class_sizes()],
            "unclassified": int(classes.excluded.size),
            "interconnectedness_pct": [[round(float(x), 4) for x in row] for row in group.percent],
            "empty_columns": group.empty_columns,
            "assortativity": assort,
            "overlap": [[int(x) for x in row] for row in ov],
            "registration": {
                name: {
                    "mean": round(reg[name].mean, 4),
                    "median": reg[name].median,
                    "counted": reg[name].counted,
                    "missing": reg[name].missing,
                }
                for name in names
            },
            "whole_graph": {"mean": round(whole.mean, 4), "median": whole.median},
            "class_distribution": {
                name: [int(x) for x in reg[name].class_histogram] for name in names
            },
            "reach": {
                name: {"counts": reaches[name].counts, "percent": reaches[name].percent}
                for name in names
            },
        }
        _write_json(out / "analysis.json", bundle)

        if cfg.plot_data:
            plots = out / "plots"
            plots.mkdir(exist_ok=True)
            with open(plots / "class_distribution.csv", "w", encoding="utf-8") as f:
                f.write("measure,class,count\n")
                for name in names:
                    for cls, cnt in zip(CLASS_NAMES, reg[name].class_histogram):
                        f.write(f"{name},{cls},{int(cnt)}\n")
            with open(plots / "day_histogram.csv", "w", encoding="utf-8") as f:
                f.write("measure,bin_start_day,count\n")
                for name in names:
                    for b, c in _day_histogram(days, topks[name].members):
                        f.write(f"{name},{b},{c}\n")
            with open(plots / "reach_counts.csv", "w", encoding="utf-8") as f:
                f.write("measure,class,count\n")
                for name in names:
                    for cls, cnt in reaches[name].counts.items():
                        f.write(f"{name},{cls},{cnt}\n")
            with open(plots / "reach_composition.csv", "w", encoding="utf-8") as f:
                f.write("measure,class,percent\n")
                for name in names:
                    for cls, pct in reaches[name].percent.items():
                        f.write(f"{name},{cls},{pct:.4f}\n")

        _write_json(out / "manifest.json", _manifest(cfg, "analyze", g, {"bundle": "analysis.json"}))
    return EXIT_OK


def _resolve_seeds(cfg: RunConfig, g: Graph) -> np.ndarray:
    labels: list[str] = []
    if cfg.sim_seeds:
        labels = [s.strip() for s in cfg.sim_seeds.split(",") if s.strip()]
    elif cfg.sim_seeds_file:
        for line in Path(cfg.sim_seeds_file).read_text(encoding="utf-8").splitlines():
            tok = line.strip().split(",")[0]
            if tok and tok != "label":
                labels.append(tok)
    else:
        raise ConfigError("simulate needs sim_seeds or sim_seeds_file", field="sim_seeds")
    try:
        ids = [g.id_of(lab) for lab in labels]
    except KeyError as e:
        raise DataError(f"seed label not in graph: {e.args[0]!r}") from None
    return np.array(sorted(set(ids)), dtype=np.int64)


def cmd_simulate(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    _set_workers(cfg)
    seeds = _resolve_seeds(cfg, g)
    t0 = time.perf_counter()
    if cfg.sim_model == "lt":
        if cfg.sim_thresholds == "multiplier":
            thr = thresholds_uniform_multiplier(g, cfg.sim_theta)
        elif cfg.sim_thresholds == "uniform-random":
            thr = thresholds_uniform_random(g, derive_seed(cfg.seed, "thresholds-uniform"))
        else:
            days = _load_days(cfg, g)
            classes = classify_adopters(days, cfg.cutoffs)
            if classes.excluded.size:
                raise DataError(
                    f"class-aware thresholds need full adoption coverage; "
                    f"{classes.excluded.size} nodes have no adoption day"
                )
            thr = thresholds_class_aware(g, classes, seed=derive_seed(cfg.seed, "thresholds-class"))
        result = lt_simulate(g, seeds, thr)
    else:
        if cfg.sim_ic_preset == "uniform":
            p = cfg.sim_p
        elif cfg.sim_ic_preset == "weighted-cascade":
            p = weighted_cascade_probability(g)
        else:
            p = trivalency_probability(derive_seed(cfg.seed, "trivalency"))
        result = ic_simulate(g, seeds, p, seed=derive_seed(cfg.seed, "ic"))

    out = Path(cfg.output_dir)
    with _locked_output(out):
        result.write_csv(out / "cascade.csv", g.labels)
        summary = result.summary()
        summary["seeds"] = int(seeds.size)
        summary["config_hash"] = cfg.config_hash()
        _write_json(out / "cascade_summary.json", summary)
        _write_json(out / "timings.json", {"simulate_s": round(time.perf_counter() - t0, 6)})
    log.info("cascade activated %d/%d nodes in %d sweeps", result.size, g.n, result.sweeps)
    return EXIT_OK


def cmd_report(run_dir: str) -> int:
    run = Path(run_dir)
    manifest_path = run / "manifest.json"
    if not manifest_path.exists():
        raise DataError(f"no manifest.json under {run}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    lines = ["# adoptrank run report", ""]
    lines.append(f"- command: `{manifest.get('command')}`")
    lines.append(f"- graph: n={manifest.get('n')} m={manifest.get('m')}")
    lines.append(f"- config hash: `{manifest.get('config_hash')}`")
    analysis_path = run / "analysis.json"
    if analysis_path.exists():
        a = json.loads(analysis_path.read_text(encoding="utf-8"))
        lines += ["", "## Registration day of top-k sets", "", "| measure | mean | median |", "|---|---|---|"]
        for name, st in a["registration"].items():
            lines.append(f"| {name} | {st['mean']} | {st['median']} |")
        w = a["whole_graph"]
        lines.append(f"| whole graph | {w['mean']} | {w['median']} |")
        lines += ["", "## Assortativity", "", "| measure | value |", "|---|---|"]
        for name, st in a["assortativity"].items():
            flag = " (degenerate)" if st["degenerate"] else ""
            lines.append(f"| {name} | {st['value']}{flag} |")
        lines += ["", "## Net reach of early groups", "", "| measure | innovator | early adopter | early majority |", "|---|---|---|---|"]
        for name, st in a["reach"].items():
            c = st["counts"]
            lines.append(
                f"| {name} | {c['innovator']} | {c['early_adopter']} | {c['early_majority']} |"
            )
    (run / "report.md").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print("\n".join(lines))
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--edges", help="edge list path")
    p.add_argument("--adoption", help="adoption file path")
    p.add_argument("--dataset", help="ingested dataset.npz path")
    p.add_argument("--delimiter", help="field delimiter (char, or tab/comma/space/whitespace)")
    p.add_argument("--directed", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--header", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--date-mode", dest="date_mode", choices=("days", "iso"))
    p.add_argument("--kickoff", help="kickoff date (ISO) for iso date mode")
    p.add_argument("--measures", help="comma list of measures")
    p.add_argument("--damping", type=float)
    p.add_argument("--gdd-p", dest="gdd_p", type=float)
    p.add_argument("--gdd-q", dest="gdd_q", type=int)
    p.add_argument("--ltc-theta", dest="ltc_theta", type=float)
    p.add_argument("--tc-grid", dest="tc_grid", help="comma list of alphas")
    p.add_argument("--harmonic-mode", dest="harmonic_mode", choices=("auto", "exact", "sampled"))
    p.add_argument("--harmonic-pivots", dest="harmonic_pivots", type=int)
    p.add_argument("--top-k", dest="top_k", type=int)
    p.add_argument("--cutoffs", help="comma list of 4 percentile cutoffs")
    p.add_argument("--reach-exclude", dest="reach_exclude", choices=("reachers", "members"))
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--scores-dir", dest="scores_dir")
    p.add_argument("--plot-data", dest="plot_data", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("-v", "--verbose", action="store_true")


_OVERRIDE_FIELDS = (
    "edges", "adoption", "dataset", "delimiter", "directed", "header", "date_mode",
    "kickoff", "damping", "gdd_p", "gdd_q", "ltc_theta", "harmonic_mode",
    "harmonic_pivots", "top_k", "reach_exclude", "seed", "workers", "output_dir",
    "scores_dir", "plot_data", "sim_model", "sim_p", "sim_ic_preset",
    "sim_thresholds", "sim_theta", "sim_seeds", "sim_seeds_file",
)


def _config_from_args(args) -> RunConfig:
    overrides = {}
    for name in _OVERRIDE_FIELDS:
        if hasattr(args, name) and getattr(args, name) is not None:
            overrides[name] = getattr(args, name)
    if getattr(args, "measures", None):
        overrides["measures"] = tuple(s.strip() for s in args.measures.split(",") if s.strip())
    if getattr(args, "tc_grid", None):
        overrides["tc_grid"] = tuple(float(x) for x in args.tc_grid.split(","))
    if getattr(args, "cutoffs", None):
        overrides["cutoffs"] = tuple(float(x) for x in args.cutoffs.split(","))
    return load_config(args.config, overrides)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="adoptrank", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    for name, helptext in (
        ("ingest", "load and canonicalize a graph (and adoption file) into a dataset bundle"),
        ("compute", "compute the configured centrality measures"),
        ("rank-tc", "compute the alpha-sweep Top Candidate ranking"),
        ("analyze", "evaluate computed score files against adoption ground truth"),
        ("simulate", "run one LT or IC cascade from a seed set"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        if name == "simulate":
            p.add_argument("--model", dest="sim_model", choices=("lt", "ic"))
            p.add_argument("--p", dest="sim_p", type=float)
            p.add_argument("--ic-preset", dest="sim_ic_preset",
                           choices=("uniform", "weighted-cascade", "trivalency"))
            p.add_argument("--thresholds", dest="sim_thresholds",
                           choices=("multiplier", "uniform-random", "class-aware"))
            p.add_argument("--theta", dest="sim_theta", type=float)
            p.add_argument("--seeds", dest="sim_seeds", help="comma list of node labels")
            p.add_argument("--seeds-file", dest="sim_seeds_file", help="file with one label per line")

    p = sub.add_parser("report", help="render a markdown report from a run directory")
    p.add_argument("run_dir")
    p.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        logging.basicConfig(
            level=logging.DEBUG if getattr(args, "verbose", False) else logging.INFO,
            format="%(levelname)s %(name)s: %(message)s",
        )
        if args.command == "report":
            return cmd_report(args.run_dir)
        cfg = _config_from_args(args)
        handler = {
            "ingest": cmd_ingest,
            "compute": cmd_compute,
            "rank-tc": cmd_rank_tc,
            "analyze": cmd_analyze,
            "simulate": cmd_simulate,
        }[args.command]
        return handler(cfg)
    except (UsageError, ConfigError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (AdoptRankError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

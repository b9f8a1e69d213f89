"""Command-line front end: construct, verify, montecarlo, sweep.

Exit codes: 0 success, 1 parameter/validation error, 2 an acceptance-style
check failed, 3 I/O or parse error. Outputs are byte-identical across
reruns of the same configuration regardless of worker count: every trial
owns the seed base_seed + trial_index, results are merged in trial order,
and serialized reports carry no volatile fields (durations go to stderr).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import GraphFormatError, ParameterError
from .evasive import (
    CoefficientStream,
    exact_probabilities,
    prune_bad_lines,
    reference_line,
    restrict_to_line,
    sample_poly,
    zero_set,
)
from .furedi import build_furedi, classes_to_text, verify_appendix
from .geom3 import line_table
from .gf import FieldCtx
from .incidence import build_incidence, count_ktt_via_lines, verify_construction
from .report import StatsReport, write_report
from .subgraph import graph_to_text, is_ksm_free, read_graph

WORKERS_ENV = "EIL_WORKERS"


@dataclass
class RunConfig:
    subcommand: str
    q_values: list[int]
    t: int
    seed: int
    trials: int
    out_dir: Path
    fmt: str
    workers: int
    force: bool

    def __post_init__(self) -> None:
        for q in self.q_values:
            FieldCtx(q)
        if self.subcommand in ("incidence", "montecarlo", "sweep"):
            if self.t < 3:
                raise ParameterError(f"t must be >= 3, got {self.t}")
            for q in self.q_values:
                if self.t > q:
                    raise ParameterError(f"t = {self.t} exceeds q = {q}")
        if self.subcommand in ("montecarlo", "sweep") and self.trials < 100:
            raise ParameterError(f"trials must be >= 100, got {self.trials}")
        if self.subcommand == "sweep" and len(set(self.q_values)) < 2:
            raise ParameterError("sweep needs at least 2 distinct q values")
        if self.seed < 0:
            raise ParameterError(f"seed must be nonnegative, got {self.seed}")
        if self.workers < 1:
            raise ParameterError(f"workers must be >= 1, got {self.workers}")
        if self.fmt not in ("json", "csv"):
            raise ParameterError(f"format must be json or csv, got {self.fmt!r}")


def _run_indexed(fn, argslist, workers: int) -> list:
    """Map fn over argslist, trial order preserved regardless of workers."""
    if workers <= 1 or len(argslist) <= 1:
        return [fn(a) for a in argslist]
    chunk = max(1, len(argslist) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, argslist, chunksize=chunk))


def _montecarlo_trial(args: tuple[int, int, int, int]) -> dict:
    q, t, base_seed, index = args
    ctx = FieldCtx(q)
    f = sample_poly(ctx, t, CoefficientStream(base_seed + index))
    x0 = zero_set(ctx, f)
    pruned, vanishing = prune_bad_lines(ctx, f, x0)
    table = line_table(q)
    ref = reference_line(ctx)
    ref_points = table.point_idx[table.index_of[ref]]
    ref_count = int(x0.member[ref_points].sum())
    removed = x0.member & ~pruned.member
    return {
        "trial": index,
        "seed": base_seed + index,
        "x0_size": x0.count,
        "x_size": pruned.count,
        "vanishing_lines": len(vanishing),
        "ref_count_x0": ref_count,
        "ref_exact_t": ref_count == t,
        "ref_vanished": restrict_to_line(ctx, f, ref).is_zero(),
        "ref_bad": bool(removed[ref_points].any()),
        "binom_stat": math.comb(ref_count, t),
    }


def _z_against(rate: float, p: float, n: int) -> float:
    return (rate - p) / math.sqrt(p * (1 - p) / n)


def run_montecarlo(q: int, t: int, seed: int, trials: int, workers: int = 1) -> StatsReport:
    """Per-line statistics of the unpruned zero set over seeded trials.

    z-scores compare empirical rates for the fixed reference line against
    the closed-form targets; the rate checks use the binomial standard
    error at the target rate, the mean statistic uses its sample standard
    error. The bad-line rate is checked against twice the first-moment
    bound (q^3+q^2+1) * q^-(t+1).
    """
    started = time.monotonic()
    exact = exact_probabilities(q, t)
    records = _run_indexed(
        _montecarlo_trial, [(q, t, seed, i) for i in range(trials)], workers
    )
    n = len(records)
    exact_t_rate = sum(r["ref_exact_t"] for r in records) / n
    vanish_rate = sum(r["ref_vanished"] for r in records) / n
    bad_rate = sum(r["ref_bad"] for r in records) / n
    stats = np.array([r["binom_stat"] for r in records], dtype=np.float64)
    binom_mean = float(stats.mean())
    binom_std = float(stats.std(ddof=1)) if n > 1 else 0.0
    z_exact = _z_against(exact_t_rate, exact.p_exact_t, n)
    z_vanish = _z_against(vanish_rate, exact.p_vanish, n)
    z_binom = None
    if binom_std > 0:
        z_binom = (binom_mean - exact.e_binom) / (binom_std / math.sqrt(n))
    bad_bound = 2 * (q**3 + q**2 + 1) / q ** (t + 1)
    checks = [
        {"name": "exact_t_rate_z", "passed": abs(z_exact) <= 3.0,
         "rate": exact_t_rate, "target": exact.p_exact_t, "z": z_exact},
        {"name": "vanish_rate_z", "passed": abs(z_vanish) <= 3.0,
         "rate": vanish_rate, "target": exact.p_vanish, "z": z_vanish},
        {"name": "binomial_mean_z",
         "passed": (abs(z_binom) <= 3.0) if z_binom is not None
         else binom_mean == exact.e_binom,
         "mean": binom_mean, "target": exact.e_binom, "z": z_binom},
        {"name": "bad_rate_bound", "passed": bad_rate <= bad_bound,
         "rate": bad_rate, "bound": bad_bound},
    ]
    return StatsReport(
        kind="montecarlo",
        params={"q": q, "t": t, "seed": seed, "trials": trials},
        trials=records,
        aggregates={
            "exact_t_rate": exact_t_rate,
            "exact_t_se": math.sqrt(exact.p_exact_t * (1 - exact.p_exact_t) / n),
            "vanish_rate": vanish_rate,
            "vanish_se": math.sqrt(exact.p_vanish * (1 - exact.p_vanish) / n),
            "bad_rate": bad_rate,
            "binom_mean": binom_mean,
            "binom_std": binom_std,
            "binom_mean_se": binom_std / math.sqrt(n),
            "p_exact_t": exact.p_exact_t,
            "p_vanish": exact.p_vanish,
            "e_binom": exact.e_binom,
        },
        checks=checks,
        duration_seconds=time.monotonic() - started,
    )


def _sweep_trial(args: tuple[int, int, int, int]) -> dict:
    q, t, base_seed, index = args
    c = build_incidence(q, t, base_seed + index)
    count = count_ktt_via_lines(c)
    freeness = is_ksm_free(c.graph, 2, t + 1)
    n = c.n
    return {
        "q": q,
        "trial": index,
        "seed_x": c.seed_x,
        "seed_y": c.seed_y,
        "n": n,
        "x_size": c.x_set.count,
        "y_size": c.y_set.count,
        "ktt_count": count,
        "k2_free": freeness.free,
        "upper_bound_ok": count <= math.comb(n, 2),
        "ratio_count_n2": count / (n * n) if n else 0.0,
    }


def log_log_slope(qs: list[int], means: list[float]) -> float | None:
    """Least-squares slope of log(mean) against log(q)."""
    if any(m <= 0 for m in means):
        return None
    xs = np.log(np.asarray(qs, dtype=np.float64))
    ys = np.log(np.asarray(means, dtype=np.float64))
    xc = xs - xs.mean()
    return float((xc * (ys - ys.mean())).sum() / (xc * xc).sum())


def run_sweep(qs: list[int], t: int, seed: int, trials: int, workers: int = 1) -> StatsReport:
    """Mean K_{t,t} counts per q, ratios to n^2 and q^4, log-log slope."""
    started = time.monotonic()
    qs = sorted(set(qs))
    args = [(q, t, seed, i) for q in qs for i in range(trials)]
    records = _run_indexed(_sweep_trial, args, workers)
    per_q = []
    means = []
    for q in qs:
        recs = [r for r in records if r["q"] == q]
        counts = np.array([r["ktt_count"] for r in recs], dtype=np.float64)
        mean_count = float(counts.mean())
        means.append(mean_count)
        per_q.append({
            "q": q,
            "t": t,
            "trials": len(recs),
            "mean_count": mean_count,
            "mean_count_se": float(counts.std(ddof=1) / math.sqrt(len(recs)))
            if len(recs) > 1 else 0.0,
            "min_count": int(counts.min()),
            "max_count": int(counts.max()),
            "mean_n": sum(r["n"] for r in recs) / len(recs),
            "mean_ratio_count_n2": sum(r["ratio_count_n2"] for r in recs) / len(recs),
            "count_over_q4": mean_count / q**4,
            "all_free": all(r["k2_free"] for r in recs),
        })
    slope = log_log_slope(qs, means)
    checks = [
        {"name": "all_trials_k2_free", "passed": all(r["k2_free"] for r in records)},
        {"name": "all_counts_at_most_n_choose_2",
         "passed": all(r["upper_bound_ok"] for r in records)},
    ]
    report = StatsReport(
        kind="sweep",
        params={"q_values": qs, "t": t, "seed": seed, "trials": trials},
        trials=records,
        aggregates={"per_q": per_q, "log_log_slope": slope},
        checks=checks,
        duration_seconds=time.monotonic() - started,
        csv_rows=per_q,
    )
    return report


def cmd_construct(cfg: RunConfig, which: str) -> int:
    q, t = cfg.q_values[0], cfg.t
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    ext = cfg.fmt
    if which == "incidence":
        c = build_incidence(q, t, cfg.seed)
        report = verify_construction(c)
        base = cfg.out_dir / f"incidence-q{q}-t{t}-seed{cfg.seed}"
        outputs = {
            f"{base}.graph.txt": graph_to_text(c.graph),
            f"{base}.x.txt": c.x_set.to_text(),
            f"{base}.y.txt": c.y_set.to_text(),
            f"{base}.report.{ext}": report.render(ext),
        }
    else:
        g = build_furedi(q, t)
        report = verify_appendix(g)
        base = cfg.out_dir / f"furedi-q{q}-t{t}"
        outputs = {
            f"{base}.graph.txt": graph_to_text(g.graph),
            f"{base}.classes.txt": classes_to_text(g),
            f"{base}.report.{ext}": report.render(ext),
        }
    for path, text in outputs.items():
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {path}")
    _print_checks(report)
    return 0 if report.all_passed() else 2


def cmd_verify(path: str, s: int, m: int, force: bool, out: str | None, fmt: str) -> int:
    graph = read_graph(path)
    result = is_ksm_free(graph, s, m, force=force)
    witness = list(map(list, result.witness)) if result.witness else None
    report = StatsReport(
        kind="verify",
        params={"path": str(path), "s": s, "m": m},
        trials=[{"trial": 0, "n": graph.n, "edge_count": graph.edge_count(),
                 "free": result.free, "witness": witness}],
        aggregates={"free": result.free},
        checks=[{"name": f"k_{s}_{m}_free", "passed": result.free, "witness": witness}],
    )
    sys.stdout.write(report.to_json())
    if out:
        write_report(report, out, fmt)
    return 0 if result.free else 2


def _print_checks(report: StatsReport) -> None:
    for chk in report.checks:
        print(f"[{'PASS' if chk['passed'] else 'FAIL'}] {chk['name']}")


def cmd_montecarlo(cfg: RunConfig) -> int:
    q = cfg.q_values[0]
    report = run_montecarlo(q, cfg.t, cfg.seed, cfg.trials, cfg.workers)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / (
        f"montecarlo-q{q}-t{cfg.t}-seed{cfg.seed}-trials{cfg.trials}.report.{cfg.fmt}"
    )
    write_report(report, path, cfg.fmt)
    print(f"wrote {path}")
    for key, value in report.aggregates.items():
        print(f"{key} = {value}")
    _print_checks(report)
    return 0 if report.all_passed() else 2


def cmd_sweep(cfg: RunConfig) -> int:
    report = run_sweep(cfg.q_values, cfg.t, cfg.seed, cfg.trials, cfg.workers)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    qtag = "-".join(str(q) for q in sorted(set(cfg.q_values)))
    path = cfg.out_dir / (
        f"sweep-q{qtag}-t{cfg.t}-seed{cfg.seed}-trials{cfg.trials}.report.{cfg.fmt}"
    )
    write_report(report, path, cfg.fmt)
    print(f"wrote {path}")
    for row in report.aggregates["per_q"]:
        print(
            f"q={row['q']} mean_count={row['mean_count']:.3f} "
            f"count/q^4={row['count_over_q4']:.5f} all_free={row['all_free']}"
        )
    print(f"log_log_slope = {report.aggregates['log_log_slope']}")
    _print_checks(report)
    return 0 if report.all_passed() else 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eil",
        description="Construct and verify evasive-set incidence graphs and Furedi graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials_default=1000):
        p.add_argument("--t", type=int, required=True)
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument("--out", default=".")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--force", action="store_true")

    p_construct = sub.add_parser("construct", help="build a graph and verify it")
    p_construct.add_argument("kind", choices=("incidence", "furedi"))
    p_construct.add_argument("--q", type=int, required=True)
    common(p_construct)

    p_verify = sub.add_parser("verify", help="K_{s,m}-freeness of a graph file")
    p_verify.add_argument("path")
    p_verify.add_argument("--s", type=int, required=True)
    p_verify.add_argument("--m", type=int, required=True)
    p_verify.add_argument("--out", default=None)
    p_verify.add_argument("--format", choices=("json", "csv"), default="json")
    p_verify.add_argument("--force", action="store_true")

    p_mc = sub.add_parser("montecarlo", help="per-line statistics of the zero set")
    p_mc.add_argument("--q", type=int, required=True)
    common(p_mc)

    p_sweep = sub.add_parser("sweep", help="mean K_{t,t} counts across several q")
    p_sweep.add_argument("--q", required=True, help="comma-separated list, e.g. 7,11,13")
    common(p_sweep, trials_default=100)
    return parser


def _workers_from(args) -> int:
    if getattr(args, "workers", None) is not None:
        return args.workers
    env = os.environ.get(WORKERS_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ParameterError(f"{WORKERS_ENV} must be an integer, got {env!r}") from exc
    return 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    started = time.monotonic()
    try:
        if args.command == "verify":
            code = cmd_verify(args.path, args.s, args.m, args.force, args.out, args.format)
        else:
            if args.command == "sweep":
                try:
                    q_values = [int(v) for v in str(args.q).split(",") if v != ""]
                except ValueError as exc:
                    raise ParameterError(f"bad q list {args.q!r}") from exc
            else:
                q_values = [args.q]
            cfg = RunConfig(
                subcommand=args.command if args.command != "construct" else args.kind,
                q_values=q_values,
                t=args.t,
                seed=args.seed,
                trials=args.trials,
                out_dir=Path(args.out),
                fmt=args.format,
                workers=_workers_from(args),
                force=args.force,
            )
            if args.command == "construct":
                code = cmd_construct(cfg, args.kind)
            elif args.command == "montecarlo":
                code = cmd_montecarlo(cfg)
            else:
                code = cmd_sweep(cfg)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GraphFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    print(f"elapsed {time.monotonic() - started:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line bench harness: generate instances, run algorithms, compare.

Exit codes: 2 for an algorithm/constraint mismatch, an unknown algorithm, or
a compare invocation with fewer than two configurations; 3 for instance
files that fail to parse. CSV output is byte-identical across reruns of the
same command; wall-clock timing is opt-in because it is inherently noisy.
"""

from __future__ import annotations

import csv
import sys
import time
from pathlib import Path

import click

from . import generators
from .backtracking import bt_run
from .cardinality import adt, greedy, lazy_greedy, threshold_greedy_bv
from .constraints import IndependenceOracle
from .continuous_greedy import curvature_matroid_run
from .exact import MAX_EXACT_N, brute_force_opt, ratio
from .instances import Instance, load_path, save_path
from .knapsack import knapsack_run
from .oracles import InstanceFormatError, ValueOracle, self_check_submodular
from .report import CSV_COLUMNS, RunReport

ALG_IDS = ("greedy", "lazy", "bv-threshold", "adt", "bt", "knap", "curv-cg")
EPS_FREE = {"greedy", "lazy"}
COMPAT = {
    "greedy": {"cardinality"},
    "lazy": {"cardinality"},
    "bv-threshold": {"cardinality"},
    "adt": {"cardinality"},
    "bt": {"psystem", "knapsack"},
    "knap": {"knapsack"},
    "curv-cg": {"matroid"},
}


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_instances(paths) -> list:
    out = []
    for path in paths:
        try:
            out.append(load_path(path))
        except InstanceFormatError as exc:
            _fail(3, str(exc))
    return out


def _check_compat(alg: str, inst: Instance):
    kind = inst.constraint.kind
    ok = kind in COMPAT[alg]
    if alg == "bt" and inst.constraint.knapsack is None:
        ok = False
    if not ok:
        _fail(2, f"algorithm {alg!r} does not apply to {kind!r} instance {inst.id!r}")


def _resolve_opt(inst: Instance, want_exact: bool):
    if inst.opt is not None:
        return inst.opt
    if want_exact:
        if inst.n > MAX_EXACT_N:
            _fail(2, f"--exact needs n <= {MAX_EXACT_N}, instance {inst.id!r} has n={inst.n}")
        return brute_force_opt(inst.fn, inst.constraint).opt
    return None


def run_algorithm(inst: Instance, alg: str, eps: float, seed: int,
                  samples: int) -> RunReport:
    oracle = ValueOracle(inst.fn)
    cons = inst.constraint
    indep_queries = 0
    used_seed = None
    t0 = time.perf_counter()
    if alg == "greedy":
        res = greedy(oracle, cons.k)
    elif alg == "lazy":
        res = lazy_greedy(oracle, cons.k)
    elif alg == "bv-threshold":
        res = threshold_greedy_bv(oracle, cons.k, eps)
    elif alg == "adt":
        res = adt(oracle, cons.k, eps)
    elif alg == "bt":
        indep = IndependenceOracle(cons.intersection()) if cons.matroids else None
        res = bt_run(oracle, indep, cons.knapsack, eps)
        indep_queries = indep.query_count if indep else 0
    elif alg == "knap":
        res = knapsack_run(oracle, cons.knapsack, eps)
    elif alg == "curv-cg":
        res = curvature_matroid_run(oracle, cons.matroids[0], eps, seed, samples)
        indep_queries = res.independence_queries
        used_seed = seed
    else:  # pragma: no cover - click.Choice guards this
        _fail(2, f"unknown algorithm {alg!r}")
    wall_ms = (time.perf_counter() - t0) * 1000.0
    return RunReport(
        instance_id=inst.id,
        alg=alg,
        eps=None if alg in EPS_FREE else eps,
        n=inst.n,
        k_or_rank=cons.k_or_rank(),
        value=res.value,
        selected=res.selected,
        value_queries=oracle.query_count,
        independence_queries=indep_queries,
        wall_ms=wall_ms,
        seed=used_seed,
    )


def _emit(reports, out, timing: bool):
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rep in reports:
            writer.writerow(rep.csv_row(timing))
    finally:
        if out:
            fh.close()


@click.group()
def main():
    """Submodular maximization toolkit."""


@main.command()
@click.option("--family", type=click.Choice(list(generators.FAMILY_TAGS)), required=True)
@click.option("--constraint", "constraint_kind",
              type=click.Choice(["cardinality", "knapsack", "matroid", "psystem"]),
              required=True)
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, default=None, help="Cardinality bound / matroid rank.")
@click.option("--d", type=int, default=1, help="Knapsack dimensions.")
@click.option("--p", type=int, default=2, help="Matroids in the p-system.")
@click.option("--matroid", "matroid_kind",
              type=click.Choice(["uniform", "partition", "graphic"]), default="uniform")
@click.option("--target-kappa", type=float, default=0.5,
              help="Curvature target for the curvature-mix family.")
@click.option("--seed", type=int, default=0)
@click.option("--count", type=int, default=1)
@click.option("--exact", is_flag=True, help="Embed the brute-force optimum.")
@click.option("--out", type=click.Path(file_okay=False), default=".")
def gen(family, constraint_kind, n, k, d, p, matroid_kind, target_kappa, seed,
        count, exact, out):
    """Write deterministic instance files."""
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    for i in range(count):
        inst = generators.make_instance(
            family, constraint_kind, n, k=k, d=d, p=p, matroid_kind=matroid_kind,
            seed=seed + i, target_kappa=target_kappa)
        if exact:
            if n > MAX_EXACT_N:
                _fail(2, f"--exact needs n <= {MAX_EXACT_N}")
            inst.opt = brute_force_opt(inst.fn, inst.constraint).opt
        path = outdir / f"{inst.id}.json"
        save_path(inst, path)
        click.echo(str(path))


_shared_run_options = [
    click.option("--eps", type=float, default=0.2, show_default=True),
    click.option("--seed", type=int, default=0, show_default=True),
    click.option("--samples", type=int, default=64, show_default=True,
                 help="Marginal-estimation samples for curv-cg."),
    click.option("--timing", is_flag=True, help="Fill the wall_ms column."),
    click.option("--exact", is_flag=True,
                 help="Compute the optimum when the file lacks one."),
    click.option("--out", type=click.Path(dir_okay=False), default=None),
]


def _with_options(opts):
    def deco(fn):
        for opt in reversed(opts):
            fn = opt(fn)
        return fn
    return deco


@main.command()
@click.option("--alg", type=click.Choice(ALG_IDS), required=True)
@_with_options(_shared_run_options)
@click.argument("instances", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
def run(alg, eps, seed, samples, timing, exact, out, instances):
    """Run one algorithm over instance files; CSV to stdout or --out."""
    loaded = _load_instances(instances)
    for inst in loaded:
        _check_compat(alg, inst)
    reports = []
    for inst in loaded:
        rep = run_algorithm(inst, alg, eps, seed, samples)
        opt = _resolve_opt(inst, exact)
        if opt is not None:
            rep.opt, rep.ratio = opt, ratio(rep.value, opt)
        reports.append(rep)
    _emit(reports, out, timing)


@main.command()
@click.option("--algs", required=True,
              help="Comma-separated algorithm ids (at least two).")
@_with_options(_shared_run_options)
@click.argument("instances", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
def compare(algs, eps, seed, samples, timing, exact, out, instances):
    """Run several algorithms on the same instances, one CSV."""
    alg_list = [a.strip() for a in algs.split(",") if a.strip()]
    if len(alg_list) < 2:
        _fail(2, "compare needs at least two algorithms")
    for alg in alg_list:
        if alg not in ALG_IDS:
            _fail(2, f"unknown algorithm {alg!r}")
    loaded = _load_instances(instances)
    for inst in loaded:
        for alg in alg_list:
            _check_compat(alg, inst)
    reports = []
    for inst in loaded:
        opt = _resolve_opt(inst, exact)
        for alg in alg_list:
            rep = run_algorithm(inst, alg, eps, seed, samples)
            if opt is not None:
                rep.opt, rep.ratio = opt, ratio(rep.value, opt)
            reports.append(rep)
    _emit(reports, out, timing)


@main.command(name="exact")
@click.option("--timing", is_flag=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.argument("instances", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
def exact_cmd(timing, out, instances):
    """Brute-force optimum per instance (n capped for sanity)."""
    reports = []
    for inst in _load_instances(instances):
        if inst.n > MAX_EXACT_N:
            _fail(2, f"exact needs n <= {MAX_EXACT_N}, got n={inst.n}")
        t0 = time.perf_counter()
        rep = brute_force_opt(inst.fn, inst.constraint)
        wall_ms = (time.perf_counter() - t0) * 1000.0
        reports.append(RunReport(
            instance_id=inst.id, alg="exact", eps=None, n=inst.n,
            k_or_rank=inst.constraint.k_or_rank(), value=rep.opt,
            selected=rep.opt_set, value_queries=rep.checked,
            independence_queries=0, opt=rep.opt, ratio=1.0, wall_ms=wall_ms))
    _emit(reports, out, timing)


@main.command()
@click.option("--trials", type=int, default=200, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.argument("instances", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
def selfcheck(trials, seed, instances):
    """Randomized monotone-submodularity audit of instance functions."""
    failed = False
    for inst in _load_instances(instances):
        rep = self_check_submodular(ValueOracle(inst.fn), trials=trials, seed=seed)
        if rep.ok:
            click.echo(f"{inst.id}: OK ({rep.checks} checks)")
        else:
            failed = True
            click.echo(f"{inst.id}: FAIL {rep.violation}")
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()

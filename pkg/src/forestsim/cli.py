"""Command-line interface: precompute, query, evaluate, benchmark.

Exit codes are stable: 0 success, 2 usage errors, 3 input parse errors,
4 size-limit refusals, 5 solver non-convergence, 6 index/graph fingerprint
mismatch, 7 I/O errors. Every command that emits result files also writes
a ``<file>.manifest.json`` recording arguments, seed, per-phase wall-clock
timings, a peak-memory estimate and the artifact paths; data outputs are
deterministic given (inputs, flags, seed), only timings vary.
"""

import csv
import functools
import json
import signal
import sys
import time
from pathlib import Path

import click

from . import __version__, approx, exact, generators
from . import index as index_mod
from .evaluation import LabeledGraph, ap_report, load_labels
from .exceptions import (ConvergenceError, FingerprintMismatchError,
                         GraphParseError, GraphSizeError)
from .graph import NodeIdMap, load_edge_list

try:
    import resource
except ImportError:  # non-POSIX
    resource = None

EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_SIZE = 4
EXIT_CONVERGENCE = 5
EXIT_FINGERPRINT = 6
EXIT_IO = 7

MEASURES = ("forestsim-ex", "forestsim-ap", "rolesim", "structsim")


def _fail(code, err):
    click.echo(f"error: {err}", err=True)
    sys.exit(code)


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except GraphParseError as err:
            _fail(EXIT_PARSE, err)
        except GraphSizeError as err:
            _fail(EXIT_SIZE, err)
        except ConvergenceError as err:
            _fail(EXIT_CONVERGENCE, err)
        except FingerprintMismatchError as err:
            _fail(EXIT_FINGERPRINT, err)
        except OSError as err:
            _fail(EXIT_IO, err)

    return wrapper


def _peak_rss_bytes():
    if resource is None:
        return None
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024


def _write_manifest(anchor_path, command, arguments, seed, timings, artifacts):
    manifest = {
        "schema": 1,
        "command": command,
        "arguments": arguments,
        "seed": seed,
        "timings_s": {k: round(float(v), 6) for k, v in timings.items()},
        "peak_rss_bytes": _peak_rss_bytes(),
        "artifacts": [str(p) for p in artifacts],
    }
    path = Path(str(anchor_path) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def _sidecar_path(index_path):
    return Path(str(index_path) + ".ids.json")


def _write_sidecar(index_path, id_map):
    path = _sidecar_path(index_path)
    path.write_text(json.dumps({"schema": 1, "external_ids": id_map.external_ids}) + "\n")
    return path


def _load_sidecar(index_path, n):
    path = _sidecar_path(index_path)
    if path.exists():
        data = json.loads(path.read_text())
        ids = data["external_ids"]
        if len(ids) != n:
            raise GraphParseError(f"id sidecar lists {len(ids)} nodes, index has {n}")
        return NodeIdMap(ids)
    return NodeIdMap.identity(n)


class _CellTimeout(Exception):
    pass


class _alarm:
    """Wall-clock cell timeout via SIGALRM; no-op where unavailable."""

    def __init__(self, seconds):
        self.seconds = seconds
        self.active = (seconds is not None and seconds > 0
                       and hasattr(signal, "SIGALRM"))

    def __enter__(self):
        if self.active:
            self._old = signal.signal(signal.SIGALRM, self._raise)
            signal.setitimer(signal.ITIMER_REAL, self.seconds)
        return self

    @staticmethod
    def _raise(signum, frame):
        raise _CellTimeout()

    def __exit__(self, *exc):
        if self.active:
            signal.setitimer(signal.ITIMER_REAL, 0.0)
            signal.signal(signal.SIGALRM, self._old)
        return False


@click.group()
@click.version_option(version=__version__)
def main():
    """Role-similarity toolkit: index a graph once, answer top-k queries in O(k).

    Exit codes: 0 ok, 2 usage, 3 parse, 4 size limit, 5 solver convergence,
    6 fingerprint mismatch, 7 I/O.
    """


@main.command()
@click.argument("graph_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["exact", "approx"]), default="exact",
              show_default=True)
@click.option("--epsilon", type=float, default=0.1, show_default=True,
              help="Relative-error target of the approximate diagonal.")
@click.option("--jl-constant", type=float, default=4.0, show_default=True,
              help="Sketch-dimension multiplier.")
@click.option("--solver-tol", type=float, default=1e-8, show_default=True)
@click.option("--solver-max-iter", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--dense-limit", type=int, default=exact.DENSE_NODE_LIMIT,
              show_default=True, help="Node ceiling for --method exact.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@guarded
def precompute(graph_path, method, epsilon, jl_constant, solver_tol,
               solver_max_iter, seed, dense_limit, out_path):
    """Compute per-node diagonal values for GRAPH_PATH and write an index."""
    timings = {}
    t0 = time.perf_counter()
    graph, id_map = load_edge_list(Path(graph_path))
    timings["load"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if method == "exact":
        diag = exact.forest_diag(graph, dense_limit=dense_limit)
    else:
        cfg = approx.ApproxConfig(epsilon=epsilon, jl_constant=jl_constant,
                                  solver_rel_tol=solver_tol,
                                  max_iterations=solver_max_iter, seed=seed)
        diag = approx.approx_forest_diag(graph, cfg)
    timings["diagonal"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if method == "exact":
        idx = index_mod.build_index(graph, diag, method=index_mod.METHOD_EXACT)
    else:
        idx = index_mod.build_index(graph, diag, method=index_mod.METHOD_APPROX,
                                    epsilon=epsilon, seed=seed)
    index_mod.save_index(idx, out_path)
    sidecar = _write_sidecar(out_path, id_map)
    timings["sort_and_write"] = time.perf_counter() - t0
    timings["total"] = sum(timings.values())

    _write_manifest(out_path, "precompute",
                    {"graph": str(graph_path), "method": method, "epsilon": epsilon,
                     "jl_constant": jl_constant, "solver_tol": solver_tol,
                     "solver_max_iter": solver_max_iter, "dense_limit": dense_limit,
                     "out": str(out_path)},
                    seed, timings, [out_path, sidecar])
    click.echo(f"indexed {graph.n} nodes / {graph.m} edges ({method}) -> {out_path}")


@main.command()
@click.argument("index_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--node", "node_token", required=True, help="External node id.")
@click.option("--k", type=int, required=True)
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of text.")
@click.option("--verify-graph", type=click.Path(exists=True, dir_okay=False),
              help="Check the index fingerprint against this edge list.")
@guarded
def topk(index_path, node_token, k, as_json, verify_graph):
    """Answer one top-k query against a precomputed index."""
    idx = index_mod.load_index(index_path)
    id_map = _load_sidecar(index_path, idx.n)
    if verify_graph:
        graph, _ = load_edge_list(Path(verify_graph))
        index_mod.check_fingerprint(idx, graph)
    try:
        u = id_map.to_internal(node_token)
    except KeyError as err:
        _fail(EXIT_USAGE, err)
    try:
        result = index_mod.top_k_search(idx, u, k)
    except ValueError as err:
        _fail(EXIT_USAGE, err)
    if as_json:
        payload = {
            "schema": 1,
            "query": id_map.to_external(result.query),
            "k": k,
            "results": [{"node": id_map.to_external(v), "score": s}
                        for v, s in result.pairs()],
        }
        click.echo(json.dumps(payload, indent=2))
    else:
        width = max(len(id_map.to_external(v)) for v in result.nodes)
        for v, s in result.pairs():
            click.echo(f"{id_map.to_external(v):>{width}}  {s:.12g}")


@main.command("topk-all")
@click.argument("index_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--k", type=int, required=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@guarded
def topk_all_cmd(index_path, k, out_path):
    """Write the top-k list of every node, one line per node."""
    if k < 1:
        _fail(EXIT_USAGE, f"k must be at least 1, got {k}")
    idx = index_mod.load_index(index_path)
    id_map = _load_sidecar(index_path, idx.n)
    t0 = time.perf_counter()
    results = index_mod.top_k_all(idx, k)
    query_s = time.perf_counter() - t0
    max_comparisons = max((r.comparisons for r in results), default=0)

    t0 = time.perf_counter()
    with open(out_path, "w") as fh:
        for r in results:
            row = " ".join(f"{id_map.to_external(v)}={s:.12g}" for v, s in r.pairs())
            fh.write(f"{id_map.to_external(r.query)}: {row}\n")
    write_s = time.perf_counter() - t0

    _write_manifest(out_path, "topk-all",
                    {"index": str(index_path), "k": k, "out": str(out_path),
                     "max_comparisons_per_query": max_comparisons},
                    None, {"query": query_s, "write": write_s,
                           "total": query_s + write_s},
                    [out_path])
    click.echo(f"wrote {len(results)} rows to {out_path} "
               f"(max {max_comparisons} comparisons/query)")


def _fit_measure(measure, graph, epsilon, seed, levels):
    """Fit one named measure; returns (top_k_fn, precompute_seconds)."""
    from .estimators import ForestSim, RoleSim, StructSim

    t0 = time.perf_counter()
    if measure == "forestsim-ex":
        est = ForestSim(method="exact").fit(graph)
    elif measure == "forestsim-ap":
        est = ForestSim(method="approx", epsilon=epsilon, random_state=seed).fit(graph)
    elif measure == "rolesim":
        est = RoleSim().fit(graph)
    elif measure == "structsim":
        est = StructSim(levels=levels).fit(graph)
    else:
        raise click.UsageError(f"unknown measure {measure!r}; choose from {MEASURES}")
    return est, time.perf_counter() - t0


@main.command("eval")
@click.argument("graph_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("labels_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--measures", default="forestsim-ex,forestsim-ap", show_default=True,
              help="Comma-separated subset of: " + ", ".join(MEASURES))
@click.option("--kmax", type=int, default=10, show_default=True)
@click.option("--epsilon", type=float, default=0.1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--levels", type=int, default=3, show_default=True)
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@guarded
def eval_cmd(graph_path, labels_path, measures, kmax, epsilon, seed, levels, out_dir):
    """Average Precision@K of the chosen measures on a labeled graph."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    graph, id_map = load_edge_list(Path(graph_path))
    labels, names = load_labels(Path(labels_path), id_map)
    labeled = LabeledGraph(graph, labels, names)
    ks = list(range(1, min(kmax, graph.n - 1) + 1))

    reports = {}
    timings = {}
    artifacts = []
    for measure in [m.strip() for m in measures.split(",") if m.strip()]:
        try:
            est, fit_s = _fit_measure(measure, graph, epsilon, seed, levels)
        except GraphSizeError as err:
            click.echo(f"skipping {measure}: {err}", err=True)
            continue
        t0 = time.perf_counter()
        report = ap_report(measure, labeled, lambda u, k: est.top_k(u, k).nodes, ks)
        timings[f"{measure}_fit"] = fit_s
        timings[f"{measure}_eval"] = time.perf_counter() - t0
        reports[measure] = report
        for suffix, text in (("json", report.to_json() + "\n"),
                             ("csv", report.to_csv()), ("txt", report.to_text())):
            path = out_dir / f"{measure}.ap.{suffix}"
            path.write_text(text)
            artifacts.append(path)

    if reports:
        comparison = out_dir / "comparison.txt"
        cols = list(reports)
        lines = ["K  " + "  ".join(f"{c:>14}" for c in cols)]
        for i, k in enumerate(ks):
            row = [f"{reports[c].entries[i].average_precision:>14.4f}" for c in cols]
            lines.append(f"{k:<3}" + "  ".join(row))
        comparison.write_text("\n".join(lines) + "\n")
        artifacts.append(comparison)
        click.echo(comparison.read_text())

    timings["total"] = sum(timings.values())
    _write_manifest(out_dir / "eval", "eval",
                    {"graph": str(graph_path), "labels": str(labels_path),
                     "measures": measures, "kmax": kmax, "epsilon": epsilon,
                     "levels": levels, "out_dir": str(out_dir)},
                    seed, timings, artifacts)


def _warm_solver():
    from .graph import Graph

    tiny = Graph(2, [(0, 1)])
    approx.solve_shifted_laplacian(tiny, [1.0, 0.0])


def _bench_cell(measure, graph, k, epsilon, seed):
    """Run one (measure, graph) cell; returns (precompute_s, query_s, extra)."""
    est, pre_s = _fit_measure(measure, graph, epsilon, seed, levels=3)
    k_eff = min(k, graph.n - 1)
    t0 = time.perf_counter()
    results = est.top_k_all(k_eff)
    query_s = time.perf_counter() - t0
    max_comp = max((r.comparisons for r in results), default=0)
    return pre_s, query_s, max_comp


@main.command()
@click.option("--sizes", default="1000,10000", show_default=True,
              help="Comma-separated node counts.")
@click.option("--measures", default="forestsim-ap", show_default=True)
@click.option("--generator", type=click.Choice(["regular", "gnm"]), default="regular",
              show_default=True)
@click.option("--degree", type=int, default=4, show_default=True,
              help="Degree (regular) or average degree (gnm).")
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--epsilon", type=float, default=0.1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--timeout", type=float, default=None,
              help="Per-cell wall-clock budget in seconds; timed-out cells read ---.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@guarded
def bench(sizes, measures, generator, degree, k, epsilon, seed, timeout, out_path):
    """Time precomputation and batch queries on synthetic graphs."""
    size_list = [int(s) for s in sizes.split(",") if s.strip()]
    measure_list = [m.strip() for m in measures.split(",") if m.strip()]
    bench_started = time.perf_counter()
    _warm_solver()  # JIT compile/load outside the timed cells
    rows = []
    for n in size_list:
        if generator == "regular":
            graph = generators.random_regular_graph(n, degree, seed=seed)
        else:
            graph = generators.gnm_random_graph(n, n * degree // 2, seed=seed)
        for measure in measure_list:
            try:
                with _alarm(timeout):
                    pre_s, query_s, max_comp = _bench_cell(measure, graph, k,
                                                           epsilon, seed)
                cell = {"precompute_s": f"{pre_s:.3f}", "query_s": f"{query_s:.3f}",
                        "total_s": f"{pre_s + query_s:.3f}",
                        "max_comparisons": max_comp}
            except (_CellTimeout, GraphSizeError):
                cell = {"precompute_s": "---", "query_s": "---", "total_s": "---",
                        "max_comparisons": "---"}
            rows.append({"measure": measure, "n": graph.n, "m": graph.m, **cell})
            click.echo(f"{measure:>14} n={graph.n:>8} m={graph.m:>9} "
                       f"pre={cell['precompute_s']:>9} query={cell['query_s']:>9}")

    with open(out_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["measure", "n", "m", "precompute_s",
                                                "query_s", "total_s",
                                                "max_comparisons"])
        writer.writeheader()
        writer.writerows(rows)
    _write_manifest(out_path, "bench",
                    {"sizes": sizes, "measures": measures, "generator": generator,
                     "degree": degree, "k": k, "epsilon": epsilon,
                     "timeout": timeout, "out": str(out_path)},
                    seed, {"total": time.perf_counter() - bench_started}, [out_path])
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()

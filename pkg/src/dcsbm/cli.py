"""Command-line surface.

Subcommands: generate (sample a model to disk), detect (run the spectral
pipeline on an edge list), baseline (comparison methods), verify
(concentration and random-walk diagnostics as CSV), experiment (sweeps
over n / seed / method, deterministic CSV), alignment (perturbation lemma
report for two dumped matrices).

Exit codes: 0 success, 2 usage or model-spec error, 3 I/O error,
4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import baselines, detect, graphio, metrics, presets, spectra
from .eigen import ConvergenceError, eigs_topk
from .model import ModelError, sample_graph, validate
from .spectra import SymMatrix

CSV_SCHEMA = "# dcsbm-csv v1"


def _parse_seeds(text: str) -> list[int]:
    if ":" in text:
        lo, _, hi = text.partition(":")
        return list(range(int(lo), int(hi)))
    return [int(tok) for tok in text.split(",") if tok]


def _load_params(args):
    if getattr(args, "model", None):
        return graphio.read_model_file(args.model)
    if getattr(args, "preset", None):
        kwargs = {}
        if getattr(args, "ratio", None) is not None:
            kwargs["ratio"] = args.ratio
        return presets.make_preset(args.preset, args.n, **kwargs)
    raise ModelError("need --model or --preset")


def _load_graph(args):
    return graphio.read_edge_list(args.graph, n=args.n, one_indexed=args.one_indexed)


def _detect_config(args) -> detect.DetectConfig:
    regime = (
        detect.Regime.SUPER_LOG if args.regime == "superlog" else detect.Regime.LOG_ORDER
    )
    return detect.DetectConfig(
        regime=regime,
        f_multiplier=args.f_mult,
        seed=args.seed,
        leftover_policy="nearest" if args.leftover == "nearest" else "unassigned",
        degree_floor=getattr(args, "degree_floor", None),
    )


def cmd_generate(args) -> int:
    params = _load_params(args)
    report = validate(params)
    if not report.valid:
        for v in report.violations:
            print(f"invalid model: {v}", file=sys.stderr)
        return 2
    graph = sample_graph(params, args.seed)
    graphio.write_edge_list(graph, args.out_graph)
    if args.out_labels:
        graphio.write_labels(params.sigma, args.out_labels)
    q = np.percentile(graph.degrees, [0, 25, 50, 75, 100]) if graph.n else []
    print(f"n={graph.n} edges={graph.num_edges} "
          f"degree_quantiles={[float(x) for x in q]}")
    for a in report.advisories:
        print(f"advisory: {a}")
    return 0


def cmd_detect(args) -> int:
    graph = _load_graph(args)
    config = _detect_config(args)
    if args.known_L is not None:
        result = detect.detect_with_known_L(graph, args.known_L, args.alpha_min, config)
    else:
        result = detect.detect_communities(graph, config)
    if args.out:
        graphio.write_labels(result.labels, args.out)
    info = result.info
    sizes = ",".join(str(int(s)) for s in result.cluster_sizes())
    print(f"L_hat={info.l_hat} f={info.f:.6g} epsilon={info.epsilon:.6g} "
          f"C={result.C} sizes=[{sizes}]")
    for w in info.warnings:
        print(f"warning: {w}")
    if args.truth:
        truth = graphio.read_labels(args.truth, n=graph.n)
        frac, _ = metrics.misclassification(result, truth)
        print(f"misclassification={frac:.6g}")
    return 0


def _baseline_operator(graph, args) -> SymMatrix:
    if args.operator == "hhat":
        return spectra.normalized_adjacency(graph)
    if args.operator == "hinflated":
        return spectra.inflated_normalized_adjacency(graph, args.floor)
    if args.operator == "laplacian":
        return spectra.laplacian(graph, args.tau)
    return spectra.adjacency(graph)


def cmd_baseline(args) -> int:
    graph = _load_graph(args)
    if args.method == "adjacency":
        result = baselines.adjacency_spectral(graph, args.K, seed=args.seed)
    elif args.method == "laplacian":
        result = baselines.laplacian_spectral(
            graph, args.K, tau=args.tau, seed=args.seed,
            n_vectors=args.lap_n_vectors, project=not args.no_project,
        )
    elif args.method == "score":
        result = baselines.score_cluster(graph, args.K, seed=args.seed)
    elif args.method == "frobenius":
        op = _baseline_operator(graph, args)
        result = baselines.frobenius_threshold(op, args.eig_index)
    else:
        raise ModelError(f"unknown method {args.method}")
    if args.out:
        graphio.write_labels(result.labels, args.out)
    if args.dump_eigvecs:
        op = _baseline_operator(graph, args)
        k = max(args.eig_index, 2)  # two columns so scatter plots always work
        eigsys = eigs_topk(op, min(k, graph.n))
        graphio.write_eigvec_csv(args.dump_eigvecs, eigsys.vectors)
    sizes = ",".join(str(int(s)) for s in result.cluster_sizes())
    print(f"method={args.method} C={result.C} sizes=[{sizes}]")
    if result.info and result.info.warnings:
        for w in result.info.warnings:
            print(f"warning: {w}")
    if args.truth:
        truth = graphio.read_labels(args.truth, n=graph.n)
        frac, _ = metrics.misclassification(result, truth)
        print(f"misclassification={frac:.6g}")
    return 0


def cmd_verify(args) -> int:
    params = _load_params(args)
    rows = []
    for seed in _parse_seeds(args.seeds):
        graph = sample_graph(params, seed)
        rep = metrics.concentration_report(graph, params)
        rw = metrics.random_walk_checks(graph)
        scaled = rep.scaled
        rows.append(
            f"{params.n},{seed},{rep.rho_hat_h!r},{rep.rho_h_eh!r},{rep.rho_eh_p!r},"
            f"{rep.rho_w!r},{rep.gap_p!r},{rep.d_bar!r},"
            f"{scaled['rho_w_dbar']!r},{scaled['rho_w_over_gap']!r},"
            f"{rw.identity_residual!r},{rw.lambda_max!r},{rw.lower_bound!r},"
            f"{rw.upper_bound!r},{int(rw.all_ok)}"
        )
    header = (
        "n,seed,rho_hat_h,rho_h_eh,rho_eh_p,rho_w,gap_p,d_bar,rho_w_dbar,"
        "rho_w_over_gap,rw_residual,rw_lambda_max,rw_lower,rw_upper,rw_ok"
    )
    _emit_csv(args.out, "verify", header, rows)
    return 0


def _emit_csv(path, schema: str, header: str, rows: list[str]) -> None:
    text = f"{CSV_SCHEMA} {schema}\n{header}\n" + "".join(r + "\n" for r in rows)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_method(method: str, graph, truth, params, args):
    config = _detect_config(args)
    if method == "detect":
        res = detect.detect_communities(graph, config)
        frac, _ = metrics.misclassification(res, truth)
        info = res.info
        return frac, info.l_hat, info.epsilon, res.C
    if method == "laplacian":
        res = baselines.laplacian_spectral(
            graph, args.K, tau=args.tau, seed=args.seed,
            n_vectors=getattr(args, "lap_n_vectors", None),
            project=not getattr(args, "no_project", False),
        )
    elif method == "adjacency":
        res = baselines.adjacency_spectral(graph, args.K, seed=args.seed)
    elif method == "score":
        res = baselines.score_cluster(graph, args.K, seed=args.seed)
    elif method == "frobenius":
        res = baselines.frobenius_threshold(
            spectra.normalized_adjacency(graph), args.eig_index
        )
    else:
        raise ModelError(f"unknown experiment method {method}")
    frac, _ = metrics.misclassification(res, truth)
    return frac, "", "", res.C


def cmd_experiment(args) -> int:
    ns = [int(tok) for tok in args.n_list.split(",") if tok]
    seeds = _parse_seeds(args.seeds)
    methods = [tok for tok in args.methods.split(",") if tok]
    rows = []
    for n in sorted(ns):
        base_args = argparse.Namespace(**vars(args))
        base_args.n = n
        params = _load_params(base_args)
        for seed in seeds:
            graph = None
            for method in methods:
                if method.endswith("-pop-embed"):
                    _population_embed(method, params, args)
                    rows.append(f"{n},{seed},{method},,,,,,,")
                    continue
                if graph is None:
                    graph = sample_graph(params, seed)
                start = time.perf_counter()
                frac, l_hat, eps, c = _run_method(method, graph, params.sigma, params, args)
                elapsed = time.perf_counter() - start
                # Timing is opt-in so that reruns stay byte-identical.
                stamp = f"{elapsed:.3f}" if args.with_timing else ""
                extra = ""
                if args.with_concentration:
                    rep = metrics.concentration_report(graph, params)
                    extra = f"{rep.scaled['rho_w_dbar']!r},{rep.scaled['rho_w_over_gap']!r}"
                rows.append(
                    f"{n},{seed},{method},{frac!r},{l_hat},{eps},{c},{stamp},{extra}"
                )
    header = "n,seed,method,error,l_hat,epsilon,C,runtime_s,rho_w_dbar,rho_w_over_gap"
    _emit_csv(args.out, "experiment", header, rows)
    return 0


def _population_embed(method: str, params, args) -> None:
    """Write population-operator embedding CSVs for the figure scripts."""
    import os

    out_dir = args.out_dir or "."
    os.makedirs(out_dir, exist_ok=True)
    if method.startswith("hhat"):
        op = spectra.population_matrix(params)
        name = "hhat_pop"
    else:
        base = spectra.expected_laplacian(params).toarray()
        op = SymMatrix(np.eye(params.n) - base, sparse=False)
        name = "laplacian_pop"
    eigsys = eigs_topk(op, min(2, params.n))
    graphio.write_eigvec_csv(f"{out_dir}/{name}_eigvecs.csv", eigsys.vectors)
    graphio.write_labels(params.sigma, f"{out_dir}/{name}_labels.txt")


def cmd_alignment(args) -> int:
    a = SymMatrix.load(args.matrix_a)
    d = SymMatrix.load(args.matrix_delta)
    from .eigen import alignment_report

    rep = alignment_report(a, d)
    print(f"rho_delta={rep.rho_delta!r} gap={rep.gap!r} bound={rep.bound!r} "
          f"hypothesis_ok={rep.hypothesis_ok}")
    print(f"max_value_shift={rep.value_shifts.max()!r} weyl_ok={bool(rep.weyl_ok.all())}")
    print(f"min_dot={rep.dots.min()!r} dots_ok={bool(rep.dots_ok.all())} "
          f"dims_ok={bool(rep.dims_ok.all())}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="dcsbm", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def add_io(p):
        p.add_argument("--graph", required=True)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--one-indexed", action="store_true")
        p.add_argument("--truth", default=None)
        p.add_argument("--out", default=None)

    def add_model(p):
        p.add_argument("--model", default=None)
        p.add_argument("--preset", default=None, choices=presets.PRESET_NAMES)
        p.add_argument("--n", type=int, default=2000)
        p.add_argument("--ratio", type=float, default=None)

    g = sub.add_parser("generate", help="sample a model to an edge list")
    add_model(g)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out-graph", required=True)
    g.add_argument("--out-labels", default=None)
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("detect", help="spectral detection on an edge list")
    add_io(d)
    d.add_argument("--regime", choices=["superlog", "logorder"], default="superlog")
    d.add_argument("--f-mult", type=float, default=1.0)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--known-L", type=int, default=None)
    d.add_argument("--alpha-min", type=float, default=0.5)
    d.add_argument("--leftover", choices=["unassigned", "nearest"], default="unassigned")
    d.add_argument("--degree-floor", type=float, default=None,
                   help="inflate degree products below this floor (sparse graphs)")
    d.set_defaults(func=cmd_detect)

    b = sub.add_parser("baseline", help="comparison clustering methods")
    add_io(b)
    b.add_argument("--method", required=True,
                   choices=["adjacency", "laplacian", "score", "frobenius"])
    b.add_argument("--K", type=int, default=2)
    b.add_argument("--tau", type=float, default=0.0)
    b.add_argument("--operator", choices=["hhat", "hinflated", "laplacian", "adjacency"],
                   default="hhat")
    b.add_argument("--floor", type=float, default=200.0)
    b.add_argument("--eig-index", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--lap-n-vectors", type=int, default=None,
                   help="embedding dimension for the laplacian method (default K)")
    b.add_argument("--no-project", action="store_true",
                   help="cluster raw laplacian rows instead of sphere projections")
    b.add_argument("--dump-eigvecs", default=None)
    b.set_defaults(func=cmd_baseline)

    v = sub.add_parser("verify", help="concentration and random-walk CSV")
    add_model(v)
    v.add_argument("--seeds", default="0:5")
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="sweep (n, seed, method) to CSV")
    add_model(e)
    e.add_argument("--n-list", required=True)
    e.add_argument("--seeds", default="0:5")
    e.add_argument("--methods", default="detect")
    e.add_argument("--out", default=None)
    e.add_argument("--out-dir", default=None)
    e.add_argument("--with-concentration", action="store_true")
    e.add_argument("--with-timing", action="store_true")
    e.add_argument("--K", type=int, default=2)
    e.add_argument("--tau", type=float, default=0.0)
    e.add_argument("--lap-n-vectors", type=int, default=None)
    e.add_argument("--no-project", action="store_true")
    e.add_argument("--eig-index", type=int, default=1)
    e.add_argument("--regime", choices=["superlog", "logorder"], default="superlog")
    e.add_argument("--f-mult", type=float, default=1.0)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--leftover", choices=["unassigned", "nearest"], default="unassigned")
    e.set_defaults(func=cmd_experiment)

    al = sub.add_parser("alignment", help="alignment lemma report for two matrices")
    al.add_argument("--matrix-a", required=True)
    al.add_argument("--matrix-delta", required=True)
    al.set_defaults(func=cmd_alignment)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ModelError, graphio.GraphFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

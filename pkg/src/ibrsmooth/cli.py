"""Command-line interface.

Subcommands: fit, predict, forward, bench (wendelberger | ozone), surface.
Numeric GCV search over a calibrated gaussian kernel smoother is the
default pipeline; flags mirror the library's config dataclasses.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .benchmarks import (
    load_ozone,
    run_ozone_splits,
    run_wendelberger,
)
from .crossval import CvPlan
from .data import load_csv, split_response, write_predictions
from .fitting import SmootherConfig, fit
from .forward import forward_select
from .model_io import load_model, save_model
from .report import format_report, make_report
from .selection import CRITERIA, CV_LOSSES, SelectionPlan
from .surface import write_surface

__all__ = ["main", "build_parser"]


def _add_smoother_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--smoother", choices=("k", "tps"), default="k",
                   help="base smoother family: product kernel (k) or thin plate spline")
    p.add_argument("--kernel", choices=("g", "t", "q", "e", "u"), default="g",
                   help="kernel: gaussian, triangle, quartic, epanechnikov, uniform")
    p.add_argument("--df", type=float, default=1.1,
                   help="per-variable df target (kernel), null-dim multiplier (tps)")
    p.add_argument("--dftotal", action="store_true",
                   help="treat --df as the total trace of the kernel smoother")


def _add_selection_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--criterion", choices=CRITERIA + CV_LOSSES, default="gcv",
                   help="model-choice criterion; rmse/map switch to cross-validation")
    p.add_argument("--kmin", type=float, default=1.0)
    p.add_argument("--kmax", type=float, default=1e5)
    p.add_argument("--exhaustive", action="store_true",
                   help="sweep integer k instead of the continuous search")
    p.add_argument("--dfmaxi", type=float, default=None,
                   help="reject k whose effective df exceeds this (default 2n/3)")
    p.add_argument("--iter", type=int, default=None, dest="iterations",
                   help="skip selection and run exactly this many iterations")
    p.add_argument("--cv-kfold", type=int, default=None,
                   help="use K-fold cross-validation with this many folds")
    p.add_argument("--cv-ntest", type=int, default=None,
                   help="test-set size for data splitting (default n // 10)")
    p.add_argument("--cv-ntrain", type=int, default=None,
                   help="training-set size (alternative to --cv-ntest)")
    p.add_argument("--cv-npermut", type=int, default=20,
                   help="number of random train/test splits")
    p.add_argument("--cv-type", choices=("random", "consecutive", "interleaved", "timeseries"),
                   default="random")
    p.add_argument("--seed", type=int, default=0)


def _smoother_config(args: argparse.Namespace) -> SmootherConfig:
    family = "tps" if args.smoother == "tps" else "kernel"
    return SmootherConfig(
        family=family, kernel=args.kernel, df=args.df, dftotal=args.dftotal
    )


def _selection_plan(args: argparse.Namespace) -> SelectionPlan:
    cv = None
    if args.criterion in CV_LOSSES:
        cv = CvPlan(
            kfold=args.cv_kfold if args.cv_kfold is not None else False,
            ntest=args.cv_ntest,
            ntrain=args.cv_ntrain,
            npermut=args.cv_npermut,
            type=args.cv_type,
            seed=args.seed,
            loss=args.criterion,
        )
    if args.iterations is not None:
        return SelectionPlan(
            criterion=args.criterion, mode="fixed", fixed_k=float(args.iterations),
            kmin=args.kmin, kmax=args.kmax, dfmaxi=args.dfmaxi, cv=cv,
        )
    return SelectionPlan(
        criterion=args.criterion,
        mode="exhaustive" if args.exhaustive else "numeric",
        kmin=args.kmin,
        kmax=args.kmax,
        dfmaxi=args.dfmaxi,
        cv=cv,
    )


def cmd_fit(args: argparse.Namespace) -> int:
    data = load_csv(args.data)
    y, design, response = split_response(data, args.response)
    result = fit(design, y, smoother=_smoother_config(args), plan=_selection_plan(args))
    print(format_report(make_report(result)))
    if args.out:
        save_model(result, args.out, response=response)
        print(f"\nModel written to {args.out}")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    model = load_model(args.model)
    data = load_csv(args.data)
    if data.names == model.names:
        x = data.values
    else:
        missing = [n for n in model.names if n not in data.names]
        if missing:
            raise ValueError(
                f"prediction input lacks the training columns {missing}"
            )
        cols = [data.names.index(n) for n in model.names]
        x = data.values[:, cols]
    preds = model.predict(x)
    write_predictions(args.out, preds)
    print(f"{preds.size} predictions written to {args.out}")
    return 0


def cmd_forward(args: argparse.Namespace) -> int:
    data = load_csv(args.data)
    y, design, _ = split_response(data, args.response)
    result = forward_select(
        design, y,
        smoother=_smoother_config(args),
        plan=_selection_plan(args),
        varcrit=args.varcrit,
    )
    order_1based = ",".join(str(j + 1) for j in result.order)
    print(f"Selected columns (in order): {order_1based}")
    print(f"Selected names: {', '.join(result.selected_names)}")
    print(f"Criterion ({result.varcrit}) per stage: "
          + ", ".join(f"{v:.6g}" for v in result.best_values))
    if args.out:
        _write_forward_csv(result, args.out)
        print(f"Score matrix written to {args.out}")
    return 0


def _write_forward_csv(result, path: str) -> None:
    import csv

    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["stage"] + list(result.names))
        for s, row in enumerate(result.scores, start=1):
            cells = ["" if not np.isfinite(v) else repr(float(v)) for v in row]
            writer.writerow([s] + cells)
        writer.writerow(["order"] + [",".join(str(j + 1) for j in result.order)])


def cmd_bench_wendelberger(args: argparse.Namespace) -> int:
    smoother = SmootherConfig(family="tps", df=args.df)
    plan = _selection_plan(args)
    seeds = range(args.seed, args.seed + args.repeats)
    rows = []
    for seed in seeds:
        run = run_wendelberger(
            seed=seed, noise=args.noise, n_axis=args.n_axis,
            smoother=smoother, plan=plan,
        )
        rows.append(run)
        print(
            f"seed {seed:3d}: k = {run.fit.k_rounded:5d}  "
            f"initial df = {run.initial_df:.4g}  final df = {run.final_df:.4g}  "
            f"{run.criterion} = {run.criterion_value:.4g}  mae = {run.mae:.6f}"
        )
    if len(rows) > 1:
        maes = np.asarray([r.mae for r in rows])
        ks = np.asarray([r.k for r in rows])
        print(
            f"over {len(rows)} seeds: k in [{ks.min():.0f}, {ks.max():.0f}], "
            f"mae mean {maes.mean():.6f} (min {maes.min():.6f}, max {maes.max():.6f})"
        )
    if args.surface_out and rows:
        _write_benchmark_surface(rows[0], args.surface_out)
    return 0


def _write_benchmark_surface(run, path: str) -> None:
    from .benchmarks import interior_grid
    from .data import Dataset

    grid = interior_grid()
    preds = run.fit.predict(grid)
    data = Dataset(
        names=["x1", "x2", "prediction"],
        values=np.column_stack([grid, preds]),
    )
    write_surface(data, path)
    print(f"Surface written to {path}")


def cmd_bench_ozone(args: argparse.Namespace) -> int:
    data = load_ozone(args.data)
    y = data.values[:, 0]
    x = data.values[:, 1:]
    smoother = _smoother_config(args)
    plan = _selection_plan(args)
    result = fit(x, y, smoother=smoother, plan=plan, names=list(data.names[1:]))
    print("Full-data fit:")
    print(format_report(make_report(result)))
    if args.repeats > 0:
        splits = run_ozone_splits(
            data, repeats=args.repeats, seed=args.seed, smoother=smoother, plan=plan
        )
        print(
            f"\n{args.repeats} random {splits.ntrain}/{splits.ntest} splits: "
            f"pooled test MSE = {splits.pooled_mse:.4f}"
        )
    return 0


def cmd_surface(args: argparse.Namespace) -> int:
    data = load_csv(args.infile)
    surface = write_surface(data, args.out, args.matrix_out)
    print(
        f"{surface.xs.size} x {surface.ys.size} surface written to {args.out}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ibrsmooth",
        description="Multivariate regression by iteratively bias-reduced smoothing",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit a model and optionally save it")
    p_fit.add_argument("--data", required=True, help="CSV with header row")
    p_fit.add_argument("--response", default="1",
                       help="response column name or 1-based index (default first)")
    _add_smoother_flags(p_fit)
    _add_selection_flags(p_fit)
    p_fit.add_argument("--out", default=None, help="write the fitted model here")
    p_fit.set_defaults(func=cmd_fit)

    p_pred = sub.add_parser("predict", help="apply a saved model to new rows")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--data", required=True)
    p_pred.add_argument("--out", required=True)
    p_pred.set_defaults(func=cmd_predict)

    p_fwd = sub.add_parser("forward", help="greedy forward covariate selection")
    p_fwd.add_argument("--data", required=True)
    p_fwd.add_argument("--response", default="1")
    p_fwd.add_argument("--varcrit", choices=CRITERIA, default=None,
                       help="criterion scoring each candidate (default: --criterion)")
    _add_smoother_flags(p_fwd)
    _add_selection_flags(p_fwd)
    p_fwd.add_argument("--out", default=None, help="write the stage/score matrix CSV here")
    p_fwd.set_defaults(func=cmd_forward)

    p_bench = sub.add_parser("bench", help="reference experiments")
    bench_sub = p_bench.add_subparsers(dest="benchmark", required=True)

    p_wend = bench_sub.add_parser("wendelberger", help="synthetic surface benchmark")
    p_wend.add_argument("--noise", type=float, default=0.2,
                        help="noise-to-signal variance ratio")
    p_wend.add_argument("--n-axis", type=int, default=10,
                        help="observations per axis of the training grid")
    p_wend.add_argument("--repeats", type=int, default=1,
                        help="number of consecutive seeds to run")
    p_wend.add_argument("--df", type=float, default=1.1)
    p_wend.add_argument("--surface-out", default=None,
                        help="also render the first fitted surface to this SVG")
    _add_selection_flags(p_wend)
    p_wend.set_defaults(func=cmd_bench_wendelberger)

    p_oz = bench_sub.add_parser("ozone", help="LA ozone benchmark (needs the dataset)")
    p_oz.add_argument("--data", default="data/ozone.csv",
                      help="converted ozone CSV (see scripts/fetch_ozone.py)")
    p_oz.add_argument("--repeats", type=int, default=50,
                      help="random train/test splits to evaluate (0 to skip)")
    _add_smoother_flags(p_oz)
    _add_selection_flags(p_oz)
    p_oz.set_defaults(func=cmd_bench_ozone)

    p_surf = sub.add_parser("surface", help="render gridded predictions as SVG")
    p_surf.add_argument("--in", dest="infile", required=True,
                        help="CSV with x, y, value columns on a complete grid")
    p_surf.add_argument("--out", required=True, help="SVG output path")
    p_surf.add_argument("--matrix-out", default=None,
                        help="value-matrix text output (default: SVG path with .txt)")
    p_surf.set_defaults(func=cmd_surface)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

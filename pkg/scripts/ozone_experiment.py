#!/usr/bin/env python3
"""LA ozone benchmark: full-data fit, split evaluation, forward selection.

Needs data/ozone.csv (see scripts/fetch_ozone.py). Mirrors the ozone runs
of the test suite but prints everything, including the numeric-vs-integer
search agreement and the greedy covariate walk.
"""

import argparse

import numpy as np

from ibrsmooth import (
    SelectionPlan,
    SmootherConfig,
    build_smoother,
    fit,
    format_report,
    forward_select,
    make_report,
    search_k_exhaustive,
    search_k_numeric,
)
from ibrsmooth.benchmarks import load_ozone, run_ozone_splits
from ibrsmooth.smoothers import DesignMatrix


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", default="data/ozone.csv")
    parser.add_argument("--repeats", type=int, default=50)
    parser.add_argument("--df", type=float, default=1.1)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    try:
        data = load_ozone(args.data)
    except FileNotFoundError as exc:
        raise SystemExit(f"error: {exc}") from None
    y = data.values[:, 0]
    x = data.values[:, 1:]
    names = list(data.names[1:])
    config = SmootherConfig(df=args.df)

    result = fit(x, y, smoother=config, names=names)
    print(format_report(make_report(result)))

    base = build_smoother(DesignMatrix(x, names), config)
    spectral = base.spectral()
    num = search_k_numeric(spectral, y, SelectionPlan())
    exh = search_k_exhaustive(spectral, y, SelectionPlan(mode="exhaustive"))
    print(
        f"\nnumeric search: k = {num.k:.2f} (gcv {num.value:.5f}); "
        f"integer sweep: k = {exh.k:.0f} (gcv {exh.value:.5f})"
    )

    if args.repeats > 0:
        splits = run_ozone_splits(
            data, repeats=args.repeats, seed=args.seed, smoother=config
        )
        print(
            f"{args.repeats} random {splits.ntrain}/{splits.ntest} splits: "
            f"pooled test MSE = {splits.pooled_mse:.3f}"
        )

    walk = forward_select(DesignMatrix(x, names), y, smoother=config)
    print(f"\nforward selection ({walk.varcrit}): {', '.join(walk.selected_names)}")
    for stage, value in enumerate(walk.best_values, start=1):
        print(f"  stage {stage}: best {walk.varcrit} = {value:.5f}")
    rmse = float(np.sqrt(np.mean(result.residuals**2)))
    print(f"\nfull-model training RMSE: {rmse:.3f}")


if __name__ == "__main__":
    main()

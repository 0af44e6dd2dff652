"""Save and load fitted models.

The file is JSON: versioned, self-describing, and small (the training
design plus one coefficient vector per family, never an n x n matrix).
Floats go through repr round-tripping, so a loaded model predicts
bit-for-bit like the in-memory fit on the same platform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fitting import IbrFit, KernelPredictor, TpsPredictor

__all__ = ["FORMAT", "LoadedModel", "save_model", "load_model"]

FORMAT = "ibrsmooth-model/1"


@dataclass
class LoadedModel:
    """A deserialized fit: predictor plus the report-level metadata."""

    predictor: KernelPredictor | TpsPredictor
    names: list[str]
    response: str
    k: float
    initial_df: float
    final_df: float
    sigma: float
    criterion: str
    criterion_value: float
    base_description: str

    def predict(self, x_new: np.ndarray) -> np.ndarray:
        return self.predictor.predict(x_new)


def _floats(arr: np.ndarray) -> list:
    return np.asarray(arr, dtype=float).tolist()


def save_model(fit: IbrFit, path: str | Path, response: str = "y") -> None:
    pred = fit.predictor
    if isinstance(pred, KernelPredictor):
        family = {
            "family": "kernel",
            "kernel": pred.kind,
            "bandwidths": _floats(pred.bandwidths),
            "beta": _floats(pred.beta),
        }
    else:
        family = {
            "family": "tps",
            "order": pred.order,
            "powers": [list(p) for p in pred.powers],
            "delta": _floats(pred.delta),
            "poly_coef": _floats(pred.poly_coef),
        }
    payload = {
        "format": FORMAT,
        "columns": list(fit.design.names),
        "response": response,
        "x_train": [_floats(row) for row in fit.design.x],
        "k": float(fit.k),
        "initial_df": float(fit.initial_df),
        "final_df": float(fit.final_df),
        "sigma": float(fit.sigma),
        "criterion": fit.criterion,
        "criterion_value": float(fit.criterion_value),
        "base_description": fit.base.describe(),
        "smoother": family,
    }
    Path(path).write_text(json.dumps(payload))


def load_model(path: str | Path) -> LoadedModel:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not a model file ({exc})") from None
    if not isinstance(payload, dict) or payload.get("format") != FORMAT:
        raise ValueError(
            f"{path}: unsupported model format {payload.get('format')!r}; "
            f"this build reads {FORMAT!r}"
        )
    x_train = np.asarray(payload["x_train"], dtype=float)
    fam = payload["smoother"]
    if fam["family"] == "kernel":
        predictor: KernelPredictor | TpsPredictor = KernelPredictor(
            x_train=x_train,
            kind=fam["kernel"],
            bandwidths=np.asarray(fam["bandwidths"], dtype=float),
            beta=np.asarray(fam["beta"], dtype=float),
        )
    elif fam["family"] == "tps":
        predictor = TpsPredictor(
            x_train=x_train,
            order=int(fam["order"]),
            powers=[tuple(p) for p in fam["powers"]],
            delta=np.asarray(fam["delta"], dtype=float),
            poly_coef=np.asarray(fam["poly_coef"], dtype=float),
        )
    else:
        raise ValueError(f"{path}: unknown smoother family {fam['family']!r}")
    return LoadedModel(
        predictor=predictor,
        names=list(payload["columns"]),
        response=payload["response"],
        k=float(payload["k"]),
        initial_df=float(payload["initial_df"]),
        final_df=float(payload["final_df"]),
        sigma=float(payload["sigma"]),
        criterion=payload["criterion"],
        criterion_value=float(payload["criterion_value"]),
        base_description=payload["base_description"],
    )

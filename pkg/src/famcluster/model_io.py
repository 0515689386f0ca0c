"""Versioned on-disk model format.

A model file is a self-describing JSON document embedding the training
points and labels at full precision (floats are repr-encoded by the JSON
layer, so save -> load -> predict is bit-identical to in-memory predict).
"""

from __future__ import annotations

import json

import numpy as np

from .core import Dataset, Labels, ResemblanceConfig
from .out_of_sample import ModelState
from .resemblance import NormalizationBounds

FORMAT_NAME = "famcluster-model"
FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """Unreadable or malformed model file."""


def save_model(model: ModelState, path) -> None:
    document = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "resemblance": {
            "kind": model.config.kind,
            "eps": model.config.eps,
            "gamma": model.config.gamma,
            "coef0": model.config.coef0,
        },
        "k": model.k,
        "tau": model.tau,
        "r_min": model.bounds.r_min,
        "r_max": model.bounds.r_max,
        "points": model.train.points.tolist(),
        "labels": model.labels.values.tolist(),
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, indent=1)
        handle.write("\n")


def load_model(path) -> ModelState:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            document = json.load(handle)
    except json.JSONDecodeError as exc:
        # exc carries the parse location (line/column)
        raise ModelFormatError(f"{path}: invalid model file: {exc}") from None

    if not isinstance(document, dict) or document.get("format") != FORMAT_NAME:
        raise ModelFormatError(f"{path}: not a {FORMAT_NAME} document")
    if document.get("version") != FORMAT_VERSION:
        raise ModelFormatError(
            f"{path}: unsupported model version {document.get('version')!r}"
        )
    try:
        res = document["resemblance"]
        config = ResemblanceConfig(
            kind=res["kind"],
            eps=float(res["eps"]),
            gamma=None if res["gamma"] is None else float(res["gamma"]),
            coef0=float(res["coef0"]),
        )
        return ModelState(
            train=Dataset(np.asarray(document["points"], dtype=np.float64)),
            labels=Labels(np.asarray(document["labels"], dtype=np.int64)),
            config=config,
            k=int(document["k"]),
            tau=float(document["tau"]),
            bounds=NormalizationBounds(float(document["r_min"]), float(document["r_max"])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"{path}: invalid model contents: {exc}") from None

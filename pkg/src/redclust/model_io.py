"""JSON round-tripping for fitted reducer models.

Floats survive exactly: json emits the shortest repr that parses back to
the same double, so save -> load reproduces every field bit-for-bit.
"""

import json
from pathlib import Path

import numpy as np

from .errors import InvalidInputError, OutputError
from .reducers import IcaModel, PcaModel, SomGrid


def model_to_dict(model):
    if isinstance(model, PcaModel):
        return {
            "type": "pca",
            "basis": model.basis.tolist(),
            "mean": model.mean.tolist(),
            "eigenvalues": model.eigenvalues.tolist(),
        }
    if isinstance(model, SomGrid):
        return {
            "type": "som",
            "width": model.width,
            "height": model.height,
            "codebook": model.codebook.tolist(),
            "qe_log": list(model.qe_log),
        }
    if isinstance(model, IcaModel):
        return {
            "type": "fastica",
            "mean": model.mean.tolist(),
            "whitening": model.whitening.tolist(),
            "unmixing": model.unmixing.tolist(),
            "nonlinearity": model.nonlinearity,
            "converged": model.converged,
            "n_iter": model.n_iter,
        }
    raise InvalidInputError(f"cannot serialize {type(model).__name__}")


def model_from_dict(payload):
    kind = payload.get("type")
    if kind == "pca":
        return PcaModel(
            basis=np.asarray(payload["basis"], dtype=float),
            mean=np.asarray(payload["mean"], dtype=float),
            eigenvalues=np.asarray(payload["eigenvalues"], dtype=float),
        )
    if kind == "som":
        return SomGrid(
            width=int(payload["width"]),
            height=int(payload["height"]),
            codebook=np.asarray(payload["codebook"], dtype=float),
            qe_log=list(payload["qe_log"]),
        )
    if kind == "fastica":
        return IcaModel(
            mean=np.asarray(payload["mean"], dtype=float),
            whitening=np.asarray(payload["whitening"], dtype=float),
            unmixing=np.asarray(payload["unmixing"], dtype=float),
            nonlinearity=payload["nonlinearity"],
            converged=bool(payload["converged"]),
            n_iter=int(payload["n_iter"]),
        )
    raise InvalidInputError(f"unknown model type {kind!r}")


def save_model(model, path):
    path = Path(path)
    try:
        path.write_text(json.dumps(model_to_dict(model), indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write model to {path}: {exc}") from exc


def load_model(path):
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InvalidInputError(f"cannot read model from {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"model file {path} is not valid JSON: {exc}") from exc
    return model_from_dict(payload)

"""JSON file formats.

design      {"n": int, "bases": [[[ [re, im] x n ] x n vectors ] x (n+1)]}
table       {"n": int, "synthetic": bool, "table": s[k][l][i][j]}
experiment  {"prior": [...], "conditional": [[...], ...]}   (rows = outcomes)
probs       {"probabilities": [[p_1, ..., p_n] x (n+1)]}
state       {"n": int, "rho": [[ [re, im] x n ] x n], "residual": float}
"""

import json

import numpy as np

from .bases import MeasurementDesign, TransitionTable
from .lindley import DiscreteExperiment


class FormatError(ValueError):
    pass


def complex_to_pairs(a):
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def pairs_to_complex(x):
    a = np.asarray(x, dtype=float)
    if a.shape[-1] != 2:
        raise FormatError("complex entries must be [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def design_to_dict(design):
    return {"n": design.n, "bases": complex_to_pairs(design.as_array())}


def design_from_dict(d):
    try:
        n = int(d["n"])
        arr = pairs_to_complex(d["bases"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad design: {exc}") from exc
    if arr.shape != (n + 1, n, n):
        raise FormatError(f"design for n={n} must have shape {(n + 1, n, n)}, got {arr.shape}")
    try:
        return MeasurementDesign.from_array(arr)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def table_to_dict(table):
    return {"n": table.n, "synthetic": table.synthetic, "table": table.s.tolist()}


def table_from_dict(d):
    try:
        return TransitionTable(np.asarray(d["table"], dtype=float), synthetic=bool(d.get("synthetic", True)))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad table: {exc}") from exc


def experiment_from_dict(d):
    try:
        return DiscreteExperiment(d["prior"], d["conditional"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad experiment: {exc}") from exc


def experiment_to_dict(e):
    return {"prior": e.prior.tolist(), "conditional": e.conditional.tolist()}


def probabilities_from_dict(d):
    try:
        p = d["probabilities"] if isinstance(d, dict) else d
        return np.asarray(p, dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad probabilities: {exc}") from exc


def state_to_dict(rho, residual=None):
    out = {"n": int(rho.shape[0]), "rho": complex_to_pairs(rho)}
    if residual is not None:
        out["residual"] = float(residual)
    return out


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"

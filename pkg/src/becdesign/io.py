"""Ensemble file format and run manifests.

An ensemble file is JSON with degree->coefficient maps for both sides and
an optional meta block; this is the interchange format for every CLI
command:

    {"lambda": {"2": 0.4166666666, ...},
     "rho": {"6": 1.0},
     "meta": {"kind": "type-b", "design_eps": 0.48, ...}}

Coefficients are written with full repr precision so files round-trip to
the exact in-memory values.
"""

from __future__ import annotations

import dataclasses
import datetime
import json
import os

from .ensemble import Ensemble, variable_dist, check_dist, check_regular, DegreeDistribution
from .errors import BecDesignError

TOOLKIT_VERSION = "0.1.0"
SEED_ENV_VAR = "BECDESIGN_SEED"


class EnsembleFileError(BecDesignError):
    """Malformed ensemble file; carries a human-readable location."""


def _coeff_map(obj, what, path):
    if not isinstance(obj, dict) or not obj:
        raise EnsembleFileError(f"{path}: {what} must be a non-empty object")
    out = {}
    for k, v in obj.items():
        try:
            out[int(k)] = float(v)
        except (TypeError, ValueError):
            raise EnsembleFileError(
                f"{path}: {what} entry {k!r}: {v!r} is not a degree/coefficient pair"
            ) from None
    return out


def load_ensemble(path):
    """Read an ensemble file; returns (Ensemble, meta dict)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise EnsembleFileError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"
        ) from None
    except OSError as exc:
        raise EnsembleFileError(f"{path}: {exc.strerror}") from None
    if "lambda" not in doc or "rho" not in doc:
        raise EnsembleFileError(f"{path}: missing 'lambda' or 'rho' field")
    lam = variable_dist(_coeff_map(doc["lambda"], "lambda", path))
    rho = check_dist(_coeff_map(doc["rho"], "rho", path))
    return Ensemble(lam, rho), doc.get("meta", {})


def ensemble_doc(e: Ensemble, meta=None):
    doc = {
        "lambda": {str(d): c for d, c in e.lam.coeffs.items()},
        "rho": {str(d): c for d, c in e.rho.coeffs.items()},
    }
    if meta:
        doc["meta"] = meta
    return doc


def save_ensemble(path, e: Ensemble, meta=None):
    with open(path, "w") as fh:
        json.dump(ensemble_doc(e, meta), fh, indent=2)
        fh.write("\n")


def load_rho_spec(spec: str) -> DegreeDistribution:
    """Check side from 'regular:Dc' or from an ensemble file's rho field."""
    if spec.startswith("regular:"):
        try:
            dc = int(spec.split(":", 1)[1])
        except ValueError:
            raise EnsembleFileError(f"bad check-side spec {spec!r}") from None
        return check_regular(dc)
    try:
        with open(spec) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise EnsembleFileError(f"{spec}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise EnsembleFileError(f"{spec}: {exc.strerror}") from None
    if "rho" not in doc:
        raise EnsembleFileError(f"{spec}: no 'rho' field")
    return check_dist(_coeff_map(doc["rho"], "rho", spec))


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR, "")
    try:
        return int(raw)
    except ValueError:
        return 0


def run_manifest(command: str, params: dict, master_seed=None) -> dict:
    return {
        "command": command,
        "params": params,
        "toolkit_version": TOOLKIT_VERSION,
        "master_seed": master_seed,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def write_manifest(path, manifest: dict):
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def result_meta(result) -> dict:
    """Meta block recording a design result's provenance."""
    return {
        "kind": result.kind,
        "N": result.N,
        "Dv": result.Dv,
        "P": result.P,
        "design_eps": result.design_eps,
        "design_rate": result.design_rate,
        "threshold_claimed": result.threshold_claimed,
    }


def dataclass_row(obj) -> dict:
    return dataclasses.asdict(obj)

"""Reading and writing ensemble documents and quantile-grid files.

Ensemble documents are JSON objects of the form

    {"distributions": [{"weight": 0.5, "mean": [...], "cov": [[...]],
                        "label": "unit-1"}, ...]}

with the label optional.  Quantile grids travel as single-column CSV files
with header ``quantile_value``.  Floats are emitted with Python's shortest
round-trip representation, so emitted files are byte-stable and parse back
to the exact same doubles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .barycenter import WeightedEnsemble
from .errors import BadWeights, NotPositiveDefinite, ParseError
from .locscatter import LocScatter
from .spd import certify_spd
from .univariate import QuantileGrid

__all__ = [
    "EnsembleDocument",
    "parse_ensemble",
    "parse_ensemble_text",
    "emit_ensemble",
    "read_quantile_grid",
    "write_quantile_grid",
    "loc_scatter_obj",
]

_SYM_TOL = 1e-9
_WEIGHT_SUM_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class EnsembleDocument:
    """A parsed ensemble file: the ensemble plus per-entry labels."""

    ensemble: WeightedEnsemble
    labels: tuple[str | None, ...]


def _entry_error(index: int, message: str) -> ParseError:
    return ParseError(f"distributions[{index}]: {message}")


def _parse_entry(index: int, obj) -> tuple[float, LocScatter, str | None]:
    if not isinstance(obj, dict):
        raise _entry_error(index, "entry must be an object")
    try:
        weight = float(obj["weight"])
        mean = np.asarray(obj["mean"], dtype=float)
        cov = np.asarray(obj["cov"], dtype=float)
    except KeyError as exc:
        raise _entry_error(index, f"missing field {exc.args[0]!r}")
    except (TypeError, ValueError) as exc:
        raise _entry_error(index, f"bad numeric field: {exc}")
    label = obj.get("label")
    if label is not None and not isinstance(label, str):
        raise _entry_error(index, "label must be a string")
    if not weight > 0.0:
        raise _entry_error(index, f"weight must be positive, got {weight!r}")
    if mean.ndim != 1 or not np.all(np.isfinite(mean)):
        raise _entry_error(index, "mean must be a finite vector")
    if cov.shape != (mean.shape[0], mean.shape[0]):
        raise _entry_error(
            index, f"cov shape {cov.shape} does not match mean "
                   f"dimension {mean.shape[0]}")
    if not np.all(np.isfinite(cov)):
        raise _entry_error(index, "cov must be finite")
    skew = np.abs(cov - cov.T).max()
    if skew > _SYM_TOL * max(1.0, np.abs(cov).max()):
        raise _entry_error(index, f"cov is asymmetric (max skew {skew:.3g})")
    try:
        spd = certify_spd(0.5 * (cov + cov.T))
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(
            f"distributions[{index}]: cov is not positive definite "
            f"(min eigenvalue {exc.min_eigenvalue:.6g})",
            min_eigenvalue=exc.min_eigenvalue)
    return weight, LocScatter(mean, spd), label


def parse_ensemble_text(text: str, normalize: bool = False) -> EnsembleDocument:
    """Parse an ensemble document from a JSON string."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict) or "distributions" not in doc:
        raise ParseError("document must be an object with a "
                         "'distributions' array")
    entries = doc["distributions"]
    if not isinstance(entries, list) or not entries:
        raise ParseError("'distributions' must be a non-empty array")
    parsed = [_parse_entry(i, obj) for i, obj in enumerate(entries)]
    weights = np.array([p[0] for p in parsed])
    total = weights.sum()
    if normalize:
        weights = weights / total
    elif abs(total - 1.0) > _WEIGHT_SUM_TOL:
        raise BadWeights(f"weights sum to {float(total)!r}; pass the normalize "
                         f"option or fix the file")
    else:
        weights = weights / total
    ensemble = WeightedEnsemble(weights, tuple(p[1] for p in parsed))
    return EnsembleDocument(ensemble=ensemble,
                            labels=tuple(p[2] for p in parsed))


def parse_ensemble(path, normalize: bool = False) -> WeightedEnsemble:
    """Parse an ensemble document from a file path."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_ensemble_text(fh.read(), normalize=normalize).ensemble


def loc_scatter_obj(p: LocScatter) -> dict:
    """JSON-ready object for one family member."""
    return {"mean": [float(x) for x in p.mean],
            "cov": [[float(x) for x in row] for row in p.cov.entries]}


def emit_ensemble(doc: EnsembleDocument) -> str:
    """Serialize a document back to JSON text."""
    entries = []
    for weight, member, label in zip(doc.ensemble.weights,
                                     doc.ensemble.members, doc.labels):
        obj = {"weight": float(weight)}
        obj.update(loc_scatter_obj(member))
        if label is not None:
            obj["label"] = label
        entries.append(obj)
    return json.dumps({"distributions": entries}, indent=2) + "\n"


def read_quantile_grid(path) -> QuantileGrid:
    """Read a quantile grid from a one-column CSV with header."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != "quantile_value":
        raise ParseError(f"{path}: expected header 'quantile_value'")
    try:
        values = np.array([float(ln) for ln in lines[1:]])
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}")
    if values.size < 2:
        raise ParseError(f"{path}: need at least two quantile values")
    return QuantileGrid(values)


def write_quantile_grid(path, grid: QuantileGrid) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("quantile_value\n")
        for v in grid.values:
            fh.write(f"{float(v)!r}\n")

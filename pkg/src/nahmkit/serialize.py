"""JSON (de)serialization of singularity data and reports.

Complex numbers are [re, im] pairs.  Parse failures raise SpecError with a
path-qualified message.
"""
from __future__ import annotations

from typing import Any

from .moduli import (
    ConnectionData,
    DataError,
    HiggsData,
    InfinityGroup,
    LogPoint,
    SingularityData,
    WeightedEigen,
)


class SpecError(ValueError):
    pass


def _complex_from(obj, path: str) -> complex:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in obj)
    ):
        raise SpecError(f"{path}: expected a [re, im] pair, got {obj!r}")
    return complex(obj[0], obj[1])


def _complex_to(z: complex) -> list[float]:
    return [z.real, z.imag]


def _entry_from(obj, path: str) -> WeightedEigen:
    if not isinstance(obj, dict):
        raise SpecError(f"{path}: expected an object")
    if "value" not in obj or "weight" not in obj:
        raise SpecError(f"{path}: entry needs 'value' and 'weight'")
    w = obj["weight"]
    if not isinstance(w, (int, float)) or isinstance(w, bool):
        raise SpecError(f"{path}.weight: expected a number")
    try:
        return WeightedEigen(_complex_from(obj["value"], f"{path}.value"), float(w))
    except DataError as exc:
        raise SpecError(f"{path}: {exc}") from exc


def data_from_dict(obj: Any, path: str = "$") -> SingularityData:
    if not isinstance(obj, dict):
        raise SpecError(f"{path}: expected an object")
    kind = obj.get("kind")
    if kind not in ("higgs", "connection"):
        raise SpecError(f"{path}.kind: expected 'higgs' or 'connection', got {kind!r}")
    for key in ("rank", "degree"):
        if not isinstance(obj.get(key), int) or isinstance(obj.get(key), bool):
            raise SpecError(f"{path}.{key}: expected an integer")
    log_points = []
    for j, lp in enumerate(obj.get("log_points", [])):
        p = f"{path}.log_points[{j}]"
        if not isinstance(lp, dict) or "position" not in lp or "entries" not in lp:
            raise SpecError(f"{p}: expected an object with 'position' and 'entries'")
        entries = tuple(
            _entry_from(e, f"{p}.entries[{k}]") for k, e in enumerate(lp["entries"])
        )
        log_points.append(LogPoint(_complex_from(lp["position"], f"{p}.position"), entries))
    inf_groups = []
    for l, g in enumerate(obj.get("inf_groups", [])):
        p = f"{path}.inf_groups[{l}]"
        if not isinstance(g, dict) or "xi" not in g or "entries" not in g:
            raise SpecError(f"{p}: expected an object with 'xi' and 'entries'")
        entries = tuple(
            _entry_from(e, f"{p}.entries[{k}]") for k, e in enumerate(g["entries"])
        )
        inf_groups.append(InfinityGroup(_complex_from(g["xi"], f"{p}.xi"), entries))
    cls = HiggsData if kind == "higgs" else ConnectionData
    try:
        return cls(obj["rank"], obj["degree"], tuple(log_points), tuple(inf_groups))
    except DataError as exc:
        raise SpecError(f"{path}: {exc}") from exc


def data_to_dict(data: SingularityData) -> dict:
    kind = "higgs" if isinstance(data, HiggsData) else "connection"
    return {
        "kind": kind,
        "rank": data.rank,
        "degree": data.degree,
        "log_points": [
            {
                "position": _complex_to(lp.position),
                "entries": [
                    {"value": _complex_to(e.value), "weight": e.weight} for e in lp.entries
                ],
            }
            for lp in data.log_points
        ],
        "inf_groups": [
            {
                "xi": _complex_to(g.xi),
                "entries": [
                    {"value": _complex_to(e.value), "weight": e.weight} for e in g.entries
                ],
            }
            for g in data.inf_groups
        ],
    }


def realization_from_dict(obj: Any, path: str = "$.realization") -> dict:
    """Validated field-realization block: {'mode': 'diagonal'|'random', 'seed': int}."""
    if obj is None:
        return {"mode": "diagonal", "seed": 0}
    if not isinstance(obj, dict):
        raise SpecError(f"{path}: expected an object")
    mode = obj.get("mode", "diagonal")
    if mode not in ("diagonal", "random"):
        raise SpecError(f"{path}.mode: expected 'diagonal' or 'random', got {mode!r}")
    seed = obj.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise SpecError(f"{path}.seed: expected an integer")
    return {"mode": mode, "seed": seed}

"""Read-only access to the published reference tables in ``data/golden.json``."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

GOLDEN_PATH = Path(__file__).parent / "data" / "golden.json"


def _freeze(obj):
    if isinstance(obj, dict):
        return MappingProxyType({k: _freeze(v) for k, v in obj.items()})
    if isinstance(obj, list):
        return tuple(_freeze(v) for v in obj)
    return obj


@dataclass(frozen=True)
class GoldenTables:
    version: int
    lam: Mapping[str, int]
    b2: Mapping[str, int]
    census: Mapping[str, Mapping]
    periods: Mapping[str, Mapping]
    invariants: Mapping[str, Mapping]
    forms: Mapping[str, Mapping]
    lvalues: Mapping[str, Mapping]
    proportionality: Mapping[str, Mapping]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.lam)

    def form_of(self, label: str) -> str:
        for name, rec in self.forms.items():
            if label in rec["arrangements"]:
                return name
        raise KeyError(f"no form assigned to arrangement {label}")

    def period_values(self, label: str, axis: str) -> list[float]:
        return [float(v) for v in self.periods[label][axis]]


@lru_cache(maxsize=4)
def load_golden(path: str | Path | None = None) -> GoldenTables:
    raw = json.loads(Path(path or GOLDEN_PATH).read_text())
    return GoldenTables(
        raw["version"],
        _freeze(raw["lambda"]),
        _freeze(raw["b2"]),
        _freeze(raw["census"]),
        _freeze(raw["periods"]),
        _freeze(raw["invariants"]),
        _freeze(raw["forms"]),
        _freeze(raw["lvalues"]),
        _freeze(raw["proportionality"]),
    )

"""On-disk cache of chamber periods keyed by a content hash."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .arrangement import Arrangement


def projective_key(sign_vector) -> tuple[int, ...]:
    """Sign vector up to the global sign, so one chamber of P^3 has one key in every chart."""
    sv = tuple(int(s) for s in sign_vector)
    return sv if sv[0] > 0 else tuple(-s for s in sv)


def record_key(arr: Arrangement, sign_vector, settings_digest: str) -> str:
    blob = json.dumps({
        "forms": [list(map(str, f.coeffs)) for f in arr.forms],
        "lam": str(arr.lam),
        "scale": str(arr.scale),
        "cell": projective_key(sign_vector),
        "settings": settings_digest,
    }, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


class PeriodCache:
    """JSON file of ``key -> {value, est_rel_err, evaluations, ...}``.

    ``path=None`` keeps everything in memory.  Writes go through a temporary
    file and a rename so an interrupted run leaves a readable cache.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path else None
        self.records: dict[str, dict] = {}
        self.hits = 0
        self.misses = 0
        if self.path and self.path.exists():
            self.records = json.loads(self.path.read_text() or "{}")

    def get(self, key: str) -> dict | None:
        rec = self.records.get(key)
        if rec is None:
            self.misses += 1
        else:
            self.hits += 1
        return rec

    def put(self, key: str, record: dict) -> None:
        self.records[key] = record
        self.flush()

    def flush(self) -> None:
        if not self.path:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=".cache-")
        with os.fdopen(fd, "w") as fh:
            json.dump(self.records, fh, sort_keys=True, indent=0)
        os.replace(tmp, self.path)

    def __len__(self) -> int:
        return len(self.records)

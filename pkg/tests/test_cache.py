import json

from doubleoctic.cache import PeriodCache, projective_key, record_key
from doubleoctic.chamber import Chart
from doubleoctic.pipeline import compute_periods
from doubleoctic.quadrature import QuadratureSettings


def test_projective_key():
    assert projective_key((-1, 1, -1)) == (1, -1, 1)
    assert projective_key((1, 1)) == (1, 1)


def test_record_key_stable(arrangements):
    arr = arrangements["1"]
    d = QuadratureSettings().digest()
    sv = (1, 1, -1, 1, 1, -1, 1, 1)
    assert record_key(arr, sv, d) == record_key(arr, tuple(-s for s in sv), d)
    assert record_key(arr, sv, d) != record_key(arr, sv, QuadratureSettings(tol=1e-7).digest())
    assert record_key(arr, sv, d) != record_key(arrangements["3"], sv, d)


def test_round_trip(tmp_path):
    path = tmp_path / "sub" / "cache.json"
    c = PeriodCache(path)
    assert c.get("k") is None and c.misses == 1
    c.put("k", {"value": 1.5})
    again = PeriodCache(path)
    assert again.get("k") == {"value": 1.5} and again.hits == 1
    assert len(again) == 1
    assert json.loads(path.read_text()) == {"k": {"value": 1.5}}
    assert not list(path.parent.glob(".cache-*"))


def test_memory_cache_never_writes(tmp_path):
    c = PeriodCache()
    c.put("k", {})
    assert c.path is None and len(c) == 1


def test_pipeline_hits(arrangements, tmp_path):
    arr = arrangements["1"]
    chart = [Chart.substitution("t -> t - x")]
    settings = QuadratureSettings(tol=1e-8)
    cache = PeriodCache(tmp_path / "c.json")
    first = compute_periods(arr, settings, cache=cache, charts=chart)
    assert first.integrated == 3 and len(cache) == 3
    warm = PeriodCache(tmp_path / "c.json")
    second = compute_periods(arr, settings, cache=warm, charts=chart)
    assert second.integrated == 0 and warm.hits == 3
    assert [p.value for p in first.periods] == [p.value for p in second.periods]

"""From an arrangement to its period lattice: charts, chambers, cycles, integrals."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .arrangement import Arrangement, Census, incidence_census
from .cache import PeriodCache, record_key
from .chamber import (
    Chamber,
    Chart,
    PolyhedralCycle,
    apply_chart,
    candidate_charts,
    chambers_of,
    fourfold_images,
    polyhedral_cycles,
)
from .lattice import PeriodLattice, lattice_generators
from .quadrature import (
    IMAGINARY,
    REAL,
    PeriodValue,
    QuadratureError,
    QuadratureSettings,
    cell_period,
)

STRATEGIES = ("all", "first")

# tensor tanh-sinh reaches this level-to-level agreement at level 5 on every chamber
PIPELINE_TOL = 1e-8

# a cycle whose signed sum is below this fraction of its absolute sum is treated as zero
CANCEL_TOL = 1e-6


class PipelineError(RuntimeError):
    pass


@dataclass(frozen=True)
class CyclePeriod:
    chart: str
    terms: tuple[tuple[int, int], ...]
    period: PeriodValue | None
    mixed: bool = False


@dataclass
class PeriodRun:
    label: str
    cycles: list[CyclePeriod] = field(default_factory=list)
    charts: list[str] = field(default_factory=list)
    integrated: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def periods(self) -> list[PeriodValue]:
        return [c.period for c in self.cycles if c.period is not None]

    @property
    def mixed(self) -> list[CyclePeriod]:
        return [c for c in self.cycles if c.mixed]

    def distinct(self, axis: str, digits: int = 9) -> list[float]:
        vals = sorted({float(f"{p.value:.{digits}g}") for p in self.periods if p.axis == axis})
        return vals

    def lattice(self, max_den: int = 64, tol: float = 1e-7) -> PeriodLattice:
        return lattice_generators(self.periods, max_den, tol)


def _chamber_value(arr: Arrangement, ch: Chamber, aff, settings: QuadratureSettings,
                   cache: PeriodCache, run: PeriodRun) -> PeriodValue:
    key = record_key(arr, ch.sign_vector, settings.digest())
    rec = cache.get(key)
    if rec is not None:
        return PeriodValue(rec["value"], rec["axis"], rec["est_rel_err"], ch.key, settings,
                           rec["evaluations"])
    pv = cell_period(ch, aff, settings=settings)
    run.integrated += 1
    cache.put(key, {"value": pv.value, "axis": pv.axis, "est_rel_err": pv.est_rel_err,
                    "evaluations": pv.evaluations, "label": arr.label, "cell": ch.key})
    return pv


def cycle_period(cycle: PolyhedralCycle, values: Sequence[PeriodValue], chart: str,
                 settings: QuadratureSettings) -> CyclePeriod:
    sums = {REAL: 0.0, IMAGINARY: 0.0}
    mags = {REAL: 0.0, IMAGINARY: 0.0}
    errs = {REAL: 0.0, IMAGINARY: 0.0}
    for j, n in cycle.terms:
        v = values[j]
        sums[v.axis] += n * v.value
        mags[v.axis] += abs(n) * v.value
        errs[v.axis] += abs(n) * v.value * v.est_rel_err
    live = [ax for ax in (REAL, IMAGINARY) if mags[ax] and abs(sums[ax]) > CANCEL_TOL * mags[ax]]
    if len(live) != 1:
        return CyclePeriod(chart, cycle.terms, None, mixed=len(live) == 2)
    ax = live[0]
    total = abs(sums[ax])
    ref = f"{chart}:" + ",".join(f"{n}*{values[j].cell_ref}" for j, n in cycle.terms)
    return CyclePeriod(chart, cycle.terms,
                       PeriodValue(total, ax, errs[ax] / total, ref, settings))


def compute_periods(arr: Arrangement, settings: QuadratureSettings | None = None,
                    strategy: str = "all", cache: PeriodCache | None = None,
                    census: Census | None = None, charts: Sequence[Chart] | None = None,
                    progress: Callable[[str], None] | None = None) -> PeriodRun:
    """Periods of the integral cycles found in every candidate chart.

    In each chart the bounded chambers are combined by the integer kernel of
    their local incidence at the generic fourfold points.  ``first`` stops as
    soon as both axes carry a period.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown chart strategy {strategy!r}")
    settings = settings or QuadratureSettings(tol=PIPELINE_TOL)
    cache = cache if cache is not None else PeriodCache()
    census = census or incidence_census(arr)
    charts = list(charts) if charts is not None else candidate_charts(arr, census, 1)
    run = PeriodRun(arr.label)
    for chart in charts:
        aff = apply_chart(arr, chart)
        chambers = chambers_of(aff)
        if not chambers:
            continue
        points = fourfold_images(arr, chart, census)
        cycles = polyhedral_cycles(chambers, aff, points, "local")
        needed = sorted({j for c in cycles for j, _ in c.terms})
        values: dict[int, PeriodValue] = {}
        for j in needed:
            try:
                values[j] = _chamber_value(arr, chambers[j], aff, settings, cache, run)
            except QuadratureError as exc:
                run.failures.append(f"{chart.name}: {exc}")
        run.charts.append(chart.name)
        for c in cycles:
            if all(j in values for j, _ in c.terms):
                run.cycles.append(cycle_period(c, values, chart.name, settings))
        if progress:
            progress(f"{arr.label} {chart.name}: {len(chambers)} chambers, {len(cycles)} cycles")
        if strategy == "first" and {p.axis for p in run.periods} == {REAL, IMAGINARY}:
            break
    if not run.periods:
        raise PipelineError(f"arrangement {arr.label}: no admissible cycle in any chart")
    return run


def relative_error(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b else math.inf

"""Command line interface: ``doubleoctic <command> [options]``."""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import checks
from .arrangement import Arrangement, betti_relations, incidence_census, load_arrangements
from .cache import PeriodCache
from .chamber import (
    Chart,
    apply_chart,
    bounded_faces,
    candidate_charts,
    cells_of,
    chambers_of,
    project_lines,
)
from .concord import format_table, match_periods
from .golden import load_golden
from .lattice import LatticeError, elliptic_invariants
from .modular import FormError, default_form_dir, l_values, load_forms, q_expansion
from .pipeline import PIPELINE_TOL, STRATEGIES, PeriodRun, compute_periods
from .quadrature import QuadratureSettings

DATA = Path(__file__).parent / "data"
COMMANDS = ("census", "cells", "periods", "lattice", "lvalues", "verify", "report")


@dataclass(frozen=True)
class RunConfig:
    labels: tuple[str, ...]
    settings: QuadratureSettings
    strategy: str
    max_den: int
    form_dir: Path
    cache: Path | None
    fmt: str
    precision: int
    source: str
    chart: str | None
    workers: int
    computed: bool


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def record(self, rec: dict, text: str) -> None:
        if self.fmt == "json-lines":
            print(json.dumps(rec, sort_keys=True, default=str), file=self.stream)
        else:
            print(text, file=self.stream)

    def text(self, line: str) -> None:
        if self.fmt == "text":
            print(line, file=self.stream)


def _arrangements(cfg: RunConfig) -> list[Arrangement]:
    pool = load_arrangements(DATA / "arrangements.txt")
    if cfg.labels == ("all",):
        return pool
    by_label = {a.label: a for a in pool}
    missing = [lab for lab in cfg.labels if lab not in by_label]
    if missing:
        raise SystemExit(f"unknown arrangement(s): {', '.join(missing)}")
    return [by_label[lab] for lab in cfg.labels]


# ---------------------------------------------------------------------------
# commands; each returns True iff its checks pass

def cmd_census(cfg: RunConfig, out: Output) -> bool:
    """Incidence census and Betti numbers."""
    golden = load_golden()
    ok = True
    for arr in _arrangements(cfg):
        c = incidence_census(arr)
        ref = golden.census.get(arr.label)
        b3_hat = ref["b3_hat"] if ref else None
        b3_t = betti_relations(b3_hat) if ref else None
        good = c.admissible and (ref is None or c.p4_generic == ref["p4_generic"])
        ok &= good
        rec = {"arrangement": arr.label, "lambda": str(arr.lam), "b2": arr.b2_tilde,
               "double_lines": c.double_lines, "triple_lines": c.triple_lines,
               "points_mult4": c.points_mult4, "points_mult5": c.points_mult5,
               "p4_generic": c.p4_generic, "admissible": c.admissible,
               "b3_hat": b3_hat, "b3_smoothing": b3_t, "ok": good}
        out.record(rec, f"{arr.label:>4}  lambda={str(arr.lam):>3}  b2={arr.b2_tilde}  "
                        f"double={c.double_lines:>2} triple={c.triple_lines} p4={c.points_mult4} "
                        f"p5={c.points_mult5} p4_generic={c.p4_generic:>2}  "
                        f"admissible={c.admissible}  b3_hat={b3_hat} b3(X_t)={b3_t}"
                        f"{'' if good else '  FAIL'}")
    return ok


def _chart_for(cfg: RunConfig, arr: Arrangement) -> Chart:
    if cfg.chart:
        return Chart.substitution(cfg.chart)
    return candidate_charts(arr, projections=1)[0]


def cmd_cells(cfg: RunConfig, out: Output) -> bool:
    """Affine chart, projected lines, prisms and chambers."""
    for arr in _arrangements(cfg):
        chart = _chart_for(cfg, arr)
        aff = apply_chart(arr, chart)
        lines = project_lines(aff)
        faces = bounded_faces(lines)
        cells = cells_of(aff)
        chambers = chambers_of(aff, cells)
        out.record({"arrangement": arr.label, "chart": chart.name, "equation": aff.equation(),
                    "lines": [str(ln) for ln in lines], "bounded_faces": len(faces),
                    "prisms": [{"key": c.key, "closed": c.closed} for c in cells],
                    "chambers": [{"key": ch.key, "sign": ch.f_sign, "prisms": len(ch.prisms),
                                  "volume": str(ch.volume(aff))} for ch in chambers]},
                   f"{arr.label}  chart {chart.name}: {aff.equation()}")
        out.text(f"  projected lines: {len(lines)}")
        for ln in lines:
            out.text(f"    {ln}")
        out.text(f"  bounded faces: {len(faces)}")
        for c in cells:
            out.text(f"    prism {c.key}  {'closed' if c.closed else 'NOT closed'}")
        for ch in chambers:
            out.text(f"    chamber {ch.key}  {'real' if ch.f_sign > 0 else 'imaginary'}  "
                     f"{len(ch.prisms)} prism(s)  volume {ch.volume(aff)}")
    return True


def _periods_worker(args):
    arr, settings, strategy, records = args
    cache = PeriodCache()
    cache.records = dict(records)
    run = compute_periods(arr, settings, strategy, cache)
    new = {k: v for k, v in cache.records.items() if k not in records}
    return run, new


def compute_runs(cfg: RunConfig, arrangements: Sequence[Arrangement]) -> list[PeriodRun]:
    cache = PeriodCache(cfg.cache)
    if cfg.workers <= 1:
        return [compute_periods(a, cfg.settings, cfg.strategy, cache) for a in arrangements]
    jobs = [(a, cfg.settings, cfg.strategy, cache.records) for a in arrangements]
    runs = []
    with ProcessPoolExecutor(cfg.workers) as pool:
        for run, new in pool.map(_periods_worker, jobs):
            for k, v in sorted(new.items()):
                cache.records[k] = v
            runs.append(run)
    cache.flush()
    return runs


def cmd_periods(cfg: RunConfig, out: Output) -> bool:
    """Integrate the polyhedral cycles."""
    ok = True
    for run in compute_runs(cfg, _arrangements(cfg)):
        for c in run.cycles:
            if c.period is None:
                continue
            p = c.period
            out.record({"arrangement": run.label, "chart": c.chart, "terms": c.terms,
                        "value": p.value, "axis": p.axis, "est_rel_err": p.est_rel_err},
                       f"{run.label:>4}  {p.axis:<9} {p.value:18.10f}  err {p.est_rel_err:.1e}  "
                       f"{c.chart} {list(c.terms)}")
        try:
            lat = run.lattice(cfg.max_den)
            out.text(f"{run.label:>4}  generators {lat.omega_re:.10f}, {lat.omega_im:.10f}i  "
                     f"({len(run.charts)} charts, {len(run.mixed)} mixed, "
                     f"{len(run.failures)} failed chambers)")
        except LatticeError as exc:
            ok = False
            out.record({"arrangement": run.label, "error": str(exc)},
                       f"{run.label:>4}  FAIL {exc}")
    return ok


def _lattices(cfg: RunConfig, arrangements: Sequence[Arrangement]) -> dict:
    golden = load_golden()
    if cfg.source == "golden":
        return {a.label: checks.golden_lattice(golden, a.label, cfg.max_den) for a in arrangements}
    return {r.label: r.lattice(cfg.max_den) for r in compute_runs(cfg, arrangements)}


def cmd_lattice(cfg: RunConfig, out: Output) -> bool:
    """Period generators and elliptic invariants."""
    arrs = _arrangements(cfg)
    try:
        lats = _lattices(cfg, arrs)
    except LatticeError as exc:
        out.record({"error": str(exc)}, f"FAIL {exc}")
        return False
    for a in arrs:
        lat = lats[a.label]
        inv = elliptic_invariants(lat).as_floats()
        out.record({"arrangement": a.label, "omega_re": lat.omega_re, "omega_im": lat.omega_im,
                    **inv},
                   f"{a.label:>4}  omega {lat.omega_re:.10f}, {lat.omega_im:.10f}i  "
                   f"tau/i {inv['tau_over_i']:.12g}  j {inv['j']:.12g}  g2 {inv['g2']:.12g}  "
                   f"g3 {inv['g3']:.12g}")
    return True


def _load_forms(cfg: RunConfig):
    return load_forms(cfg.form_dir)


def cmd_lvalues(cfg: RunConfig, out: Output) -> bool:
    """Critical L-values of the shipped eigenforms."""
    golden = load_golden()
    forms = _load_forms(cfg)
    ok = True
    for name, form in forms.items():
        lv = l_values(form, cfg.precision)
        rec = golden.forms.get(name)
        qx = q_expansion(form, 12)
        good = rec is None or q_expansion(form, checks._printed_terms(rec["expansion"])) == rec["expansion"]
        ok &= good
        out.record({"form": name, "level": form.level, "L1": str(lv.L1), "L2": str(lv.L2),
                    "L3": str(lv.L3), "q_expansion": qx, "checksum_ok": good},
                   f"{name:>5}  {qx}\n       L(f,1) = {lv.L1}\n       L(f,2) = {lv.L2}\n"
                   f"       L(f,3) = {lv.L3}{'' if good else '  CHECKSUM FAIL'}")
    return ok


def cmd_verify(cfg: RunConfig, out: Output) -> bool:
    """Compare against the reference tables."""
    golden = load_golden()
    arrs = _arrangements(cfg)
    labels = [a.label for a in arrs]
    forms = _load_forms(cfg)
    lvs = {n: l_values(f, max(cfg.precision, checks.LVALUE_DIGITS + 5)) for n, f in forms.items()}
    found = checks.check_census(arrs, golden)
    found += checks.check_q_expansions(forms, golden)
    found += checks.check_lvalues(lvs, golden)
    found += checks.check_invariants(golden, labels)
    found += [c for c in checks.check_proportionality(golden, lvs, cfg.max_den)
              if c.item.split()[0] in labels]
    if cfg.computed:
        for run in compute_runs(cfg, arrs):
            try:
                found += checks.check_computed_lattice(run.label, run.lattice(cfg.max_den), golden)
            except LatticeError as exc:
                found.append(checks.Check("periods", f"{run.label} lattice", False, "rational",
                                          str(exc)))
    for c in found:
        out.record(c.as_record(), f"{'PASS' if c.ok else 'FAIL'}  {c.table:<16} {c.item:<24} "
                                  f"expected {c.expected:<34} got {c.got}"
                                  + (f"  (rel {c.residual:.1e})" if c.residual else ""))
    for table, (good, total) in checks.summarize(found).items():
        out.text(f"{table}: {good}/{total} passed")
    return checks.all_ok(found)


def cmd_report(cfg: RunConfig, out: Output) -> bool:
    """Proportionality table against the L-values."""
    golden = load_golden()
    arrs = _arrangements(cfg)
    forms = _load_forms(cfg)
    lvs = {n: l_values(f, cfg.precision) for n, f in forms.items()}
    try:
        lats = _lattices(cfg, arrs)
    except LatticeError as exc:
        out.record({"error": str(exc)}, f"FAIL {exc}")
        return False
    reports = [match_periods(lats[a.label], lvs[golden.form_of(a.label)], cfg.max_den,
                             arrangement=a.label) for a in arrs]
    if cfg.fmt == "json-lines":
        for r in reports:
            out.record(r.as_record(), "")
    else:
        out.text(format_table(reports))
    return all(r.ok for r in reports)


HANDLERS = {
    "census": cmd_census,
    "cells": cmd_cells,
    "periods": cmd_periods,
    "lattice": cmd_lattice,
    "lvalues": cmd_lvalues,
    "verify": cmd_verify,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arrangement", default="all",
                        help="label, comma separated labels, or 'all' (default)")
    common.add_argument("--tol", type=float, default=PIPELINE_TOL,
                        help="relative quadrature tolerance (default %(default)g)")
    common.add_argument("--budget", type=int, default=QuadratureSettings().budget,
                        help="integrand evaluations allowed per chamber")
    common.add_argument("--max-den", type=int, default=64, help="largest denominator accepted")
    common.add_argument("--form-dir", type=Path, default=default_form_dir())
    common.add_argument("--cache", type=Path, default=None, help="period cache file (JSON)")
    common.add_argument("--format", choices=("text", "json-lines"), default="text")
    common.add_argument("--strategy", choices=STRATEGIES, default="all",
                        help="try every chart or stop once both axes are found")
    common.add_argument("--precision", type=int, default=30, help="decimal digits for L-values")
    common.add_argument("--source", choices=("computed", "golden"), default="computed",
                        help="periods for lattice/report: integrate or use the reference table")
    common.add_argument("--chart", default=None, help="substitution for 'cells', e.g. 't -> t - x'")
    common.add_argument("--workers", type=int, default=1, help="processes for period integration")
    common.add_argument("--computed", action="store_true",
                        help="verify: also integrate and compare the period generators")
    parser = argparse.ArgumentParser(prog="doubleoctic",
                                     description="Periods of rigid double octic arrangements.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HANDLERS[name].__doc__)
    return parser


def config_from(ns: argparse.Namespace) -> RunConfig:
    if ns.tol <= 0:
        raise SystemExit("--tol must be positive")
    if ns.max_den < 1:
        raise SystemExit("--max-den must be at least 1")
    if not ns.form_dir.is_dir():
        raise SystemExit(f"form directory {ns.form_dir} does not exist")
    labels = tuple(s.strip() for s in ns.arrangement.split(",") if s.strip())
    return RunConfig(labels or ("all",), QuadratureSettings(tol=ns.tol, budget=ns.budget),
                     ns.strategy, ns.max_den, ns.form_dir, ns.cache, ns.format, ns.precision,
                     ns.source, ns.chart, ns.workers, ns.computed)


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from(ns)
    out = Output(cfg.fmt)
    try:
        ok = HANDLERS[ns.command](cfg, out)
    except FormError as exc:
        out.record({"error": str(exc)}, f"FAIL {exc}")
        ok = False
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

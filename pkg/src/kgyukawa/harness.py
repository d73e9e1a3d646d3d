"""Regression reports: recompute every transcribed table cell and compare.

Deviations are data, not failures: a report always completes, and each row
carries a status of ``match``, ``deviation``, ``no-root`` or
``complex-branch``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from decimal import Decimal
from importlib import resources

from .errors import ComplexBranchError, KGYukawaError, NoRealStateError, NotFoundError, UsageError
from .kg_spectrum import SpectrumMode, solve_levels
from .model import ProblemParams, QuantumNumbers, UnitSystem
from .nonrel import DeltaConvention, nonrel_energy
from .oracle import numerov_eigenvalue

TABLE_IDS = (1, 2, 3, 4, 5, 6)
DATA_VERSION = "1"
CSV_HEADER = [
    "table", "block", "column", "n", "l", "delta", "v0", "s0", "lambda", "g", "state",
    "computed", "paper", "abs_dev", "rel_dev", "status", "references", "oracle",
]
STATUSES = ("match", "deviation", "no-root", "complex-branch")

_TABLE_MASS = {1: (1.0, 0.1), 2: (1.0, 0.1), 3: (1.0, 0.1), 4: (1.0, 0.0)}
TABLE5_LAMBDA = math.sqrt(2)
TABLE5_UNITS = UnitSystem(hbar=1.0, mu=1.0)
TABLE6_UNITS = UnitSystem(hbar=1.0, mu=0.5)


@dataclass(frozen=True)
class Cell:
    table: int
    block: str
    branch: str
    source: str
    n: int
    l: int
    delta: float | None
    v0: float | None
    s0: float | None
    lam: float | None
    g: float | None
    state: str
    text: str

    @property
    def value(self) -> float:
        return float(self.text)

    @property
    def half_ulp(self) -> float:
        """Half a unit in the last printed digit."""
        exp = Decimal(self.text).as_tuple().exponent
        return 0.5 * 10.0**exp


def _opt(text):
    return float(text) if text != "" else None


def load_cells() -> list[Cell]:
    text = resources.files("kgyukawa").joinpath("data/reference_tables.csv").read_text()
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    cells = []
    for rec in csv.DictReader(lines):
        cells.append(Cell(
            table=int(rec["table"]), block=rec["block"], branch=rec["branch"], source=rec["source"],
            n=int(rec["n"]), l=int(rec["l"]),
            delta=_opt(rec["delta"]), v0=_opt(rec["v0"]), s0=_opt(rec["s0"]),
            lam=_opt(rec["lam"]), g=_opt(rec["g"]), state=rec["state"], text=rec["value"],
        ))
    return cells


@dataclass
class ReportRow:
    table: int
    block: str
    column: str
    inputs: dict
    computed: float | None
    paper: float
    abs_dev: float | None
    rel_dev: float | None
    status: str
    references: dict = field(default_factory=dict)
    oracle: float | None = None


@dataclass
class ComparisonReport:
    table: int
    rows: list
    summary: dict
    meta: dict

    def to_dict(self):
        return {
            "table": self.table,
            "meta": self.meta,
            "rows": [asdict(r) for r in self.rows],
            "summary": self.summary,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            table=data["table"],
            rows=[ReportRow(**r) for r in data["rows"]],
            summary=data["summary"],
            meta=data["meta"],
        )


def _round(x):
    if x is None or not math.isfinite(x):
        return None
    return float(f"{x:.10g}")


def _fmt(x):
    return "" if x is None else f"{x:.10g}"


# --- per-table solvers -----------------------------------------------------

def _mode_for(cell: Cell) -> SpectrumMode:
    if cell.table == 1:
        return SpectrumMode.VECTOR_ONLY_PDM
    if cell.table == 2:
        return SpectrumMode.GENERAL_PDM
    if cell.table == 3:
        return SpectrumMode.VECTOR_ONLY_PDM if cell.block == "V0=1;S0=0" else SpectrumMode.SCALAR_ONLY_PDM
    if cell.block == "V0=S0=2":
        return SpectrumMode.CONST_MASS_EQUAL_DOUBLED
    return SpectrumMode.CONST_MASS_UNEQUAL


def _relativistic(cell: Cell):
    """Magnitude of the root on the cell's branch, or a failure status."""
    m0, m1 = _TABLE_MASS[cell.table]
    params = ProblemParams.make(
        delta=cell.delta, v0=cell.v0 or 0.0, s0=cell.s0 or 0.0, lam=cell.lam or 0.0, m0=m0, m1=m1
    )
    qn = QuantumNumbers(cell.n, cell.l)
    try:
        levels = solve_levels(_mode_for(cell), params, qn)
    except (NoRealStateError, ComplexBranchError):
        return None, "complex-branch"
    if cell.branch == "E":
        roots = [lev.value for lev in levels if lev.value > 0]
        return (max(roots), None) if roots else (None, "no-root")
    roots = [lev.value for lev in levels if lev.value < 0]
    return (-min(roots), None) if roots else (None, "no-root")


def _nonrel_inputs(cell: Cell, convention):
    if cell.table == 5:
        return TABLE5_LAMBDA, DeltaConvention(convention).delta(cell.g, TABLE5_LAMBDA), TABLE5_UNITS
    return cell.lam, cell.delta, TABLE6_UNITS


def _nonrel(cell: Cell, convention):
    lam, delta, units = _nonrel_inputs(cell, convention)
    qn = QuantumNumbers(cell.n, cell.l)
    computed = -nonrel_energy(lam, delta, qn, units)
    try:
        level = numerov_eigenvalue(lam, delta, cell.l, cell.n, units=units, check_refinement=False)
        oracle = -level.energy
    except NotFoundError:
        oracle = None
    return computed, oracle


def _row_inputs(cell: Cell, delta=None):
    return {
        "n": cell.n, "l": cell.l,
        "delta": _round(cell.delta if delta is None else delta),
        "v0": cell.v0, "s0": cell.s0, "lambda": _round(cell.lam), "g": cell.g, "state": cell.state,
    }


def _build_row(key_cell: Cell, refs: list[Cell], convention, tolerance):
    block = key_cell.block
    oracle = None
    delta = None
    if key_cell.table in (5, 6):
        computed, oracle = _nonrel(key_cell, convention)
        status = None
        if key_cell.table == 5:
            block = f"delta={DeltaConvention(convention).value}"
            delta = _nonrel_inputs(key_cell, convention)[1]
    else:
        computed, status = _relativistic(key_cell)
    paper = key_cell.value
    abs_dev = rel_dev = None
    if computed is not None:
        abs_dev = abs(computed - paper)
        rel_dev = abs_dev / abs(paper) if paper else None
        tol = key_cell.half_ulp if tolerance is None else tolerance
        status = "match" if abs_dev <= tol * (1 + 1e-9) else "deviation"
    return ReportRow(
        table=key_cell.table,
        block=block,
        column=key_cell.branch,
        inputs=_row_inputs(key_cell, delta),
        computed=_round(computed),
        paper=paper,
        abs_dev=_round(abs_dev),
        rel_dev=_round(rel_dev),
        status=status,
        references={c.source: c.value for c in refs},
        oracle=_round(oracle),
    )


def _summary(rows):
    groups = {}
    for r in rows:
        groups.setdefault(f"{r.block}|{r.column}", []).append(r)
    out = {}
    for key in sorted(groups):
        rs = groups[key]
        devs = [r.abs_dev for r in rs if r.abs_dev is not None]
        entry = {
            "rows": len(rs),
            "max_abs_dev": _round(max(devs)) if devs else None,
            "mean_abs_dev": _round(sum(devs) / len(devs)) if devs else None,
            "status_counts": {s: sum(r.status == s for r in rs) for s in STATUSES},
        }
        ref_names = sorted({k for r in rs for k in r.references})
        oracle_devs = {}
        for name in ref_names:
            d = [abs(r.oracle - r.references[name]) for r in rs if r.oracle is not None and name in r.references]
            if d:
                oracle_devs[name] = {"max_abs_dev": _round(max(d)), "mean_abs_dev": _round(sum(d) / len(d))}
        if oracle_devs:
            entry["oracle_vs_references"] = oracle_devs
        out[key] = entry
    return out


def reproduce_table(table_id, delta_convention=None, tolerance=None, workers=None) -> ComparisonReport:
    """Recompute a printed table.

    Parameters
    ----------
    table_id : int
        One of 1..6.
    delta_convention : str, optional
        Only used for table 5; by default every convention gets its own block.
    tolerance : float, optional
        Absolute match tolerance; defaults to half a unit of the last printed digit.
    workers : int, optional
        Thread count for row evaluation; row order is fixed regardless.
    """
    try:
        table_id = int(table_id)
    except (TypeError, ValueError):
        raise UsageError(f"table id must be an integer, got {table_id!r}") from None
    if table_id not in TABLE_IDS:
        raise UsageError(f"table id must be one of {TABLE_IDS}, got {table_id}")
    cells = [c for c in load_cells() if c.table == table_id]
    keyed = {}
    order = []
    for c in cells:
        key = (c.block, c.branch, c.n, c.l, c.delta, c.v0, c.s0, c.lam, c.g)
        if key not in keyed:
            keyed[key] = {"present": None, "refs": []}
            order.append(key)
        if c.source == "present":
            keyed[key]["present"] = c
        else:
            keyed[key]["refs"].append(c)

    if table_id == 5:
        conventions = [DeltaConvention(delta_convention)] if delta_convention else list(DeltaConvention)
    else:
        conventions = [None]
    jobs = [(keyed[k]["present"], keyed[k]["refs"], conv) for conv in conventions for k in order]
    if workers is None:
        workers = min(4, os.cpu_count() or 1)

    def run(job):
        return _build_row(job[0], job[1], job[2], tolerance)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, jobs))
    else:
        rows = [run(j) for j in jobs]
    meta = {
        "data_version": DATA_VERSION,
        "delta_conventions": [c.value for c in conventions if c is not None],
        "tolerance": "half-ulp" if tolerance is None else tolerance,
    }
    return ComparisonReport(table=table_id, rows=rows, summary=_summary(rows), meta=meta)


def empty_report(table_id=0) -> ComparisonReport:
    return ComparisonReport(table=table_id, rows=[], summary={}, meta={"data_version": DATA_VERSION})


# --- serialization ---------------------------------------------------------

def report_to_json(report: ComparisonReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"


def report_from_json(text: str) -> ComparisonReport:
    return ComparisonReport.from_dict(json.loads(text))


def report_to_csv(report: ComparisonReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in report.rows:
        i = r.inputs
        refs = ";".join(f"{k}={_fmt(v)}" for k, v in sorted(r.references.items()))
        writer.writerow([
            r.table, r.block, r.column, i.get("n"), i.get("l"),
            _fmt(i.get("delta")), _fmt(i.get("v0")), _fmt(i.get("s0")), _fmt(i.get("lambda")),
            _fmt(i.get("g")), i.get("state") or "",
            _fmt(r.computed), _fmt(r.paper), _fmt(r.abs_dev), _fmt(r.rel_dev), r.status,
            refs, _fmt(r.oracle),
        ])
    return buf.getvalue()


def emit(report: ComparisonReport, fmt="csv", destination=None) -> bytes:
    """Serialize ``report``; write to ``destination`` (a path) when given.

    Returns the exact bytes produced.
    """
    if fmt == "csv":
        text = report_to_csv(report)
    elif fmt == "json":
        text = report_to_json(report)
    else:
        raise UsageError(f"unknown format {fmt!r}")
    data = text.encode("utf-8")
    if destination is not None and destination != "-":
        try:
            with open(destination, "wb") as fh:
                fh.write(data)
        except OSError as exc:
            raise OSError(f"cannot write report to {destination}: {exc.strerror}") from exc
    return data

"""Machine-readable output records and their CSV / JSON / table forms.

Field names are fixed; downstream tooling keys on them.  Lists are
semicolon-joined integers in CSV and arrays in JSON; both forms parse
back to identical :class:`OutputRecord` values.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Sequence
from dataclasses import astuple, dataclass, fields

from mlpa_design.coarray import CoarrayReport
from mlpa_design.core import format_pattern, spacing_pattern
from mlpa_design.search import (
    Alternative,
    DesignResult,
    Evaluated,
    SweepRow,
)

FORMATS = ("table", "json", "csv")

STATUS_OK = "ok"
STATUS_INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class OutputRecord:
    """One optimum of one objective."""

    N: int
    L: int
    objective: str
    partition: tuple[int, ...]
    spacing: tuple[int, ...]
    positions: tuple[int, ...]
    l_ug: int
    l_cg: int
    v_delta: int
    aperture: int
    hole_count: int
    is_joint: bool
    rank: int


RECORD_FIELDS = tuple(f.name for f in fields(OutputRecord))
_LIST_FIELDS = frozenset({"partition", "spacing", "positions"})
_BOOL_FIELDS = frozenset({"is_joint"})
_STR_FIELDS = frozenset({"objective"})


# ── Building records ─────────────────────────────────────────────────────────


def _record(result: DesignResult, objective: str, rank: int, item: Evaluated) -> OutputRecord:
    config, report = item
    return OutputRecord(
        N=config.total_elements,
        L=config.partition.levels,
        objective=objective,
        partition=config.partition.counts,
        spacing=config.spacing.spacings,
        positions=config.positions,
        l_ug=report.unique_count,
        l_cg=report.consecutive_count,
        v_delta=report.unit_spacing_count,
        aperture=config.aperture,
        hole_count=report.hole_count,
        is_joint=config.key in result.joint_keys,
        rank=rank,
    )


def records_from_result(result: DesignResult, *, all_ties: bool = False) -> list[OutputRecord]:
    """Records for the recommended optimum, or every tied optimum with *all_ties*.

    A joint query with no joint optimum yields the unique and consecutive
    fallbacks instead, each with ``is_joint`` false.
    """
    if result.fallbacks:
        return [
            rec for fb in result.fallbacks for rec in records_from_result(fb, all_ties=all_ties)
        ]
    chosen = result.optima if all_ties else result.optima[:1]
    return [
        _record(result, result.query.objective, rank, item)
        for rank, item in enumerate(chosen, start=1)
    ]


# ── Rendering ────────────────────────────────────────────────────────────────


def _cell(name: str, value: object) -> str:
    if name in _LIST_FIELDS:
        return ";".join(str(v) for v in value)  # type: ignore[attr-defined]
    if name in _BOOL_FIELDS:
        return "true" if value else "false"
    return str(value)


def _physical(positions: Sequence[int], wavelength: float) -> list[float]:
    return [p * wavelength / 2 for p in positions]


def _record_dict(record: OutputRecord, wavelength: float | None) -> dict:
    data = {name: value for name, value in zip(RECORD_FIELDS, astuple(record))}
    for name in _LIST_FIELDS:
        data[name] = list(data[name])
    if wavelength is not None:
        data["physical_positions"] = _physical(record.positions, wavelength)
    return data


def render_json(
    query: dict, records: Sequence[OutputRecord], *, wavelength: float | None = None
) -> str:
    payload = {
        "query": query,
        "results": [_record_dict(r, wavelength) for r in records],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _write_csv(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def render_csv(records: Sequence[OutputRecord], *, wavelength: float | None = None) -> str:
    header = list(RECORD_FIELDS)
    if wavelength is not None:
        header.append("physical_positions")
    rows = []
    for record in records:
        row = [_cell(name, value) for name, value in zip(RECORD_FIELDS, astuple(record))]
        if wavelength is not None:
            row.append(";".join(f"{p:g}" for p in _physical(record.positions, wavelength)))
        rows.append(row)
    return _write_csv(header, rows)


def render_table(records: Sequence[OutputRecord]) -> str:
    """Aligned human-readable table (positions omitted)."""
    columns = [name for name in RECORD_FIELDS if name != "positions"]
    body = [[_cell(name, getattr(r, name)) for name in columns] for r in records]
    return render_rows(columns, body, "table")


# ── Parsing (round trip) ─────────────────────────────────────────────────────


def _coerce(name: str, raw: object) -> object:
    if name in _LIST_FIELDS:
        if isinstance(raw, str):
            return tuple(int(v) for v in raw.split(";") if v)
        return tuple(int(v) for v in raw)  # type: ignore[union-attr]
    if name in _BOOL_FIELDS:
        return raw if isinstance(raw, bool) else raw == "true"
    if name in _STR_FIELDS:
        return str(raw)
    return int(raw)  # type: ignore[arg-type]


def _from_mapping(data: dict) -> OutputRecord:
    return OutputRecord(**{name: _coerce(name, data[name]) for name in RECORD_FIELDS})


def parse_json(text: str) -> list[OutputRecord]:
    return [_from_mapping(item) for item in json.loads(text)["results"]]


def parse_csv(text: str) -> list[OutputRecord]:
    return [_from_mapping(row) for row in csv.DictReader(io.StringIO(text))]


# ── Sweep / alternatives / compare tables ────────────────────────────────────


def sweep_header(levels: int) -> list[str]:
    return [
        "N", "L", "objective", "status",
        *(f"S_{i}" for i in range(1, levels + 1)),
        "partition", "pattern", "l_ug", "l_cg", "v_delta", "aperture", "is_joint",
    ]


def _sweep_line(n: int, levels: int, objective: str, result: DesignResult | None) -> list[str]:
    if result is None or result.recommended is None:
        return [str(n), str(levels), objective, STATUS_INFEASIBLE, *([""] * (levels + 7))]
    config = result.recommended
    report = result.optima[0][1]
    return [
        str(n), str(levels), objective, STATUS_OK,
        *(str(s) for s in config.spacing.spacings),
        _cell("partition", config.partition.counts),
        format_pattern(spacing_pattern(config.partition, config.spacing)),
        str(report.unique_count),
        str(report.consecutive_count),
        str(report.unit_spacing_count),
        str(config.aperture),
        _cell("is_joint", result.is_joint),
    ]


def render_sweep_csv(levels: int, rows: Iterable[SweepRow]) -> str:
    """Two rows per N (unique, then consecutive); one spacing column per level."""
    lines = []
    for row in rows:
        lines.append(_sweep_line(row.total_elements, levels, "unique", row.unique))
        lines.append(_sweep_line(row.total_elements, levels, "consecutive", row.consecutive))
    return _write_csv(sweep_header(levels), lines)


ALTERNATIVES_HEADER = [
    "N", "L", "spacing", "partition", "lags", "l_ug", "l_cg", "v_delta", "aperture",
]


def alternative_rows(total: int, alternatives: Iterable[Alternative]) -> list[list[str]]:
    return [
        [
            str(total),
            str(alt.config.partition.levels),
            _cell("spacing", alt.config.spacing.spacings),
            _cell("partition", alt.config.partition.counts),
            ",".join(alt.labels),
            str(alt.report.unique_count),
            str(alt.report.consecutive_count),
            str(alt.report.unit_spacing_count),
            str(alt.config.aperture),
        ]
        for alt in alternatives
    ]


def render_rows(header: Sequence[str], rows: Sequence[Sequence[str]], fmt: str) -> str:
    """Render plain string rows as CSV or as an aligned table."""
    if fmt == "csv":
        return _write_csv(header, rows)
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    return "\n".join(
        "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in [header, *rows]
    ) + "\n"


COMPARE_HEADER = [
    "family", "levels", "N", "objective", "params", "v_delta", "l_ug", "l_cg", "aperture",
]


def compare_row(
    family: str,
    levels: str,
    total: int,
    objective: str,
    params: str,
    report: CoarrayReport,
) -> list[str]:
    return [
        family, levels, str(total), objective, params,
        str(report.unit_spacing_count),
        str(report.unique_count),
        str(report.consecutive_count),
        str(report.max_lag),
    ]


def render_report(positions: Sequence[int], report: CoarrayReport, fmt: str) -> str:
    """Coarray report of an arbitrary geometry for ``mlpa analyze``."""
    summary = {
        "positions": list(positions),
        "N": report.element_count,
        "l_ug": report.unique_count,
        "l_cg": report.consecutive_count,
        "v_delta": report.unit_spacing_count,
        "hole_count": report.hole_count,
        "aperture": report.max_lag,
    }
    if fmt == "json":
        summary["lags"] = list(report.lags)
        summary["weights"] = [report.weights[lag] for lag in report.lags]
        return json.dumps(summary, indent=2) + "\n"
    width = max(len(k) for k in summary)
    lines = [
        f"{key.ljust(width)}  {_cell(key, value)}"
        for key, value in summary.items()
    ]
    return "\n".join(lines) + "\n"

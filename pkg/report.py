"""Report serialization and atomic publication of run artifacts.

Reports are frozen dataclasses from ``spectra.ambarzumyan``. They are written
in two forms that both re-read into an equal value: a line-oriented record
(``key = value`` blocks) and a JSON tree tagged with ``$type``. Floats are
always written with 17 significant digits.
"""

import csv
import io
import json
import os
from collections.abc import Mapping, Sequence
from dataclasses import MISSING, fields, is_dataclass
from pathlib import Path
from types import NoneType, UnionType
from typing import Any, get_args, get_origin

from spectra.ambarzumyan import (
    ConditionReport,
    FourierAudit,
    FourierRow,
    PerturbationRow,
    PerturbationStudy,
    SpectrumCheck,
    Tolerances,
    Verdict,
)
from spectra.config import Entry, Section, parse_config
from spectra.errors import (
    DiagnosticError,
    ReportFormatError,
    SourceLocation,
    UsageError,
)
from spectra.solver import SpectralData

RECORD_TYPES: Mapping[str, type] = {
    "condition-report": ConditionReport,
    "spectrum-check": SpectrumCheck,
    "perturbation-study": PerturbationStudy,
    "perturbation-row": PerturbationRow,
    "fourier-audit": FourierAudit,
    "fourier-row": FourierRow,
    "tolerances": Tolerances,
}
RECORD_NAMES = {kind: name for name, kind in RECORD_TYPES.items()}
UNBOUNDED_FIELDS = frozenset({"ess_inf_qhat", "ess_sup_qhat"})
VERDICT_PREFIX = "verdict"


def format_float(value: float) -> str:
    return format(float(value), ".17g")


# Record format ========================================================================


def to_record(*reports: Any) -> str:
    """Render reports as ``key = value`` blocks, one ``record =`` header each."""
    return "\n".join(_record(report) for report in reports)


def _record(report: Any) -> str:
    head = [f"record = {_record_name(report)}"]
    blocks: list[list[str]] = [head]
    for item in fields(report):
        value = getattr(report, item.name)
        if item.name == "verdicts":
            blocks.append(
                [f"{VERDICT_PREFIX}.{key} = {verdict.value}" for key, verdict in value]
            )
        elif is_dataclass(value):
            blocks.append(_prefixed(item.name, value))
        elif _is_row_table(item.type):
            blocks.extend(_prefixed(item.name, row) for row in value)
        else:
            head.append(f"{item.name} = {_scalar_text(item.name, value)}")
    return "".join("\n".join(block) + "\n\n" for block in blocks)


def _prefixed(prefix: str, value: Any) -> list[str]:
    return [
        f"{prefix}.{item.name} = {_scalar_text(item.name, getattr(value, item.name))}"
        for item in fields(value)
    ]


def _scalar_text(name: str, value: Any) -> str:
    if value is None:
        return "unbounded" if name in UNBOUNDED_FIELDS else "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Verdict):
        return value.value
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, tuple):
        return ",".join(_scalar_text(name, item) for item in value)
    return str(value)


def _record_name(report: Any) -> str:
    try:
        return RECORD_NAMES[type(report)]
    except KeyError:
        raise UsageError(
            "unsupported_report",
            f"{type(report).__name__} has no report format",
        ) from None


def _is_row_table(hint: Any) -> bool:
    arguments = get_args(hint)
    return (
        get_origin(hint) is tuple
        and len(arguments) == 2
        and arguments[1] is Ellipsis
        and is_dataclass(arguments[0])
    )


def reports_from_record(text: str) -> tuple[Any, ...]:
    try:
        return _reports_from_record(text)
    except ReportFormatError:
        raise
    except DiagnosticError as error:
        raise ReportFormatError(error.message, location=error.location) from None


def _reports_from_record(text: str) -> tuple[Any, ...]:
    document = parse_config(text)
    reports = []
    current: list[tuple[Entry, ...]] = []
    for block in document.blocks:
        if block[0].key == "record" and current:
            reports.append(_decode_record(current, text))
            current = []
        current.append(block)
    if current:
        reports.append(_decode_record(current, text))
    return tuple(reports)


def report_from_record(text: str) -> Any:
    reports = reports_from_record(text)
    if len(reports) != 1:
        raise ReportFormatError(f"Expected one record, found {len(reports)}")
    return reports[0]


def _decode_record(blocks: list[tuple[Entry, ...]], source: str) -> Any:
    head = blocks[0]
    if head[0].key != "record":
        raise ReportFormatError("Expected 'record = TYPE'", location=head[0].location)
    kind = RECORD_TYPES.get(head[0].value)
    if kind is None:
        raise ReportFormatError(
            f"Unknown record type '{head[0].value}'",
            location=head[0].value_location,
        )
    hints = {item.name: item.type for item in fields(kind)}
    values = _decode_entries(kind, Section(head[1:], source))
    rows: dict[str, list[Any]] = {}
    for block in blocks[1:]:
        prefix = block[0].key.partition(".")[0]
        for entry in block:
            if entry.key.partition(".")[0] != prefix:
                raise ReportFormatError(
                    f"Key '{entry.key}' does not belong to block '{prefix}'",
                    location=entry.location,
                )
        if prefix == VERDICT_PREFIX and "verdicts" in hints:
            values["verdicts"] = tuple(
                (entry.key.partition(".")[2], _verdict(entry)) for entry in block
            )
            continue
        hint = hints.get(prefix)
        if hint is None:
            raise ReportFormatError(
                f"Unknown block '{prefix}'", location=block[0].location
            )
        section = Section(_strip_prefix(block), source)
        if _is_row_table(hint):
            rows.setdefault(prefix, []).append(
                _decode_entries(get_args(hint)[0], section, build=True)
            )
        else:
            values[prefix] = _decode_entries(hint, section, build=True)
    for name, items in rows.items():
        values[name] = tuple(items)
    return _build(kind, values)


def _strip_prefix(block: tuple[Entry, ...]) -> list[Entry]:
    return [
        Entry(
            entry.key.partition(".")[2],
            entry.value,
            entry.location,
            entry.value_location,
        )
        for entry in block
    ]


def _decode_entries(kind: type, section: Section, *, build: bool = False) -> Any:
    values: dict[str, Any] = {}
    names = {item.name: item.type for item in fields(kind)}
    for entry in section:
        hint = names.get(entry.key)
        if hint is None:
            raise ReportFormatError(
                f"Unknown field '{entry.key}'", location=entry.location
            )
        values[entry.key] = _parse_scalar(hint, entry)
    return _build(kind, values) if build else values


def _build(kind: type, values: dict[str, Any]) -> Any:
    missing = [
        item.name
        for item in fields(kind)
        if item.name not in values and item.init and _required(item)
    ]
    if missing:
        raise ReportFormatError(
            f"{RECORD_NAMES.get(kind, kind.__name__)} is missing {', '.join(missing)}"
        )
    return kind(**values)


def _required(item: Any) -> bool:
    return item.default is MISSING and item.default_factory is MISSING


def _verdict(entry: Entry) -> Verdict:
    try:
        return Verdict(entry.value)
    except ValueError:
        raise ReportFormatError(
            f"Unknown verdict '{entry.value}'", location=entry.value_location
        ) from None


def _parse_scalar(hint: Any, entry: Entry) -> Any:
    try:
        return _scalar(hint, entry.value)
    except ValueError:
        raise ReportFormatError(
            f"Cannot read '{entry.value}' for '{entry.key}'",
            location=entry.value_location,
        ) from None


def _scalar(hint: Any, text: str) -> Any:
    if isinstance(hint, UnionType):
        if text in ("none", "unbounded"):
            return None
        (inner,) = (item for item in get_args(hint) if item is not NoneType)
        return _scalar(inner, text)
    if get_origin(hint) is tuple:
        inner = get_args(hint)[0]
        return tuple(_scalar(inner, part) for part in text.split(","))
    if hint is bool:
        if text not in ("true", "false"):
            raise ValueError(text)
        return text == "true"
    if hint is int:
        return int(text)
    if hint is float:
        return float(text)
    if hint is Verdict:
        return Verdict(text)
    return text


# JSON tree ============================================================================


def to_json(*reports: Any) -> str:
    """Tagged JSON; a single report is the document root, several form a list."""
    encoded = [_encode(report) for report in reports]
    tree = encoded[0] if len(encoded) == 1 else encoded
    return json.dumps(tree, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _encode(value: Any) -> Any:
    if is_dataclass(value) and not isinstance(value, type):
        payload: dict[str, Any] = {"$type": _record_name(value)}
        for item in fields(value):
            payload[item.name] = _encode(getattr(value, item.name))
        return payload
    if isinstance(value, Verdict):
        return value.value
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, tuple):
        return [_encode(item) for item in value]
    return value


def reports_from_json(text: str) -> tuple[Any, ...]:
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as error:
        raise ReportFormatError(
            error.msg, location=SourceLocation(error.lineno, error.colno)
        ) from None
    items = tree if isinstance(tree, list) else [tree]
    return tuple(_decode_tree(item) for item in items)


def report_from_json(text: str) -> Any:
    reports = reports_from_json(text)
    if len(reports) != 1:
        raise ReportFormatError(f"Expected one report, found {len(reports)}")
    return reports[0]


def _decode_tree(tree: Any) -> Any:
    if not isinstance(tree, Mapping):
        raise ReportFormatError("Encoded report must be an object")
    kind = RECORD_TYPES.get(tree.get("$type"))
    if kind is None:
        raise ReportFormatError(f"Unknown report type '{tree.get('$type')}'")
    return _decode(kind, tree, kind.__name__)


def _decode(hint: Any, value: Any, path: str) -> Any:
    if is_dataclass(hint):
        if not isinstance(value, Mapping) or value.get("$type") != RECORD_NAMES[hint]:
            raise ReportFormatError(f"{path}: expected {RECORD_NAMES[hint]}")
        values = {
            item.name: _decode(item.type, value[item.name], f"{path}.{item.name}")
            for item in fields(hint)
            if item.name in value
        }
        return _build(hint, values)
    if isinstance(hint, UnionType):
        if value is None:
            return None
        (inner,) = (item for item in get_args(hint) if item is not NoneType)
        return _decode(inner, value, path)
    if get_origin(hint) is tuple:
        if not isinstance(value, list):
            raise ReportFormatError(f"{path}: expected a list")
        arguments = get_args(hint)
        if len(arguments) == 2 and arguments[1] is Ellipsis:
            return tuple(
                _decode(arguments[0], item, f"{path}[{index}]")
                for index, item in enumerate(value)
            )
        if len(arguments) != len(value):
            raise ReportFormatError(f"{path}: expected {len(arguments)} items")
        return tuple(
            _decode(argument, item, path)
            for argument, item in zip(arguments, value, strict=True)
        )
    expected = {float: str, int: int, bool: bool, str: str, Verdict: str}[hint]
    if not isinstance(value, expected) or (hint is int and isinstance(value, bool)):
        raise ReportFormatError(f"{path}: expected {hint.__name__}")
    try:
        return float(value) if hint is float else hint(value)
    except ValueError:
        raise ReportFormatError(f"{path}: cannot read {value!r}") from None


# Tables ===============================================================================


def _table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [format_float(cell) if isinstance(cell, float) else cell for cell in row]
        )
    return buffer.getvalue()


def eigenvalue_table(spectra: Sequence[SpectralData]) -> str:
    """Eigenvalues by index; two spectra get a column each plus their gap."""
    if len(spectra) == 1:
        (data,) = spectra
        return _table(
            ("index", "n", "eigenvalue", "node_count"),
            [
                (pair.index, pair.ordinal, pair.eigenvalue, pair.node_count)
                for pair in data.pairs
            ],
        )
    first, second = spectra
    return _table(
        (
            "index",
            "n",
            first.pairs[0].backend.value,
            second.pairs[0].backend.value,
            "gap",
        ),
        [
            (
                left.index,
                left.ordinal,
                left.eigenvalue,
                right.eigenvalue,
                abs(left.eigenvalue - right.eigenvalue),
            )
            for left, right in zip(first.pairs, second.pairs, strict=True)
        ],
    )


def eigenfunction_table(data: SpectralData) -> str:
    grid = data.pairs[0].grid
    header = ["x"] + [f"y{pair.index}" for pair in data.pairs]
    columns = [grid] + [pair.eigenfunction for pair in data.pairs]
    rows = [
        tuple(float(column[position]) for column in columns)
        for position in range(grid.size)
    ]
    return _table(header, rows)


def fourier_table(audit: FourierAudit) -> str:
    header = [item.name for item in fields(FourierRow)]
    rows = [tuple(getattr(row, name) for name in header) for row in audit.rows]
    return _table(header, rows)


def perturbation_table(study: PerturbationStudy) -> str:
    header = [item.name for item in fields(PerturbationRow)]
    rows = [tuple(getattr(row, name) for name in header) for row in study.rows]
    return _table(header, rows)


# Publication ==========================================================================


def publish(directory: str | Path, files: Mapping[str, str]) -> tuple[Path, ...]:
    """Write every file through a temporary sibling and an atomic rename."""
    target = Path(directory)
    written = []
    try:
        target.mkdir(parents=True, exist_ok=True)
        for name in sorted(files):
            path = target / name
            temporary = target / f".{name}.tmp"
            with temporary.open("w", encoding="utf-8", newline="") as handle:
                handle.write(files[name])
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(temporary, path)
            written.append(path)
        _fsync_directory(target)
    except OSError as error:
        raise _output_error(target, error) from error
    return tuple(written)


def _fsync_directory(path: Path) -> None:
    descriptor = os.open(path, os.O_RDONLY)
    try:
        os.fsync(descriptor)
    finally:
        os.close(descriptor)


def _output_error(directory: Path, error: OSError) -> UsageError:
    return UsageError(
        "output_io",
        f"Cannot write artifacts to '{directory}': {error.strerror}",
        directory=str(directory),
    )

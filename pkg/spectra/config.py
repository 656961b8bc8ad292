"""Key-value text grammar shared by potential files, run files and reports.

    # comment
    key = value
    values = 1.0, 3.0

Blank lines separate blocks. Keys are identifiers that may contain dots and
dashes; values run to the end of the line or to a ``#`` comment.
"""

import math
import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import (
    ConfigSyntaxError,
    ConfigValueError,
    DiagnosticError,
    PotentialDefinitionError,
    SourceLocation,
    UsageError,
)
from .potential import Potential, PotentialKind, potential_from_fields

KEY_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")
TRUE_WORDS = frozenset({"true", "yes", "on"})
FALSE_WORDS = frozenset({"false", "no", "off"})

_REQUIRED: Any = object()


@dataclass(frozen=True, slots=True)
class Entry:
    key: str
    value: str
    location: SourceLocation
    value_location: SourceLocation


@dataclass(frozen=True, slots=True)
class ConfigDocument:
    source: str
    blocks: tuple[tuple[Entry, ...], ...]

    def section(self, index: int | None = None) -> "Section":
        """All entries (or one block) as a lookup table; keys must be unique."""
        if index is None:
            entries = tuple(entry for block in self.blocks for entry in block)
        else:
            entries = self.blocks[index]
        return Section(entries, self.source)


class Section:
    """Typed access to a set of entries with located value errors."""

    def __init__(self, entries: Iterable[Entry], source: str):
        self.source = source
        self._entries: dict[str, Entry] = {}
        for entry in entries:
            if entry.key in self._entries:
                raise ConfigValueError(
                    f"Duplicate key '{entry.key}'",
                    key=entry.key,
                    location=entry.location,
                    source=source,
                )
            self._entries[entry.key] = entry

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def __iter__(self) -> Iterator[Entry]:
        return iter(self._entries.values())

    def keys(self) -> tuple[str, ...]:
        return tuple(self._entries)

    def entry(self, key: str) -> Entry | None:
        return self._entries.get(key)

    def reject_unknown(self, allowed: Iterable[str]) -> None:
        known = set(allowed)
        for entry in self._entries.values():
            if entry.key not in known:
                raise ConfigValueError(
                    f"Unknown key '{entry.key}'",
                    key=entry.key,
                    location=entry.location,
                    source=self.source,
                )

    def error(
        self, entry: Entry, message: str, *, offset: int = 0
    ) -> ConfigValueError:
        location = SourceLocation(
            entry.value_location.line, entry.value_location.column + offset
        )
        return ConfigValueError(
            message, key=entry.key, location=location, source=self.source
        )

    def _lookup(self, key: str, default: Any) -> Entry | None:
        entry = self._entries.get(key)
        if entry is None and default is _REQUIRED:
            raise ConfigValueError(f"Missing required key '{key}'", key=key)
        return entry

    def text(self, key: str, default: Any = _REQUIRED) -> Any:
        entry = self._lookup(key, default)
        return default if entry is None else entry.value

    def number(self, key: str, default: Any = _REQUIRED) -> Any:
        entry = self._lookup(key, default)
        if entry is None:
            return default
        return _number(self, entry, entry.value, 0)

    def integer(self, key: str, default: Any = _REQUIRED) -> Any:
        entry = self._lookup(key, default)
        if entry is None:
            return default
        try:
            return int(entry.value)
        except ValueError:
            message = f"Expected an integer, got '{entry.value}'"
            raise self.error(entry, message) from None

    def numbers(self, key: str, default: Any = _REQUIRED) -> Any:
        entry = self._lookup(key, default)
        if entry is None:
            return default
        return tuple(
            _number(self, entry, part, offset) for part, offset in _items(entry.value)
        )

    def modes(self, key: str, default: Any = _REQUIRED) -> Any:
        """``k:a, k:a`` pairs of harmonic index and amplitude."""
        entry = self._lookup(key, default)
        if entry is None:
            return default
        terms = []
        for part, offset in _items(entry.value):
            mode, colon, amplitude = part.partition(":")
            if not colon:
                raise self.error(entry, "Expected MODE:AMPLITUDE", offset=offset)
            try:
                index = int(mode)
            except ValueError:
                raise self.error(
                    entry, f"Expected an integer mode, got '{mode}'", offset=offset
                ) from None
            terms.append(
                (index, _number(self, entry, amplitude.strip(), offset + len(mode) + 1))
            )
        return tuple(terms)

    def boolean(self, key: str, default: Any = _REQUIRED) -> Any:
        entry = self._lookup(key, default)
        if entry is None:
            return default
        word = entry.value.lower()
        if word in TRUE_WORDS:
            return True
        if word in FALSE_WORDS:
            return False
        raise self.error(entry, f"Expected true or false, got '{entry.value}'")

    def choice(
        self, key: str, choices: Sequence[str], default: Any = _REQUIRED
    ) -> Any:
        entry = self._lookup(key, default)
        if entry is None:
            return default
        if entry.value not in choices:
            allowed = ", ".join(choices)
            raise self.error(entry, f"Expected one of {allowed}, got '{entry.value}'")
        return entry.value


def _items(value: str) -> Iterator[tuple[str, int]]:
    offset = 0
    for part in value.split(","):
        stripped = part.strip()
        yield stripped, offset + (len(part) - len(part.lstrip()))
        offset += len(part) + 1


def _number(section: Section, entry: Entry, text: str, offset: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise section.error(
            entry, f"Expected a number, got '{text}'", offset=offset
        ) from None
    if not math.isfinite(value):
        raise section.error(entry, f"Number '{text}' is not finite", offset=offset)
    return value


def parse_config(source: str) -> ConfigDocument:
    blocks: list[tuple[Entry, ...]] = []
    block: list[Entry] = []
    for line_number, raw in enumerate(source.splitlines(), start=1):
        if not raw.strip():
            if block:
                blocks.append(tuple(block))
                block = []
            continue
        content = raw.split("#", 1)[0].rstrip()
        if not content.strip():
            continue
        block.append(_parse_line(content, line_number, source))
    if block:
        blocks.append(tuple(block))
    return ConfigDocument(source, tuple(blocks))


def _parse_line(content: str, line: int, source: str) -> Entry:
    start = len(content) - len(content.lstrip())
    separator = content.find("=")
    if separator < 0:
        raise ConfigSyntaxError(
            "Expected 'key = value'", SourceLocation(line, start + 1), source
        )
    key = content[:separator].strip()
    if not KEY_PATTERN.fullmatch(key):
        raise ConfigSyntaxError(
            f"Invalid key '{key}'", SourceLocation(line, start + 1), source
        )
    rest = content[separator + 1 :]
    value = rest.strip()
    value_column = separator + 2 + (len(rest) - len(rest.lstrip()))
    if not value:
        raise ConfigSyntaxError(
            f"Missing value for '{key}'", SourceLocation(line, separator + 2), source
        )
    return Entry(
        key, value, SourceLocation(line, start + 1), SourceLocation(line, value_column)
    )


def read_source(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise UsageError(
            "unreadable_file", f"Cannot read '{path}': {error.strerror}", path=str(path)
        ) from None


# Potential files ======================================================================

_POTENTIAL_KEYS = {
    PotentialKind.PIECEWISE.value: ("kind", "breakpoints", "values"),
    PotentialKind.SAMPLED.value: ("kind", "values", "bounded"),
    PotentialKind.ANALYTIC.value: (
        "kind",
        "tag",
        "value",
        "mode",
        "amplitude",
        "mean",
        "cos",
        "sin",
        "name",
    ),
}
_ANALYTIC_TAGS = ("zero", "constant", "cos", "sin", "table", "catalog")


def potential_fields(section: Section) -> dict[str, Any]:
    kind = section.choice("kind", tuple(_POTENTIAL_KEYS))
    section.reject_unknown(_POTENTIAL_KEYS[kind])
    fields: dict[str, Any] = {"kind": kind}
    if kind == PotentialKind.PIECEWISE.value:
        fields["breakpoints"] = section.numbers("breakpoints")
        fields["values"] = section.numbers("values")
    elif kind == PotentialKind.SAMPLED.value:
        fields["values"] = section.numbers("values")
        fields["bounded"] = section.boolean("bounded", True)
    else:
        tag = section.choice("tag", _ANALYTIC_TAGS)
        fields["tag"] = tag
        if tag == "constant":
            fields["value"] = section.number("value")
        elif tag in ("cos", "sin"):
            fields["mode"] = section.integer("mode", 1)
            fields["amplitude"] = section.number("amplitude", 1.0)
        elif tag == "table":
            fields["mean"] = section.number("mean", 0.0)
            fields["cos"] = section.modes("cos", ())
            fields["sin"] = section.modes("sin", ())
        elif tag == "catalog":
            fields["name"] = section.text("name")
    return fields


def parse_potential(source: str) -> Potential:
    section = parse_config(source).section()
    fields = potential_fields(section)
    try:
        return potential_from_fields(fields)
    except PotentialDefinitionError as error:
        entry = section.entry("kind")
        assert entry is not None
        raise error.with_source(entry.location, source) from None


def load_potential(path: str | Path) -> Potential:
    source = read_source(path)
    try:
        return parse_potential(source)
    except DiagnosticError as error:
        raise error.in_file(str(path)) from None

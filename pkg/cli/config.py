"""Run configuration for the slcheck command line."""

from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any

from spectra.ambarzumyan import CONDITION_TOLERANCE, PERTURBATION_EPSILONS
from spectra.config import Entry, Section, load_potential, parse_config, read_source
from spectra.errors import DiagnosticError, UsageError
from spectra.numerics import DEFAULT_TOLERANCES
from spectra.potential import CATALOG, Analytic, Potential
from spectra.solver import Backend, BoundaryCondition, SolverSettings

DEFAULT_K_MAX = 4
DEFAULT_N_MAX = 10


class Command(str, Enum):
    SPECTRUM = "spectrum"
    CHECK_CLASSIC = "check-classic"
    CHECK_MAIN = "check-main"
    CHECK_DIRICHLET = "check-dirichlet"
    FOURIER_IDENTITY = "fourier-identity"
    PERTURBATION_STUDY = "perturbation-study"


class BackendChoice(str, Enum):
    SHOOTING = "shooting"
    MATRIX = "matrix"
    BOTH = "both"

    def backends(self) -> tuple[Backend, ...]:
        if self is BackendChoice.BOTH:
            return (Backend.SHOOTING, Backend.MATRIX)
        return (Backend(self.value),)


class OutputFormat(str, Enum):
    RECORD = "record"
    JSON = "json"
    BOTH = "both"


@dataclass(frozen=True, slots=True)
class RunConfig:
    """A resolved run: potentials are loaded and paths joined to their base."""

    command: Command
    potential: Potential | None = None
    reference: Potential | None = None
    perturbation: Potential | None = None
    boundary: BoundaryCondition = field(default_factory=BoundaryCondition.dirichlet)
    n: int = 1
    k_max: int | None = None
    n_max: int = DEFAULT_N_MAX
    tol: float = CONDITION_TOLERANCE
    solver_tol: float = DEFAULT_TOLERANCES.root_tol
    grid: int = 2049
    cells: int = 1024
    backend: BackendChoice | None = None
    out: Path | None = None
    format: OutputFormat = OutputFormat.BOTH
    normalized: bool = False
    zero_mean: bool = False
    epsilons: tuple[float, ...] = PERTURBATION_EPSILONS

    def __post_init__(self) -> None:
        if self.n < 1 or self.n_max < 1:
            raise UsageError("invalid_index", "Indices n are 1-based", n=self.n)
        if self.k_max is not None and self.k_max < 0:
            raise UsageError("invalid_index", "k_max must be >= 0", k_max=self.k_max)
        if self.tol <= 0 or self.solver_tol <= 0:
            raise UsageError("invalid_tolerance", "Tolerances must be positive")
        if self.command is Command.PERTURBATION_STUDY:
            if self.perturbation is None:
                raise UsageError(
                    "missing_potential", "perturbation-study needs a perturbation"
                )
        elif self.potential is None:
            raise UsageError(
                "missing_potential", f"{self.command.value} needs a potential"
            )

    @property
    def spectrum_k_max(self) -> int:
        return DEFAULT_K_MAX if self.k_max is None else self.k_max

    def settings(self) -> SolverSettings:
        tolerances = replace(DEFAULT_TOLERANCES, root_tol=self.solver_tol)
        return SolverSettings(tolerances, grid_size=self.grid, cells=self.cells)

    def backends(self) -> tuple[Backend | None, ...]:
        """Backends to run; ``None`` lets each boundary condition choose."""
        return (None,) if self.backend is None else self.backend.backends()


def resolve_potential(text: str, base: Path | None = None) -> Potential:
    """A catalog name, ``constant:C``, or a potential file path."""
    name = text.strip()
    if name in CATALOG:
        return CATALOG[name]
    kind, colon, argument = name.partition(":")
    if colon and kind == "constant":
        try:
            return Analytic.constant(float(argument))
        except ValueError:
            raise UsageError(
                "invalid_potential", f"Bad constant potential '{text}'", text=text
            ) from None
    path = Path(name)
    if base is not None and not path.is_absolute():
        path = base / path
    return load_potential(path)


def parse_epsilons(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise UsageError(
            "invalid_epsilons", f"Bad epsilon list '{text}'", text=text
        ) from None


_RUN_KEYS = (
    "command",
    "potential",
    "reference",
    "perturbation",
    "bc",
    "n",
    "k_max",
    "n_max",
    "tol",
    "solver_tol",
    "grid",
    "cells",
    "backend",
    "out",
    "format",
    "normalized",
    "zero_mean",
    "epsilons",
)


def load_run_config(path: str | Path) -> RunConfig:
    location = Path(path)
    source = read_source(location)
    try:
        return _run_config(parse_config(source).section(), location.parent, source)
    except DiagnosticError as error:
        raise error.in_file(str(location)) from None


def _run_config(section: Section, base: Path, source: str) -> RunConfig:
    section.reject_unknown(_RUN_KEYS)
    values: dict[str, Any] = {
        "command": Command(section.choice("command", [c.value for c in Command]))
    }
    for key in ("potential", "reference", "perturbation"):
        entry = section.entry(key)
        if entry is not None:
            values[key] = _located(entry, source, resolve_potential, entry.value, base)
    entry = section.entry("bc")
    if entry is not None:
        boundary = _located(entry, source, BoundaryCondition.parse, entry.value)
        values["boundary"] = boundary
    for key in ("n", "k_max", "n_max", "grid", "cells"):
        if key in section:
            values[key] = section.integer(key)
    for key in ("tol", "solver_tol"):
        if key in section:
            values[key] = section.number(key)
    if "backend" in section:
        values["backend"] = BackendChoice(
            section.choice("backend", [c.value for c in BackendChoice])
        )
    if "format" in section:
        values["format"] = OutputFormat(
            section.choice("format", [c.value for c in OutputFormat])
        )
    if "out" in section:
        values["out"] = base / section.text("out")
    for key in ("normalized", "zero_mean"):
        if key in section:
            values[key] = section.boolean(key)
    if "epsilons" in section:
        values["epsilons"] = section.numbers("epsilons")
    entry = section.entry("command")
    assert entry is not None
    return _located(entry, source, lambda: RunConfig(**values))


def _located(entry: Entry, source: str, build: Any, *arguments: Any) -> Any:
    """Call ``build``; diagnostics without a position point at ``entry``."""
    try:
        return build(*arguments)
    except DiagnosticError as error:
        if error.location is None and error.filename is None:
            error.with_source(entry.value_location, source)
        raise

"""slcheck CLI Main Module

Runs spectra and uniqueness checks from flags or a run file and writes the
resulting tables and reports.
"""

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from report import (
    eigenfunction_table,
    eigenvalue_table,
    fourier_table,
    perturbation_table,
    publish,
    to_json,
    to_record,
)
from spectra.ambarzumyan import (
    ConditionChecker,
    Verdict,
    check_dirichlet_corollary,
    fourier_audit,
    perturbation_study,
)
from spectra.errors import DiagnosticError, NumericalError, UsageError
from spectra.potential import CATALOG, Analytic
from spectra.solver import BoundaryCondition, spectrum

from .config import (
    BackendChoice,
    Command,
    OutputFormat,
    RunConfig,
    load_run_config,
    parse_epsilons,
    resolve_potential,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_HYPOTHESIS_FAILED = 2
MIN_PERTURBATION_SLOPE = 1.8

DEMO_FIXTURES = (
    ("constant shift", Analytic.constant(2.5)),
    ("non-constant", CATALOG["cos2pi"]),
)

logger = logging.getLogger("slcheck")


@dataclass
class Outcome:
    status: int = EXIT_OK
    files: dict[str, str] = field(default_factory=dict)


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; slcheck reserves 2 for findings."""

    def error(self, message: str):  # type: ignore[override]
        raise UsageError("invalid_arguments", message, prog=self.prog)


def print_diagnostic(error: DiagnosticError, *, filename: str | None = None) -> None:
    """Render a public diagnostic for humans and JSON consumers."""
    filename = filename or error.filename
    prefix = ""
    if filename is not None:
        if error.location is not None:
            line, column = error.location.line, error.location.column
            prefix = f"{filename}:{line}:{column}: "
        else:
            prefix = f"{filename}: "
    print(f"{prefix}Error [{error.code}]: {error}")
    payload = error.to_dict()
    if filename is not None:
        payload["filename"] = filename
    print(json.dumps(payload, sort_keys=True, default=str))


# Commands =============================================================================


def _run_spectrum(config: RunConfig) -> Outcome:
    assert config.potential is not None
    settings = config.settings()
    results = [
        spectrum(
            config.potential,
            config.boundary,
            config.spectrum_k_max,
            settings,
            backend=backend,
        )
        for backend in config.backends()
    ]
    table = eigenvalue_table(results)
    print(table, end="")
    files = {"eigenvalues.csv": table}
    for position, data in enumerate(results):
        name = "eigenfunctions.csv"
        if position:
            name = f"eigenfunctions-{data.pairs[0].backend.value}.csv"
        files[name] = eigenfunction_table(data)
    return Outcome(EXIT_OK, files)


def _run_check(config: RunConfig) -> Outcome:
    assert config.potential is not None
    q = config.potential
    reference = config.reference or Analytic.zero()
    reports: list[Any] = []
    for backend in config.backends():
        checker = ConditionChecker(
            config.settings(), tolerance=config.tol, backend=backend
        )
        if config.command is Command.CHECK_CLASSIC:
            reports.append(checker.classic(q))
            if config.k_max is not None:
                reports.append(checker.classic_spectrum(q, config.k_max))
        elif config.command is Command.CHECK_MAIN:
            if config.normalized:
                check = checker.main_normalized
            else:
                check = checker.main
            reports.append(check(q, reference, config.boundary, config.n))
        else:
            reports.append(checker.dirichlet(q, config.n, zero_mean=config.zero_mean))
    return Outcome(_check_status(reports), _emit(config, reports))


def _check_status(reports: Sequence[Any]) -> int:
    status = EXIT_OK
    for report in reports:
        theorem = dict(report.verdicts)["theorem"]
        if theorem is Verdict.FAIL:
            print_diagnostic(
                NumericalError(
                    "theorem_violated",
                    "Hypotheses hold but the conclusion residual exceeds tolerance",
                    potential=report.potential,
                    residual=report.conclusion_l1_residual,
                )
            )
            return EXIT_ERROR
        if theorem is not Verdict.SKIPPED:
            continue
        if _hypothesis_failed(report):
            status = EXIT_HYPOTHESIS_FAILED
        else:
            logger.warning(
                "%s: theorem undecided, a hypothesis is unsupported", report.potential
            )
    return status


def _hypothesis_failed(report: Any) -> bool:
    """Whether a hypothesis failed, as opposed to being unsupported."""
    return any(
        verdict is Verdict.FAIL
        for name, verdict in report.verdicts
        if name not in ("conclusion", "theorem")
    )


def _run_fourier(config: RunConfig) -> Outcome:
    assert config.potential is not None
    audit = fourier_audit(config.potential, config.n_max)
    table = fourier_table(audit)
    files = _emit(config, [audit])
    files["fourier.csv"] = table
    return Outcome(EXIT_OK, files)


def _run_perturbation(config: RunConfig) -> Outcome:
    assert config.perturbation is not None
    study = perturbation_study(
        config.reference or Analytic.zero(),
        config.perturbation,
        config.boundary,
        config.n,
        config.epsilons,
        settings=config.settings(),
    )
    record = to_record(study)
    print(record, end="")
    status = EXIT_OK
    if study.slope is not None and study.slope < MIN_PERTURBATION_SLOPE:
        status = EXIT_HYPOTHESIS_FAILED
    return Outcome(
        status,
        {"perturbation.csv": perturbation_table(study), "perturbation.txt": record},
    )


def _emit(config: RunConfig, reports: Sequence[Any]) -> dict[str, str]:
    files = {}
    if config.format is not OutputFormat.JSON:
        files["report.txt"] = to_record(*reports)
    if config.format is not OutputFormat.RECORD:
        files["report.json"] = to_json(*reports)
    print(files.get("report.txt") or files["report.json"], end="")
    return files


COMMANDS: dict[Command, Callable[[RunConfig], Outcome]] = {
    Command.SPECTRUM: _run_spectrum,
    Command.CHECK_CLASSIC: _run_check,
    Command.CHECK_MAIN: _run_check,
    Command.CHECK_DIRICHLET: _run_check,
    Command.FOURIER_IDENTITY: _run_fourier,
    Command.PERTURBATION_STUDY: _run_perturbation,
}


def run(config: RunConfig) -> int:
    """Execute one configured run and publish its artifacts."""
    outcome = COMMANDS[config.command](config)
    if config.out is not None:
        for path in publish(config.out, outcome.files):
            logger.info("wrote %s", path)
    return outcome.status


def demo() -> int:
    """Walk through the Dirichlet example with a constant and a cosine potential."""
    print("Dirichlet problem: -y'' + q y = lambda y, y(0) = y(1) = 0")
    print("Reference q~ = 0: lambda~_n = (n pi)^2, y~_n = sqrt(2) sin(n pi x)")
    for label, q in DEMO_FIXTURES:
        report = check_dirichlet_corollary(q, 1)
        print()
        print(f"# {label}: q = {report.potential}")
        print(
            "sine-moment residual: |lambda_1 - pi^2 - 2 int q sin^2(pi x)| = "
            f"{report.residual_inner:.3e}"
        )
        print(f"theorem: {report.verdict('theorem').value}")
        print(to_record(report), end="")
    return EXIT_OK


# Arguments ============================================================================


def _common_arguments() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--potential", help="catalog name, constant:C or file")
    common.add_argument("--reference", help="reference potential q~ (default zero)")
    common.add_argument("--perturbation", help="perturbation p for the study")
    common.add_argument("--bc", help="dirichlet, neumann, robin:A,B, periodic, ...")
    common.add_argument("--n", type=int, help="1-based eigenvalue index")
    common.add_argument("--k-max", type=int, help="largest 0-based index")
    common.add_argument("--n-max", type=int, help="largest Fourier mode")
    common.add_argument("--tol", type=float, help="condition tolerance")
    common.add_argument("--solver-tol", type=float, help="eigenvalue tolerance")
    common.add_argument("--grid", type=int, help="eigenfunction grid nodes")
    common.add_argument("--cells", type=int, help="finite-difference cells")
    common.add_argument(
        "--backend", choices=[choice.value for choice in BackendChoice]
    )
    common.add_argument("--out", help="artifact directory")
    common.add_argument("--format", choices=[choice.value for choice in OutputFormat])
    common.add_argument("--normalized", action="store_true", default=None)
    common.add_argument("--zero-mean", action="store_true", default=None)
    common.add_argument("--epsilons", help="comma-separated perturbation sizes")
    common.add_argument(
        "--verbose", action="store_true", default=argparse.SUPPRESS
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="slcheck")
    parser.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_arguments()
    for command in Command:
        commands.add_parser(command.value, parents=[common])
    run_parser = commands.add_parser("run", parents=[common])
    run_parser.add_argument("config", help="run configuration file")
    commands.add_parser("demo")
    return parser


def _overrides(arguments: argparse.Namespace) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for name in ("potential", "reference", "perturbation"):
        text = getattr(arguments, name)
        if text is not None:
            values[name] = resolve_potential(text)
    if arguments.bc is not None:
        values["boundary"] = BoundaryCondition.parse(arguments.bc)
    for name in (
        "n",
        "k_max",
        "n_max",
        "tol",
        "solver_tol",
        "grid",
        "cells",
        "normalized",
        "zero_mean",
    ):
        value = getattr(arguments, name)
        if value is not None:
            values[name] = value
    if arguments.backend is not None:
        values["backend"] = BackendChoice(arguments.backend)
    if arguments.format is not None:
        values["format"] = OutputFormat(arguments.format)
    if arguments.out is not None:
        values["out"] = Path(arguments.out)
    if arguments.epsilons is not None:
        values["epsilons"] = parse_epsilons(arguments.epsilons)
    return values


def config_from_arguments(arguments: argparse.Namespace) -> RunConfig:
    """Flags override the values of a run file."""
    overrides = _overrides(arguments)
    if arguments.command == "run":
        return replace(load_run_config(arguments.config), **overrides)
    return RunConfig(Command(arguments.command), **overrides)


def configure_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    level = logging.DEBUG if verbose else logging.WARNING
    for name in ("spectra", "slcheck"):
        named = logging.getLogger(name)
        named.handlers[:] = [handler]
        named.setLevel(level)
        named.propagate = False


def main(argv: Sequence[str] | None = None) -> int:
    """Run one slcheck command and return its exit status."""
    try:
        arguments = build_parser().parse_args(argv)
        configure_logging(getattr(arguments, "verbose", False))
        if arguments.command == "demo":
            return demo()
        return run(config_from_arguments(arguments))
    except DiagnosticError as error:
        print_diagnostic(error)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())

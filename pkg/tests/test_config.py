import tempfile
import unittest
from pathlib import Path

from cli.config import (
    BackendChoice,
    Command,
    OutputFormat,
    RunConfig,
    load_run_config,
    parse_epsilons,
    resolve_potential,
)
from spectra.config import load_potential, parse_config, parse_potential
from spectra.errors import (
    ConfigSyntaxError,
    ConfigValueError,
    PotentialDefinitionError,
    UsageError,
)
from spectra.potential import CATALOG, Analytic, PiecewiseConstant, Sampled
from spectra.solver import Backend, BoundaryCondition

PROBLEMS = Path(__file__).resolve().parents[1] / "problems"


class GrammarTests(unittest.TestCase):
    def test_blocks_comments_and_locations(self):
        document = parse_config(
            "# heading\n"
            "kind = piecewise   # trailing\n"
            "  values = 1, 3\n"
            "\n"
            "\n"
            "record.x = 2\n"
        )
        self.assertEqual(len(document.blocks), 2)
        first, second = document.blocks
        self.assertEqual([entry.key for entry in first], ["kind", "values"])
        self.assertEqual(first[0].value, "piecewise")
        self.assertEqual((first[1].location.line, first[1].location.column), (3, 3))
        self.assertEqual(first[1].value_location.column, 12)
        self.assertEqual(second[0].key, "record.x")

    def test_syntax_errors_report_line_and_column(self):
        cases = [
            ("kind = analytic\n  missing equals\n", 2, 3),
            ("9key = 1\n", 1, 1),
            ("kind = analytic\ntag =\n", 2, 6),
        ]
        for source, line, column in cases:
            with self.subTest(source=source):
                with self.assertRaises(ConfigSyntaxError) as caught:
                    parse_config(source)
                self.assertEqual(caught.exception.code, "config_syntax")
                self.assertEqual(
                    (caught.exception.line, caught.exception.column), (line, column)
                )
                self.assertIn("^", str(caught.exception))

    def test_typed_accessors(self):
        section = parse_config(
            "n = 3\nx = 2.5\nxs = 1, -2.5e-1\nflag = yes\n"
            "harmonics = 1:0.5, 3:-2\nmode = fast\n"
        ).section()
        self.assertEqual(section.integer("n"), 3)
        self.assertEqual(section.number("x"), 2.5)
        self.assertEqual(section.numbers("xs"), (1.0, -0.25))
        self.assertTrue(section.boolean("flag"))
        self.assertEqual(section.modes("harmonics"), ((1, 0.5), (3, -2.0)))
        self.assertEqual(section.choice("mode", ("fast", "slow")), "fast")
        self.assertEqual(section.number("missing", 7.0), 7.0)
        with self.assertRaises(ConfigValueError) as caught:
            section.text("absent")
        self.assertIsNone(caught.exception.location)

    def test_value_errors_point_at_the_offending_token(self):
        cases = [
            ("xs = 1, 2, oops\n", "numbers", 12),
            ("n = 2.5\n", "integer", 5),
            ("flag = maybe\n", "boolean", 8),
            ("harmonics = 1:0.5, 2\n", "modes", 20),
            ("x = inf\n", "number", 5),
        ]
        for source, accessor, column in cases:
            section = parse_config(source).section()
            key = source.split("=")[0].strip()
            with self.subTest(source=source):
                with self.assertRaises(ConfigValueError) as caught:
                    getattr(section, accessor)(key)
                self.assertEqual(caught.exception.location.line, 1)
                self.assertEqual(caught.exception.location.column, column)

    def test_duplicate_and_unknown_keys(self):
        with self.assertRaises(ConfigValueError) as caught:
            parse_config("a = 1\nb = 2\na = 3\n").section()
        self.assertEqual(caught.exception.location.line, 3)
        section = parse_config("a = 1\nextra = 2\n").section()
        with self.assertRaises(ConfigValueError) as caught:
            section.reject_unknown(["a"])
        self.assertEqual(caught.exception.details, {"key": "extra"})


class PotentialFileTests(unittest.TestCase):
    def test_problem_potentials_load(self):
        piecewise = load_potential(PROBLEMS / "piecewise13.pot")
        self.assertIsInstance(piecewise, PiecewiseConstant)
        self.assertEqual(piecewise.describe(), CATALOG["piecewise13"].describe())
        unbounded = load_potential(PROBLEMS / "inverse-sqrt.pot")
        self.assertIsInstance(unbounded, Sampled)
        self.assertFalse(unbounded.bounded)
        self.assertEqual(load_potential(PROBLEMS / "cos2pi.pot"), CATALOG["cos2pi"])

    def test_analytic_tags(self):
        cases = [
            ("kind = analytic\ntag = zero\n", Analytic.zero()),
            ("kind = analytic\ntag = constant\nvalue = 5\n", Analytic.constant(5.0)),
            (
                "kind = analytic\ntag = sin\nmode = 2\namplitude = 0.5\n",
                Analytic.sin_mode(2, 0.5),
            ),
            (
                "kind = analytic\ntag = table\nmean = 0.5\n"
                "cos = 1:0.75\nsin = 2:-0.5\n",
                CATALOG["table"],
            ),
            ("kind = analytic\ntag = catalog\nname = cos4pi\n", CATALOG["cos4pi"]),
        ]
        for source, expected in cases:
            with self.subTest(source=source):
                self.assertEqual(parse_potential(source), expected)

    def test_invalid_definitions_are_located_at_kind(self):
        source = (
            "# bad\nkind = piecewise\n"
            "breakpoints = 0, 0.7, 0.5, 1\nvalues = 1, 2, 3\n"
        )
        with self.assertRaises(PotentialDefinitionError) as caught:
            parse_potential(source)
        self.assertEqual(caught.exception.location.line, 2)

    def test_unknown_keys_and_kinds(self):
        with self.assertRaises(ConfigValueError) as caught:
            parse_potential("kind = sampled\nvalues = 1, 2, 3\ncolour = red\n")
        self.assertEqual(caught.exception.location.line, 3)
        with self.assertRaises(ConfigValueError):
            parse_potential("kind = spline\n")

    def test_load_errors_name_the_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "broken.pot"
            path.write_text("kind = analytic\ntag = constant\nvalue = abc\n")
            with self.assertRaises(ConfigValueError) as caught:
                load_potential(path)
            self.assertEqual(caught.exception.filename, str(path))
            self.assertEqual(caught.exception.to_dict()["location"]["line"], 3)
            with self.assertRaises(UsageError) as missing:
                load_potential(Path(directory) / "absent.pot")
            self.assertEqual(missing.exception.code, "unreadable_file")


class RunConfigTests(unittest.TestCase):
    def test_problem_run_files(self):
        config = load_run_config(PROBLEMS / "check-main.run")
        self.assertIs(config.command, Command.CHECK_MAIN)
        self.assertEqual(config.boundary, BoundaryCondition.neumann())
        self.assertEqual(config.n, 2)
        self.assertEqual(config.out, PROBLEMS / "out" / "check-main")
        self.assertEqual(config.reference.describe(), CATALOG["piecewise13"].describe())

        spectrum = load_run_config(PROBLEMS / "spectrum.run")
        self.assertIs(spectrum.backend, BackendChoice.BOTH)
        self.assertEqual(spectrum.backends(), (Backend.SHOOTING, Backend.MATRIX))
        self.assertEqual(spectrum.spectrum_k_max, 4)

        study = load_run_config(PROBLEMS / "perturbation.run")
        self.assertIs(study.command, Command.PERTURBATION_STUDY)
        self.assertEqual(study.epsilons, (0.1, 0.01, 0.001))
        self.assertIsNone(study.potential)

    def test_defaults(self):
        config = RunConfig(Command.SPECTRUM, potential=CATALOG["zero"])
        self.assertEqual(config.backends(), (None,))
        self.assertIs(config.format, OutputFormat.BOTH)
        self.assertEqual(config.spectrum_k_max, 4)
        settings = config.settings()
        self.assertEqual(settings.grid_size, 2049)
        self.assertEqual(settings.tolerances.root_tol, 1e-9)

    def test_invalid_runs(self):
        cases = [
            {"command": Command.CHECK_MAIN},
            {"command": Command.PERTURBATION_STUDY, "potential": CATALOG["zero"]},
            {"command": Command.SPECTRUM, "potential": CATALOG["zero"], "n": 0},
            {"command": Command.SPECTRUM, "potential": CATALOG["zero"], "tol": 0.0},
        ]
        for arguments in cases:
            with self.subTest(arguments=arguments), self.assertRaises(UsageError):
                RunConfig(**arguments)

    def test_run_file_errors_are_located(self):
        cases = [
            ("command = spectrum\npotential = nowhere.pot\n", 2, 13),
            ("command = spectrum\npotential = zero\nbc = sideways\n", 3, 6),
            ("command = check-main\nn = 1\n", 1, 11),
            ("command = spectrum\npotential = zero\nspeed = 3\n", 3, 1),
        ]
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "bad.run"
            for source, line, column in cases:
                path.write_text(source)
                with self.subTest(source=source):
                    with self.assertRaises((UsageError, ConfigValueError)) as caught:
                        load_run_config(path)
                    location = caught.exception.location
                    self.assertEqual((location.line, location.column), (line, column))
                    self.assertEqual(caught.exception.filename, str(path))

    def test_potential_references(self):
        self.assertIs(resolve_potential("cos2pi"), CATALOG["cos2pi"])
        self.assertEqual(resolve_potential("constant:2.5"), Analytic.constant(2.5))
        resolved = resolve_potential("piecewise13.pot", PROBLEMS)
        self.assertIsInstance(resolved, PiecewiseConstant)
        with self.assertRaises(UsageError):
            resolve_potential("constant:abc")

    def test_epsilons(self):
        self.assertEqual(parse_epsilons("0.1, 0.05"), (0.1, 0.05))
        with self.assertRaises(UsageError):
            parse_epsilons("0.1, big")


if __name__ == "__main__":
    unittest.main()

import math
import unittest

import numpy as np

from spectra.ambarzumyan import (
    ConditionChecker,
    Theorem,
    Verdict,
    check_classic,
    check_classic_spectrum,
    check_dirichlet_corollary,
    check_dirichlet_zero_mean,
    check_extremal_condition,
    check_first_condition,
    check_lowest_extremal,
    check_lowest_inner,
    check_main,
    check_main_normalized,
    perturbation_study,
)
from spectra.config import load_potential
from spectra.errors import UnsupportedCombinationError, UsageError
from spectra.potential import CATALOG, Analytic, PiecewiseConstant, add, shift
from spectra.solver import Backend, BoundaryCondition, SolverSettings

from .test_config import PROBLEMS

SETTINGS = SolverSettings(cells=256)
DIRICHLET = BoundaryCondition.dirichlet()
NEUMANN = BoundaryCondition.neumann()
ROBIN = BoundaryCondition.robin(math.pi / 4, math.pi / 4)
PERIODIC = BoundaryCondition.periodic()


class ForwardTests(unittest.TestCase):
    """A constant shift of the reference satisfies every hypothesis."""

    def test_constant_shifts_pass_every_gate(self):
        rng = np.random.default_rng(20240521)
        shifts = rng.uniform(-10.0, 10.0, 10)
        checker = ConditionChecker(SETTINGS)
        for name in ("zero", "cos2pi", "piecewise13"):
            reference = CATALOG[name]
            for bc in (DIRICHLET, NEUMANN, ROBIN, PERIODIC):
                for n in (1, 2, 3):
                    for c in shifts:
                        report = checker.main(shift(reference, c), reference, bc, n)
                        with self.subTest(q=name, bc=bc.label, n=n, c=c):
                            self.assertEqual(
                                dict(report.verdicts),
                                {
                                    "inner": Verdict.PASS,
                                    "extremal": Verdict.PASS,
                                    "conclusion": Verdict.PASS,
                                    "theorem": Verdict.PASS,
                                },
                            )
                            self.assertAlmostEqual(report.delta, c, delta=1e-6)
                            self.assertLess(report.proof_identity_residual, 1e-6)

    def test_report_fields(self):
        report = check_main(
            shift(CATALOG["cos2pi"], 3.0), CATALOG["cos2pi"], NEUMANN, 2
        )
        self.assertEqual(report.theorem, Theorem.MAIN.value)
        self.assertEqual(report.reference, "cos2pi")
        self.assertEqual(report.boundary, "neumann")
        self.assertEqual(report.backend, Backend.SHOOTING.value)
        self.assertEqual((report.n, report.index), (2, 1))
        self.assertEqual(report.hypotheses, ("inner", "extremal"))
        self.assertAlmostEqual(report.ess_inf_qhat, 3.0)
        self.assertAlmostEqual(report.ess_sup_qhat, 3.0)
        self.assertIsNone(report.mean_residual)
        self.assertTrue(report.hypotheses_pass)

    def test_normalized_variant_needs_equal_means(self):
        reference = CATALOG["piecewise13"]
        same = check_main_normalized(reference, reference, DIRICHLET, 1)
        self.assertIs(same.verdict("mean"), Verdict.PASS)
        self.assertIs(same.verdict("normalized"), Verdict.PASS)
        self.assertIs(same.verdict("theorem"), Verdict.PASS)
        moved = check_main_normalized(shift(reference, 1.0), reference, DIRICHLET, 1)
        self.assertIs(moved.verdict("mean"), Verdict.FAIL)
        self.assertIs(moved.verdict("normalized"), Verdict.SKIPPED)
        self.assertIs(moved.verdict("theorem"), Verdict.SKIPPED)

    def test_lowest_eigenvalue_variants(self):
        reference = CATALOG["cos2pi"]
        q = shift(reference, -1.5)
        inner = check_lowest_inner(q, reference, ROBIN)
        extremal = check_lowest_extremal(q, reference, ROBIN)
        self.assertEqual(inner.hypotheses, ("inner",))
        self.assertEqual(extremal.hypotheses, ("extremal",))
        self.assertIs(inner.verdict("theorem"), Verdict.PASS)
        self.assertIs(extremal.verdict("theorem"), Verdict.PASS)
        self.assertEqual(extremal.extremal_branch, "inf")

    def test_single_conditions(self):
        reference = CATALOG["cos2pi"]
        q = shift(reference, 2.0)
        first = check_first_condition(q, reference, NEUMANN, 2)
        extremal = check_extremal_condition(q, reference, NEUMANN, 2)
        self.assertIs(first.verdict, Verdict.PASS)
        self.assertIs(extremal.verdict, Verdict.PASS)
        self.assertLess(first.value, 1e-6)

    def test_degenerate_references_are_flagged(self):
        report = check_main(shift(CATALOG["zero"], 1.0), CATALOG["zero"], PERIODIC, 2)
        self.assertTrue(report.degenerate)
        self.assertEqual(report.backend, Backend.MATRIX.value)
        self.assertIs(report.verdict("theorem"), Verdict.PASS)

    def test_highest_index_on_coupled_conditions(self):
        checker = ConditionChecker(SETTINGS)
        zero = CATALOG["zero"]
        reference = checker.reference(zero, PERIODIC, 50)
        self.assertEqual(len(reference.eigenfunctions), 2)
        for bc in (PERIODIC, BoundaryCondition.antiperiodic()):
            with self.subTest(bc=bc.label):
                first = checker.first_condition(shift(zero, 1.0), zero, bc, 51)
                self.assertIs(first.verdict, Verdict.PASS)
                with self.assertRaises(UsageError):
                    checker.first_condition(shift(zero, 1.0), zero, bc, 52)


class ContrapositiveTests(unittest.TestCase):
    """Non-constant differences break a hypothesis instead of the theorem."""

    def test_non_constant_perturbations_fail_a_hypothesis(self):
        checker = ConditionChecker(SETTINGS)
        p = Analytic.cos_mode(2, 0.5)
        for name in ("zero", "cos2pi"):
            reference = CATALOG[name]
            q = add(reference, p)
            for bc in (DIRICHLET, NEUMANN):
                with self.subTest(q=name, bc=bc.label):
                    report = checker.main(q, reference, bc, 1)
                    self.assertTrue(report.hypothesis_failed)
                    self.assertIs(report.verdict("extremal"), Verdict.FAIL)
                    self.assertIs(report.verdict("conclusion"), Verdict.FAIL)
                    self.assertIs(report.verdict("theorem"), Verdict.SKIPPED)

    def test_large_conclusion_residuals_come_with_a_failed_hypothesis(self):
        checker = ConditionChecker(SETTINGS)
        perturbations = [
            Analytic.cos_mode(1, 0.5),
            Analytic.cos_mode(2, 0.5),
            Analytic(sin_terms=((1, 0.3),)),
            Analytic(cos_terms=((3, 1.0),)),
            Analytic(0.2, cos_terms=((1, 0.4), (2, -0.3))),
        ]
        for name in ("zero", "cos2pi", "table"):
            reference = CATALOG[name]
            for p in perturbations:
                for bc in (DIRICHLET, NEUMANN):
                    report = checker.main(add(reference, p), reference, bc, 1)
                    with self.subTest(q=name, p=p.describe(), bc=bc.label):
                        self.assertGreater(report.conclusion_l1_residual, 1e-3)
                        worst = max(
                            report.residual_inner, report.residual_extremal or 0.0
                        )
                        self.assertGreater(worst, 1e-6)
                        self.assertIs(report.verdict("theorem"), Verdict.SKIPPED)

    def test_periodic_perturbations_fail_a_hypothesis(self):
        checker = ConditionChecker(SETTINGS)
        q = add(CATALOG["zero"], Analytic.cos_mode(2, 0.5))
        for n in (1, 2, 3):
            with self.subTest(n=n):
                report = checker.main(q, CATALOG["zero"], PERIODIC, n)
                self.assertEqual(report.degenerate, n > 1)
                self.assertTrue(report.hypothesis_failed)
                self.assertIs(report.verdict("theorem"), Verdict.SKIPPED)

    def test_loose_tolerance_exposes_a_theorem_failure(self):
        report = check_main(CATALOG["cos2pi"], CATALOG["zero"], DIRICHLET, 1, tol=0.6)
        self.assertTrue(report.hypotheses_pass)
        self.assertIs(report.verdict("conclusion"), Verdict.FAIL)
        self.assertIs(report.verdict("theorem"), Verdict.FAIL)

    def test_unbounded_differences_are_unsupported(self):
        q = load_potential(PROBLEMS / "inverse-sqrt.pot")
        extremal = check_extremal_condition(q, CATALOG["zero"], DIRICHLET, 1)
        self.assertIs(extremal.verdict, Verdict.UNSUPPORTED)
        self.assertIsNone(extremal.value)
        report = check_main(q, CATALOG["zero"], DIRICHLET, 1)
        self.assertIs(report.verdict("extremal"), Verdict.UNSUPPORTED)
        self.assertIsNone(report.residual_extremal)
        self.assertIs(report.verdict("theorem"), Verdict.SKIPPED)


class ClassicTests(unittest.TestCase):
    def test_constant_potentials_pass(self):
        report = check_classic(CATALOG["constant5"])
        self.assertEqual(report.theorem, Theorem.CLASSIC.value)
        self.assertAlmostEqual(report.eigenvalue, 5.0, delta=1e-8)
        self.assertIs(report.verdict("theorem"), Verdict.PASS)

    def test_non_constant_potentials_fail_the_hypothesis(self):
        report = check_classic(CATALOG["cos2pi"])
        self.assertLess(report.eigenvalue, 0.0)
        self.assertIs(report.verdict("inner"), Verdict.FAIL)
        self.assertIs(report.verdict("theorem"), Verdict.SKIPPED)

    def test_whole_spectrum_variant(self):
        free = check_classic_spectrum(CATALOG["zero"], 3)
        self.assertEqual(dict(free.verdicts)["theorem"], Verdict.PASS)
        self.assertLess(free.residual, 1e-6)
        moved = check_classic_spectrum(CATALOG["constant5"], 2)
        self.assertEqual(dict(moved.verdicts)["spectrum"], Verdict.FAIL)
        self.assertEqual(dict(moved.verdicts)["theorem"], Verdict.SKIPPED)
        for deviation in moved.deviations:
            self.assertAlmostEqual(deviation, 5.0, delta=1e-6)


class DirichletTests(unittest.TestCase):
    def test_sine_moment_closed_forms(self):
        cases = [(1, -0.5), (2, 0.0)]
        for n, moment in cases:
            with self.subTest(n=n):
                report = check_dirichlet_corollary(CATALOG["cos2pi"], n)
                self.assertAlmostEqual(report.inner_product_value, moment, places=10)
                self.assertAlmostEqual(report.reference_eigenvalue, (n * math.pi) ** 2)
                self.assertIs(report.verdict("theorem"), Verdict.SKIPPED)

    def test_constant_potentials_satisfy_the_corollary(self):
        report = check_dirichlet_corollary(Analytic.constant(2.5), 1)
        self.assertIs(report.verdict("theorem"), Verdict.PASS)
        self.assertLess(report.residual_inner, 1e-7)
        self.assertEqual(report.reference, "zero")

    def test_zero_mean_variant(self):
        zero = check_dirichlet_zero_mean(CATALOG["zero"], 2)
        self.assertEqual(zero.theorem, Theorem.DIRICHLET_ZERO_MEAN.value)
        self.assertIs(zero.verdict("theorem"), Verdict.PASS)
        constant = check_dirichlet_zero_mean(Analytic.constant(2.5), 1)
        self.assertIs(constant.verdict("mean"), Verdict.FAIL)
        self.assertIs(constant.verdict("theorem"), Verdict.SKIPPED)

    def test_corollary_agrees_with_the_general_check(self):
        fixtures = [
            Analytic.constant(2.5),
            CATALOG["cos2pi"],
            CATALOG["table"],
            CATALOG["piecewise13"],
        ]
        for q in fixtures:
            for n in (1, 2):
                corollary = check_dirichlet_corollary(q, n)
                general = check_main(q, CATALOG["zero"], DIRICHLET, n)
                with self.subTest(q=q.describe(), n=n):
                    for field in (
                        "delta",
                        "inner_product_value",
                        "residual_inner",
                        "conclusion_l1_residual",
                    ):
                        self.assertAlmostEqual(
                            getattr(corollary, field),
                            getattr(general, field),
                            delta=1e-7,
                            msg=field,
                        )

    def test_matrix_backend_reference_grid(self):
        checker = ConditionChecker(SETTINGS, backend=Backend.MATRIX)
        report = checker.dirichlet(Analytic.constant(1.0), 1)
        self.assertEqual(report.backend, Backend.MATRIX.value)
        self.assertIs(report.verdict("theorem"), Verdict.PASS)


class UsageTests(unittest.TestCase):
    def test_invalid_arguments(self):
        with self.assertRaises(UsageError):
            ConditionChecker(tolerance=0.0)
        with self.assertRaises(UsageError):
            check_main(CATALOG["zero"], CATALOG["zero"], DIRICHLET, 0)
        with self.assertRaises(UnsupportedCombinationError):
            ConditionChecker(backend=Backend.SHOOTING).main(
                CATALOG["zero"], CATALOG["zero"], PERIODIC, 1
            )


class PerturbationTests(unittest.TestCase):
    def test_errors_decay_quadratically(self):
        study = perturbation_study(CATALOG["zero"], CATALOG["table"], DIRICHLET, 1)
        self.assertEqual([row.epsilon for row in study.rows], [0.1, 0.01, 0.001])
        self.assertAlmostEqual(study.reference_eigenvalue, math.pi**2, delta=1e-10)
        self.assertAlmostEqual(study.first_order, 0.5 - 0.375, places=9)
        self.assertIsNotNone(study.slope)
        self.assertGreater(study.slope, 1.8)
        self.assertLess(study.slope, 2.2)

    def test_first_order_prediction_across_fixtures(self):
        step = PiecewiseConstant([0.0, 0.3, 1.0], [1.0, -1.0])
        cases = [
            ("zero", CATALOG["table"], NEUMANN, 2),
            ("zero", CATALOG["cos2pi"], DIRICHLET, 2),
            ("cos2pi", CATALOG["sin2pi"], DIRICHLET, 1),
            ("cos2pi", CATALOG["table"], ROBIN, 2),
            ("table", CATALOG["cos4pi"], NEUMANN, 1),
            ("constant5", CATALOG["cos2pi"], ROBIN, 3),
            ("piecewise13", step, DIRICHLET, 1),
            ("piecewise13", step, NEUMANN, 2),
            ("zero", step, ROBIN, 1),
        ]
        for name, p, bc, n in cases:
            with self.subTest(q=name, p=p.describe(), bc=bc.label, n=n):
                study = perturbation_study(CATALOG[name], p, bc, n)
                self.assertIsNotNone(study.slope)
                self.assertGreaterEqual(study.slope, 1.8)

    def test_invalid_studies(self):
        with self.assertRaises(UnsupportedCombinationError):
            perturbation_study(CATALOG["zero"], CATALOG["cos2pi"], PERIODIC, 1)
        with self.assertRaises(UsageError):
            perturbation_study(CATALOG["zero"], CATALOG["cos2pi"], DIRICHLET, 1, [0.1])
        with self.assertRaises(UsageError):
            perturbation_study(
                CATALOG["zero"], CATALOG["cos2pi"], DIRICHLET, 1, [0.1, -0.1]
            )


if __name__ == "__main__":
    unittest.main()

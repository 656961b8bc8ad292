import math
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from spectra.errors import NumericalError, UsageError
from spectra.numerics import (
    SymTridiag,
    ToleranceBundle,
    bisect_monotone,
    golden_section,
    integrate_ode,
    richardson,
    simpson,
    simpson_antiderivative,
    sturm_count,
    tridiag_eigen,
)
from spectra.potential import CATALOG, Analytic


class QuadratureTests(unittest.TestCase):
    def test_simpson_is_exact_for_cubics(self):
        xs = np.linspace(0.0, 1.0, 9)
        cases = [
            (np.ones_like(xs), 1.0),
            (xs**2, 1.0 / 3.0),
            (xs**3 - 2.0 * xs, 0.25 - 1.0),
        ]
        for samples, expected in cases:
            with self.subTest(expected=expected):
                self.assertAlmostEqual(simpson(samples).value, expected, places=14)

    def test_simpson_of_sine_squared_converges(self):
        xs = np.linspace(0.0, 1.0, 2049)
        result = simpson(np.sin(math.pi * xs) ** 2)
        self.assertAlmostEqual(result.value, 0.5, places=12)
        self.assertLess(result.error, 1e-10)

    def test_simpson_rejects_even_or_tiny_grids(self):
        for count in (0, 1, 2, 4, 10):
            with self.subTest(count=count):
                with self.assertRaises(UsageError) as caught:
                    simpson(np.ones(count))
                self.assertEqual(caught.exception.code, "even_node_count")

    def test_simpson_error_estimate_without_halving(self):
        xs = np.linspace(0.0, 1.0, 7)
        result = simpson(np.exp(xs))
        self.assertAlmostEqual(result.value, math.e - 1.0, places=4)
        self.assertGreater(result.error, 0.0)

    def test_error_estimates_are_conservative_on_smooth_tables(self):
        for name, q in CATALOG.items():
            if not isinstance(q, Analytic):
                continue
            exact = q.mean
            for k, a in q.cos_terms:
                exact += a / (1.0 + (2.0 * math.pi * k) ** 2)
            for k, b in q.sin_terms:
                omega = 2.0 * math.pi * k
                exact -= b * omega / (1.0 + omega**2)
            exact *= math.e - 1.0
            for count in (65, 129, 257):
                xs = np.linspace(0.0, 1.0, count)
                with self.subTest(q=name, nodes=count):
                    result = simpson(np.exp(xs) * q.sample(xs))
                    self.assertLessEqual(
                        abs(result.value - exact), 2.0 * result.error + 1e-14
                    )

    def test_antiderivative_matches_panel_sums(self):
        xs = np.linspace(0.0, 1.0, 17)
        samples = xs**2
        points = np.array([0.0, 0.25, 0.5, 1.0])
        cumulative = simpson_antiderivative(samples, points)
        np.testing.assert_allclose(cumulative, points**3 / 3.0, atol=1e-14)

    def test_antiderivative_inside_a_panel_is_exact_for_quadratics(self):
        xs = np.linspace(0.0, 1.0, 5)
        values = simpson_antiderivative(1.0 + xs**2, [0.1, 0.3, 0.6])
        expected = [x + x**3 / 3.0 for x in (0.1, 0.3, 0.6)]
        np.testing.assert_allclose(values, expected, atol=1e-14)

    def test_richardson_removes_leading_orders(self):
        def approximation(h):
            return 2.0 + 3.0 * h**2 - 5.0 * h**4

        values = [approximation(h) for h in (0.4, 0.2, 0.1)]
        self.assertAlmostEqual(richardson(values), 2.0, places=12)
        with self.assertRaises(UsageError):
            richardson([])


class IntegratorTests(unittest.TestCase):
    def test_linear_angle_is_integrated_exactly(self):
        solution = integrate_ode(lambda _x, y: 1.0, 0.0, stop=2.0)
        self.assertAlmostEqual(solution.y, 2.0, places=14)
        self.assertEqual(solution.rejected, 0)

    def test_exponential_with_dense_stops(self):
        stops = [0.0, 0.25, 0.5, 1.0]
        solution = integrate_ode(lambda _x, y: y, 1.0, stops=stops, knots=[0.3])
        self.assertEqual(len(solution.samples), len(stops))
        for x, sample in zip(stops, solution.samples, strict=True):
            with self.subTest(x=x):
                self.assertAlmostEqual(sample, math.exp(x), delta=1e-9 * math.exp(x))

    def test_complex_state_is_supported(self):
        solution = integrate_ode(lambda _x, y: 1j * y, 1.0 + 0j, stop=math.pi)
        self.assertAlmostEqual(solution.y.real, -1.0, places=9)
        self.assertAlmostEqual(solution.y.imag, 0.0, places=9)

    def test_fixed_steps_converge_at_fifth_order(self):
        errors = []
        for count in (4, 8, 16):
            solution = integrate_ode(lambda _x, y: y, 1.0, fixed_steps=count)
            errors.append(abs(solution.y - math.e))
        orders = [math.log2(a / b) for a, b in zip(errors, errors[1:], strict=False)]
        for order in orders:
            self.assertGreater(order, 4.0)

    def test_invalid_spans_and_budgets(self):
        with self.assertRaises(UsageError):
            integrate_ode(lambda _x, y: y, 1.0, start=1.0, stop=0.0)
        with self.assertRaises(UsageError):
            integrate_ode(lambda _x, y: y, 1.0, stops=[0.5, 0.2])
        with self.assertRaises(UsageError):
            integrate_ode(lambda _x, y: y, 1.0, fixed_steps=0)
        tight = ToleranceBundle(ode_rel=1e-12, ode_abs=1e-14)
        with self.assertRaises(NumericalError) as caught:
            integrate_ode(lambda x, y: math.cos(200.0 * x), 0.0, tight, budget=3)
        self.assertEqual(caught.exception.code, "step_budget_exhausted")

    def test_tolerance_bundle_validation(self):
        with self.assertRaises(UsageError):
            ToleranceBundle(ode_rel=0.0)
        with self.assertRaises(UsageError):
            ToleranceBundle(max_steps=0)


class RootFindingTests(unittest.TestCase):
    def test_bisection_width_and_evaluation_count(self):
        calls = []

        def g(x):
            calls.append(x)
            return x - 7.0

        root = bisect_monotone(g, 0.0, 16.0, 1e-6)
        self.assertAlmostEqual(root, 7.0, delta=1e-6)
        self.assertLessEqual(len(calls), 2 + math.ceil(math.log2(16.0 / 1e-6)))

    def test_bisection_reuses_known_endpoint_values(self):
        calls = []

        def g(x):
            calls.append(x)
            return x - 1.0

        bisect_monotone(g, 0.0, 4.0, 1e-3, known=(-1.0, 3.0))
        self.assertNotIn(0.0, calls)
        self.assertNotIn(4.0, calls)

    def test_bisection_rejects_bad_brackets(self):
        cases = [
            (lambda x: x, 1.0, 0.0, 1e-6),
            (lambda x: x + 5.0, 0.0, 1.0, 1e-6),
            (lambda x: x, -1.0, 1.0, 0.0),
        ]
        for g, lower, upper, tol in cases:
            with self.subTest(lower=lower, upper=upper, tol=tol):
                with self.assertRaises(UsageError):
                    bisect_monotone(g, lower, upper, tol)

    def test_exact_endpoint_roots_are_returned(self):
        self.assertEqual(bisect_monotone(lambda x: x, 0.0, 1.0, 1e-9), 0.0)
        self.assertEqual(bisect_monotone(lambda x: x - 1.0, 0.0, 1.0, 1e-9), 1.0)

    def test_golden_section_minimum(self):
        x = golden_section(lambda t: (t - 0.3) ** 2, 0.0, 1.0, 1e-10)
        self.assertAlmostEqual(x, 0.3, places=8)


def _laplacian(size, corner=None):
    return SymTridiag(np.full(size, 2.0), np.full(size - 1, -1.0), corner)


class TridiagonalTests(unittest.TestCase):
    def test_sturm_count_matches_dense_eigenvalues(self):
        rng = np.random.default_rng(7)
        for corner in (None, -0.7):
            matrix = SymTridiag(rng.normal(size=8), rng.normal(size=7), corner)
            expected = np.linalg.eigvalsh(matrix.dense())
            for sigma in (-3.0, -0.5, 0.0, 0.4, 2.5):
                with self.subTest(corner=corner, sigma=sigma):
                    self.assertEqual(
                        sturm_count(matrix, sigma),
                        int(np.count_nonzero(expected < sigma)),
                    )

    def test_laplacian_closed_form(self):
        size = 20
        result = tridiag_eigen(_laplacian(size), 5)
        k = np.arange(1, 7)
        expected = 2.0 - 2.0 * np.cos(k * math.pi / (size + 1))
        np.testing.assert_allclose(result.values, expected, atol=1e-12)
        residuals = [
            np.linalg.norm(
                _laplacian(size).matvec(result.vectors[:, i])
                - result.values[i] * result.vectors[:, i]
            )
            for i in range(6)
        ]
        self.assertLess(max(residuals), 1e-9)

    def test_two_by_two_closed_form(self):
        matrix = SymTridiag(np.array([1.0, 3.0]), np.array([2.0]))
        result = tridiag_eigen(matrix, 1)
        np.testing.assert_allclose(
            result.values, [2.0 - math.sqrt(5.0), 2.0 + math.sqrt(5.0)], atol=1e-13
        )

    def test_periodic_pairs_are_orthonormal(self):
        size = 12
        matrix = _laplacian(size, corner=-1.0)
        result = tridiag_eigen(matrix, 4, seed=3)
        expected = np.sort(2.0 - 2.0 * np.cos(2.0 * math.pi * np.arange(size) / size))
        np.testing.assert_allclose(result.values, expected[:5], atol=1e-12)
        gram = result.vectors.T @ result.vectors
        np.testing.assert_allclose(gram, np.eye(5), atol=1e-8)

    def test_shift_moves_the_spectrum(self):
        matrix = _laplacian(10)
        base = tridiag_eigen(matrix, 3, vectors=False).values
        moved = tridiag_eigen(matrix.shifted(-4.0), 3, vectors=False).values
        np.testing.assert_allclose(moved, base - 4.0, atol=1e-12)

    def test_invalid_matrices_and_indices(self):
        with self.assertRaises(UsageError):
            SymTridiag(np.array([1.0]), np.array([]))
        with self.assertRaises(UsageError):
            SymTridiag(np.ones(2), np.ones(1), corner=1.0)
        with self.assertRaises(UsageError):
            tridiag_eigen(_laplacian(4), 4)

    def test_repeated_eigenvalues_of_scaled_periodic_laplacians(self):
        for size in (16, 64, 256):
            scale = float(size * size)
            matrix = SymTridiag(
                np.full(size, 2.0 * scale), np.full(size - 1, -scale), -scale
            )
            with self.subTest(size=size):
                result = tridiag_eigen(matrix, 6, seed=1)
                self.assertAlmostEqual(result.values[1], result.values[2], delta=1e-9)
                gram = result.vectors.T @ result.vectors
                np.testing.assert_allclose(gram, np.eye(7), atol=1e-8)
                for index, value in enumerate(result.values):
                    vector = result.vectors[:, index]
                    residual = np.linalg.norm(matrix.matvec(vector) - value * vector)
                    self.assertLess(residual, 1e-8 * matrix.norm())

    def test_seeded_vectors_are_deterministic(self):
        matrix = _laplacian(16, corner=-1.0)
        first = tridiag_eigen(matrix, 3, seed=11).vectors
        second = tridiag_eigen(matrix, 3, seed=11).vectors
        np.testing.assert_array_equal(first, second)

    @settings(deadline=None, max_examples=25)
    @given(
        st.lists(
            st.floats(-10.0, 10.0, allow_nan=False), min_size=3, max_size=9
        ).flatmap(
            lambda diagonal: st.tuples(
                st.just(diagonal),
                st.lists(
                    st.floats(0.1, 5.0),
                    min_size=len(diagonal) - 1,
                    max_size=len(diagonal) - 1,
                ),
            )
        )
    )
    def test_eigenvalues_agree_with_dense_solver(self, entries):
        diagonal, off_diagonal = entries
        matrix = SymTridiag(np.array(diagonal), np.array(off_diagonal))
        k_max = len(diagonal) - 1
        values = tridiag_eigen(matrix, k_max, vectors=False).values
        expected = np.linalg.eigvalsh(matrix.dense())
        np.testing.assert_allclose(values, expected, atol=1e-9)


if __name__ == "__main__":
    unittest.main()

"""Shared numerical kernels.

Everything here is stateless and reentrant: an embedded Runge-Kutta
integrator, composite Simpson quadrature with Richardson error estimates,
a bracketing bisection root finder, and a symmetric tridiagonal eigensolver
(Sturm-sequence bisection plus inverse iteration).
"""

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any, TypeAlias

import numpy as np

from .errors import NumericalError, UsageError

logger = logging.getLogger(__name__)

RightHandSide: TypeAlias = Callable[[float, Any], Any]

EPSILON = float(np.finfo(float).eps)


@dataclass(frozen=True, slots=True)
class ToleranceBundle:
    """Accuracy targets shared by the integrator, quadrature and root finder."""

    ode_rel: float = 1e-10
    ode_abs: float = 1e-12
    quad_target: float = 1e-10
    root_tol: float = 1e-9
    max_steps: int = 1_000_000

    def __post_init__(self) -> None:
        for name in ("ode_rel", "ode_abs", "quad_target", "root_tol"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0):
                raise UsageError(
                    "invalid_tolerance",
                    f"Tolerance '{name}' must be positive",
                    name=name,
                    value=value,
                )
        if self.max_steps < 1000:
            raise UsageError(
                "invalid_tolerance",
                "max_steps must be at least 1000",
                name="max_steps",
                value=self.max_steps,
            )


DEFAULT_TOLERANCES = ToleranceBundle()


# Quadrature ==========================================================================


@dataclass(frozen=True, slots=True)
class QuadratureResult:
    value: float
    error: float


def simpson(
    samples: Sequence[float] | np.ndarray, width: float = 1.0
) -> QuadratureResult:
    """Composite Simpson rule over uniform samples spanning ``width``.

    The error estimate compares against the half-resolution Simpson value
    (Richardson, factor 1/15) when the node count allows it, and against the
    trapezoid rule on the same nodes otherwise.
    """
    values = np.asarray(samples, dtype=float)
    count = values.size
    if count < 3 or count % 2 == 0:
        raise UsageError(
            "even_node_count",
            "Simpson quadrature needs an odd number of nodes, at least 3",
            nodes=count,
        )
    value = _simpson_value(values, width)
    if (count - 1) % 4 == 0:
        error = abs(value - _simpson_value(values[::2], width)) / 15.0
    else:
        step = width / (count - 1)
        trapezoid = step * (values.sum() - 0.5 * (values[0] + values[-1]))
        error = abs(value - trapezoid)
    return QuadratureResult(value, error)


def _simpson_value(values: np.ndarray, width: float) -> float:
    step = width / (values.size - 1)
    total = values[0] + values[-1]
    total += 4.0 * values[1:-1:2].sum()
    total += 2.0 * values[2:-1:2].sum()
    return float(step * total / 3.0)


def simpson_antiderivative(
    samples: Sequence[float] | np.ndarray,
    points: Sequence[float] | np.ndarray,
    width: float = 1.0,
) -> np.ndarray:
    """Integral of the panel-wise quadratic interpolant from 0 to each point.

    At panel ends this reproduces the cumulative composite Simpson sums, so
    differences give Simpson-consistent integrals over arbitrary sub-intervals.
    """
    values = np.asarray(samples, dtype=float)
    count = values.size
    if count < 3 or count % 2 == 0:
        raise UsageError(
            "even_node_count",
            "Simpson antiderivative needs an odd number of nodes, at least 3",
            nodes=count,
        )
    step = width / (count - 1)
    left = values[0:-1:2]
    middle = values[1::2]
    right = values[2::2]
    panels = step * (left + 4.0 * middle + right) / 3.0
    cumulative = np.concatenate(([0.0], np.cumsum(panels)))

    at = np.clip(np.asarray(points, dtype=float), 0.0, width)
    panel = np.minimum((at / (2.0 * step)).astype(int), panels.size - 1)
    s = (at - 2.0 * step * panel) / step
    s2 = s * s
    s3 = s2 * s
    inside = (
        left[panel] * (s3 / 6.0 - 0.75 * s2 + s)
        + middle[panel] * (s2 - s3 / 3.0)
        + right[panel] * (s3 / 6.0 - 0.25 * s2)
    )
    return np.asarray(cumulative[panel] + step * inside)


def richardson(
    values: Sequence[Any],
    *,
    ratio: float = 2.0,
    orders: Sequence[int] = (2, 4),
) -> Any:
    """Romberg-style extrapolation of coarse-to-fine approximations."""
    if not values:
        raise UsageError("empty_sequence", "Richardson extrapolation needs values")
    table = [list(values)]
    for order in orders[: len(values) - 1]:
        factor = ratio**order
        previous = table[-1]
        table.append(
            [
                (factor * previous[i + 1] - previous[i]) / (factor - 1.0)
                for i in range(len(previous) - 1)
            ]
        )
    return table[-1][-1]


# Embedded Runge-Kutta ================================================================

# Cash-Karp 5(4): fifth-order propagation, fourth-order embedded estimate.
_CK_NODES = (0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8)
_CK_STAGES: tuple[tuple[float, ...], ...] = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (3 / 10, -9 / 10, 6 / 5),
    (-11 / 54, 5 / 2, -70 / 27, 35 / 27),
    (1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096),
)
_CK_WEIGHTS = (37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771)
_CK_ERROR = (
    -277 / 64512,
    0.0,
    6925 / 370944,
    -6925 / 202752,
    -277 / 14336,
    277 / 7084,
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@dataclass(frozen=True, slots=True)
class OdeSolution:
    """End state, dense samples at the requested stops, and step statistics."""

    x: float
    y: Any
    samples: tuple[Any, ...] = ()
    steps: int = 0
    rejected: int = 0
    last_step: float = 0.0


def _cash_karp_step(rhs: RightHandSide, x: float, y: Any, h: float) -> tuple[Any, Any]:
    slopes: list[Any] = []
    for node, row in zip(_CK_NODES, _CK_STAGES, strict=True):
        stage = y
        for coefficient, slope in zip(row, slopes, strict=False):
            if coefficient:
                stage = stage + (h * coefficient) * slope
        slopes.append(rhs(x + node * h, stage))
    update = slopes[0] * _CK_WEIGHTS[0]
    error = slopes[0] * _CK_ERROR[0]
    for index in range(1, 6):
        if _CK_WEIGHTS[index]:
            update = update + _CK_WEIGHTS[index] * slopes[index]
        if _CK_ERROR[index]:
            error = error + _CK_ERROR[index] * slopes[index]
    return y + h * update, h * error


def _error_ratio(error: Any, y: Any, y_new: Any, tol: ToleranceBundle) -> float:
    if isinstance(error, float):
        scale = tol.ode_abs + tol.ode_rel * max(abs(y), abs(y_new))
        return abs(error) / scale
    if isinstance(error, complex):
        # Two real components packed into one scalar; each is controlled alone.
        real = abs(error.real) / (
            tol.ode_abs + tol.ode_rel * max(abs(y.real), abs(y_new.real))
        )
        imag = abs(error.imag) / (
            tol.ode_abs + tol.ode_rel * max(abs(y.imag), abs(y_new.imag))
        )
        return max(real, imag)
    scale_array = tol.ode_abs + tol.ode_rel * np.maximum(np.abs(y), np.abs(y_new))
    return float(np.max(np.abs(error) / scale_array))


def integrate_ode(
    rhs: RightHandSide,
    y0: Any,
    tol: ToleranceBundle = DEFAULT_TOLERANCES,
    *,
    start: float = 0.0,
    stop: float = 1.0,
    knots: Sequence[float] = (),
    stops: Sequence[float] = (),
    first_step: float | None = None,
    fixed_steps: int | None = None,
    budget: int | None = None,
) -> OdeSolution:
    """Integrate ``y' = rhs(x, y)`` from ``start`` to ``stop``.

    Steps never cross a knot or a stop; states at ``stops`` (ascending, inside
    the span) are returned in order. With ``fixed_steps`` the span is covered
    by that many uniform steps without error control.
    """
    if not stop > start:
        raise UsageError("invalid_span", "Integration span must be increasing")
    stop_points = [float(point) for point in stops]
    if any(b <= a for a, b in zip(stop_points, stop_points[1:], strict=False)):
        raise UsageError("unordered_stops", "Dense-output stops must be ascending")
    if stop_points and (stop_points[0] < start or stop_points[-1] > stop):
        raise UsageError("invalid_span", "Dense-output stops must lie in the span")

    if fixed_steps is not None:
        return _integrate_fixed(rhs, y0, start, stop, fixed_steps)

    limit = tol.max_steps if budget is None else budget
    landmarks = sorted(
        {start, stop}
        | {float(k) for k in knots if start < k < stop}
        | {p for p in stop_points if start < p < stop}
    )
    samples: list[Any] = []
    pending = 0
    if stop_points and stop_points[0] == start:
        samples.append(y0)
        pending = 1

    y = y0
    proposal = stop - start if first_step is None else min(first_step, stop - start)
    steps = rejected = 0
    for left, right in zip(landmarks, landmarks[1:], strict=False):
        x = left
        while x < right:
            remaining = right - x
            landing = proposal >= remaining * (1.0 - 1e-12)
            h = remaining if landing else proposal
            y_new, error = _cash_karp_step(rhs, x, y, h)
            ratio = _error_ratio(error, y, y_new, tol)
            if ratio <= 1.0:
                x = right if landing else x + h
                y = y_new
                steps += 1
                factor = (
                    _MAX_FACTOR
                    if ratio == 0.0
                    else min(_MAX_FACTOR, _SAFETY * ratio**-0.2)
                )
                grown = h * factor
                proposal = max(grown, proposal) if landing else grown
            else:
                rejected += 1
                proposal = h * max(_MIN_FACTOR, _SAFETY * ratio**-0.25)
            if steps + rejected > limit:
                raise NumericalError(
                    "step_budget_exhausted",
                    "Adaptive integrator exhausted its step budget",
                    x=x,
                    steps=steps,
                    rejected=rejected,
                    budget=limit,
                )
        if pending < len(stop_points) and stop_points[pending] == right:
            samples.append(y)
            pending += 1
    logger.debug(
        "integrated [%g, %g]: %d steps, %d rejected", start, stop, steps, rejected
    )
    return OdeSolution(stop, y, tuple(samples), steps, rejected, proposal)


def _integrate_fixed(
    rhs: RightHandSide, y0: Any, start: float, stop: float, count: int
) -> OdeSolution:
    if count < 1:
        raise UsageError("invalid_step_count", "fixed_steps must be positive")
    h = (stop - start) / count
    y = y0
    for step in range(count):
        y, _error = _cash_karp_step(rhs, start + step * h, y, h)
    return OdeSolution(stop, y, (), count, 0, h)


# Root finding ========================================================================


def bisect_monotone(
    g: Callable[[float], float],
    lower: float,
    upper: float,
    tol: float,
    *,
    known: tuple[float, float] | None = None,
) -> float:
    """Bisect a sign change of ``g`` on ``[lower, upper]`` down to width ``tol``.

    The endpoints are evaluated once to validate the bracket (or taken from
    ``known``); at most ``ceil(log2((upper - lower) / tol))`` midpoint
    evaluations follow.
    """
    if not lower < upper:
        raise UsageError(
            "invalid_bracket",
            "Bracket must satisfy lower < upper",
            lower=lower,
            upper=upper,
        )
    if tol <= 0:
        raise UsageError("invalid_tolerance", "Root tolerance must be positive")
    g_lower, g_upper = known if known is not None else (g(lower), g(upper))
    if g_lower == 0.0:
        return lower
    if g_upper == 0.0:
        return upper
    if (g_lower < 0.0) == (g_upper < 0.0):
        raise UsageError(
            "invalid_bracket",
            "Function values at the bracket ends share a sign",
            lower=lower,
            upper=upper,
            g_lower=g_lower,
            g_upper=g_upper,
        )
    evaluations = 0
    while upper - lower > tol:
        middle = 0.5 * (lower + upper)
        if not lower < middle < upper:
            break
        value = g(middle)
        evaluations += 1
        if value == 0.0:
            return middle
        if (value < 0.0) == (g_lower < 0.0):
            lower, g_lower = middle, value
        else:
            upper = middle
    logger.debug("bisection converged after %d evaluations", evaluations)
    return 0.5 * (lower + upper)


def golden_section(
    f: Callable[[float], float], lower: float, upper: float, tol: float = 1e-12
) -> float:
    """Locate a minimizer of a unimodal ``f`` on ``[lower, upper]``."""
    inverse_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lower, upper
    c = b - inverse_phi * (b - a)
    d = a + inverse_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inverse_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inverse_phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


# Symmetric tridiagonal eigensolver ===================================================


@dataclass(frozen=True, slots=True, eq=False)
class SymTridiag:
    """A symmetric tridiagonal matrix, optionally with a periodic corner entry.

    ``corner`` couples the first and last rows (entries (0, n-1) and (n-1, 0)).
    """

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    corner: float | None = None
    _a: tuple[float, ...] = field(init=False, repr=False)
    _b: tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        diagonal = np.array(self.diagonal, dtype=float)
        off_diagonal = np.array(self.off_diagonal, dtype=float)
        if diagonal.ndim != 1 or diagonal.size < 2:
            raise UsageError("invalid_matrix", "A tridiagonal matrix needs N >= 2")
        if off_diagonal.shape != (diagonal.size - 1,):
            raise UsageError(
                "invalid_matrix",
                "Off-diagonal length must be N - 1",
                size=diagonal.size,
                off_diagonal=off_diagonal.size,
            )
        if self.corner is not None and diagonal.size < 3:
            raise UsageError("invalid_matrix", "Corner coupling needs N >= 3")
        diagonal.flags.writeable = False
        off_diagonal.flags.writeable = False
        object.__setattr__(self, "diagonal", diagonal)
        object.__setattr__(self, "off_diagonal", off_diagonal)
        object.__setattr__(self, "_a", tuple(diagonal.tolist()))
        object.__setattr__(self, "_b", tuple(off_diagonal.tolist()))

    @property
    def size(self) -> int:
        return int(self.diagonal.size)

    def shifted(self, shift: float) -> "SymTridiag":
        return SymTridiag(self.diagonal + shift, self.off_diagonal, self.corner)

    def norm(self) -> float:
        """Infinity norm."""
        rows = np.abs(self.diagonal).copy()
        rows[:-1] += np.abs(self.off_diagonal)
        rows[1:] += np.abs(self.off_diagonal)
        if self.corner is not None:
            rows[0] += abs(self.corner)
            rows[-1] += abs(self.corner)
        return float(rows.max())

    def gershgorin(self) -> tuple[float, float]:
        radius = np.zeros(self.size)
        radius[:-1] += np.abs(self.off_diagonal)
        radius[1:] += np.abs(self.off_diagonal)
        if self.corner is not None:
            radius[0] += abs(self.corner)
            radius[-1] += abs(self.corner)
        return (
            float((self.diagonal - radius).min()),
            float((self.diagonal + radius).max()),
        )

    def matvec(self, vector: np.ndarray) -> np.ndarray:
        result = self.diagonal * vector
        result[:-1] += self.off_diagonal * vector[1:]
        result[1:] += self.off_diagonal * vector[:-1]
        if self.corner is not None:
            result[0] += self.corner * vector[-1]
            result[-1] += self.corner * vector[0]
        return result

    def dense(self) -> np.ndarray:
        matrix = np.diag(self.diagonal)
        matrix += np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)
        if self.corner is not None:
            matrix[0, -1] += self.corner
            matrix[-1, 0] += self.corner
        return matrix


@dataclass(frozen=True, slots=True, eq=False)
class TridiagEigen:
    values: np.ndarray
    vectors: np.ndarray


def _pivot_floor(matrix: SymTridiag) -> float:
    largest = max((b * b for b in matrix._b), default=1.0)
    return float(np.finfo(float).tiny) / EPSILON * max(1.0, largest)


def sturm_count(matrix: SymTridiag, sigma: float) -> int:
    """Number of eigenvalues strictly below ``sigma``.

    Counts negative pivots of the LDL^T factorization of ``matrix - sigma``;
    a corner entry is handled by bordering the last row and adding the sign of
    its Schur complement.
    """
    a = matrix._a
    b = matrix._b
    floor = _pivot_floor(matrix)
    size = len(a)
    count = 0
    if matrix.corner is None:
        pivot = 1.0
        for index in range(size):
            if index == 0:
                pivot = a[0] - sigma
            else:
                pivot = (a[index] - sigma) - b[index - 1] * b[index - 1] / pivot
            if abs(pivot) < floor:
                pivot = -floor
            if pivot < 0.0:
                count += 1
        return count

    last = size - 1
    schur = a[last] - sigma
    pivot = 1.0
    carried = 0.0
    for index in range(last):
        border = b[last - 1] if index == last - 1 else 0.0
        if index == 0:
            pivot = a[0] - sigma
            carried = matrix.corner + border
        else:
            multiplier = b[index - 1] / pivot
            pivot = (a[index] - sigma) - b[index - 1] * multiplier
            carried = border - multiplier * carried
        if abs(pivot) < floor:
            pivot = -floor
        if pivot < 0.0:
            count += 1
        schur -= carried * carried / pivot
    if abs(schur) < floor:
        schur = -floor
    if schur < 0.0:
        count += 1
    return count


def _bisect_eigenvalue(
    matrix: SymTridiag, index: int, lower: float, upper: float, norm: float
) -> float:
    for _iteration in range(200):
        middle = 0.5 * (lower + upper)
        if not lower < middle < upper:
            break
        if upper - lower <= EPSILON * (abs(lower) + abs(upper) + norm):
            break
        if sturm_count(matrix, middle) >= index + 1:
            upper = middle
        else:
            lower = middle
    return 0.5 * (lower + upper)


def _solve_tridiagonal(
    lower: Sequence[float],
    diagonal: Sequence[float],
    upper: Sequence[float],
    rhs: Sequence[float],
    floor: float,
) -> list[float]:
    """Gaussian elimination with partial pivoting for a tridiagonal system."""
    size = len(diagonal)
    d = list(diagonal)
    du = list(upper) + [0.0]
    du2 = [0.0] * size
    dl = list(lower)
    x = list(rhs)
    for i in range(size - 1):
        if abs(d[i]) >= abs(dl[i]):
            if d[i] == 0.0:
                d[i] = floor
            factor = dl[i] / d[i]
            d[i + 1] -= factor * du[i]
            x[i + 1] -= factor * x[i]
        else:
            factor = d[i] / dl[i]
            d[i] = dl[i]
            carried = d[i + 1]
            d[i + 1] = du[i] - factor * carried
            du2[i] = du[i + 1]
            du[i + 1] = -factor * du[i + 1]
            du[i] = carried
            x[i], x[i + 1] = x[i + 1], x[i] - factor * x[i + 1]
    for i in range(size):
        if abs(d[i]) < floor:
            d[i] = floor if d[i] >= 0.0 else -floor
    x[size - 1] /= d[size - 1]
    if size > 1:
        x[size - 2] = (x[size - 2] - du[size - 2] * x[size - 1]) / d[size - 2]
    for i in range(size - 3, -1, -1):
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i]
    return x


def _shifted_solver(
    matrix: SymTridiag, sigma: float, floor: float
) -> Callable[[np.ndarray], np.ndarray]:
    """Solver for ``(A - sigma) x = rhs``.

    With a corner entry, the leading block is singular at every repeated
    eigenvalue, so a bordered elimination would cancel catastrophically.
    Those matrices go through a pivoted dense solve instead.
    """
    a = [value - sigma for value in matrix._a]
    b = list(matrix._b)
    if matrix.corner is None:
        return lambda rhs: np.array(_solve_tridiagonal(b, a, b, rhs.tolist(), floor))
    shifted = matrix.dense() - sigma * np.eye(matrix.size)

    def solve(rhs: np.ndarray) -> np.ndarray:
        try:
            return np.linalg.solve(shifted, rhs)
        except np.linalg.LinAlgError:
            nudged = shifted + floor * np.eye(matrix.size)
            return np.linalg.solve(nudged, rhs)

    return solve


def _inverse_iteration(
    matrix: SymTridiag,
    sigma: float,
    against: Sequence[np.ndarray],
    rng: np.random.Generator,
    floor: float,
    scale: float,
    max_iterations: int = 50,
) -> np.ndarray:
    """Unit eigenvector for ``sigma``, orthogonal to ``against``.

    Inside a repeated eigenvalue the iterate keeps turning within the
    eigenspace, so the step between iterates need not shrink. Convergence is
    judged by the residual ``|(A - sigma) v|``: it is accepted when it reaches
    rounding level, or when it stops improving below ``sqrt(eps) * scale``.
    """
    tight = 1e3 * EPSILON * scale
    plateau = math.sqrt(EPSILON) * scale
    vector = _orthonormalize(rng.uniform(-1.0, 1.0, matrix.size), against)
    solve = _shifted_solver(matrix, sigma, floor)
    previous = math.inf
    for iteration in range(1, max_iterations + 1):
        solution = _orthonormalize(solve(vector), against)
        if float(np.dot(solution, vector)) < 0.0:
            solution = -solution
        change = float(np.linalg.norm(solution - vector))
        vector = solution
        residual = float(np.linalg.norm(matrix.matvec(vector) - sigma * vector))
        if iteration >= 2:
            if change <= 1e-10 or residual <= tight:
                return vector
            if residual <= plateau and residual > 0.5 * previous:
                return vector
        previous = residual
    raise NumericalError(
        "inverse_iteration_diverged",
        f"Inverse iteration did not converge after {max_iterations} iterations",
        eigenvalue=sigma,
        iterations=max_iterations,
        residual=residual,
    )


def _orthonormalize(vector: np.ndarray, against: Sequence[np.ndarray]) -> np.ndarray:
    for _sweep in range(2):
        for basis in against:
            vector = vector - float(np.dot(basis, vector)) * basis
    norm = float(np.linalg.norm(vector))
    if not math.isfinite(norm) or norm == 0.0:
        raise NumericalError(
            "inverse_iteration_diverged",
            "Inverse iteration produced a degenerate vector",
        )
    return vector / norm


def tridiag_eigen(
    matrix: SymTridiag,
    k_max: int,
    *,
    seed: int = 0,
    vectors: bool = True,
) -> TridiagEigen:
    """Lowest ``k_max + 1`` eigenvalues and (optionally) unit eigenvectors."""
    if not 0 <= k_max < matrix.size:
        raise UsageError(
            "invalid_index",
            "k_max must lie in [0, N)",
            k_max=k_max,
            size=matrix.size,
        )
    lower, upper = matrix.gershgorin()
    norm = matrix.norm()
    values: list[float] = []
    for index in range(k_max + 1):
        start = values[-1] - EPSILON * (abs(values[-1]) + norm) if values else lower
        values.append(_bisect_eigenvalue(matrix, index, max(start, lower), upper, norm))

    eigenvalues = np.array(values)
    if not vectors:
        return TridiagEigen(eigenvalues, np.empty((matrix.size, 0)))
    rng = np.random.default_rng(seed)
    floor = EPSILON * max(1.0, norm)
    cluster = 1e-6 * max(1.0, norm)
    basis: list[np.ndarray] = []
    for index, value in enumerate(values):
        neighbours = [
            basis[j] for j in range(index) if abs(values[j] - value) <= cluster
        ]
        basis.append(
            _inverse_iteration(matrix, value, neighbours, rng, floor, max(1.0, norm))
        )
    return TridiagEigen(eigenvalues, np.column_stack(basis))

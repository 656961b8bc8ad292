"""Eigenvalues and normalized eigenfunctions of -y'' + q y = lambda y on (0, 1).

Two independent backends: scaled Prufer shooting for separated boundary
conditions, and a second-order finite-difference matrix solved by the
in-repo tridiagonal eigensolver for every supported condition.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    BracketSearchError,
    InvalidEigenpairError,
    UnsupportedCombinationError,
    UsageError,
)
from .numerics import (
    SymTridiag,
    ToleranceBundle,
    bisect_monotone,
    integrate_ode,
    richardson,
    simpson,
    simpson_antiderivative,
    tridiag_eigen,
)
from .potential import PiecewiseConstant, Potential, Segment

logger = logging.getLogger(__name__)

MAX_INDEX = 50
MAX_EXPANSIONS = 60
EIGENPAIR_TOLERANCE = 1e-6


class BoundaryKind(str, Enum):
    SEPARATED = "separated"
    PERIODIC = "periodic"
    ANTIPERIODIC = "antiperiodic"


class Backend(str, Enum):
    SHOOTING = "shooting"
    MATRIX = "matrix"


@dataclass(frozen=True, slots=True)
class BoundaryCondition:
    """Separated: cos(a) y(0) - sin(a) y'(0) = 0 and cos(b) y(1) - sin(b) y'(1) = 0.

    Coupled conditions carry no angles: periodic y(0) = y(1), y'(0) = y'(1);
    antiperiodic flips both signs.
    """

    kind: BoundaryKind = BoundaryKind.SEPARATED
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self) -> None:
        for name in ("alpha", "beta"):
            angle = getattr(self, name)
            if not 0.0 <= angle < math.pi:
                raise UsageError(
                    "invalid_boundary",
                    f"Boundary angle '{name}' must lie in [0, pi)",
                    name=name,
                    value=angle,
                )
        if not self.separated and (self.alpha or self.beta):
            raise UsageError(
                "invalid_boundary", "Coupled boundary conditions take no angles"
            )

    @classmethod
    def dirichlet(cls) -> "BoundaryCondition":
        return cls()

    @classmethod
    def neumann(cls) -> "BoundaryCondition":
        return cls(alpha=math.pi / 2, beta=math.pi / 2)

    @classmethod
    def robin(cls, alpha: float, beta: float) -> "BoundaryCondition":
        return cls(alpha=alpha, beta=beta)

    @classmethod
    def periodic(cls) -> "BoundaryCondition":
        return cls(BoundaryKind.PERIODIC)

    @classmethod
    def antiperiodic(cls) -> "BoundaryCondition":
        return cls(BoundaryKind.ANTIPERIODIC)

    @classmethod
    def parse(cls, text: str) -> "BoundaryCondition":
        """Parse ``dirichlet``, ``neumann``, ``periodic``, ``antiperiodic`` or
        ``robin:ALPHA,BETA`` (angles in radians)."""
        name, _, arguments = text.strip().lower().partition(":")
        named = {
            "dirichlet": cls.dirichlet,
            "neumann": cls.neumann,
            "periodic": cls.periodic,
            "antiperiodic": cls.antiperiodic,
        }
        if name in named and not arguments:
            return named[name]()
        if name == "robin":
            parts = arguments.split(",")
            try:
                alpha, beta = (float(part) for part in parts)
            except ValueError:
                raise UsageError(
                    "invalid_boundary",
                    "Robin conditions are written robin:ALPHA,BETA",
                    text=text,
                ) from None
            return cls.robin(alpha, beta)
        raise UsageError(
            "invalid_boundary",
            f"Unknown boundary condition '{text}'",
            text=text,
        )

    @property
    def separated(self) -> bool:
        return self.kind is BoundaryKind.SEPARATED

    @property
    def dirichlet_ends(self) -> int:
        if not self.separated:
            return 0
        return (self.alpha == 0.0) + (self.beta == 0.0)

    @property
    def label(self) -> str:
        if not self.separated:
            return self.kind.value
        if self.alpha == 0.0 and self.beta == 0.0:
            return "dirichlet"
        if self.alpha == math.pi / 2 and self.beta == math.pi / 2:
            return "neumann"
        return f"robin:{self.alpha!r},{self.beta!r}"


@dataclass(frozen=True, slots=True, eq=False)
class EigenPair:
    """One eigenvalue with its eigenfunction sampled on a uniform grid of [0, 1]."""

    index: int
    eigenvalue: float
    eigenfunction: np.ndarray
    node_count: int
    backend: Backend

    @property
    def ordinal(self) -> int:
        """One-based position in the spectrum."""
        return self.index + 1

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.eigenfunction.size)


@dataclass(frozen=True, slots=True, eq=False)
class SpectralData:
    potential: Potential
    boundary: BoundaryCondition
    pairs: tuple[EigenPair, ...]

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([pair.eigenvalue for pair in self.pairs])

    def __len__(self) -> int:
        return len(self.pairs)

    def __getitem__(self, index: int) -> EigenPair:
        return self.pairs[index]


@dataclass(frozen=True, slots=True)
class SolverSettings:
    """Discretization and accuracy settings shared by both backends.

    ``grid_size`` is the node count of shooting eigenfunction samples;
    ``cells`` the finest finite-difference grid (h = 1 / cells).
    """

    tolerances: ToleranceBundle = field(default_factory=ToleranceBundle)
    grid_size: int = 2049
    cells: int = 1024
    extrapolate: bool = True
    segments: int = 64
    seed: int = 0

    def __post_init__(self) -> None:
        if self.grid_size < 3 or self.grid_size % 2 == 0:
            raise UsageError(
                "invalid_grid",
                "grid_size must be odd and at least 3",
                grid_size=self.grid_size,
            )
        _require_cells(self.cells)
        if self.extrapolate:
            _require_cells(self.cells // 4)
            if self.cells % 4:
                raise UsageError(
                    "invalid_grid",
                    "Extrapolation needs a cell count divisible by 4",
                    cells=self.cells,
                )
        if self.segments < 1:
            raise UsageError("invalid_grid", "segments must be positive")


def _require_cells(cells: int) -> None:
    if cells < 16 or cells % 2:
        raise UsageError(
            "invalid_grid", "Cell counts must be even and at least 16", cells=cells
        )


def _require_index(k: int) -> None:
    if not 0 <= k <= MAX_INDEX:
        raise UsageError(
            "invalid_index",
            f"Eigenvalue index must lie in [0, {MAX_INDEX}]",
            index=k,
        )


DEFAULT_SETTINGS = SolverSettings()


# Prufer shooting ======================================================================


@dataclass(frozen=True, slots=True)
class PruferShot:
    """Result of one shot at trial value ``lam``.

    ``angle`` is the unscaled Prufer angle at 1 minus the target angle; it is
    increasing in ``lam`` and equals ``k * pi`` at the k-th eigenvalue.
    """

    lam: float
    angle: float
    mismatch: float
    node_count: int
    steps: int


def _target_angle(bc: BoundaryCondition) -> float:
    return math.pi if bc.beta == 0.0 else bc.beta


def _scale(lam: float, segment: Segment) -> float:
    middle = segment.evaluate(0.5 * (segment.start + segment.stop))
    return max(math.sqrt(abs(lam - middle)), 1.0)


def _rescale(phi: float, ratio: float) -> tuple[float, float]:
    """Map a scaled angle to another scale on the same branch.

    Returns the new angle and the change in log-amplitude.
    """
    turns = math.floor(phi / math.pi)
    local = phi - turns * math.pi
    sine, cosine = math.sin(local), math.cos(local)
    rescaled = turns * math.pi + math.atan2(ratio * sine, cosine)
    return rescaled, 0.5 * math.log((ratio * sine) ** 2 + cosine * cosine)


def _angle_field(
    lam: float, scale: float, evaluate: Callable[[float], float]
) -> Callable[[float, float], float]:
    cos, sin = math.cos, math.sin
    inverse = 1.0 / scale

    def rhs(x: float, phi: float) -> float:
        c = cos(phi)
        s = sin(phi)
        return scale * c * c + (lam - evaluate(x)) * inverse * s * s

    return rhs


def _polar_field(
    lam: float, scale: float, evaluate: Callable[[float], float]
) -> Callable[[float, complex], complex]:
    # The state packs (angle, log-amplitude) as angle + 1j * log-amplitude.
    cos, sin = math.cos, math.sin
    inverse = 1.0 / scale

    def rhs(x: float, state: complex) -> complex:
        phi = state.real
        c = cos(phi)
        s = sin(phi)
        reduced = (lam - evaluate(x)) * inverse
        return complex(scale * c * c + reduced * s * s, (scale - reduced) * s * c)

    return rhs


def prufer_mismatch(
    q: Potential,
    bc: BoundaryCondition,
    lam: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> PruferShot:
    """Shoot from 0 to 1 with the scaled Prufer angle at trial value ``lam``."""
    if not bc.separated:
        raise UnsupportedCombinationError(Backend.SHOOTING.value, bc.label)
    tol = settings.tolerances
    segments = q.segments(settings.segments)
    scale = _scale(lam, segments[0])
    phi = math.atan2(scale * math.sin(bc.alpha), math.cos(bc.alpha))
    step: float | None = None
    steps = 0
    for position, segment in enumerate(segments):
        if position:
            next_scale = _scale(lam, segment)
            phi, _ = _rescale(phi, next_scale / scale)
            scale = next_scale
        solution = integrate_ode(
            _angle_field(lam, scale, segment.evaluate),
            phi,
            tol,
            start=segment.start,
            stop=segment.stop,
            knots=segment.knots,
            first_step=step,
            budget=tol.max_steps - steps,
        )
        phi = solution.y
        step = solution.last_step
        steps += solution.steps + solution.rejected
    theta, _ = _rescale(phi, 1.0 / scale)
    angle = theta - _target_angle(bc)
    nodes = max(0, math.ceil(theta / math.pi - 1e-9) - 1)
    return PruferShot(lam, angle, angle - nodes * math.pi, nodes, steps)


def _shoot(
    q: Potential, bc: BoundaryCondition, k: int, settings: SolverSettings
) -> Callable[[float], float]:
    def g(lam: float) -> float:
        return prufer_mismatch(q, bc, lam, settings).angle - k * math.pi

    return g


def eigenvalue(
    q: Potential,
    bc: BoundaryCondition,
    k: int,
    settings: SolverSettings = DEFAULT_SETTINGS,
    *,
    backend: Backend | None = None,
) -> float:
    """The k-th eigenvalue (0-based) to ``settings.tolerances.root_tol``."""
    _require_index(k)
    if not bc.separated:
        if backend is Backend.SHOOTING:
            raise UnsupportedCombinationError(backend.value, bc.label)
        return float(_matrix_values(q, bc, k, settings)[k])
    if backend is Backend.MATRIX:
        return float(_matrix_values(q, bc, k, settings)[k])

    g = _shoot(q, bc, k, settings)
    seed = ((k + 0.5 * bc.dirichlet_ends) * math.pi) ** 2 + q.integral()
    width = max(10.0, 2.0 * math.pi * (k + 1))
    lower, upper = seed - width, seed + width
    g_lower, g_upper = g(lower), g(upper)
    expansions = 0
    while g_lower > 0.0 or g_upper < 0.0:
        if expansions >= MAX_EXPANSIONS:
            raise BracketSearchError(k, expansions, lower, upper)
        expansions += 1
        width *= 2.0
        if g_lower > 0.0:
            upper, g_upper = lower, g_lower
            lower -= width
            g_lower = g(lower)
        else:
            lower, g_lower = upper, g_upper
            upper += width
            g_upper = g(upper)
    logger.debug(
        "eigenvalue %d bracketed in [%g, %g] after %d expansions",
        k,
        lower,
        upper,
        expansions,
    )
    return bisect_monotone(
        g,
        lower,
        upper,
        settings.tolerances.root_tol,
        known=(g_lower, g_upper),
    )


def eigenfunction(
    q: Potential,
    bc: BoundaryCondition,
    lam: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
    *,
    check_tol: float = EIGENPAIR_TOLERANCE,
) -> EigenPair:
    """Normalized eigenfunction for the eigenvalue ``lam``.

    Raises InvalidEigenpairError when ``lam`` is not an eigenvalue: the Prufer
    angle must land within ``check_tol`` of a multiple of pi. Coupled
    conditions return the matrix eigenpair nearest ``lam``.
    """
    if not bc.separated:
        return _nearest_matrix_pair(q, bc, lam, settings, check_tol)

    tol = settings.tolerances
    grid = np.linspace(0.0, 1.0, settings.grid_size)
    segments = q.segments(settings.segments)
    scale = _scale(lam, segments[0])
    phi = math.atan2(scale * math.sin(bc.alpha), math.cos(bc.alpha))
    state = complex(phi, 0.0)
    angles = np.empty(grid.size)
    amplitudes = np.empty(grid.size)
    scales = np.empty(grid.size)
    angles[0], amplitudes[0], scales[0] = phi, 0.0, scale
    filled = 1
    step: float | None = None
    steps = 0
    for position, segment in enumerate(segments):
        if position:
            next_scale = _scale(lam, segment)
            phi, log_gain = _rescale(state.real, next_scale / scale)
            state = complex(phi, state.imag + log_gain)
            scale = next_scale
        upto = int(np.searchsorted(grid, segment.stop, side="right"))
        stops = grid[filled:upto]
        if position == len(segments) - 1:
            stops = grid[filled:]
        solution = integrate_ode(
            _polar_field(lam, scale, segment.evaluate),
            state,
            tol,
            start=segment.start,
            stop=segment.stop,
            knots=segment.knots,
            stops=stops,
            first_step=step,
            budget=tol.max_steps - steps,
        )
        for sample in solution.samples:
            angles[filled] = sample.real
            amplitudes[filled] = sample.imag
            scales[filled] = scale
            filled += 1
        state = solution.y
        step = solution.last_step
        steps += solution.steps + solution.rejected

    theta, _ = _rescale(state.real, 1.0 / scale)
    angle = theta - _target_angle(bc)
    index = round(angle / math.pi)
    residual = abs(angle - index * math.pi)
    if residual > check_tol or index < 0:
        raise InvalidEigenpairError(lam, residual, check_tol)

    values = np.exp(amplitudes - amplitudes.max()) * np.sin(angles) / scales
    values /= math.sqrt(simpson(values * values).value)
    return EigenPair(
        index=int(index),
        eigenvalue=float(lam),
        eigenfunction=_freeze(values),
        node_count=node_count(values),
        backend=Backend.SHOOTING,
    )


# Finite-difference matrix =============================================================


@dataclass(frozen=True, slots=True, eq=False)
class Discretization:
    """The symmetric matrix for one grid plus the map back to node samples."""

    matrix: SymTridiag
    cells: int
    first: int
    weights: np.ndarray
    boundary: BoundaryCondition

    def samples(self, vector: np.ndarray) -> np.ndarray:
        values = np.zeros(self.cells + 1)
        unknowns = vector / np.sqrt(self.weights)
        values[self.first : self.first + unknowns.size] = unknowns
        if self.boundary.kind is BoundaryKind.PERIODIC:
            values[-1] = values[0]
        elif self.boundary.kind is BoundaryKind.ANTIPERIODIC:
            values[-1] = -values[0]
        return values


def discretize(q: Potential, bc: BoundaryCondition, cells: int) -> Discretization:
    """Central second differences on ``cells`` uniform cells.

    Dirichlet ends are removed from the unknowns. Other separated ends use a
    ghost node eliminated through the boundary condition; the resulting row is
    symmetrized by a half weight at that node. Coupled conditions wrap the last
    cell onto the first node through the corner entry.
    """
    _require_cells(cells)
    h = 1.0 / cells
    inverse = 1.0 / (h * h)
    nodes = q.node_values(cells)
    if not bc.separated:
        corner = -inverse if bc.kind is BoundaryKind.PERIODIC else inverse
        matrix = SymTridiag(
            2.0 * inverse + nodes[:-1],
            np.full(cells - 1, -inverse),
            corner,
        )
        return Discretization(matrix, cells, 0, np.ones(cells), bc)

    first = 1 if bc.alpha == 0.0 else 0
    last = cells - 1 if bc.beta == 0.0 else cells
    diagonal = 2.0 * inverse + nodes[first : last + 1]
    off_diagonal = np.full(last - first, -inverse)
    weights = np.ones(last - first + 1)
    if first == 0:
        cot = math.cos(bc.alpha) / math.sin(bc.alpha)
        diagonal[0] += 2.0 * cot / h
        off_diagonal[0] = -math.sqrt(2.0) * inverse
        weights[0] = 0.5
    if last == cells:
        cot = math.cos(bc.beta) / math.sin(bc.beta)
        diagonal[-1] -= 2.0 * cot / h
        off_diagonal[-1] = -math.sqrt(2.0) * inverse
        weights[-1] = 0.5
    return Discretization(SymTridiag(diagonal, off_diagonal), cells, first, weights, bc)


def matrix_eigen(
    q: Potential,
    bc: BoundaryCondition,
    cells: int,
    k_max: int,
    *,
    seed: int = 0,
) -> SpectralData:
    """Raw (unextrapolated) finite-difference eigenpairs on one grid."""
    _require_index(k_max)
    discretization = discretize(q, bc, cells)
    if k_max >= discretization.matrix.size:
        raise UsageError(
            "invalid_index",
            "Grid too coarse for the requested index",
            k_max=k_max,
            cells=cells,
        )
    solved = tridiag_eigen(discretization.matrix, k_max, seed=seed)
    pairs = tuple(
        _matrix_pair(discretization, index, float(value), solved.vectors[:, index])
        for index, value in enumerate(solved.values)
    )
    return SpectralData(q, bc, pairs)


def _matrix_pair(
    discretization: Discretization, index: int, value: float, vector: np.ndarray
) -> EigenPair:
    values = _orient(discretization.samples(vector))
    values /= math.sqrt(simpson(values * values).value)
    return EigenPair(
        index=index,
        eigenvalue=value,
        eigenfunction=_freeze(values),
        node_count=node_count(values),
        backend=Backend.MATRIX,
    )


def _orient(values: np.ndarray) -> np.ndarray:
    """Sign convention: y(0) > 0, or y'(0) > 0 when y(0) vanishes."""
    peak = float(np.abs(values).max())
    if abs(values[0]) > 1e-8 * peak:
        sign = math.copysign(1.0, values[0])
    else:
        sign = math.copysign(1.0, values[1] - values[0])
    return sign * values


def extrapolated_eigenvalues(
    q: Potential, bc: BoundaryCondition, k_max: int, cells: int
) -> np.ndarray:
    """Richardson-extrapolated eigenvalues over the grids cells/4, cells/2, cells."""
    _require_index(k_max)
    levels = [
        tridiag_eigen(discretize(q, bc, n).matrix, k_max, vectors=False).values
        for n in (cells // 4, cells // 2, cells)
    ]
    return np.asarray(richardson(levels, ratio=2.0, orders=(2, 4)))


def _matrix_values(
    q: Potential, bc: BoundaryCondition, k_max: int, settings: SolverSettings
) -> np.ndarray:
    if settings.extrapolate:
        return extrapolated_eigenvalues(q, bc, k_max, settings.cells)
    matrix = discretize(q, bc, settings.cells).matrix
    return tridiag_eigen(matrix, k_max, vectors=False).values


def _matrix_spectrum(
    q: Potential, bc: BoundaryCondition, k_max: int, settings: SolverSettings
) -> SpectralData:
    raw = matrix_eigen(q, bc, settings.cells, k_max, seed=settings.seed)
    if not settings.extrapolate:
        return raw
    values = extrapolated_eigenvalues(q, bc, k_max, settings.cells)
    pairs = tuple(
        EigenPair(
            index=pair.index,
            eigenvalue=float(value),
            eigenfunction=pair.eigenfunction,
            node_count=pair.node_count,
            backend=Backend.MATRIX,
        )
        for pair, value in zip(raw.pairs, values, strict=True)
    )
    return SpectralData(q, bc, pairs)


def _nearest_matrix_pair(
    q: Potential,
    bc: BoundaryCondition,
    lam: float,
    settings: SolverSettings,
    check_tol: float,
) -> EigenPair:
    k_max = 0
    while True:
        data = _matrix_spectrum(q, bc, k_max, settings)
        if data.pairs[-1].eigenvalue >= lam or k_max == MAX_INDEX:
            break
        k_max = min(MAX_INDEX, 2 * k_max + 2)
    nearest = min(data.pairs, key=lambda pair: abs(pair.eigenvalue - lam))
    residual = abs(nearest.eigenvalue - lam) / max(1.0, abs(lam))
    if residual > check_tol:
        raise InvalidEigenpairError(lam, residual, check_tol)
    return nearest


# Spectra ==============================================================================


def spectrum(
    q: Potential,
    bc: BoundaryCondition,
    k_max: int,
    settings: SolverSettings = DEFAULT_SETTINGS,
    *,
    backend: Backend | None = None,
) -> SpectralData:
    """Eigenpairs 0..k_max in nondecreasing order, multiplicities repeated."""
    _require_index(k_max)
    if backend is Backend.SHOOTING and not bc.separated:
        raise UnsupportedCombinationError(backend.value, bc.label)
    if backend is Backend.MATRIX or not bc.separated:
        return _matrix_spectrum(q, bc, k_max, settings)
    pairs = []
    for k in range(k_max + 1):
        pair = eigenfunction(q, bc, eigenvalue(q, bc, k, settings), settings)
        pairs.append(
            EigenPair(
                k, pair.eigenvalue, pair.eigenfunction, pair.node_count, pair.backend
            )
        )
    return SpectralData(q, bc, tuple(pairs))


def weighted_inner_product(w: Potential, y: np.ndarray) -> float:
    """``integral of w(x) y(x)^2`` for samples ``y`` on a uniform grid of [0, 1].

    Piecewise-constant weights are integrated cell by cell against the
    Simpson antiderivative of y^2, so jumps between grid nodes are honoured.
    """
    squared = np.asarray(y, dtype=float) ** 2
    if isinstance(w, PiecewiseConstant):
        cumulative = simpson_antiderivative(squared, w.edges)
        return float(np.dot(w.values, np.diff(cumulative)))
    xs = np.linspace(0.0, 1.0, squared.size)
    return simpson(w.sample(xs) * squared).value


def node_count(y: np.ndarray) -> int:
    """Sign changes strictly inside (0, 1), one grid cell excluded at each end."""
    interior = np.asarray(y, dtype=float)[1:-1]
    signs = np.sign(interior)
    signs = signs[signs != 0.0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _freeze(values: np.ndarray) -> np.ndarray:
    values.flags.writeable = False
    return values

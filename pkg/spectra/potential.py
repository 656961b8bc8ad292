"""Potentials on [0, 1] and the integral functionals evaluated on them."""

import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, ClassVar

import numpy as np

from .errors import DomainError, PotentialDefinitionError
from .numerics import QuadratureResult, golden_section, simpson

QUADRATURE_NODES = 2049
EXTREMUM_NODES = 4097
DISTANCE_NODES = 8193
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, slots=True)
class Segment:
    """A subinterval on which ``evaluate`` is valid up to both closed ends."""

    start: float
    stop: float
    evaluate: Callable[[float], float]
    knots: tuple[float, ...] = ()


class PotentialKind(str, Enum):
    PIECEWISE = "piecewise"
    SAMPLED = "sampled"
    ANALYTIC = "analytic"


class Potential(ABC):
    """A bounded real function on [0, 1], immutable after construction."""

    kind: ClassVar[PotentialKind]

    def evaluate(self, x: float) -> float:
        if not 0.0 <= x <= 1.0:
            raise DomainError(x)
        return float(self.sample(np.array([x], dtype=float))[0])

    @abstractmethod
    def sample(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation; callers guarantee ``xs`` lies in [0, 1]."""

    @abstractmethod
    def segments(self, count: int) -> tuple[Segment, ...]:
        """Split [0, 1] into pieces with scalar evaluators for the integrator."""

    @abstractmethod
    def integral(self) -> float: ...

    @abstractmethod
    def ess_inf(self) -> float | None: ...

    @abstractmethod
    def ess_sup(self) -> float | None: ...

    @abstractmethod
    def describe(self) -> str: ...

    @abstractmethod
    def fingerprint(self) -> tuple[Any, ...]:
        """Hashable identity used for memoization."""

    @property
    def bounded(self) -> bool:
        return True

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Interior points where the potential may fail to be smooth."""
        return ()

    def node_values(self, cells: int) -> np.ndarray:
        """Values at the nodes of a uniform grid with ``cells`` cells."""
        return self.sample(np.linspace(0.0, 1.0, cells + 1))

    def quadrature(
        self, weight: Callable[[np.ndarray], np.ndarray]
    ) -> QuadratureResult:
        """Composite Simpson value of the integral of ``q * weight``."""
        xs = self.quadrature_grid()
        return simpson(self.sample(xs) * weight(xs))

    def quadrature_grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, QUADRATURE_NODES)

    def cos_moment(self, n: int) -> float:
        """Integral of q(x) cos(2 n pi x)."""
        omega = TWO_PI * n
        return self.quadrature(lambda xs: np.cos(omega * xs)).value

    def sin_moment(self, n: int) -> float:
        """Integral of q(x) sin(2 n pi x)."""
        omega = TWO_PI * n
        return self.quadrature(lambda xs: np.sin(omega * xs)).value

    def sine_moment(self, n: int) -> float:
        """Integral of 2 q(x) sin^2(n pi x)."""
        omega = math.pi * n
        return self.quadrature(lambda xs: 2.0 * np.sin(omega * xs) ** 2).value

    def __str__(self) -> str:
        return self.describe()


# Piecewise constant ===================================================================


@dataclass(frozen=True, slots=True, eq=False)
class PiecewiseConstant(Potential):
    """Cell values on ``[b_i, b_{i+1})``, the last cell closed at 1."""

    kind: ClassVar[PotentialKind] = PotentialKind.PIECEWISE

    edges: np.ndarray
    values: np.ndarray

    def __init__(self, breakpoints: Sequence[float], values: Sequence[float]):
        edges = np.array(breakpoints, dtype=float)
        levels = np.array(values, dtype=float)
        if edges.ndim != 1 or edges.size < 2:
            raise PotentialDefinitionError(
                "Piecewise potential needs at least two breakpoints",
                breakpoints=edges.size,
            )
        if levels.shape != (edges.size - 1,):
            raise PotentialDefinitionError(
                "Piecewise potential needs one value per cell",
                breakpoints=edges.size,
                values=levels.size,
            )
        if edges[0] != 0.0 or edges[-1] != 1.0:
            raise PotentialDefinitionError(
                "Breakpoints must start at 0 and end at 1",
                first=float(edges[0]),
                last=float(edges[-1]),
            )
        if np.any(np.diff(edges) <= 0.0):
            raise PotentialDefinitionError("Breakpoints must be strictly increasing")
        if not np.all(np.isfinite(levels)):
            raise PotentialDefinitionError("Piecewise values must be finite")
        edges.flags.writeable = False
        levels.flags.writeable = False
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "values", levels)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(self.edges[1:-1].tolist())

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def sample(self, xs: np.ndarray) -> np.ndarray:
        index = np.searchsorted(self.edges, xs, side="right") - 1
        return self.values[np.clip(index, 0, self.values.size - 1)]

    def left_limits(self, xs: np.ndarray) -> np.ndarray:
        index = np.searchsorted(self.edges, xs, side="left") - 1
        return self.values[np.clip(index, 0, self.values.size - 1)]

    def segments(self, count: int) -> tuple[Segment, ...]:
        return tuple(
            Segment(float(a), float(b), _constant_function(float(v)))
            for a, b, v in zip(
                self.edges[:-1], self.edges[1:], self.values, strict=True
            )
        )

    def node_values(self, cells: int) -> np.ndarray:
        """Averages over the dual cells around each grid node."""
        h = 1.0 / cells
        nodes = np.linspace(0.0, 1.0, cells + 1)
        lower = np.clip(nodes - 0.5 * h, 0.0, 1.0)
        upper = np.clip(nodes + 0.5 * h, 0.0, 1.0)
        averaged = self._antiderivative(upper) - self._antiderivative(lower)
        return averaged / (upper - lower)

    def _antiderivative(self, xs: np.ndarray) -> np.ndarray:
        cumulative = np.concatenate(([0.0], np.cumsum(self.values * self.widths)))
        index = np.clip(
            np.searchsorted(self.edges, xs, side="right") - 1, 0, self.values.size - 1
        )
        return cumulative[index] + self.values[index] * (xs - self.edges[index])

    def integral(self) -> float:
        return float(np.dot(self.values, self.widths))

    def ess_inf(self) -> float:
        return float(self.values.min())

    def ess_sup(self) -> float:
        return float(self.values.max())

    def cos_moment(self, n: int) -> float:
        omega = TWO_PI * n
        a, b = self.edges[:-1], self.edges[1:]
        return float(np.dot(self.values, np.sin(omega * b) - np.sin(omega * a)) / omega)

    def sin_moment(self, n: int) -> float:
        omega = TWO_PI * n
        a, b = self.edges[:-1], self.edges[1:]
        return float(np.dot(self.values, np.cos(omega * a) - np.cos(omega * b)) / omega)

    def sine_moment(self, n: int) -> float:
        omega = TWO_PI * n
        a, b = self.edges[:-1], self.edges[1:]
        per_cell = (b - a) - (np.sin(omega * b) - np.sin(omega * a)) / omega
        return float(np.dot(self.values, per_cell))

    def describe(self) -> str:
        edges = ",".join(_decimal(x) for x in self.edges)
        levels = ",".join(_decimal(v) for v in self.values)
        return f"piecewise[{edges};{levels}]"

    def fingerprint(self) -> tuple[Any, ...]:
        return (self.kind.value, self.edges.tobytes(), self.values.tobytes())


# Sampled ==============================================================================


@dataclass(frozen=True, slots=True, eq=False)
class Sampled(Potential):
    """Uniform-grid samples with linear interpolation.

    ``bounded=False`` marks a truncated sample of an unbounded function: the
    samples remain usable for quadrature but essential extrema are unknown.
    """

    kind: ClassVar[PotentialKind] = PotentialKind.SAMPLED

    values: np.ndarray
    bounded_data: bool = True
    _grid: tuple[float, ...] = field(init=False, repr=False)

    def __init__(self, values: Sequence[float] | np.ndarray, bounded: bool = True):
        levels = np.array(values, dtype=float)
        if levels.ndim != 1 or levels.size < 3:
            raise PotentialDefinitionError(
                "Sampled potential needs at least 3 grid values", values=levels.size
            )
        if not np.all(np.isfinite(levels)):
            raise PotentialDefinitionError("Sampled values must be finite")
        levels.flags.writeable = False
        object.__setattr__(self, "values", levels)
        object.__setattr__(self, "bounded_data", bool(bounded))
        object.__setattr__(self, "_grid", tuple(levels.tolist()))

    @property
    def bounded(self) -> bool:
        return self.bounded_data

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.values.size)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(self.nodes[1:-1].tolist())

    def sample(self, xs: np.ndarray) -> np.ndarray:
        return np.interp(xs, self.nodes, self.values)

    def segments(self, count: int) -> tuple[Segment, ...]:
        cells = self.values.size - 1
        groups = max(1, min(count, cells))
        bounds = np.linspace(0, cells, groups + 1).round().astype(int)
        evaluate = self._interpolator()
        return tuple(
            Segment(
                lo / cells,
                hi / cells,
                evaluate,
                tuple(i / cells for i in range(lo + 1, hi)),
            )
            for lo, hi in zip(bounds[:-1].tolist(), bounds[1:].tolist(), strict=True)
            if hi > lo
        )

    def _interpolator(self) -> Callable[[float], float]:
        levels = self._grid
        cells = len(levels) - 1

        def evaluate(x: float) -> float:
            scaled = x * cells
            index = min(max(int(scaled), 0), cells - 1)
            t = scaled - index
            return levels[index] + t * (levels[index + 1] - levels[index])

        return evaluate

    def quadrature_grid(self) -> np.ndarray:
        cells = self.values.size - 1
        refine = max(2, math.ceil((QUADRATURE_NODES - 1) / cells))
        refine += refine % 2
        return np.linspace(0.0, 1.0, cells * refine + 1)

    def integral(self) -> float:
        h = 1.0 / (self.values.size - 1)
        return float(h * (self.values.sum() - 0.5 * (self.values[0] + self.values[-1])))

    def ess_inf(self) -> float | None:
        return float(self.values.min()) if self.bounded else None

    def ess_sup(self) -> float | None:
        return float(self.values.max()) if self.bounded else None

    def describe(self) -> str:
        suffix = "" if self.bounded else ",unbounded"
        return f"sampled[{self.values.size}{suffix}]"

    def fingerprint(self) -> tuple[Any, ...]:
        return (self.kind.value, self.values.tobytes(), self.bounded)


# Analytic =============================================================================


@dataclass(frozen=True, slots=True)
class Analytic(Potential):
    """A trigonometric table ``mean + sum a_k cos 2pi k x + sum b_k sin 2pi k x``.

    The catalog entries (zero, constant, single cosine or sine modes) are
    special tables; ``tag`` names which one.
    """

    kind: ClassVar[PotentialKind] = PotentialKind.ANALYTIC

    mean: float = 0.0
    cos_terms: tuple[tuple[int, float], ...] = ()
    sin_terms: tuple[tuple[int, float], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "cos_terms", _normalize_terms(self.cos_terms))
        object.__setattr__(self, "sin_terms", _normalize_terms(self.sin_terms))
        if not math.isfinite(self.mean):
            raise PotentialDefinitionError("Analytic mean must be finite")

    @classmethod
    def zero(cls) -> "Analytic":
        return cls()

    @classmethod
    def constant(cls, value: float) -> "Analytic":
        return cls(mean=value)

    @classmethod
    def cos_mode(cls, k: int = 1, amplitude: float = 1.0) -> "Analytic":
        return cls(cos_terms=((k, amplitude),))

    @classmethod
    def sin_mode(cls, k: int = 1, amplitude: float = 1.0) -> "Analytic":
        return cls(sin_terms=((k, amplitude),))

    @property
    def tag(self) -> str:
        if not self.cos_terms and not self.sin_terms:
            return "zero" if self.mean == 0.0 else "constant"
        if self.mean == 0.0 and len(self.cos_terms) + len(self.sin_terms) == 1:
            return "cos" if self.cos_terms else "sin"
        return "table"

    @property
    def is_constant(self) -> bool:
        return self.tag in ("zero", "constant")

    def sample(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        result = np.full(xs.shape, self.mean)
        for k, a in self.cos_terms:
            result += a * np.cos(TWO_PI * k * xs)
        for k, b in self.sin_terms:
            result += b * np.sin(TWO_PI * k * xs)
        return result

    def segments(self, count: int) -> tuple[Segment, ...]:
        evaluate = self.pointwise()
        if self.is_constant:
            return (Segment(0.0, 1.0, evaluate),)
        edges = np.linspace(0.0, 1.0, max(1, count) + 1).tolist()
        return tuple(
            Segment(a, b, evaluate) for a, b in zip(edges[:-1], edges[1:], strict=True)
        )

    def pointwise(self) -> Callable[[float], float]:
        mean = self.mean
        cosines = tuple((TWO_PI * k, a) for k, a in self.cos_terms)
        sines = tuple((TWO_PI * k, b) for k, b in self.sin_terms)
        cos, sin = math.cos, math.sin

        def evaluate(x: float) -> float:
            value = mean
            for omega, a in cosines:
                value += a * cos(omega * x)
            for omega, b in sines:
                value += b * sin(omega * x)
            return value

        return evaluate

    def integral(self) -> float:
        return self.quadrature(np.ones_like).value

    def ess_inf(self) -> float:
        return self._extremum(minimum=True)

    def ess_sup(self) -> float:
        return self._extremum(minimum=False)

    def _extremum(self, *, minimum: bool) -> float:
        terms = self.cos_terms + self.sin_terms
        if not terms:
            return self.mean
        if len(terms) == 1:
            amplitude = abs(terms[0][1])
            return self.mean - amplitude if minimum else self.mean + amplitude
        sign = 1.0 if minimum else -1.0
        xs = np.linspace(0.0, 1.0, EXTREMUM_NODES)
        values = sign * self.sample(xs)
        best = int(values.argmin())
        h = 1.0 / (EXTREMUM_NODES - 1)
        evaluate = self.pointwise()
        lower, upper = max(0.0, xs[best] - h), min(1.0, xs[best] + h)
        x = golden_section(lambda t: sign * evaluate(t), lower, upper)
        return sign * min(float(values[best]), sign * evaluate(x))

    def describe(self) -> str:
        tag = self.tag
        if tag == "zero":
            return "zero"
        if tag == "constant":
            return f"constant({_decimal(self.mean)})"
        if tag in ("cos", "sin"):
            k, amplitude = (self.cos_terms or self.sin_terms)[0]
            mode = f"{tag}{2 * k}pi"
            return mode if amplitude == 1.0 else f"{_decimal(amplitude)}*{mode}"
        cos = ",".join(f"{k}:{_decimal(a)}" for k, a in self.cos_terms)
        sin = ",".join(f"{k}:{_decimal(b)}" for k, b in self.sin_terms)
        return f"table(mean={_decimal(self.mean)};cos={cos};sin={sin})"

    def fingerprint(self) -> tuple[Any, ...]:
        return (self.kind.value, self.mean, self.cos_terms, self.sin_terms)


def _normalize_terms(
    terms: Iterable[tuple[int, float]],
) -> tuple[tuple[int, float], ...]:
    merged: dict[int, float] = {}
    for k, amplitude in terms:
        if int(k) != k or k < 1:
            raise PotentialDefinitionError(
                "Trigonometric modes must be positive integers", mode=k
            )
        if not math.isfinite(amplitude):
            raise PotentialDefinitionError("Amplitudes must be finite", mode=k)
        merged[int(k)] = merged.get(int(k), 0.0) + float(amplitude)
    return tuple(sorted((k, a) for k, a in merged.items() if a != 0.0))


def _constant_function(value: float) -> Callable[[float], float]:
    def evaluate(_x: float) -> float:
        return value

    return evaluate


def _decimal(value: float) -> str:
    return repr(float(value))


# Catalog ==============================================================================

CATALOG: Mapping[str, Potential] = {
    "zero": Analytic.zero(),
    "constant5": Analytic.constant(5.0),
    "cos2pi": Analytic.cos_mode(1),
    "sin2pi": Analytic.sin_mode(1),
    "cos4pi": Analytic.cos_mode(2),
    "piecewise13": PiecewiseConstant([0.0, 0.5, 1.0], [1.0, 3.0]),
    "table": Analytic(mean=0.5, cos_terms=((1, 0.75),), sin_terms=((2, -0.5),)),
}


def catalog_entry(name: str) -> Potential:
    try:
        return CATALOG[name]
    except KeyError:
        raise PotentialDefinitionError(
            f"Unknown catalog potential '{name}'",
            name=name,
            known=sorted(CATALOG),
        ) from None


# Operations ===========================================================================


@dataclass(frozen=True, slots=True)
class EvenOddParts:
    even: Potential
    odd: Potential


def evaluate(q: Potential, x: float) -> float:
    return q.evaluate(x)


def integral(q: Potential) -> float:
    return q.integral()


def ess_inf(q: Potential) -> float | None:
    return q.ess_inf()


def ess_sup(q: Potential) -> float | None:
    return q.ess_sup()


def _require_mode(n: int) -> None:
    if int(n) != n or n < 1:
        raise PotentialDefinitionError("Fourier index must be a positive integer", n=n)


def fourier_cos_coeff(q: Potential, n: int) -> float:
    _require_mode(n)
    return q.cos_moment(n)


def fourier_sin_coeff(q: Potential, n: int) -> float:
    _require_mode(n)
    return q.sin_moment(n)


def sine_moment(q: Potential, n: int) -> float:
    """``2 * integral of q(x) sin^2(n pi x)``, the first-order Dirichlet shift."""
    _require_mode(n)
    return q.sine_moment(n)


def linear_combination(terms: Sequence[tuple[float, Potential]]) -> Potential:
    """``sum c_i q_i`` in the narrowest representation that holds it exactly.

    Analytic terms stay analytic. Piecewise terms mixed with constants stay
    piecewise on the merged breakpoints. Anything else becomes a sampled
    potential on the finest sampled grid, refined to at least
    ``QUADRATURE_NODES`` nodes.
    """
    if not terms:
        return Analytic.zero()
    potentials = [q for _c, q in terms]
    if all(isinstance(q, Analytic) for q in potentials):
        mean = 0.0
        cos_terms: list[tuple[int, float]] = []
        sin_terms: list[tuple[int, float]] = []
        for c, q in terms:
            assert isinstance(q, Analytic)
            mean += c * q.mean
            cos_terms.extend((k, c * a) for k, a in q.cos_terms)
            sin_terms.extend((k, c * b) for k, b in q.sin_terms)
        return Analytic(mean, tuple(cos_terms), tuple(sin_terms))

    if all(
        isinstance(q, PiecewiseConstant) or (isinstance(q, Analytic) and q.is_constant)
        for q in potentials
    ):
        edges = np.unique(
            np.concatenate(
                [q.edges for q in potentials if isinstance(q, PiecewiseConstant)]
            )
        )
        midpoints = 0.5 * (edges[:-1] + edges[1:])
        return PiecewiseConstant(edges, _combine(terms, midpoints))

    sampled = [q for q in potentials if isinstance(q, Sampled)]
    cells = max((q.values.size - 1 for q in sampled), default=QUADRATURE_NODES - 1)
    refine = max(1, math.ceil((QUADRATURE_NODES - 1) / cells))
    nodes = np.linspace(0.0, 1.0, cells * refine + 1)
    return Sampled(_combine(terms, nodes), bounded=all(q.bounded for q in potentials))


def _combine(terms: Sequence[tuple[float, Potential]], xs: np.ndarray) -> np.ndarray:
    total = np.zeros_like(xs)
    for c, q in terms:
        total += c * q.sample(xs)
    return total


def add(q: Potential, p: Potential) -> Potential:
    return linear_combination([(1.0, q), (1.0, p)])


def subtract(q: Potential, qt: Potential) -> Potential:
    return linear_combination([(1.0, q), (-1.0, qt)])


def scale(q: Potential, factor: float) -> Potential:
    return linear_combination([(factor, q)])


def shift(q: Potential, constant: float) -> Potential:
    """``q + constant``; keeps the representation of ``q``."""
    if isinstance(q, Sampled):
        return Sampled(q.values + constant, bounded=q.bounded)
    return linear_combination([(1.0, q), (constant, Analytic.constant(1.0))])


def even_odd_split(q: Potential) -> EvenOddParts:
    """Parts about the midpoint: e(x) = (q(x)+q(1-x))/2, u(x) = (q(x)-q(1-x))/2."""
    if isinstance(q, Analytic):
        return EvenOddParts(
            Analytic(q.mean, q.cos_terms),
            Analytic(sin_terms=q.sin_terms),
        )
    if isinstance(q, Sampled):
        mirrored = q.values[::-1]
        return EvenOddParts(
            Sampled(0.5 * (q.values + mirrored), bounded=q.bounded),
            Sampled(0.5 * (q.values - mirrored), bounded=q.bounded),
        )
    assert isinstance(q, PiecewiseConstant)
    edges = np.unique(np.concatenate((q.edges, 1.0 - q.edges[::-1])))
    midpoints = 0.5 * (edges[:-1] + edges[1:])
    direct = q.sample(midpoints)
    mirrored = q.sample(1.0 - midpoints)
    return EvenOddParts(
        PiecewiseConstant(edges, 0.5 * (direct + mirrored)),
        PiecewiseConstant(edges, 0.5 * (direct - mirrored)),
    )


def l1_distance(q: Potential, constant: float = 0.0) -> float:
    """``||q - constant||`` in L1(0, 1)."""
    if isinstance(q, PiecewiseConstant):
        return float(np.dot(np.abs(q.values - constant), q.widths))
    if isinstance(q, Sampled):
        return _piecewise_linear_l1(q.values - constant)
    if isinstance(q, Analytic) and q.is_constant:
        return abs(q.mean - constant)
    xs = np.linspace(0.0, 1.0, DISTANCE_NODES)
    return _piecewise_linear_l1(q.sample(xs) - constant)


def _piecewise_linear_l1(values: np.ndarray) -> float:
    h = 1.0 / (values.size - 1)
    left, right = values[:-1], values[1:]
    same_sign = left * right >= 0.0
    magnitude = np.abs(left) + np.abs(right)
    crossing = np.divide(
        left * left + right * right,
        magnitude,
        out=np.zeros_like(magnitude),
        where=magnitude > 0.0,
    )
    per_cell = np.where(same_sign, magnitude, crossing)
    return float(0.5 * h * per_cell.sum())


def linf_distance(q: Potential, constant: float = 0.0) -> float | None:
    """Exact sup-norm distance; only piecewise and constant potentials qualify."""
    if isinstance(q, PiecewiseConstant):
        return float(np.abs(q.values - constant).max())
    if isinstance(q, Analytic) and q.is_constant:
        return abs(q.mean - constant)
    return None


def potential_from_fields(fields: Mapping[str, Any]) -> Potential:
    """Build a potential from already-typed definition fields."""
    kind = fields.get("kind")
    if kind == PotentialKind.PIECEWISE.value:
        return PiecewiseConstant(fields["breakpoints"], fields["values"])
    if kind == PotentialKind.SAMPLED.value:
        return Sampled(fields["values"], bounded=fields.get("bounded", True))
    if kind == PotentialKind.ANALYTIC.value:
        tag = fields.get("tag", "zero")
        if tag == "zero":
            return Analytic.zero()
        if tag == "constant":
            return Analytic.constant(fields.get("value", 0.0))
        if tag in ("cos", "sin"):
            mode = int(fields.get("mode", 1))
            amplitude = float(fields.get("amplitude", 1.0))
            if tag == "cos":
                return Analytic.cos_mode(mode, amplitude)
            return Analytic.sin_mode(mode, amplitude)
        if tag == "table":
            return Analytic(
                fields.get("mean", 0.0),
                tuple(fields.get("cos", ())),
                tuple(fields.get("sin", ())),
            )
        if tag == "catalog":
            return catalog_entry(fields["name"])
        raise PotentialDefinitionError(f"Unknown analytic tag '{tag}'", tag=tag)
    raise PotentialDefinitionError(f"Unknown potential kind '{kind}'", kind=kind)

"""Residual-based checkers for Ambarzumyan-type uniqueness conditions.

Every checker compares a potential ``q`` with a reference ``qt`` through the
n-th eigenvalues (1-based ``n``) and the reference eigenfunction. Hypotheses
and conclusions are reported as separate residuals with their own verdicts;
a theorem verdict of ``fail`` means the hypotheses held and the conclusion
did not.
"""

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import UnsupportedCombinationError, UsageError
from .numerics import ToleranceBundle
from .potential import (
    Analytic,
    Potential,
    even_odd_split,
    fourier_cos_coeff,
    fourier_sin_coeff,
    l1_distance,
    linear_combination,
    linf_distance,
    shift,
    sine_moment,
    subtract,
)
from .solver import (
    DEFAULT_SETTINGS,
    MAX_INDEX,
    Backend,
    BoundaryCondition,
    SolverSettings,
    eigenfunction,
    eigenvalue,
    spectrum,
    weighted_inner_product,
)

logger = logging.getLogger(__name__)

CONDITION_TOLERANCE = 1e-6
DEGENERACY_TOLERANCE = 1e-6
PERTURBATION_EPSILONS = (1e-1, 1e-2, 1e-3)
PERTURBATION_TOLERANCES = ToleranceBundle(ode_rel=1e-12, ode_abs=1e-14, root_tol=1e-13)


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    UNSUPPORTED = "unsupported"
    SKIPPED = "skipped"


class Theorem(str, Enum):
    CLASSIC = "classic"
    LOWEST_INNER = "lowest-inner"
    LOWEST_EXTREMAL = "lowest-extremal"
    MAIN = "main"
    MAIN_NORMALIZED = "main-normalized"
    DIRICHLET = "dirichlet"
    DIRICHLET_ZERO_MEAN = "dirichlet-zero-mean"


@dataclass(frozen=True, slots=True)
class Tolerances:
    condition: float = CONDITION_TOLERANCE
    solver: float = 1e-9
    ode_rel: float = 1e-10
    ode_abs: float = 1e-12


@dataclass(frozen=True, slots=True)
class ConditionResidual:
    """One hypothesis evaluated on its own."""

    name: str
    value: float | None
    tolerance: float
    verdict: Verdict
    branch: str | None = None
    degenerate: bool = False


@dataclass(frozen=True, slots=True)
class ConditionReport:
    theorem: str
    potential: str
    reference: str
    boundary: str
    backend: str
    n: int
    index: int
    eigenvalue: float
    reference_eigenvalue: float
    delta: float
    inner_product_value: float
    ess_inf_qhat: float | None
    ess_sup_qhat: float | None
    residual_inner: float
    residual_extremal: float | None
    extremal_branch: str | None
    conclusion_l1_residual: float
    conclusion_linf_residual: float | None
    proof_identity_residual: float
    mean_residual: float | None
    normalized_l1_residual: float | None
    degenerate: bool
    tolerances: Tolerances
    hypotheses: tuple[str, ...]
    verdicts: tuple[tuple[str, Verdict], ...]

    def verdict(self, name: str) -> Verdict:
        for key, value in self.verdicts:
            if key == name:
                return value
        raise KeyError(name)

    @property
    def hypotheses_pass(self) -> bool:
        return all(self.verdict(name) is Verdict.PASS for name in self.hypotheses)

    @property
    def hypothesis_failed(self) -> bool:
        return any(self.verdict(name) is Verdict.FAIL for name in self.hypotheses)


@dataclass(frozen=True, slots=True, eq=False)
class Reference:
    """Reference eigenvalue and a basis of its eigenspace."""

    eigenvalue: float
    eigenfunctions: tuple[np.ndarray, ...]

    @property
    def degenerate(self) -> bool:
        return len(self.eigenfunctions) > 1


InnerProduct = Callable[[Potential, np.ndarray], float]


def _gate(value: float | None, tolerance: float) -> Verdict:
    if value is None:
        return Verdict.UNSUPPORTED
    return Verdict.PASS if value <= tolerance else Verdict.FAIL


def _require_ordinal(n: int) -> None:
    if int(n) != n or n < 1:
        raise UsageError("invalid_index", "Condition index n must be >= 1", n=n)


def _dirichlet_reference(n: int, grid_size: int) -> Reference:
    xs = np.linspace(0.0, 1.0, grid_size)
    return Reference((n * math.pi) ** 2, (math.sqrt(2.0) * np.sin(n * math.pi * xs),))


class ConditionChecker:
    """Runs condition checks with shared settings, caching reference solves."""

    def __init__(
        self,
        settings: SolverSettings = DEFAULT_SETTINGS,
        *,
        tolerance: float = CONDITION_TOLERANCE,
        backend: Backend | None = None,
    ):
        if tolerance <= 0:
            raise UsageError(
                "invalid_tolerance", "Condition tolerance must be positive"
            )
        self.settings = settings
        self.tolerance = tolerance
        self.backend = backend
        self._references: dict[tuple[object, ...], Reference] = {}

    @property
    def tolerances(self) -> Tolerances:
        bundle = self.settings.tolerances
        return Tolerances(
            self.tolerance, bundle.root_tol, bundle.ode_rel, bundle.ode_abs
        )

    def backend_for(self, bc: BoundaryCondition) -> Backend:
        if not bc.separated:
            if self.backend is Backend.SHOOTING:
                raise UnsupportedCombinationError(Backend.SHOOTING.value, bc.label)
            return Backend.MATRIX
        return self.backend or Backend.SHOOTING

    def eigenvalue(self, q: Potential, bc: BoundaryCondition, k: int) -> float:
        return eigenvalue(q, bc, k, self.settings, backend=self.backend_for(bc))

    def reference(self, qt: Potential, bc: BoundaryCondition, k: int) -> Reference:
        backend = self.backend_for(bc)
        key = (qt.fingerprint(), bc, k, backend)
        cached = self._references.get(key)
        if cached is not None:
            return cached
        if backend is Backend.SHOOTING:
            lam = eigenvalue(qt, bc, k, self.settings, backend=backend)
            pair = eigenfunction(qt, bc, lam, self.settings)
            reference = Reference(lam, (pair.eigenfunction,))
        else:
            look_ahead = k + 1 if k < MAX_INDEX else k
            data = spectrum(qt, bc, look_ahead, self.settings, backend=backend)
            target = data.pairs[k].eigenvalue
            window = DEGENERACY_TOLERANCE * max(1.0, abs(target))
            reference = Reference(
                target,
                tuple(
                    pair.eigenfunction
                    for pair in data.pairs
                    if abs(pair.eigenvalue - target) <= window
                ),
            )
        logger.debug(
            "reference %s %s k=%d: %.17g (%d eigenfunctions)",
            qt,
            bc.label,
            k,
            reference.eigenvalue,
            len(reference.eigenfunctions),
        )
        self._references[key] = reference
        return reference

    # Single conditions ================================================================

    def first_condition(
        self, q: Potential, qt: Potential, bc: BoundaryCondition, n: int
    ) -> ConditionResidual:
        _require_ordinal(n)
        reference = self.reference(qt, bc, n - 1)
        delta = self.eigenvalue(q, bc, n - 1) - reference.eigenvalue
        qhat = subtract(q, qt)
        residual = min(
            abs(delta - weighted_inner_product(qhat, y))
            for y in reference.eigenfunctions
        )
        return ConditionResidual(
            "inner",
            residual,
            self.tolerance,
            _gate(residual, self.tolerance),
            degenerate=reference.degenerate,
        )

    def extremal_condition(
        self, q: Potential, qt: Potential, bc: BoundaryCondition, n: int
    ) -> ConditionResidual:
        _require_ordinal(n)
        qhat = subtract(q, qt)
        lower, upper = qhat.ess_inf(), qhat.ess_sup()
        if lower is None or upper is None:
            return ConditionResidual(
                "extremal", None, self.tolerance, Verdict.UNSUPPORTED
            )
        delta = self.eigenvalue(q, bc, n - 1) - self.reference(qt, bc, n - 1).eigenvalue
        residual, branch = _extremal(delta, lower, upper)
        return ConditionResidual(
            "extremal",
            residual,
            self.tolerance,
            _gate(residual, self.tolerance),
            branch,
        )

    # Theorems =========================================================================

    def classic(self, q: Potential) -> ConditionReport:
        bc = BoundaryCondition.neumann()
        grid = self.settings.grid_size
        reference = Reference(0.0, (np.ones(grid),))
        return self._assemble(
            Theorem.CLASSIC,
            q,
            Analytic.zero(),
            bc,
            1,
            reference,
            ("inner",),
            inner=lambda w, _y: w.integral(),
        )

    def lowest_inner(
        self, q: Potential, qt: Potential, bc: BoundaryCondition
    ) -> ConditionReport:
        return self._assemble(
            Theorem.LOWEST_INNER, q, qt, bc, 1, self.reference(qt, bc, 0), ("inner",)
        )

    def lowest_extremal(
        self, q: Potential, qt: Potential, bc: BoundaryCondition
    ) -> ConditionReport:
        return self._assemble(
            Theorem.LOWEST_EXTREMAL,
            q,
            qt,
            bc,
            1,
            self.reference(qt, bc, 0),
            ("extremal",),
        )

    def main(
        self, q: Potential, qt: Potential, bc: BoundaryCondition, n: int
    ) -> ConditionReport:
        _require_ordinal(n)
        return self._assemble(
            Theorem.MAIN,
            q,
            qt,
            bc,
            n,
            self.reference(qt, bc, n - 1),
            ("inner", "extremal"),
        )

    def main_normalized(
        self, q: Potential, qt: Potential, bc: BoundaryCondition, n: int
    ) -> ConditionReport:
        _require_ordinal(n)
        return self._assemble(
            Theorem.MAIN_NORMALIZED,
            q,
            qt,
            bc,
            n,
            self.reference(qt, bc, n - 1),
            ("inner", "extremal", "mean"),
        )

    def dirichlet(
        self, q: Potential, n: int, *, zero_mean: bool = False
    ) -> ConditionReport:
        _require_ordinal(n)
        bc = BoundaryCondition.dirichlet()
        if self.backend is Backend.MATRIX:
            grid = self.settings.cells + 1
        else:
            grid = self.settings.grid_size
        hypotheses: tuple[str, ...] = ("inner", "extremal")
        if zero_mean:
            hypotheses += ("mean",)
        return self._assemble(
            Theorem.DIRICHLET_ZERO_MEAN if zero_mean else Theorem.DIRICHLET,
            q,
            Analytic.zero(),
            bc,
            n,
            _dirichlet_reference(n, grid),
            hypotheses,
            inner=lambda w, _y: sine_moment(w, n),
        )

    def _assemble(
        self,
        theorem: Theorem,
        q: Potential,
        qt: Potential,
        bc: BoundaryCondition,
        n: int,
        reference: Reference,
        hypotheses: Sequence[str],
        *,
        inner: InnerProduct = weighted_inner_product,
    ) -> ConditionReport:
        lam = self.eigenvalue(q, bc, n - 1)
        delta = lam - reference.eigenvalue
        qhat = subtract(q, qt)

        candidates = [
            (abs(delta - value), value, y)
            for y in reference.eigenfunctions
            for value in (inner(qhat, y),)
        ]
        residual_inner, inner_value, best = min(candidates, key=lambda item: item[0])
        proof_identity = abs(inner(shift(qhat, -delta), best))

        lower, upper = qhat.ess_inf(), qhat.ess_sup()
        residual_extremal: float | None = None
        branch: str | None = None
        if lower is not None and upper is not None:
            residual_extremal, branch = _extremal(delta, lower, upper)

        normalized = "mean" in hypotheses
        mean_residual = abs(q.integral() - qt.integral()) if normalized else None
        normalized_l1 = l1_distance(qhat) if normalized else None
        conclusion_l1 = l1_distance(qhat, delta)

        gates = {
            "inner": residual_inner,
            "extremal": residual_extremal,
            "mean": mean_residual,
        }
        verdicts = [(name, _gate(gates[name], self.tolerance)) for name in hypotheses]
        hypotheses_pass = all(verdict is Verdict.PASS for _name, verdict in verdicts)
        conclusion = _gate(conclusion_l1, self.tolerance)
        verdicts.append(("conclusion", conclusion))
        conclusions = [conclusion]
        if normalized:
            strengthened = Verdict.SKIPPED
            if hypotheses_pass:
                strengthened = _gate(normalized_l1, self.tolerance)
            verdicts.append(("normalized", strengthened))
            conclusions.append(strengthened)
        if not hypotheses_pass:
            overall = Verdict.SKIPPED
        elif all(verdict is Verdict.PASS for verdict in conclusions):
            overall = Verdict.PASS
        else:
            overall = Verdict.FAIL
            logger.warning(
                "%s: hypotheses hold for %s but the conclusion residual is %.3g",
                theorem.value,
                q,
                conclusion_l1,
            )
        verdicts.append(("theorem", overall))
        logger.info(
            "%s n=%d %s: %s",
            theorem.value,
            n,
            bc.label,
            ", ".join(f"{name}={verdict.value}" for name, verdict in verdicts),
        )

        return ConditionReport(
            theorem=theorem.value,
            potential=q.describe(),
            reference=qt.describe(),
            boundary=bc.label,
            backend=self.backend_for(bc).value,
            n=n,
            index=n - 1,
            eigenvalue=lam,
            reference_eigenvalue=reference.eigenvalue,
            delta=delta,
            inner_product_value=inner_value,
            ess_inf_qhat=lower,
            ess_sup_qhat=upper,
            residual_inner=residual_inner,
            residual_extremal=residual_extremal,
            extremal_branch=branch,
            conclusion_l1_residual=conclusion_l1,
            conclusion_linf_residual=linf_distance(qhat, delta),
            proof_identity_residual=proof_identity,
            mean_residual=mean_residual,
            normalized_l1_residual=normalized_l1,
            degenerate=reference.degenerate,
            tolerances=self.tolerances,
            hypotheses=tuple(hypotheses),
            verdicts=tuple(verdicts),
        )

    # Whole-spectrum and perturbative checks ===========================================

    def classic_spectrum(self, q: Potential, k_max: int) -> "SpectrumCheck":
        bc = BoundaryCondition.neumann()
        deviations = tuple(
            self.eigenvalue(q, bc, k) - (k * math.pi) ** 2 for k in range(k_max + 1)
        )
        residual = max(abs(deviation) for deviation in deviations)
        conclusion = l1_distance(q)
        hypothesis = _gate(residual, self.tolerance)
        if hypothesis is not Verdict.PASS:
            overall = Verdict.SKIPPED
        else:
            overall = _gate(conclusion, self.tolerance)
        return SpectrumCheck(
            potential=q.describe(),
            k_max=k_max,
            deviations=deviations,
            residual=residual,
            conclusion_l1_residual=conclusion,
            tolerances=self.tolerances,
            verdicts=(
                ("spectrum", hypothesis),
                ("conclusion", _gate(conclusion, self.tolerance)),
                ("theorem", overall),
            ),
        )

    def perturbation_study(
        self,
        qt: Potential,
        p: Potential,
        bc: BoundaryCondition,
        n: int,
        epsilons: Sequence[float] = PERTURBATION_EPSILONS,
    ) -> "PerturbationStudy":
        """Sweep ``eps`` and measure how far ``lambda_n(qt + eps p)`` strays from
        the first-order prediction ``lambda_n(qt) + eps (p y_n, y_n)``."""
        _require_ordinal(n)
        if not bc.separated:
            raise UnsupportedCombinationError(Backend.SHOOTING.value, bc.label)
        if len(epsilons) < 2 or any(eps <= 0 for eps in epsilons):
            raise UsageError(
                "invalid_epsilons", "Need at least two positive epsilons"
            )
        settings = replace(self.settings, tolerances=PERTURBATION_TOLERANCES)
        k = n - 1
        base = linear_combination([(1.0, qt), (0.0, p)])
        base_value = eigenvalue(base, bc, k, settings, backend=Backend.SHOOTING)
        base_function = eigenfunction(base, bc, base_value, settings).eigenfunction
        slope_first_order = weighted_inner_product(p, base_function)

        rows = []
        for eps in epsilons:
            perturbed = linear_combination([(1.0, qt), (eps, p)])
            value = eigenvalue(perturbed, bc, k, settings, backend=Backend.SHOOTING)
            predicted = base_value + eps * slope_first_order
            rows.append(PerturbationRow(eps, value, predicted, abs(value - predicted)))

        errors = np.array([row.error for row in rows])
        slope: float | None = None
        if np.all(errors > 0.0):
            logs = np.log(np.array([row.epsilon for row in rows]))
            slope = float(np.polyfit(logs, np.log(errors), 1)[0])
        return PerturbationStudy(
            reference=qt.describe(),
            perturbation=p.describe(),
            boundary=bc.label,
            n=n,
            reference_eigenvalue=base_value,
            first_order=slope_first_order,
            rows=tuple(rows),
            slope=slope,
        )


def _extremal(delta: float, lower: float, upper: float) -> tuple[float, str]:
    below, above = abs(delta - lower), abs(delta - upper)
    return (below, "inf") if below <= above else (above, "sup")


@dataclass(frozen=True, slots=True)
class SpectrumCheck:
    """Whole Neumann spectrum against ``(k pi)^2`` for k <= k_max."""

    potential: str
    k_max: int
    deviations: tuple[float, ...]
    residual: float
    conclusion_l1_residual: float
    tolerances: Tolerances
    verdicts: tuple[tuple[str, Verdict], ...]


@dataclass(frozen=True, slots=True)
class PerturbationRow:
    epsilon: float
    eigenvalue: float
    predicted: float
    error: float


@dataclass(frozen=True, slots=True)
class PerturbationStudy:
    reference: str
    perturbation: str
    boundary: str
    n: int
    reference_eigenvalue: float
    first_order: float
    rows: tuple[PerturbationRow, ...]
    slope: float | None = None


@dataclass(frozen=True, slots=True)
class FourierRow:
    n: int
    cos_coeff: float
    sin_coeff: float
    sine_moment: float
    identity_residual: float
    even_cos: float
    even_sin: float
    odd_cos: float
    odd_sin: float


@dataclass(frozen=True, slots=True)
class FourierAudit:
    potential: str
    mean: float
    rows: tuple[FourierRow, ...] = field(default_factory=tuple)


# Module-level entry points ============================================================


def _checker(
    tol: float, settings: SolverSettings, backend: Backend | None
) -> ConditionChecker:
    return ConditionChecker(settings, tolerance=tol, backend=backend)


def check_classic(
    q: Potential,
    tol: float = CONDITION_TOLERANCE,
    *,
    settings: SolverSettings = DEFAULT_SETTINGS,
    backend: Backend | None = None,
) -> ConditionReport:
    return _checker(tol, settings, backend).classic(q)


def check_first_condition(
    q: Potential,
    qt: Potential,
    bc: BoundaryCondition,
    n: int,
    tol: float = CONDITION_TOLERANCE,
    *,
    settings: SolverSettings = DEFAULT_SETTINGS,
    backend: Backend | None = None,
) -> ConditionResidual:
    return _checker(tol, settings, backend).first_condition(q, qt, bc, n)


def check_extremal_condition(
    q: Potential,
    qt: Potential,
    bc: BoundaryCondition,
    n: int,
    tol: float = CONDITION_TOLERANCE,
    *,
    settings: SolverSettings = DEFAULT_SETTINGS,
    backend: Backend | None = None,
) -> ConditionResidual:
    return _checker(tol, settings, backend).extremal_condition(q, qt, bc, n)


def check_lowest_inner(
    q: Potential,
    qt: Potential,
    bc: BoundaryCondition,
    tol: float = CONDITION_TOLERANCE,
    *,
    settings: SolverSettings = DEFAULT_SETTINGS,
    backend: Backend | None = None,
) -> ConditionReport:
    return _checker(tol, settings, backend).lowest_inner(q, qt, bc)


def check_lowest_extremal(
    q: Potential,
    qt: Potential,
    bc: BoundaryCondition,
    tol: float = CONDITION_TOLERANCE,
    *,
    settings: SolverSettings = DEFAULT_SETTINGS,
    backend: Backend | None = None,
) -> ConditionReport:
    return _checker(tol, settings, backend).lowest_extremal(q, qt, bc)


def check_main(
    q: Potential,
    qt: Potential,
    bc: BoundaryCondition,
    n: int,
    tol: float = CONDITION_TOLERANCE,
    *,
    settings: SolverSettings = DEFAULT_SETTINGS,
    backend: Backend | None = None,
) -> ConditionReport:
    return _checker(tol, settings, backend).main(q, qt, bc, n)


def check_main_normalized(
    q: Potential,
    qt: Potential,
    bc: BoundaryCondition,
    n: int,
    tol: float = CONDITION_TOLERANCE,
    *,
    settings: SolverSettings = DEFAULT_SETTINGS,
    backend: Backend | None = None,
) -> ConditionReport:
    return _checker(tol, settings, backend).main_normalized(q, qt, bc, n)


def check_dirichlet_corollary(
    q: Potential,
    n: int,
    tol: float = CONDITION_TOLERANCE,
    *,
    settings: SolverSettings = DEFAULT_SETTINGS,
    backend: Backend | None = None,
) -> ConditionReport:
    return _checker(tol, settings, backend).dirichlet(q, n)


def check_dirichlet_zero_mean(
    q: Potential,
    n: int,
    tol: float = CONDITION_TOLERANCE,
    *,
    settings: SolverSettings = DEFAULT_SETTINGS,
    backend: Backend | None = None,
) -> ConditionReport:
    return _checker(tol, settings, backend).dirichlet(q, n, zero_mean=True)


def check_classic_spectrum(
    q: Potential,
    k_max: int,
    tol: float = CONDITION_TOLERANCE,
    *,
    settings: SolverSettings = DEFAULT_SETTINGS,
    backend: Backend | None = None,
) -> SpectrumCheck:
    return _checker(tol, settings, backend).classic_spectrum(q, k_max)


def perturbation_study(
    qt: Potential,
    p: Potential,
    bc: BoundaryCondition,
    n: int,
    epsilons: Sequence[float] = PERTURBATION_EPSILONS,
    *,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> PerturbationStudy:
    checker = ConditionChecker(settings)
    return checker.perturbation_study(qt, p, bc, n, epsilons)


def fourier_identity_residual(q: Potential, n: int) -> float:
    """``|2 int q sin^2(n pi x) - (int q - int q cos(2 n pi x))|``."""
    left = sine_moment(q, n)
    right = q.integral() - fourier_cos_coeff(q, n)
    return abs(left - right)


def fourier_audit(q: Potential, n_max: int) -> FourierAudit:
    if n_max < 1:
        raise UsageError("invalid_index", "n_max must be >= 1", n_max=n_max)
    parts = even_odd_split(q)
    rows = tuple(
        FourierRow(
            n=n,
            cos_coeff=fourier_cos_coeff(q, n),
            sin_coeff=fourier_sin_coeff(q, n),
            sine_moment=sine_moment(q, n),
            identity_residual=fourier_identity_residual(q, n),
            even_cos=fourier_cos_coeff(parts.even, n),
            even_sin=fourier_sin_coeff(parts.even, n),
            odd_cos=fourier_cos_coeff(parts.odd, n),
            odd_sin=fourier_sin_coeff(parts.odd, n),
        )
        for n in range(1, n_max + 1)
    )
    return FourierAudit(q.describe(), q.integral(), rows)

"""Thermal operations on a single qubit, restricted to populations.

A thermal operation at inverse temperature ``beta`` acting on a qubit with
gap ``omega`` sends the population vector ``(p_g, p_e)`` through a 2x2
column-stochastic matrix that leaves the Gibbs populations invariant
(a Gibbs-stochastic matrix).  The whole one-parameter family is

    L(omega, beta, lam) = (1 - lam) * I + lam * [[1 - q, 1], [q, 0]],

with ``q = exp(-beta * omega)`` and interaction strength ``lam`` in [0, 1].
The operation is Markovian (realizable by Lindblad dynamics with the Gibbs
state stationary) iff ``lam`` does not exceed the ground-state thermal
population; ``lam = 1`` is the extremal thermal operation (ETO), which is
non-Markovian and can invert populations.

Units: hbar = k_B = 1 throughout, so ``beta = 1/T`` and energies are
measured in units of the reference temperature.  Coherences are taken to be
fully dephased after every operation, so population vectors are a complete
state description here.

All types are immutable after construction and all operations are pure
functions; everything is safe for concurrent read-only use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConsistencyError, DegenerateCycleError, InvalidParameterError

# Probability drift below RENORM is accepted as-is, between RENORM and FAIL
# it is clamped and renormalized, above FAIL it is treated as a logic bug.
DRIFT_RENORM = 1e-12
DRIFT_FAIL = 1e-9

STOCHASTIC_TOL = 1e-12
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class PopulationVector:
    """Ground/excited occupation probabilities of the qubit."""

    p_g: float
    p_e: float

    def __post_init__(self):
        if not (0.0 <= self.p_g <= 1.0 and 0.0 <= self.p_e <= 1.0):
            raise InvalidParameterError(
                f"populations must lie in [0, 1], got ({self.p_g}, {self.p_e})"
            )
        if abs(self.p_g + self.p_e - 1.0) > DRIFT_RENORM:
            raise InvalidParameterError(
                f"populations must sum to 1 within {DRIFT_RENORM}, "
                f"got sum {self.p_g + self.p_e}"
            )

    @classmethod
    def from_raw(cls, values: Iterable[float]) -> "PopulationVector":
        """Build from possibly drifted raw values.

        Drift up to ``DRIFT_RENORM`` is accepted, drift up to ``DRIFT_FAIL``
        is clamped into [0, 1] and renormalized, anything larger raises
        ``ConsistencyError`` since it indicates a logic bug rather than
        rounding.
        """
        p_g, p_e = (float(v) for v in values)
        overshoot = max(0.0, -p_g, -p_e, p_g - 1.0, p_e - 1.0)
        drift = max(overshoot, abs(p_g + p_e - 1.0))
        if drift > DRIFT_FAIL:
            raise ConsistencyError(
                f"population drift {drift:.3e} exceeds {DRIFT_FAIL}: "
                f"raw values ({p_g}, {p_e})"
            )
        if drift > DRIFT_RENORM:
            p_g = min(max(p_g, 0.0), 1.0)
            p_e = min(max(p_e, 0.0), 1.0)
            total = p_g + p_e
            if total <= 0.0:
                raise ConsistencyError("populations vanished, cannot renormalize")
            p_g, p_e = p_g / total, p_e / total
        return cls(p_g, p_e)

    def as_array(self) -> np.ndarray:
        return np.array([self.p_g, self.p_e])


@dataclass(frozen=True)
class ThermalOpParams:
    """(gap, inverse temperature, interaction strength) of one operation."""

    omega: float
    beta: float
    lam: float

    def __post_init__(self):
        if self.omega <= 0.0:
            raise InvalidParameterError(f"omega must be > 0, got {self.omega}")
        if self.beta <= 0.0:
            raise InvalidParameterError(f"beta must be > 0, got {self.beta}")
        if not 0.0 <= self.lam <= 1.0:
            raise InvalidParameterError(f"lam must lie in [0, 1], got {self.lam}")


@dataclass(frozen=True, eq=False)
class GibbsStochasticMatrix:
    """2x2 column-stochastic matrix with the Gibbs populations as fixed point.

    Entry ``m[i, j]`` is the transition probability from source level ``j``
    to target level ``i``, ordering (ground, excited).
    """

    m: np.ndarray
    omega: float
    beta: float

    def __post_init__(self):
        arr = np.asarray(self.m, dtype=float)
        if arr.shape != (2, 2):
            raise InvalidParameterError(f"expected a 2x2 matrix, got shape {arr.shape}")
        if arr.min() < -STOCHASTIC_TOL or arr.max() > 1.0 + STOCHASTIC_TOL:
            raise InvalidParameterError("matrix entries must lie in [0, 1]")
        arr = np.clip(arr, 0.0, 1.0)
        colsums = arr.sum(axis=0)
        if np.abs(colsums - 1.0).max() > STOCHASTIC_TOL:
            raise InvalidParameterError(
                f"columns must sum to 1 within {STOCHASTIC_TOL}, got {colsums}"
            )
        gibbs = thermal_population(self.omega, self.beta).as_array()
        residual = np.abs(arr @ gibbs - gibbs).max()
        if residual > STOCHASTIC_TOL:
            raise InvalidParameterError(
                f"Gibbs populations are not a fixed point (residual {residual:.3e})"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "m", arr)

    def as_array(self) -> np.ndarray:
        return np.array(self.m)


def thermal_population(omega: float, beta: float) -> PopulationVector:
    """Gibbs populations of a qubit with gap ``omega`` at inverse
    temperature ``beta``."""
    if omega <= 0.0 or beta <= 0.0:
        raise InvalidParameterError(
            f"omega and beta must be > 0, got omega={omega}, beta={beta}"
        )
    q = math.exp(-beta * omega)
    return PopulationVector(1.0 / (1.0 + q), q / (1.0 + q))


def full_thermalization_lambda(omega: float, beta: float) -> float:
    """Interaction strength at which the operation fully thermalizes the
    qubit; also the Markovianity threshold."""
    return thermal_population(omega, beta).p_g


def build_map(params: ThermalOpParams) -> GibbsStochasticMatrix:
    """Population map of the thermal operation with the given parameters."""
    q = math.exp(-params.beta * params.omega)
    lam = params.lam
    m = (1.0 - lam) * np.eye(2) + lam * np.array([[1.0 - q, 1.0], [q, 0.0]])
    return GibbsStochasticMatrix(m, params.omega, params.beta)


def eto(omega: float, beta: float) -> GibbsStochasticMatrix:
    """Extremal thermal operation: the ``lam = 1`` member of the family."""
    return build_map(ThermalOpParams(omega, beta, 1.0))


def apply_map(m: GibbsStochasticMatrix, p: PopulationVector) -> PopulationVector:
    """Propagate populations through one thermal operation."""
    return PopulationVector.from_raw(m.m @ p.as_array())


def is_markovian(params: ThermalOpParams) -> bool:
    """Whether the operation is realizable by (time-dependent) Lindblad
    dynamics with the Gibbs state stationary."""
    return params.lam <= full_thermalization_lambda(params.omega, params.beta)


def stationary_population(m: np.ndarray) -> PopulationVector:
    """Unique fixed point of a 2x2 column-stochastic matrix.

    Computed in closed form from the off-diagonal entries,
    ``p_e = m[e,g] / (m[e,g] + m[g,e])``.  Raises ``DegenerateCycleError``
    when the matrix is numerically the identity and the fixed point is not
    unique.
    """
    arr = np.asarray(m, dtype=float)
    if np.abs(arr - np.eye(2)).max() < DEGENERACY_TOL:
        raise DegenerateCycleError(
            "cycle map is the identity within tolerance; fixed point not unique"
        )
    up = arr[1, 0]
    down = arr[0, 1]
    return PopulationVector.from_raw([down / (up + down), up / (up + down)])


def eto_vs_thermalization_scan(
    omega_over_T1: float, t2_over_t1_grid: Sequence[float]
) -> np.ndarray:
    """Excited-state population after one ETO vs. after full thermalization.

    The qubit starts in the thermal state at temperature T1 and a single
    operation at temperature T2 is applied, for each T2 in the grid.
    Returns an array with rows (T2/T1, p_e after ETO, p_e after
    thermalization); T1 = 1 sets the unit.
    """
    if omega_over_T1 <= 0.0:
        raise InvalidParameterError("omega_over_T1 must be > 0")
    grid = np.asarray(list(t2_over_t1_grid), dtype=float)
    if grid.size == 0 or grid.min() <= 0.0:
        raise InvalidParameterError("temperature grid entries must be > 0")
    initial = thermal_population(omega_over_T1, 1.0)
    rows = np.empty((grid.size, 3))
    for i, t2 in enumerate(grid):
        beta2 = 1.0 / t2
        after_eto = apply_map(eto(omega_over_T1, beta2), initial)
        rows[i] = (t2, after_eto.p_e, thermal_population(omega_over_T1, beta2).p_e)
    return rows

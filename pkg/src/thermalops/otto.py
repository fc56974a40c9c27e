"""Steady-state analysis of the four-stroke Otto cycle.

The cycle alternates two heat strokes with two gap quenches: heat at gap
``omega_H`` (point 1 -> 2), shift the gap down to ``omega_C`` at frozen
populations (2 -> 3, work out), cool at ``omega_C`` (3 -> 4), shift the gap
back up (4 -> 1, work in).  Heat strokes are thermal operations, so the
cyclostationary state solves ``L_C L_H p1 = p1``.

Sign conventions: ``Q_H = omega_H * (p_e2 - p_e1)`` is positive when heat
flows into the qubit, ``Q_C = omega_C * (p_e4 - p_e3)`` is negative in
engine operation, and the first law reads ``W = Q_H + Q_C`` exactly.  The
efficiency ``eta = 1 - omega_C / omega_H`` is an algebraic identity of the
cycle; the setup is an engine (W > 0) only for ``eta < 1 - T_C / T_H``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import InvalidParameterError, NotAnEngineWarning, RegimeMismatchError
from .maps import (
    GibbsStochasticMatrix,
    PopulationVector,
    ThermalOpParams,
    apply_map,
    build_map,
    full_thermalization_lambda,
    stationary_population,
)

MARKOV = "markov"
NONMARKOV = "nonmarkov"
REGIMES = (MARKOV, NONMARKOV)

_REGIME_TOL = 1e-12


@dataclass(frozen=True)
class OttoConfig:
    """Otto-cycle parameters: gaps, bath temperatures, coupling strengths."""

    omega_H: float
    omega_C: float
    T_H: float
    T_C: float
    lambda_H: float
    lambda_C: float

    def __post_init__(self):
        if not (self.omega_H > self.omega_C > 0.0):
            raise InvalidParameterError(
                f"need omega_H > omega_C > 0, got ({self.omega_H}, {self.omega_C})"
            )
        if not (self.T_H > self.T_C > 0.0):
            raise InvalidParameterError(
                f"need T_H > T_C > 0, got ({self.T_H}, {self.T_C})"
            )
        for name in ("lambda_H", "lambda_C"):
            lam = getattr(self, name)
            if not 0.0 <= lam <= 1.0:
                raise InvalidParameterError(f"{name} must lie in [0, 1], got {lam}")

    @classmethod
    def nonmarkov(cls, omega_H, omega_C, T_H, T_C) -> "OttoConfig":
        """Both heat strokes are extremal thermal operations."""
        return cls(omega_H, omega_C, T_H, T_C, 1.0, 1.0)

    @classmethod
    def markov(cls, omega_H, omega_C, T_H, T_C) -> "OttoConfig":
        """Both heat strokes fully thermalize the qubit."""
        return cls(
            omega_H,
            omega_C,
            T_H,
            T_C,
            full_thermalization_lambda(omega_H, 1.0 / T_H),
            full_thermalization_lambda(omega_C, 1.0 / T_C),
        )

    @property
    def beta_H(self) -> float:
        return 1.0 / self.T_H

    @property
    def beta_C(self) -> float:
        return 1.0 / self.T_C

    @property
    def work_quantum(self) -> float:
        """Energy exchanged per counted event, ``omega_H - omega_C``."""
        return self.omega_H - self.omega_C

    @property
    def efficiency(self) -> float:
        return 1.0 - self.omega_C / self.omega_H

    @property
    def carnot_efficiency(self) -> float:
        return 1.0 - self.T_C / self.T_H

    def hot_map(self) -> GibbsStochasticMatrix:
        return build_map(ThermalOpParams(self.omega_H, self.beta_H, self.lambda_H))

    def cold_map(self) -> GibbsStochasticMatrix:
        return build_map(ThermalOpParams(self.omega_C, self.beta_C, self.lambda_C))


@dataclass(frozen=True)
class OttoCycleReport:
    """Populations at the four cycle points plus energy bookkeeping."""

    p1: PopulationVector
    p2: PopulationVector
    p3: PopulationVector
    p4: PopulationVector
    W: float
    Q_H: float
    Q_C: float
    eta: float


def otto_steady_state(cfg: OttoConfig) -> PopulationVector:
    """Cyclostationary populations at point 1 (start of the heat stroke)."""
    composed = cfg.cold_map().m @ cfg.hot_map().m
    return stationary_population(composed)


def otto_cycle_report(cfg: OttoConfig) -> OttoCycleReport:
    """Full steady-cycle report: populations, work, heats, efficiency."""
    p1 = otto_steady_state(cfg)
    p2 = apply_map(cfg.hot_map(), p1)
    p3 = p2  # gap quench leaves populations frozen
    p4 = p1
    W = (cfg.omega_H - cfg.omega_C) * (p3.p_e - p1.p_e)
    Q_H = cfg.omega_H * (p2.p_e - p1.p_e)
    Q_C = cfg.omega_C * (p4.p_e - p3.p_e)
    eta = 1.0 - cfg.omega_C / cfg.omega_H
    if eta >= cfg.carnot_efficiency:
        warnings.warn(
            f"efficiency {eta:.6g} is not below the Carnot value "
            f"{cfg.carnot_efficiency:.6g}; not operating as a heat engine",
            NotAnEngineWarning,
            stacklevel=2,
        )
    return OttoCycleReport(p1, p2, p3, p4, W, Q_H, Q_C, eta)


def _nonmarkov_populations(a: float, b: float) -> tuple[float, float]:
    # a = beta_H * omega_H, b = beta_C * omega_C; expm1 keeps small-gap
    # accuracy, the exp(-x) form avoids overflow for large exponents.
    if a + b < 700.0:
        denom = math.expm1(a + b)
        return math.expm1(a) / denom, math.expm1(b) / denom
    x_h, x_c = math.exp(-a), math.exp(-b)
    denom = 1.0 - x_c * x_h
    return x_c * (1.0 - x_h) / denom, x_h * (1.0 - x_c) / denom


def analytic_populations(cfg: OttoConfig, regime: str) -> tuple[float, float]:
    """Closed-form excited-state populations (p_e1, p_e3) for the two
    reference regimes.

    ``markov`` requires both couplings at their full-thermalization values
    (points 1 and 3 are then thermal at the cold and hot bath); ``nonmarkov``
    requires extremal operations on both strokes.  Serves as an independent
    check on the steady-state solver.
    """
    a = cfg.beta_H * cfg.omega_H
    b = cfg.beta_C * cfg.omega_C
    if regime == MARKOV:
        expected_H = full_thermalization_lambda(cfg.omega_H, cfg.beta_H)
        expected_C = full_thermalization_lambda(cfg.omega_C, cfg.beta_C)
        if (
            abs(cfg.lambda_H - expected_H) > _REGIME_TOL
            or abs(cfg.lambda_C - expected_C) > _REGIME_TOL
        ):
            raise RegimeMismatchError(
                "markov regime requires full-thermalization coupling strengths"
            )
        return 1.0 / (1.0 + math.exp(b)), 1.0 / (1.0 + math.exp(a))
    if regime == NONMARKOV:
        if abs(cfg.lambda_H - 1.0) > _REGIME_TOL or abs(cfg.lambda_C - 1.0) > _REGIME_TOL:
            raise RegimeMismatchError("nonmarkov regime requires lambda = 1 on both strokes")
        return _nonmarkov_populations(a, b)
    raise InvalidParameterError(f"unknown regime {regime!r}, expected one of {REGIMES}")

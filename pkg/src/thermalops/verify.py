"""Cross-module invariant suites behind the ``verify`` CLI command.

Each suite aggregates the worst residual observed over a deterministic
batch of random configurations and reports it against the bound the
invariant is supposed to hold at.  Seeds are fixed, so a fresh checkout
always reproduces the same residuals.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import InvalidParameterError
from .fcs import (
    enumerate_work_distribution,
    tilted_map_otto,
    tilted_map_three_stroke,
    work_moments,
)
from .maps import ThermalOpParams, build_map, thermal_population
from .microscopic import (
    INTENSITY_DEPENDENT,
    FockTruncation,
    eto_deviation,
    induced_population_map,
    jc_evolution_map,
    swap_unitary,
)
from .otto import OttoConfig, otto_cycle_report, otto_steady_state
from .three_stroke import ThreeStrokeConfig, three_stroke_report, three_stroke_steady_state

_SEED = 20260810


@dataclass(frozen=True)
class CheckRecord:
    suite: str
    check: str
    observed: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.observed <= self.bound


def _random_otto(rng) -> OttoConfig:
    a = rng.uniform(0.3, 2.5)  # beta_H * omega_H
    b = a * rng.uniform(1.15, 2.2)  # beta_C * omega_C
    t_cold = 0.9 * min(1.0, a / b)
    return OttoConfig(
        omega_H=a,
        omega_C=t_cold * b,
        T_H=1.0,
        T_C=t_cold,
        lambda_H=rng.uniform(0.5, 1.0),
        lambda_C=rng.uniform(0.5, 1.0),
    )


def _random_three_stroke(rng, min_bias: float = 0.0) -> ThreeStrokeConfig:
    while True:
        cfg = ThreeStrokeConfig(
            omega=rng.uniform(0.3, 2.0),
            T_H=1.0,
            T_C=rng.uniform(0.35, 0.85),
            lambda_H=rng.uniform(0.5, 1.0),
            lambda_C=rng.uniform(0.5, 1.0),
        )
        p2 = abs(2.0 * three_stroke_report_quiet(cfg).p2.p_e - 1.0)
        if p2 >= min_bias:
            return cfg


def three_stroke_report_quiet(cfg: ThreeStrokeConfig):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return three_stroke_report(cfg)


def otto_report_quiet(cfg: OttoConfig):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return otto_cycle_report(cfg)


def suite_gibbs_fixed_point(
    draws: int = 1000,
    seed: int = _SEED,
    perturb: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> list[CheckRecord]:
    """Column-stochasticity and Gibbs fixed point of randomly drawn maps.

    ``perturb`` (tests only) lets a caller corrupt each matrix before the
    residuals are measured, to demonstrate that the suite actually bites.
    """
    rng = np.random.default_rng(seed)
    worst_entry = worst_cols = worst_gibbs = 0.0
    for _ in range(draws):
        omega = rng.uniform(0.05, 4.0)
        beta = rng.uniform(0.05, 4.0)
        lam = rng.uniform(0.0, 1.0)
        m = build_map(ThermalOpParams(omega, beta, lam)).as_array()
        if perturb is not None:
            m = perturb(m)
        worst_entry = max(worst_entry, float(np.maximum(m - 1.0, -m).max()))
        worst_cols = max(worst_cols, float(np.abs(m.sum(axis=0) - 1.0).max()))
        g = thermal_population(omega, beta).as_array()
        worst_gibbs = max(worst_gibbs, float(np.abs(m @ g - g).max()))
    return [
        CheckRecord("gibbs-fixed-point", "entries-in-range", worst_entry, 1e-12),
        CheckRecord("gibbs-fixed-point", "column-sums", worst_cols, 1e-12),
        CheckRecord("gibbs-fixed-point", "fixed-point-residual", worst_gibbs, 1e-12),
    ]


def suite_first_law(draws: int = 1000, seed: int = _SEED) -> list[CheckRecord]:
    """|W - Q_H - Q_C| over random Otto and three-stroke configurations."""
    rng = np.random.default_rng(seed)
    worst_otto = 0.0
    for _ in range(draws):
        rep = otto_report_quiet(_random_otto(rng))
        worst_otto = max(worst_otto, abs(rep.W - rep.Q_H - rep.Q_C))
    worst_three = 0.0
    for _ in range(draws):
        rep = three_stroke_report_quiet(_random_three_stroke(rng, min_bias=1e-6))
        worst_three = max(worst_three, abs(rep.W - rep.Q_H - rep.Q_C))
    return [
        CheckRecord("first-law", "otto", worst_otto, 1e-12),
        CheckRecord("first-law", "three-stroke", worst_three, 1e-12),
    ]


def suite_oracle_equivalence(
    configs_per_engine: int = 6, cycles: Iterable[int] = (1, 2, 3), seed: int = _SEED
) -> list[CheckRecord]:
    """Counting-field moments vs exact trajectory enumeration."""
    rng = np.random.default_rng(seed)
    worst_mean = worst_var = 0.0
    for _ in range(configs_per_engine):
        cfg = _random_otto(rng)
        tmap = tilted_map_otto(cfg)
        p1 = otto_steady_state(cfg)
        for n in cycles:
            dist = enumerate_work_distribution(cfg, n)
            stats = work_moments(tmap, p1, n)
            worst_mean = max(worst_mean, abs(stats.mean - dist.mean()) / abs(dist.mean()))
            worst_var = max(worst_var, abs(stats.variance - dist.variance()) / dist.variance())
    for _ in range(configs_per_engine):
        cfg = _random_three_stroke(rng, min_bias=0.05)
        tmap = tilted_map_three_stroke(cfg)
        p1 = three_stroke_steady_state(cfg)
        for n in cycles:
            dist = enumerate_work_distribution(cfg, n)
            stats = work_moments(tmap, p1, n)
            worst_mean = max(worst_mean, abs(stats.mean - dist.mean()) / abs(dist.mean()))
            worst_var = max(worst_var, abs(stats.variance - dist.variance()) / dist.variance())
    return [
        CheckRecord("oracle-equivalence", "mean", worst_mean, 1e-8),
        CheckRecord("oracle-equivalence", "variance", worst_var, 1e-8),
    ]


def suite_microscopic_eto(n_max: int = 60, beta_omega: float = 1.0) -> list[CheckRecord]:
    """Induced-map recovery of the ETO from the microscopic dilation."""
    tr = FockTruncation(n_max=n_max, omega=1.0, beta=beta_omega)
    dev_swap = eto_deviation(induced_population_map(swap_unitary(tr), tr), tr)
    dev_jc = eto_deviation(jc_evolution_map(1.0, math.pi / 2.0, tr, INTENSITY_DEPENDENT), tr)
    return [
        CheckRecord("microscopic-eto", "swap-unitary", dev_swap, 1e-8),
        CheckRecord("microscopic-eto", "jc-half-rabi", dev_jc, 1e-8),
    ]


SUITES: dict[str, Callable[[], list[CheckRecord]]] = {
    "gibbs-fixed-point": suite_gibbs_fixed_point,
    "first-law": suite_first_law,
    "oracle-equivalence": suite_oracle_equivalence,
    "microscopic-eto": suite_microscopic_eto,
}


def run_suites(name: str = "all") -> list[CheckRecord]:
    """Run one named suite, or all of them."""
    if name == "all":
        records = []
        for fn in SUITES.values():
            records.extend(fn())
        return records
    if name not in SUITES:
        raise InvalidParameterError(
            f"unknown suite {name!r}; choose from {('all',) + tuple(SUITES)}"
        )
    return SUITES[name]()

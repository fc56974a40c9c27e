"""Constrained performance scans over the Otto gap.

Fixing the efficiency ``eta`` and the Carnot efficiency ``eta_C`` pins
``omega_C = (1 - eta) * omega_H`` and ``T_C = (1 - eta_C) * T_H``, leaving
the single gap ``omega_H`` free; the work-per-cycle (in units of k_B T_H)
is maximized over it by a log-spaced coarse scan followed by golden-section
refinement.  The three-stroke engine has no free gap once (eta, eta_C) is
chosen: its gap is recovered by inverting the monotone efficiency curve on
the engine branch with bisection.

All scans are deterministic: identical inputs produce bit-identical
outputs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BisectionError,
    InvalidParameterError,
    MultimodalScanWarning,
    NoInteriorMaximumWarning,
)
from .fcs import (
    scaled_cumulants,
    tilted_map_otto,
    tilted_map_three_stroke,
    work_moments,
)
from .otto import MARKOV, NONMARKOV, REGIMES, OttoConfig, otto_cycle_report, otto_steady_state
from .three_stroke import ThreeStrokeConfig, three_stroke_report, three_stroke_steady_state

THREE_STROKE_ENGINE = "three_stroke"
ENGINES = (NONMARKOV, MARKOV, THREE_STROKE_ENGINE)

SINGLE_CYCLE = "single_cycle"
INFINITE = "infinite"
HORIZONS = (SINGLE_CYCLE, INFINITE)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_XTOL = 1e-8
_PEAK_TIE_TOL = 1e-6


@dataclass(frozen=True)
class ScanSpec:
    """Gap-scan specification at fixed (eta, eta_C)."""

    eta: float
    eta_C: float
    T_H: float
    regime: str
    omega_lo: float = 1e-3
    omega_hi: float = 20.0
    grid_size: int = 200

    def __post_init__(self):
        if not 0.0 < self.eta < self.eta_C < 1.0:
            raise InvalidParameterError(
                f"need 0 < eta < eta_C < 1, got eta={self.eta}, eta_C={self.eta_C}"
            )
        if self.T_H <= 0.0:
            raise InvalidParameterError(f"T_H must be > 0, got {self.T_H}")
        if not 0.0 < self.omega_lo < self.omega_hi:
            raise InvalidParameterError("need 0 < omega_lo < omega_hi")
        if self.regime not in REGIMES:
            raise InvalidParameterError(f"regime must be one of {REGIMES}")
        if self.grid_size < 3:
            raise InvalidParameterError("grid_size must be at least 3")


@dataclass(frozen=True)
class OptimumRecord:
    omega_H_star: float
    W_star: float
    converged: bool
    evaluations: int


def otto_config_at(
    eta: float, eta_C: float, T_H: float, omega_H: float, regime: str
) -> OttoConfig:
    """Otto configuration with (eta, eta_C) pinned; omegas in k_B T_H units."""
    omega_C = (1.0 - eta) * omega_H
    T_C = (1.0 - eta_C) * T_H
    if regime == NONMARKOV:
        return OttoConfig.nonmarkov(omega_H, omega_C, T_H, T_C)
    if regime == MARKOV:
        return OttoConfig.markov(omega_H, omega_C, T_H, T_C)
    raise InvalidParameterError(f"regime must be one of {REGIMES}, got {regime!r}")


def work_at(eta: float, eta_C: float, T_H: float, omega_H: float, regime: str) -> float:
    """Otto work-per-cycle in units of k_B T_H at the given gap.

    ``eta = eta_C`` is admitted (it gives W = 0) so that the Carnot
    endpoint can be probed directly.
    """
    if not 0.0 < eta <= eta_C < 1.0:
        raise InvalidParameterError(f"need 0 < eta <= eta_C < 1, got {eta}, {eta_C}")
    if omega_H <= 0.0:
        raise InvalidParameterError(f"omega_H must be > 0, got {omega_H}")
    cfg = otto_config_at(eta, eta_C, T_H, omega_H, regime)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # eta = eta_C probes are intentional
        report = otto_cycle_report(cfg)
    return report.W / T_H


def _golden_max(f, lo: float, hi: float, xtol: float = _XTOL):
    """Golden-section maximization on [lo, hi]; returns (x, f(x), evals)."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    while b - a > xtol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        evals += 1
    if fc > fd:
        return c, fc, evals
    return d, fd, evals


def maximize_work(spec: ScanSpec) -> OptimumRecord:
    """Maximize the Otto work-per-cycle over the gap range.

    Log-spaced coarse scan, then golden-section refinement of the
    bracketing interval to ``1e-8`` absolute in ``omega_H``.  If the best
    coarse point sits at a range endpoint a warning is issued and the
    record is marked unconverged; if a second local maximum ties the best
    one within ``1e-6`` it is refined as well and the larger value wins.
    """
    grid = np.logspace(math.log10(spec.omega_lo), math.log10(spec.omega_hi), spec.grid_size)
    values = np.array(
        [work_at(spec.eta, spec.eta_C, spec.T_H, w, spec.regime) for w in grid]
    )
    evals = spec.grid_size
    best = int(values.argmax())

    interior = (values[1:-1] >= values[:-2]) & (values[1:-1] >= values[2:])
    peaks = sorted(np.flatnonzero(interior) + 1, key=lambda i: -values[i])

    converged = True
    if best in (0, spec.grid_size - 1):
        warnings.warn(
            f"coarse-scan maximum at range endpoint omega_H={grid[best]:.6g}; "
            "widen [omega_lo, omega_hi]",
            NoInteriorMaximumWarning,
            stacklevel=2,
        )
        converged = False

    to_refine = [best] if best not in peaks else [peaks[0]]
    if len(peaks) >= 2 and values[peaks[0]] - values[peaks[1]] <= _PEAK_TIE_TOL:
        warnings.warn(
            "two near-degenerate coarse-scan maxima; refining both",
            MultimodalScanWarning,
            stacklevel=2,
        )
        to_refine.append(peaks[1])

    x_star, w_star = grid[best], values[best]
    f = lambda w: work_at(spec.eta, spec.eta_C, spec.T_H, w, spec.regime)
    for idx in to_refine:
        lo = grid[max(idx - 1, 0)]
        hi = grid[min(idx + 1, spec.grid_size - 1)]
        x, fx, used = _golden_max(f, lo, hi)
        evals += used
        if fx > w_star:
            x_star, w_star = x, fx
    return OptimumRecord(float(x_star), float(w_star), converged, evals)


def _three_stroke_eta(omega: float, beta_H: float, beta_C: float) -> float:
    return 1.0 - math.expm1(beta_H * omega) / -math.expm1(-beta_C * omega)


def _three_stroke_work(omega: float, beta_H: float, beta_C: float) -> float:
    return omega * (2.0 / (math.exp(beta_H * omega) + math.exp(-beta_C * omega)) - 1.0)


def three_stroke_omega_for_eta(eta: float, eta_C: float, T_H: float) -> float:
    """Gap at which the three-stroke engine runs at efficiency ``eta``.

    The efficiency decreases monotonically from ``eta_C`` (gap -> 0) to 0
    at the zero-work gap; the target is found by bisection on that branch.
    Monotonicity is verified on a coarse grid each call.
    """
    if not 0.0 < eta < eta_C < 1.0:
        raise BisectionError(
            f"target efficiency {eta} outside the attainable range (0, {eta_C})"
        )
    beta_H = 1.0 / T_H
    beta_C = 1.0 / ((1.0 - eta_C) * T_H)

    # zero-work gap: W < 0 beyond it
    hi = T_H
    while _three_stroke_work(hi, beta_H, beta_C) > 0.0:
        hi *= 2.0
        if hi > 1e9 * T_H:
            raise BisectionError("failed to bracket the zero-work gap")
    lo = 1e-12 * T_H
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _three_stroke_work(mid, beta_H, beta_C) > 0.0:
            lo = mid
        else:
            hi = mid
    omega_max = 0.5 * (lo + hi)

    probes = np.logspace(math.log10(omega_max) - 6.0, math.log10(omega_max), 32)
    etas = [_three_stroke_eta(w, beta_H, beta_C) for w in probes]
    if any(b > a + 1e-12 for a, b in zip(etas, etas[1:])):
        raise BisectionError("efficiency is not monotone on the engine branch")

    lo, hi = 1e-12 * T_H, omega_max
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _three_stroke_eta(mid, beta_H, beta_C) > eta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def three_stroke_config_at(eta: float, eta_C: float, T_H: float) -> ThreeStrokeConfig:
    omega = three_stroke_omega_for_eta(eta, eta_C, T_H)
    return ThreeStrokeConfig.nonmarkov(omega, T_H, (1.0 - eta_C) * T_H)


def work_efficiency_curve(
    eta_C: float, T_H: float, engine: str, eta_grid: Sequence[float]
) -> np.ndarray:
    """Work-per-cycle (k_B T_H units) vs efficiency for one engine.

    Otto rows maximize over the gap at each efficiency; three-stroke rows
    invert the efficiency for the gap and evaluate the closed cycle.
    """
    etas = np.asarray(list(eta_grid), dtype=float)
    if etas.size == 0 or not ((etas > 0.0) & (etas < eta_C)).all():
        raise InvalidParameterError("eta grid must lie strictly inside (0, eta_C)")
    if engine not in ENGINES:
        raise InvalidParameterError(f"engine must be one of {ENGINES}, got {engine!r}")
    rows = np.empty((etas.size, 2))
    for i, eta in enumerate(etas):
        if engine == THREE_STROKE_ENGINE:
            cfg = three_stroke_config_at(eta, eta_C, T_H)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                w = three_stroke_report(cfg).W / T_H
        else:
            w = maximize_work(ScanSpec(eta, eta_C, T_H, engine)).W_star
        rows[i] = (eta, w)
    return rows


def _otto_point(cfg: OttoConfig, horizon: str) -> tuple[float, float]:
    tmap = tilted_map_otto(cfg)
    if horizon == SINGLE_CYCLE:
        stats = work_moments(tmap, otto_steady_state(cfg), 1)
        return stats.mean, stats.ratio
    mean, var = scaled_cumulants(tmap)
    return mean, var / mean


def _three_stroke_point(cfg: ThreeStrokeConfig, horizon: str) -> tuple[float, float]:
    tmap = tilted_map_three_stroke(cfg)
    if horizon == SINGLE_CYCLE:
        stats = work_moments(tmap, three_stroke_steady_state(cfg), 1)
        return stats.mean, stats.ratio
    mean, var = scaled_cumulants(tmap)
    return mean, var / mean


def fluctuation_curve(
    eta: float,
    eta_C: float,
    T_H: float,
    horizon: str,
    omega_H_grid: Sequence[float],
) -> dict[str, np.ndarray]:
    """Work vs variance-to-work ratio at fixed (eta, eta_C).

    Returns, per Otto regime, rows ``(omega_H, W, ratio)`` parametrized by
    the gap grid, plus the single three-stroke point under the key
    ``"three_stroke"``.  Energies are in units of k_B T_H.  ``horizon``
    selects single-cycle statistics or the infinite-cycle scaled limit.
    """
    if horizon not in HORIZONS:
        raise InvalidParameterError(f"horizon must be one of {HORIZONS}, got {horizon!r}")
    if not 0.0 < eta < eta_C < 1.0:
        raise InvalidParameterError("need 0 < eta < eta_C < 1")
    grid = np.asarray(list(omega_H_grid), dtype=float)
    if grid.size == 0 or grid.min() <= 0.0:
        raise InvalidParameterError("omega_H grid entries must be > 0")

    out: dict[str, np.ndarray] = {}
    for regime in (NONMARKOV, MARKOV):
        rows = np.empty((grid.size, 3))
        for i, omega_H in enumerate(grid):
            cfg = otto_config_at(eta, eta_C, T_H, omega_H, regime)
            mean, ratio = _otto_point(cfg, horizon)
            rows[i] = (omega_H, mean / T_H, ratio / T_H)
        out[regime] = rows
    cfg3 = three_stroke_config_at(eta, eta_C, T_H)
    mean, ratio = _three_stroke_point(cfg3, horizon)
    out[THREE_STROKE_ENGINE] = np.array([cfg3.omega, mean / T_H, ratio / T_H])
    return out

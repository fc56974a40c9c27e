import math
import warnings

import numpy as np
import pytest

from thermalops import (
    DegenerateCycleError,
    InvalidParameterError,
    NotAnEngineWarning,
    OttoConfig,
    RegimeMismatchError,
    analytic_populations,
    apply_map,
    otto_cycle_report,
    otto_steady_state,
)

LN2 = math.log(2.0)
LN4 = math.log(4.0)


def config_for(a, b, lambda_H, lambda_C, t_hot=1.0):
    """Otto config hitting beta_H*omega_H = a and beta_C*omega_C = b."""
    t_cold = 0.9 * min(1.0, a / b) * t_hot
    return OttoConfig(a * t_hot, t_cold * b, t_hot, t_cold, lambda_H, lambda_C)


def eto_config(a, b):
    return config_for(a, b, 1.0, 1.0)


def markov_config(a, b):
    cfg = eto_config(a, b)
    return OttoConfig.markov(cfg.omega_H, cfg.omega_C, cfg.T_H, cfg.T_C)


def quiet_report(cfg):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return otto_cycle_report(cfg)


def test_config_validation():
    with pytest.raises(InvalidParameterError):
        OttoConfig(1.0, 1.5, 1.0, 0.5, 1.0, 1.0)  # omega_C > omega_H
    with pytest.raises(InvalidParameterError):
        OttoConfig(1.0, 0.5, 0.5, 1.0, 1.0, 1.0)  # T_C > T_H
    with pytest.raises(InvalidParameterError):
        OttoConfig(1.0, 0.5, 1.0, 0.5, 1.5, 1.0)


def test_eto_steady_state_ln2_ln4():
    p1 = otto_steady_state(eto_config(LN2, LN4))
    assert math.isclose(p1.p_e, 1.0 / 7.0, abs_tol=1e-14)


def test_markov_steady_state_ln2_ln4():
    p1 = otto_steady_state(markov_config(LN2, LN4))
    assert math.isclose(p1.p_e, 1.0 / 5.0, abs_tol=1e-14)


def test_eto_report_ln2_ln4():
    cfg = eto_config(LN2, LN4)
    rep = quiet_report(cfg)
    assert math.isclose(rep.p1.p_e, 1.0 / 7.0, abs_tol=1e-14)
    assert math.isclose(rep.p3.p_e, 3.0 / 7.0, abs_tol=1e-14)
    assert math.isclose(rep.W, (2.0 / 7.0) * cfg.work_quantum, abs_tol=1e-14)


def test_markov_report_ln2_ln4():
    cfg = markov_config(LN2, LN4)
    rep = quiet_report(cfg)
    assert math.isclose(rep.p1.p_e, 1.0 / 5.0, abs_tol=1e-14)
    assert math.isclose(rep.p3.p_e, 1.0 / 3.0, abs_tol=1e-14)
    assert math.isclose(rep.W, (2.0 / 15.0) * cfg.work_quantum, abs_tol=1e-14)


def test_work_strokes_freeze_populations():
    rep = quiet_report(eto_config(0.7, 1.9))
    assert rep.p2 == rep.p3
    assert rep.p4 == rep.p1


def test_carnot_pinned_thermalization_gives_zero_work():
    # omega_C / omega_H = 1 - eta_C makes both baths see the same beta*omega
    omega_H, T_H, T_C = 1.3, 1.0, 0.6
    cfg = OttoConfig.markov(omega_H, (T_C / T_H) * omega_H, T_H, T_C)
    with pytest.warns(NotAnEngineWarning):
        rep = otto_cycle_report(cfg)
    assert abs(rep.W) < 1e-14


def test_first_law_random():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        cfg = config_for(
            rng.uniform(0.1, 4.0),
            rng.uniform(0.1, 4.0),
            rng.uniform(0.05, 1.0),
            rng.uniform(0.05, 1.0),
            t_hot=rng.uniform(0.5, 2.0),
        )
        rep = quiet_report(cfg)
        assert abs(rep.W - rep.Q_H - rep.Q_C) <= 1e-12


def test_efficiency_identity_random():
    rng = np.random.default_rng(6)
    for _ in range(200):
        cfg = config_for(
            rng.uniform(0.1, 4.0),
            rng.uniform(0.1, 4.0),
            rng.uniform(0.05, 1.0),
            rng.uniform(0.05, 1.0),
        )
        rep = quiet_report(cfg)
        assert math.isclose(rep.eta, 1.0 - cfg.omega_C / cfg.omega_H, rel_tol=1e-15)


def test_population_dominance_and_work_dominance():
    # engine regime (eta < eta_C <=> b > a): extremal strokes beat
    # thermalization on both cycle points, hence on work
    rng = np.random.default_rng(7)
    for _ in range(300):
        a = rng.uniform(0.1, 3.0)
        b = a * rng.uniform(1.02, 3.0)
        nm = quiet_report(eto_config(a, b))
        mk = quiet_report(markov_config(a, b))
        assert nm.p3.p_e > mk.p3.p_e
        assert nm.p1.p_e < mk.p1.p_e
        assert nm.W > mk.W


def test_engine_regime_iff_sub_carnot():
    rng = np.random.default_rng(8)
    for _ in range(200):
        a = rng.uniform(0.1, 3.0)
        b = a * rng.uniform(0.5, 2.0)
        if abs(b - a) < 1e-3:
            continue
        for cfg in (eto_config(a, b), markov_config(a, b)):
            assert (quiet_report(cfg).W > 0.0) == (b > a)


def test_degenerate_cycle_rejected():
    with pytest.raises(DegenerateCycleError):
        otto_steady_state(OttoConfig(1.0, 0.5, 1.0, 0.5, 0.0, 0.0))


def test_not_an_engine_warning_above_carnot():
    # eta = 0.6 > eta_C = 0.5
    with pytest.warns(NotAnEngineWarning):
        otto_cycle_report(OttoConfig.nonmarkov(1.0, 0.4, 1.0, 0.5))


def test_analytic_populations_nonmarkov_symmetric():
    cfg = eto_config(LN2, LN2 * (1.0 + 1e-15))  # b must exceed a for a valid config
    p1, p3 = analytic_populations(cfg, "nonmarkov")
    assert math.isclose(p1, 1.0 / 3.0, abs_tol=1e-12)
    assert math.isclose(p3, 1.0 / 3.0, abs_tol=1e-12)


def test_analytic_populations_markov_example():
    p1, p3 = analytic_populations(markov_config(LN2, LN4), "markov")
    assert math.isclose(p1, 0.2, abs_tol=1e-14)
    assert math.isclose(p3, 1.0 / 3.0, abs_tol=1e-14)


def test_analytic_matches_solver_random():
    rng = np.random.default_rng(9)
    for _ in range(200):
        a, b = rng.uniform(0.05, 5.0), rng.uniform(0.05, 5.0)
        for cfg, regime in ((eto_config(a, b), "nonmarkov"), (markov_config(a, b), "markov")):
            p1_exact, p3_exact = analytic_populations(cfg, regime)
            p1 = otto_steady_state(cfg)
            p3 = apply_map(cfg.hot_map(), p1)
            assert abs(p1.p_e - p1_exact) <= 1e-12
            assert abs(p3.p_e - p3_exact) <= 1e-12


def test_analytic_populations_regime_mismatch():
    cfg = eto_config(LN2, LN4)
    with pytest.raises(RegimeMismatchError):
        analytic_populations(cfg, "markov")
    with pytest.raises(RegimeMismatchError):
        analytic_populations(markov_config(LN2, LN4), "nonmarkov")
    with pytest.raises(InvalidParameterError):
        analytic_populations(cfg, "something")

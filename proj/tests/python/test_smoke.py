import math

import numpy as np
import pytest

import viscotherm as vt


def coupled():
    return vt.coefficient_presets(["rational-visc", "linear-dilation"])


def test_zero_data_stays_zero():
    g = vt.Grid(math.pi, 21)
    init = vt.initial_preset("sine-mode", g, {"A": 0, "B": 0, "c": 0, "d": 0})
    tr = vt.run(init, coupled(), g, vt.StepConfig(dt=1e-3, t_end=0.05))
    assert len(tr) == 51
    assert tr.v.shape == (51, 21)
    assert not tr.v.any() and not tr.u.any() and not tr.theta.any()


def test_energy_balance_small_run():
    g = vt.Grid(math.pi, 41)
    tr = vt.run(vt.initial_preset("sine-mode", g), coupled(), g, vt.StepConfig(dt=1e-3, t_end=0.2))
    e = vt.energy_ledger(tr, coupled())
    assert e.max_balance_residual() <= 1e-2 * e.total[0]
    assert max(vt.a_priori_ratios(e)) <= 1.01
    assert tr.min_theta >= 0.0


def test_mode_decay_matches_quadratic_roots():
    g = vt.Grid(math.pi, 101)
    c = vt.coefficient_presets("const")
    tr = vt.run(vt.initial_preset("sine-mode", g, {"B": 0}), c, g, vt.StepConfig(dt=1e-3, epsilon=1e-6, t_end=1.0))
    # The sine projection of u follows exp(-t/2) (cos wt + sin(wt)/(2w) ), w = sqrt(3)/2.
    w = math.sqrt(3) / 2
    t = np.asarray(tr.t)
    proj = (tr.u * np.sin(g.x)).sum(axis=1) * g.dx / (math.pi / 2)
    expect = np.exp(-t / 2) * (np.cos(w * t) + np.sin(w * t) / (2 * w))
    assert np.max(np.abs(proj - expect)) < 5e-3


def test_weak_residual_rows():
    g = vt.Grid(math.pi, 41)
    tr = vt.run(vt.initial_preset("sine-mode", g), coupled(), g, vt.StepConfig(dt=1e-3, t_end=0.5))
    rows = vt.weak_residuals(tr, coupled())
    assert len(rows) == 12
    assert sum(r.has_momentum for r in rows) == 6


def test_sweep_needs_three_values():
    g = vt.Grid(math.pi, 21)
    with pytest.raises(ValueError, match="3 epsilons"):
        vt.epsilon_sweep(vt.initial_preset("sine-mode", g), coupled(), g, vt.StepConfig(dt=1e-3, t_end=0.01), [1e-3])


def test_config_errors_and_warnings():
    assert vt.validate_config("coefficients:\n  preset: power-f\n  alpha: 1.6\n")
    with pytest.raises(vt.ConfigError, match="line 2"):
        vt.validate_config("step:\n  bogus: 1\n")


def test_invariant_battery():
    results = vt.check()
    assert results and all(ok for _, ok, _ in results)


def test_refinement_orders():
    t = vt.refinement_study(coupled(), t_end=0.25)
    assert all(o >= 1.9 for o in t.spatial_order)

import math

import numpy as np
import pytest

import granular


def test_collide_conserves_momentum_and_reports_loss():
    v = np.array([1.0, 0.0, 0.0])
    vs = np.array([-1.0, 0.0, 0.0])
    vp, vsp, de = granular.collide(v, vs, np.array([1.0, 0.0, 0.0]), 0.5)
    np.testing.assert_allclose(vp, [-0.5, 0, 0])
    np.testing.assert_allclose(vsp, [0.5, 0, 0])
    assert de == pytest.approx(-1.5)


def test_ensemble_and_moments():
    v = granular.init_ensemble(5000, 3, "maxwellian", 7)
    assert v.shape == (5000, 3)
    assert np.abs(v.mean(axis=0)).max() < 1e-12
    assert granular.moment(v, 1.0) == pytest.approx(1.0, rel=1e-12)
    assert granular.moment(v, 0.5) ** 2 <= granular.moment(v, 1.0)


def test_sample_omega_unit_vectors():
    om = granular.sample_omega(np.array([0.0, 0.0, 1.0]), count=100, seed=3)
    np.testing.assert_allclose(np.linalg.norm(om, axis=1), 1.0, rtol=1e-14)


def test_haff_fit_on_short_run():
    run = granular.run_physical(e=0.9, n=2000, t_max=200.0)
    s = run["series"]
    assert run["halt_reason"] == "horizon"
    assert np.all(np.diff(s["E"]) <= 0)
    fit = granular.fit_cooling(s["t"], s["E"], 0.0)
    assert fit["regime"] == "sub-critical"
    assert abs(fit["exponent_hat"] + 2) < 0.3
    bound = granular.check_moment_bound(s["t"], s["E"], s["m_three_half"])
    assert bound["kappa_hat"] > 0


def test_rescaled_run_and_scaling_map():
    run = granular.run_rescaled(e=0.9, n=2000, s_max=30.0, keep_histograms=True)
    assert 0 < run["c0_hat"] <= run["c1_hat"]
    prof = run["profile"]
    assert sum(prof["masses"]) + prof["overflow"] == pytest.approx(1.0)
    assert granular.l1_distance(prof, prof) == 0.0
    assert len(run["histograms"]) == len(run["series"]["t"])

    t = np.linspace(0, 10, 101)
    m = granular.build_scaling_map(t, np.ones_like(t), 1.0, 0.0)
    np.testing.assert_allclose(m["T"], np.log1p(t), rtol=1e-12)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        granular.collide(np.zeros(3), np.zeros(3), np.array([1.0, 0, 0]), 1.5)
    with pytest.raises(granular.DivergenceError):
        granular.run_rescaled(e=0.5, tau=50.0, n=200, s_max=10.0)
    assert issubclass(granular.DivergenceError, granular.NumericalError)


def test_cli_entry_point(tmp_path):
    rc, _, err = granular.run_cli(["simulate", "--n", "500", "--t-max", "5", "--out-dir", str(tmp_path)])
    assert rc == 0, err
    assert (tmp_path / "series.csv").exists()
    rc, _, _ = granular.run_cli(["simulate", "--e", "3"])
    assert rc == 2
    assert math.isfinite(granular.sphere_area(2))

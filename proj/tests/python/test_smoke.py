"""Smoke tests for the _remdyn extension module."""
import math

import pytest

import _remdyn as rd


def test_scales_identity():
    beta = rd.beta_c(0.5) / 0.6
    s = rd.solve_scales(16, beta, eps=0.5)
    assert s["a_n"] == 256.0
    # Defining identity a_n * (1 - Phi(Bbar_n)) = 1.
    tail = 0.5 * math.erfc(s["Bbar_n"] / math.sqrt(2.0))
    assert abs(s["a_n"] * tail - 1.0) < 1e-9
    assert s["alpha_eps"] == pytest.approx(0.6, abs=1e-12)


def test_asl_and_critical_closed_forms():
    assert rd.asl_cdf(0.5, 0.5) == pytest.approx(0.5, abs=1e-12)
    assert rd.asl_cdf(0.5, 0.25) == pytest.approx(1.0 / 3.0, abs=1e-10)
    assert rd.levy_tail(0.5, 1.0) == pytest.approx(0.5 * math.sqrt(math.pi), abs=1e-12)
    beta1 = math.sqrt(2.0 * math.log(2.0))
    assert rd.critical_prediction(0.0, beta1, 1.0, 1.0) == pytest.approx(
        math.sqrt(math.log(2.0) / math.pi), abs=1e-12
    )


def test_validation_maps_to_value_error():
    with pytest.raises(ValueError):
        rd.asl_cdf(1.5, 0.5)
    with pytest.raises(ValueError):
        rd.solve_scales(16, 1.0)  # neither eps nor eps_bar


def test_estimators_deterministic():
    kwargs = dict(n=10, beta=rd.beta_c(0.5) / 0.6, t=1.0, s=1.0, eps=0.5,
                  paths=20, disorders=5, seed=4)
    a = rd.estimate_nojump(**kwargs)
    b = rd.estimate_nojump(**kwargs)
    assert a["mean"] == b["mean"]
    assert 0.0 <= a["mean"] <= 1.0
    assert a["stderr_path"] >= 0.0
    ov = rd.estimate_overlap(rho=0.5, **kwargs)
    assert ov["kind"] == "overlap"
    assert ov["mean"] >= a["mean"]  # event inclusion


def test_oracles():
    assert rd.spectral_return(6, 2) == pytest.approx(1.0 / 6.0, abs=1e-13)
    assert rd.mixing_tv(8) <= 2.0 ** -8
    bc = rd.brute_corr(n=8, eps=0.5, beta=rd.beta_c(0.5) / 0.7, t=1.0, s=1.0,
                       paths=500, seed=3)
    assert 0.0 <= bc["mean"] <= 1.0
    assert bc["paths"] == 500


def test_cascade_objects():
    tail = rd.cascade_tail(0.5, 0.5, depth=50000, seed=11)
    assert tail["value"] > 0.0
    assert tail["remainder_bound"] >= 0.0
    sta = rd.stationary_corr(0.5, 0.0, depth=20000, seed=11)
    assert sta["value"] == 1.0


def test_run_config(tmp_path):
    cfg = tmp_path / "tiny.toml"
    cfg.write_text(
        """
[model]
n = 10
eps = 0.5
alpha_target = 0.6

[grid]
t = [1.0]
s = [1.0]

[ensemble]
paths = 4
disorders = 3
seed = 2
"""
    )
    csv = rd.run_config(str(cfg))
    lines = csv.strip().splitlines()
    assert lines[0].startswith("kind,n,eps,beta,theta,t,s,rho,mean")
    assert len(lines) == 2
    assert lines[1].startswith("nojump,10,0.5,")

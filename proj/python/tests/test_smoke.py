import cmath
import math

import pytest

import qpcd

CONFIG = """
[sweep]
axis = "field"
lo = 0.0
hi = 52.0
n_points = 641
"""


def test_pair_unitarity():
    p = qpcd.make_pair(0.7, 1.3)
    assert abs(abs(p.t) ** 2 + abs(p.r) ** 2 - 1) < 1e-14
    assert abs((p.t * p.r.conjugate()).real) < 1e-14
    with pytest.raises(qpcd.DomainError):
        qpcd.make_pair(2.0, 0.0)


def test_overlap_factorizes():
    left = qpcd.pair_from_transmission(0.2, 0.1)
    right = qpcd.pair_from_transmission(0.25, 0.3)
    single = qpcd.sp_overlap(right, left)
    assert cmath.isclose(qpcd.enumerate_coherence(6, left, right), single**6, abs_tol=1e-12)


def test_probe_count_and_dephasing():
    assert qpcd.probe_count(100.0, 0.5) == pytest.approx(63.66, abs=0.01)
    r = qpcd.n_probe_visibility(0.2, 0.05, qpcd.probe_count(100.0, 0.5))
    assert r["nu_d_linear"] == pytest.approx(0.875660200709457, rel=1e-12)
    assert r["nu_d_exact"] == pytest.approx(0.891835391415327, rel=1e-12)
    assert qpcd.shot_noise_form(0.2, 0.05, 63.661977236758134) == pytest.approx(r["nu_d_linear"])


def test_binomial_moments():
    mean, sigma, closed_mean, closed_sigma = qpcd.binomial_check(0.3, 12)
    assert mean == pytest.approx(closed_mean, rel=1e-12)
    assert sigma == pytest.approx(closed_sigma, rel=1e-12)


def test_field_sweep_roundtrip():
    doc = qpcd.sweep(CONFIG, ["bias.v_d_uV=10"])
    results = doc["meta"]["results"]
    assert results["fitted_period_mT"] == pytest.approx(2.6, abs=0.005)
    assert results["fit"]["visibility"] == pytest.approx(results["expected_visibility"], abs=1e-9)
    fit = qpcd.extract_visibility(doc["axis"]["values"], doc["columns"]["I_C_natural"], 2.6)
    assert fit["visibility"] == pytest.approx(results["expected_visibility"], abs=1e-9)
    csv = qpcd.run_sweep(CONFIG, [], "csv")
    assert csv.splitlines()[1] == "B_mT,I_C_A,I_C_natural"


def test_config_error():
    with pytest.raises(qpcd.ConfigError):
        qpcd.run_sweep(CONFIG, ["dot.gamma_ueV=-1"])
    assert math.isfinite(qpcd.dwell_time(0.5))

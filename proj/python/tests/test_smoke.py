import math

import numpy as np
import pytest

import sasaki


def test_heisenberg_geodesic_stays_unit_speed():
    g = sasaki.geodesic("heisenberg", [0, 0, 0, 0], [1, 0, 0, 0], 1.0, 2 * math.pi)
    assert g["points"].shape[1] == 4
    # the xy-shadow is a closed circle but t keeps growing
    assert not g["circle"]
    assert np.allclose(g["points"][0], 0)


def test_sphere_great_circle_closes():
    g = sasaki.geodesic("sphere3", [1, 0, 0, 0], [0, 0, 1, 0], 0.0, 2 * math.pi + 0.2)
    assert g["circle"]
    assert g["closure_length"] == pytest.approx(2 * math.pi, abs=1e-6)


def test_cut_constant_mu_zero():
    assert sasaki.cut_constant(4.0, 0.0, 1) == pytest.approx(math.pi / 2, abs=1e-12)


def test_vertical_jacobi_sine():
    s = np.linspace(0, 3, 7)
    v = sasaki.vertical_jacobi(4.0, 0.0, 2.0, 0.0, s)
    assert np.allclose(v, np.sin(2 * s), atol=1e-12)


def test_torus_unstable():
    r = sasaki.stability("sphere3", 0.0, 0.0, 2 * math.pi + 0.2)
    assert r["verdict"] == "unstable_certified"
    assert r["Q_limit"] == pytest.approx(-2 * math.pi, abs=1e-8)


def test_rp3_circle_inconclusive():
    s = sasaki.surface("projective3", 0.0, 0.0, math.pi + 0.2)
    assert s["closed"] and s["circle"]
    assert s["ell"] == pytest.approx(math.pi, abs=1e-6)
    assert sasaki.stability("projective3", 0.0, 0.0, math.pi + 0.2)["verdict"] == "criterion_inconclusive"


def test_pansu_area_and_volume():
    a = sasaki.pansu_area(1.0, 128, 64)
    assert a["closed"] == pytest.approx(math.pi**2 / 2**1.5)
    assert a["rel_gap"] < 5e-3
    assert sasaki.pansu_volume_ode(1.0) == pytest.approx(sasaki.pansu_volume_closed(1.0), rel=1e-10)
    v = sasaki.pansu_volume(1.0, samples=100000, seed=3)
    assert not v["flagged"]


def test_compare_small_lambda_torus_wins():
    rows, wins = sasaki.compare_rp3([0.1, 1.0])
    assert rows[0]["torus_wins"]
    assert rows[0]["rho_matched"] == pytest.approx(sasaki.match_rho(rows[0]["V_ode"]))
    assert math.isnan(rows[0]["V_mc"])

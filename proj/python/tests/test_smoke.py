import cmath
import math

import pytest

import nnls_step as ns


def test_default_config_has_core_keys():
    cfg = ns.default_config()
    assert cfg["A"] == "1"
    assert "sim.dx" in cfg


def test_scatter_matches_closed_form():
    ks = [-3.0, -0.7, 0.4, 2.5]
    d = ns.scatter(ks, A=1, R=2)
    for k, a1, a2 in zip(ks, d["a1"], d["a2"]):
        assert abs(a1 - (1 - cmath.exp(4j * k * 2) / (4 * k * k))) < 1e-12
        assert abs(a2 - 1) < 1e-12


def test_zero_count_follows_length():
    for R, n in [(0.5, 1), (2.0, 1), (4.0, 2), (7.0, 3)]:
        z = ns.zeros(A=1, R=R)
        assert z["n"] == n
        assert len(z["omegas"]) == n - 1
        assert all(p.real < 0 < p.imag for p in z["p"])


def test_bifurcation_is_refused():
    with pytest.raises(ns.NnlsError) as info:
        ns.zeros(A=1, R=math.pi)
    assert info.value.exit_code == 4


def test_unknown_key_is_a_config_error():
    with pytest.raises(ns.NnlsError) as info:
        ns.zeros(bogus=1)
    assert info.value.kind == "config"


def test_predict_far_right_is_the_background():
    rows = ns.predict([-2.0, 2.0], 40.0, A=1, R=2)
    assert rows[0]["family"] == "decay-far-left"
    assert rows[1]["family"] == "plateau-right"
    assert abs(abs(rows[1]["leading"]) - 1.0) < 0.1


def test_simulate_small_domain():
    snaps = ns.simulate([0.5, 1.0], A=1, R=2, sim__L=30, sim__dx=0.1, sim__sponge_width=8)
    assert [s["t"] for s in snaps] == [0.5, 1.0]
    s = snaps[-1]
    assert len(s["x"]) == len(s["q"])
    assert abs(s["q"][0]) < 1e-6
    assert abs(s["q"][-1] - 1.0) < 1e-6

import cmath
import math

import numpy as np
import pytest

import lspec


def test_curvature_flat_and_sphere():
    flat = lspec.curvature("minkowski", point=np.full(4, 0.3))
    assert abs(flat["scalar"]) < 1e-12
    s = lspec.curvature("ultrastatic-sphere")
    assert s["scalar"] == pytest.approx(-6.0, rel=1e-12)
    assert s["ricci"].shape == (4, 4)
    fd = lspec.curvature_fd("ultrastatic-sphere")
    assert max(abs(a - b) for a, b in zip(s["riemann"], fd["riemann"])) < 1e-5


def test_euclid_and_wick():
    # residue of the Euclidean integral at alpha = 1, z = -1: pi^2 z
    r = 1e-4
    circ = sum(
        lspec.euclid_integral(1 + r * cmath.exp(2j * math.pi * (j + 0.5) / 64), -1.0) * r
        * cmath.exp(2j * math.pi * (j + 0.5) / 64) / 64
        for j in range(64)
    )
    assert abs(circ - (-math.pi ** 2)) < 1e-8 * math.pi ** 2
    a, z = 2.5, 2j
    wick = 1j * (2 * math.pi) ** -4 * math.gamma(a + 1) * lspec.euclid_integral(a + 1, z)
    assert abs(lspec.fa_diag(a, z) - wick) < 1e-12 * abs(wick)


def test_errors_map_to_python():
    with pytest.raises(lspec.PoleError):
        lspec.fa_diag(1.0, 2j)
    with pytest.raises(lspec.LspecError):
        lspec.fa_diag(1.0, 2j)
    with pytest.raises(lspec.ConfigError):
        lspec.curvature("no-such-metric")
    with pytest.raises(lspec.ConditioningError):
        lspec.fit_expansion([10.0] * 6, [1 + 0j] * 6)


def test_power_identity():
    c = lspec.power_identity_check(1.5, 0, 1.0, 2.0)
    assert abs(c["closed_form"] - (2 + 1j) ** -1.5) < 1e-14
    assert c["rel_err"] < 1e-8


def test_residues_match_limit():
    u = [1.0, 1.0]
    for p, m in ((2, 0), (1, 1)):
        ci = lspec.cpower_residue(p, u, eps=1e-7)
        th = lspec.limit_residue(m, u)
        assert abs(ci - th) < 1e-5 * abs(th)
    assert abs(lspec.cpower_residue(0.0, u)) < 1e-10


def test_mellin_matches_prediction_flat():
    c = lspec.predicted_coefficients()
    L = 20.0
    pred = c[0] * L ** 4 + c[1] * L ** 2 + c[2]
    assert abs(lspec.mellin_diag(L) - pred) < 1e-8 * abs(pred)


def test_torus_kernel_and_fit():
    Ls = [10.0, 15.0, 20.0, 25.0, 30.0, 35.0]
    k = lspec.ultrastatic_kernel("torus:3:6.283185307179586", Ls)
    fit = lspec.fit_expansion(Ls, k["values"])
    c = lspec.predicted_coefficients()
    assert abs(fit["coef"][0] - c[0]) < 1e-6 * abs(c[0])


def test_nontrapping_minkowski():
    r = lspec.nontrapping_certificate(samples=10)
    assert r["pass"] and r["classified"] == 10 and r["reversal_swaps"]


def test_threads_roundtrip():
    lspec.set_threads(2)
    assert lspec.threads() == 2
    lspec.set_threads(0)

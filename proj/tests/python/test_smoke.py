"""Smoke tests of the Python module."""
import math

import numpy as np
import pytest

sgmeta = pytest.importorskip("sgmeta")


def test_field_roundtrip():
    coeffs = np.linspace(-1.0, 1.0, 9)
    u = sgmeta.FourierField(coeffs)
    assert u.N == 4
    np.testing.assert_array_equal(u.coeffs, coeffs)
    assert sgmeta.l2_norm(sgmeta.FourierField.constant(4, 1.0)) == pytest.approx(math.sqrt(2 * math.pi))


def test_sub_regime_prefactor_closed_form():
    p = sgmeta.ModelParams(gamma=0.1, beta=5.0, epsilon=0.05, N=256)
    pre = sgmeta.prefactor_sub(p)
    s = math.sqrt(0.5)
    assert pre.closed_form.prefactor == pytest.approx(math.sin(math.pi * s) / (2 * 0.5 * math.sinh(math.pi * s)), rel=1e-13)
    assert pre.closed_form.barrier == pytest.approx(4 * math.pi * 0.1 / 5)
    assert pre.finite_n.prefactor == pytest.approx(pre.closed_form.prefactor, rel=1e-2)


def test_constant_saddle_spectrum():
    p = sgmeta.ModelParams(gamma=0.25, beta=2.0, N=16)
    spec = sgmeta.spectrum_at(sgmeta.FourierField.constant(16, math.pi / 2), p)
    exact = sorted(n * n - 0.5 for n in range(-16, 17))
    np.testing.assert_allclose(spec.eigenvalues, exact, atol=1e-12)
    assert spec.neg_count == 1


def test_elliptic_saddle_signature():
    s = sgmeta.elliptic_saddle(sgmeta.ModelParams(gamma=1.0, beta=2.0, N=64))
    assert s.kind == sgmeta.StationaryKind.elliptic_saddle
    assert (s.neg_count, s.zero_count) == (1, 1)
    assert s.residual < 1e-10


def test_regime_error_at_bifurcation():
    with pytest.raises(ValueError, match="bifurcation"):
        sgmeta.prefactor_sub(sgmeta.ModelParams(gamma=1.0, beta=1.0))


def test_monte_carlo_is_seeded():
    p = sgmeta.ModelParams(gamma=0.1, beta=5.0, epsilon=0.12, N=16)
    c = sgmeta.SimConfig()
    c.seed = 11
    a = sgmeta.mc_transition_time(p, c, 6)
    b = sgmeta.mc_transition_time(p, c, 6)
    assert [r.hit_time for r in a.records] == [r.hit_time for r in b.records]
    assert a.completed + a.censored == 6


def test_string_method_height():
    p = sgmeta.ModelParams(gamma=0.1, beta=5.0, N=16)
    r = sgmeta.communication_height(sgmeta.FourierField(16), sgmeta.FourierField.constant(16, 2 * math.pi / 5), p)
    assert r.height == pytest.approx(4 * math.pi * 0.1 / 5, abs=1e-6)


def test_run_cli(tmp_path):
    code, out, err = sgmeta.run_cli(["phase", "--gamma-beta", "2", "--out", str(tmp_path)])
    assert code == 0, err
    assert (tmp_path / "phase.csv").exists()
    assert (tmp_path / "manifest.json").exists()
    code, _, err = sgmeta.run_cli(["prefactor", "--gamma", "1", "--beta", "1", "--out", str(tmp_path)])
    assert code != 0 and "bifurcation" in err

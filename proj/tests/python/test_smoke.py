import json
import math

import numpy as np
import pytest

import disperse_uc as duc


def test_grid_and_roundtrip():
    g = duc.make_grid(20.0, 1024)
    assert g.n == 1024
    assert g.dx == pytest.approx(40.0 / 1024)
    x = duc.points(g)
    f = np.exp(-x * x / 2).astype(complex)
    F = duc.dft_forward(g, f)
    back = duc.dft_inverse(g, F)
    assert np.max(np.abs(back - f)) < 1e-12

    # Gaussian transform against the closed form
    freqs = np.array(g.freqs)
    sel = np.abs(freqs) <= 5
    expected = math.sqrt(2 * math.pi) * np.exp(-freqs[sel] ** 2 / 2)
    assert np.max(np.abs(F[sel] - expected)) < 1e-10


def test_kernel_gaussian():
    g = duc.make_grid(20.0, 1024)
    K = duc.kernel(1, 1.0 + 0.0j, g)
    i0 = 512  # x = 0
    assert K[i0].real == pytest.approx((4 * math.pi) ** -0.5, abs=1e-10)


def test_fit_decay_exponent():
    g = duc.make_grid(40.0, 16384)
    K = duc.kernel(1, 1.0 + 0.0j, g)
    fit = duc.fit_decay(g, K, 3.0, 8.0)
    assert fit.exponent == pytest.approx(2.0, rel=0.02)


def test_free_propagate_unitary():
    g = duc.make_grid(20.0, 2048)
    x = duc.points(g)
    u0 = np.exp(-x * x).astype(complex)
    u1 = duc.free_propagate(g, u0, 0.5, 1)
    n0 = duc.lp_norm(g, u0, 2.0)
    n1 = duc.lp_norm(g, u1, 2.0)
    assert n1 == pytest.approx(n0, rel=1e-12)


def test_weighted_norm_and_theta():
    g = duc.make_grid(30.0, 2048)
    x = duc.points(g)
    u = np.exp(-x * x).astype(complex)
    val = duc.weighted_norm(g, u, 1, 0.5)
    assert val == pytest.approx(math.pi ** 0.25, rel=1e-8)
    assert duc.theta(1.0, 0.0, 1.0, 1, 1.0) == pytest.approx(0.5)
    assert duc.theta(1.0, 1.0, 1.0, 1, 1.0) == pytest.approx(1.0 / 3.0)


def test_pq_split_and_roots():
    P, Q, p, pp = duc.pq_split(2, 0.0)
    assert P == pytest.approx([1.0, 0.0, -6.0, 0.0, 1.0])
    assert Q == pytest.approx([0.0, -4.0, 0.0, 4.0])
    assert p == pytest.approx(10.0 / 9.0)
    assert pp == pytest.approx(10.0)
    roots, a_sorted = duc.qb_roots(2, 0.0)
    assert a_sorted == pytest.approx([-1.0, 0.0, 1.0], abs=1e-10)


def test_run_experiment_json():
    cfg = {
        "experiment": "vdc",
        "m": 1,
        "x": 0.3,
        "s_list": [1.0, 3.16, 10.0, 31.6, 100.0],
    }
    report = json.loads(duc.run_experiment(json.dumps(cfg)))
    assert report["pass"] is True
    assert report["results"]["slope"] == pytest.approx(-0.5, rel=0.01)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        duc.make_grid(-1.0, 64)

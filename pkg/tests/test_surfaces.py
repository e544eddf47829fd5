import math

import numpy as np
import pytest

from minlab import surfaces as sf
from minlab.errors import ArgumentError, RangeError

ALL_SPECS = [
    sf.ImmersionSpec("plane"),
    sf.ImmersionSpec("enneper", 1),
    sf.ImmersionSpec("enneper", 2),
    sf.ImmersionSpec("enneper", 3),
    sf.ImmersionSpec("helicoid"),
    sf.ImmersionSpec("catenoid"),
]


def test_spec_validation():
    with pytest.raises(ArgumentError):
        sf.ImmersionSpec("torus")
    with pytest.raises(ArgumentError):
        sf.ImmersionSpec("enneper", 0)
    with pytest.raises(ArgumentError):
        sf.ImmersionSpec("plane", 2)
    with pytest.raises(ArgumentError):
        sf.ImmersionSpec("helicoid", 3)
    assert sf.ImmersionSpec("enneper", 4).order == 4


def test_enneper_closed_form_points():
    spec = sf.ImmersionSpec("enneper", 1)
    jet = sf.evaluate(spec, (1.0, 0.0))
    assert np.allclose(jet.position, [2.0 / 3.0, 0.0, 1.0], atol=1e-15)
    jet0 = sf.evaluate(spec, (0.0, 0.0))
    assert np.allclose(jet0.position, [0.0, 0.0, 0.0])
    assert jet0.lam == pytest.approx(1.0, abs=1e-15)
    # lambda = (1 + u^2 + v^2)^2 for k = 1
    jet2 = sf.evaluate(spec, (0.5, -1.5))
    assert jet2.lam == pytest.approx((1 + 0.25 + 2.25) ** 2, rel=1e-14)


def test_enneper_matches_uv_formula():
    # (u - u^3/3 + u v^2, -v + v^3/3 - v u^2, u^2 - v^2)
    spec = sf.ImmersionSpec("enneper", 1)
    rng = np.random.default_rng(7)
    for _ in range(50):
        u, v = rng.uniform(-3, 3, 2)
        jet = sf.evaluate(spec, (u, v))
        expect = [u - u**3 / 3 + u * v * v, -v + v**3 / 3 - v * u * u, u * u - v * v]
        assert np.allclose(jet.position, expect, rtol=1e-13, atol=1e-13)


def test_helicoid_sinh_form_is_conformal_at_origin():
    spec = sf.ImmersionSpec("helicoid")
    jet = sf.evaluate(spec, (0.0, 0.0))
    assert np.allclose(jet.position, [0.0, 0.0, 0.0])
    assert jet.lam == pytest.approx(1.0)
    assert sf.conformal_defect(spec, (0.7, 2.0)) <= 1e-12


def test_plane_defects_are_exact_zero():
    spec = sf.ImmersionSpec("plane")
    for p in [(0.0, 0.0), (3.0, -2.0), (100.0, 5.0)]:
        assert sf.conformal_defect(spec, p) == 0.0
        assert sf.minimality_defect(spec, p) == 0.0


def test_conformal_defect_examples():
    assert sf.conformal_defect(sf.ImmersionSpec("enneper", 1), (2.0, -3.0)) <= 1e-12
    assert sf.conformal_defect(sf.ImmersionSpec("catenoid"), (1.0, math.pi / 2)) <= 1e-12


def test_minimality_defect_examples():
    spec2 = sf.ImmersionSpec("enneper", 2)
    lam = sf.evaluate(spec2, (0.7, 0.3)).lam
    assert sf.minimality_defect(spec2, (0.7, 0.3)) <= 1e-12 * (1 + lam)
    spec_h = sf.ImmersionSpec("helicoid")
    lam = sf.evaluate(spec_h, (1.0, 1.0)).lam
    assert sf.minimality_defect(spec_h, (1.0, 1.0)) <= 1e-12 * (1 + lam)


def test_defect_invariants_random_points():
    rng = np.random.default_rng(42)
    boxes = {"plane": 50.0, "enneper": 4.0, "helicoid": 5.0, "catenoid": 4.0}
    for spec in ALL_SPECS:
        box = boxes[spec.kind]
        n = 1700  # ~1e4 points across the six specs
        u = rng.uniform(-box, box, n)
        v = rng.uniform(-box, box, n)
        pos, du, dv, lam = sf.evaluate_batch(spec, u, v)
        e = (du * du).sum(axis=1)
        g = (dv * dv).sum(axis=1)
        f = (du * dv).sum(axis=1)
        defect = np.maximum(np.abs(e - g), np.abs(f)) / np.maximum(lam, 1e-300)
        assert defect.max() <= 1e-10
        assert np.allclose(e, lam, rtol=1e-10)
        assert np.allclose(g, lam, rtol=1e-10)
        fuu, _, fvv = sf.second_derivatives_batch(spec, u, v)
        mdef = np.linalg.norm(fuu + fvv, axis=1)
        assert (mdef <= 1e-10 * (1.0 + lam)).all()


def test_derivatives_match_finite_differences():
    rng = np.random.default_rng(3)
    step = 1e-5
    for spec in ALL_SPECS:
        n = 170  # ~1e3 points across the six specs
        u = rng.uniform(-2, 2, n)
        v = rng.uniform(-2, 2, n)
        _, du, dv, _ = sf.evaluate_batch(spec, u, v)
        pu1, _, _, _ = sf.evaluate_batch(spec, u + step, v)
        pu0, _, _, _ = sf.evaluate_batch(spec, u - step, v)
        pv1, _, _, _ = sf.evaluate_batch(spec, u, v + step)
        pv0, _, _, _ = sf.evaluate_batch(spec, u, v - step)
        fd_u = (pu1 - pu0) / (2 * step)
        fd_v = (pv1 - pv0) / (2 * step)
        scale = np.abs(du).max() + 1.0
        assert np.abs(fd_u - du).max() / scale <= 1e-6
        assert np.abs(fd_v - dv).max() / scale <= 1e-6


def test_non_finite_param_rejected():
    spec = sf.ImmersionSpec("plane")
    with pytest.raises(ArgumentError):
        sf.evaluate(spec, (math.nan, 0.0))
    with pytest.raises(ArgumentError):
        sf.evaluate(spec, (0.0, math.inf))


def test_param_radius_plane():
    rho = sf.param_radius_for_ball(sf.ImmersionSpec("plane"), 5.0)
    assert rho == pytest.approx(5.5, rel=1e-6)


def test_param_radius_enneper():
    # dominant term |z|^3 / 3 of the closed form
    rho = sf.param_radius_for_ball(sf.ImmersionSpec("enneper", 1), 100.0)
    assert rho == pytest.approx((3 * 110.0) ** (1.0 / 3.0), rel=0.10)


def test_param_radius_catenoid():
    rho = sf.param_radius_for_ball(sf.ImmersionSpec("catenoid"), 10.0)
    assert rho == pytest.approx(math.acosh(11.0), rel=0.10)


def test_param_radius_covers_ball():
    # the circle |z| = rho maps strictly outside the 1.1 R ball around F(0)
    for spec in ALL_SPECS:
        rho = sf.param_radius_for_ball(spec, 7.0)
        theta = np.linspace(0, 2 * math.pi, 512, endpoint=False)
        if spec.kind == "catenoid":
            u, v = np.full_like(theta, rho), theta
        else:
            u, v = rho * np.cos(theta), rho * np.sin(theta)
        pos, _, _, _ = sf.evaluate_batch(spec, u, v)
        dist = np.linalg.norm(pos - spec.base_point(), axis=1)
        assert dist.min() > 1.1 * 7.0


def test_param_radius_overflow():
    # 1.1 * R overflows, so no finite parameter radius can cover the ball
    with pytest.raises(RangeError):
        sf.param_radius_for_ball(sf.ImmersionSpec("plane"), 1.7e308)

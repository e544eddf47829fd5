"""Independent continuum oracles used to freeze expected test values.

Everything here works on the closed-form immersions only: no meshes, no
shared code paths with the operations under test.  Ball regions are
resolved by per-angle bisection of |F| and integrated with dense
midpoint rules in polar parameter coordinates.
"""

import math

import numpy as np

from minlab import surfaces as sf


def _ambient_norm(spec, t, theta):
    if spec.kind == "catenoid":
        u = np.broadcast_to(t, np.shape(theta)).astype(float)
        v = np.asarray(theta, dtype=float)
    else:
        u = t * np.cos(theta)
        v = t * np.sin(theta)
    pos, _, _, _ = sf.evaluate_batch(spec, u, v)
    return np.linalg.norm(pos, axis=-1)


def ball_profile(spec, r, thetas, t_hi=None):
    """Parameter radius t(theta) where |F| = r along each ray."""
    if t_hi is None:
        t_hi = sf.param_radius_for_ball(spec, r)
    lo = np.zeros(len(thetas))
    hi = np.full(len(thetas), t_hi)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        inside = _ambient_norm(spec, mid, thetas) < r
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return 0.5 * (lo + hi)


def ball_area(spec, r, n_theta=1024, n_t=2048):
    """Area of {|F| < r} by dense midpoint quadrature of lambda.

    For the surfaces used here the preimage of the ball is star-shaped
    around the parameter origin, so the region is exactly
    {t < t(theta)}.
    """
    if spec.kind == "catenoid":
        a = ball_profile(spec, r, np.zeros(1))[0]
        ts = a * (np.arange(n_t) + 0.5) / n_t
        _, _, _, lam = sf.evaluate_batch(spec, ts, np.zeros(n_t))
        return 2.0 * (2.0 * math.pi) * float(lam.sum()) * a / n_t
    thetas = 2.0 * math.pi * (np.arange(n_theta) + 0.5) / n_theta
    t_edge = ball_profile(spec, r, thetas)
    total = 0.0
    for theta, te in zip(thetas, t_edge):
        ts = te * (np.arange(n_t) + 0.5) / n_t
        u = ts * math.cos(theta)
        v = ts * math.sin(theta)
        _, _, _, lam = sf.evaluate_batch(spec, u, v)
        total += float((lam * ts).sum()) * te / n_t
    return total * 2.0 * math.pi / n_theta


def coordinate_range_in_ball(spec, r, axis, n_theta=2048, n_t=1024):
    """(min, max) of an ambient coordinate over {|F| < r}."""
    thetas = 2.0 * math.pi * (np.arange(n_theta) + 0.5) / n_theta
    t_edge = ball_profile(spec, r, thetas)
    vmin, vmax = math.inf, -math.inf
    for theta, te in zip(thetas, t_edge):
        ts = te * np.arange(1, n_t + 1) / n_t
        if spec.kind == "catenoid":
            u, v = ts, np.full(n_t, theta)
        else:
            u, v = ts * math.cos(theta), ts * math.sin(theta)
        pos, _, _, _ = sf.evaluate_batch(spec, u, v)
        vmin = min(vmin, float(pos[:, axis].min()), 0.0 if spec.kind != "catenoid" else vmin)
        vmax = max(vmax, float(pos[:, axis].max()))
    base = spec.base_point()[axis]
    return min(vmin, base), max(vmax, base)


def parameter_range_in_ball(spec, r, which="u", n_theta=2048):
    """(min, max) of a parameter coordinate over {|F| < r}."""
    thetas = 2.0 * math.pi * (np.arange(n_theta) + 0.5) / n_theta
    t_edge = ball_profile(spec, r, thetas)
    if which == "u":
        vals = t_edge * np.cos(thetas)
    else:
        vals = t_edge * np.sin(thetas)
    return float(min(vals.min(), 0.0)), float(max(vals.max(), 0.0))


def power_fit(xs, ys):
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])

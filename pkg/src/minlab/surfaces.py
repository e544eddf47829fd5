"""Closed-form conformal minimal immersions of a parameter domain into R^3.

Four families are supported, each parametrized conformally so that the
induced metric is lambda * (du^2 + dv^2):

* ``plane``     F(u, v) = (u, v, 0)
* ``enneper``   order-k family built from holomorphic data g(z) = z^k:
                F(z) = (Re(z - z^(2k+1)/(2k+1)),
                        -Im(z + z^(2k+1)/(2k+1)),
                        Re(2 z^(k+1)/(k+1)))
                with lambda = (1 + |z|^(2k))^2
* ``helicoid``  F(u, v) = (sinh u cos v, sinh u sin v, v), lambda = cosh^2 u.
                (The frequently quoted cosh-form chart is *not* conformal:
                |F_u|^2 = sinh^2 u while |F_v|^2 = cosh^2 u + 1.)
* ``catenoid``  F(u, v) = (cosh u cos v, cosh u sin v, u), v periodic in
                [0, 2pi), lambda = cosh^2 u.  Included as the non-disk
                counterexample; its parameter domain is a strip, not a disk.

All first and second derivatives are closed-form; nothing is finite
differenced here.  Every function accepts scalars and is backed by a
vectorized batch evaluator used by the mesher.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, RangeError

KINDS = ("plane", "enneper", "helicoid", "catenoid")

BALL_COVER_FACTOR = 1.1
_ANGLE_SAMPLES = 256


@dataclass(frozen=True)
class ImmersionSpec:
    """A member of one of the four immersion families.

    ``order`` is meaningful for the Enneper family only (k >= 1); the other
    kinds reject an explicit order.
    """

    kind: str
    order: int = 1
    ambient_dim: int = field(default=3, init=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ArgumentError(f"unknown surface kind {self.kind!r}")
        if not isinstance(self.order, int):
            raise ArgumentError("order must be an integer")
        if self.kind == "enneper":
            if self.order < 1:
                raise ArgumentError("enneper order must be >= 1")
        elif self.order != 1:
            raise ArgumentError(f"{self.kind} does not take an order parameter")

    @property
    def is_disk(self) -> bool:
        """True when the parameter domain is a disk (catenoid: a strip)."""
        return self.kind != "catenoid"

    def base_point(self) -> np.ndarray:
        """Ambient position of the parameter origin."""
        return evaluate_batch(self, np.array([0.0]), np.array([0.0]))[0][0]


@dataclass(frozen=True)
class JetSample:
    """Position, first derivatives and conformal factor at one point."""

    param: tuple
    position: np.ndarray
    d_u: np.ndarray
    d_v: np.ndarray
    lam: float


def _check_param(u, v):
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise ArgumentError("parameter values must be finite")


def evaluate_batch(spec: ImmersionSpec, u, v):
    """Vectorized jet: returns (position (n,3), d_u (n,3), d_v (n,3), lam (n,))."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _check_param(u, v)
    n = np.broadcast(u, v).shape
    pos = np.empty(n + (3,))
    du = np.empty_like(pos)
    dv = np.empty_like(pos)

    if spec.kind == "plane":
        pos[..., 0], pos[..., 1], pos[..., 2] = u, v, 0.0
        du[..., 0], du[..., 1], du[..., 2] = 1.0, 0.0, 0.0
        dv[..., 0], dv[..., 1], dv[..., 2] = 0.0, 1.0, 0.0
        lam = np.ones(n)
    elif spec.kind == "enneper":
        k = spec.order
        z = u + 1j * v
        zk = z**k
        z2k1 = zk * zk * z
        phi1 = z - z2k1 / (2 * k + 1)
        phi2 = z + z2k1 / (2 * k + 1)
        phi3 = 2.0 * zk * z / (k + 1)
        pos[..., 0], pos[..., 1], pos[..., 2] = phi1.real, -phi2.imag, phi3.real
        d1 = 1.0 - zk * zk
        d2 = 1.0 + zk * zk
        d3 = 2.0 * zk
        du[..., 0], du[..., 1], du[..., 2] = d1.real, -d2.imag, d3.real
        dv[..., 0], dv[..., 1], dv[..., 2] = -d1.imag, -d2.real, -d3.imag
        r2k = np.abs(zk) ** 2
        lam = (1.0 + r2k) ** 2
    elif spec.kind == "helicoid":
        cu, su = np.cosh(u), np.sinh(u)
        cv, sv = np.cos(v), np.sin(v)
        pos[..., 0], pos[..., 1], pos[..., 2] = su * cv, su * sv, v
        du[..., 0], du[..., 1], du[..., 2] = cu * cv, cu * sv, 0.0
        dv[..., 0], dv[..., 1], dv[..., 2] = -su * sv, su * cv, 1.0
        lam = cu * cu
    else:  # catenoid
        cu, su = np.cosh(u), np.sinh(u)
        cv, sv = np.cos(v), np.sin(v)
        pos[..., 0], pos[..., 1], pos[..., 2] = cu * cv, cu * sv, u
        du[..., 0], du[..., 1], du[..., 2] = su * cv, su * sv, 1.0
        dv[..., 0], dv[..., 1], dv[..., 2] = -cu * sv, cu * cv, 0.0
        lam = cu * cu
    return pos, du, dv, lam


def second_derivatives_batch(spec: ImmersionSpec, u, v):
    """Closed-form (F_uu, F_uv, F_vv), each of shape (n, 3)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _check_param(u, v)
    n = np.broadcast(u, v).shape
    fuu = np.zeros(n + (3,))
    fuv = np.zeros(n + (3,))
    fvv = np.zeros(n + (3,))

    if spec.kind == "plane":
        pass
    elif spec.kind == "enneper":
        k = spec.order
        z = u + 1j * v
        # second derivatives of the holomorphic pieces
        s1 = -2 * k * z ** (2 * k - 1)
        s2 = 2 * k * z ** (2 * k - 1)
        s3 = 2 * k * z ** (k - 1)
        fuu[..., 0], fuu[..., 1], fuu[..., 2] = s1.real, -s2.imag, s3.real
        fuv[..., 0], fuv[..., 1], fuv[..., 2] = -s1.imag, -s2.real, -s3.imag
        fvv[...] = -fuu
    elif spec.kind == "helicoid":
        cu, su = np.cosh(u), np.sinh(u)
        cv, sv = np.cos(v), np.sin(v)
        fuu[..., 0], fuu[..., 1] = su * cv, su * sv
        fuv[..., 0], fuv[..., 1] = -cu * sv, cu * cv
        fvv[..., 0], fvv[..., 1] = -su * cv, -su * sv
    else:  # catenoid
        cu, su = np.cosh(u), np.sinh(u)
        cv, sv = np.cos(v), np.sin(v)
        fuu[..., 0], fuu[..., 1] = cu * cv, cu * sv
        fuv[..., 0], fuv[..., 1] = -su * sv, su * cv
        fvv[..., 0], fvv[..., 1] = -cu * cv, -cu * sv
    return fuu, fuv, fvv


def evaluate(spec: ImmersionSpec, param) -> JetSample:
    """Jet of the immersion at a single parameter point."""
    u, v = float(param[0]), float(param[1])
    pos, du, dv, lam = evaluate_batch(spec, np.array([u]), np.array([v]))
    return JetSample((u, v), pos[0], du[0], dv[0], float(lam[0]))


def conformal_defect(spec: ImmersionSpec, param) -> float:
    """max(| |F_u|^2 - |F_v|^2 |, |F_u . F_v|) / max(lambda, 1e-300)."""
    jet = evaluate(spec, param)
    e = float(jet.d_u @ jet.d_u)
    g = float(jet.d_v @ jet.d_v)
    f = float(jet.d_u @ jet.d_v)
    return max(abs(e - g), abs(f)) / max(jet.lam, 1e-300)


def minimality_defect(spec: ImmersionSpec, param) -> float:
    """|F_uu + F_vv| from closed-form second derivatives."""
    u, v = float(param[0]), float(param[1])
    fuu, _, fvv = second_derivatives_batch(spec, np.array([u]), np.array([v]))
    return float(np.linalg.norm(fuu[0] + fvv[0]))


def _min_ambient_norm_on_circle(spec: ImmersionSpec, rho: float) -> float:
    """min |F - F(0)| over the parameter circle |z| = rho (catenoid: over
    the rows u = +-rho).  Distances are taken from the image of the
    parameter origin, the point every ball component is rooted at."""
    theta = np.linspace(0.0, 2.0 * math.pi, _ANGLE_SAMPLES, endpoint=False)
    if spec.kind == "catenoid":
        u = np.concatenate([np.full(_ANGLE_SAMPLES, rho), np.full(_ANGLE_SAMPLES, -rho)])
        v = np.concatenate([theta, theta])
    else:
        u = rho * np.cos(theta)
        v = rho * np.sin(theta)
    base = spec.base_point()
    with np.errstate(over="ignore", invalid="ignore"):
        pos, _, _, _ = evaluate_batch(spec, u, v)
        norms = np.linalg.norm(pos - base, axis=1)
    norms = np.where(np.isnan(norms), np.inf, norms)
    return float(norms.min())


def param_radius_for_ball(spec: ImmersionSpec, ambient_radius: float) -> float:
    """Parameter radius rho such that the circle |z| = rho maps entirely
    outside the ambient ball of radius 1.1 * ambient_radius.

    A patch of this radius is guaranteed to contain every connected
    component of B_R intersected with the surface that passes through the
    parameter origin, for every R <= ambient_radius.
    """
    if not (ambient_radius > 0.0) or not math.isfinite(ambient_radius):
        raise ArgumentError("ambient radius must be positive and finite")
    target = BALL_COVER_FACTOR * ambient_radius
    if not math.isfinite(target):
        raise RangeError("ambient radius overflows the covering computation")

    lo = 0.0
    hi = max(target * 1e-6, 1e-12)
    for _ in range(4200):
        if _min_ambient_norm_on_circle(spec, hi) > target:
            break
        lo = hi
        hi *= 2.0
        if not math.isfinite(hi):
            raise RangeError("parameter radius overflows the numeric range")
    else:
        raise RangeError("parameter radius overflows the numeric range")

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _min_ambient_norm_on_circle(spec, mid) > target:
            hi = mid
        else:
            lo = mid
    return hi

"""Quantitative measurements on harmonic fields over ball components.

Everything here reduces to a handful of primitives: oscillations over
nested extrinsic-ball components, Dirichlet energies, level-set lengths,
and least-squares exponent fits.  A ``DecayCertificate`` bundles the
three quantitative inequalities that force one-sided oscillation decay
(cutoff energy bound, sup bound on the log-transform, and the minimum
level-length), each with an explicit discretization slack of
``10 * target_h / r``.

All operations are read-only over immutable meshes and fields with
deterministic reduction order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import harmonic
from .errors import ArgumentError, DegenerateError
from .harmonic import ScalarField
from .mesh import BallComponent, SurfaceMesh, ball_component
from .rng import SplitMix64

LOG_SHIFT_EPS = 1e-12
SLACK_FACTOR = 10.0
CERTIFICATE_LEVELS = 32


def _slack(mesh: SurfaceMesh, r: float) -> float:
    return SLACK_FACTOR * mesh.target_h / r


class ComponentCache:
    """Memoized ball components around a fixed root.

    Components are field-independent; analyses that sweep many fields
    over the same radii share one cache.
    """

    def __init__(self, mesh: SurfaceMesh, root: int):
        self.mesh = mesh
        self.root = int(root)
        self._cache = {}

    def __call__(self, r: float) -> BallComponent:
        key = float(r)
        if key not in self._cache:
            self._cache[key] = ball_component(self.mesh, self.root, key)
        return self._cache[key]


# ---------------------------------------------------------------------------
# oscillation


def oscillation(field: ScalarField, component: BallComponent, root: int = None,
                two_sided: bool = False) -> float:
    """One-sided drop below the root value, or the full sup - inf."""
    root = component.root if root is None else root
    vals = field.restricted_values(component.vertices)
    if two_sided:
        return float(vals.max() - vals.min())
    if root not in component.vertices:
        raise ArgumentError("root vertex is not part of the component")
    return float(field.values[root] - vals.min())


# ---------------------------------------------------------------------------
# decay bound / threshold


@dataclass(frozen=True)
class DecayBound:
    """Area-growth constant with its oscillation decay factor.

    ``gamma_complement`` stores exp(-24 * area_constant) so the decay
    factor stays strictly below one even where 1 - e^-x rounds to 1.0.
    """

    area_constant: float
    gamma_complement: float

    @property
    def gamma(self) -> float:
        return 1.0 - self.gamma_complement

    @property
    def alpha_threshold(self) -> float:
        return -math.log1p(-self.gamma_complement) / math.log(2.0)


def liouville_threshold(area_constant: float) -> DecayBound:
    """Decay factor 1 - e^(-24 C) and the growth exponent below which a
    sub-linearly bounded harmonic function must be constant."""
    if not (area_constant > 0.0):
        raise ArgumentError("area constant must be positive")
    return DecayBound(float(area_constant), math.exp(-24.0 * area_constant))


# ---------------------------------------------------------------------------
# oscillation curves


@dataclass
class OscillationCurve:
    root: int
    radii: np.ndarray
    osc0: np.ndarray
    osc2: np.ndarray
    ratio_radii: np.ndarray     # radii r with 2r also in the schedule
    ratios: np.ndarray          # osc0(r) / osc0(2r)
    gamma: float
    exceeded: np.ndarray        # ratio above gamma + slack
    degenerate: np.ndarray      # osc0(2r) == 0 at that pairing

    @property
    def a_k(self) -> np.ndarray:
        """Dyadic aliases: osc0 at radii that form the doubling chain."""
        return self.osc0

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "radii": [float(r) for r in self.radii],
            "osc0": [float(x) for x in self.osc0],
            "osc2": [float(x) for x in self.osc2],
            "ratio_radii": [float(r) for r in self.ratio_radii],
            "ratios": [float(x) for x in self.ratios],
            "gamma": float(self.gamma),
            "exceeded": [bool(b) for b in self.exceeded],
            "degenerate": [bool(b) for b in self.degenerate],
        }

    def csv_rows(self):
        """(radius, osc0, osc2, ratio, gamma) with blank ratio where undefined."""
        pair = {float(r): float(x) for r, x in zip(self.ratio_radii, self.ratios)}
        for r, o0, o2 in zip(self.radii, self.osc0, self.osc2):
            yield (float(r), float(o0), float(o2), pair.get(float(r), ""), self.gamma)


def decay_curve(field: ScalarField, root: int, radii, bound: DecayBound,
                cache: ComponentCache = None) -> OscillationCurve:
    """Oscillations over a radii schedule with ratio checks against gamma."""
    radii = np.asarray(radii, dtype=float)
    if len(radii) < 1 or np.any(np.diff(radii) <= 0):
        raise ArgumentError("radii must be strictly increasing")
    m = field.mesh
    cache = cache or ComponentCache(m, root)
    osc0 = np.empty(len(radii))
    osc2 = np.empty(len(radii))
    for i, r in enumerate(radii):
        comp = cache(float(r))
        osc0[i] = oscillation(field, comp, root)
        osc2[i] = oscillation(field, comp, root, two_sided=True)

    ratio_radii, ratios, exceeded, degenerate = [], [], [], []
    for i, r in enumerate(radii):
        j = np.nonzero(np.isclose(radii, 2.0 * r, rtol=1e-9))[0]
        if len(j) == 0:
            continue
        j = int(j[0])
        ratio_radii.append(r)
        if osc0[j] == 0.0:
            ratios.append(0.0)
            exceeded.append(False)
            degenerate.append(True)
        else:
            q = osc0[i] / osc0[j]
            ratios.append(q)
            exceeded.append(q > bound.gamma + _slack(m, float(r)))
            degenerate.append(False)
    return OscillationCurve(
        root=int(root),
        radii=radii,
        osc0=osc0,
        osc2=osc2,
        ratio_radii=np.array(ratio_radii),
        ratios=np.array(ratios),
        gamma=bound.gamma,
        exceeded=np.array(exceeded, dtype=bool),
        degenerate=np.array(degenerate, dtype=bool),
    )


# ---------------------------------------------------------------------------
# decay certificate


@dataclass
class DecayCertificate:
    """Measured inequalities behind one-sided oscillation decay at radius r.

    All pass flags are pure functions of the stored numbers.
    """

    radius: float
    slack: float
    normalization_inf: float
    normalization_osc: float
    epsilon: float
    energy: float
    energy_bound: float
    sup_log: float              # M = sup of -log(normalized field) over the r-ball
    sup_log_bound: float        # 24 * area_constant
    level_length_min: float     # min over sampled levels of the best component
    level_length_bound: float   # r / 2
    area_constant: float

    @property
    def pass_energy(self) -> bool:
        return self.energy <= self.energy_bound * (1.0 + self.slack)

    @property
    def pass_sup(self) -> bool:
        return self.sup_log <= self.sup_log_bound + self.slack

    @property
    def pass_levels(self) -> bool:
        return self.level_length_min >= self.level_length_bound * (1.0 - self.slack)

    @property
    def passed(self) -> bool:
        return self.pass_energy and self.pass_sup and self.pass_levels

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "slack": self.slack,
            "normalization_inf": self.normalization_inf,
            "normalization_osc": self.normalization_osc,
            "epsilon": self.epsilon,
            "energy": self.energy,
            "energy_bound": self.energy_bound,
            "sup_log": self.sup_log,
            "sup_log_bound": self.sup_log_bound,
            "level_length_min": self.level_length_min,
            "level_length_bound": self.level_length_bound,
            "area_constant": self.area_constant,
            "pass_energy": self.pass_energy,
            "pass_sup": self.pass_sup,
            "pass_levels": self.pass_levels,
            "passed": self.passed,
        }


def decay_certificate(field: ScalarField, root: int, r: float,
                      area_constant: float,
                      cache: ComponentCache = None) -> DecayCertificate:
    """Check the decay inequalities for a harmonic field at radius r.

    Normalizes w = (field - inf) / osc0 + eps over the 2r-component,
    takes v = -log w, and verifies: (a) the energy of v over the
    (3/2)r-component is at most 16 |Sigma_2r| / r^2, (b) sup of v over
    the r-component is at most 24 * area_constant, (c) each of 32
    sampled levels of v has a component meeting the r-ball of length at
    least r/2 -- all up to slack 10 * target_h / r.
    """
    m = field.mesh
    cache = cache or ComponentCache(m, root)
    comp2r = cache(2.0 * r)
    vals2r = field.restricted_values(comp2r.vertices)
    inf2r = float(vals2r.min())
    osc0 = float(field.values[root] - inf2r)
    if osc0 == 0.0:
        raise DegenerateError("field is constant on the 2r-component")

    w = np.full(m.n_vertices, np.nan)
    w[comp2r.vertices] = (field.values[comp2r.vertices] - inf2r) / osc0 + LOG_SHIFT_EPS
    v = ScalarField(m, np.where(np.isfinite(w), -np.log(w), np.nan), comp2r)

    comp32 = cache(1.5 * r)
    compr = cache(r)
    slack = _slack(m, r)

    energy = harmonic.dirichlet_energy(v, comp32)
    area2r = comp2r.area()
    energy_bound = 16.0 * area2r / (r * r)

    sup_log = float(v.values[compr.vertices].max())
    sup_bound = 24.0 * float(area_constant)

    root_pos = m.positions[root]
    levels = sup_log * (np.arange(CERTIFICATE_LEVELS) + 0.5) / CERTIFICATE_LEVELS
    min_len = math.inf
    for s in levels:
        ls = harmonic.level_set(v, float(s), comp32)
        best = 0.0
        for c in ls.components:
            segs = ls.segments[c.segment_ids]
            d = np.linalg.norm(segs.reshape(-1, 3) - root_pos, axis=1)
            if (d < r).any():
                best = max(best, c.length)
        min_len = min(min_len, best)
    if not math.isfinite(min_len):
        min_len = 0.0

    return DecayCertificate(
        radius=float(r),
        slack=slack,
        normalization_inf=inf2r,
        normalization_osc=osc0,
        epsilon=LOG_SHIFT_EPS,
        energy=float(energy),
        energy_bound=float(energy_bound),
        sup_log=sup_log,
        sup_log_bound=sup_bound,
        level_length_min=float(min_len),
        level_length_bound=r / 2.0,
        area_constant=float(area_constant),
    )


# ---------------------------------------------------------------------------
# growth exponents


@dataclass
class GrowthFit:
    radii: np.ndarray
    osc2: np.ndarray
    alpha: float                # slope of log osc2 vs log r
    power_residual: float       # normalized max |osc - power fit|
    log_slope: float            # osc2 ~ log_intercept + log_slope * log r
    log_intercept: float
    log_residual: float
    preferred: str              # "power" or "log"

    def to_dict(self) -> dict:
        return {
            "radii": [float(r) for r in self.radii],
            "osc2": [float(x) for x in self.osc2],
            "alpha": self.alpha,
            "power_residual": self.power_residual,
            "log_slope": self.log_slope,
            "log_intercept": self.log_intercept,
            "log_residual": self.log_residual,
            "preferred": self.preferred,
        }


def growth_exponent(field: ScalarField, root: int, radii,
                    cache: ComponentCache = None) -> GrowthFit:
    """Fit osc2(r) against both a power law and a logarithmic model.

    Residuals are max-absolute in oscillation units, normalized by the
    oscillation range, so the two models are directly comparable.
    """
    radii = np.asarray(radii, dtype=float)
    if len(radii) < 4:
        raise ArgumentError("growth fit needs at least 4 radii")
    if np.any(np.diff(radii) <= 0):
        raise ArgumentError("radii must be strictly increasing")
    m = field.mesh
    cache = cache or ComponentCache(m, root)
    osc2 = np.array([
        oscillation(field, cache(float(r)), root, two_sided=True)
        for r in radii
    ])
    if np.any(osc2 == 0.0):
        raise DegenerateError("zero oscillation in the radii schedule")

    logr = np.log(radii)
    scale = float(osc2.max() - osc2.min())
    if scale == 0.0:
        raise DegenerateError("oscillation does not vary over the schedule")

    alpha, c0 = np.polyfit(logr, np.log(osc2), 1)
    power_pred = np.exp(c0 + alpha * logr)
    power_res = float(np.abs(osc2 - power_pred).max() / scale)

    b, a = np.polyfit(logr, osc2, 1)
    log_pred = a + b * logr
    log_res = float(np.abs(osc2 - log_pred).max() / scale)

    return GrowthFit(
        radii=radii,
        osc2=osc2,
        alpha=float(alpha),
        power_residual=power_res,
        log_slope=float(b),
        log_intercept=float(a),
        log_residual=log_res,
        preferred="power" if power_res <= log_res else "log",
    )


# ---------------------------------------------------------------------------
# Hoelder estimate


@dataclass
class HolderFit:
    scales: np.ndarray
    max_diffs: np.ndarray
    alpha: float
    c_fit: float
    l1_norm: float
    degenerate: bool

    def to_dict(self) -> dict:
        return {
            "scales": [float(s) for s in self.scales],
            "max_diffs": [float(x) for x in self.max_diffs],
            "alpha": self.alpha,
            "c_fit": self.c_fit,
            "l1_norm": self.l1_norm,
            "degenerate": self.degenerate,
        }


def holder_estimate(field: ScalarField, r: float, s_list, pair_samples: int,
                    seed: int = 0) -> HolderFit:
    """Modulus-of-continuity fit from sampled same-component pairs.

    For each scale s the maximum |u(x) - u(y)| over ``pair_samples``
    deterministic splitmix-sampled vertex pairs of the s-component is
    fit against (s/r)^alpha; the constant is normalized by the discrete
    L1 norm over the r-component.
    """
    s_list = np.asarray(s_list, dtype=float)
    if len(s_list) == 0:
        raise ArgumentError("need at least one scale")
    if np.any((s_list <= 0) | (s_list >= r)):
        raise ArgumentError("scales must lie strictly inside (0, r)")
    m = field.mesh
    root = m.origin_vertex
    gen = SplitMix64(seed)
    diffs = np.empty(len(s_list))
    for i, s in enumerate(np.sort(s_list)):
        comp = ball_component(m, root, float(s))
        vals = field.restricted_values(comp.vertices)
        n = len(vals)
        best = 0.0
        for _ in range(pair_samples):
            x = vals[gen.below(n)]
            y = vals[gen.below(n)]
            best = max(best, abs(x - y))
        diffs[i] = best

    comp_r = ball_component(m, root, float(r))
    weights = comp_r.vertex_areas()[comp_r.vertices]
    l1 = float(np.abs(field.restricted_values(comp_r.vertices)) @ weights)

    if np.any(diffs == 0.0):
        return HolderFit(np.sort(s_list), diffs, float("nan"), float("nan"), l1, True)
    alpha, c0 = np.polyfit(np.log(np.sort(s_list) / r), np.log(diffs), 1)
    c_fit = math.exp(c0) / l1 if l1 > 0 else float("inf")
    return HolderFit(np.sort(s_list), diffs, float(alpha), float(c_fit), l1, False)


# ---------------------------------------------------------------------------
# mean value and cone profile


def mean_value_ratio(field: ScalarField, root: int, r: float) -> float:
    """sup over the r-component of |u| times r^2, over the integral of |u|
    on the 2r-component (lumped ambient vertex areas)."""
    m = field.mesh
    compr = ball_component(m, root, float(r))
    comp2r = ball_component(m, root, 2.0 * r)
    sup = float(np.abs(field.restricted_values(compr.vertices)).max())
    weights = comp2r.vertex_areas()[comp2r.vertices]
    integral = float(np.abs(field.restricted_values(comp2r.vertices)) @ weights)
    if integral == 0.0:
        raise DegenerateError("field has zero integral on the 2r-component")
    return sup * r * r / integral


def cone_containment_profile(mesh: SurfaceMesh, alpha: float) -> float:
    """Smallest C with |x3| <= C (|x1|^a + |x2|^a + 1) over mesh vertices."""
    if not (alpha > 0.0):
        raise ArgumentError("alpha must be positive")
    p = mesh.positions
    denom = np.abs(p[:, 0]) ** alpha + np.abs(p[:, 1]) ** alpha + 1.0
    return float((np.abs(p[:, 2]) / denom).max())

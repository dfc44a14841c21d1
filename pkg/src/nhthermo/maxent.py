"""Maximum-entropy inference of (beta, zeta) from target expectations.

Two solvers: damped Newton on ``forward_map - target`` (primary) and the
curve-intersection construction in polar multipliers
``(beta, zeta) = beta0 (cos theta, sin theta)`` (cross-check).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import InvalidParameter, MaxIterations, TargetOnBoundary, TargetOutsideHull
from .geometry import HullPolygon, hull_membership, joint_hull, theta_grid
from .gibbs import MAX_MULTIPLIER, GibbsState, ObservablePair, covariance_hessian, gibbs_state, gibbs_weights


@dataclass(frozen=True)
class ThermalTarget:
    target_h: float
    target_k: float

    @property
    def point(self) -> np.ndarray:
        return np.array([self.target_h, self.target_k], dtype=float)


@dataclass(frozen=True)
class CurveSample:
    beta0: float
    theta: float
    x: float
    y: float
    entropy: float


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-10  # forward residual, in hull-diameter units
    tol_geo: float = 1e-8
    boundary_margin: float = 1e-8
    max_iter: int = 200
    max_halvings: int = 40


@dataclass(frozen=True)
class InferenceResult:
    beta: float
    zeta: float
    state: GibbsState
    iterations: int
    residual: float
    solver: str
    trace: list = field(default_factory=list, repr=False)
    redundant_charge: bool = False

    def as_record(self) -> dict:
        return {
            "beta": self.beta,
            "zeta": self.zeta,
            "mean_h": self.state.mean_h,
            "mean_k": self.state.mean_k,
            "entropy": self.state.entropy,
            "iterations": self.iterations,
            "residual": self.residual,
            "solver": self.solver,
            "redundant_charge": self.redundant_charge,
        }


def forward_map(pair: ObservablePair, beta: float, zeta: float) -> tuple[float, float]:
    """Gibbs expectations ``(<H>, <K>)`` at the given multipliers."""
    _, p = gibbs_weights(pair, beta, zeta)
    mean = p @ pair.joint_spectrum
    return float(mean[0]), float(mean[1])


def _wrap(theta: float) -> float:
    return (theta + math.pi) % (2.0 * math.pi) - math.pi


def _canonical_polar(beta0: float, theta: float) -> tuple[float, float]:
    if beta0 < 0:
        return -beta0, _wrap(theta + math.pi)
    return beta0, _wrap(theta)


def _sample(pair, beta0, theta) -> CurveSample:
    beta0, theta = _canonical_polar(beta0, theta)
    st = gibbs_state(pair, beta0 * math.cos(theta), beta0 * math.sin(theta))
    return CurveSample(beta0=beta0, theta=theta, x=st.mean_h, y=st.mean_k, entropy=st.entropy)


def gamma_beta0(pair: ObservablePair, beta0: float, thetas=None) -> list[CurveSample]:
    """Expectation curve at fixed multiplier radius, in the order of ``thetas``."""
    if beta0 < 0:
        raise InvalidParameter("beta0 must be non-negative")
    thetas = theta_grid() if thetas is None else thetas
    return [_sample(pair, beta0, th) for th in thetas]


def gamma_theta(pair: ObservablePair, theta: float, beta0s) -> list[CurveSample]:
    """Expectation curve at fixed multiplier angle; negative radii flip the angle by pi."""
    return [_sample(pair, b, theta) for b in beta0s]


def _check_target(pair: ObservablePair, target: ThermalTarget, cfg: SolverConfig) -> HullPolygon:
    hull = joint_hull(pair)
    where = hull_membership(hull, target.point)
    shown = f"({target.target_h:.17g}, {target.target_k:.17g})"
    if where.kind == "exterior":
        raise TargetOutsideHull(
            f"target {shown} lies outside the joint hull (distance {where.distance:.3e})",
            distance=where.distance,
        )
    if where.kind == "boundary" and hull.degenerate != "segment":
        raise TargetOnBoundary(
            f"target {shown} is on hull facet {where.facet}; needs infinite beta0",
            facet=where.facet,
        )
    if where.kind == "interior" and where.margin < cfg.boundary_margin * hull.diameter:
        raise TargetOnBoundary(f"target {shown} within {where.margin:.3e} of the hull boundary")
    return hull


def _infer_on_segment(pair, target, hull, cfg) -> InferenceResult:
    """Collinear joint spectrum: only the multiplier along the segment is identifiable."""
    a, b = hull.vertices[0], hull.vertices[1]
    u = (b - a) / np.linalg.norm(b - a)
    t_points = (pair.joint_spectrum - a) @ u
    t_target = float((target.point - a) @ u)
    span = t_points.max() - t_points.min()
    if not (t_points.min() + cfg.boundary_margin * span < t_target < t_points.max() - cfg.boundary_margin * span):
        raise TargetOnBoundary("target at an end of the degenerate hull segment", facet=0)

    def moments(s):
        e = -s * t_points
        w = np.exp(e - e.max())
        w /= w.sum()
        m = w @ t_points
        return m, w @ (t_points - m) ** 2

    s, trace = 0.0, []
    m, var = moments(s)
    for it in range(1, cfg.max_iter + 1):
        resid = abs(m - t_target)
        trace.append((s * u[0], s * u[1], resid))
        if resid <= cfg.tol * hull.diameter and it > 1:
            break
        step = (m - t_target) / var
        for _ in range(cfg.max_halvings):
            m_new, var_new = moments(s + step)
            if abs(m_new - t_target) < resid:
                break
            step *= 0.5
        else:
            break
        s += step
        m, var = m_new, var_new
    beta, zeta = s * u[0], s * u[1]
    st = gibbs_state(pair, beta, zeta)
    return InferenceResult(beta, zeta, st, len(trace), abs(m - t_target), "newton", trace, redundant_charge=True)


def infer(pair: ObservablePair, target: ThermalTarget, cfg: SolverConfig | None = None) -> InferenceResult:
    """Damped Newton from the maximal-entropy point ``(0, 0)``.

    The Jacobian of the forward map is minus the covariance matrix. Steps are
    halved until the residual norm decreases; once the tolerance is met the
    iteration continues while it still improves, to resolve multipliers
    whose targets sit near the hull boundary.
    """
    cfg = cfg or SolverConfig()
    hull = _check_target(pair, target, cfg)
    if hull.degenerate == "segment":
        return _infer_on_segment(pair, target, hull, cfg)
    goal = target.point
    tol = cfg.tol * hull.diameter
    x = np.zeros(2)

    def residual_at(x):
        _, p = gibbs_weights(pair, x[0], x[1])
        return p @ pair.joint_spectrum - goal

    g = residual_at(x)
    r = float(np.linalg.norm(g))
    trace = [(0.0, 0.0, r)]
    for _ in range(cfg.max_iter):
        if r == 0.0:
            break
        cov = covariance_hessian(pair, x[0], x[1])
        try:
            step = np.linalg.solve(cov, g)
        except np.linalg.LinAlgError:
            break
        accepted = False
        for _ in range(cfg.max_halvings):
            trial = x + step
            try:
                g_new = residual_at(trial)
            except InvalidParameter:
                g_new = None
            if g_new is not None and np.linalg.norm(g_new) < r:
                accepted = True
                break
            step = 0.5 * step
        if not accepted:
            break
        x, g = trial, g_new
        r = float(np.linalg.norm(g))
        trace.append((float(x[0]), float(x[1]), r))
    if r > tol:
        best = InferenceResult(float(x[0]), float(x[1]), gibbs_state(pair, x[0], x[1]), len(trace) - 1, r, "newton", trace)
        raise MaxIterations(f"Newton stalled at residual {r:.3e} (tolerance {tol:.3e})", best=best)
    st = gibbs_state(pair, x[0], x[1])
    return InferenceResult(float(x[0]), float(x[1]), st, len(trace) - 1, r, "newton", trace)


def infer_by_intersection(
    pair: ObservablePair,
    target: ThermalTarget,
    cfg: SolverConfig | None = None,
) -> tuple[float, float]:
    """Polar multipliers ``(beta0, theta)`` where the two curve families meet at the target.

    Along the fixed-angle curve with direction ``u = (cos theta, sin theta)``
    the projection ``u . <(H, K)>`` strictly decreases in the signed radius
    (its derivative is ``-Var(u . (H, K))``), so exactly one point of that
    curve matches the target's projection. The perpendicular miss of that
    point changes sign between ``theta`` and ``theta + pi`` and vanishes only
    at the solution, so both searches are bracketed one-dimensional roots.
    No Jacobian is used, which keeps this independent of :func:`infer`.
    """
    cfg = cfg or SolverConfig()
    hull = _check_target(pair, target, cfg)
    if hull.degenerate == "segment":
        res = _infer_on_segment(pair, target, hull, cfg)
        beta0 = math.hypot(res.beta, res.zeta)
        return beta0, (math.atan2(res.zeta, res.beta) if beta0 > 0 else 0.0)
    goal = target.point
    center = np.array(forward_map(pair, 0.0, 0.0))
    if np.linalg.norm(goal - center) <= cfg.tol_geo * hull.diameter:
        # maximal-entropy point: zero radius, angle reported as 0
        return 0.0, 0.0

    def offset(s, u):
        _, p = gibbs_weights(pair, s * u[0], s * u[1])
        return p @ pair.joint_spectrum - goal

    def radius_on_ray(theta):
        u = np.array([math.cos(theta), math.sin(theta)])
        along = lambda s: float(offset(s, u) @ u)
        lo, hi = -1.0, 1.0
        while along(lo) < 0.0 or along(hi) > 0.0:
            lo, hi = 2.0 * lo, 2.0 * hi
            if hi > MAX_MULTIPLIER:
                raise TargetOnBoundary(f"no multiplier up to {MAX_MULTIPLIER:g} reaches the target at theta={theta}")
        s = optimize.brentq(along, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=500)
        return s, u

    def miss(theta):
        s, u = radius_on_ray(theta)
        return float(offset(s, u) @ np.array([-u[1], u[0]]))

    f0 = miss(0.0)
    theta = 0.0 if f0 == 0.0 else optimize.brentq(miss, 0.0, math.pi, xtol=1e-15, rtol=1e-15, maxiter=500)
    s, u = radius_on_ray(theta)
    gap = float(np.linalg.norm(offset(s, u)))
    if gap > cfg.tol_geo * hull.diameter:
        raise MaxIterations(f"curve intersection misses target by {gap:.3e}")
    return _canonical_polar(s, theta)

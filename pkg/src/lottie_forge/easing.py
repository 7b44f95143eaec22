"""Cubic Bezier easing and keyframe sampling.

An easing curve runs from (0, 0) to (1, 1) with control points
``p1 = (o_x, o_y)`` and ``p2 = (i_x, i_y)``.  Time progress is the x
coordinate, animation progress the y coordinate, so evaluating the easing at a
given time means inverting x(u) first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import AnimatedProperty, BezierPath, Keyframe

MAX_NEWTON_ITERATIONS = 12
SOLVE_TOLERANCE = 1e-12
MIN_SLOPE = 1e-12


@dataclass(frozen=True)
class EasingCurve:
    p1: tuple[float, float]
    p2: tuple[float, float]

    def __post_init__(self):
        # x components outside [0, 1] would make x(u) non-monotone
        ox = min(max(float(self.p1[0]), 0.0), 1.0)
        ix = min(max(float(self.p2[0]), 0.0), 1.0)
        object.__setattr__(self, "p1", (ox, float(self.p1[1])))
        object.__setattr__(self, "p2", (ix, float(self.p2[1])))

    def x(self, u):
        return _bezier(self.p1[0], self.p2[0], u)

    def y(self, u):
        return _bezier(self.p1[1], self.p2[1], u)

    def dx(self, u):
        return _bezier_slope(self.p1[0], self.p2[0], u)

    def dy(self, u):
        return _bezier_slope(self.p1[1], self.p2[1], u)


LINEAR = EasingCurve((0.0, 0.0), (1.0, 1.0))
EASE_IN_OUT = EasingCurve((0.333, 0.0), (0.667, 1.0))


def _bezier(c1, c2, u):
    # 3(1-u)^2 u c1 + 3(1-u) u^2 c2 + u^3
    w = 1 - u
    return 3 * w * w * u * c1 + 3 * w * u * u * c2 + u * u * u


def _bezier_slope(c1, c2, u):
    w = 1 - u
    return 3 * w * w * c1 + 6 * w * u * (c2 - c1) + 3 * u * u * (1 - c2)


@dataclass(frozen=True)
class SolveStats:
    u: float
    iterations: int
    damped_steps: int
    bisection: bool


def solve_u_stats(curve: EasingCurve, t_norm: float) -> SolveStats:
    """Invert x(u) = t_norm.

    Newton-Raphson from u = t_norm.  A step that would leave [0, 1] is replaced
    by a half step towards the violated boundary; bisection takes over only if
    the slope vanishes or Newton has not converged after 12 iterations.
    """
    if not 0.0 <= t_norm <= 1.0 or math.isnan(t_norm):
        raise DomainError(f"t_norm must lie in [0, 1], got {t_norm}")
    if t_norm in (0.0, 1.0):
        return SolveStats(float(t_norm), 0, 0, False)
    ox, ix = curve.p1[0], curve.p2[0]
    u = t_norm
    damped = 0
    for k in range(MAX_NEWTON_ITERATIONS):
        err = _bezier(ox, ix, u) - t_norm
        if abs(err) < SOLVE_TOLERANCE:
            return SolveStats(u, k, damped, False)
        slope = _bezier_slope(ox, ix, u)
        if abs(slope) < MIN_SLOPE:
            break
        nxt = u - err / slope
        if nxt < 0.0:
            nxt, damped = u / 2, damped + 1
        elif nxt > 1.0:
            nxt, damped = (u + 1) / 2, damped + 1
        u = nxt
    else:
        if abs(_bezier(ox, ix, u) - t_norm) < SOLVE_TOLERANCE:
            return SolveStats(u, MAX_NEWTON_ITERATIONS, damped, False)
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-15:
        mid = (lo + hi) / 2
        if _bezier(ox, ix, mid) < t_norm:
            lo = mid
        else:
            hi = mid
    return SolveStats((lo + hi) / 2, MAX_NEWTON_ITERATIONS, damped, True)


def solve_u(curve: EasingCurve, t_norm: float) -> float:
    return solve_u_stats(curve, t_norm).u


def eval_easing(curve: EasingCurve, t_norm: float) -> float:
    """Animation progress at time progress `t_norm`; may leave [0, 1]."""
    if t_norm == 0.0 or t_norm == 1.0:
        return float(t_norm)
    return float(curve.y(solve_u(curve, t_norm)))


def easing_slope(curve: EasingCurve, t_norm: float) -> float:
    """d(t_eased)/d(t_norm) = y'(u) / x'(u)."""
    u = solve_u(curve, t_norm)
    dx = curve.dx(u)
    if dx == 0:
        return math.copysign(math.inf, curve.dy(u))
    return float(curve.dy(u) / dx)


# ---------------------------------------------------------------- keyframes


@dataclass(frozen=True)
class SampleResult:
    frame: float
    t_norm: float
    u: float
    t_eased: float
    value: object


def segment_curves(kf: Keyframe, dims: int) -> list[EasingCurve]:
    """One curve per value dimension; short handle arrays broadcast their last entry."""
    if not kf.has_ease:
        return [LINEAR] * max(dims, 1)
    return [EasingCurve(kf.o.point(d), kf.i.point(d)) for d in range(max(dims, 1))]


def _end_value(kf_a: Keyframe, kf_b: Keyframe):
    if kf_b.s is not None:
        return kf_b.s
    # pre-5.5 exports store the segment end value on the first keyframe
    legacy = kf_a.extras.get("e")
    if isinstance(legacy, list) and legacy and all(isinstance(c, (int, float)) for c in legacy):
        return tuple(legacy)
    return kf_a.s


def _lerp_path(a: BezierPath, b: BezierPath, w: float) -> BezierPath:
    if len(a) != len(b):
        return a if w < 1 else b

    def mix(pa, pb):
        return tuple((xa + (xb - xa) * w, ya + (yb - ya) * w) for (xa, ya), (xb, yb) in zip(pa, pb))

    return BezierPath(mix(a.vertices, b.vertices), mix(a.in_tangents, b.in_tangents),
                      mix(a.out_tangents, b.out_tangents), a.closed)


def _check_segment(kf_a: Keyframe, kf_b: Keyframe, frame: float):
    if not kf_a.t <= frame <= kf_b.t:
        raise DomainError(f"frame {frame} outside segment [{kf_a.t}, {kf_b.t}]")


def sample_segment(kf_a: Keyframe, kf_b: Keyframe, frame: float) -> SampleResult:
    """Interpolate between two keyframes, reporting the dimension-0 easing state."""
    _check_segment(kf_a, kf_b, frame)
    start, end = kf_a.s, _end_value(kf_a, kf_b)
    t_norm = (frame - kf_a.t) / (kf_b.t - kf_a.t)
    if kf_a.hold:
        eased = 1.0 if frame >= kf_b.t else 0.0
        return SampleResult(frame, t_norm, t_norm, eased, end if eased == 1.0 else start)
    if isinstance(start, BezierPath):
        curve = segment_curves(kf_a, 1)[0]
        st = solve_u_stats(curve, t_norm)
        eased = eval_easing(curve, t_norm)
        return SampleResult(frame, t_norm, st.u, eased, _lerp_path(start, end, eased))
    curves = segment_curves(kf_a, len(start))
    value = tuple(a + (b - a) * eval_easing(curves[d], t_norm) for d, (a, b) in enumerate(zip(start, end)))
    return SampleResult(frame, t_norm, solve_u(curves[0], t_norm), eval_easing(curves[0], t_norm), value)


def interpolate_segment(kf_a: Keyframe, kf_b: Keyframe, frame: float):
    """s_a + (s_b - s_a) * t_eased, component-wise."""
    return sample_segment(kf_a, kf_b, frame).value


def _enclosing(prop: AnimatedProperty, frame: float) -> int:
    times = [kf.t for kf in prop.keyframes]
    k = int(np.searchsorted(times, frame, side="right")) - 1
    return min(max(k, 0), len(times) - 2)


def sample_detail(prop: AnimatedProperty, frame: float) -> SampleResult:
    if not prop.animated:
        return SampleResult(frame, 0.0, 0.0, 0.0, prop.value)
    kfs = prop.keyframes
    if frame <= kfs[0].t:
        return SampleResult(frame, 0.0, 0.0, 0.0, kfs[0].s)
    if frame >= kfs[-1].t:
        k = len(kfs) - 2
        last = kfs[-1].s if kfs[-1].s is not None else _end_value(kfs[k], kfs[-1])
        return SampleResult(frame, 1.0, 1.0, 1.0, last)
    k = _enclosing(prop, frame)
    return sample_segment(kfs[k], kfs[k + 1], frame)


def sample_property(prop: AnimatedProperty, frame: float):
    """Value of `prop` at `frame`, holding the first/last keyframe outside the animated range."""
    return sample_detail(prop, frame).value


# ---------------------------------------------------------------- extrema


@dataclass(frozen=True)
class Extremum:
    frame: float
    t_norm: float
    t_eased: float
    value: object
    kind: str  # "min" or "max"

    @property
    def overshoot(self) -> float:
        """Fraction of the segment range by which the motion leaves [start, end]."""
        if self.kind == "min":
            return max(-self.t_eased, 0.0)
        return max(self.t_eased - 1.0, 0.0)


def find_extremum(kf_a: Keyframe, kf_b: Keyframe, resolution: float = 1e-3) -> Extremum:
    """Frame in [t_a, t_b] where the eased progress strays furthest outside [0, 1].

    For monotone curves that is an endpoint.  Located by dense sampling followed
    by golden-section refinement to `resolution` frames.
    """
    curve = segment_curves(kf_a, 1)[0]
    span = kf_b.t - kf_a.t

    def eased(t):
        return eval_easing(curve, min(max(t, 0.0), 1.0))

    grid = np.linspace(0.0, 1.0, 1001)
    vals = np.array([eased(t) for t in grid])
    k_min, k_max = int(vals.argmin()), int(vals.argmax())
    below, above = -vals[k_min], vals[k_max] - 1.0
    if max(below, above) <= 0:
        # monotone: the extreme progress values sit at the endpoints
        t_best, kind = (0.0, "min") if vals[0] <= vals[-1] else (1.0, "max")
    else:
        kind, k = ("min", k_min) if below >= above else ("max", k_max)
        sign = 1.0 if kind == "min" else -1.0
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
        t_best = _golden(lambda t: sign * eased(t), lo, hi, resolution / span if span else resolution)
    frame = kf_a.t + t_best * span
    te = eased(t_best)
    s_a, s_b = kf_a.s, _end_value(kf_a, kf_b)
    if isinstance(s_a, BezierPath):
        value = _lerp_path(s_a, s_b, te)
    else:
        value = tuple(a + (b - a) * te for a, b in zip(s_a, s_b))
    return Extremum(float(frame), float(t_best), float(te), value, kind)


def _golden(f, lo: float, hi: float, tol: float) -> float:
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (a + b) / 2

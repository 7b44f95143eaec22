"""SVG path data, affine transforms and exact bounding boxes.

Path data is reduced to absolute segments:

* ``("L", p0, p1)``
* ``("Q", p0, q, p1)``
* ``("C", p0, c1, c2, p1)``
* ``("A", p0, rx, ry, phi_degrees, large_arc, sweep, p1)``

grouped into :class:`Subpath` objects.  Bounding boxes are computed from these
segments directly (derivative roots for curves, center parameterization for
arcs) so they do not depend on the cubic approximation used for conversion.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import SchemaError, UnsupportedSvgFeature

Point = tuple[float, float]
MAX_ARC_STEP = math.pi / 4

# ---------------------------------------------------------------- affine


def identity() -> np.ndarray:
    return np.eye(3)


def matrix(a, b, c, d, e, f) -> np.ndarray:
    """SVG matrix(a b c d e f): x' = a x + c y + e, y' = b x + d y + f."""
    return np.array([[a, c, e], [b, d, f], [0.0, 0.0, 1.0]], dtype=float)


def apply(m: np.ndarray, p: Point) -> Point:
    return (float(m[0, 0] * p[0] + m[0, 1] * p[1] + m[0, 2]),
            float(m[1, 0] * p[0] + m[1, 1] * p[1] + m[1, 2]))


def apply_vec(m: np.ndarray, v: Point) -> Point:
    return (float(m[0, 0] * v[0] + m[0, 1] * v[1]), float(m[1, 0] * v[0] + m[1, 1] * v[1]))


def axis_aligned(m: np.ndarray, eps: float = 1e-12) -> bool:
    return abs(m[0, 1]) < eps and abs(m[1, 0]) < eps


_TRANSFORM_RE = re.compile(r"\s*(matrix|translate|scale|rotate|skewX|skewY)\s*\(([^)]*)\)\s*,?")
_NUM_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def parse_transform(text: str | None) -> np.ndarray:
    m = identity()
    if not text:
        return m
    pos = 0
    text = text.strip()
    while pos < len(text):
        hit = _TRANSFORM_RE.match(text, pos)
        if hit is None:
            raise SchemaError(f"bad transform list {text!r}")
        pos = hit.end()
        name, args = hit.group(1), [float(x) for x in _NUM_RE.findall(hit.group(2))]
        m = m @ _transform_matrix(name, args)
    return m


def _transform_matrix(name: str, a: list[float]) -> np.ndarray:
    try:
        if name == "matrix":
            if len(a) != 6:
                raise IndexError
            return matrix(*a)
        if name == "translate":
            return matrix(1, 0, 0, 1, a[0], a[1] if len(a) > 1 else 0.0)
        if name == "scale":
            return matrix(a[0], 0, 0, a[1] if len(a) > 1 else a[0], 0, 0)
        if name == "rotate":
            t = math.radians(a[0])
            rot = matrix(math.cos(t), math.sin(t), -math.sin(t), math.cos(t), 0, 0)
            if len(a) == 3:
                return matrix(1, 0, 0, 1, a[1], a[2]) @ rot @ matrix(1, 0, 0, 1, -a[1], -a[2])
            return rot
        if name == "skewX":
            return matrix(1, 0, math.tan(math.radians(a[0])), 1, 0, 0)
        return matrix(1, math.tan(math.radians(a[0])), 0, 1, 0, 0)
    except IndexError:
        raise SchemaError(f"wrong argument count for {name}") from None


# ---------------------------------------------------------------- path data


@dataclass
class Subpath:
    start: Point
    segments: list = field(default_factory=list)
    closed: bool = False

    @property
    def end(self) -> Point:
        return self.segments[-1][-1] if self.segments else self.start


_PATH_TOKEN = re.compile(r"\s*,?\s*([MmLlHhVvCcSsQqTtAaZz]|[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)")
_FLAG = re.compile(r"\s*,?\s*([01])")


class _PathReader:
    def __init__(self, d: str):
        self.d = d
        self.pos = 0

    def done(self) -> bool:
        return not self.d[self.pos:].strip(" \t\r\n,")

    def peek_command(self) -> str | None:
        m = _PATH_TOKEN.match(self.d, self.pos)
        if m and m.group(1).isalpha():
            return m.group(1)
        return None

    def command(self) -> str:
        m = _PATH_TOKEN.match(self.d, self.pos)
        if not m or not m.group(1).isalpha():
            raise SchemaError(f"path data: expected a command at {self.d[self.pos:self.pos + 12]!r}")
        self.pos = m.end()
        return m.group(1)

    def number(self) -> float:
        m = _PATH_TOKEN.match(self.d, self.pos)
        if not m or m.group(1).isalpha():
            raise SchemaError(f"path data: expected a number at {self.d[self.pos:self.pos + 12]!r}")
        self.pos = m.end()
        return float(m.group(1))

    def flag(self) -> bool:
        m = _FLAG.match(self.d, self.pos)
        if not m:
            raise SchemaError("path data: expected an arc flag")
        self.pos = m.end()
        return m.group(1) == "1"


def parse_path_data(d: str) -> list[Subpath]:
    """Absolute-coordinate subpaths for an SVG ``d`` attribute."""
    r = _PathReader(d or "")
    subpaths: list[Subpath] = []
    cur: Subpath | None = None
    pen: Point = (0.0, 0.0)
    last_ctrl: Point | None = None  # reflected by S / T
    last_cmd = ""
    cmd = ""
    while not r.done():
        if r.peek_command():
            cmd = r.command()
        elif not cmd or cmd in "Zz":
            raise SchemaError(f"path data: numbers without a command in {d[:40]!r}")
        elif cmd == "M":
            cmd = "L"
        elif cmd == "m":
            cmd = "l"
        up = cmd.upper()
        rel = cmd.islower()
        ox, oy = pen if rel else (0.0, 0.0)

        def pt():
            x = r.number()
            y = r.number()
            return (x + ox, y + oy)

        if up == "Z":
            if cur is not None:
                cur.closed = True
                pen = cur.start
                cur = None
            last_ctrl, last_cmd = None, "Z"
            continue
        if up == "M":
            pen = pt()
            cur = Subpath(pen)
            subpaths.append(cur)
            last_ctrl, last_cmd = None, "M"
            continue
        if cur is None:
            # drawing after Z continues from the closed subpath's start
            cur = Subpath(pen)
            subpaths.append(cur)
        if up == "L":
            p1 = pt()
            cur.segments.append(("L", pen, p1))
            ctrl = None
        elif up == "H":
            p1 = (r.number() + ox, pen[1])
            cur.segments.append(("L", pen, p1))
            ctrl = None
        elif up == "V":
            p1 = (pen[0], r.number() + oy)
            cur.segments.append(("L", pen, p1))
            ctrl = None
        elif up == "C":
            c1, c2, p1 = pt(), pt(), pt()
            cur.segments.append(("C", pen, c1, c2, p1))
            ctrl = c2
        elif up == "S":
            c1 = _reflect(pen, last_ctrl) if last_cmd in ("C", "S") else pen
            c2, p1 = pt(), pt()
            cur.segments.append(("C", pen, c1, c2, p1))
            ctrl = c2
        elif up == "Q":
            q, p1 = pt(), pt()
            cur.segments.append(("Q", pen, q, p1))
            ctrl = q
        elif up == "T":
            q = _reflect(pen, last_ctrl) if last_cmd in ("Q", "T") else pen
            p1 = pt()
            cur.segments.append(("Q", pen, q, p1))
            ctrl = q
        else:  # A
            rx, ry, phi = r.number(), r.number(), r.number()
            large, sweep = r.flag(), r.flag()
            p1 = pt()
            cur.segments.append(("A", pen, abs(rx), abs(ry), phi, large, sweep, p1))
            ctrl = None
        pen, last_ctrl, last_cmd = p1, ctrl, up
    return subpaths


def _reflect(about: Point, p: Point | None) -> Point:
    if p is None:
        return about
    return (2 * about[0] - p[0], 2 * about[1] - p[1])


# ---------------------------------------------------------------- arcs


@dataclass(frozen=True)
class ArcCenter:
    cx: float
    cy: float
    rx: float
    ry: float
    phi: float  # radians
    theta1: float
    dtheta: float

    def point(self, theta: float) -> Point:
        c, s = math.cos(self.phi), math.sin(self.phi)
        x, y = self.rx * math.cos(theta), self.ry * math.sin(theta)
        return (self.cx + c * x - s * y, self.cy + s * x + c * y)

    def derivative(self, theta: float) -> Point:
        c, s = math.cos(self.phi), math.sin(self.phi)
        x, y = -self.rx * math.sin(theta), self.ry * math.cos(theta)
        return (c * x - s * y, s * x + c * y)


def _angle(u: Point, v: Point) -> float:
    return math.atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1])


def arc_center(p0: Point, rx: float, ry: float, phi_deg: float, large: bool, sweep: bool,
               p1: Point) -> ArcCenter | None:
    """Endpoint to center parameterization; None when the arc degenerates to a line."""
    if p0 == p1 or rx == 0 or ry == 0:
        return None
    phi = math.radians(phi_deg % 360)
    c, s = math.cos(phi), math.sin(phi)
    dx, dy = (p0[0] - p1[0]) / 2, (p0[1] - p1[1]) / 2
    x1, y1 = c * dx + s * dy, -s * dx + c * dy
    lam = (x1 / rx) ** 2 + (y1 / ry) ** 2
    if lam > 1:
        rx, ry = rx * math.sqrt(lam), ry * math.sqrt(lam)
    num = rx * rx * ry * ry - rx * rx * y1 * y1 - ry * ry * x1 * x1
    den = rx * rx * y1 * y1 + ry * ry * x1 * x1
    coef = math.sqrt(max(num, 0.0) / den) if den else 0.0
    if large == sweep:
        coef = -coef
    cxp, cyp = coef * rx * y1 / ry, -coef * ry * x1 / rx
    cx = c * cxp - s * cyp + (p0[0] + p1[0]) / 2
    cy = s * cxp + c * cyp + (p0[1] + p1[1]) / 2
    u = ((x1 - cxp) / rx, (y1 - cyp) / ry)
    v = ((-x1 - cxp) / rx, (-y1 - cyp) / ry)
    theta1 = _angle((1.0, 0.0), u)
    dtheta = _angle(u, v)
    if not sweep and dtheta > 0:
        dtheta -= 2 * math.pi
    elif sweep and dtheta < 0:
        dtheta += 2 * math.pi
    return ArcCenter(cx, cy, rx, ry, phi, theta1, dtheta)


def arc_to_cubics(seg) -> list[tuple]:
    """Split an arc into cubic segments spanning at most 45 degrees each."""
    _, p0, rx, ry, phi, large, sweep, p1 = seg
    arc = arc_center(p0, rx, ry, phi, large, sweep, p1)
    if arc is None:
        return [] if p0 == p1 else [("C", p0, p0, p1, p1)]
    n = max(1, math.ceil(abs(arc.dtheta) / MAX_ARC_STEP - 1e-9))
    step = arc.dtheta / n
    alpha = 4 / 3 * math.tan(step / 4)
    out = []
    a = arc.theta1
    start = p0
    for k in range(n):
        b = a + step
        end = p1 if k == n - 1 else arc.point(b)
        da, db = arc.derivative(a), arc.derivative(b)
        c1 = (start[0] + alpha * da[0], start[1] + alpha * da[1])
        c2 = (end[0] - alpha * db[0], end[1] - alpha * db[1])
        out.append(("C", start, c1, c2, end))
        start, a = end, b
    return out


def to_cubic(seg) -> list[tuple]:
    kind = seg[0]
    if kind == "C":
        return [seg]
    if kind == "L":
        _, p0, p1 = seg
        return [("C", p0, p0, p1, p1)]
    if kind == "Q":
        _, p0, q, p1 = seg
        c1 = (p0[0] + 2 / 3 * (q[0] - p0[0]), p0[1] + 2 / 3 * (q[1] - p0[1]))
        c2 = (p1[0] + 2 / 3 * (q[0] - p1[0]), p1[1] + 2 / 3 * (q[1] - p1[1]))
        return [("C", p0, c1, c2, p1)]
    return arc_to_cubics(seg)


# ---------------------------------------------------------------- bounding boxes


class BBox:
    __slots__ = ("x0", "y0", "x1", "y1")

    def __init__(self):
        self.x0 = self.y0 = math.inf
        self.x1 = self.y1 = -math.inf

    def add(self, p: Point):
        self.x0, self.x1 = min(self.x0, p[0]), max(self.x1, p[0])
        self.y0, self.y1 = min(self.y0, p[1]), max(self.y1, p[1])

    def merge(self, other: "BBox"):
        if not other.empty:
            self.add((other.x0, other.y0))
            self.add((other.x1, other.y1))

    @property
    def empty(self) -> bool:
        return self.x0 > self.x1

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x0, self.y0, self.x1, self.y1)

    def close_to(self, other: "BBox", tol: float) -> bool:
        if self.empty or other.empty:
            return self.empty and other.empty
        return all(abs(a - b) <= tol for a, b in zip(self.as_tuple(), other.as_tuple()))

    def __repr__(self):
        return f"BBox{self.as_tuple()}"


def _quad_roots(a: float, b: float, c: float) -> list[float]:
    if abs(a) < 1e-12:
        return [] if abs(b) < 1e-12 else [-c / b]
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    return [(-b + sq) / (2 * a), (-b - sq) / (2 * a)]


def cubic_point(p0, c1, c2, p1, u: float) -> Point:
    w = 1 - u
    return tuple(w ** 3 * p0[k] + 3 * w * w * u * c1[k] + 3 * w * u * u * c2[k] + u ** 3 * p1[k]
                 for k in (0, 1))


def cubic_bbox(p0, c1, c2, p1, box: BBox | None = None) -> BBox:
    box = box or BBox()
    box.add(p0)
    box.add(p1)
    for k in (0, 1):
        # derivative / 3 = a u^2 + b u + c
        a = -p0[k] + 3 * c1[k] - 3 * c2[k] + p1[k]
        b = 2 * (p0[k] - 2 * c1[k] + c2[k])
        c = c1[k] - p0[k]
        for u in _quad_roots(a, b, c):
            if 0 < u < 1:
                box.add(cubic_point(p0, c1, c2, p1, u))
    return box


def _arc_bbox(seg, m: np.ndarray, box: BBox):
    _, p0, rx, ry, phi, large, sweep, p1 = seg
    box.add(apply(m, p0))
    box.add(apply(m, p1))
    arc = arc_center(p0, rx, ry, phi, large, sweep, p1)
    if arc is None:
        return
    # transformed ellipse point: center' + B (cos t, sin t)
    c, s = math.cos(arc.phi), math.sin(arc.phi)
    rot = np.array([[c * arc.rx, -s * arc.ry], [s * arc.rx, c * arc.ry]])
    bm = m[:2, :2] @ rot
    lo, hi = sorted((arc.theta1, arc.theta1 + arc.dtheta))
    for row in (0, 1):
        base = math.atan2(bm[row, 1], bm[row, 0])
        k0 = math.ceil((lo - base) / math.pi)
        k = k0
        while base + k * math.pi <= hi:
            box.add(apply(m, arc.point(base + k * math.pi)))
            k += 1


def segment_bbox(seg, m: np.ndarray, box: BBox):
    kind = seg[0]
    if kind == "L":
        box.add(apply(m, seg[1]))
        box.add(apply(m, seg[2]))
    elif kind == "C":
        cubic_bbox(*(apply(m, p) for p in seg[1:]), box=box)
    elif kind == "Q":
        cubic_bbox(*(apply(m, p) for p in to_cubic(seg)[0][1:]), box=box)
    else:
        _arc_bbox(seg, m, box)


def subpaths_bbox(subpaths: list[Subpath], m: np.ndarray) -> BBox:
    box = BBox()
    for sp in subpaths:
        box.add(apply(m, sp.start))
        for seg in sp.segments:
            segment_bbox(seg, m, box)
    return box


def ellipse_bbox(cx: float, cy: float, rx: float, ry: float, m: np.ndarray) -> BBox:
    """Exact bounds of an axis-aligned ellipse under an affine map."""
    center = apply(m, (cx, cy))
    half_x = math.hypot(float(m[0, 0]) * rx, float(m[0, 1]) * ry)
    half_y = math.hypot(float(m[1, 0]) * rx, float(m[1, 1]) * ry)
    box = BBox()
    box.add((center[0] - half_x, center[1] - half_y))
    box.add((center[0] + half_x, center[1] + half_y))
    return box


def polygon_bbox(points, m: np.ndarray) -> BBox:
    box = BBox()
    for p in points:
        box.add(apply(m, p))
    return box


def ensure_no_units(value: str, what: str) -> float:
    text = value.strip()
    if text.endswith("px"):
        text = text[:-2]
    try:
        return float(text)
    except ValueError:
        raise UnsupportedSvgFeature(f"{what}: unsupported length {value!r}") from None

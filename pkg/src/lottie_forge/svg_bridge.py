"""Static SVG to Lottie conversion for basic primitives.

Each top-level element (a primitive or a ``<g>``) becomes one shape layer and
every primitive inside it one group holding its geometry, stroke, fill and an
identity transform.  Lottie draws earlier layers and items on top, so both
lists are reversed relative to document order.  Transforms are baked into the
coordinates: axis-aligned rects and ellipses stay ``rc`` / ``el`` items,
anything else becomes a path.
"""
from __future__ import annotations

import math
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

import numpy as np

from .errors import JsonSyntaxError, SchemaError, UnsupportedSvgFeature
from .model import BezierPath, LottieDocument, ShapeItem, parse_obj
from .svg_path import (
    BBox, Subpath, apply, apply_vec, axis_aligned, cubic_bbox, ellipse_bbox, ensure_no_units,
    identity, parse_path_data, parse_transform, polygon_bbox, subpaths_bbox, to_cubic,
)

BBOX_TOLERANCE = 0.5
PRIMITIVES = ("rect", "circle", "ellipse", "line", "polyline", "polygon", "path")
IGNORED = ("title", "desc", "metadata")
UNSUPPORTED = ("filter", "text", "tspan", "textPath", "mask", "clipPath", "animate",
               "animateTransform", "animateMotion", "animateColor", "set", "style", "image",
               "use", "pattern", "radialGradient", "foreignObject", "symbol", "marker", "switch")
UNSUPPORTED_ATTRS = ("filter", "mask", "clip-path")

NAMED_COLORS = {
    "black": (0, 0, 0), "white": (255, 255, 255), "red": (255, 0, 0), "lime": (0, 255, 0),
    "green": (0, 128, 0), "blue": (0, 0, 255), "yellow": (255, 255, 0), "cyan": (0, 255, 255),
    "aqua": (0, 255, 255), "magenta": (255, 0, 255), "fuchsia": (255, 0, 255),
    "gray": (128, 128, 128), "grey": (128, 128, 128), "silver": (192, 192, 192),
    "maroon": (128, 0, 0), "olive": (128, 128, 0), "navy": (0, 0, 128), "purple": (128, 0, 128),
    "teal": (0, 128, 128), "orange": (255, 165, 0),
}
INHERITED = ("fill", "stroke", "stroke-width", "fill-opacity", "stroke-opacity", "fill-rule",
             "stroke-linecap", "stroke-linejoin", "stroke-miterlimit")
LINECAP = {"butt": 1, "round": 2, "square": 3}
LINEJOIN = {"miter": 1, "round": 2, "bevel": 3}


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1] if isinstance(tag, str) else ""


def _attr(el: ET.Element, name: str) -> str | None:
    for key, value in el.attrib.items():
        if _local(key) == name:
            return value
    return None


# ---------------------------------------------------------------- scene


@dataclass
class Style:
    fill: str = "black"
    stroke: str = "none"
    stroke_width: float = 1.0
    fill_opacity: float = 1.0
    stroke_opacity: float = 1.0
    opacity: float = 1.0
    fill_rule: str = "nonzero"
    linecap: str = "butt"
    linejoin: str = "miter"
    miterlimit: float = 4.0


@dataclass
class Primitive:
    kind: str
    element: ET.Element
    ctm: np.ndarray
    style: Style


@dataclass
class SvgScene:
    viewbox: tuple[float, float, float, float]
    groups: list[list[Primitive]] = field(default_factory=list)
    gradients: dict[str, dict] = field(default_factory=dict)

    @property
    def width(self) -> float:
        return self.viewbox[2]

    @property
    def height(self) -> float:
        return self.viewbox[3]

    def primitives(self) -> list[Primitive]:
        return [p for g in self.groups for p in g]


def _declarations(el: ET.Element) -> dict[str, str]:
    out = {name: _attr(el, name) for name in INHERITED + ("opacity", "display", "visibility")}
    out = {k: v.strip() for k, v in out.items() if v is not None}
    inline = _attr(el, "style")
    if inline:
        for decl in inline.split(";"):
            if ":" in decl:
                k, v = decl.split(":", 1)
                out[k.strip()] = v.strip()
    return out


def _number(text: str, what: str) -> float:
    return ensure_no_units(text, what)


def _style(parent: Style, decl: dict[str, str]) -> Style:
    s = Style(**vars(parent))
    s.opacity = parent.opacity * float(decl.get("opacity", 1))
    if "fill" in decl:
        s.fill = decl["fill"]
    if "stroke" in decl:
        s.stroke = decl["stroke"]
    if "stroke-width" in decl:
        s.stroke_width = _number(decl["stroke-width"], "stroke-width")
    if "fill-opacity" in decl:
        s.fill_opacity = float(decl["fill-opacity"])
    if "stroke-opacity" in decl:
        s.stroke_opacity = float(decl["stroke-opacity"])
    s.fill_rule = decl.get("fill-rule", s.fill_rule)
    s.linecap = decl.get("stroke-linecap", s.linecap)
    s.linejoin = decl.get("stroke-linejoin", s.linejoin)
    if "stroke-miterlimit" in decl:
        s.miterlimit = float(decl["stroke-miterlimit"])
    return s


def _hidden(decl: dict[str, str]) -> bool:
    return decl.get("display") == "none" or decl.get("visibility") in ("hidden", "collapse")


def _check_supported(el: ET.Element):
    tag = _local(el.tag)
    if tag in UNSUPPORTED:
        raise UnsupportedSvgFeature(f"<{tag}> is not supported")
    for name in UNSUPPORTED_ATTRS:
        if _attr(el, name) is not None:
            raise UnsupportedSvgFeature(f"attribute {name!r} on <{tag}> is not supported")


def _viewbox(root: ET.Element) -> tuple[float, float, float, float]:
    vb = _attr(root, "viewBox")
    if vb:
        parts = [float(x) for x in re.split(r"[\s,]+", vb.strip())]
        if len(parts) != 4:
            raise SchemaError(f"bad viewBox {vb!r}")
        box = tuple(parts)
    else:
        w, h = _attr(root, "width"), _attr(root, "height")
        if w is None or h is None:
            raise SchemaError("svg needs a viewBox or width and height")
        box = (0.0, 0.0, _number(w, "width"), _number(h, "height"))
    if box[2] <= 0 or box[3] <= 0:
        raise SchemaError("viewBox width and height must be positive")
    return box


def _gradient(el: ET.Element) -> dict:
    if _attr(el, "href") is not None:
        raise UnsupportedSvgFeature("gradient href inheritance is not supported")
    if _attr(el, "gradientTransform") is not None:
        raise UnsupportedSvgFeature("gradientTransform is not supported")
    stops = [s for s in el if _local(s.tag) == "stop"]
    if len(stops) != 2:
        raise UnsupportedSvgFeature(f"linear gradients need exactly two stops, got {len(stops)}")
    units = _attr(el, "gradientUnits") or "objectBoundingBox"
    out = {"units": units, "stops": []}
    defaults = {"x1": "0", "y1": "0", "x2": "100%", "y2": "0"}
    for key, dflt in defaults.items():
        raw = (_attr(el, key) or dflt).strip()
        if raw.endswith("%"):
            value = float(raw[:-1]) / 100
            if units == "userSpaceOnUse":
                raise UnsupportedSvgFeature("percentage gradient coordinates in user space")
        else:
            value = _number(raw, key)
        out[key] = value
    for stop in stops:
        decl = _declarations(stop)
        for k in ("stop-color", "stop-opacity"):
            if _attr(stop, k) is not None:
                decl.setdefault(k, _attr(stop, k).strip())
        off = (_attr(stop, "offset") or "0").strip()
        offset = float(off[:-1]) / 100 if off.endswith("%") else float(off)
        color = parse_color(decl.get("stop-color", "black"))
        out["stops"].append((min(max(offset, 0.0), 1.0), color, float(decl.get("stop-opacity", 1))))
    return out


def parse_color(text: str) -> tuple[float, float, float]:
    t = text.strip().lower()
    if t.startswith("#"):
        h = t[1:]
        if len(h) == 3:
            h = "".join(c * 2 for c in h)
        if len(h) != 6 or not all(c in "0123456789abcdef" for c in h):
            raise SchemaError(f"bad color {text!r}")
        return tuple(int(h[k:k + 2], 16) / 255 for k in (0, 2, 4))
    m = re.fullmatch(r"rgb\(\s*([^,\s]+)\s*,?\s*([^,\s]+)\s*,?\s*([^,\s)]+)\s*\)", t)
    if m:
        chans = []
        for c in m.groups():
            v = float(c[:-1]) * 2.55 if c.endswith("%") else float(c)
            chans.append(min(max(v, 0.0), 255.0) / 255)
        return tuple(chans)
    if t in NAMED_COLORS:
        return tuple(c / 255 for c in NAMED_COLORS[t])
    raise UnsupportedSvgFeature(f"unsupported color {text!r}")


def read_scene(svg_text: str | bytes) -> SvgScene:
    """Parse SVG text into primitives with their accumulated transforms and styles."""
    try:
        root = ET.fromstring(svg_text)
    except ET.ParseError as exc:
        raise JsonSyntaxError(f"invalid SVG/XML: {exc}") from None
    if _local(root.tag) != "svg":
        raise SchemaError(f"root element is <{_local(root.tag)}>, expected <svg>")
    vb = _viewbox(root)
    scene = SvgScene(vb)
    for el in root.iter():
        _check_supported(el)
        if _local(el.tag) == "linearGradient":
            gid = _attr(el, "id")
            if gid:
                scene.gradients[gid] = _gradient(el)
    base = parse_transform(_attr(root, "transform")) if _attr(root, "transform") else identity()
    base = np.array([[1, 0, -vb[0]], [0, 1, -vb[1]], [0, 0, 1]], dtype=float) @ base
    root_style = _style(Style(), _declarations(root))
    for child in root:
        tag = _local(child.tag)
        if tag in IGNORED or tag in ("defs", "linearGradient"):
            continue
        prims: list[Primitive] = []
        _collect(child, base, root_style, prims)
        if prims:
            scene.groups.append(prims)
    return scene


def _collect(el: ET.Element, ctm: np.ndarray, style: Style, out: list[Primitive]):
    tag = _local(el.tag)
    if tag in IGNORED or tag in ("defs", "linearGradient"):
        return
    decl = _declarations(el)
    if _hidden(decl):
        return
    ctm = ctm @ parse_transform(_attr(el, "transform"))
    st = _style(style, decl)
    if tag == "g":
        for child in el:
            _collect(child, ctm, st, out)
    elif tag in PRIMITIVES:
        out.append(Primitive(tag, el, ctm, st))
    else:
        raise UnsupportedSvgFeature(f"<{tag}> is not supported")


# ---------------------------------------------------------------- geometry


def _f(el: ET.Element, name: str, default: float = 0.0) -> float:
    v = _attr(el, name)
    if v is None:
        return default
    if v.strip().endswith("%"):
        raise UnsupportedSvgFeature(f"percentage {name} is not supported")
    return _number(v, name)


def _points(el: ET.Element) -> list[tuple[float, float]]:
    nums = [float(x) for x in re.findall(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?",
                                         _attr(el, "points") or "")]
    return [(nums[k], nums[k + 1]) for k in range(0, len(nums) - 1, 2)]


def _rect_radii(el: ET.Element) -> tuple[float, float]:
    w, h = _f(el, "width"), _f(el, "height")
    rx, ry = _attr(el, "rx"), _attr(el, "ry")
    rx = _f(el, "rx") if rx is not None else None
    ry = _f(el, "ry") if ry is not None else None
    if rx is None and ry is None:
        return 0.0, 0.0
    rx = ry if rx is None else rx
    ry = rx if ry is None else ry
    return min(abs(rx), w / 2), min(abs(ry), h / 2)


def primitive_subpaths(p: Primitive) -> list[Subpath]:
    """Untransformed outline of a primitive as path segments."""
    el = p.element
    if p.kind == "path":
        return parse_path_data(_attr(el, "d") or "")
    if p.kind == "line":
        a, b = (_f(el, "x1"), _f(el, "y1")), (_f(el, "x2"), _f(el, "y2"))
        return [Subpath(a, [("L", a, b)])]
    if p.kind in ("polyline", "polygon"):
        pts = _points(el)
        if not pts:
            return []
        sp = Subpath(pts[0], [("L", a, b) for a, b in zip(pts, pts[1:])], p.kind == "polygon")
        return [sp]
    if p.kind == "rect":
        x, y, w, h = _f(el, "x"), _f(el, "y"), _f(el, "width"), _f(el, "height")
        rx, ry = _rect_radii(el)
        if rx == 0 or ry == 0:
            corners = [(x, y), (x + w, y), (x + w, y + h), (x, y + h)]
            return [Subpath(corners[0], [("L", a, b) for a, b in zip(corners, corners[1:])], True)]
        segs = []
        pts = [(x + rx, y), (x + w - rx, y), (x + w, y + ry), (x + w, y + h - ry),
               (x + w - rx, y + h), (x + rx, y + h), (x, y + h - ry), (x, y + ry)]
        for k in range(0, 8, 2):
            a, b, nxt = pts[k], pts[k + 1], pts[(k + 2) % 8]
            segs.append(("L", a, b))
            segs.append(("A", b, rx, ry, 0.0, False, True, nxt))
        return [Subpath(pts[0], segs, True)]
    cx, cy = _f(el, "cx"), _f(el, "cy")
    if p.kind == "circle":
        rx = ry = _f(el, "r")
    else:
        rx, ry = _f(el, "rx"), _f(el, "ry")
    q = [(cx + rx, cy), (cx, cy + ry), (cx - rx, cy), (cx, cy - ry)]
    segs = [("A", a, rx, ry, 0.0, False, True, b) for a, b in zip(q, q[1:] + q[:1])]
    return [Subpath(q[0], segs, True)]


def svg_bbox(p: Primitive) -> BBox:
    """Exact geometric bounds of a primitive in document coordinates (stroke ignored)."""
    el = p.element
    if p.kind in ("circle", "ellipse"):
        cx, cy = _f(el, "cx"), _f(el, "cy")
        rx, ry = (_f(el, "r"),) * 2 if p.kind == "circle" else (_f(el, "rx"), _f(el, "ry"))
        return ellipse_bbox(cx, cy, rx, ry, p.ctm)
    if p.kind == "rect" and _rect_radii(el) == (0.0, 0.0):
        x, y, w, h = _f(el, "x"), _f(el, "y"), _f(el, "width"), _f(el, "height")
        return polygon_bbox([(x, y), (x + w, y), (x + w, y + h), (x, y + h)], p.ctm)
    return subpaths_bbox(primitive_subpaths(p), p.ctm)


def _lottie_path(sp: Subpath, m: np.ndarray) -> dict:
    cubics = [c for seg in sp.segments for c in to_cubic(seg)]
    if sp.closed and cubics:
        last = cubics[-1][-1]
        if math.dist(last, sp.start) > 1e-9:
            cubics.append(("C", last, last, sp.start, sp.start))
    verts = [apply(m, sp.start)]
    ins, outs = [(0.0, 0.0)], []
    for _, p0, c1, c2, p1 in cubics:
        outs.append(apply_vec(m, (c1[0] - p0[0], c1[1] - p0[1])))
        verts.append(apply(m, p1))
        ins.append(apply_vec(m, (c2[0] - p1[0], c2[1] - p1[1])))
    outs.append((0.0, 0.0))
    if sp.closed and len(verts) > 1:
        # the closing segment ends on the start vertex: fold it into vertex 0
        verts.pop()
        ins[0] = ins.pop()
        outs.pop()
    return {"ty": "sh", "ks": {"a": 0, "k": {
        "i": [list(x) for x in ins], "o": [list(x) for x in outs],
        "v": [list(x) for x in verts], "c": sp.closed}}}


def _static(v) -> dict:
    return {"a": 0, "k": v}


def _geometry(p: Primitive) -> list[dict]:
    el, m = p.element, p.ctm
    if axis_aligned(m) and p.kind in ("rect", "circle", "ellipse"):
        sx, sy = abs(float(m[0, 0])), abs(float(m[1, 1]))
        if p.kind == "rect":
            x, y, w, h = _f(el, "x"), _f(el, "y"), _f(el, "width"), _f(el, "height")
            rx, ry = _rect_radii(el)
            if math.isclose(rx * sx, ry * sy, rel_tol=1e-9, abs_tol=1e-9):
                center = apply(m, (x + w / 2, y + h / 2))
                return [{"ty": "rc", "p": _static(list(center)), "s": _static([w * sx, h * sy]),
                         "r": _static(rx * sx)}]
        else:
            cx, cy = _f(el, "cx"), _f(el, "cy")
            rx, ry = (_f(el, "r"),) * 2 if p.kind == "circle" else (_f(el, "rx"), _f(el, "ry"))
            return [{"ty": "el", "p": _static(list(apply(m, (cx, cy)))),
                     "s": _static([2 * rx * sx, 2 * ry * sy])}]
    return [_lottie_path(sp, m) for sp in primitive_subpaths(p)]


def _gradient_item(kind: str, grad: dict, p: Primitive, opacity: float) -> dict:
    if grad["units"] == "objectBoundingBox":
        box = subpaths_bbox(primitive_subpaths(p), identity())
        w, h = box.x1 - box.x0, box.y1 - box.y0

        def user(x, y):
            return (box.x0 + x * w, box.y0 + y * h)
    else:
        def user(x, y):
            return (x, y)
    start = apply(p.ctm, user(grad["x1"], grad["y1"]))
    end = apply(p.ctm, user(grad["x2"], grad["y2"]))
    colors, alphas = [], []
    for offset, rgb, alpha in grad["stops"]:
        colors += [offset, *rgb]
        alphas += [offset, alpha]
    k = colors + (alphas if any(a != 1 for a in alphas[1::2]) else [])
    item = {"ty": kind, "o": _static(100 * opacity), "s": _static(list(start)),
            "e": _static(list(end)), "g": {"p": 2, "k": _static(k)}, "t": 1}
    return item


def _paint(p: Primitive, scene: SvgScene, which: str) -> dict | None:
    s = p.style
    paint = s.fill if which == "fill" else s.stroke
    if paint is None or paint.strip() == "none":
        return None
    opacity = s.opacity * (s.fill_opacity if which == "fill" else s.stroke_opacity)
    rule = {"fill-rule": 2 if s.fill_rule == "evenodd" else 1}
    m = re.fullmatch(r"\s*url\(\s*#([^)\s]+)\s*\)\s*", paint)
    if m:
        grad = scene.gradients.get(m.group(1))
        if grad is None:
            raise UnsupportedSvgFeature(f"paint server {paint!r} is not a linear gradient")
        item = _gradient_item("gf" if which == "fill" else "gs", grad, p, opacity)
    else:
        rgb = parse_color(paint)
        item = {"ty": "fl" if which == "fill" else "st", "c": _static([*rgb, 1]),
                "o": _static(100 * opacity)}
    if which == "fill":
        item["r"] = rule["fill-rule"]
    else:
        scale = math.sqrt(abs(np.linalg.det(p.ctm[:2, :2])))
        item["w"] = _static(s.stroke_width * scale)
        item["lc"] = LINECAP.get(s.linecap, 1)
        item["lj"] = LINEJOIN.get(s.linejoin, 1)
        if item["lj"] == 1:
            item["ml"] = s.miterlimit
    return item


def _identity_tr() -> dict:
    return {"ty": "tr", "p": _static([0, 0]), "a": _static([0, 0]), "s": _static([100, 100]),
            "r": _static(0), "o": _static(100)}


def _primitive_group(p: Primitive, scene: SvgScene) -> dict | None:
    items = _geometry(p)
    if not items:
        return None
    for which in ("stroke", "fill"):
        paint = _paint(p, scene, which)
        if paint is not None:
            items.append(paint)
    items.append(_identity_tr())
    return {"ty": "gr", "np": len(items) - 1, "it": items}


def convert_scene(scene: SvgScene) -> LottieDocument:
    layers = []
    for n, prims in enumerate(reversed(scene.groups)):
        shapes = [g for g in (_primitive_group(p, scene) for p in reversed(prims)) if g is not None]
        layers.append({"ty": 4, "ind": n + 1, "ip": 0, "op": 1, "st": 0, "bm": 0, "ks": {},
                       "shapes": shapes})
    doc = {"v": "5.9.5", "fr": 30, "ip": 0, "op": 1, "w": scene.width, "h": scene.height,
           "ddd": 0, "assets": [], "layers": layers}
    return parse_obj(doc)


def convert(svg_text: str | bytes) -> LottieDocument:
    """Convert an SVG drawing built from the supported primitives into a static Lottie document.

    Raises UnsupportedSvgFeature for filters, text, masks, animation, CSS style
    sheets and gradients other than two-stop linear ones.
    """
    return convert_scene(read_scene(svg_text))


# ---------------------------------------------------------------- consistency


def _transform_matrix(props) -> np.ndarray:
    """Static shape-transform matrix: translate(p) rotate(r) scale(s/100) translate(-a)."""
    def val(key, dflt):
        prop = props.get(key)
        return dflt if prop is None or prop.animated else prop.value

    p, a, s, r = val("p", (0, 0)), val("a", (0, 0)), val("s", (100, 100)), val("r", (0,))
    t = math.radians(r[0])
    rot = np.array([[math.cos(t), -math.sin(t), 0], [math.sin(t), math.cos(t), 0], [0, 0, 1]])
    return (np.array([[1, 0, p[0]], [0, 1, p[1]], [0, 0, 1]], dtype=float) @ rot
            @ np.diag([s[0] / 100, s[1] / 100, 1.0])
            @ np.array([[1, 0, -a[0]], [0, 1, -a[1]], [0, 0, 1]], dtype=float))


def _item_bbox(item: ShapeItem, m: np.ndarray) -> BBox:
    box = BBox()
    if item.ty in ("rc", "el"):
        p, s = item.props["p"].value, item.props["s"].value
        if item.ty == "el":
            return ellipse_bbox(p[0], p[1], s[0] / 2, s[1] / 2, m)
        return polygon_bbox([(p[0] - s[0] / 2, p[1] - s[1] / 2), (p[0] + s[0] / 2, p[1] - s[1] / 2),
                             (p[0] + s[0] / 2, p[1] + s[1] / 2), (p[0] - s[0] / 2, p[1] + s[1] / 2)], m)
    prop = item.props["ks"]
    path: BezierPath = prop.keyframes[0].s if prop.animated else prop.value
    n = len(path)
    pts = [apply(m, v) for v in path.vertices]
    for p in pts:
        box.add(p)
    spans = n if path.closed else n - 1
    for k in range(max(spans, 0)):
        j = (k + 1) % n
        v0, v1 = path.vertices[k], path.vertices[j]
        c1 = (v0[0] + path.out_tangents[k][0], v0[1] + path.out_tangents[k][1])
        c2 = (v1[0] + path.in_tangents[j][0], v1[1] + path.in_tangents[j][1])
        cubic_bbox(apply(m, v0), apply(m, c1), apply(m, c2), apply(m, v1), box)
    return box


def lottie_element_boxes(doc: LottieDocument) -> list[BBox]:
    """Geometry bounds of every primitive group, in SVG document order."""
    out = []
    for layer in reversed(doc.layers):
        lm = _transform_matrix(layer.transform.props())
        for group in reversed(layer.shapes):
            if group.ty != "gr":
                continue
            tr = next((s for s in group.items if s.ty == "tr"), None)
            gm = lm @ (_transform_matrix(tr.props) if tr is not None else identity())
            geoms = [s for s in group.items if s.ty in ("rc", "el", "sh")]
            if not geoms:
                continue
            box = BBox()
            for g in geoms:
                box.merge(_item_bbox(g, gm))
            out.append(box)
    return out


def consistency_check(svg_text: str | bytes, doc: LottieDocument,
                      tol: float = BBOX_TOLERANCE) -> bool:
    """Element counts match and each element's bounds agree within `tol` px."""
    scene = read_scene(svg_text)
    svg_boxes = [b for b in (svg_bbox(p) for p in scene.primitives()) if not b.empty]
    lottie_boxes = lottie_element_boxes(doc)
    if len(svg_boxes) != len(lottie_boxes):
        return False
    return all(a.close_to(b, tol) for a, b in zip(svg_boxes, lottie_boxes))

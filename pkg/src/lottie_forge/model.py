"""Typed in-memory Lottie document.

Every document is built by :func:`parse_obj`; the tokenizer, optimizer and svg
bridge all produce plain JSON objects and run them through the same parser, so
validation lives in one place.  Keys the schema does not know about are kept in
``extras`` maps next to the object that carried them and are written back
verbatim.
"""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Any, Iterator, Mapping

from .errors import JsonSyntaxError, SchemaError, UnsupportedFeature
from .numeric import hex_to_color, color_to_hex, is_number, round_sig

log = logging.getLogger(__name__)

DEFAULT_DIGITS = 4


class LayerType(IntEnum):
    PRECOMP = 0
    SOLID = 1
    IMAGE = 2
    NULL = 3
    SHAPE = 4


@dataclass(frozen=True)
class ShapeSchema:
    required: tuple[str, ...]
    optional: tuple[str, ...] = ()
    fields: tuple[str, ...] = ()


TRANSFORM_PROPS = ("p", "a", "s", "r", "o")
TRANSFORM_OPTIONAL = ("sk", "sa")

SHAPE_SCHEMAS: dict[str, ShapeSchema] = {
    "sh": ShapeSchema(("ks",), (), ("d",)),
    "el": ShapeSchema(("p", "s"), (), ("d",)),
    "rc": ShapeSchema(("p", "s"), ("r",), ("d",)),
    "sr": ShapeSchema(("p", "or", "os", "r", "pt"), ("ir", "is"), ("sy", "d")),
    "fl": ShapeSchema(("c", "o"), (), ("r",)),
    "st": ShapeSchema(("c", "o", "w"), ("ml2",), ("lc", "lj", "ml")),
    "gf": ShapeSchema(("o", "s", "e", "g"), ("h", "a"), ("t", "r")),
    "gs": ShapeSchema(("o", "s", "e", "g", "w"), ("h", "a", "ml2"), ("t", "lc", "lj", "ml")),
    "gr": ShapeSchema((), (), ("np",)),
    "rd": ShapeSchema(("r",), (), ()),
    "tr": ShapeSchema(TRANSFORM_PROPS, TRANSFORM_OPTIONAL, ()),
}
SUPPORTED_SHAPES = tuple(SHAPE_SCHEMAS)
SHAPE_NAMES = {
    "sh": "Path", "el": "Ellipse", "rc": "Rectangle", "sr": "PolyStar",
    "fl": "Fill", "st": "Stroke", "gf": "Gradient Fill", "gs": "Gradient Stroke",
    "gr": "Group", "rd": "Rounded Corners", "tr": "Transform",
}
# properties holding RGBA colors; the gradient "g" property also mixes in stop offsets
COLOR_PROPS = {"fl": ("c",), "st": ("c",), "gf": ("g",), "gs": ("g",)}

LAYER_DEFAULTS = {"st": 0, "bm": 0}


def _default_transform_value(name: str):
    return {"p": ((0, 0), False), "a": ((0, 0), False), "s": ((100, 100), False),
            "r": ((0,), True), "o": ((100,), True)}[name]


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class BezierPath:
    vertices: tuple[tuple[float, float], ...]
    in_tangents: tuple[tuple[float, float], ...]
    out_tangents: tuple[tuple[float, float], ...]
    closed: bool = False
    extras: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not len(self.vertices) == len(self.in_tangents) == len(self.out_tangents):
            raise SchemaError("path vertex/tangent counts differ")

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class EaseHandle:
    """One side of an easing curve; x/y hold one entry per value dimension."""

    x: tuple[float, ...]
    y: tuple[float, ...]
    scalar: bool = False

    def point(self, dim: int = 0) -> tuple[float, float]:
        k = min(dim, len(self.x) - 1)
        return self.x[k], self.y[k]

    def __len__(self):
        return len(self.x)


@dataclass(frozen=True)
class Keyframe:
    t: float
    s: Any = None  # tuple of numbers, BezierPath, or None
    o: EaseHandle | None = None
    i: EaseHandle | None = None
    hold: Any = None
    scalar: bool = False
    extras: Mapping[str, Any] = field(default_factory=dict)

    @property
    def has_ease(self) -> bool:
        return self.o is not None and self.i is not None


@dataclass(frozen=True)
class AnimatedProperty:
    value: Any = None  # static value: tuple of numbers or BezierPath
    keyframes: tuple[Keyframe, ...] = ()
    scalar: bool = False
    hex_color: bool = False
    implicit: bool = False
    extras: Mapping[str, Any] = field(default_factory=dict)

    @property
    def animated(self) -> bool:
        return bool(self.keyframes)

    @property
    def expression(self):
        return self.extras.get("x")

    @property
    def dimensionality(self) -> int:
        v = self.keyframes[0].s if self.keyframes else self.value
        if isinstance(v, BezierPath) or v is None:
            return 1
        return len(v)

    @classmethod
    def static(cls, value, **kw) -> "AnimatedProperty":
        if is_number(value):
            return cls(value=(value,), scalar=True, **kw)
        return cls(value=value if isinstance(value, BezierPath) else tuple(value), **kw)


@dataclass(frozen=True)
class Transform:
    position: AnimatedProperty
    anchor_point: AnimatedProperty
    scale: AnimatedProperty
    rotation: AnimatedProperty
    opacity: AnimatedProperty
    skew: AnimatedProperty | None = None
    skew_axis: AnimatedProperty | None = None
    extras: Mapping[str, Any] = field(default_factory=dict)

    _KEYS = {"p": "position", "a": "anchor_point", "s": "scale", "r": "rotation",
             "o": "opacity", "sk": "skew", "sa": "skew_axis"}

    def prop(self, key: str) -> AnimatedProperty | None:
        return getattr(self, self._KEYS[key])

    def props(self) -> dict[str, AnimatedProperty]:
        out = {}
        for key in TRANSFORM_PROPS + TRANSFORM_OPTIONAL:
            p = self.prop(key)
            if p is not None:
                out[key] = p
        return out


@dataclass(frozen=True)
class ShapeItem:
    ty: str
    props: Mapping[str, AnimatedProperty] = field(default_factory=dict)
    fields: Mapping[str, Any] = field(default_factory=dict)
    items: tuple["ShapeItem", ...] = ()
    gradient_points: int | None = None
    extras: Mapping[str, Any] = field(default_factory=dict)

    @property
    def supported(self) -> bool:
        return self.ty in SHAPE_SCHEMAS

    @property
    def name(self) -> str:
        return SHAPE_NAMES.get(self.ty, self.ty)


@dataclass(frozen=True)
class Layer:
    layer_type: LayerType
    in_point: float
    out_point: float
    transform: Transform
    shapes: tuple[ShapeItem, ...] = ()
    start_time: float | None = None
    blend_mode: int | None = None
    index: int | None = None
    parent_index: int | None = None
    extras: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Asset:
    id: Any
    layers: tuple[Layer, ...] | None = None
    extras: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class AnimationMeta:
    version: str | None
    frame_rate: float
    in_point: float
    out_point: float
    width: float | None = None
    height: float | None = None
    three_d: int | None = None

    @property
    def frames(self) -> float:
        return self.out_point - self.in_point

    @property
    def duration(self) -> float:
        return (self.out_point - self.in_point) / self.frame_rate


@dataclass(frozen=True)
class LottieDocument:
    meta: AnimationMeta
    layers: tuple[Layer, ...] = ()
    assets: tuple[Asset, ...] | None = None
    extras: Mapping[str, Any] = field(default_factory=dict)


# ---------------------------------------------------------------- parsing


class _Parser:
    def __init__(self, strict: bool):
        self.strict = strict

    # -- leaves

    def number(self, v, where: str):
        if not is_number(v):
            raise SchemaError(f"{where}: expected a number, got {v!r}")
        return v

    def numbers(self, v, where: str) -> tuple:
        if not isinstance(v, list) or not all(is_number(x) for x in v):
            raise SchemaError(f"{where}: expected a list of numbers")
        return tuple(v)

    def points(self, v, where: str) -> tuple:
        if not isinstance(v, list):
            raise SchemaError(f"{where}: expected a list of points")
        out = []
        for p in v:
            if not (isinstance(p, list) and len(p) == 2 and all(is_number(c) for c in p)):
                raise SchemaError(f"{where}: expected [x, y] point, got {p!r}")
            out.append(tuple(p))
        return tuple(out)

    def path(self, raw, where: str) -> BezierPath:
        if not isinstance(raw, dict) or "v" not in raw:
            raise SchemaError(f"{where}: expected a bezier path object")
        known = {"v", "i", "o", "c"}
        c = raw.get("c", False)
        if not isinstance(c, bool):
            raise SchemaError(f"{where}.c: expected a boolean")
        v = self.points(raw["v"], where + ".v")
        i = self.points(raw.get("i", []), where + ".i")
        o = self.points(raw.get("o", []), where + ".o")
        if not len(v) == len(i) == len(o):
            raise SchemaError(f"{where}: |v|, |i| and |o| differ ({len(v)}, {len(i)}, {len(o)})")
        return BezierPath(v, i, o, c, {k: x for k, x in raw.items() if k not in known})

    # -- properties

    def handle(self, raw) -> EaseHandle | None:
        if not isinstance(raw, dict) or set(raw) != {"x", "y"}:
            return None
        x, y = raw["x"], raw["y"]
        if is_number(x) and is_number(y):
            return EaseHandle((x,), (y,), scalar=True)
        if (isinstance(x, list) and isinstance(y, list) and x and len(x) == len(y)
                and all(is_number(c) for c in x + y)):
            return EaseHandle(tuple(x), tuple(y))
        return None

    def keyframe(self, raw, where: str) -> Keyframe:
        if not isinstance(raw, dict) or "t" not in raw:
            raise SchemaError(f"{where}: keyframe needs a time 't'")
        t = self.number(raw["t"], where + ".t")
        extras = {k: v for k, v in raw.items() if k not in ("t", "s", "o", "i", "h")}
        s, scalar = None, False
        if "s" in raw:
            s, scalar = self.value(raw["s"], where + ".s", keyframe=True)
        o = self.handle(raw.get("o"))
        i = self.handle(raw.get("i"))
        if o is None or i is None or len(o) != len(i) or o.scalar != i.scalar:
            # keep malformed or one-sided handles verbatim
            o = i = None
            for k in ("o", "i"):
                if k in raw:
                    extras[k] = raw[k]
        return Keyframe(t, s, o, i, raw.get("h"), scalar, extras)

    def value(self, v, where: str, keyframe: bool = False):
        """Return (value, scalar_flag) for a static or keyframe value."""
        if is_number(v):
            return (v,), True
        if isinstance(v, list):
            if keyframe and len(v) == 1 and isinstance(v[0], dict):
                return self.path(v[0], where + "[0]"), False
            return self.numbers(v, where), False
        if isinstance(v, dict) and not keyframe:
            return self.path(v, where), False
        raise SchemaError(f"{where}: unsupported value {v!r}")

    def prop(self, raw, where: str) -> AnimatedProperty:
        if not isinstance(raw, dict) or "k" not in raw:
            raise SchemaError(f"{where}: expected an animatable property with 'k'")
        if raw.get("s") is True and "x" in raw and "y" in raw:
            raise UnsupportedFeature(f"{where}: split position components")
        extras = {k: v for k, v in raw.items() if k not in ("a", "k")}
        if self.strict and "x" in extras:
            raise UnsupportedFeature(f"{where}: After Effects expression")
        k = raw["k"]
        if isinstance(k, str):
            try:
                return AnimatedProperty(value=hex_to_color(k), hex_color=True, extras=extras)
            except ValueError:
                raise SchemaError(f"{where}: unsupported value {k!r}") from None
        if isinstance(k, list) and k and all(isinstance(e, dict) and "t" in e for e in k):
            kfs = tuple(self.keyframe(e, f"{where}.k[{n}]") for n, e in enumerate(k))
            for a, b in zip(kfs, kfs[1:]):
                if not b.t > a.t:
                    raise SchemaError(f"{where}: keyframe times not strictly increasing ({a.t}, {b.t})")
            if len(kfs) == 1:
                kf = kfs[0]
                if kf.s is None:
                    raise SchemaError(f"{where}: single keyframe without a value")
                log.warning("%s: single keyframe treated as static", where)
                return AnimatedProperty(value=kf.s, scalar=kf.scalar, extras=extras)
            return AnimatedProperty(keyframes=kfs, extras=extras)
        value, scalar = self.value(k, where + ".k")
        return AnimatedProperty(value=value, scalar=scalar, extras=extras)

    # -- containers

    def transform(self, raw, where: str) -> Transform:
        if raw is None:
            raw = {}
        if not isinstance(raw, dict):
            raise SchemaError(f"{where}: transform must be an object")
        kw = {}
        for key in TRANSFORM_PROPS:
            if key in raw:
                kw[key] = self.prop(raw[key], f"{where}.{key}")
            else:
                value, scalar = _default_transform_value(key)
                kw[key] = AnimatedProperty(value=value, scalar=scalar, implicit=True)
        for key in TRANSFORM_OPTIONAL:
            kw[key] = self.prop(raw[key], f"{where}.{key}") if key in raw else None
        extras = {k: v for k, v in raw.items() if k not in Transform._KEYS and k != "ty"}
        return Transform(kw["p"], kw["a"], kw["s"], kw["r"], kw["o"], kw["sk"], kw["sa"], extras)

    def shape(self, raw, where: str) -> ShapeItem:
        if not isinstance(raw, dict) or not isinstance(raw.get("ty"), str):
            raise SchemaError(f"{where}: shape item needs a string 'ty'")
        ty = raw["ty"]
        schema = SHAPE_SCHEMAS.get(ty)
        if schema is None:
            return ShapeItem(ty, extras={k: v for k, v in raw.items() if k != "ty"})
        if ty == "tr":
            tr = self.transform(raw, where)
            return ShapeItem("tr", props=tr.props(), extras=tr.extras)
        props, fields_, gp = {}, {}, None
        for key in schema.required + schema.optional:
            if key not in raw:
                if key in schema.required:
                    raise SchemaError(f"{where}: {SHAPE_NAMES[ty]} needs '{key}'")
                continue
            if key == "g":
                g = raw["g"]
                if not isinstance(g, dict) or set(g) != {"p", "k"} or not isinstance(g["p"], int):
                    raise SchemaError(f"{where}.g: gradient needs exactly 'p' and 'k'")
                gp = g["p"]
                props["g"] = self.prop(g["k"], where + ".g.k")
            else:
                props[key] = self.prop(raw[key], f"{where}.{key}")
        for key in schema.fields:
            if key in raw:
                fields_[key] = raw[key]
        items = ()
        known = set(schema.required) | set(schema.optional) | set(schema.fields) | {"ty"}
        if ty == "gr":
            it = raw.get("it", [])
            if not isinstance(it, list):
                raise SchemaError(f"{where}.it: expected a list")
            items = tuple(self.shape(s, f"{where}.it[{n}]") for n, s in enumerate(it))
            known.add("it")
        extras = {k: v for k, v in raw.items() if k not in known}
        return ShapeItem(ty, props, fields_, items, gp, extras)

    def layer(self, raw, where: str) -> Layer:
        if not isinstance(raw, dict):
            raise SchemaError(f"{where}: layer must be an object")
        for key in ("ty", "ip", "op"):
            if key not in raw:
                raise SchemaError(f"{where}: layer needs '{key}'")
        ty = raw["ty"]
        if ty == 5:
            raise UnsupportedFeature(f"{where}: text layers")
        try:
            layer_type = LayerType(self.number(ty, where + ".ty"))
        except ValueError:
            raise UnsupportedFeature(f"{where}: layer type {ty!r}") from None
        ip = self.number(raw["ip"], where + ".ip")
        op = self.number(raw["op"], where + ".op")
        if op < ip:
            raise SchemaError(f"{where}: out point {op} before in point {ip}")
        known = {"ty", "ip", "op", "st", "bm", "ind", "parent", "ks"}
        shapes = ()
        if layer_type == LayerType.SHAPE:
            known.add("shapes")
            raw_shapes = raw.get("shapes", [])
            if not isinstance(raw_shapes, list):
                raise SchemaError(f"{where}.shapes: expected a list")
            shapes = tuple(self.shape(s, f"{where}.shapes[{n}]") for n, s in enumerate(raw_shapes))
        elif raw.get("shapes"):
            raise SchemaError(f"{where}: only shape layers carry shapes")
        opt = {}
        for key in ("st", "bm", "ind", "parent"):
            if key in raw:
                opt[key] = self.number(raw[key], f"{where}.{key}")
        return Layer(
            layer_type, ip, op, self.transform(raw.get("ks"), where + ".ks"), shapes,
            opt.get("st"), opt.get("bm"), opt.get("ind"), opt.get("parent"),
            {k: v for k, v in raw.items() if k not in known},
        )

    def layers(self, raw, where: str) -> tuple[Layer, ...]:
        if not isinstance(raw, list):
            raise SchemaError(f"{where}: expected a list of layers")
        return tuple(self.layer(x, f"{where}[{n}]") for n, x in enumerate(raw))

    def document(self, raw) -> LottieDocument:
        if not isinstance(raw, dict):
            raise SchemaError("document root must be an object")
        missing = [k for k in ("fr", "ip", "op", "layers") if k not in raw]
        if missing:
            raise SchemaError(f"missing required keys: {', '.join(missing)}")
        fr = self.number(raw["fr"], "fr")
        ip = self.number(raw["ip"], "ip")
        op = self.number(raw["op"], "op")
        if fr <= 0:
            raise SchemaError("frame rate must be positive")
        if op < ip:
            raise SchemaError(f"out point {op} before in point {ip}")
        version = raw.get("v")
        if version is not None and not isinstance(version, str):
            raise SchemaError("'v' must be a string")
        dims = {}
        for key in ("w", "h"):
            if key in raw:
                dims[key] = self.number(raw[key], key)
                if dims[key] <= 0:
                    raise SchemaError(f"'{key}' must be positive")
        ddd = raw.get("ddd")
        if ddd is not None and not is_number(ddd):
            raise SchemaError("'ddd' must be 0 or 1")
        if ddd == 1 and self.strict:
            raise UnsupportedFeature("3D documents (ddd=1)")
        meta = AnimationMeta(version, fr, ip, op, dims.get("w"), dims.get("h"), ddd)
        assets = None
        if "assets" in raw:
            if not isinstance(raw["assets"], list):
                raise SchemaError("assets: expected a list")
            assets = tuple(self.asset(a, f"assets[{n}]") for n, a in enumerate(raw["assets"]))
        known = {"v", "fr", "ip", "op", "w", "h", "ddd", "layers", "assets"}
        return LottieDocument(meta, self.layers(raw["layers"], "layers"), assets,
                              {k: v for k, v in raw.items() if k not in known})

    def asset(self, raw, where: str) -> Asset:
        if not isinstance(raw, dict) or "id" not in raw:
            raise SchemaError(f"{where}: asset needs an 'id'")
        layers = self.layers(raw["layers"], where + ".layers") if "layers" in raw else None
        return Asset(raw["id"], layers, {k: v for k, v in raw.items() if k not in ("id", "layers")})


def _reject_constant(name):
    raise JsonSyntaxError(f"invalid JSON constant {name}")


def loads(text: str | bytes):
    """json.loads that rejects NaN/Infinity and wraps errors in JsonSyntaxError."""
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise JsonSyntaxError(str(exc)) from None


def parse_obj(obj, strict: bool = False) -> LottieDocument:
    return _Parser(strict).document(obj)


def parse(json_text: str | bytes, strict: bool = False) -> LottieDocument:
    """Parse Lottie JSON text into a typed document.

    Raises JsonSyntaxError for invalid JSON, SchemaError for schema violations and
    UnsupportedFeature for features outside the supported subset (expressions and
    3D documents only in strict mode).
    """
    return parse_obj(loads(json_text), strict)


def load(path, strict: bool = False) -> LottieDocument:
    with open(path, "rb") as fh:
        return parse(fh.read(), strict)


# ---------------------------------------------------------------- serialization


class _Writer:
    def __init__(self, canonical: bool):
        self.canonical = canonical

    def path(self, p: BezierPath) -> dict:
        out = {"i": [list(x) for x in p.in_tangents], "o": [list(x) for x in p.out_tangents],
               "v": [list(x) for x in p.vertices], "c": p.closed}
        out.update(p.extras)
        return out

    def value(self, v, scalar: bool):
        if isinstance(v, BezierPath):
            return self.path(v)
        if scalar and len(v) == 1:
            return v[0]
        return list(v)

    def handle(self, h: EaseHandle) -> dict:
        if h.scalar:
            return {"x": h.x[0], "y": h.y[0]}
        return {"x": list(h.x), "y": list(h.y)}

    def keyframe(self, kf: Keyframe, last: bool) -> dict:
        out: dict[str, Any] = {"t": kf.t}
        if kf.s is not None:
            out["s"] = [self.path(kf.s)] if isinstance(kf.s, BezierPath) else self.value(kf.s, kf.scalar)
        extras = dict(kf.extras)
        if self.canonical and last:
            # handles on the final keyframe never take part in interpolation
            extras.pop("o", None)
            extras.pop("i", None)
        elif kf.has_ease:
            out["o"] = self.handle(kf.o)
            out["i"] = self.handle(kf.i)
        if kf.hold is not None:
            out["h"] = kf.hold
        out.update(extras)
        return out

    def prop(self, p: AnimatedProperty) -> dict:
        if p.animated:
            n = len(p.keyframes)
            out = {"a": 1, "k": [self.keyframe(kf, j == n - 1) for j, kf in enumerate(p.keyframes)]}
        elif p.hex_color and not self.canonical:
            out = {"a": 0, "k": color_to_hex(p.value)}
        else:
            out = {"a": 0, "k": self.value(p.value, p.scalar)}
        out.update(p.extras)
        return out

    def transform_props(self, props: Mapping[str, AnimatedProperty]) -> dict:
        return {k: self.prop(p) for k, p in props.items() if self.canonical or not p.implicit}

    def transform(self, tr: Transform) -> dict:
        out = self.transform_props(tr.props())
        out.update(tr.extras)
        return out

    def shape(self, s: ShapeItem) -> dict:
        out: dict[str, Any] = {"ty": s.ty}
        if s.ty == "tr":
            out.update(self.transform_props(s.props))
        else:
            for key, p in s.props.items():
                if key == "g":
                    out["g"] = {"p": s.gradient_points, "k": self.prop(p)}
                else:
                    out[key] = self.prop(p)
        out.update(s.fields)
        if s.ty == "gr":
            out["it"] = [self.shape(x) for x in s.items]
        out.update(s.extras)
        return out

    def layer(self, layer: Layer) -> dict:
        out: dict[str, Any] = {"ty": int(layer.layer_type)}
        for key, v in (("ind", layer.index), ("parent", layer.parent_index)):
            if v is not None:
                out[key] = v
        out["ip"] = layer.in_point
        out["op"] = layer.out_point
        for key, v in (("st", layer.start_time), ("bm", layer.blend_mode)):
            if v is not None:
                out[key] = v
            elif self.canonical:
                out[key] = LAYER_DEFAULTS[key]
        out["ks"] = self.transform(layer.transform)
        if layer.layer_type == LayerType.SHAPE:
            out["shapes"] = [self.shape(s) for s in layer.shapes]
        out.update(layer.extras)
        return out

    def document(self, doc: LottieDocument) -> dict:
        m = doc.meta
        out: dict[str, Any] = {}
        if m.version is not None:
            out["v"] = m.version
        out["fr"] = m.frame_rate
        out["ip"] = m.in_point
        out["op"] = m.out_point
        if m.width is not None:
            out["w"] = m.width
        if m.height is not None:
            out["h"] = m.height
        if m.three_d is not None:
            out["ddd"] = m.three_d
        elif self.canonical:
            out["ddd"] = 0
        if doc.assets is not None:
            out["assets"] = [self.asset(a) for a in doc.assets]
        out["layers"] = [self.layer(x) for x in doc.layers]
        out.update(doc.extras)
        return out

    def asset(self, a: Asset) -> dict:
        out: dict[str, Any] = {"id": a.id}
        out.update(a.extras)
        if a.layers is not None:
            out["layers"] = [self.layer(x) for x in a.layers]
        return out


def to_obj(doc: LottieDocument, canonical: bool = False) -> dict:
    """Plain JSON object for `doc`.

    With ``canonical=True`` implicit defaults are written out, hex colors are
    expanded to channels and handles on final keyframes are dropped.
    """
    return _Writer(canonical).document(doc)


def serialize(doc: LottieDocument, indent: int | None = None) -> str:
    seps = (",", ":") if indent is None else (",", ": ")
    return json.dumps(to_obj(doc), separators=seps, indent=indent, ensure_ascii=False, allow_nan=False)


def canonical_form(obj, digits: int = DEFAULT_DIGITS):
    """Hashable, order-free form of a JSON value with numbers at `digits` precision."""
    fmt = f".{digits}g"

    def walk(o):
        t = type(o)
        if t is float or t is int:
            return ("n", float(format(float(o), fmt)))
        if t is dict:
            return ("{}", frozenset([(k, walk(v)) for k, v in o.items()]))
        if t is list or t is tuple:
            return ("[]", tuple([walk(v) for v in o]))
        if o is None or t is bool or t is str:
            return o
        if is_number(o):
            return ("n", round_sig(float(o), digits))
        raise TypeError(f"not a JSON value: {o!r}")

    return walk(obj)


def canonical(doc: LottieDocument, digits: int = DEFAULT_DIGITS):
    return canonical_form(to_obj(doc, canonical=True), digits)


def _json_equal(a, b, fmt: str) -> bool:
    ta, tb = type(a), type(b)
    if (ta is float or ta is int) and (tb is float or tb is int):
        return a == b or float(format(float(a), fmt)) == float(format(float(b), fmt))
    if ta is dict:
        return tb is dict and a.keys() == b.keys() and all(_json_equal(a[k], b[k], fmt) for k in a)
    if ta is list:
        return tb is list and len(a) == len(b) and all(_json_equal(x, y, fmt) for x, y in zip(a, b))
    return ta is tb and a == b


def canonical_equal(a: LottieDocument, b: LottieDocument, digits: int = DEFAULT_DIGITS) -> bool:
    """True iff both documents agree after canonicalization.

    Same outcome as comparing :func:`canonical` forms, without building them.
    """
    return _json_equal(to_obj(a, canonical=True), to_obj(b, canonical=True), f".{digits}g")


# ---------------------------------------------------------------- traversal


def iter_properties(doc: LottieDocument) -> Iterator[tuple[str, AnimatedProperty]]:
    """Yield (path, property) for every animatable property, depth first."""

    def shapes(items, prefix):
        for n, s in enumerate(items):
            here = f"{prefix}[{n}]"
            for key, p in s.props.items():
                yield f"{here}.{key}", p
            if s.ty == "gr":
                yield from shapes(s.items, here + ".it")

    def layers(ls, prefix):
        for n, layer in enumerate(ls):
            here = f"{prefix}[{n}]"
            for key, p in layer.transform.props().items():
                yield f"{here}.ks.{key}", p
            yield from shapes(layer.shapes, here + ".shapes")

    for n, a in enumerate(doc.assets or ()):
        if a.layers:
            yield from layers(a.layers, f"assets[{n}].layers")
    yield from layers(doc.layers, "layers")


_STEP_RE = re.compile(r"\.?([A-Za-z_][A-Za-z0-9_]*)|\[(\d+)\]")


def resolve(doc: LottieDocument, path: str):
    """Follow a key path such as ``layers[0].shapes[1].it[0].c`` through the model."""
    node: Any = doc
    pos = 0
    while pos < len(path):
        m = _STEP_RE.match(path, pos)
        if not m:
            raise KeyError(f"bad path syntax at {path[pos:]!r}")
        pos = m.end()
        name, index = m.group(1), m.group(2)
        try:
            if index is not None:
                node = node[int(index)]
            elif isinstance(node, LottieDocument):
                node = {"layers": node.layers, "assets": node.assets}[name]
            elif isinstance(node, Asset):
                node = {"layers": node.layers}[name]
            elif isinstance(node, Layer):
                node = {"ks": node.transform, "shapes": node.shapes}[name]
            elif isinstance(node, Transform):
                node = node.prop(name)
            elif isinstance(node, ShapeItem):
                node = node.items if name == "it" else node.props[name]
            else:
                raise KeyError(name)
        except (KeyError, IndexError, TypeError):
            raise KeyError(f"path {path!r} does not resolve at {m.group(0)!r}") from None
        if node is None:
            raise KeyError(f"path {path!r} does not resolve at {m.group(0)!r}")
    return node


def with_layers(doc: LottieDocument, layers) -> LottieDocument:
    return replace(doc, layers=tuple(layers))

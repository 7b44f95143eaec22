"""Document <-> token stream conversion.

Layout, depth first::

    <|M|> meta tags [extras] [<|assets|> <|ASSET|> ... <|ASSET_END|> ...]
      <|LAYER|> layer tags <|LAYER_KS|> p a s r o [tags]
        <|ITEM_xx|> required props [tags]   (groups: [tags] <|GR_START|> ... <|GR_END|>)
    <|END|>

A property is ``<|KS_STATIC|> value`` or
``<|PROP_ANIMATED|> <|PROP_KF_START|> (<|t|> T value [<|h|> v] [<|ease|> ...])* <|PROP_KF_END|>``.
Keys without a dedicated tag are written ``<|X|> "key" value``; property, path
and keyframe extras always use their own prefix so they never blur into the
enclosing entry list.
"""
from __future__ import annotations

from typing import Any

from ..errors import MalformedStream, SchemaError, Truncated, UnsupportedFeature
from ..model import (
    SHAPE_SCHEMAS, TRANSFORM_OPTIONAL, TRANSFORM_PROPS, AnimatedProperty, Asset, BezierPath,
    EaseHandle, Keyframe, Layer, LayerType, LottieDocument, ShapeItem, parse_obj,
)
from ..numeric import color_to_hex, is_number, parse_number, quantize as quantize_number
from .presets import PRESETS, ease_preset_lookup
from .tokens import N, S, T, Token, TokenKind, TokenStream
from .vocab import TAG_NAMES

QUANT_DIGITS = 4
DEFAULT_EASE = ((0.333,), (0.0,), (0.667,), (1.0,))  # o.x, o.y, i.x, i.y


# ---------------------------------------------------------------- encoding


class _Encoder:
    def __init__(self, quantize: bool, presets: bool):
        self.quantize = quantize
        self.presets = presets
        self.out: list[Token] = []

    def emit(self, *toks: Token):
        self.out.extend(toks)

    def num(self, x, exact: bool = False):
        if self.quantize and not exact:
            x = quantize_number(x, QUANT_DIGITS)
        self.out.append(N(x))

    def run(self, xs):
        for x in xs:
            self.num(x)

    # -- generic JSON

    def json(self, v):
        if isinstance(v, bool):
            self.emit(S("true" if v else "false"))
        elif v is None:
            self.emit(S("null"))
        elif is_number(v):
            self.num(v)
        elif isinstance(v, str):
            self.emit(T(v))
        elif isinstance(v, (list, tuple)):
            self.emit(S("LIST"))
            for x in v:
                self.json(x)
            self.emit(S("LIST_END"))
        elif isinstance(v, dict):
            self.emit(S("OBJ"))
            for k, x in v.items():
                self.entry(k, x)
            self.emit(S("OBJ_END"))
        else:
            raise TypeError(f"not a JSON value: {v!r}")

    def key(self, k: str):
        if k in TAG_NAMES:
            self.emit(S(k))
        else:
            self.emit(S("X"), T(k))

    def entry(self, k: str, v):
        self.key(k)
        self.json(v)

    def extras(self, marker: str, extras):
        for k, v in extras.items():
            self.emit(S(marker), T(k))
            self.json(v)

    # -- properties

    def path(self, p: BezierPath):
        for tag, pts in (("i", p.in_tangents), ("o", p.out_tangents), ("v", p.vertices)):
            self.emit(S(tag))
            for pt in pts:
                self.run(pt)
        if p.closed:
            self.emit(S("c"))
        self.extras("PATH_X", p.extras)

    def value(self, v, scalar: bool, in_keyframe: bool):
        if isinstance(v, BezierPath):
            self.path(v)
            return
        if in_keyframe:
            if scalar:
                self.emit(S("SCALAR"))
            elif len(v) == 0:
                self.emit(S("ARRAY"))
        elif len(v) == 0 or (len(v) == 1 and not scalar):
            self.emit(S("ARRAY"))
        self.run(v)

    def ease(self, kf: Keyframe):
        o, i = kf.o, kf.i
        if not o.scalar and (o.x, o.y, i.x, i.y) == DEFAULT_EASE:
            self.emit(S("ease"))
            return
        self.emit(S("ease"))
        if o.scalar:
            self.emit(S("SCALAR"))
        for d in range(len(o)):
            (ox, oy), (ix, iy) = o.point(d), i.point(d)
            pid = ease_preset_lookup((ox, oy), (ix, iy)) if self.presets else None
            if pid is not None:
                self.emit(S(f"EASE_{pid}"))
            else:
                self.run((ix, iy, ox, oy))

    def keyframes(self, kfs: tuple[Keyframe, ...]):
        exact_times = False
        if self.quantize:
            times = [quantize_number(kf.t, QUANT_DIGITS) for kf in kfs]
            # never let rounding merge or reorder keyframes
            exact_times = any(b <= a for a, b in zip(times, times[1:]))
        last = len(kfs) - 1
        for n, kf in enumerate(kfs):
            self.emit(S("t"))
            self.num(kf.t, exact=exact_times)
            if kf.s is not None:
                self.value(kf.s, kf.scalar, in_keyframe=True)
            if kf.hold is not None:
                self.emit(S("h"))
                self.json(kf.hold)
            extras = kf.extras
            if n == last:
                extras = {k: v for k, v in extras.items() if k not in ("o", "i")}
            self.extras("X", extras)
            if n != last and kf.has_ease:
                self.ease(kf)

    def prop(self, p: AnimatedProperty):
        if p.animated:
            self.emit(S("PROP_ANIMATED"), S("PROP_KF_START"))
            self.keyframes(p.keyframes)
            self.emit(S("PROP_KF_END"))
        elif p.hex_color:
            self.emit(S("KS_STATIC"), T(color_to_hex(p.value)))
        else:
            self.emit(S("KS_STATIC"))
            self.value(p.value, p.scalar, in_keyframe=False)
        self.extras("PROP_X", p.extras)

    # -- containers

    def shape(self, s: ShapeItem):
        if not s.supported:
            raise UnsupportedFeature(f"shape kind {s.ty!r} cannot be tokenized")
        self.emit(S(f"ITEM_{s.ty}"))
        schema = SHAPE_SCHEMAS[s.ty]
        if s.ty == "gr":
            for k, v in s.fields.items():
                self.entry(k, v)
            self.extras_tagged(s.extras)
            self.emit(S("GR_START"))
            for child in s.items:
                self.shape(child)
            self.emit(S("GR_END"))
            return
        for key in schema.required:
            if key == "g":
                self.emit(S("g"))
                self.num(s.gradient_points, exact=True)
            self.prop(s.props[key])
        for key in schema.optional:
            if key in s.props:
                self.emit(S(key))
                self.prop(s.props[key])
        for k, v in s.fields.items():
            self.entry(k, v)
        self.extras_tagged(s.extras)

    def extras_tagged(self, extras):
        for k, v in extras.items():
            self.entry(k, v)

    def layer(self, layer: Layer):
        self.emit(S("LAYER"), S("ty"))
        self.num(int(layer.layer_type))
        self.emit(S("ip"))
        self.num(layer.in_point)
        self.emit(S("op"))
        self.num(layer.out_point)
        for tag, v in (("st", layer.start_time), ("bm", layer.blend_mode),
                       ("ind", layer.index), ("parent", layer.parent_index)):
            if v is not None:
                self.emit(S(tag))
                self.num(v)
        self.extras_tagged(layer.extras)
        self.emit(S("LAYER_KS"))
        tr = layer.transform
        for key in TRANSFORM_PROPS:
            self.prop(tr.prop(key))
        for key in TRANSFORM_OPTIONAL:
            if tr.prop(key) is not None:
                self.emit(S(key))
                self.prop(tr.prop(key))
        self.extras_tagged(tr.extras)
        for s in layer.shapes:
            self.shape(s)

    def asset(self, a: Asset):
        self.emit(S("ASSET"), S("id"))
        self.json(a.id)
        self.extras_tagged(a.extras)
        if a.layers is not None:
            self.emit(S("layers"))
            for layer in a.layers:
                self.layer(layer)
        self.emit(S("ASSET_END"))

    def document(self, doc: LottieDocument):
        m = doc.meta
        self.emit(S("M"))
        if m.version is not None:
            self.emit(S("v"), T(m.version))
        for tag, v in (("fr", m.frame_rate), ("ip", m.in_point), ("op", m.out_point),
                       ("w", m.width), ("h", m.height), ("ddd", m.three_d)):
            if v is not None:
                self.emit(S(tag))
                self.num(v)
        self.extras_tagged(doc.extras)
        if doc.assets is not None:
            self.emit(S("assets"))
            for a in doc.assets:
                self.asset(a)
        for layer in doc.layers:
            self.layer(layer)
        self.emit(S("END"))


def tokenize(doc: LottieDocument, quantize: bool = False, presets: bool = False) -> TokenStream:
    """Encode `doc` as a token stream.

    With `quantize`, float literals are rounded to 4 significant digits; with
    `presets`, easing segments matching a catalog curve become one token.
    """
    enc = _Encoder(quantize, presets)
    enc.document(doc)
    return TokenStream(enc.out)


# ---------------------------------------------------------------- decoding

_ITEM_STARTS = frozenset(f"ITEM_{ty}" for ty in SHAPE_SCHEMAS)
_ITEM_BOUNDARY = _ITEM_STARTS | {"GR_END", "LAYER", "ASSET_END", "END"}


class _Decoder:
    def __init__(self, tokens: tuple[Token, ...]):
        self.toks = tokens
        self.pos = 0

    # -- cursor

    def peek(self) -> Token:
        if self.pos >= len(self.toks):
            raise Truncated(f"stream ended after {len(self.toks)} tokens")
        return self.toks[self.pos]

    def take(self) -> Token:
        pos = self.pos
        if pos >= len(self.toks):
            raise Truncated(f"stream ended after {len(self.toks)} tokens")
        self.pos = pos + 1
        return self.toks[pos]

    def at(self, *names: str) -> bool:
        if self.pos >= len(self.toks):
            raise Truncated(f"stream ended after {len(self.toks)} tokens")
        tok = self.toks[self.pos]
        return tok.kind is TokenKind.STRUCTURAL and tok.value in names

    def at_kind(self, kind: TokenKind) -> bool:
        return self.peek().kind is kind

    def expect(self, name: str):
        tok = self.take()
        if tok.kind is not TokenKind.STRUCTURAL or tok.value != name:
            self.fail(f"expected <|{name}|>", tok)

    def fail(self, msg: str, tok: Token | None = None):
        where = f" at token {self.pos - 1}" if tok is not None else ""
        got = f", got {tok.render()}" if tok is not None else ""
        raise MalformedStream(f"{msg}{got}{where}")

    def number(self):
        pos = self.pos
        if pos >= len(self.toks):
            raise Truncated(f"stream ended after {len(self.toks)} tokens")
        self.pos = pos + 1
        tok = self.toks[pos]
        if tok.kind is not TokenKind.NUMERIC:
            self.fail("expected a numeric literal", tok)
        try:
            return parse_number(tok.value)
        except ValueError:
            self.fail("bad numeric literal", tok)

    def text(self) -> str:
        tok = self.take()
        if tok.kind is not TokenKind.TEXT:
            self.fail("expected a string literal", tok)
        return tok.value

    def run(self) -> list:
        out = []
        while self.at_kind(TokenKind.NUMERIC):
            out.append(self.number())
        return out

    # -- generic JSON

    def json(self):
        tok = self.peek()
        if tok.kind is TokenKind.NUMERIC:
            return self.number()
        if tok.kind is TokenKind.TEXT:
            return self.text()
        name = self.take().value
        if name in ("true", "false"):
            return name == "true"
        if name == "null":
            return None
        if name == "LIST":
            out = []
            while not self.at("LIST_END"):
                out.append(self.json())
            self.take()
            return out
        if name == "OBJ":
            obj: dict[str, Any] = {}
            while not self.at("OBJ_END"):
                self.entry(obj)
            self.take()
            return obj
        if name in ("KS_STATIC", "PROP_ANIMATED"):
            self.pos -= 1
            return self.prop()
        self.fail("expected a value", tok)

    def put(self, obj: dict, key: str, value):
        if key in obj:
            raise MalformedStream(f"duplicate key {key!r}")
        obj[key] = value

    def entry(self, obj: dict):
        tok = self.take()
        if tok.kind is not TokenKind.STRUCTURAL:
            self.fail("expected a key", tok)
        if tok.value == "X":
            key = self.text()
        elif tok.value in TAG_NAMES:
            key = tok.value
        else:
            self.fail("expected a key", tok)
        self.put(obj, key, self.json())

    def prefixed_extras(self, marker: str, obj: dict):
        while self.at(marker):
            self.take()
            key = self.text()
            self.put(obj, key, self.json())

    # -- properties

    def points(self) -> list:
        xs = self.run()
        if len(xs) % 2:
            raise MalformedStream("odd number of path coordinates")
        return [[xs[k], xs[k + 1]] for k in range(0, len(xs), 2)]

    def path(self) -> dict:
        out: dict[str, Any] = {}
        for tag in ("i", "o", "v"):
            self.expect(tag)
            out[tag] = self.points()
        if not len(out["i"]) == len(out["o"]) == len(out["v"]):
            raise MalformedStream("path i/o/v lengths differ")
        out["c"] = False
        if self.at("c"):
            self.take()
            out["c"] = True
        self.prefixed_extras("PATH_X", out)
        return out

    def static_value(self):
        if self.at_kind(TokenKind.TEXT):
            return self.text()
        if self.at("i"):
            return self.path()
        if self.at("ARRAY"):
            self.take()
            return self.run()
        xs = self.run()
        return xs[0] if len(xs) == 1 else xs

    def keyframe_value(self):
        """Returns (present, value)."""
        if self.at("i"):
            return True, [self.path()]
        if self.at("SCALAR"):
            self.take()
            xs = self.run()
            if len(xs) != 1:
                raise MalformedStream("scalar keyframe value needs exactly one literal")
            return True, xs[0]
        if self.at("ARRAY"):
            self.take()
            return True, self.run()
        xs = self.run()
        return (True, xs) if xs else (False, None)

    def ease(self, kf: dict):
        self.expect("ease")
        scalar = False
        if self.at("SCALAR"):
            self.take()
            scalar = True
        dims = []
        while True:
            tok = self.peek()
            if tok.kind is TokenKind.NUMERIC:
                quad = [self.number() for _ in range(4)]
                dims.append(quad)
            elif tok.kind is TokenKind.STRUCTURAL and tok.value.startswith("EASE_"):
                self.take()
                pid = int(tok.value[5:])
                if pid not in PRESETS:
                    self.fail("reserved easing preset", tok)
                (ox, oy), (ix, iy) = PRESETS[pid]
                dims.append([ix, iy, ox, oy])
            else:
                break
        if not dims:
            if scalar:
                raise MalformedStream("scalar ease without parameters")
            (ox,), (oy,), (ix,), (iy,) = DEFAULT_EASE
            dims = [[ix, iy, ox, oy]]
        if scalar:
            if len(dims) != 1:
                raise MalformedStream("scalar ease with several dimensions")
            ix, iy, ox, oy = dims[0]
            kf["o"], kf["i"] = {"x": ox, "y": oy}, {"x": ix, "y": iy}
        else:
            kf["o"] = {"x": [d[2] for d in dims], "y": [d[3] for d in dims]}
            kf["i"] = {"x": [d[0] for d in dims], "y": [d[1] for d in dims]}

    def keyframe(self) -> dict:
        self.expect("t")
        kf: dict[str, Any] = {"t": self.number()}
        present, value = self.keyframe_value()
        if present:
            kf["s"] = value
        if self.at("h"):
            self.take()
            kf["h"] = self.json()
        self.prefixed_extras("X", kf)
        if self.at("ease"):
            self.ease(kf)
        return kf

    def prop(self) -> dict:
        tok = self.take()
        if tok.kind is TokenKind.STRUCTURAL and tok.value == "KS_STATIC":
            out = {"a": 0, "k": self.static_value()}
        elif tok.kind is TokenKind.STRUCTURAL and tok.value == "PROP_ANIMATED":
            self.expect("PROP_KF_START")
            kfs = []
            while not self.at("PROP_KF_END"):
                kfs.append(self.keyframe())
            self.take()
            out = {"a": 1, "k": kfs}
        else:
            self.fail("expected a property", tok)
        self.prefixed_extras("PROP_X", out)
        return out

    # -- containers

    def entries_until(self, obj: dict, stop) -> dict:
        while True:
            tok = self.peek()
            if tok.kind is TokenKind.STRUCTURAL and tok.value in stop:
                return obj
            self.entry(obj)

    def shape(self) -> dict:
        tok = self.take()
        if tok.kind is not TokenKind.STRUCTURAL or tok.value not in _ITEM_STARTS:
            self.fail("expected a shape item", tok)
        ty = tok.value[len("ITEM_"):]
        raw: dict[str, Any] = {"ty": ty}
        if ty == "gr":
            self.entries_until(raw, {"GR_START"})
            self.take()
            items = []
            while not self.at("GR_END"):
                items.append(self.shape())
            self.take()
            self.put(raw, "it", items)
            return raw
        for key in SHAPE_SCHEMAS[ty].required:
            if key == "g":
                self.expect("g")
                raw["g"] = {"p": self.number(), "k": self.prop()}
            else:
                raw[key] = self.prop()
        return self.entries_until(raw, _ITEM_BOUNDARY)

    def layer(self) -> dict:
        self.expect("LAYER")
        raw = self.entries_until({}, {"LAYER_KS"})
        self.take()
        ks = {key: self.prop() for key in TRANSFORM_PROPS}
        self.entries_until(ks, _ITEM_BOUNDARY)
        self.put(raw, "ks", ks)
        shapes = []
        while self.at(*_ITEM_STARTS):
            shapes.append(self.shape())
        if raw.get("ty") == int(LayerType.SHAPE):
            self.put(raw, "shapes", shapes)
        elif shapes:
            raise MalformedStream("shape items inside a non-shape layer")
        return raw

    def layers(self, stop: str) -> list:
        out = []
        while not self.at(stop):
            out.append(self.layer())
        return out

    def asset(self) -> dict:
        self.expect("ASSET")
        raw: dict[str, Any] = {}
        while not self.at("ASSET_END"):
            if self.at("layers"):
                self.take()
                self.put(raw, "layers", self.layers("ASSET_END"))
            else:
                self.entry(raw)
        self.take()
        return raw

    def document(self) -> dict:
        self.expect("M")
        raw: dict[str, Any] = {}
        while not self.at("LAYER", "END"):
            if self.at("assets"):
                self.take()
                assets = []
                while self.at("ASSET"):
                    assets.append(self.asset())
                self.put(raw, "assets", assets)
            else:
                self.entry(raw)
        self.put(raw, "layers", self.layers("END"))
        self.take()
        if self.pos != len(self.toks):
            raise MalformedStream(f"{len(self.toks) - self.pos} tokens after <|END|>")
        return raw


def detokenize_obj(stream: TokenStream) -> dict:
    """Rebuild the plain JSON object encoded by `stream`."""
    return _Decoder(tuple(stream)).document()


def detokenize(stream: TokenStream) -> LottieDocument:
    raw = detokenize_obj(stream)
    try:
        return parse_obj(raw)
    except SchemaError as exc:
        raise MalformedStream(f"decoded document is invalid: {exc}") from None


def token_count(doc: LottieDocument, quantize: bool = False, numerics: str = "literal",
                presets: bool = False) -> int:
    """Length of the token stream for `doc`.

    numerics="literal" counts every numeric literal as one token, "digits"
    spells literals character by character (sign, digits, point, exponent) and
    "none" counts structural tokens only.
    """
    stream = tokenize(doc, quantize, presets)
    if numerics == "literal":
        return len(stream)
    if numerics == "digits":
        return sum(len(t.value) if t.kind is TokenKind.NUMERIC else 1 for t in stream)
    if numerics == "none":
        return stream.structural_count()
    raise ValueError(f"unknown numerics mode {numerics!r}")

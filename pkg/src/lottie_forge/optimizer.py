"""Size-reducing rewrite of Lottie documents that keeps rendering unchanged.

Passes, in order: expression removal, field pruning, significant-digit rounding
(color values exempt), hex packing of static opaque colors, version/metadata
normalization.
"""
from __future__ import annotations

import copy
import math
import re
from dataclasses import dataclass, field

from .model import LayerType, LottieDocument, parse, parse_obj, serialize, to_obj
from .numeric import color_to_hex, hex_convertible, is_number, round_sig

DEFAULT_PRUNE = ("nm", "mn", "hd", "ix", "cix")
NAME_FIELDS = ("nm", "mn")
_COLOR_KEYS = {"fl": "c", "st": "c", "gf": "g", "gs": "g"}
_VERSION_RE = re.compile(r"\d+")


@dataclass(frozen=True)
class OptimizeConfig:
    remove_expressions: bool = True
    prune_fields: tuple[str, ...] = DEFAULT_PRUNE
    significant_digits: int = 4
    hex_colors: bool = True
    update_metadata: bool = True

    def __post_init__(self):
        if self.significant_digits < 1:
            raise ValueError("significant_digits must be >= 1")
        object.__setattr__(self, "prune_fields", tuple(self.prune_fields))


@dataclass(frozen=True)
class SizeReport:
    bytes_before: int
    bytes_after: int
    ratio: float = field(init=False)
    reduction: float = field(init=False)

    def __post_init__(self):
        ratio = self.bytes_after / self.bytes_before if self.bytes_before else 1.0
        object.__setattr__(self, "ratio", ratio)
        object.__setattr__(self, "reduction", 1.0 - ratio)


def size_report(before: str | bytes, after: str | bytes) -> SizeReport:
    def nbytes(x):
        return len(x.encode("utf-8")) if isinstance(x, str) else len(x)

    return SizeReport(nbytes(before), nbytes(after))


# ---------------------------------------------------------------- passes


def _is_prop(node) -> bool:
    return isinstance(node, dict) and "k" in node


def remove_expressions(node):
    """Drop string `x` expressions from every property object, in place."""
    if isinstance(node, dict):
        if _is_prop(node) and isinstance(node.get("x"), str):
            del node["x"]
        for v in node.values():
            remove_expressions(v)
    elif isinstance(node, list):
        for v in node:
            remove_expressions(v)


def _prune_layers(layers: list, fields: frozenset) -> list:
    if "hd" not in fields:
        return layers
    parents = {lay.get("parent") for lay in layers if isinstance(lay, dict)}
    out = []
    for lay in layers:
        if isinstance(lay, dict) and lay.get("hd") is True:
            if lay.get("ind") is None or lay["ind"] not in parents:
                continue
            # still drives its children's transforms
            lay["ty"] = int(LayerType.NULL)
            lay.pop("shapes", None)
        out.append(lay)
    return out


def _prune_shapes(items: list, fields: frozenset) -> list:
    if "hd" not in fields:
        return items
    return [s for s in items if not (isinstance(s, dict) and s.get("hd") is True)]


def prune_fields(node, fields: frozenset):
    if isinstance(node, dict):
        if isinstance(node.get("layers"), list):
            node["layers"] = _prune_layers(node["layers"], fields)
        for key in ("shapes", "it"):
            if isinstance(node.get(key), list):
                node[key] = _prune_shapes(node[key], fields)
        for key in [k for k in node if k in fields]:
            del node[key]
        for v in node.values():
            prune_fields(v, fields)
    elif isinstance(node, list):
        for v in node:
            prune_fields(v, fields)


def _round_tree(node, digits: int):
    if isinstance(node, float):
        return round_sig(node, digits)
    if isinstance(node, list):
        return [_round_tree(v, digits) for v in node]
    if isinstance(node, dict):
        if _is_prop(node) and isinstance(node["k"], list) and node["k"] and all(
                isinstance(kf, dict) and "t" in kf for kf in node["k"]):
            return _round_keyframed(node, digits)
        color_key = _COLOR_KEYS.get(node.get("ty")) if isinstance(node.get("ty"), str) else None
        return {k: v if k == color_key else _round_tree(v, digits) for k, v in node.items()}
    return node


def _round_time(t, digits: int):
    """Round a keyframe time unless that moves it across a frame boundary."""
    if not isinstance(t, float) or not math.isfinite(t):
        return t
    r = round_sig(t, digits)
    if math.floor(r) != math.floor(t) or math.ceil(r) != math.ceil(t):
        return t
    return r


def _round_keyframed(prop: dict, digits: int) -> dict:
    times = [kf["t"] for kf in prop["k"]]
    rounded = [_round_time(t, digits) for t in times]
    keep_times = any(b <= a for a, b in zip(rounded, rounded[1:]))
    out = {k: _round_tree(v, digits) for k, v in prop.items() if k != "k"}
    kfs = []
    for kf, t, r in zip(prop["k"], times, rounded):
        new = {k: _round_tree(v, digits) for k, v in kf.items()}
        new["t"] = t if keep_times else r
        kfs.append(new)
    out["k"] = kfs
    return out


def hex_pack_colors(node):
    """Rewrite static opaque fill/stroke colors as "#rrggbb", in place."""
    if isinstance(node, dict):
        if node.get("ty") in ("fl", "st") and _is_prop(node.get("c")):
            k = node["c"]["k"]
            if isinstance(k, list) and all(is_number(c) for c in k) and hex_convertible(k):
                node["c"]["k"] = color_to_hex(k)
        for v in node.values():
            hex_pack_colors(v)
    elif isinstance(node, list):
        for v in node:
            hex_pack_colors(v)


def normalize_version(v: str) -> str:
    parts = _VERSION_RE.findall(v)[:3]
    if not parts:
        return v
    return ".".join(str(int(p)) for p in parts + ["0"] * (3 - len(parts)))


def optimize_obj(obj: dict, cfg: OptimizeConfig = OptimizeConfig()) -> dict:
    obj = copy.deepcopy(obj)
    if cfg.remove_expressions:
        remove_expressions(obj)
    if cfg.prune_fields:
        prune_fields(obj, frozenset(cfg.prune_fields))
    obj = _round_tree(obj, cfg.significant_digits)
    if cfg.hex_colors:
        hex_pack_colors(obj)
    if cfg.update_metadata:
        if isinstance(obj.get("v"), str):
            obj["v"] = normalize_version(obj["v"])
        obj.pop("meta", None)
    return obj


def optimize(doc: LottieDocument, cfg: OptimizeConfig = OptimizeConfig()) -> LottieDocument:
    """Return the simplified copy of `doc`; the input is left untouched."""
    return parse_obj(optimize_obj(to_obj(doc), cfg))


def optimize_text(text: str, cfg: OptimizeConfig = OptimizeConfig()) -> tuple[str, SizeReport]:
    out = serialize(optimize(parse(text), cfg))
    return out, size_report(text, out)

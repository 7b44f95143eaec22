"""Number formatting, significant-digit rounding and color packing."""
from __future__ import annotations

import math
import re

NUMBER_RE = re.compile(r"-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][+-]?\d+)?\Z")


def is_number(x) -> bool:
    t = type(x)
    if t is float or t is int:
        return True
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def round_sig(x: float, digits: int = 4) -> float:
    """Round to `digits` significant figures (0.00123456 -> 0.001235)."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if x == 0 or not math.isfinite(x):
        return float(x)
    return float(f"{x:.{digits}g}")


def quantize(x, digits: int = 4):
    """Round floats to significant digits; integers pass through unchanged."""
    if isinstance(x, float):
        return round_sig(x, digits)
    return x


def format_number(x) -> str:
    """Shortest text that parses back to the same number."""
    t = type(x)
    if t is int:
        return str(x)
    if t is float and x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    if isinstance(x, bool) or not is_number(x):
        raise TypeError(f"not a number: {x!r}")
    if isinstance(x, int):
        return str(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite number: {x!r}")
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def parse_number(text: str):
    if text.isdigit() and (text == "0" or text[0] != "0"):
        return int(text)
    if NUMBER_RE.match(text) is None:
        raise ValueError(f"not a numeric literal: {text!r}")
    if "." in text or "e" in text or "E" in text:
        return float(text)
    return int(text)


def color_to_hex(rgba) -> str:
    return "#" + "".join(f"{round(c * 255):02x}" for c in rgba[:3])


def hex_to_color(text: str) -> tuple[float, float, float, float]:
    h = text.lstrip("#")
    if len(h) == 3:
        h = "".join(c * 2 for c in h)
    if len(h) != 6 or any(c not in "0123456789abcdefABCDEF" for c in h):
        raise ValueError(f"not a hex color: {text!r}")
    return tuple(int(h[k:k + 2], 16) / 255 for k in (0, 2, 4)) + (1.0,)


def hex_convertible(value) -> bool:
    """True for a 4-component opaque color with channels in [0, 1]."""
    if len(value) != 4 or value[3] != 1:
        return False
    return all(is_number(c) and 0 <= c <= 1 for c in value)

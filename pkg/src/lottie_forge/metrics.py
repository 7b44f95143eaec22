"""Structural comparison of two JSON documents over flattened key paths."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .errors import JsonSyntaxError, LottieError
from .model import loads, parse_obj
from .numeric import is_number, round_sig

KEY_WEIGHT = 0.7
VALUE_WEIGHT = 0.3
MATCH_DIGITS = 4
DEFAULT_THRESHOLDS = (2000, 10000)
BUCKETS = ("Simple", "Medium", "Complex")

FlatMap = dict[str, Any]


def flatten_obj(obj) -> FlatMap:
    """Map every leaf to its key path, e.g. ``layers[0].shapes[1].ty``.

    Empty objects and arrays below the root are leaves themselves.
    """
    out: FlatMap = {}

    def walk(node, path: str):
        if isinstance(node, dict) and (node or not path):
            for k, v in node.items():
                walk(v, f"{path}.{k}" if path else k)
        elif isinstance(node, list) and (node or not path):
            for n, v in enumerate(node):
                walk(v, f"{path}[{n}]")
        else:
            out[path] = node

    walk(obj, "")
    return out


def flatten(json_text: str | bytes) -> FlatMap:
    return flatten_obj(loads(json_text))


_STEP = re.compile(r"([^.\[\]]+)|\[(\d+)\]")


def _steps(path: str) -> list:
    steps = []
    for name, index in _STEP.findall(path):
        steps.append(int(index) if index else name)
    return steps


def unflatten(flat: Mapping[str, Any]):
    """Inverse of :func:`flatten_obj` for maps it produced."""
    if not flat:
        return {}
    root: Any = None

    def container(step):
        return [] if isinstance(step, int) else {}

    for path, value in flat.items():
        steps = _steps(path)
        if root is None:
            root = container(steps[0])
        node = root
        for step, nxt in zip(steps, steps[1:] + [None]):
            child = value if nxt is None else container(nxt)
            if isinstance(step, int):
                while len(node) <= step:
                    node.append(None)
                if node[step] is None:
                    node[step] = child
                node = node[step]
            else:
                node = node.setdefault(step, child)
    return root


# ---------------------------------------------------------------- scoring


@dataclass(frozen=True)
class StructReport:
    common: int
    missing: int
    extra: int
    key_f1: float
    value_match: float
    numeric_mae: float
    json_struct_sim: float
    valid: bool = True


def values_match(a, b, digits: int = MATCH_DIGITS) -> bool:
    if is_number(a) and is_number(b):
        return round_sig(float(a), digits) == round_sig(float(b), digits)
    if is_number(a) or is_number(b):
        return False
    return type(a) is type(b) and a == b


def compare(gt: Mapping[str, Any], pred: Mapping[str, Any], valid: bool = True) -> StructReport:
    k_gt, k_pred = set(gt), set(pred)
    common = k_gt & k_pred
    if not k_gt and not k_pred:
        return StructReport(0, 0, 0, 1.0, 1.0, 0.0, 1.0, valid)
    key_f1 = 2 * len(common) / (len(k_gt) + len(k_pred))
    value_match = sum(values_match(gt[k], pred[k]) for k in common) / len(common) if common else 0.0
    numeric = [k for k in common if is_number(gt[k]) and is_number(pred[k])]
    mae = sum(abs(gt[k] - pred[k]) for k in numeric) / len(numeric) if numeric else 0.0
    sim = KEY_WEIGHT * key_f1 + VALUE_WEIGHT * value_match
    return StructReport(len(common), len(k_gt - k_pred), len(k_pred - k_gt),
                        key_f1, value_match, float(mae), sim, valid)


@dataclass(frozen=True)
class Validity:
    ok: bool
    error: str | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validity_check(json_text: str | bytes) -> Validity:
    try:
        parse_obj(loads(json_text))
    except JsonSyntaxError as exc:
        return Validity(False, "SyntaxError", str(exc))
    except LottieError as exc:
        return Validity(False, type(exc).__name__, str(exc))
    return Validity(True)


def score_texts(gt_text: str | bytes, pred_text: str | bytes) -> StructReport:
    """Compare two JSON texts; an unparseable prediction scores zero."""
    gt = flatten(gt_text)
    valid = validity_check(pred_text).ok
    try:
        pred = flatten(pred_text)
    except JsonSyntaxError:
        return StructReport(0, len(gt), 0, 0.0, 0.0, 0.0, 0.0, False)
    return compare(gt, pred, valid)


# ---------------------------------------------------------------- stratification


def bucket_of(count: int, thresholds: tuple[int, int] = DEFAULT_THRESHOLDS) -> str:
    lo, hi = thresholds
    if count < lo:
        return BUCKETS[0]
    if count < hi:
        return BUCKETS[1]
    return BUCKETS[2]


def stratify(counts: Mapping[str, int] | Iterable[tuple[str, int]],
             thresholds: tuple[int, int] = DEFAULT_THRESHOLDS) -> dict[str, list[str]]:
    """Partition items by token count into Simple / Medium / Complex.

    Buckets are half open: [0, lo), [lo, hi), [hi, inf).
    """
    if thresholds[0] > thresholds[1]:
        raise ValueError("thresholds must be ascending")
    items = counts.items() if isinstance(counts, Mapping) else counts
    out: dict[str, list[str]] = {b: [] for b in BUCKETS}
    for name, count in items:
        out[bucket_of(count, thresholds)].append(name)
    return out

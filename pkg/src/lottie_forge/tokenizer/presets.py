"""Catalog of common easing curves that can be emitted as a single token."""
from __future__ import annotations

PRESET_TOLERANCE = 1e-3

# id -> (p1, p2); ids 9-14 are reserved vocabulary slots without a curve
PRESETS: dict[int, tuple[tuple[float, float], tuple[float, float]]] = {
    1: ((0.0, 0.0), (1.0, 1.0)),          # linear
    2: ((0.333, 0.0), (0.667, 1.0)),      # ease in-out
    3: ((0.167, 0.167), (0.833, 0.833)),  # near linear
    4: ((0.167, 0.0), (0.833, 1.0)),      # strong ease in-out
    5: ((0.167, 0.0), (0.667, 1.0)),
    6: ((0.66, 0.0), (0.34, 1.0)),
    7: ((0.333, 0.0), (0.833, 1.0)),
    8: ((0.167, 0.167), (0.667, 1.0)),
}
PRESET_NAMES = {1: "Linear", 2: "Ease In-Out", 3: "Near-Linear", 4: "Strong Ease In-Out"}


def ease_preset_lookup(p1, p2, tol: float = PRESET_TOLERANCE) -> int | None:
    """Preset id whose control points match (p1, p2) within `tol` per component."""
    coords = (*p1, *p2)
    for pid, (q1, q2) in PRESETS.items():
        if all(abs(a - b) <= tol for a, b in zip(coords, (*q1, *q2))):
            return pid
    return None

#!/usr/bin/env python3
"""Regenerate the bundled test fixtures under tests/fixtures/.

    python3 scripts/make_fixtures.py

Output is deterministic; rerunning overwrites the same files byte for byte.
"""
from __future__ import annotations

import json
import random
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from lottie_forge.synth import SHAPE_KINDS, SynthConfig, random_document  # noqa: E402
from lottie_forge.tokenizer.presets import PRESETS  # noqa: E402

FIX = ROOT / "tests" / "fixtures"
CORPUS_SIZE = 50


def dump(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, separators=(",", ":")) + "\n", encoding="utf-8")


MINIMAL = {"v": "5.9.5", "fr": 30, "ip": 0, "op": 90, "w": 512, "h": 512, "ddd": 0, "layers": []}


def bounce() -> dict:
    rotation = {"a": 1, "k": [
        {"t": 30, "s": [-113.4], "o": {"x": [0.3], "y": [-2.79]}, "i": {"x": [0.78], "y": [-1.79]}},
        {"t": 46, "s": [-109.5], "o": {"x": [0.35], "y": [0.16]}, "i": {"x": [0.83], "y": [0.87]}},
    ]}
    group = {"ty": "gr", "nm": "Bar", "it": [
        {"ty": "rc", "d": 1, "p": {"a": 0, "k": [0, 0]}, "s": {"a": 0, "k": [80, 20]}, "r": {"a": 0, "k": 4}},
        {"ty": "fl", "c": {"a": 0, "k": [0.2, 0.4, 0.9, 1]}, "o": {"a": 0, "k": 100}, "r": 1},
        {"ty": "tr", "p": {"a": 0, "k": [0, 0]}, "a": {"a": 0, "k": [0, 0]}, "s": {"a": 0, "k": [100, 100]},
         "r": rotation, "o": {"a": 0, "k": 100}},
    ], "np": 2}
    layer = {"ddd": 0, "ind": 1, "ty": 4, "nm": "Bounce", "ks": {
        "o": {"a": 0, "k": 100}, "r": {"a": 0, "k": 0}, "p": {"a": 0, "k": [256, 256, 0]},
        "a": {"a": 0, "k": [0, 0, 0]}, "s": {"a": 0, "k": [100, 100, 100]}},
        "ao": 0, "shapes": [group], "ip": 0, "op": 60, "st": 0, "bm": 0}
    return {"v": "5.9.5", "fr": 30, "ip": 0, "op": 60, "w": 512, "h": 512, "nm": "bounce", "ddd": 0,
            "assets": [], "layers": [layer]}


# ---------------------------------------------------------------- coverage bookkeeping


def _walk(node):
    yield node
    if isinstance(node, dict):
        for v in node.values():
            yield from _walk(v)
    elif isinstance(node, list):
        for v in node:
            yield from _walk(v)


def features(doc: dict) -> set[str]:
    out: set[str] = set()
    preset_pairs = set(PRESETS.values())
    for node in _walk(doc):
        if not isinstance(node, dict):
            continue
        if isinstance(node.get("ty"), str):
            out.add("shape:" + node["ty"])
        if "a" in node and "k" in node:
            out.add("animated" if node["a"] == 1 else "static")
        if "o" in node and "i" in node and isinstance(node.get("o"), dict) and "x" in node["o"]:
            ox, oy, ix, iy = (node["o"]["x"], node["o"]["y"], node["i"]["x"], node["i"]["y"])
            first = lambda v: v[0] if isinstance(v, list) else v  # noqa: E731
            pair = ((first(ox), first(oy)), (first(ix), first(iy)))
            out.add("ease:preset" if pair in preset_pairs else "ease:custom")
    return out


REQUIRED = {f"shape:{k}" for k in SHAPE_KINDS} | {"shape:tr", "animated", "static", "ease:preset", "ease:custom"}


def corpus() -> list[tuple[str, dict]]:
    docs = []
    seen: set[str] = set()
    for n in range(CORPUS_SIZE):
        rng = random.Random(1000 + n)
        cfg = SynthConfig(max_layers=rng.randint(1, 6), max_items=rng.randint(2, 6),
                          max_depth=rng.randint(1, 3), max_keyframes=rng.randint(2, 8),
                          animate_prob=rng.choice((0.2, 0.4, 0.6)), verbose=True)
        doc = random_document(rng, cfg)
        seen |= features(doc)
        docs.append((f"anim_{n:03d}.json", doc))
    missing = REQUIRED - seen
    if missing:
        raise SystemExit(f"corpus misses features: {sorted(missing)}")
    return docs


# ---------------------------------------------------------------- stats corpus

# (fr, ip, op): durations chosen to hit every bucket and each boundary exactly
STATS_TIMINGS = [
    (30, 0, 15), (24, 0, 12), (30, 0, 30), (25, 0, 40), (60, 0, 119),
    (30, 0, 60), (30, 10, 85), (24, 0, 72), (30, 0, 90), (25, 0, 100),
    (30, 0, 120), (29.97, 0, 140), (60, 0, 299), (30, 0, 150), (24, 0, 200),
    (30, 0, 240), (30, 0, 299), (30, 0, 300), (25, 0, 400), (60, 30, 900),
]
EDGES = (1, 2, 3, 5, 10)
LABELS = ("0-1s", "1-2s", "2-3s", "3-5s", "5-10s", "10+s")


def expected_bucket(seconds: float) -> str:
    return LABELS[sum(seconds >= e for e in EDGES)]


def stats_corpus() -> tuple[list[tuple[str, dict]], dict]:
    docs = []
    hist = dict.fromkeys(LABELS, 0)
    frames = durations = 0.0
    for n, (fr, ip, op) in enumerate(STATS_TIMINGS):
        doc = random_document(5000 + n, SynthConfig(max_layers=2, max_items=3, verbose=n % 2 == 0))
        doc.update(fr=fr, ip=ip, op=op)
        for layer in doc["layers"]:
            layer["ip"], layer["op"] = ip, op
        docs.append((f"clip_{n:02d}.json", doc))
        d = (op - ip) / fr
        hist[expected_bucket(d)] += 1
        frames += op - ip
        durations += d
    expect = {"files": len(docs), "histogram": hist, "total_frames": frames,
              "total_duration": round(durations, 9)}
    return docs, expect


# ---------------------------------------------------------------- svg samples

SVG = {
    "rect.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">'
                '<rect x="10" y="20" width="30" height="40" fill="#ff0000"/></svg>',
    "circle.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">'
                  '<circle cx="50" cy="50" r="10"/></svg>',
    "scene.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 200 200">'
                 '<defs><linearGradient id="g" x1="0" y1="0" x2="1" y2="0">'
                 '<stop offset="0" stop-color="#fff"/><stop offset="1" stop-color="navy"/>'
                 '</linearGradient></defs>'
                 '<g transform="translate(20,10) rotate(15)" opacity="0.8">'
                 '<rect x="0" y="0" width="50" height="30" rx="6" fill="url(#g)" stroke="black" stroke-width="2"/>'
                 '<ellipse cx="80" cy="40" rx="20" ry="12" fill="rgb(0,128,0)"/></g>'
                 '<path d="M10 150 C40 100 80 200 110 150 S170 120 190 170 A20 30 10 0 1 150 190 Z" '
                 'fill="none" stroke="#333"/>'
                 '<polygon points="120,20 160,40 140,80" fill="orange" fill-rule="evenodd"/>'
                 '<polyline points="10,100 30,110 50,95" stroke="blue" fill="none"/>'
                 '<line x1="60" y1="120" x2="100" y2="130" stroke="red"/></svg>',
    "filter.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">'
                  '<defs><filter id="f"><feGaussianBlur stdDeviation="2"/></filter></defs>'
                  '<rect x="10" y="10" width="20" height="20" filter="url(#f)"/></svg>',
    "text.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100"><text x="5" y="50">hi</text></svg>',
    "broken.svg": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100"><rect x="1"</svg>',
}


def main() -> None:
    for sub in ("corpus", "stats", "svg"):
        shutil.rmtree(FIX / sub, ignore_errors=True)
        (FIX / sub).mkdir(parents=True)
    dump(FIX / "minimal.json", MINIMAL)
    dump(FIX / "bounce.json", bounce())
    for name, doc in corpus():
        dump(FIX / "corpus" / name, doc)
    dump(FIX / "corpus" / "bounce.json", bounce())
    dump(FIX / "corpus" / "minimal.json", MINIMAL)
    docs, expect = stats_corpus()
    for name, doc in docs:
        dump(FIX / "stats" / name, doc)
    (FIX / "stats_expected.json").write_text(json.dumps(expect, indent=2) + "\n", encoding="utf-8")
    for name, text in SVG.items():
        (FIX / "svg" / name).write_text(text + "\n", encoding="utf-8")
    print(f"wrote fixtures under {FIX}")


if __name__ == "__main__":
    main()

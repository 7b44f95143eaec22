"""Seeded generator of random, valid Lottie documents.

Used for fixtures and randomized property tests.  Every animated property gets
at least two keyframes; all supported shape kinds, layer types, easing forms
(default, catalog, custom, per-dimension, scalar, hold) and asset kinds appear
with nonzero probability.  ``verbose=True`` adds editor metadata (names, match
names, indices, hidden flags, expressions) of the kind exporters write.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .tokenizer.presets import PRESETS

SHAPE_KINDS = ("sh", "el", "rc", "sr", "fl", "st", "gf", "gs", "gr", "rd")


@dataclass
class SynthConfig:
    max_layers: int = 3
    max_items: int = 4
    max_depth: int = 2
    max_keyframes: int = 5
    animate_prob: float = 0.4
    verbose: bool = False
    assets: bool = True
    float_times: float = 0.2  # probability of non-integer keyframe times


class _Gen:
    def __init__(self, rng: random.Random, cfg: SynthConfig, frames: tuple[float, float]):
        self.rng = rng
        self.cfg = cfg
        self.ip, self.op = frames
        self.counter = 0

    # -- leaves

    def f(self, lo: float, hi: float) -> float:
        return self.rng.uniform(lo, hi)

    def num(self, lo: float, hi: float):
        # mostly full-precision floats, some integers
        if self.rng.random() < 0.2:
            return self.rng.randint(int(lo), int(hi))
        return self.f(lo, hi)

    def name(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix} {self.counter}"

    def decorate(self, obj: dict, prefix: str, match: str | None = None) -> dict:
        if self.cfg.verbose:
            obj["nm"] = self.name(prefix)
            if match:
                obj["mn"] = match
            obj["hd"] = False
        return obj

    # -- easing

    def handle_pair(self, dims: int, scalar: bool):
        mode = self.rng.random()
        if mode < 0.3:
            (ox, oy), (ix, iy) = (0.333, 0.0), (0.667, 1.0)
            pairs = [((ox, oy), (ix, iy))] * dims
        elif mode < 0.6:
            pairs = [PRESETS[self.rng.randint(1, 8)]] * dims
        else:
            pairs = [((self.f(0, 1), self.f(-3, 3)), (self.f(0, 1), self.f(-3, 3)))
                     for _ in range(dims)]
        if scalar:
            (ox, oy), (ix, iy) = pairs[0]
            return {"x": ox, "y": oy}, {"x": ix, "y": iy}
        if self.rng.random() < 0.5:
            pairs = pairs[:1]  # one curve shared by all dimensions
        o = {"x": [p[0][0] for p in pairs], "y": [p[0][1] for p in pairs]}
        i = {"x": [p[1][0] for p in pairs], "y": [p[1][1] for p in pairs]}
        return o, i

    def times(self, n: int) -> list:
        span = max(self.op - self.ip, n)
        if self.rng.random() < self.cfg.float_times:
            pts = sorted(self.rng.sample(range(1, 10 * int(span)), n))
            return [self.ip + p / 10 + self.f(0, 0.01) for p in pts]
        pts = sorted(self.rng.sample(range(0, int(span) + 1), n))
        return [int(self.ip) + p for p in pts]

    # -- properties

    def prop(self, make, dims: int, scalar: bool = False, animate: bool | None = None) -> dict:
        if animate is None:
            animate = self.rng.random() < self.cfg.animate_prob
        out: dict = {"a": 0}
        if not animate:
            v = make()
            out["k"] = v[0] if scalar else v
        else:
            out["a"] = 1
            n = self.rng.randint(2, self.cfg.max_keyframes)
            kfs = []
            scalar_handles = scalar and self.rng.random() < 0.3
            for j, t in enumerate(self.times(n)):
                kf: dict = {"t": t, "s": make()}
                last = j == n - 1
                if not last or self.rng.random() < 0.3:
                    if self.rng.random() < 0.1 and not last:
                        kf["h"] = 1
                    else:
                        kf["o"], kf["i"] = self.handle_pair(dims, scalar_handles)
                kfs.append(kf)
            out["k"] = kfs
        if self.cfg.verbose:
            out["ix"] = self.rng.randint(1, 12)
            if self.rng.random() < 0.05:
                out["x"] = "var $bm_rt;\n$bm_rt = value;"
        return out

    def vec(self, dims: int, lo: float, hi: float, scalar: bool = False, animate=None) -> dict:
        return self.prop(lambda: [self.num(lo, hi) for _ in range(dims)], dims, scalar, animate)

    def scalar(self, lo: float, hi: float, animate=None) -> dict:
        return self.vec(1, lo, hi, scalar=True, animate=animate)

    def color(self) -> dict:
        if self.rng.random() < 0.05:
            return {"a": 0, "k": "#%02x%02x%02x" % tuple(self.rng.randrange(256) for _ in range(3))}
        return self.prop(lambda: [self.f(0, 1), self.f(0, 1), self.f(0, 1), 1], 4)

    def path_value(self, n: int, closed: bool) -> dict:
        return {
            "i": [[self.num(-50, 50), self.num(-50, 50)] for _ in range(n)],
            "o": [[self.num(-50, 50), self.num(-50, 50)] for _ in range(n)],
            "v": [[self.num(0, 512), self.num(0, 512)] for _ in range(n)],
            "c": closed,
        }

    def path_prop(self) -> dict:
        n = self.rng.randint(1, 6)
        closed = self.rng.random() < 0.6
        if self.rng.random() < self.cfg.animate_prob:
            nk = self.rng.randint(2, self.cfg.max_keyframes)
            kfs = []
            for j, t in enumerate(self.times(nk)):
                kf = {"t": t, "s": [self.path_value(n, closed)]}
                if j < nk - 1:
                    kf["o"], kf["i"] = self.handle_pair(1, False)
                kfs.append(kf)
            return {"a": 1, "k": kfs}
        return {"a": 0, "k": self.path_value(n, closed)}

    def transform(self, item: bool) -> dict:
        tr: dict = {}
        for key, make in (("p", lambda: self.vec(2, 0, 512)), ("a", lambda: self.vec(2, -50, 50)),
                          ("s", lambda: self.vec(2, 0, 200)), ("r", lambda: self.scalar(-360, 360)),
                          ("o", lambda: self.scalar(0, 100))):
            if item or self.rng.random() < 0.85:
                tr[key] = make()
        if self.rng.random() < 0.15:
            tr["sk"] = self.scalar(-30, 30)
            tr["sa"] = self.scalar(-90, 90)
        if item:
            tr["ty"] = "tr"
            self.decorate(tr, "Transform")
        return tr

    # -- shapes

    def gradient(self) -> dict:
        n = self.rng.randint(2, 4)

        def make():
            stops = sorted(self.f(0, 1) for _ in range(n))
            k = []
            for s in stops:
                k += [s, self.f(0, 1), self.f(0, 1), self.f(0, 1)]
            if self.rng.random() < 0.3:
                for s in stops:
                    k += [s, self.f(0, 1)]
            return k

        # keep one stop layout across keyframes
        layout = make()
        value = {"a": 0, "k": layout}
        if self.rng.random() < self.cfg.animate_prob:
            kfs = []
            for j, t in enumerate(self.times(2)):
                kf = {"t": t, "s": [c if k % 4 == 0 else self.f(0, 1) for k, c in enumerate(layout)]}
                if j == 0:
                    kf["o"], kf["i"] = self.handle_pair(1, False)
                kfs.append(kf)
            value = {"a": 1, "k": kfs}
        return {"p": n, "k": value}

    def shape(self, kind: str, depth: int) -> dict:
        r = self.rng
        s: dict = {"ty": kind}
        if kind == "sh":
            s["ks"] = self.path_prop()
            s["d"] = 1
        elif kind in ("el", "rc"):
            s["p"] = self.vec(2, 0, 512)
            s["s"] = self.vec(2, 1, 300)
            if kind == "rc":
                s["r"] = self.scalar(0, 40)
            s["d"] = r.choice((1, 3))
        elif kind == "sr":
            s["sy"] = r.choice((1, 2))
            s["p"] = self.vec(2, 0, 512)
            s["or"] = self.scalar(10, 200)
            s["os"] = self.scalar(0, 100)
            s["r"] = self.scalar(-180, 180)
            s["pt"] = self.scalar(3, 12)
            if s["sy"] == 1:
                s["ir"] = self.scalar(5, 100)
                s["is"] = self.scalar(0, 100)
            s["d"] = 1
        elif kind == "fl":
            s["c"] = self.color()
            s["o"] = self.scalar(0, 100)
            s["r"] = r.choice((1, 2))
        elif kind == "st":
            s["c"] = self.color()
            s["o"] = self.scalar(0, 100)
            s["w"] = self.scalar(0.5, 20)
            s["lc"], s["lj"] = r.choice((1, 2, 3)), r.choice((1, 2, 3))
            if s["lj"] == 1:
                s["ml"] = r.choice((4, 10))
        elif kind in ("gf", "gs"):
            s["o"] = self.scalar(0, 100)
            s["s"] = self.vec(2, -200, 200)
            s["e"] = self.vec(2, -200, 200)
            s["g"] = self.gradient()
            s["t"] = r.choice((1, 2))
            if s["t"] == 2:
                s["h"] = self.scalar(0, 100)
                s["a"] = self.scalar(-180, 180)
            if kind == "gs":
                s["w"] = self.scalar(0.5, 20)
                s["lc"], s["lj"] = r.choice((1, 2, 3)), r.choice((1, 2, 3))
            else:
                s["r"] = r.choice((1, 2))
        elif kind == "rd":
            s["r"] = self.scalar(0, 50)
        elif kind == "gr":
            items = self.items(depth + 1)
            items.append(self.transform(item=True))
            s["it"] = items
            s["np"] = len(items)
        if self.cfg.verbose:
            s["cix"] = 2
            s["ix"] = r.randint(1, 9)
        return self.decorate(s, kind.upper(), f"ADBE Vector {kind}")

    def items(self, depth: int) -> list[dict]:
        kinds = [k for k in SHAPE_KINDS if depth < self.cfg.max_depth or k != "gr"]
        n = self.rng.randint(1, self.cfg.max_items)
        return [self.shape(self.rng.choice(kinds), depth) for _ in range(n)]

    # -- layers

    def layer(self, ind: int, precomps: list[str], images: list[str], parents: list[int]) -> dict:
        r = self.rng
        choices = [4, 4, 4, 3, 1]
        if precomps:
            choices.append(0)
        if images:
            choices.append(2)
        ty = r.choice(choices)
        ip = self.ip
        out: dict = {"ddd": 0, "ind": ind, "ty": ty}
        if parents and r.random() < 0.3:
            out["parent"] = r.choice(parents)
        out["ks"] = self.transform(item=False)
        out["ao"] = 0
        out["ip"] = ip
        out["op"] = self.op
        out["st"] = 0
        out["bm"] = 0
        if ty == 4:
            out["shapes"] = self.items(0)
        elif ty == 1:
            out["sc"] = "#%02x%02x%02x" % tuple(r.randrange(256) for _ in range(3))
            out["sw"], out["sh"] = r.randint(1, 512), r.randint(1, 512)
        elif ty == 0:
            out["refId"] = r.choice(precomps)
            out["w"], out["h"] = 512, 512
        elif ty == 2:
            out["refId"] = r.choice(images)
        if self.cfg.verbose:
            out["sr"] = 1
        return self.decorate(out, "Layer")


def random_document(seed: int | random.Random, cfg: SynthConfig | None = None) -> dict:
    """A random valid Lottie document as a plain JSON object."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    cfg = cfg or SynthConfig()
    fr = rng.choice((24, 25, 30, 30, 60, 29.97))
    ip = 0
    op = rng.choice((30, 60, 90, 120, 150, 240, 300))
    g = _Gen(rng, cfg, (ip, op))
    doc: dict = {"v": rng.choice(("5.5.2", "5.7.4", "5.9.5", "5.12.1")), "fr": fr, "ip": ip, "op": op,
                 "w": rng.choice((256, 512, 1080)), "h": rng.choice((256, 512, 1080)), "ddd": 0}
    precomps: list[str] = []
    images: list[str] = []
    assets: list[dict] = []
    if cfg.assets and rng.random() < 0.3:
        sub = _Gen(rng, SynthConfig(max_layers=1, max_items=2, max_depth=1, verbose=cfg.verbose,
                                    assets=False, animate_prob=cfg.animate_prob,
                                    float_times=cfg.float_times), (ip, op))
        assets.append({"id": "comp_0", "layers": [sub.layer(1, [], [], [])]})
        precomps.append("comp_0")
    if cfg.assets and rng.random() < 0.15:
        assets.append({"id": "image_0", "w": 64, "h": 64, "u": "images/", "p": "img_0.png", "e": 0})
        images.append("image_0")
    if assets or rng.random() < 0.5:
        doc["assets"] = assets
    layers, parents = [], []
    for ind in range(1, rng.randint(0 if rng.random() < 0.05 else 1, cfg.max_layers) + 1):
        layer = g.layer(ind, precomps, images, parents)
        layers.append(layer)
        parents.append(ind)
    doc["layers"] = layers
    if rng.random() < 0.2:
        doc["markers"] = [{"tm": rng.randint(0, op), "cm": "intro", "dr": rng.randint(0, 30)}]
    if cfg.verbose:
        doc["nm"] = g.name("Comp")
        doc["meta"] = {"g": "LottieFiles AE 3.5.3", "a": "", "k": "", "d": "", "tc": ""}
    return doc


def keyframe_animation(n_keyframes: int, total_frames: int, seed: int = 0) -> dict:
    """One shape layer whose position animates through `n_keyframes` evenly spread keyframes.

    Keyframe values and easing depend only on `seed`, so documents differing in
    `total_frames` carry identical keyframe content.
    """
    rng = random.Random(seed)
    values = [[rng.uniform(0, 512), rng.uniform(0, 512)] for _ in range(n_keyframes)]
    eases = [((rng.uniform(0, 1), rng.uniform(-1, 2)), (rng.uniform(0, 1), rng.uniform(-1, 2)))
             for _ in range(n_keyframes - 1)]
    step = total_frames / (n_keyframes - 1)
    kfs = []
    for j, v in enumerate(values):
        kf = {"t": round(j * step), "s": v}
        if j < n_keyframes - 1:
            (ox, oy), (ix, iy) = eases[j]
            kf["o"], kf["i"] = {"x": [ox], "y": [oy]}, {"x": [ix], "y": [iy]}
        kfs.append(kf)
    layer = {"ty": 4, "ind": 1, "ip": 0, "op": total_frames, "st": 0,
             "ks": {"p": {"a": 1, "k": kfs}},
             "shapes": [{"ty": "el", "p": {"a": 0, "k": [0, 0]}, "s": {"a": 0, "k": [40, 40]}},
                        {"ty": "fl", "c": {"a": 0, "k": [1, 0, 0, 1]}, "o": {"a": 0, "k": 100}}]}
    return {"v": "5.9.5", "fr": 30, "ip": 0, "op": total_frames, "w": 512, "h": 512, "ddd": 0,
            "layers": [layer]}

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURES
from lottie_forge.errors import JsonSyntaxError, SchemaError, UnsupportedSvgFeature
from lottie_forge.model import canonical_equal, parse_obj, serialize, to_obj
from lottie_forge.svg_bridge import consistency_check, convert, parse_color, read_scene, svg_bbox
from lottie_forge.svg_path import arc_to_cubics, identity, parse_path_data, subpaths_bbox
from lottie_forge.tokenizer import detokenize, tokenize
from oracles import sampled_cubic_bbox, sampled_points_bbox

SVG_DIR = FIXTURES / "svg"
GOOD = ["rect.svg", "circle.svg", "scene.svg"]
coord = st.floats(-200, 200, allow_nan=False).map(lambda v: round(v, 2))
size = st.floats(1, 150, allow_nan=False).map(lambda v: round(v, 2))


def _svg(body: str, box: str = "0 0 100 100") -> str:
    return f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{box}">{body}</svg>'


def _items(doc):
    return to_obj(doc)["layers"][0]["shapes"][0]["it"]


def test_rect_example():
    doc = convert((SVG_DIR / "rect.svg").read_text())
    rc, fill = _items(doc)[0], _items(doc)[1]
    assert rc["ty"] == "rc"
    # center anchored: x + w/2, y + h/2
    assert rc["p"]["k"] == [10 + 30 / 2, 20 + 40 / 2] == [25, 40]
    assert rc["s"]["k"] == [30, 40]
    assert fill["ty"] == "fl" and fill["c"]["k"] == [1, 0, 0, 1]
    assert (doc.meta.in_point, doc.meta.out_point, doc.meta.frame_rate) == (0, 1, 30)


def test_circle_example():
    el = _items(convert((SVG_DIR / "circle.svg").read_text()))[0]
    assert el["ty"] == "el" and el["p"]["k"] == [50, 50] and el["s"]["k"] == [20, 20]


@pytest.mark.parametrize("name", ["filter.svg", "text.svg"])
def test_unsupported_features(name):
    with pytest.raises(UnsupportedSvgFeature):
        convert((SVG_DIR / name).read_text())


@pytest.mark.parametrize("body", [
    '<mask id="m"/>', '<rect width="1" height="1"><animate attributeName="x"/></rect>',
    '<defs><radialGradient id="r"/></defs><rect width="1" height="1" fill="url(#r)"/>',
    '<rect width="10%" height="1"/>', '<rect width="1" height="1" clip-path="url(#c)"/>',
])
def test_unsupported_inline(body):
    with pytest.raises(UnsupportedSvgFeature):
        convert(_svg(body))


def test_three_stop_gradient_rejected():
    stops = "".join(f'<stop offset="{o}" stop-color="red"/>' for o in (0, 0.5, 1))
    with pytest.raises(UnsupportedSvgFeature):
        convert(_svg(f'<defs><linearGradient id="g">{stops}</linearGradient></defs>'
                     '<rect width="5" height="5" fill="url(#g)"/>'))


def test_broken_xml():
    with pytest.raises(JsonSyntaxError):
        convert((SVG_DIR / "broken.svg").read_text())


def test_bad_viewbox():
    with pytest.raises(SchemaError):
        convert(_svg("", box="0 0 0 10"))


def test_colors():
    assert parse_color("#f00") == parse_color("#ff0000") == parse_color("red") == (1.0, 0.0, 0.0)
    assert parse_color("rgb(0,128,0)") == pytest.approx((0, 128 / 255, 0))


@pytest.mark.parametrize("name", GOOD)
def test_self_consistency(name):
    text = (SVG_DIR / name).read_text()
    assert consistency_check(text, convert(text))


@pytest.mark.parametrize("name", GOOD)
def test_deterministic_valid_and_tokenizable(name):
    text = (SVG_DIR / name).read_text()
    a, b = convert(text), convert(text)
    assert serialize(a) == serialize(b)
    assert canonical_equal(detokenize(tokenize(a)), a)


def test_deleted_shape_detected():
    text = (SVG_DIR / "scene.svg").read_text()
    obj = to_obj(convert(text))
    obj["layers"][0]["shapes"].pop()
    assert not consistency_check(text, parse_obj(obj))


def test_moved_shape_detected():
    text = (SVG_DIR / "rect.svg").read_text()
    obj = to_obj(convert(text))
    obj["layers"][0]["shapes"][0]["it"][0]["p"]["k"] = [26, 40]
    assert not consistency_check(text, parse_obj(obj))


def test_scene_layers_follow_top_level_elements():
    scene = read_scene((SVG_DIR / "scene.svg").read_text())
    doc = convert((SVG_DIR / "scene.svg").read_text())
    assert len(doc.layers) == len(scene.groups) == 5
    assert [len(g) for g in scene.groups] == [2, 1, 1, 1, 1]


def test_semicircle_arc_bbox():
    # center (10, 0), radius 10, sweeping through (10, -10)
    box = subpaths_bbox(parse_path_data("M0 0 A10 10 0 0 1 20 0"), identity())
    assert box.as_tuple() == pytest.approx((0, -10, 20, 0))


@pytest.mark.parametrize("phi", [0, 30, 90])
@pytest.mark.parametrize("flags", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_arc_cubic_deviation(phi, flags):
    """Cubic arc approximation stays within 0.1 px of the true circle."""
    r = 80.0
    (sp,) = parse_path_data(f"M0 0 A{r} {r} {phi} {flags[0]} {flags[1]} 100 30")
    (seg,) = sp.segments
    cubics = arc_to_cubics(seg)
    u = np.linspace(0, 1, 200)[:, None]
    pts = np.concatenate([(1 - u) ** 3 * np.array(p0) + 3 * (1 - u) ** 2 * u * np.array(c1)
                          + 3 * (1 - u) * u ** 2 * np.array(c2) + u ** 3 * np.array(p1)
                          for _, p0, c1, c2, p1 in cubics])
    # both circles of radius r through the endpoints; the arc must lie on one
    mid, half = np.array([50.0, 15.0]), math.hypot(50, 15)
    normal = np.array([-15.0, 50.0]) / half
    off = math.sqrt(r * r - half * half)
    dev = min(np.abs(np.linalg.norm(pts - (mid + s * off * normal), axis=1) - r).max() for s in (1, -1))
    assert dev <= 0.1


@given(st.lists(coord, min_size=8, max_size=8))
def test_cubic_bbox_vs_dense_sampling(c):
    p0, c1, c2, p1 = (c[0], c[1]), (c[2], c[3]), (c[4], c[5]), (c[6], c[7])
    box = subpaths_bbox(parse_path_data(f"M{p0[0]} {p0[1]} C{c1[0]} {c1[1]} {c2[0]} {c2[1]} {p1[0]} {p1[1]}"),
                        identity())
    ref = sampled_cubic_bbox(p0, c1, c2, p1, samples=1000)
    assert np.allclose(box.as_tuple(), ref, atol=0.5)
    # the exact box contains every sample
    assert box.x0 <= ref[0] + 1e-9 and box.y0 <= ref[1] + 1e-9
    assert box.x1 >= ref[2] - 1e-9 and box.y1 >= ref[3] - 1e-9


@given(coord, coord, size, size, st.floats(0, 360).map(lambda v: round(v, 1)))
def test_rotated_ellipse_bbox(cx, cy, rx, ry, angle):
    text = _svg(f'<ellipse cx="{cx}" cy="{cy}" rx="{rx}" ry="{ry}" transform="rotate({angle})"/>')
    (p,) = read_scene(text).primitives()
    t = np.linspace(0, 2 * np.pi, 1000)
    a = math.radians(angle)
    x, y = cx + rx * np.cos(t), cy + ry * np.sin(t)
    pts = np.stack([x * math.cos(a) - y * math.sin(a), x * math.sin(a) + y * math.cos(a)], axis=1)
    assert np.allclose(svg_bbox(p).as_tuple(), sampled_points_bbox(pts), atol=0.5)


primitive = st.one_of(
    st.builds(lambda x, y, w, h, r: f'<rect x="{x}" y="{y}" width="{w}" height="{h}" rx="{r}"/>',
              coord, coord, size, size, st.sampled_from([0, 3])),
    st.builds(lambda x, y, r: f'<circle cx="{x}" cy="{y}" r="{r}" fill="blue"/>', coord, coord, size),
    st.builds(lambda x, y, a, b: f'<ellipse cx="{x}" cy="{y}" rx="{a}" ry="{b}" stroke="red"/>',
              coord, coord, size, size),
    st.builds(lambda a, b, c, d: f'<path d="M{a} {b} Q{c} {a} {d} {b} T{a} {c} A20 10 30 1 0 {b} {d} z"/>',
              coord, coord, coord, coord),
    st.builds(lambda a, b, c, d: f'<polyline points="{a},{b} {c},{d} {b},{a}" stroke="#000" fill="none"/>',
              coord, coord, coord, coord),
)
transform = st.sampled_from(["", ' transform="translate(5,7)"', ' transform="scale(2,0.5)"',
                             ' transform="rotate(33) skewX(10)"', ' transform="matrix(1,0.2,-0.3,1,4,5)"'])


@given(st.lists(st.tuples(primitive, transform), min_size=1, max_size=4))
def test_random_scenes_consistent(items):
    body = "".join(f"<g{t}>{p}</g>" for p, t in items)
    text = _svg(body, "0 0 400 400")
    doc = convert(text)
    assert consistency_check(text, doc)
    assert canonical_equal(detokenize(tokenize(doc)), doc)

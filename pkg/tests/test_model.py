import copy
import json
import random

import pytest
from hypothesis import given, strategies as st

from conftest import corpus_files, read_json
from lottie_forge import JsonSyntaxError, SchemaError, UnsupportedFeature
from lottie_forge.model import (AnimatedProperty, BezierPath, canonical, canonical_equal, iter_properties,
                                parse, parse_obj, resolve, serialize, to_obj)
from lottie_forge.numeric import (color_to_hex, format_number, hex_convertible, hex_to_color, parse_number,
                                  quantize, round_sig)
from lottie_forge.synth import SynthConfig, random_document


# ---------------------------------------------------------------- numeric helpers


@pytest.mark.parametrize("x, expected", [
    (0.00123456, 0.001235), (123456.0, 123500.0), (-2.79, -2.79), (0.0, 0.0), (1.23449, 1.234),
])
def test_round_sig_examples(x, expected):
    assert round_sig(x, 4) == expected


@given(st.floats(allow_nan=False, allow_infinity=False, min_value=-1e12, max_value=1e12))
def test_round_sig_idempotent(x):
    assert round_sig(round_sig(x)) == round_sig(x)


def test_quantize_leaves_integers_alone():
    assert quantize(123456) == 123456 and isinstance(quantize(123456), int)
    assert quantize(123456.7) == 123500.0


@given(st.one_of(st.integers(-10**12, 10**12), st.floats(allow_nan=False, allow_infinity=False)))
def test_format_number_parses_back(x):
    text = format_number(x)
    assert parse_number(text) == x


@pytest.mark.parametrize("bad", ["", "01", "1.", ".5", "--1", "1e", "abc", "+1"])
def test_parse_number_rejects(bad):
    with pytest.raises(ValueError):
        parse_number(bad)


def test_hex_colors():
    assert color_to_hex((1, 0, 0, 1)) == "#ff0000"
    assert hex_to_color("#f00") == (1.0, 0.0, 0.0, 1.0)
    assert hex_convertible((0.2, 0.4, 0.6, 1))
    assert not hex_convertible((0.2, 0.4, 0.6, 0.5))
    assert not hex_convertible((0.2, 0.4, 0.6))


# ---------------------------------------------------------------- parsing


def test_minimal_document(minimal_obj):
    doc = parse(json.dumps(minimal_obj))
    assert doc.meta.frame_rate == 30 and doc.meta.out_point == 90
    assert doc.layers == ()


def test_empty_object_is_schema_error():
    with pytest.raises(SchemaError):
        parse("{}")


@pytest.mark.parametrize("text", ["{", "[1,]", '{"fr": NaN}', ""])
def test_bad_json_is_syntax_error(text):
    with pytest.raises(JsonSyntaxError):
        parse(text)


def test_syntax_error_is_a_value_error():
    assert issubclass(JsonSyntaxError, ValueError)


@pytest.mark.parametrize("patch", [
    {"fr": 0}, {"fr": "30"}, {"op": -1}, {"layers": {}}, {"v": 5}, {"w": 0},
])
def test_schema_violations(minimal_obj, patch):
    with pytest.raises(SchemaError):
        parse_obj({**minimal_obj, **patch})


def test_bounce_property(bounce_obj):
    doc = parse_obj(bounce_obj)
    prop = resolve(doc, "layers[0].shapes[0].it[2].r")
    assert isinstance(prop, AnimatedProperty) and prop.animated
    assert [kf.t for kf in prop.keyframes] == [30, 46]
    assert [kf.s for kf in prop.keyframes] == [(-113.4,), (-109.5,)]
    assert prop.keyframes[0].o.point() == (0.3, -2.79)


def test_strict_mode_rejects_expressions_and_3d(bounce_obj):
    obj = copy.deepcopy(bounce_obj)
    obj["layers"][0]["ks"]["o"]["x"] = "value"
    parse_obj(obj)
    with pytest.raises(UnsupportedFeature):
        parse_obj(obj, strict=True)
    three_d = {**bounce_obj, "ddd": 1}
    parse_obj(three_d)
    with pytest.raises(UnsupportedFeature):
        parse_obj(three_d, strict=True)


def test_text_layers_unsupported(minimal_obj):
    with pytest.raises(UnsupportedFeature):
        parse_obj({**minimal_obj, "layers": [{"ty": 5, "ip": 0, "op": 1}]})


def test_single_keyframe_is_static(minimal_obj):
    layer = {"ty": 3, "ip": 0, "op": 90, "ks": {"r": {"a": 1, "k": [{"t": 4, "s": [12]}]}}}
    doc = parse_obj({**minimal_obj, "layers": [layer]})
    r = doc.layers[0].transform.prop("r")
    assert not r.animated and r.value == (12,)


def test_keyframe_times_must_increase(minimal_obj):
    layer = {"ty": 3, "ip": 0, "op": 90, "ks": {"r": {"a": 1, "k": [{"t": 4, "s": [1]}, {"t": 4, "s": [2]}]}}}
    with pytest.raises(SchemaError):
        parse_obj({**minimal_obj, "layers": [layer]})


def test_path_lengths_must_agree():
    with pytest.raises(SchemaError):
        BezierPath(((0, 0),), (), ())


def test_unknown_fields_survive_serialization(bounce_obj):
    obj = copy.deepcopy(bounce_obj)
    obj["custom"] = {"nested": [1, "two"]}
    obj["layers"][0]["shapes"][0]["it"][0]["weird"] = True
    out = json.loads(serialize(parse_obj(obj)))
    assert out["custom"] == {"nested": [1, "two"]}
    assert out["layers"][0]["shapes"][0]["it"][0]["weird"] is True


def test_iter_properties_and_resolve_agree(bounce_obj):
    doc = parse_obj(bounce_obj)
    paths = dict(iter_properties(doc))
    assert "layers[0].shapes[0].it[2].r" in paths
    for path, prop in paths.items():
        assert resolve(doc, path) is prop


def test_resolve_bad_path(bounce_obj):
    doc = parse_obj(bounce_obj)
    with pytest.raises(KeyError):
        resolve(doc, "layers[3].ks.r")


# ---------------------------------------------------------------- canonical equality


def _shuffled(node, rng):
    if isinstance(node, dict):
        items = list(node.items())
        rng.shuffle(items)
        return {k: _shuffled(v, rng) for k, v in items}
    if isinstance(node, list):
        return [_shuffled(v, rng) for v in node]
    return node


def test_canonical_equal_reflexive_and_key_order(bounce_obj):
    doc = parse_obj(bounce_obj)
    assert canonical_equal(doc, doc)
    assert canonical_equal(doc, parse_obj(_shuffled(bounce_obj, random.Random(3))))


def test_canonical_equal_detects_one_degree(bounce_obj):
    obj = copy.deepcopy(bounce_obj)
    obj["layers"][0]["shapes"][0]["it"][2]["r"]["k"][0]["s"] = [-112.4]
    assert not canonical_equal(parse_obj(bounce_obj), parse_obj(obj))


def test_canonical_equal_ignores_fifth_digit(bounce_obj):
    obj = copy.deepcopy(bounce_obj)
    obj["layers"][0]["shapes"][0]["it"][2]["r"]["k"][0]["s"] = [-113.40001]
    assert canonical_equal(parse_obj(bounce_obj), parse_obj(obj))


def test_canonical_equal_matches_canonical_form():
    # the fast comparison and the hashable form must never disagree
    for seed in range(60):
        a = parse_obj(random_document(seed))
        b = parse_obj(random_document(seed + 1000))
        assert canonical_equal(a, b) == (canonical(a) == canonical(b))
        assert canonical_equal(a, a) and canonical(a) == canonical(a)


def test_defaults_are_normalized(minimal_obj):
    bare = {**minimal_obj, "layers": [{"ty": 3, "ip": 0, "op": 90}]}
    full = {**minimal_obj, "layers": [{"ty": 3, "ip": 0, "op": 90, "st": 0, "bm": 0, "ks": {
        "p": {"a": 0, "k": [0, 0]}, "a": {"a": 0, "k": [0, 0]}, "s": {"a": 0, "k": [100, 100]},
        "r": {"a": 0, "k": 0}, "o": {"a": 0, "k": 100}}}]}
    assert canonical_equal(parse_obj(bare), parse_obj(full))


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
def test_fixture_serialize_roundtrip(path):
    doc = parse(path.read_bytes())
    again = parse(serialize(doc))
    assert canonical_equal(again, doc)
    assert to_obj(again) == to_obj(doc)


@given(st.integers(0, 2**32 - 1), st.booleans())
def test_random_serialize_roundtrip(seed, verbose):
    doc = parse_obj(random_document(seed, SynthConfig(verbose=verbose)))
    assert canonical_equal(parse(serialize(doc)), doc)


@given(st.integers(0, 2**32 - 1))
def test_keyframe_order_preserved(seed):
    doc = parse_obj(random_document(seed))
    again = parse(serialize(doc))
    for (_, a), (_, b) in zip(iter_properties(doc), iter_properties(again)):
        assert [kf.t for kf in a.keyframes] == [kf.t for kf in b.keyframes]


@given(st.integers(0, 2**32 - 1))
def test_animated_flag_matches_keyframes(seed):
    doc = parse_obj(random_document(seed))
    for _, prop in iter_properties(doc):
        assert prop.animated == (len(prop.keyframes) >= 2)
        if not prop.animated:
            assert prop.keyframes == ()


def test_corpus_fixtures_are_readable():
    files = corpus_files()
    assert len(files) >= 50
    for path in files:
        read_json(path)

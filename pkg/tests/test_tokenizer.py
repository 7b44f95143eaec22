import copy
import json

import pytest
from hypothesis import given, strategies as st

from conftest import corpus_files
from lottie_forge import MalformedStream, Truncated, UnsupportedFeature, parse_obj
from lottie_forge.model import canonical_equal, parse
from lottie_forge.synth import SynthConfig, keyframe_animation, random_document
from lottie_forge.tokenizer import (PRESETS, VOCAB, Token, TokenKind, TokenStream, detokenize, detokenize_obj,
                                    ease_preset_lookup, parse_text, render_text, token_count, tokenize,
                                    vocabulary_markdown)
from lottie_forge.tokenizer.tokens import N, S, T

META_TEXT = '<|M|> <|v|> "5.9.5" <|fr|> 30 <|ip|> 0 <|op|> 90 <|w|> 512 <|h|> 512 <|ddd|> 0'
PATH_TEXT = "<|ITEM_sh|> <|KS_STATIC|> <|i|> 0 0 -10 5 <|o|> 0 0 10 -5 <|v|> 100 50 150 75 <|c|>"

seeds = st.integers(0, 2**32 - 1)


def _path_doc(closed=True):
    path = {"i": [[0, 0], [-10, 5]], "o": [[0, 0], [10, -5]], "v": [[100, 50], [150, 75]], "c": closed}
    layer = {"ty": 4, "ip": 0, "op": 90, "shapes": [{"ty": "sh", "ks": {"a": 0, "k": path}}]}
    return parse_obj({"v": "5.9.5", "fr": 30, "ip": 0, "op": 90, "w": 512, "h": 512, "ddd": 0,
                      "layers": [layer]})


# ---------------------------------------------------------------- vocabulary


def test_vocabulary_size():
    assert len(VOCAB.ids) == 441
    assert len(VOCAB.padding()) == 35
    assert VOCAB.total_size == 476


def test_vocabulary_ids_contiguous_and_stable():
    ids = sorted(VOCAB.ids.values())
    assert ids == list(range(441))
    assert VOCAB.id("M") == 0
    assert vocabulary_markdown() == vocabulary_markdown()


def test_vocabulary_doc_is_current():
    from pathlib import Path
    doc = Path(__file__).parents[1] / "docs" / "vocabulary.md"
    assert doc.read_text(encoding="utf-8").strip() == vocabulary_markdown().strip()


def test_preset_tokens_present():
    for n in range(1, 15):
        assert f"EASE_{n}" in VOCAB


@given(seeds)
def test_emitted_markers_in_vocabulary(seed):
    doc = parse_obj(random_document(seed, SynthConfig(verbose=True)))
    for quantize in (False, True):
        for tok in tokenize(doc, quantize, presets=True):
            if tok.kind is TokenKind.STRUCTURAL:
                assert tok.value in VOCAB


# ---------------------------------------------------------------- encoding examples


def test_meta_block(minimal_obj):
    stream = tokenize(parse_obj(minimal_obj))
    assert render_text(stream) == META_TEXT + " <|END|>"
    assert S("LAYER") not in stream.tokens


def test_meta_token_count(minimal_obj):
    # M, v + literal, six tagged numbers (tag + literal each), END
    assert token_count(parse_obj(minimal_obj)) == 1 + 2 + 6 * 2 + 1


def test_static_path_shape():
    text = render_text(tokenize(_path_doc()))
    assert PATH_TEXT in text
    # closed flag only when the path is closed
    assert PATH_TEXT not in render_text(tokenize(_path_doc(closed=False)))


def test_keyframe_layout(bounce_obj):
    text = render_text(tokenize(parse_obj(bounce_obj)))
    kf = text[text.index("<|PROP_KF_START|>"):text.index("<|PROP_KF_END|>")]
    # incoming handle first, then outgoing: ix iy ox oy
    assert kf == "<|PROP_KF_START|> <|t|> 30 -113.4 <|ease|> 0.78 -1.79 0.3 -2.79 <|t|> 46 -109.5 "


def test_default_ease_is_empty_tag():
    kfs = [{"t": 0, "s": [0], "o": {"x": [0.333], "y": [0]}, "i": {"x": [0.667], "y": [1]}}, {"t": 10, "s": [5]}]
    layer = {"ty": 3, "ip": 0, "op": 10, "ks": {"r": {"a": 1, "k": kfs}}}
    doc = parse_obj({"fr": 30, "ip": 0, "op": 10, "layers": [layer]})
    text = render_text(tokenize(doc))
    assert "<|ease|> <|PROP_KF_END|>" not in text
    assert "<|t|> 0 0 <|ease|> <|t|> 10 5" in text
    assert canonical_equal(detokenize(tokenize(doc)), doc)


def test_unsupported_shape_kind(minimal_obj):
    layer = {"ty": 4, "ip": 0, "op": 90, "shapes": [{"ty": "mm", "mm": 1}]}
    with pytest.raises(UnsupportedFeature):
        tokenize(parse_obj({**minimal_obj, "layers": [layer]}))


# ---------------------------------------------------------------- presets


@pytest.mark.parametrize("p1, p2, expected", [
    ((0.333, 0), (0.667, 1), 2),
    ((0, 0), (1, 1), 1),
    ((0.167, 0.167), (0.833, 0.833), 3),
    ((0.3334, 0.0005), (0.6668, 0.9995), 2),
    ((0.3, -2.79), (0.78, -1.79), None),
    ((0.335, 0), (0.667, 1), None),
])
def test_preset_lookup(p1, p2, expected):
    assert ease_preset_lookup(p1, p2) == expected


def test_preset_table_has_eight_entries():
    assert sorted(PRESETS) == list(range(1, 9))


def test_preset_encoding_is_shorter(bounce_obj):
    obj = copy.deepcopy(bounce_obj)
    kf = obj["layers"][0]["shapes"][0]["it"][2]["r"]["k"][0]
    kf["o"], kf["i"] = {"x": [0.167], "y": [0]}, {"x": [0.833], "y": [1]}
    doc = parse_obj(obj)
    with_presets = tokenize(doc, presets=True)
    assert S("EASE_4") in with_presets.tokens
    assert len(with_presets) == len(tokenize(doc)) - 3
    assert canonical_equal(detokenize(with_presets), doc)


# ---------------------------------------------------------------- text form


def test_text_roundtrip_examples():
    assert render_text(TokenStream()) == ""
    assert parse_text("") == TokenStream()
    meta = parse_text(META_TEXT)
    assert render_text(meta) == META_TEXT
    assert meta[0] == S("M") and meta[2] == T("5.9.5") and meta[4] == N(30)


def test_text_whitespace_optional():
    assert parse_text('<|M|><|v|>"5.9.5"<|fr|>30') == parse_text('<|M|> <|v|> "5.9.5" <|fr|> 30')


@pytest.mark.parametrize("text", ["<|bogus|>", "<|M|> 1a2", "<|M|> #", '<|M|> "unterminated'])
def test_text_rejects(text):
    with pytest.raises(MalformedStream):
        parse_text(text)


@given(st.lists(st.one_of(
    st.sampled_from(sorted(VOCAB.ids)).map(S),
    st.floats(allow_nan=False, allow_infinity=False).map(N),
    st.integers(-10**9, 10**9).map(N),
    st.text(max_size=8).map(T),
), max_size=30))
def test_text_bijective(tokens):
    stream = TokenStream(tokens)
    assert parse_text(render_text(stream)) == stream


def test_token_ids_spell_numbers():
    ids = TokenStream([S("fr"), N(-1.5)]).to_ids()
    assert ids[0] == VOCAB.id("fr")
    assert ids[1:] == [VOCAB.id(n) for n in ("NUM_NEG", "NUM_1", "NUM_DOT", "NUM_5")]
    with pytest.raises(ValueError):
        TokenStream([T("x")]).to_ids()


def test_token_is_value_type():
    assert Token(TokenKind.NUMERIC, "3") == N(3)
    assert str(S("END")) == "<|END|>"


# ---------------------------------------------------------------- decoding


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
def test_fixture_roundtrip(path):
    doc = parse(path.read_bytes())
    assert canonical_equal(detokenize(tokenize(doc)), doc)
    assert canonical_equal(detokenize(parse_text(render_text(tokenize(doc)))), doc)


@given(seeds, st.booleans())
def test_random_roundtrip(seed, verbose):
    doc = parse_obj(random_document(seed, SynthConfig(verbose=verbose)))
    assert canonical_equal(detokenize(tokenize(doc)), doc)


@given(seeds, st.booleans())
def test_quantized_roundtrip(seed, presets):
    doc = parse_obj(random_document(seed))
    assert canonical_equal(detokenize(tokenize(doc, quantize=True, presets=presets)), doc)


@given(seeds, st.data())
def test_every_prefix_truncated(seed, data):
    stream = tokenize(parse_obj(random_document(seed)))
    cut = data.draw(st.integers(0, len(stream) - 1))
    with pytest.raises(Truncated):
        detokenize(stream[:cut])


def test_all_prefixes_of_bounce(bounce_obj):
    stream = tokenize(parse_obj(bounce_obj))
    for cut in range(len(stream)):
        with pytest.raises(Truncated):
            detokenize(stream[:cut])


def test_half_stream_truncated(bounce_obj):
    stream = tokenize(parse_obj(bounce_obj))
    with pytest.raises(Truncated):
        detokenize(stream[:len(stream) // 2])


def test_text_where_number_expected(bounce_obj):
    tokens = list(tokenize(parse_obj(bounce_obj)))
    k = tokens.index(S("fr")) + 1
    tokens[k] = T("3O")
    with pytest.raises(MalformedStream):
        detokenize(TokenStream(tokens))


def test_trailing_tokens_rejected(minimal_obj):
    stream = tokenize(parse_obj(minimal_obj))
    with pytest.raises(MalformedStream):
        detokenize(TokenStream(stream.tokens + (N(1),)))


def test_unbalanced_group_rejected(bounce_obj):
    tokens = list(tokenize(parse_obj(bounce_obj)))
    tokens.remove(S("GR_END"))
    with pytest.raises(MalformedStream):
        detokenize(TokenStream(tokens))


def test_missing_start_marker():
    with pytest.raises(MalformedStream):
        detokenize(parse_text("<|LAYER|> <|END|>"))


@given(seeds)
def test_blocks_balanced(seed):
    stream = tokenize(parse_obj(random_document(seed)))
    depth = {"PROP_KF": 0, "GR": 0, "ASSET": 0}
    pairs = {"PROP_KF_START": ("PROP_KF", 1), "PROP_KF_END": ("PROP_KF", -1), "GR_START": ("GR", 1),
             "GR_END": ("GR", -1), "ASSET": ("ASSET", 1), "ASSET_END": ("ASSET", -1)}
    for tok in stream:
        if tok.kind is TokenKind.STRUCTURAL and tok.value in pairs:
            name, step = pairs[tok.value]
            depth[name] += step
            assert depth[name] >= 0
    assert all(v == 0 for v in depth.values())
    assert stream[0] == S("M") and stream[-1] == S("END")


def test_detokenize_obj_is_plain_json(bounce_obj):
    obj = detokenize_obj(tokenize(parse_obj(bounce_obj)))
    json.dumps(obj)
    assert obj["layers"][0]["shapes"][0]["it"][2]["r"]["k"][0]["t"] == 30


# ---------------------------------------------------------------- counting


@pytest.mark.parametrize("frames", [100, 300, 1000])
def test_count_invariant_to_duration(frames):
    assert token_count(parse_obj(keyframe_animation(6, frames))) == \
        token_count(parse_obj(keyframe_animation(6, 100)))


@given(seeds)
def test_quantize_never_adds_tokens(seed):
    doc = parse_obj(random_document(seed))
    assert token_count(doc, quantize=True) <= token_count(doc)
    assert token_count(doc, quantize=True, numerics="digits") <= token_count(doc, numerics="digits")


def test_more_keyframes_more_tokens():
    assert token_count(parse_obj(keyframe_animation(12, 300))) > token_count(parse_obj(keyframe_animation(6, 300)))


def test_count_modes(bounce_obj):
    doc = parse_obj(bounce_obj)
    stream = tokenize(doc)
    assert token_count(doc) == len(stream)
    assert token_count(doc, numerics="none") == stream.structural_count()
    digits = sum(len(t.value) if t.kind is TokenKind.NUMERIC else 1 for t in stream)
    assert token_count(doc, numerics="digits") == digits
    with pytest.raises(ValueError):
        token_count(doc, numerics="words")

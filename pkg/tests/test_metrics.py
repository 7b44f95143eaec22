import json

import pytest
from hypothesis import given, strategies as st

from conftest import corpus_files
from lottie_forge.errors import JsonSyntaxError
from lottie_forge.metrics import (KEY_WEIGHT, VALUE_WEIGHT, bucket_of, compare, flatten, flatten_obj, score_texts,
                                  stratify, unflatten, validity_check, values_match)
from oracles import flatten_keys

json_leaf = st.one_of(st.none(), st.booleans(), st.integers(-10**6, 10**6),
                      st.floats(allow_nan=False, allow_infinity=False), st.text(max_size=5))
json_tree = st.recursive(json_leaf, lambda c: st.one_of(
    st.lists(c, min_size=1, max_size=4),
    st.dictionaries(st.text(st.characters(blacklist_characters=".[]"), min_size=1, max_size=4), c,
                    min_size=1, max_size=4)), max_leaves=25)
flat_maps = st.dictionaries(st.sampled_from("abcdefgh"), st.integers(0, 3), max_size=8)


def test_flatten_examples():
    assert flatten('{"a":{"b":1},"c":[2,3]}') == {"a.b": 1, "c[0]": 2, "c[1]": 3}
    assert flatten("{}") == {}


def test_flatten_syntax_error():
    with pytest.raises(JsonSyntaxError):
        flatten('{"a": ')


@pytest.mark.parametrize("path", corpus_files()[:10], ids=lambda p: p.name)
def test_flatten_matches_oracle_on_fixtures(path):
    text = path.read_text()
    flat = flatten(text)
    assert flat == flatten_keys(json.loads(text))
    assert "layers[0].ty" in flat


@given(st.dictionaries(st.text(st.characters(blacklist_characters=".[]"), min_size=1, max_size=4), json_tree,
                       max_size=5))
def test_flatten_matches_oracle(obj):
    assert flatten_obj(obj) == flatten_keys(obj)


@given(st.dictionaries(st.text(st.characters(blacklist_characters=".[]"), min_size=1, max_size=4), json_tree,
                       max_size=5))
def test_unflatten_inverts_flatten(obj):
    assert unflatten(flatten_obj(obj)) == obj


def test_hand_example():
    gt, pred = {"a": 1, "b": 2, "c": 3}, {"a": 1, "b": 5, "d": 7}
    rep = compare(gt, pred)
    # brute-force set operations
    common = set(gt) & set(pred)
    assert (rep.common, rep.missing, rep.extra) == (len(common), len(set(gt) - set(pred)), len(set(pred) - set(gt)))
    assert rep.key_f1 == pytest.approx(2 * 2 / 6)
    assert rep.value_match == pytest.approx(0.5)
    assert rep.numeric_mae == pytest.approx(1.5)
    assert rep.json_struct_sim == pytest.approx(0.7 * (4 / 6) + 0.3 * 0.5)
    assert round(rep.key_f1, 4) == 0.6667 and round(rep.json_struct_sim, 4) == 0.6167


def test_identical_and_disjoint():
    rep = compare({"a": 1, "b": "x"}, {"a": 1, "b": "x"})
    assert (rep.key_f1, rep.value_match, rep.numeric_mae, rep.json_struct_sim) == (1, 1, 0, 1.0)
    rep = compare({"a": 1}, {"b": 1})
    assert (rep.key_f1, rep.value_match, rep.json_struct_sim) == (0, 0, 0)


def test_empty_pair_scores_one():
    assert compare({}, {}).json_struct_sim == 1.0


def test_values_match_rules():
    assert values_match(0.123456, 0.12349)
    assert not values_match(0.1234, 0.1236)
    assert values_match(1, 1.0)
    assert not values_match(True, 1)
    assert not values_match("1", 1)
    assert values_match(None, None)


def test_mae_only_over_numeric_common_keys():
    rep = compare({"a": 1, "b": "s", "c": 10}, {"a": 3, "b": "t", "d": 0})
    assert rep.numeric_mae == 2.0


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.name)
def test_self_similarity_fixtures(path):
    text = path.read_text()
    assert score_texts(text, text).json_struct_sim == 1.0


@given(flat_maps, flat_maps)
def test_key_f1_symmetric(a, b):
    assert compare(a, b).key_f1 == compare(b, a).key_f1


@given(flat_maps, flat_maps)
def test_scores_bounded_and_weighted(a, b):
    rep = compare(a, b)
    assert 0 <= rep.key_f1 <= 1 and 0 <= rep.value_match <= 1
    assert rep.json_struct_sim == pytest.approx(KEY_WEIGHT * rep.key_f1 + VALUE_WEIGHT * rep.value_match)


@given(flat_maps)
def test_self_comparison(a):
    assert compare(a, a).json_struct_sim == 1.0


def test_validity(bounce_obj):
    assert validity_check(json.dumps(bounce_obj))
    bad = validity_check(json.dumps(bounce_obj)[:-5])
    assert not bad and bad.error == "SyntaxError"
    missing = {k: v for k, v in bounce_obj.items() if k != "layers"}
    res = validity_check(json.dumps(missing))
    assert not res and res.error == "SchemaError" and "layers" in res.message


def test_score_invalid_prediction(bounce_obj):
    text = json.dumps(bounce_obj)
    rep = score_texts(text, text[:-5])
    assert not rep.valid and rep.json_struct_sim == 0.0
    rep = score_texts(text, json.dumps({"v": bounce_obj["v"], "fr": 12}))
    assert not rep.valid and 0 < rep.key_f1 < 1


def test_stratify_examples():
    assert stratify({"a": 10, "b": 10, "c": 10}) == {"Simple": ["a", "b", "c"], "Medium": [], "Complex": []}
    out = stratify([("x", 100), ("y", 5000), ("z", 30000)], (2000, 10000))
    assert out == {"Simple": ["x"], "Medium": ["y"], "Complex": ["z"]}


def test_stratify_boundaries():
    assert [bucket_of(n) for n in (1999, 2000, 9999, 10000)] == ["Simple", "Medium", "Medium", "Complex"]
    assert bucket_of(50, (50, 60)) == "Medium"
    with pytest.raises(ValueError):
        stratify({}, (10, 5))

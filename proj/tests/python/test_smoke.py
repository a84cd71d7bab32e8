import json

import pytest

import rulegraph


def test_motivating_pipeline():
    train, test, types = rulegraph.generate("motivating")
    rs = rulegraph.train(train, json.loads(types))
    assert len(rs["rules"]) == 6
    results = rulegraph.detect(rs, test)
    m = rulegraph.evaluate(results, test)
    assert m["precision"] == 1.0
    assert m["recall"] == 1.0


def test_merge_regex_and_matching():
    r = rulegraph.merge_regex("i-12345", "i-12739", ["i-99999"])
    assert r == "i-12[0-9]{3,3}"
    assert rulegraph.matches(r, "i-12000")
    assert not rulegraph.matches(r, "i-99999")
    assert rulegraph.merge_regex("ab", "cd", ["ab"]) is None
    assert rulegraph.canonical("[0-9]{3}") == "[0-9]{3,3}"


def test_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        rulegraph.canonical("a*")
    with pytest.raises(ValueError):
        rulegraph.train(['{"a": 1, "b": 2}'], k=2)
    with pytest.raises(ValueError):
        rulegraph.perturb(["x"], "reverse", 0.1)


def test_detector_reports_malformed_lines():
    train, _, types = rulegraph.generate("motivating")
    rs = rulegraph.train(train, types)
    det = rulegraph.Detector(json.dumps(rs))
    assert det.rule_count == 6
    out = [json.loads(x) for x in det.detect(["{oops", train[0]])]
    assert out[0]["verdict"] == "malformed"
    assert out[1]["verdict"] == "normal"

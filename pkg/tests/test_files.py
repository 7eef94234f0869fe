"""fanifold/1 JSON round-trips and schema validation."""

import copy
import json
import os

import pytest

from fanifolds import files
from fanifolds.examples import EXAMPLES

DATA_DIR = os.path.join(
    os.path.dirname(__file__), "..", "src", "fanifolds", "data"
)


def test_every_example_round_trips_bit_exactly():
    for name, build in sorted(EXAMPLES.items()):
        phi = build()
        text = files.dumps(phi)
        again = files.dumps(files.loads(text))
        assert text == again, name


def test_round_trip_preserves_structure():
    for name in ("square", "quadric_stacky", "necklace1"):
        phi = EXAMPLES[name]()
        phi2 = files.loads(files.dumps(phi))
        assert phi2.dimension == phi.dimension
        assert [s.name for s in phi2.strata] == [s.name for s in phi.strata]
        for a, b in zip(phi.strata, phi2.strata):
            assert a.plain_fan.cones == b.plain_fan.cones
            assert a.is_stacky == b.is_stacky
            if a.is_stacky:
                assert a.fan.multiples == b.fan.multiples
        assert [
            (a.source, a.target, a.cone_index, a.iso.matrix) for a in phi.arrows
        ] == [(a.source, a.target, a.cone_index, a.iso.matrix) for a in phi2.arrows]


def test_bundled_data_matches_builders():
    for name, build in sorted(EXAMPLES.items()):
        path = os.path.join(DATA_DIR, f"{name}.json")
        assert os.path.exists(path), name
        with open(path, encoding="utf-8") as fh:
            assert fh.read() == files.dumps(build()), name


def test_save_and_load_files(tmp_path):
    phi = EXAMPLES["interval"]()
    path = tmp_path / "interval.json"
    files.save_fanifold(phi, str(path))
    assert files.dumps(files.load_fanifold(str(path))) == files.dumps(phi)


def _base():
    return json.loads(files.dumps(EXAMPLES["3a1"]()))


def _expect_value_error(doc):
    with pytest.raises(ValueError):
        files.fanifold_from_dict(doc)


def test_load_rejects_wrong_format():
    d = _base()
    d["format"] = "fanifold/2"
    _expect_value_error(d)


def test_load_rejects_duplicate_ids():
    d = _base()
    d["strata"].append(copy.deepcopy(d["strata"][0]))
    _expect_value_error(d)


def test_load_rejects_unknown_arrow_endpoints():
    d = _base()
    d["arrows"][0]["from"] = "ghost"
    _expect_value_error(d)


def test_load_rejects_missing_ray_references():
    d = _base()
    d["arrows"][0]["cone"] = [9]
    _expect_value_error(d)
    d = _base()
    d["strata"][0]["fan"]["cones"] = [[0, 1]]
    _expect_value_error(d)


def test_load_rejects_bad_quotient_matrix_shape():
    d = _base()
    d["arrows"][0]["quotient_matrix"] = [[1]]
    _expect_value_error(d)


def test_load_rejects_bad_stacky_beta():
    d = json.loads(files.dumps(EXAMPLES["quadric_stacky"]()))
    target = next(
        s for s in d["strata"] if s["fan"].get("stacky_beta") and s["fan"]["rays"]
    )
    good = copy.deepcopy(d)

    target_i = d["strata"].index(target)
    bad = copy.deepcopy(good)
    bad["strata"][target_i]["fan"]["stacky_beta"][0] = [5, 7]
    _expect_value_error(bad)

    bad = copy.deepcopy(good)
    bad["strata"][target_i]["fan"]["stacky_beta"][0] = [1, -1]
    _expect_value_error(bad)

    bad = copy.deepcopy(good)
    bad["strata"][target_i]["fan"]["stacky_beta"] = [[1, 1]]
    _expect_value_error(bad)


def test_loads_rejects_junk():
    with pytest.raises(ValueError):
        files.loads("{this is not json")


def test_stacky_beta_encodes_multiples():
    d = json.loads(files.dumps(EXAMPLES["quadric_stacky"]()))
    origin = next(
        s for s in d["strata"] if len(s["fan"].get("rays", [])) == 2
    )
    assert origin["fan"]["stacky_beta"] == origin["fan"]["rays"]

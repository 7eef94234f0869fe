"""Matched chart-side / skeleton-side labels and restriction pairs."""

import json

import pytest

from fanifolds.examples import EXAMPLES
from fanifolds.mirror import (
    A_SIDE_CONVENTION,
    mirror_dictionary,
    restriction_pairs,
)
from fanifolds.skeleton import handle_plan


def test_dictionary_labels_every_stratum_and_arrow():
    for name in ("3a1", "square", "necklace2", "interval", "unigon"):
        phi = EXAMPLES[name]()
        md = mirror_dictionary(phi)
        assert {s.stratum for s in md.stratum_labels} == {
            s.name for s in phi.strata
        }, name
        assert len(md.arrow_labels) == len(phi.arrows), name
        assert md.certificate.ok, name


def test_dictionary_certificate_is_a_bijection():
    md = mirror_dictionary(EXAMPLES["square"]())
    matching = dict(md.certificate.matching)
    assert sorted(matching) == sorted(matching.values())


def test_dictionary_convention_is_recorded_verbatim():
    md = mirror_dictionary(EXAMPLES["interval"]())
    assert md.a_side_convention == A_SIDE_CONVENTION


def test_dictionary_serializations_are_stable():
    md = mirror_dictionary(EXAMPLES["3a1"]())
    blob = json.dumps(md.to_json_dict(), indent=2)
    assert blob == json.dumps(mirror_dictionary(EXAMPLES["3a1"]()).to_json_dict(), indent=2)
    text = md.to_text()
    assert "a" in text and "u" in text


def test_restriction_pair_vertex_of_necklace():
    pair = restriction_pairs(EXAMPLES["necklace2"](), ["v1"])
    assert pair.closed == ("v1",)
    assert pair.a_removed == ("e1", "e2", "v2")
    assert pair.b_descriptor is not None
    assert {o.stratum for o in pair.b_descriptor.diagram.objects} >= {"v1"}


def test_restriction_pair_empty_closed_set():
    pair = restriction_pairs(EXAMPLES["3a1"](), [])
    assert pair.closed == ()
    assert pair.b_descriptor is None
    # removing everything strips every handle
    full = handle_plan(EXAMPLES["3a1"]())
    assert set(pair.a_removed) == {h.stratum for h in full.handles}


def test_restriction_pair_whole_space():
    tri = EXAMPLES["3a1"]()
    pair = restriction_pairs(tri, [s.name for s in tri.strata])
    assert pair.a_removed == ()


def test_restriction_pairs_reject_non_closed_sets():
    with pytest.raises(ValueError):
        restriction_pairs(EXAMPLES["necklace2"](), ["e1"])
    with pytest.raises(ValueError):
        restriction_pairs(EXAMPLES["3a1"](), ["mystery"])


def test_restriction_nesting_is_contravariant():
    sq = EXAMPLES["square"]()
    small = restriction_pairs(sq, ["(s2,s2)"])
    big = restriction_pairs(sq, ["(s2,s2)", "(s2,s3)", "(s2,s0)"])
    assert set(big.a_removed) <= set(small.a_removed)


def test_restriction_gluing_identities_on_corners():
    sq = EXAMPLES["square"]()
    c = ["(s2,s2)"]
    d = ["(s3,s3)"]
    union = sorted(set(c) | set(d))
    inter = sorted(set(c) & set(d))
    rc = restriction_pairs(sq, c)
    rd = restriction_pairs(sq, d)
    ru = restriction_pairs(sq, union)
    ri = restriction_pairs(sq, inter)
    assert set(ru.a_removed) == set(rc.a_removed) & set(rd.a_removed)
    assert set(ri.a_removed) == set(rc.a_removed) | set(rd.a_removed)


def test_restriction_pair_json_round_trip():
    pair = restriction_pairs(EXAMPLES["necklace2"](), ["v1"])
    d = pair.to_json_dict()
    assert json.loads(json.dumps(d)) == d
    assert "closed" in d and "removed_handles" in d
    assert "v1" in pair.to_text()

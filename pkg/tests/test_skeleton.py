"""Conic Lagrangian skeleta: strata, Euler counts, handles, section checks."""

import pytest

from fanifolds.examples import (
    EXAMPLES,
    a1_fan,
    orthant_fan,
    p1_fan,
    projective_fan,
    quadric_fan,
    stacky_quadric_fan,
)
from fanifolds.fanifold import from_fan, sphere_section
from fanifolds.fans import resolve_to_smooth
from fanifolds.lattice import lattice_map
from fanifolds.skeleton import (
    canonical_section_check,
    euler_characteristic_c,
    fltz_pieces,
    handle_plan,
    skeleton_model,
    skeleton_refinement_check,
)


def test_fltz_pieces_plain_fan():
    pieces = fltz_pieces(projective_fan(2))
    assert len(pieces) == 7
    for p in pieces:
        assert p.torus_rank == 2 - p.cone.dim
        assert p.component_group == ()
        assert p.group_order == 1


def test_fltz_pieces_stacky_quadric():
    pieces = fltz_pieces(stacky_quadric_fan())
    two = [p for p in pieces if p.cone.dim == 2]
    assert len(two) == 1
    assert two[0].component_group == (2,)
    assert two[0].group_order == 2
    assert two[0].torus_rank == 0


def test_skeleton_strata_are_half_dimensional():
    for name, build in sorted(EXAMPLES.items()):
        model = skeleton_model(build())
        assert model.dimension_check(), name
        assert model.assembly_check(), name


def test_skeleton_counts_flags_of_a_fan():
    # one skeleton stratum per pair (cone of the fan at F) over each F;
    # for from_fan these biject with flags sigma <= tau of the fan
    fan = projective_fan(2)
    model = skeleton_model(from_fan(fan))
    flags = sum(
        1 for c in fan.cones for d in fan.cones if d.contains_cone(c)
    )
    assert len(model.strata) == flags == 19


def test_skeleton_square_count():
    model = skeleton_model(EXAMPLES["square"]())
    assert len(model.strata) == 25
    # face: 1 chart; edges: 2 each; corners: 4 each
    assert len(model.strata_over("(s0,s0)")) == 1
    assert len(model.strata_over("(s2,s0)")) == 2
    assert len(model.strata_over("(s2,s2)")) == 4


def test_skeleton_incidences_close_downward():
    model = skeleton_model(EXAMPLES["square"]())
    n = len(model.strata)
    for i, j in model.incidences:
        assert 0 <= i < n and 0 <= j < n and i != j


def test_euler_characteristic_oracles():
    assert euler_characteristic_c(from_fan(a1_fan())) == -1
    assert euler_characteristic_c(from_fan(p1_fan())) == -2
    assert euler_characteristic_c(from_fan(orthant_fan(2))) == 1
    assert euler_characteristic_c(from_fan(projective_fan(2))) == 3
    assert euler_characteristic_c(from_fan(projective_fan(3))) == -4
    assert euler_characteristic_c(EXAMPLES["interval"]()) == -1
    assert euler_characteristic_c(EXAMPLES["3a1"]()) == 1
    assert euler_characteristic_c(EXAMPLES["square"]()) == 1
    assert euler_characteristic_c(EXAMPLES["unigon"]()) == 1
    for r in (1, 2, 3):
        assert euler_characteristic_c(EXAMPLES[f"necklace{r}"]()) == -r


def test_euler_characteristic_stacky_quadric_doubles():
    # the Z/2 isotropy doubles the contribution of the cone point stratum
    assert euler_characteristic_c(EXAMPLES["quadric_stacky"]()) == 2
    assert euler_characteristic_c(from_fan(quadric_fan())) == 1


def test_handle_plan_square():
    plan = handle_plan(EXAMPLES["square"]())
    assert plan.counts_by_index() == {0: 4, 1: 4, 2: 1}
    assert len(plan) == 9
    top = [h for h in plan.handles if h.index == 2]
    assert top[0].stratum == "(s0,s0)"
    assert len(top[0].attaching) == 8  # four edges and four corners flow in


def test_handle_plan_labels_and_attaching():
    plan = handle_plan(EXAMPLES["3a1"]())
    by_name = {h.stratum: h for h in plan.handles}
    assert by_name["a"].label == "T*(a)^o x T*T^1"
    assert by_name["a"].attaching == ()
    assert by_name["u"].attaching == ("a", "b", "c")
    assert by_name["u"].attaching_label == "d(u)^o x T^0"
    # minimal strata have nothing to attach along
    assert all((not h.attaching) == (h.index == 1) for h in plan.handles)


def test_handle_plan_self_gluing_multiplicity():
    plan = handle_plan(EXAMPLES["necklace1"]())
    edge = next(h for h in plan.handles if h.stratum == "e1")
    assert edge.attaching == ("v1", "v1")


def test_handle_plan_trivial_flags_for_conical_diagrams():
    plan = handle_plan(from_fan(orthant_fan(2)))
    for h in plan.handles:
        assert h.trivial == (h.index > 0)
    # glued diagrams are not conical, nothing is marked trivial
    assert not any(h.trivial for h in handle_plan(EXAMPLES["square"]()).handles)


def test_handles_sorted_by_index_then_name():
    plan = handle_plan(EXAMPLES["square"]())
    keys = [(h.index, h.stratum) for h in plan.handles]
    assert keys == sorted(keys)


def test_canonical_section_check_examples():
    for name in ("3a1", "square", "necklace2", "interval", "quadric_stacky"):
        assert canonical_section_check(skeleton_model(EXAMPLES[name]())), name


def test_canonical_section_check_rejects_corrupt_iso():
    sq = EXAMPLES["square"]()
    model = skeleton_model(sq)
    # pick an arrow whose quotient keeps a direction (corner -> edge), then
    # replace its identification by a non-unimodular map
    bad = next(
        a
        for a in sq.arrows
        if sq.stratum(a.source).lattice_rank
        - sq.stratum(a.source).plain_fan.cones[a.cone_index].dim
        == 1
    )
    object.__setattr__(bad, "iso", lattice_map(((2,),), 1, 1))
    assert not canonical_section_check(model)


def test_skeleton_refinement_check_quadric():
    coarse = stacky_quadric_fan()
    fine = resolve_to_smooth(coarse.fan).fan
    assert skeleton_refinement_check(coarse, fine)
    assert skeleton_refinement_check(coarse.fan, fine)
    with pytest.raises(ValueError):
        skeleton_refinement_check(fine, coarse.fan)  # not a refinement that way


def test_sphere_section_skeleton():
    model = skeleton_model(sphere_section(orthant_fan(2)))
    assert model.dimension_check()
    assert len(model.strata) == 1 + 2 + 2  # edge torus chart + two endpoints' pairs

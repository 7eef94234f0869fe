"""Cones, fans, quotients, subdivisions, and stacky structure."""

import random

from fanifolds.cones import Cone, dual_monoid, product_cone, zero_cone
from fanifolds.examples import (
    a1_fan,
    orthant_fan,
    p1_fan,
    projective_fan,
    quadric_fan,
    stacky_quadric_fan,
)
from fanifolds.fans import (
    Fan,
    StackyFan,
    face_closure,
    fan_from_ray_indices,
    quotient_fan,
    refines,
    resolve_to_smooth,
    stellar_subdivision,
)
from fanifolds.lattice import lattice_map


def test_cone_basics():
    c = Cone([(1, 0), (0, 1)], 2)
    assert c.dim == 2
    assert len(c.facets()) == 2
    assert len(c.faces()) == 4  # itself, two rays, origin
    assert c.contains_cone(Cone([(1, 1)], 2))
    assert not Cone([(1, 1)], 2).contains_cone(c)
    assert zero_cone(3).dim == 0


def test_cone_extremal_rays_drop_redundant_generators():
    c = Cone([(1, 0), (1, 1), (0, 1)], 2)
    assert sorted(c.extremal_rays) == [(0, 1), (1, 0)]
    assert c == Cone([(1, 0), (0, 1)], 2)


def test_dual_monoid_quadric():
    # dual of cone<(-1,1),(1,1)> needs three hilbert generators
    gens = dual_monoid(Cone([(-1, 1), (1, 1)], 2))
    assert sorted(gens) == [(-1, 1), (0, 1), (1, 1)]


def test_product_cone():
    p = product_cone(Cone([(1,)], 1), Cone([(1,)], 1))
    assert p.rank == 2
    assert p == Cone([(1, 0), (0, 1)], 2)


def test_fan_validate_catches_overlap():
    bad = Fan([Cone([(1, 0), (0, 1)], 2), Cone([(1, 1), (1, -1)], 2)], 2)
    assert bad.validate()  # interiors overlap


def test_fan_properties_projective_plane():
    props = projective_fan(2).properties()
    assert props["valid"] and props["complete"] and props["smooth"]
    assert props["simplicial"] and props["face_closed"]
    assert props["n_cones"] == 7


def test_fan_properties_quadric():
    props = quadric_fan().properties()
    assert props["valid"] and not props["complete"]
    assert props["simplicial"] and not props["smooth"]
    assert props["non_smooth_multiplicity"] == 2


def test_fan_from_ray_indices():
    fan = fan_from_ray_indices([(1, 0), (0, 1)], [[], [0], [1], [0, 1]], 2)
    assert len(fan.cones) == 4
    assert fan.is_face_closed


def test_quotient_fan_star_of_projective_ray():
    fan = projective_fan(2)
    k = fan.cone_index(Cone([(1, 0)], 2))
    fq = quotient_fan(fan, k)
    # star of a ray in the plane fan is a complete line fan
    assert fq.fan.rank == 1
    assert fq.fan.is_complete
    assert len(fq.fan.cones) == 3
    assert fq.torsion == ()
    # section really sections the projection
    comp = fq.projection.compose(fq.section)
    assert comp.matrix == ((1,),)


def test_quotient_fan_star_indices_align():
    fan = projective_fan(2)
    k = fan.cone_index(Cone([(1, 0)], 2))
    fq = quotient_fan(fan, k)
    sigma = fan.cones[k]
    for qi, si in enumerate(fq.star):
        assert fan.cones[si].contains_cone(sigma)
        assert fan.cones[si].image(fq.projection) == fq.fan.cones[qi]


def test_resolve_quadric():
    result = resolve_to_smooth(quadric_fan())
    assert result.fan.is_smooth
    assert (0, 1) in result.added_rays
    assert refines(result.fan, quadric_fan()).ok


def test_resolve_smooth_fan_is_identity():
    fan = projective_fan(2)
    result = resolve_to_smooth(fan)
    assert result.steps == ()
    assert result.fan is fan


def test_stellar_subdivision_stays_face_closed():
    fan = orthant_fan(2)
    sub = stellar_subdivision(fan, (1, 1))
    assert not sub.validate()
    assert sub.is_face_closed
    assert refines(sub, fan).ok
    assert not refines(fan, sub).ok


def test_refines_failure_reports_problem():
    r = refines(orthant_fan(2), projective_fan(2))
    assert not r.ok
    assert r.problems


def test_refines_randomized_subdivisions():
    rng = random.Random(6021)
    for _ in range(25):
        fan = [orthant_fan(2), projective_fan(2), quadric_fan()][rng.randrange(3)]
        cur = fan
        for _ in range(rng.randint(1, 3)):
            two = [c for c in cur.cones if c.dim == 2]
            if not two:
                break
            c = two[rng.randrange(len(two))]
            point = tuple(sum(g[i] for g in c.gens) for i in range(2))
            cur = stellar_subdivision(cur, point)
        assert refines(cur, fan).ok


def test_stacky_quadric_component_group():
    sf = stacky_quadric_fan()
    two_cone = next(c for c in sf.fan.cones if c.dim == 2)
    assert sf.component_group(two_cone) == (2,)
    assert sf.group_order(two_cone) == 2
    # rays and the origin carry no isotropy
    for c in sf.fan.cones:
        if c.dim < 2:
            assert sf.component_group(c) == ()
    assert not sf.is_smooth


def test_plain_fan_has_trivial_component_groups():
    sf = StackyFan(projective_fan(2), {r: 1 for r in projective_fan(2).rays})
    for c in sf.fan.cones:
        assert sf.component_group(c) == ()


def test_stacky_multiples_create_isotropy_on_smooth_cone():
    fan = orthant_fan(2)
    sf = StackyFan(fan, {(1, 0): 2, (0, 1): 3})
    top = next(c for c in fan.cones if c.dim == 2)
    assert sf.group_order(top) == 6
    ray = next(c for c in fan.cones if c.dim == 1 and c.gens[0] == (1, 0))
    assert sf.component_group(ray) == (2,)
    assert sf.stacky_generator((1, 0)) == (2, 0)
    assert sf.fan_tilde().rank == fan.rank


def test_stacky_quotient_propagates_multiples():
    fan = orthant_fan(2)
    sf = StackyFan(fan, {(1, 0): 1, (0, 1): 3})
    k = fan.cone_index(Cone([(1, 0)], 2))
    quotient, fq, warnings = sf.quotient(k)
    assert isinstance(quotient, StackyFan)
    assert quotient.rank == 1
    # the surviving ray keeps its multiple in the quotient lattice
    (ray,) = quotient.rays
    assert quotient.multiples[ray] == 3
    assert not warnings


def test_stacky_rank_zero_quotient_drops_torsion_with_warning():
    sf = stacky_quadric_fan()
    k = next(i for i, c in enumerate(sf.fan.cones) if c.dim == 2)
    quotient, fq, warnings = sf.quotient(k)
    assert quotient.rank == 0
    # the rank-0 lattice cannot carry the Z/2: it survives only in fq.torsion
    assert fq.torsion == (2,)
    assert quotient.fan.rays == ()


def test_face_closure_lists_top_cone_first():
    fan = orthant_fan(2)
    assert fan.cones[0].dim == 2
    assert face_closure(Fan([Cone([(1,)], 1)], 1)).is_face_closed


def test_cone_image_under_map():
    c = Cone([(1, 0), (0, 1)], 2)
    proj = lattice_map(((1, 0),), 2, 1)
    assert c.image(proj) == Cone([(1,)], 1)
    collapsed = Cone([(0, 1)], 2).image(lattice_map(((1, 0),), 2, 1))
    assert collapsed.dim == 0


def test_small_fans_shapes():
    assert len(a1_fan().cones) == 2
    assert len(p1_fan().cones) == 3
    assert p1_fan().is_complete
    assert not a1_fan().is_complete
    assert orthant_fan(3).rank == 3
    assert len(orthant_fan(3).cones) == 8
    assert Fan([Cone([(1, 0)], 2), Cone([(1,)], 1)], 2).validate() == [
        "cone 1: ambient rank 1 != 2"
    ]

"""Fans of strongly convex cones: validity, quotients, subdivision, stacky data.

A fan here is an ordered list of cones (order matters to callers that index
into it); it is *not* required to contain every face of every cone.  The
pairwise condition -- any two cones meet in a common face -- is still enforced
by ``Fan.validate``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cones import Cone, dual_monoid, zero_cone
from .lattice import (
    LatticeMap,
    Mat,
    Vec,
    dot,
    lattice_map,
    mat,
    primitivize,
    quotient_with_torsion,
    smith_normal_form,
    vec,
    vec_add,
    vec_scale,
)


class Fan:
    """Ordered collection of strongly convex cones meeting along faces."""

    def __init__(self, cones: Iterable[Cone], rank: int):
        self.rank = rank
        self.cones = tuple(cones)

    @classmethod
    def from_generators(
        cls, cone_gens: Iterable[Iterable[Sequence[int]]], rank: int
    ) -> "Fan":
        return cls([Cone(gens, rank) for gens in cone_gens], rank)

    def __len__(self) -> int:
        return len(self.cones)

    def __repr__(self) -> str:
        return f"Fan(rank={self.rank}, n_cones={len(self.cones)})"

    @property
    def rays(self) -> Mat:
        """All extremal rays appearing in the fan, sorted."""
        seen: set[Vec] = set()
        for c in self.cones:
            seen.update(c.extremal_rays)
        return tuple(sorted(seen))

    def cones_of_dim(self, d: int) -> list[int]:
        return [i for i, c in enumerate(self.cones) if c.dim == d]

    def maximal_cone_indices(self) -> list[int]:
        out = []
        for i, c in enumerate(self.cones):
            if not any(
                j != i and self.cones[j].contains_cone(c) for j in range(len(self.cones))
            ):
                out.append(i)
        return out

    def cone_index(self, cone: Cone) -> int | None:
        for i, c in enumerate(self.cones):
            if c == cone:
                return i
        return None

    def support_contains(self, v: Sequence[int]) -> bool:
        return any(c.contains(v) for c in self.cones)

    # -- validity and shape ------------------------------------------------

    def validate(self) -> list[str]:
        """Problems that make this not a fan; empty when valid."""
        problems: list[str] = []
        for i, c in enumerate(self.cones):
            if c.rank != self.rank:
                problems.append(f"cone {i}: ambient rank {c.rank} != {self.rank}")
                return problems
            if not c.is_strongly_convex:
                problems.append(f"cone {i}: contains a line")
        seen: dict[tuple, int] = {}
        for i, c in enumerate(self.cones):
            if c.key in seen:
                problems.append(f"cone {i} duplicates cone {seen[c.key]}")
            else:
                seen[c.key] = i
        if problems:
            return problems
        for i, j in itertools.combinations(range(len(self.cones)), 2):
            ci, cj = self.cones[i], self.cones[j]
            meet = ci.intersection(cj)
            if not (meet.is_face_of(ci) and meet.is_face_of(cj)):
                problems.append(
                    f"cones {i} and {j} do not intersect in a common face"
                )
        return problems

    @property
    def is_valid(self) -> bool:
        return not self.validate()

    @property
    def is_face_closed(self) -> bool:
        keys = {c.key for c in self.cones}
        return all(f.key in keys for c in self.cones for f in c.faces())

    @property
    def is_simplicial(self) -> bool:
        return all(c.is_simplicial for c in self.cones)

    @property
    def is_smooth(self) -> bool:
        return all(c.is_smooth for c in self.cones)

    @property
    def is_complete(self) -> bool:
        return self.completeness_witness() is None

    def completeness_witness(self) -> str | None:
        """None when the support is everything, else a short reason."""
        if not self.is_face_closed:
            return "not closed under taking faces"
        if not self.cones:
            return "empty fan"
        if self.rank == 0:
            return None
        maximal = self.maximal_cone_indices()
        tops = [self.cones[i] for i in maximal]
        if any(c.dim != self.rank for c in tops):
            bad = next(c for c in tops if c.dim != self.rank)
            return f"maximal cone {list(bad.gens)} has dimension {bad.dim} < {self.rank}"
        shared: dict[int, set[int]] = {i: set() for i in range(len(tops))}
        for i, c in enumerate(tops):
            for f in c.facets():
                others = [
                    j for j, c2 in enumerate(tops) if j != i and c2.contains_cone(f)
                ]
                if len(others) != 1:
                    return (
                        f"facet {list(f.gens)} of a maximal cone is shared by "
                        f"{len(others)} other maximal cones, expected 1"
                    )
                shared[i].add(others[0])
        reached = {0}
        frontier = [0]
        while frontier:
            nxt = shared[frontier.pop()] - reached
            reached |= nxt
            frontier.extend(nxt)
        if len(reached) != len(tops):
            return "maximal cones do not form one facet-connected component"
        return None

    def properties(self) -> dict:
        """Summary of the usual fan predicates with first witnesses."""
        problems = self.validate()
        out: dict = {
            "rank": self.rank,
            "n_cones": len(self.cones),
            "valid": not problems,
            "problems": problems,
        }
        if problems:
            return out
        keys = {c.key for c in self.cones}
        missing = None
        for c in self.cones:
            for f in c.faces():
                if f.key not in keys:
                    missing = [list(g) for g in f.gens]
                    break
            if missing:
                break
        out["face_closed"] = missing is None
        if missing is not None:
            out["missing_face"] = missing
        bad_simp = next((c for c in self.cones if not c.is_simplicial), None)
        out["simplicial"] = bad_simp is None
        if bad_simp is not None:
            out["non_simplicial_cone"] = [list(g) for g in bad_simp.gens]
        bad_smooth = next((c for c in self.cones if not c.is_smooth), None)
        out["smooth"] = bad_smooth is None
        if bad_smooth is not None:
            out["non_smooth_cone"] = [list(g) for g in bad_smooth.gens]
            if bad_smooth.is_simplicial:
                out["non_smooth_multiplicity"] = bad_smooth.multiplicity
        witness = self.completeness_witness()
        out["complete"] = witness is None
        if witness is not None:
            out["completeness_witness"] = witness
        return out


def fan_from_ray_indices(
    rays: Sequence[Sequence[int]],
    cone_ray_indices: Sequence[Sequence[int]],
    rank: int,
) -> Fan:
    """Build a fan from a ray table plus cones given as ray index lists."""
    rays = [vec(r) for r in rays]
    cones = []
    for idx in cone_ray_indices:
        cones.append(Cone([rays[i] for i in idx], rank))
    return Fan(cones, rank)


# -- quotients ---------------------------------------------------------------


@dataclass(frozen=True)
class FanQuotient:
    """Star of a cone pushed to the quotient lattice of its span."""

    fan: Fan
    projection: LatticeMap
    section: LatticeMap
    star: tuple[int, ...]  # source cone indices, aligned with fan.cones
    torsion: tuple[int, ...]


def quotient_fan(fan: Fan, cone_index: int) -> FanQuotient:
    sigma = fan.cones[cone_index]
    q = quotient_with_torsion(fan.rank, sigma.gens)
    star = tuple(
        i for i, c in enumerate(fan.cones) if c.contains_cone(sigma)
    )
    images = [fan.cones[i].image(q.projection) for i in star]
    for im in images:
        if not im.is_strongly_convex:
            raise ValueError("quotient image is not strongly convex")
    keys = [im.key for im in images]
    if len(set(keys)) != len(keys):
        raise ValueError("two star cones project to the same image")
    return FanQuotient(
        fan=Fan(images, q.free_rank),
        projection=q.projection,
        section=q.section,
        star=star,
        torsion=q.torsion,
    )


# -- subdivision and resolution ----------------------------------------------


def face_closure(fan: Fan) -> Fan:
    """The same fan with every face of every cone appended (deduplicated)."""
    cones = list(fan.cones)
    keys = {c.key for c in cones}
    extra: list[Cone] = []
    for c in fan.cones:
        for f in c.faces():
            if f.key not in keys:
                keys.add(f.key)
                extra.append(f)
    extra.sort(key=lambda c: (c.dim, c.gens))
    return Fan(cones + extra, fan.rank)


def stellar_subdivision(fan: Fan, point: Sequence[int]) -> Fan:
    """Subdivide every cone containing the given lattice point.

    A cone through the point is replaced by the cones spanned by the point
    together with the facets not containing it; other cones are kept.  The
    point must lie in the fan's support.  Face-closedness is preserved.
    """
    v = primitivize(vec(point))
    if not fan.support_contains(v):
        raise ValueError("subdivision point is outside the fan support")
    closed = fan.is_face_closed
    out: list[Cone] = []
    seen: set[tuple] = set()

    def push(c: Cone) -> None:
        if c.key not in seen:
            seen.add(c.key)
            out.append(c)

    for c in fan.cones:
        if not c.contains(v):
            push(c)
            continue
        for f in c.facets():
            if not f.contains(v):
                push(Cone(list(f.gens) + [v], fan.rank))
    result = Fan(out, fan.rank)
    return face_closure(result) if closed else result


@dataclass(frozen=True)
class ResolveResult:
    fan: Fan
    added_rays: tuple[Vec, ...]
    steps: tuple[Vec, ...]  # subdivision points in order


def _parallelepiped_point(cone: Cone) -> Vec | None:
    """A nonzero lattice point in the half-open span box of a simplicial cone."""
    gens = cone.extremal_rays
    n = cone.multiplicity
    if n == 1:
        return None
    best: tuple | None = None
    d = len(gens)
    for ks in itertools.product(range(n), repeat=d):
        if not any(ks):
            continue
        pt_num = [
            sum(k * g[i] for k, g in zip(ks, gens)) for i in range(cone.rank)
        ]
        if any(x % n for x in pt_num):
            continue
        cand = (sum(ks), ks)
        if best is None or cand < best:
            best = cand
    if best is None:
        return None
    ks = best[1]
    return primitivize(
        tuple(sum(k * g[i] for k, g in zip(ks, gens)) // n for i in range(cone.rank))
    )


def resolve_to_smooth(fan: Fan, max_steps: int = 1000) -> ResolveResult:
    """Refine until every cone is smooth, by repeated stellar subdivision.

    Non-simplicial cones are first split at the primitive sum of their rays;
    then simplicial cones of multiplicity > 1 are split at a lattice point of
    the fundamental box, which strictly lowers the worst multiplicity.
    """
    current = fan
    steps: list[Vec] = []
    for _ in range(max_steps):
        target = next((c for c in current.cones if not c.is_simplicial), None)
        if target is not None:
            total = (0,) * current.rank
            for g in target.extremal_rays:
                total = vec_add(total, g)
            v = primitivize(total)
            steps.append(v)
            current = stellar_subdivision(current, v)
            continue
        rough = [c for c in current.cones if not c.is_smooth]
        if not rough:
            before = {r for r in fan.rays}
            added = tuple(r for r in current.rays if r not in before)
            return ResolveResult(fan=current, added_rays=added, steps=tuple(steps))
        worst = max(rough, key=lambda c: (c.multiplicity, c.gens))
        v = _parallelepiped_point(worst)
        if v is None:
            raise AssertionError("multiplicity > 1 but no box point found")
        steps.append(v)
        current = stellar_subdivision(current, v)
    raise RuntimeError("resolution did not terminate in max_steps")


# -- refinement --------------------------------------------------------------


def cones_cover(sigma: Cone, pieces: Sequence[Cone]) -> bool:
    """Do the given subcones tile the cone?  Facet-pairing criterion.

    Assumes the pieces come from a valid fan (pairwise face intersections)
    and are contained in ``sigma``.
    """
    d = sigma.dim
    if d == 0:
        return any(p.dim == 0 for p in pieces)
    tops = [p for p in pieces if p.dim == d]
    if not tops:
        return False
    sigma_facets = sigma.facets()
    neighbours: dict[int, set[int]] = {i: set() for i in range(len(tops))}
    for i, t in enumerate(tops):
        for f in t.facets():
            on_boundary = any(sf.contains_cone(f) for sf in sigma_facets)
            sharers = [
                j for j, t2 in enumerate(tops) if j != i and t2.contains_cone(f)
            ]
            if on_boundary:
                if sharers:
                    return False
            elif len(sharers) != 1:
                return False
            else:
                neighbours[i].add(sharers[0])
    reached = {0}
    frontier = [0]
    while frontier:
        nxt = neighbours[frontier.pop()] - reached
        reached |= nxt
        frontier.extend(nxt)
    return len(reached) == len(tops)


@dataclass(frozen=True)
class RefinesResult:
    ok: bool
    problems: tuple[str, ...] = ()


def refines(fine: Fan, coarse: Fan) -> RefinesResult:
    """Is every fine cone inside a coarse cone, with equal total support?"""
    problems: list[str] = []
    if fine.rank != coarse.rank:
        return RefinesResult(False, ("ambient ranks differ",))
    for i, c in enumerate(fine.cones):
        if not any(big.contains_cone(c) for big in coarse.cones):
            problems.append(f"fine cone {i} is not inside any coarse cone")
    for i, big in enumerate(coarse.cones):
        pieces = [c for c in fine.cones if big.contains_cone(c)]
        if not cones_cover(big, pieces):
            problems.append(f"coarse cone {i} is not tiled by its fine cones")
    return RefinesResult(not problems, tuple(problems))


# -- stacky fans -------------------------------------------------------------


class StackyFan:
    """A fan with a positive integer multiple attached to each ray.

    The ray times its multiple is the distinguished lattice generator; the
    cokernel torsion of those generators is the finite group datum carried by
    each cone.
    """

    def __init__(self, fan: Fan, multiples: Mapping[Sequence[int], int] | None = None):
        self.fan = fan
        mm: dict[Vec, int] = {r: 1 for r in fan.rays}
        if multiples:
            for r, k in multiples.items():
                r = vec(r)
                if r not in mm:
                    raise ValueError(f"{r} is not a ray of the fan")
                k = int(k)
                if k < 1:
                    raise ValueError("ray multiples must be positive")
                mm[r] = k
        self.multiples = mm

    @property
    def rank(self) -> int:
        return self.fan.rank

    @property
    def rays(self) -> Mat:
        return self.fan.rays

    def stacky_generator(self, ray: Sequence[int]) -> Vec:
        ray = vec(ray)
        return vec_scale(self.multiples[ray], ray)

    def stacky_gens(self, cone: Cone) -> Mat:
        return tuple(self.stacky_generator(r) for r in cone.extremal_rays)

    def beta_matrix(self) -> Mat:
        """Map from the ray-indexed lattice: columns are the stacky generators."""
        cols = [self.stacky_generator(r) for r in self.rays]
        return tuple(
            tuple(col[i] for col in cols) for i in range(self.rank)
        )

    def fan_tilde(self) -> Fan:
        """Standard-basis lift: each cone becomes a coordinate cone upstairs."""
        rays = self.rays
        index = {r: i for i, r in enumerate(rays)}
        n = len(rays)
        lifted = []
        for c in self.fan.cones:
            gens = []
            for r in c.extremal_rays:
                e = [0] * n
                e[index[r]] = 1
                gens.append(tuple(e))
            lifted.append(Cone(gens, n))
        return Fan(lifted, n)

    def component_group(self, cone: Cone) -> tuple[int, ...]:
        """Cokernel torsion of the stacky generators of the cone."""
        return quotient_with_torsion(self.rank, self.stacky_gens(cone)).torsion

    def group_order(self, cone: Cone) -> int:
        out = 1
        for d in self.component_group(cone):
            out *= d
        return out

    @property
    def is_smooth(self) -> bool:
        for c in self.fan.cones:
            gens = self.stacky_gens(c)
            if len(gens) != c.dim:
                return False
            snf = smith_normal_form(mat(gens))
            if snf.rank != len(gens) or any(d != 1 for d in snf.invariant_factors):
                return False
        return True

    def quotient(self, cone_index: int) -> tuple["StackyFan", FanQuotient, list[str]]:
        """Push the stacky data through a cone quotient.

        Each quotient ray inherits the projected stacky generator of its
        unique preimage ray; if the preimage is ambiguous the multiple falls
        back to 1 and a warning is recorded.
        """
        fq = quotient_fan(self.fan, cone_index)
        sigma = self.fan.cones[cone_index]
        warnings: list[str] = []
        multiples: dict[Vec, int] = {}
        for rbar in fq.fan.rays:
            pre = []
            for c in (self.fan.cones[i] for i in fq.star):
                for r in c.extremal_rays:
                    im = fq.projection(r)
                    if any(im) and primitivize(im) == rbar and r not in pre:
                        pre.append(r)
            if len(pre) != 1:
                warnings.append(
                    f"quotient ray {rbar}: {len(pre)} preimage rays, keeping multiple 1"
                )
                continue
            im = fq.projection(self.stacky_generator(pre[0]))
            k = 0
            prim = primitivize(im)
            if prim == rbar:
                nz = next(i for i, x in enumerate(im) if x)
                k = im[nz] // rbar[nz]
            if k < 1:
                warnings.append(
                    f"quotient ray {rbar}: stacky generator does not project to a "
                    "positive multiple, keeping multiple 1"
                )
                continue
            multiples[rbar] = k
        return StackyFan(fq.fan, multiples), fq, warnings


def dual_cone_monoid(fan: Fan, cone_index: int) -> tuple[Vec, ...]:
    """Monoid generators of the dual cone of the selected fan cone."""
    return dual_monoid(fan.cones[cone_index])

"""Rational polyhedral cones over Z with exact dual descriptions.

A cone is stored by integer ray generators.  The dual description (facet
normals plus the perpendicular lattice) is computed with a double-description
pass, so membership, faces, relative interiors and Hilbert-style monoid
generators are all exact -- no floating point anywhere.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, Sequence

from .lattice import (
    LatticeMap,
    Mat,
    Vec,
    dot,
    identity_matrix,
    integer_kernel,
    invert_unimodular,
    mat,
    matrix_rank,
    primitivize,
    row_hermite,
    smith_normal_form,
    vec,
    vec_scale,
    vec_sub,
)


def _dedup(vectors: Iterable[Vec]) -> list[Vec]:
    out: list[Vec] = []
    seen: set[Vec] = set()
    for v in vectors:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _step(
    lineality: list[Vec],
    rays: list[Vec],
    a: Vec,
    processed: list[Vec],
) -> tuple[list[Vec], list[Vec]]:
    """One double-description refinement by the half-space <a, x> >= 0."""
    vals_l = [dot(a, l) for l in lineality]
    hit = next((i for i, v in enumerate(vals_l) if v != 0), None)
    if hit is not None:
        l0, c0 = lineality[hit], vals_l[hit]
        if c0 < 0:
            l0, c0 = vec_scale(-1, l0), -c0
        new_lin = [
            primitivize(vec_sub(vec_scale(c0, l), vec_scale(vals_l[i], l0)))
            for i, l in enumerate(lineality)
            if i != hit
        ]
        new_rays = [
            primitivize(vec_sub(vec_scale(c0, r), vec_scale(dot(a, r), l0)))
            for r in rays
        ]
        new_rays.append(l0)
        return new_lin, _dedup(new_rays)

    vals = [dot(a, r) for r in rays]
    if all(v >= 0 for v in vals):
        return lineality, rays
    keep = [r for r, v in zip(rays, vals) if v >= 0]
    pos = [(r, v) for r, v in zip(rays, vals) if v > 0]
    neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
    zero_sets = {
        r: frozenset(i for i, c in enumerate(processed) if dot(c, r) == 0)
        for r in rays
    }
    combos: list[Vec] = []
    for (p, vp), (q, vq) in itertools.product(pos, neg):
        common = zero_sets[p] & zero_sets[q]
        adjacent = not any(
            r is not p and r is not q and zero_sets[r] >= common for r in rays
        )
        if adjacent:
            combos.append(
                primitivize(vec_sub(vec_scale(vp, q), vec_scale(vq, p)))
            )
    return lineality, _dedup(keep + combos)


def dual_description(
    inequalities: Sequence[Sequence[int]],
    equations: Sequence[Sequence[int]] = (),
    rank: int = 0,
) -> tuple[Mat, Mat]:
    """Minimal generators of {x : <a, x> >= 0, <b, x> = 0}.

    Returns (lineality_basis, rays); the lineality part is in canonical
    Hermite form and the rays are primitive, deduplicated and sorted so the
    output is reproducible.
    """
    lineality = [vec(r) for r in identity_matrix(rank)]
    rays: list[Vec] = []
    todo: list[Vec] = []
    for b in equations:
        b = vec(b)
        todo.append(b)
        todo.append(vec_scale(-1, b))
    todo.extend(vec(a) for a in inequalities)
    processed: list[Vec] = []
    for a in todo:
        lineality, rays = _step(lineality, rays, a, processed)
        processed.append(a)
    return row_hermite(lineality, rank), tuple(sorted(rays))


class Cone:
    """Convex rational polyhedral cone spanned by integer generators."""

    def __init__(self, generators: Iterable[Sequence[int]], rank: int):
        self.rank = rank
        gens: list[Vec] = []
        seen: set[Vec] = set()
        for g in generators:
            g = vec(g)
            if len(g) != rank:
                raise ValueError("generator length does not match ambient rank")
            if any(x != 0 for x in g):
                p = primitivize(g)
                if p not in seen:
                    seen.add(p)
                    gens.append(p)
        self.gens = tuple(gens)

    # -- dual data ---------------------------------------------------------

    @cached_property
    def dual_rays(self) -> Mat:
        """Extremal rays of the dual cone (facet data modulo the perp lattice)."""
        return self._dual[1]

    @cached_property
    def perp_basis(self) -> Mat:
        """Saturated basis of {u : <u, v> = 0 for all v in the cone}."""
        return row_hermite(
            integer_kernel(mat(self.gens), len(self.gens), self.rank), self.rank
        )

    @cached_property
    def _dual(self) -> tuple[Mat, Mat]:
        return dual_description(self.gens, (), self.rank)

    @cached_property
    def _primal(self) -> tuple[Mat, Mat]:
        return dual_description(self.dual_rays, self.perp_basis, self.rank)

    @cached_property
    def extremal_rays(self) -> Mat:
        """Minimal generating rays (unique for a strongly convex cone)."""
        return self._primal[1]

    @cached_property
    def lineality_basis(self) -> Mat:
        """Saturated basis of the largest linear subspace inside the cone."""
        rows = list(self.dual_rays) + list(self.perp_basis)
        return row_hermite(
            integer_kernel(mat(rows), len(rows), self.rank), self.rank
        )

    # -- basic invariants --------------------------------------------------

    @cached_property
    def dim(self) -> int:
        return matrix_rank(mat(self.gens))

    @cached_property
    def is_strongly_convex(self) -> bool:
        return not self.lineality_basis

    @cached_property
    def is_simplicial(self) -> bool:
        return self.is_strongly_convex and len(self.extremal_rays) == self.dim

    @cached_property
    def multiplicity(self) -> int:
        """Index of Z(rays) inside the lattice of the spanned subspace."""
        if not self.is_simplicial:
            raise ValueError("multiplicity needs a simplicial cone")
        out = 1
        for d in smith_normal_form(mat(self.extremal_rays)).invariant_factors:
            out *= d
        return out

    @cached_property
    def is_smooth(self) -> bool:
        return self.is_simplicial and (self.dim == 0 or self.multiplicity == 1)

    # -- membership --------------------------------------------------------

    def contains(self, v: Sequence[int]) -> bool:
        v = vec(v)
        return all(dot(l, v) == 0 for l in self.perp_basis) and all(
            dot(r, v) >= 0 for r in self.dual_rays
        )

    def relint_contains(self, v: Sequence[int]) -> bool:
        v = vec(v)
        return all(dot(l, v) == 0 for l in self.perp_basis) and all(
            dot(r, v) > 0 for r in self.dual_rays
        )

    def dual_contains(self, u: Sequence[int]) -> bool:
        u = vec(u)
        return all(dot(u, g) >= 0 for g in self.gens)

    def dual_relint_contains(self, u: Sequence[int]) -> bool:
        u = vec(u)
        return all(dot(u, g) > 0 for g in self.gens)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.gens)

    # -- structure ---------------------------------------------------------

    @cached_property
    def key(self) -> tuple:
        """Equality key: two cones agree iff they agree as point sets."""
        return (self.rank, frozenset(self.extremal_rays), self.lineality_basis)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Cone) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Cone(rank={self.rank}, gens={list(self.gens)})"

    def faces(self) -> list["Cone"]:
        """All faces (cuts by supporting hyperplanes), the cone itself included."""
        if not self.is_strongly_convex:
            raise ValueError("face enumeration needs a strongly convex cone")
        found: dict[frozenset, Cone] = {}
        ext = self.extremal_rays
        for size in range(len(self.dual_rays) + 1):
            for sub in itertools.combinations(self.dual_rays, size):
                kept = frozenset(
                    g for g in ext if all(dot(u, g) == 0 for u in sub)
                )
                if kept not in found:
                    found[kept] = Cone(sorted(kept), self.rank)
        return sorted(found.values(), key=lambda c: (c.dim, c.gens))

    def facets(self) -> list["Cone"]:
        return [f for f in self.faces() if f.dim == self.dim - 1]

    def is_face_of(self, other: "Cone") -> bool:
        return self.key in {f.key for f in other.faces()}

    def intersection(self, other: "Cone") -> "Cone":
        if self.rank != other.rank:
            raise ValueError("ambient ranks differ")
        lin, rays = dual_description(
            list(self.dual_rays) + list(other.dual_rays),
            list(self.perp_basis) + list(other.perp_basis),
            self.rank,
        )
        gens = list(rays)
        for l in lin:
            gens.append(l)
            gens.append(vec_scale(-1, l))
        return Cone(gens, self.rank)

    def image(self, lmap: LatticeMap) -> "Cone":
        if lmap.source.rank != self.rank:
            raise ValueError("map source does not match ambient rank")
        return Cone([lmap(g) for g in self.gens], lmap.target.rank)


ZERO = None  # placeholder so callers can spell zero_cone(rank) explicitly


def zero_cone(rank: int) -> Cone:
    return Cone((), rank)


def dual_monoid(cone: Cone) -> tuple[Vec, ...]:
    """Generators of the monoid {u in Z^n : u >= 0 on the cone}.

    Splits off the perpendicular lattice (contributing a +/- basis) and runs a
    bounded search for the irreducible elements of the pointed remainder: every
    irreducible lies in the fundamental zonotope of the extremal rays, so a
    coordinate box of that size suffices.
    """
    n = cone.rank
    a = mat(cone.gens)
    perp = row_hermite(integer_kernel(a, len(a), n), n)
    out: list[Vec] = []
    for l in perp:
        out.append(l)
        out.append(vec_scale(-1, l))

    snf = smith_normal_form(a)
    r = snf.rank
    if r:
        vinv = invert_unimodular(snf.V)
        comp = [tuple(row[j] for row in vinv) for j in range(r)]
        ineqs = [tuple(dot(g, comp[j]) for j in range(r)) for g in cone.gens]
        lin, rays = dual_description(ineqs, (), r)
        if lin:
            raise AssertionError("pointed reduction still has lineality")

        def inside(c: Vec) -> bool:
            return all(dot(iq, c) >= 0 for iq in ineqs)

        bounds = [sum(abs(rr[j]) for rr in rays) for j in range(r)]
        candidates = [
            c
            for c in itertools.product(*[range(-b, b + 1) for b in bounds])
            if any(c) and inside(c)
        ]
        for x in candidates:
            reducible = any(
                y != x and any(vec_sub(x, y)) and inside(vec_sub(x, y))
                for y in candidates
            )
            if not reducible:
                u = tuple(
                    sum(x[j] * comp[j][i] for j in range(r)) for i in range(n)
                )
                out.append(u)
    return tuple(sorted(_dedup(out)))


def product_cone(a: Cone, b: Cone) -> Cone:
    """Direct product inside the direct sum of the ambient lattices."""
    gens = [g + (0,) * b.rank for g in a.gens]
    gens += [(0,) * a.rank + g for g in b.gens]
    return Cone(gens, a.rank + b.rank)

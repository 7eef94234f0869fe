"""Chart diagrams for glued toric spaces, with exact section censuses.

Every stratum contributes one affine chart per cone of its fan.  Charts are
tied together by two kinds of monomial maps: face localizations inside one
stratum, and collapse maps along fanifold arrows (the monomials not
perpendicular to the collapsed cone are sent to zero).  A global section is
a coefficient tuple compatible with every map, so censuses reduce to exact
linear bookkeeping over the rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cones import Cone
from .fanifold import Fanifold, unrolled_closure
from .fans import StackyFan
from .lattice import Mat, Vec, dot, invert_unimodular, mat_mul, mat_vec, transpose


@dataclass(frozen=True)
class ChartObject:
    stratum: str
    cone_index: int


@dataclass
class DiagramArrow:
    source: int
    target: int
    kind: str  # "restrict" (face localization) or "collapse" (orbit closure)
    cone: Cone | None = None  # for collapse: the cone being collapsed
    forward: Mat | None = None  # collapse: monomial matrix on the perp sublattice
    backward: Mat | None = None  # collapse: preimage matrix (right inverse of forward)


class ToricDiagram:
    def __init__(
        self,
        fanifold: Fanifold,
        objects: Sequence[ChartObject],
        arrows: Sequence[DiagramArrow],
        warnings: Sequence[str] = (),
    ):
        self.fanifold = fanifold
        self.objects = tuple(objects)
        self.arrows = tuple(arrows)
        self.warnings = list(warnings)
        self.index = {o: i for i, o in enumerate(self.objects)}

    def __repr__(self) -> str:
        return f"ToricDiagram(objects={len(self.objects)}, arrows={len(self.arrows)})"

    def object_cone(self, i: int) -> Cone:
        o = self.objects[i]
        return self.fanifold.stratum(o.stratum).plain_fan.cones[o.cone_index]

    def object_rank(self, i: int) -> int:
        return self.fanifold.stratum(self.objects[i].stratum).lattice_rank

    def support(self, i: int, degree: int) -> list[Vec]:
        """Dual-lattice points of the chart monoid inside the coordinate box."""
        rank = self.object_rank(i)
        cone = self.object_cone(i)
        out = []
        for u in itertools.product(range(-degree, degree + 1), repeat=rank):
            if all(dot(u, g) >= 0 for g in cone.gens):
                out.append(u)
        return out

    def apply(self, arrow: DiagramArrow, u: Vec) -> Vec | None:
        """Image of a source monomial, or None when it is sent to zero."""
        if arrow.kind == "restrict":
            return u
        if any(dot(u, g) != 0 for g in arrow.cone.gens):
            return None
        return mat_vec(arrow.forward, u)

    def preimage(self, arrow: DiagramArrow, w: Vec) -> Vec | None:
        """The monomial mapping to w, or None when w is not in the image."""
        if arrow.kind == "restrict":
            src = self.object_cone(arrow.source)
            return w if all(dot(w, g) >= 0 for g in src.gens) else None
        return mat_vec(arrow.backward, w)


def _collapse_matrices(phi: Fanifold, arrow) -> tuple[Mat, Mat]:
    """Monomial matrices of the orbit-closure co-map along a fanifold arrow."""
    fq = phi.arrow_quotient(arrow)
    a = arrow.iso.matrix
    s = fq.section.matrix
    p = fq.projection.matrix
    if not a:
        rank_g = phi.stratum(arrow.source).lattice_rank
        return tuple(() for _ in range(0)), tuple((0,) * 0 for _ in range(rank_g))
    a_inv_t = transpose(invert_unimodular(a))
    forward = mat_mul(a_inv_t, transpose(s))
    backward = mat_mul(transpose(p), transpose(a))
    return forward, backward


def _restriction_arrows(
    phi: Fanifold, objects: Sequence[ChartObject], index: Mapping[ChartObject, int]
) -> list[DiagramArrow]:
    arrows = []
    by_stratum: dict[str, list[int]] = {}
    for i, o in enumerate(objects):
        by_stratum.setdefault(o.stratum, []).append(i)
    for name, members in by_stratum.items():
        fan = phi.stratum(name).plain_fan
        for i, j in itertools.permutations(members, 2):
            big = fan.cones[objects[i].cone_index]
            small = fan.cones[objects[j].cone_index]
            if big.key != small.key and big.contains_cone(small):
                arrows.append(DiagramArrow(source=i, target=j, kind="restrict"))
    return arrows


def full_diagram(phi: Fanifold) -> ToricDiagram:
    """One chart per (stratum, cone) pair, with all induced monomial maps."""
    objects = [
        ChartObject(s.name, k)
        for s in phi.strata
        for k in range(len(s.plain_fan.cones))
    ]
    index = {o: i for i, o in enumerate(objects)}
    arrows = _restriction_arrows(phi, objects, index)
    for fa in phi.arrows:
        sigma = phi.arrow_cone(fa)
        forward, backward = _collapse_matrices(phi, fa)
        amap = phi.arrow_map(fa)
        src_fan = phi.stratum(fa.source).plain_fan
        tgt_fan = phi.stratum(fa.target).plain_fan
        for k, tau in enumerate(src_fan.cones):
            if not tau.contains_cone(sigma):
                continue
            image = tau.image(amap)
            tk = tgt_fan.cone_index(image)
            if tk is None:
                raise ValueError(
                    f"image of cone {k} of {fa.source!r} missing from {fa.target!r}"
                )
            arrows.append(
                DiagramArrow(
                    source=index[ChartObject(fa.source, k)],
                    target=index[ChartObject(fa.target, tk)],
                    kind="collapse",
                    cone=sigma,
                    forward=forward,
                    backward=backward,
                )
            )
    return ToricDiagram(phi, objects, arrows)


def chart_diagram(phi: Fanifold, f_name: str) -> ToricDiagram:
    """Diagram of the closure of one stratum.

    For poset fanifolds this restricts each deeper stratum's cone list to the
    cones pointing at the chosen stratum or its intermediaries.  Otherwise the
    closure is unrolled first.
    """
    if f_name not in phi.by_name:
        raise ValueError(f"unknown stratum {f_name!r}")
    report = phi.validate()
    if not report.valid:
        raise ValueError("invalid fanifold: " + "; ".join(report.errors))
    if not report.is_poset:
        uc = unrolled_closure(phi, f_name)
        diagram = full_diagram(uc.fanifold)
        diagram.warnings.append(
            f"stratum {f_name!r} has an unrolled closure"
            " (the exit diagram is not a poset)"
        )
        return diagram

    below = [s.name for s in phi.strata if phi.leq(s.name, f_name)]
    allowed: dict[str, set[int]] = {}
    for g in below:
        fan = phi.stratum(g).plain_fan
        keep = {i for i, c in enumerate(fan.cones) if c.dim == 0}
        for a in phi.out_arrows(g):
            if a.target in below or a.target == f_name:
                keep.add(a.cone_index)
        allowed[g] = keep
    objects = [
        ChartObject(g, k) for g in below for k in sorted(allowed[g])
    ]
    index = {o: i for i, o in enumerate(objects)}
    arrows = _restriction_arrows(phi, objects, index)
    for fa in phi.arrows:
        if fa.source not in below or fa.target not in below:
            continue
        sigma = phi.arrow_cone(fa)
        forward, backward = _collapse_matrices(phi, fa)
        amap = phi.arrow_map(fa)
        src_fan = phi.stratum(fa.source).plain_fan
        tgt_fan = phi.stratum(fa.target).plain_fan
        for k in sorted(allowed[fa.source]):
            tau = src_fan.cones[k]
            if not tau.contains_cone(sigma):
                continue
            image = tau.image(amap)
            tk = tgt_fan.cone_index(image)
            if tk is None or tk not in allowed[fa.target]:
                continue
            arrows.append(
                DiagramArrow(
                    source=index[ChartObject(fa.source, k)],
                    target=index[ChartObject(fa.target, tk)],
                    kind="collapse",
                    cone=sigma,
                    forward=forward,
                    backward=backward,
                )
            )
    return ToricDiagram(phi, objects, arrows)


# -- census ------------------------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent: list[int] = []
        self.zero: list[bool] = []

    def add(self) -> int:
        self.parent.append(len(self.parent))
        self.zero.append(False)
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        self.parent[ry] = rx
        self.zero[rx] = self.zero[rx] or self.zero[ry]

    def mark_zero(self, x: int) -> None:
        self.zero[self.find(x)] = True


@dataclass
class SectionCensus:
    degree: int
    dimension: int
    object_count: int
    arrow_count: int
    support_sizes: dict[ChartObject, int]
    warnings: list[str] = field(default_factory=list)
    basis: list[dict[tuple[ChartObject, Vec], int]] | None = None


def _census_classes(diagram: ToricDiagram, degree: int):
    """Union-find structure of box coefficients under all compatibility maps."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    uf = _UnionFind()
    supports: list[list[Vec]] = []
    var: dict[tuple[int, Vec], int] = {}
    for i in range(len(diagram.objects)):
        sup = diagram.support(i, degree)
        supports.append(sup)
        for u in sup:
            var[(i, u)] = uf.add()

    def in_box(w: Vec) -> bool:
        return all(abs(c) <= degree for c in w)

    for arrow in diagram.arrows:
        src, tgt = arrow.source, arrow.target
        tgt_cone = diagram.object_cone(tgt)
        for u in supports[src]:
            w = diagram.apply(arrow, u)
            if w is None:
                continue
            if in_box(w):
                uf.union(var[(src, u)], var[(tgt, w)])
            else:
                uf.mark_zero(var[(src, u)])
        for w in supports[tgt]:
            u = diagram.preimage(arrow, w)
            if u is None or not in_box(u):
                uf.mark_zero(var[(tgt, w)])
    return uf, supports, var


def limit_census(
    diagram: ToricDiagram, degree: int, with_basis: bool = False
) -> SectionCensus:
    """Dimension of the compatible coefficient tuples up to the degree box."""
    uf, supports, var = _census_classes(diagram, degree)
    roots = {uf.find(x) for x in range(len(uf.parent))}
    free = sorted(r for r in roots if not uf.zero[r])
    warnings = list(diagram.warnings)
    for i, sup in enumerate(supports):
        if not sup:
            warnings.append(f"chart {diagram.objects[i]} has empty support")
    basis = None
    if with_basis:
        basis = []
        members: dict[int, dict[tuple[ChartObject, Vec], int]] = {r: {} for r in free}
        for (i, u), x in var.items():
            r = uf.find(x)
            if r in members:
                members[r][(diagram.objects[i], u)] = 1
        basis = [members[r] for r in free]
    return SectionCensus(
        degree=degree,
        dimension=len(free),
        object_count=len(diagram.objects),
        arrow_count=len(diagram.arrows),
        support_sizes={
            diagram.objects[i]: len(sup) for i, sup in enumerate(supports)
        },
        warnings=warnings,
        basis=basis,
    )


# -- components --------------------------------------------------------------


@dataclass
class Component:
    stratum: str
    toric_dim: int
    complete: bool
    stacky: bool


def components(phi: Fanifold) -> list[Component]:
    """Irreducible pieces of the glued space: one per minimal stratum."""
    out = []
    for s in phi.minimal_strata():
        out.append(
            Component(
                stratum=s.name,
                toric_dim=s.lattice_rank,
                complete=s.plain_fan.is_complete,
                stacky=isinstance(s.fan, StackyFan),
            )
        )
    return out


# -- subalgebra spans --------------------------------------------------------


Laurent = dict[Vec, int]


def _laurent_mul(a: Laurent, b: Laurent) -> Laurent:
    out: Laurent = {}
    for u, cu in a.items():
        for v, cv in b.items():
            w = tuple(x + y for x, y in zip(u, v))
            c = out.get(w, 0) + cu * cv
            if c:
                out[w] = c
            elif w in out:
                del out[w]
    return out


def _laurent_add(a: Laurent, b: Laurent, scale: int = 1) -> Laurent:
    out = dict(a)
    for u, c in b.items():
        s = out.get(u, 0) + scale * c
        if s:
            out[u] = s
        elif u in out:
            del out[u]
    return out


def _push_stratum(phi: Fanifold, arrow, value: Laurent) -> Laurent:
    forward, _ = _collapse_matrices(phi, arrow)
    sigma = phi.arrow_cone(arrow)
    out: Laurent = {}
    for u, c in value.items():
        if any(dot(u, g) != 0 for g in sigma.gens):
            continue
        w = mat_vec(forward, u)
        out[w] = out.get(w, 0) + c
    return {w: c for w, c in out.items() if c}


def _stratum_values(
    phi: Fanifold, seed: Mapping[str, Laurent]
) -> tuple[dict[str, Laurent], list[str]]:
    """Propagate per-stratum Laurent values up the exit diagram."""
    problems: list[str] = []
    minimal = {s.name for s in phi.minimal_strata()}
    missing = minimal - set(seed)
    extra = set(seed) - minimal
    if missing:
        problems.append(f"no value on minimal strata {sorted(missing)}")
    if extra:
        problems.append(f"values given on non-minimal strata {sorted(extra)}")
    values: dict[str, Laurent] = {k: dict(v) for k, v in seed.items() if k in minimal}
    order = sorted(phi.strata, key=lambda s: s.dim)
    for s in order:
        for a in phi.out_arrows(s.name):
            if s.name not in values:
                continue
            pushed = _push_stratum(phi, a, values[s.name])
            if a.target in values:
                if values[a.target] != pushed:
                    problems.append(
                        f"inconsistent values on {a.target!r} along different arrows"
                    )
            else:
                values[a.target] = pushed
    for s in phi.strata:
        if s.name not in values:
            problems.append(f"stratum {s.name!r} not reached from a minimal stratum")
            values[s.name] = {}
    # regularity: the value must live in every chart's monoid
    for s in phi.strata:
        fan = s.plain_fan
        for c in fan.cones:
            bad = [
                u
                for u in values.get(s.name, {})
                if not all(dot(u, g) >= 0 for g in c.gens)
            ]
            if bad:
                problems.append(
                    f"value on {s.name!r} is not regular on the chart of"
                    f" cone {fan.cone_index(c)} (monomials {sorted(bad)[:3]})"
                )
                break
    return values, problems


@dataclass
class SubalgebraReport:
    degree: int
    census_dimension: int
    span_rank: int
    relations: list[tuple[str, bool]]
    problems: list[str]

    @property
    def spans(self) -> bool:
        return self.span_rank == self.census_dimension and not self.problems


def subalgebra_check(
    phi: Fanifold,
    generators: Sequence[tuple[str, Mapping[str, Laurent]]],
    relations: Sequence[tuple[str, Mapping[tuple[int, ...], int]]] = (),
    degree: int = 4,
    max_factors: int | None = None,
) -> SubalgebraReport:
    """Check relations exactly and spanning of the census space by products."""
    if max_factors is None:
        max_factors = degree
    problems: list[str] = []
    gen_values: list[dict[str, Laurent]] = []
    for name, seed in generators:
        vals, errs = _stratum_values(phi, seed)
        gen_values.append(vals)
        problems.extend(f"generator {name!r}: {e}" for e in errs)

    rel_results: list[tuple[str, bool]] = []
    minimal = [s.name for s in phi.minimal_strata()]
    for rel_name, combo in relations:
        holds = True
        for m in minimal:
            total: Laurent = {}
            for expo, coeff in combo.items():
                term: Laurent = {(0,) * phi.stratum(m).lattice_rank: 1}
                for gi, e in enumerate(expo):
                    for _ in range(e):
                        term = _laurent_mul(term, gen_values[gi][m])
                total = _laurent_add(total, term, coeff)
            if total:
                holds = False
        rel_results.append((rel_name, holds))

    diagram = full_diagram(phi)
    uf, supports, var = _census_classes(diagram, degree)
    roots = sorted(
        {uf.find(x) for x in range(len(uf.parent))} - set()
    )
    free = [r for r in roots if not uf.zero[r]]
    free_pos = {r: i for i, r in enumerate(free)}

    def tuple_vector(values: dict[str, Laurent]) -> list[Fraction] | None:
        coeffs: dict[int, int] = {}
        for i, obj in enumerate(diagram.objects):
            val = values[obj.stratum]
            for u in supports[i]:
                c = val.get(u, 0)
                x = uf.find(var[(i, u)])
                if x in coeffs and coeffs[x] != c:
                    return None
                coeffs[x] = c
        vec = [Fraction(0)] * len(free)
        for x, c in coeffs.items():
            if x in free_pos:
                vec[free_pos[x]] = Fraction(c)
            elif c:
                return None  # nonzero value on a forced-zero class
        return vec

    # row-reduce product tuples incrementally to measure the spanned rank
    rows: list[list[Fraction]] = []
    pivots: list[int] = []

    def absorb(v: list[Fraction]) -> None:
        for r, p in zip(rows, pivots):
            if v[p]:
                f = v[p] / r[p]
                for k in range(len(v)):
                    v[k] -= f * r[k]
        for k, c in enumerate(v):
            if c:
                rows.append(v)
                pivots.append(k)
                return

    names = [g[0] for g in generators]
    for count in range(max_factors + 1):
        for combo in itertools.combinations_with_replacement(
            range(len(generators)), count
        ):
            values = {
                m: {(0,) * phi.stratum(m).lattice_rank: 1} for m in minimal
            }
            for gi in combo:
                for m in list(values):
                    values[m] = _laurent_mul(values[m], gen_values[gi][m])
            # extend to every stratum by pushing forward
            full_vals, errs = _stratum_values(
                phi, {m: values[m] for m in minimal}
            )
            if errs:
                problems.append(
                    "product "
                    + "".join(names[gi] for gi in combo)
                    + ": "
                    + "; ".join(errs)
                )
                continue
            v = tuple_vector(full_vals)
            if v is None:
                problems.append(
                    "product "
                    + ("".join(names[gi] for gi in combo) or "1")
                    + " is inconsistent with the degree box"
                )
                continue
            absorb(v)

    return SubalgebraReport(
        degree=degree,
        census_dimension=len(free),
        span_rank=len(rows),
        relations=rel_results,
        problems=problems,
    )


# -- open complements --------------------------------------------------------


@dataclass
class UFunctorDescriptor:
    closed: tuple[str, ...]
    open_strata: tuple[str, ...]
    diagram: ToricDiagram
    marked: tuple[int, ...]  # chart objects supported on the closed part


def u_functor(phi: Fanifold, closed: Iterable[str]) -> UFunctorDescriptor:
    """Descriptor of the open complement of a closed union of strata."""
    closed = tuple(sorted(set(closed)))
    unknown = set(closed) - set(phi.by_name)
    if unknown:
        raise ValueError(f"unknown strata: {sorted(unknown)}")
    if not phi.is_down_closed(closed):
        raise ValueError("the chosen strata are not closed (missing deeper strata)")
    diagram = full_diagram(phi)
    marked = tuple(
        i for i, o in enumerate(diagram.objects) if o.stratum in closed
    )
    open_strata = tuple(s.name for s in phi.strata if s.name not in closed)
    return UFunctorDescriptor(
        closed=closed, open_strata=open_strata, diagram=diagram, marked=marked
    )


def u_identities_hold(phi: Fanifold, c: Iterable[str], d: Iterable[str]) -> bool:
    """Union/intersection compatibility of open-complement descriptors."""
    c, d = set(c), set(d)
    for z in (c, d, c | d, c & d):
        if not phi.is_down_closed(z):
            return False
    uc = u_functor(phi, c)
    ud = u_functor(phi, d)
    u_union = u_functor(phi, c | d)
    u_inter = u_functor(phi, c & d)
    if set(u_union.marked) != set(uc.marked) | set(ud.marked):
        return False
    if set(u_inter.marked) != set(uc.marked) & set(ud.marked):
        return False
    if set(u_union.open_strata) != set(uc.open_strata) & set(ud.open_strata):
        return False
    if set(u_inter.open_strata) != set(uc.open_strata) | set(ud.open_strata):
        return False
    return True

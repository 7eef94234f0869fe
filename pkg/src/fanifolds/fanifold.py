"""Fanifolds: finite exit diagrams of strata decorated with lattices and fans.

A stratum stores its manifold dimension and a transverse fan whose rank is
the codimension.  An arrow from a deeper stratum G to a nearby stratum F
records a cone of G's fan together with a unimodular identification of the
quotient lattice with F's lattice.  Everything downstream (glued toric
spaces, skeleta, mirrors) is computed from this diagram alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .cones import Cone, product_cone, zero_cone
from .fans import Fan, FanQuotient, StackyFan, quotient_fan
from .lattice import (
    LatticeMap,
    Mat,
    Vec,
    identity_matrix,
    integer_kernel,
    is_unimodular,
    lattice_map,
    mat,
    mat_mul,
    right_inverse,
    row_hermite,
    solve_integer,
    vec,
)


@dataclass
class Stratum:
    name: str
    dim: int
    fan: Fan | StackyFan
    interior: bool = True
    chi_c: int | None = None  # None means the contractible default (-1)^dim

    @property
    def plain_fan(self) -> Fan:
        return self.fan.fan if isinstance(self.fan, StackyFan) else self.fan

    @property
    def is_stacky(self) -> bool:
        return isinstance(self.fan, StackyFan)

    @property
    def lattice_rank(self) -> int:
        return self.plain_fan.rank

    @property
    def chi(self) -> int:
        return self.chi_c if self.chi_c is not None else (-1) ** self.dim


@dataclass
class Arrow:
    source: str
    target: str
    cone_index: int  # index into the source stratum's fan
    iso: LatticeMap  # free quotient of the source lattice by the cone's span -> target lattice


@dataclass
class ValidationReport:
    is_poset: bool
    coherent: bool
    errors: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.errors


class Fanifold:
    def __init__(
        self,
        dimension: int,
        strata: Iterable[Stratum],
        arrows: Iterable[Arrow],
        compact: bool | None = None,
        provenance: tuple | None = None,
    ):
        self.dimension = dimension
        self.strata = tuple(strata)
        self.arrows = tuple(arrows)
        self.compact = compact
        self.provenance = provenance
        self.by_name = {s.name: s for s in self.strata}
        self._fq_cache: dict[tuple[str, int], FanQuotient] = {}

    def __repr__(self) -> str:
        return (
            f"Fanifold(dim={self.dimension}, strata={len(self.strata)}, "
            f"arrows={len(self.arrows)})"
        )

    def stratum(self, name: str) -> Stratum:
        return self.by_name[name]

    def out_arrows(self, name: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == name]

    def in_arrows(self, name: str) -> list[Arrow]:
        return [a for a in self.arrows if a.target == name]

    def arrow_cone(self, a: Arrow) -> Cone:
        return self.stratum(a.source).plain_fan.cones[a.cone_index]

    def arrow_quotient(self, a: Arrow) -> FanQuotient:
        key = (a.source, a.cone_index)
        if key not in self._fq_cache:
            self._fq_cache[key] = quotient_fan(
                self.stratum(a.source).plain_fan, a.cone_index
            )
        return self._fq_cache[key]

    def arrow_map(self, a: Arrow) -> LatticeMap:
        """The composite lattice map source lattice -> target lattice."""
        return a.iso.compose(self.arrow_quotient(a).projection)

    def minimal_strata(self) -> list[Stratum]:
        targets = {a.target for a in self.arrows}
        return [s for s in self.strata if s.name not in targets]

    def leq(self, g: str, f: str) -> bool:
        """Exit order: g below f (g == f, or an arrow g -> f exists)."""
        return g == f or any(a.target == f for a in self.out_arrows(g))

    def down_closure(self, names: Iterable[str]) -> set[str]:
        want = set(names)
        return {s.name for s in self.strata if any(self.leq(s.name, f) for f in want)}

    def is_down_closed(self, names: Iterable[str]) -> bool:
        names = set(names)
        return all(
            a.source in names for a in self.arrows if a.target in names
        )

    # -- validation --------------------------------------------------------

    def validate(self) -> ValidationReport:
        errors: list[str] = []
        seen: set[str] = set()
        for s in self.strata:
            if s.name in seen:
                errors.append(f"duplicate stratum id {s.name!r}")
            seen.add(s.name)
        for s in self.strata:
            if s.dim < 0 or s.dim + s.lattice_rank != self.dimension:
                errors.append(
                    f"stratum {s.name!r}: dim {s.dim} + fan rank {s.lattice_rank}"
                    f" != total dimension {self.dimension}"
                )
            fan_problems = s.plain_fan.validate()
            for p in fan_problems:
                errors.append(f"stratum {s.name!r} fan: {p}")
            if not fan_problems and not any(
                c.dim == 0 for c in s.plain_fan.cones
            ):
                errors.append(f"stratum {s.name!r} fan: missing the zero cone")
        if errors:
            return ValidationReport(is_poset=False, coherent=False, errors=errors)

        for k, a in enumerate(self.arrows):
            if a.source not in self.by_name or a.target not in self.by_name:
                errors.append(f"arrow {k}: unknown stratum id")
                continue
            src, tgt = self.stratum(a.source), self.stratum(a.target)
            fan = src.plain_fan
            if not (0 <= a.cone_index < len(fan.cones)):
                errors.append(f"arrow {k}: cone index {a.cone_index} out of range")
                continue
            cone = fan.cones[a.cone_index]
            if cone.dim == 0:
                errors.append(f"arrow {k} ({a.source}->{a.target}): zero cone")
                continue
            if cone.dim != tgt.dim - src.dim:
                errors.append(
                    f"arrow {k} ({a.source}->{a.target}): cone dim {cone.dim}"
                    f" != dim difference {tgt.dim - src.dim}"
                )
                continue
            fq = self.arrow_quotient(a)
            if a.iso.source.rank != fq.fan.rank or a.iso.target.rank != tgt.lattice_rank:
                errors.append(f"arrow {k} ({a.source}->{a.target}): iso shape mismatch")
                continue
            if tgt.lattice_rank != fq.fan.rank or (
                tgt.lattice_rank and not a.iso.is_unimodular
            ):
                errors.append(f"arrow {k} ({a.source}->{a.target}): iso not unimodular")
                continue
            image_keys = sorted(
                c.image(a.iso).key for c in fq.fan.cones
            )
            target_keys = sorted(c.key for c in tgt.plain_fan.cones)
            if image_keys != target_keys:
                errors.append(
                    f"arrow {k} ({a.source}->{a.target}): quotient fan does not"
                    " match the target fan"
                )

        for s in self.strata:
            outs = self.out_arrows(s.name)
            used = [a.cone_index for a in outs]
            if len(set(used)) != len(used):
                errors.append(f"stratum {s.name!r}: two arrows share a cone")
            nonzero = {
                i for i, c in enumerate(s.plain_fan.cones) if c.dim > 0
            }
            missing = nonzero - set(used)
            extra = set(used) - nonzero
            if missing:
                errors.append(
                    f"stratum {s.name!r}: cones {sorted(missing)} have no arrow"
                )
            if extra:
                errors.append(
                    f"stratum {s.name!r}: arrows on non-cone indices {sorted(extra)}"
                )

        coherent = True
        if not errors:
            for a, b in itertools.product(self.arrows, self.arrows):
                if a.target != b.source:
                    continue
                if not self._composite_exists(a, b):
                    coherent = False
                    errors.append(
                        f"no coherent composite for {a.source}->{a.target}"
                        f"->{b.target} (cones {a.cone_index}, {b.cone_index})"
                    )
        else:
            coherent = False

        parallel = False
        pairs: set[tuple[str, str]] = set()
        for a in self.arrows:
            if (a.source, a.target) in pairs:
                parallel = True
            pairs.add((a.source, a.target))
        return ValidationReport(
            is_poset=not parallel, coherent=coherent, errors=errors
        )

    def _composite_exists(self, a: Arrow, b: Arrow) -> bool:
        sigma_a = self.arrow_cone(a)
        map_a = self.arrow_map(a)
        map_b = self.arrow_map(b)
        cone_b = self.arrow_cone(b)
        composed = mat_mul(map_b.matrix, map_a.matrix)
        for c in self.out_arrows(a.source):
            if c.target != b.target:
                continue
            sigma_c = self.arrow_cone(c)
            if not sigma_c.contains_cone(sigma_a):
                continue
            if sigma_c.image(map_a) != cone_b:
                continue
            if self.arrow_map(c).matrix == composed:
                return True
        return False


# -- constructors ------------------------------------------------------------


def _stratum_fan_for_cone(
    fan: Fan | StackyFan, index: int
) -> tuple[Fan | StackyFan, FanQuotient]:
    if isinstance(fan, StackyFan):
        sub, fq, _warn = fan.quotient(index)
        return sub, fq
    fq = quotient_fan(fan, index)
    return fq.fan, fq


def _arrow_between_cones(
    fan: Fan, i: int, j: int, fq_i: FanQuotient, fq_j: FanQuotient,
    name_i: str, name_j: str,
) -> Arrow:
    """Arrow between the cone-i stratum and the cone-j stratum (i face of j)."""
    p_i = fq_i.projection
    p_j = fq_j.projection
    pos = fq_i.star.index(j)
    sub_index = pos
    fq_ij = quotient_fan(fq_i.fan, sub_index)
    if fq_ij.fan.rank == 0:
        iso = lattice_map((), 0, len(p_j.matrix))
    else:
        comp = mat_mul(fq_ij.projection.matrix, p_i.matrix)
        rinv = right_inverse(comp, fq_ij.fan.rank, fan.rank)
        iso_mat = mat_mul(p_j.matrix, rinv)
        iso = lattice_map(iso_mat, fq_ij.fan.rank, len(p_j.matrix))
    return Arrow(source=name_i, target=name_j, cone_index=sub_index, iso=iso)


def from_fan(
    fan: Fan | StackyFan, names: Sequence[str] | None = None
) -> Fanifold:
    """One stratum per cone; the cone's dimension is the stratum's dimension."""
    plain = fan.fan if isinstance(fan, StackyFan) else fan
    problems = plain.validate()
    if problems:
        raise ValueError("invalid fan: " + "; ".join(problems))
    n = plain.rank
    if names is None:
        names = [f"s{i}" for i in range(len(plain.cones))]
    strata = []
    quotients: list[FanQuotient] = []
    for i, c in enumerate(plain.cones):
        sub, fq = _stratum_fan_for_cone(fan, i)
        quotients.append(fq)
        strata.append(Stratum(name=names[i], dim=c.dim, fan=sub))
    arrows = []
    for i, ci in enumerate(plain.cones):
        for j, cj in enumerate(plain.cones):
            if i == j or not cj.contains_cone(ci) or cj.dim == ci.dim:
                continue
            arrows.append(
                _arrow_between_cones(
                    plain, i, j, quotients[i], quotients[j], names[i], names[j]
                )
            )
    return Fanifold(
        dimension=n,
        strata=strata,
        arrows=arrows,
        compact=(n == 0),
        provenance=("fan", fan),
    )


def sphere_section(
    fan: Fan | StackyFan, names: Sequence[str] | None = None
) -> Fanifold:
    """Fanifold structure on the unit-sphere slice of the fan's support."""
    plain = fan.fan if isinstance(fan, StackyFan) else fan
    problems = plain.validate()
    if problems:
        raise ValueError("invalid fan: " + "; ".join(problems))
    n = plain.rank
    keep = [i for i, c in enumerate(plain.cones) if c.dim > 0]
    if names is None:
        names = {i: f"s{i}" for i in keep}
    else:
        names = {i: names[k] for k, i in enumerate(keep)}
    strata = []
    quotients: dict[int, FanQuotient] = {}
    for i in keep:
        sub, fq = _stratum_fan_for_cone(fan, i)
        quotients[i] = fq
        strata.append(Stratum(name=names[i], dim=plain.cones[i].dim - 1, fan=sub))
    arrows = []
    for i in keep:
        for j in keep:
            ci, cj = plain.cones[i], plain.cones[j]
            if i == j or not cj.contains_cone(ci) or cj.dim == ci.dim:
                continue
            arrows.append(
                _arrow_between_cones(
                    plain, i, j, quotients[i], quotients[j], names[i], names[j]
                )
            )
    return Fanifold(
        dimension=n - 1,
        strata=strata,
        arrows=arrows,
        compact=plain.is_face_closed,
        provenance=("sphere", fan),
    )


def manifold(k: int) -> Fanifold:
    """A single k-dimensional stratum with trivial transverse data."""
    cell = Stratum(name="cell", dim=k, fan=Fan([zero_cone(0)], 0))
    return Fanifold(
        dimension=k,
        strata=[cell],
        arrows=[],
        compact=(k == 0),
        provenance=("manifold", k),
    )


def _product_fan(f1: Fan | StackyFan, f2: Fan | StackyFan) -> Fan | StackyFan:
    p1 = f1.fan if isinstance(f1, StackyFan) else f1
    p2 = f2.fan if isinstance(f2, StackyFan) else f2
    cones = [
        product_cone(c1, c2) for c1 in p1.cones for c2 in p2.cones
    ]
    prod = Fan(cones, p1.rank + p2.rank)
    if not isinstance(f1, StackyFan) and not isinstance(f2, StackyFan):
        return prod
    multiples = {}
    if isinstance(f1, StackyFan):
        for r, k in f1.multiples.items():
            multiples[r + (0,) * p2.rank] = k
    if isinstance(f2, StackyFan):
        for r, k in f2.multiples.items():
            multiples[(0,) * p1.rank + r] = k
    return StackyFan(prod, multiples)


def product(phi1: Fanifold, phi2: Fanifold) -> Fanifold:
    """Stratum pairs with product fans; arrow pairs (either side may stand still)."""
    strata = []
    fan_len2: dict[str, int] = {}
    for s1 in phi1.strata:
        for s2 in phi2.strata:
            pf = _product_fan(s1.fan, s2.fan)
            strata.append(
                Stratum(
                    name=f"({s1.name},{s2.name})",
                    dim=s1.dim + s2.dim,
                    fan=pf,
                    interior=s1.interior and s2.interior,
                    chi_c=s1.chi * s2.chi,
                )
            )
    out = Fanifold(
        dimension=phi1.dimension + phi2.dimension,
        strata=strata,
        arrows=[],
        compact=(
            None
            if phi1.compact is None or phi2.compact is None
            else phi1.compact and phi2.compact
        ),
        provenance=("product", phi1, phi2),
    )

    def zero_index(phi: Fanifold, name: str) -> int:
        f = phi.stratum(name).plain_fan
        for i, c in enumerate(f.cones):
            if c.dim == 0:
                return i
        raise ValueError(f"stratum {name} has no zero cone")

    arrows = []
    moves1 = [(a, a.source, a.target) for a in phi1.arrows] + [
        (None, s.name, s.name) for s in phi1.strata
    ]
    moves2 = [(a, a.source, a.target) for a in phi2.arrows] + [
        (None, s.name, s.name) for s in phi2.strata
    ]
    for (a1, g1, f1), (a2, g2, f2) in itertools.product(moves1, moves2):
        if a1 is None and a2 is None:
            continue
        src = f"({g1},{g2})"
        tgt = f"({f1},{f2})"
        len2 = len(phi2.stratum(g2).plain_fan.cones)
        i1 = a1.cone_index if a1 else zero_index(phi1, g1)
        i2 = a2.cone_index if a2 else zero_index(phi2, g2)
        cone_index = i1 * len2 + i2
        fq = out._fq_cache.get((src, cone_index))
        if fq is None:
            fq = quotient_fan(out.stratum(src).plain_fan, cone_index)
            out._fq_cache[(src, cone_index)] = fq
        m1 = (
            phi1.arrow_map(a1).matrix
            if a1
            else identity_matrix(phi1.stratum(g1).lattice_rank)
        )
        m2 = (
            phi2.arrow_map(a2).matrix
            if a2
            else identity_matrix(phi2.stratum(g2).lattice_rank)
        )
        r1, r2 = len(m1), len(m2)
        c1 = phi1.stratum(g1).lattice_rank
        c2 = phi2.stratum(g2).lattice_rank
        block = [
            tuple(m1[i]) + (0,) * c2 for i in range(r1)
        ] + [
            (0,) * c1 + tuple(m2[i]) for i in range(r2)
        ]
        free = fq.fan.rank
        if free == 0:
            iso = lattice_map((), 0, r1 + r2)
        else:
            rinv = right_inverse(mat(fq.projection.matrix), free, c1 + c2)
            iso = lattice_map(
                mat_mul(mat(block), rinv) if block else (),
                free,
                r1 + r2,
            )
        arrows.append(Arrow(source=src, target=tgt, cone_index=cone_index, iso=iso))
    out.arrows = tuple(arrows)
    return out


def disjoint_union(a: Fanifold, b: Fanifold, prefixes=("L.", "R.")) -> Fanifold:
    if a.dimension != b.dimension:
        raise ValueError("disjoint union needs equal dimensions")
    pa, pb = prefixes
    strata = [replace(s, name=pa + s.name) for s in a.strata] + [
        replace(s, name=pb + s.name) for s in b.strata
    ]
    arrows = [
        replace(x, source=pa + x.source, target=pa + x.target) for x in a.arrows
    ] + [replace(x, source=pb + x.source, target=pb + x.target) for x in b.arrows]
    return Fanifold(
        dimension=a.dimension,
        strata=strata,
        arrows=arrows,
        compact=(
            None
            if a.compact is None or b.compact is None
            else a.compact and b.compact
        ),
    )


def delete_strata(phi: Fanifold, names: Iterable[str]) -> Fanifold:
    """Remove strata, their incident arrows, and the cones that pointed at them."""
    doomed = set(names)
    unknown = doomed - set(phi.by_name)
    if unknown:
        raise ValueError(f"unknown strata: {sorted(unknown)}")
    strata = []
    arrows = []
    for s in phi.strata:
        if s.name in doomed:
            continue
        dropped = {
            a.cone_index
            for a in phi.out_arrows(s.name)
            if a.target in doomed
        }
        if not dropped:
            strata.append(s)
            continue
        plain = s.plain_fan
        keep = [i for i in range(len(plain.cones)) if i not in dropped]
        new_fan: Fan | StackyFan = Fan([plain.cones[i] for i in keep], plain.rank)
        if isinstance(s.fan, StackyFan):
            mm = {
                r: k for r, k in s.fan.multiples.items() if r in new_fan.rays
            }
            new_fan = StackyFan(new_fan, mm)
        strata.append(replace(s, fan=new_fan))
    index_maps = {}
    for s in phi.strata:
        if s.name in doomed:
            continue
        dropped = {
            a.cone_index
            for a in phi.out_arrows(s.name)
            if a.target in doomed
        }
        keep = [
            i for i in range(len(s.plain_fan.cones)) if i not in dropped
        ]
        index_maps[s.name] = {old: new for new, old in enumerate(keep)}
    for a in phi.arrows:
        if a.source in doomed or a.target in doomed:
            continue
        arrows.append(
            replace(a, cone_index=index_maps[a.source][a.cone_index])
        )
    out = Fanifold(
        dimension=phi.dimension,
        strata=strata,
        arrows=arrows,
        compact=None,
        provenance=None,
    )
    report = out.validate()
    if not report.valid:
        raise ValueError(
            "deletion breaks the diagram: " + "; ".join(report.errors)
        )
    return out


# -- unrolled closures -------------------------------------------------------


@dataclass
class UnrolledClosure:
    fanifold: Fanifold
    to_original: dict[str, str]  # new stratum id -> original stratum id
    top: str  # id of the stratum covering F itself


def _span_coordinates(cone: Cone) -> tuple[Mat, Mat]:
    """Basis (rows) of the saturated span of a cone, and expansion back.

    Returns (basis, expand) with expand @ coords = ambient vector.
    """
    basis = row_hermite(
        integer_kernel(mat(cone.perp_basis), len(cone.perp_basis), cone.rank),
        cone.rank,
    )
    expand = tuple(
        tuple(row[i] for row in basis) for i in range(cone.rank)
    )  # rank x dim matrix: columns are the basis vectors
    return basis, expand


def _coords_in_span(basis: Mat, v: Vec) -> Vec:
    d = len(basis)
    if d == 0:
        return ()
    cols = tuple(tuple(row[i] for row in basis) for i in range(len(basis[0])))
    sol = solve_integer(cols, v)
    if sol is None:
        raise ValueError("vector not in saturated span")
    return sol


def unrolled_closure(phi: Fanifold, f_name: str) -> UnrolledClosure:
    """Closure of one stratum, with its boundary unrolled arrow-by-arrow.

    Objects are the arrows into the chosen stratum plus an identity object;
    each object is a copy of its source stratum whose transverse fan is the
    face fan of the arrow's cone, re-expressed in the cone's span lattice.
    """
    f = phi.stratum(f_name)
    objects: list[tuple[str, Arrow | None]] = [(f"{f_name}.top", None)]
    for k, a in enumerate(phi.in_arrows(f_name)):
        objects.append((f"{a.source}.via{k}", a))

    strata = []
    to_original = {}
    span_data: dict[str, tuple[Mat, Mat]] = {}
    face_fans: dict[str, Fan] = {}
    for name, a in objects:
        if a is None:
            strata.append(Stratum(name=name, dim=f.dim, fan=Fan([zero_cone(0)], 0)))
            to_original[name] = f_name
            continue
        src = phi.stratum(a.source)
        sigma = phi.arrow_cone(a)
        basis, expand = _span_coordinates(sigma)
        local = [
            Cone([_coords_in_span(basis, g) for g in face.gens], len(basis))
            for face in sigma.faces()
        ]
        ffan = Fan(local, len(basis))
        span_data[name] = (basis, expand)
        face_fans[name] = ffan
        strata.append(Stratum(name=name, dim=src.dim, fan=ffan))
        to_original[name] = a.source

    out = Fanifold(
        dimension=f.dim,
        strata=strata,
        arrows=[],
        compact=None,
        provenance=("unrolled", phi, f_name),
    )

    arrows = []
    for name_a, a in objects:
        if a is None:
            continue
        # arrow to the identity object along the full cone
        ffan = face_fans[name_a]
        top_index = next(
            i for i, c in enumerate(ffan.cones) if c.dim == ffan.rank
        )
        arrows.append(
            Arrow(
                source=name_a,
                target=f"{f_name}.top",
                cone_index=top_index,
                iso=lattice_map((), 0, 0),
            )
        )
        # arrows to other boundary objects along factorizations
        sigma_a = phi.arrow_cone(a)
        map_a = phi.arrow_map(a)
        for name_b, b in objects:
            if b is None or name_b == name_a:
                continue
            for c in phi.out_arrows(a.source):
                if c.target != b.source:
                    continue
                sigma_c = phi.arrow_cone(c)
                if not sigma_a.contains_cone(sigma_c) or sigma_c.dim == 0:
                    continue
                # does b compose with c to give a?
                map_c = phi.arrow_map(c)
                map_b = phi.arrow_map(b)
                if mat_mul(map_b.matrix, map_c.matrix) != map_a.matrix:
                    continue
                if sigma_a.image(map_c) != phi.arrow_cone(b):
                    continue
                basis_a, _ = span_data[name_a]
                basis_b, expand_b = span_data[name_b]
                local_c = Cone(
                    [_coords_in_span(basis_a, g) for g in sigma_c.gens],
                    len(basis_a),
                )
                ci = face_fans[name_a].cone_index(local_c)
                fq = out._fq_cache.get((name_a, ci))
                if fq is None:
                    fq = quotient_fan(face_fans[name_a], ci)
                    out._fq_cache[(name_a, ci)] = fq
                # span(sigma_a) -> span(sigma_b) through the original arrow c
                rows = []
                for coord_vec in identity_matrix(len(basis_a)):
                    amb = tuple(
                        sum(basis_a[j][i] * coord_vec[j] for j in range(len(basis_a)))
                        for i in range(len(basis_a[0]) if basis_a else 0)
                    )
                    img = map_c(amb)
                    rows.append(_coords_in_span(basis_b, img))
                span_map = tuple(
                    tuple(r[i] for r in rows) for i in range(len(basis_b))
                )  # matrix dim_b x dim_a acting on coordinates
                free = fq.fan.rank
                if free == 0:
                    iso = lattice_map((), 0, len(basis_b))
                else:
                    rinv = right_inverse(
                        mat(fq.projection.matrix), free, len(basis_a)
                    )
                    iso = lattice_map(
                        mat_mul(mat(span_map), rinv), free, len(basis_b)
                    )
                arrows.append(
                    Arrow(source=name_a, target=name_b, cone_index=ci, iso=iso)
                )
    out.arrows = tuple(arrows)
    return UnrolledClosure(fanifold=out, to_original=to_original, top=f"{f_name}.top")


# -- ideal boundary ----------------------------------------------------------


def _suspension_boundary(sigma_fan: Fan | StackyFan) -> Fanifold:
    """Ideal boundary of (real line) x from_fan: two fan-decorated endpoints."""
    plain = sigma_fan.fan if isinstance(sigma_fan, StackyFan) else sigma_fan
    mid = sphere_section(sigma_fan)
    strata = [
        Stratum(name="end0", dim=0, fan=sigma_fan),
        Stratum(name="end1", dim=0, fan=sigma_fan),
    ]
    for s in mid.strata:
        strata.append(Stratum(name=s.name, dim=s.dim + 1, fan=s.fan))
    arrows = list(mid.arrows)
    helper = from_fan(sigma_fan)
    for end in ("end0", "end1"):
        for a in helper.arrows:
            if a.source != helper.strata[_zero_cone_index(plain)].name:
                continue
            # target stratum of the helper corresponds to a nonzero cone,
            # which is a mid stratum of the sphere section with the same name
            target = a.target
            arrows.append(replace(a, source=end, target=target))
    return Fanifold(
        dimension=plain.rank,
        strata=strata,
        arrows=arrows,
        compact=plain.is_face_closed,
        provenance=None,
    )


def _zero_cone_index(fan: Fan) -> int:
    for i, c in enumerate(fan.cones):
        if c.dim == 0:
            return i
    raise ValueError("fan has no zero cone")


def empty_fanifold(dimension: int) -> Fanifold:
    return Fanifold(dimension=dimension, strata=[], arrows=[], compact=True)


def ideal_boundary(phi: Fanifold) -> Fanifold:
    """The boundary at infinity, when the construction determines it."""
    if phi.compact:
        return empty_fanifold(max(phi.dimension - 1, 0))
    prov = phi.provenance
    if prov is None:
        raise ValueError("boundary data required")
    kind = prov[0]
    if kind == "fan":
        return sphere_section(prov[1])
    if kind == "product":
        a, b = prov[1], prov[2]
        if a.compact:
            return product(a, ideal_boundary(b))
        if b.compact:
            return product(ideal_boundary(a), b)
        ka = a.provenance[0] if a.provenance else None
        kb = b.provenance[0] if b.provenance else None
        if ka == "manifold" and prov[1].dimension == 1 and kb == "fan":
            return _suspension_boundary(b.provenance[1])
        if kb == "manifold" and prov[2].dimension == 1 and ka == "fan":
            return _suspension_boundary(a.provenance[1])
        raise ValueError("boundary data required")
    if kind == "manifold":
        k = prov[1]
        if k == 1:
            return Fanifold(
                dimension=0,
                strata=[
                    Stratum(name="end0", dim=0, fan=Fan([zero_cone(0)], 0)),
                    Stratum(name="end1", dim=0, fan=Fan([zero_cone(0)], 0)),
                ],
                arrows=[],
                compact=True,
            )
        raise ValueError("boundary data required")
    raise ValueError("boundary data required")

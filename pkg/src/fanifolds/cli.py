"""Command-line front end.

Subcommands::

    validate                      structural report for a fanifold file
    bmodel components             irreducible pieces of the glued toric space
    bmodel chart --stratum S      chart diagram of one stratum closure
    bmodel census --degree D      dimension of the bounded-degree section space
    bmodel ufunctor --closed ..   section functor marked on a closed set
    skeleton report               skeleton strata, incidences, checks
    skeleton euler                compactly-supported Euler characteristic
    skeleton handles              Weinstein-style handle plan
    skeleton mesh                 schematic OBJ export
    mirror dict                   chart-side / skeleton-side dictionary
    mirror restrict --closed ..   matched restriction pair
    fan props [--stratum S]       fan predicates per stratum
    fan quotient --stratum S --cone i,j   star quotient by a cone
    fan resolve --stratum S       stellar resolution to a smooth refinement
    fan refines --stratum FINE,COARSE     refinement check between two strata

Files are looked up literally first, then among the bundled examples, so
``--file unigon.json`` works from anywhere.  Exit codes: 0 success, 1 for
usage errors, 2 when the input fails validation or a computation rejects it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import files
from .bmodel import (
    chart_diagram,
    components,
    full_diagram,
    limit_census,
    u_functor,
)
from .cones import Cone, zero_cone
from .fanifold import Fanifold
from .fans import StackyFan, quotient_fan, refines, resolve_to_smooth
from .mesh import export_mesh
from .mirror import mirror_dictionary, restriction_pairs
from .skeleton import euler_characteristic_c, handle_plan, skeleton_model

# Fixed default so that any randomized mode is reproducible run to run.
DEFAULT_SEED = 9157

_DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def resolve_input(name: str) -> str:
    """Literal path if it exists, else a bundled example file."""
    if os.path.exists(name):
        return name
    stem = os.path.basename(name)
    for cand in (stem, stem + ".json"):
        path = os.path.join(_DATA_DIR, cand)
        if os.path.exists(path):
            return path
    raise ValueError(f"cannot find fanifold file {name!r}")


def _load(args) -> Fanifold:
    return files.load_fanifold(resolve_input(args.file))


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        _emit(args, "\n".join(text_lines) + "\n")


def _split_ids(raw: str) -> list[str]:
    """Split a comma-separated id list, ignoring commas inside parentheses.

    Product strata are named like ``(s0,s2)``, so ``--closed`` values cannot
    be split blindly on every comma.
    """
    pieces, depth, cur = [], 0, []
    for ch in raw:
        if ch == "," and depth == 0:
            pieces.append("".join(cur))
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        cur.append(ch)
    pieces.append("".join(cur))
    return [p for p in (piece.strip() for piece in pieces) if p]


# -- subcommands -------------------------------------------------------------


def cmd_validate(args) -> int:
    phi = _load(args)
    report = phi.validate()
    payload = {
        "format": files.FORMAT,
        "dimension": phi.dimension,
        "strata": len(phi.strata),
        "arrows": len(phi.arrows),
        "is_poset": report.is_poset,
        "coherent": report.coherent,
        "valid": report.valid,
        "errors": list(report.errors),
    }
    lines = [
        f"dimension: {phi.dimension}",
        f"strata: {len(phi.strata)}",
        f"arrows: {len(phi.arrows)}",
        f"is_poset: {str(report.is_poset).lower()}",
        f"coherent: {str(report.coherent).lower()}",
        f"valid: {str(report.valid).lower()}",
    ]
    lines.extend(f"error: {e}" for e in report.errors)
    _render(args, payload, lines)
    return 0 if report.valid else 2


def cmd_bmodel_components(args) -> int:
    phi = _load(args)
    comps = components(phi)
    payload = {
        "components": [
            {
                "stratum": c.stratum,
                "toric_dim": c.toric_dim,
                "complete": c.complete,
                "stacky": c.stacky,
            }
            for c in comps
        ]
    }
    lines = [f"components: {len(comps)}"]
    for c in comps:
        flags = []
        if c.complete:
            flags.append("complete")
        if c.stacky:
            flags.append("stacky")
        tail = f" ({', '.join(flags)})" if flags else ""
        lines.append(f"  {c.stratum}: toric dimension {c.toric_dim}{tail}")
    _render(args, payload, lines)
    return 0


def cmd_bmodel_chart(args) -> int:
    phi = _load(args)
    diagram = chart_diagram(phi, args.stratum)
    objs = [
        {"stratum": o.stratum, "cone": o.cone_index, "rank": diagram.object_rank(i)}
        for i, o in enumerate(diagram.objects)
    ]
    arrows = []
    for a in diagram.arrows:
        entry = {"source": a.source, "target": a.target, "kind": a.kind}
        if a.cone is not None:
            entry["cone_dim"] = a.cone.dim
        arrows.append(entry)
    payload = {
        "stratum": args.stratum,
        "objects": objs,
        "arrows": arrows,
        "warnings": list(diagram.warnings),
    }
    lines = [
        f"stratum: {args.stratum}",
        f"charts: {len(objs)}",
        f"maps: {len(arrows)}",
    ]
    for o in objs:
        lines.append(f"  chart {o['stratum']}[cone {o['cone']}], rank {o['rank']}")
    lines.extend(f"warning: {w}" for w in diagram.warnings)
    _render(args, payload, lines)
    return 0


def cmd_bmodel_census(args) -> int:
    phi = _load(args)
    census = limit_census(full_diagram(phi), args.degree)
    supports = [
        {"stratum": o.stratum, "cone": o.cone_index, "size": n}
        for o, n in sorted(
            census.support_sizes.items(), key=lambda kv: (kv[0].stratum, kv[0].cone_index)
        )
    ]
    payload = {
        "degree": census.degree,
        "dimension": census.dimension,
        "objects": census.object_count,
        "arrows": census.arrow_count,
        "supports": supports,
        "warnings": list(census.warnings),
    }
    lines = [
        f"degree: {census.degree}",
        f"dimension: {census.dimension}",
        f"charts: {census.object_count}",
        f"maps: {census.arrow_count}",
    ]
    lines.extend(f"warning: {w}" for w in census.warnings)
    _render(args, payload, lines)
    return 0


def cmd_bmodel_ufunctor(args) -> int:
    phi = _load(args)
    closed = _split_ids(args.closed)
    desc = u_functor(phi, closed)
    marked = [
        {"stratum": desc.diagram.objects[i].stratum, "cone": desc.diagram.objects[i].cone_index}
        for i in desc.marked
    ]
    payload = {
        "closed": list(desc.closed),
        "open": list(desc.open_strata),
        "charts": len(desc.diagram.objects),
        "marked": marked,
    }
    lines = [
        f"closed strata: {', '.join(desc.closed) if desc.closed else '(none)'}",
        f"open strata: {', '.join(desc.open_strata) if desc.open_strata else '(none)'}",
        f"charts: {len(desc.diagram.objects)}",
        f"marked charts: {len(marked)}",
    ]
    for m in marked:
        lines.append(f"  {m['stratum']}[cone {m['cone']}]")
    _render(args, payload, lines)
    return 0


def cmd_skeleton_report(args) -> int:
    phi = _load(args)
    model = skeleton_model(phi)
    strata = [
        {
            "base": s.base,
            "cone": s.cone_index,
            "base_dim": s.base_dim,
            "cone_dim": s.cone_dim,
            "torus_rank": s.torus_rank,
            "group_order": s.group_order,
            "interior": s.interior,
        }
        for s in model.strata
    ]
    payload = {
        "dimension": phi.dimension,
        "strata": strata,
        "incidences": len(model.incidences),
        "half_dimensional": model.dimension_check(),
        "fibers_assemble": model.assembly_check(),
        "warnings": list(model.warnings),
    }
    lines = [
        f"dimension: {phi.dimension}",
        f"strata: {len(strata)}",
        f"incidences: {len(model.incidences)}",
        f"half_dimensional: {str(model.dimension_check()).lower()}",
        f"fibers_assemble: {str(model.assembly_check()).lower()}",
    ]
    for s in model.strata:
        tags = []
        if s.group_order != 1:
            tags.append(f"group order {s.group_order}")
        if not s.interior:
            tags.append("boundary")
        tail = f" ({', '.join(tags)})" if tags else ""
        lines.append(
            f"  {s.ident}: base {s.base_dim}, torus {s.torus_rank}, cone {s.cone_dim}{tail}"
        )
    lines.extend(f"warning: {w}" for w in model.warnings)
    _render(args, payload, lines)
    return 0


def cmd_skeleton_euler(args) -> int:
    phi = _load(args)
    chi = euler_characteristic_c(phi)
    _render(args, {"chi_c": chi}, [f"chi_c: {chi}"])
    return 0


def cmd_skeleton_handles(args) -> int:
    phi = _load(args)
    plan = handle_plan(phi)
    payload = {
        "handles": [
            {
                "index": h.index,
                "stratum": h.stratum,
                "label": h.label,
                "attaching": list(h.attaching),
                "attaching_label": h.attaching_label,
                "trivial": h.trivial,
            }
            for h in plan.handles
        ],
        "counts_by_index": {str(k): v for k, v in sorted(plan.counts_by_index().items())},
    }
    lines = [f"handles: {len(plan)}"]
    for k, v in sorted(plan.counts_by_index().items()):
        lines.append(f"  index {k}: {v}")
    for h in plan.handles:
        tail = " (trivial)" if h.trivial else ""
        lines.append(f"  [{h.index}] {h.stratum}: {h.label}{tail}")
        if h.attaching:
            lines.append(f"      attaches along {h.attaching_label} to {', '.join(h.attaching)}")
    _render(args, payload, lines)
    return 0


def cmd_skeleton_mesh(args) -> int:
    phi = _load(args)
    model = skeleton_model(phi)
    obj = export_mesh(model, resolution=args.resolution)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(obj)
        groups = sum(1 for line in obj.splitlines() if line.startswith("g "))
        sys.stdout.write(f"wrote {args.out} ({groups} groups)\n")
    else:
        sys.stdout.write(obj)
    return 0


def cmd_mirror_dict(args) -> int:
    phi = _load(args)
    md = mirror_dictionary(phi)
    if args.format == "json":
        _emit(args, json.dumps(md.to_json_dict(), indent=2) + "\n")
    else:
        _emit(args, md.to_text() + "\n")
    return 0


def cmd_mirror_restrict(args) -> int:
    phi = _load(args)
    pair = restriction_pairs(phi, _split_ids(args.closed))
    if args.format == "json":
        _emit(args, json.dumps(pair.to_json_dict(), indent=2) + "\n")
    else:
        _emit(args, pair.to_text() + "\n")
    return 0


def _stratum_fan(phi: Fanifold, name: str):
    if name not in phi.by_name:
        raise ValueError(f"unknown stratum {name!r}")
    return phi.stratum(name).fan


def _fan_props(fan) -> dict:
    if isinstance(fan, StackyFan):
        out = fan.fan.properties()
        out["stacky"] = True
        out["smooth"] = fan.is_smooth
        groups = []
        for i, c in enumerate(fan.fan.cones):
            g = fan.component_group(c)
            if g:
                groups.append({"cone": i, "invariants": list(g)})
        out["component_groups"] = groups
        return out
    out = fan.properties()
    out["stacky"] = False
    return out


def cmd_fan_props(args) -> int:
    phi = _load(args)
    names = [args.stratum] if args.stratum else [s.name for s in phi.strata]
    payload = {"strata": {}}
    lines = []
    for name in names:
        props = _fan_props(_stratum_fan(phi, name))
        payload["strata"][name] = props
        lines.append(f"{name}:")
        for k in sorted(props):
            v = props[k]
            if isinstance(v, bool):
                v = str(v).lower()
            lines.append(f"  {k}: {v}")
    _render(args, payload, lines)
    return 0


def cmd_fan_quotient(args) -> int:
    phi = _load(args)
    fan = _stratum_fan(phi, args.stratum)
    plain = fan.fan if isinstance(fan, StackyFan) else fan
    ray_idx = [int(p) for p in _split_ids(args.cone)]
    for i in ray_idx:
        if not 0 <= i < len(plain.rays):
            raise ValueError(f"no ray {i} in the fan at {args.stratum!r}")
    cone = (
        Cone([plain.rays[i] for i in ray_idx], plain.rank)
        if ray_idx
        else zero_cone(plain.rank)
    )
    k = plain.cone_index(cone)
    if k is None:
        raise ValueError(
            f"rays {ray_idx} do not span a cone of the fan at {args.stratum!r}"
        )
    if isinstance(fan, StackyFan):
        quotient, fq, warnings = fan.quotient(k)
        qdict = files._fan_to_dict(quotient)
    else:
        fq = quotient_fan(plain, k)
        warnings = []
        qdict = files._fan_to_dict(fq.fan)
    payload = {
        "stratum": args.stratum,
        "cone": sorted(ray_idx),
        "quotient_rank": fq.fan.rank,
        "projection": [list(r) for r in fq.projection.matrix],
        "section": [list(r) for r in fq.section.matrix],
        "torsion": list(fq.torsion),
        "star": list(fq.star),
        "fan": qdict,
        "warnings": list(warnings),
    }
    lines = [
        f"stratum: {args.stratum}",
        f"cone rays: {sorted(ray_idx)}",
        f"quotient rank: {fq.fan.rank}",
        f"quotient cones: {len(fq.fan.cones)}",
        f"torsion: {list(fq.torsion) if fq.torsion else 'none'}",
    ]
    lines.extend(f"warning: {w}" for w in warnings)
    _render(args, payload, lines)
    return 0


def cmd_fan_resolve(args) -> int:
    phi = _load(args)
    fan = _stratum_fan(phi, args.stratum)
    plain = fan.fan if isinstance(fan, StackyFan) else fan
    result = resolve_to_smooth(plain)
    check = refines(result.fan, plain)
    payload = {
        "stratum": args.stratum,
        "steps": [list(v) for v in result.steps],
        "added_rays": [list(v) for v in result.added_rays],
        "smooth": result.fan.is_smooth,
        "refines_original": check.ok,
        "fan": files._fan_to_dict(result.fan),
    }
    lines = [
        f"stratum: {args.stratum}",
        f"subdivision steps: {len(result.steps)}",
        f"added rays: {[list(v) for v in result.added_rays]}",
        f"smooth: {str(result.fan.is_smooth).lower()}",
        f"refines original: {str(check.ok).lower()}",
    ]
    _render(args, payload, lines)
    return 0


def cmd_fan_refines(args) -> int:
    phi = _load(args)
    names = _split_ids(args.stratum or "")
    if len(names) != 2:
        raise ValueError("fan refines needs --stratum FINE,COARSE (two stratum ids)")
    fans = []
    for name in names:
        fan = _stratum_fan(phi, name)
        fans.append(fan.fan if isinstance(fan, StackyFan) else fan)
    fine, coarse = fans
    result = refines(fine, coarse)
    payload = {
        "fine": names[0],
        "coarse": names[1],
        "ok": result.ok,
        "problems": list(result.problems),
    }
    lines = [
        f"fine: {names[0]}",
        f"coarse: {names[1]}",
        f"refines: {str(result.ok).lower()}",
    ]
    lines.extend(f"problem: {p}" for p in result.problems)
    _render(args, payload, lines)
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--file", required=True, help="fanifold file (path or bundled name)")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help="seed for randomized modes (fixed default for reproducibility)",
    )

    parser = argparse.ArgumentParser(
        prog="fanifolds", description="Exact toolkit for fanifold exit diagrams."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="structural validation report")
    p.set_defaults(func=cmd_validate)

    bm = sub.add_parser("bmodel", help="glued toric space computations")
    bms = bm.add_subparsers(dest="subcommand", required=True)
    p = bms.add_parser("components", parents=[common])
    p.set_defaults(func=cmd_bmodel_components)
    p = bms.add_parser("chart", parents=[common])
    p.add_argument("--stratum", required=True, help="stratum id whose closure to chart")
    p.set_defaults(func=cmd_bmodel_chart)
    p = bms.add_parser("census", parents=[common])
    p.add_argument("--degree", type=int, required=True, help="degree bound D")
    p.set_defaults(func=cmd_bmodel_census)
    p = bms.add_parser("ufunctor", parents=[common])
    p.add_argument("--closed", required=True, help="comma-separated closed stratum ids")
    p.set_defaults(func=cmd_bmodel_ufunctor)

    sk = sub.add_parser("skeleton", help="conic Lagrangian skeleton computations")
    sks = sk.add_subparsers(dest="subcommand", required=True)
    p = sks.add_parser("report", parents=[common])
    p.set_defaults(func=cmd_skeleton_report)
    p = sks.add_parser("euler", parents=[common])
    p.set_defaults(func=cmd_skeleton_euler)
    p = sks.add_parser("handles", parents=[common])
    p.set_defaults(func=cmd_skeleton_handles)
    p = sks.add_parser("mesh", parents=[common])
    p.add_argument("--resolution", type=int, default=16, help="segments per full circle")
    p.set_defaults(func=cmd_skeleton_mesh)

    mi = sub.add_parser("mirror", help="matched chart-side / skeleton-side views")
    mis = mi.add_subparsers(dest="subcommand", required=True)
    p = mis.add_parser("dict", parents=[common])
    p.set_defaults(func=cmd_mirror_dict)
    p = mis.add_parser("restrict", parents=[common])
    p.add_argument("--closed", required=True, help="comma-separated closed stratum ids")
    p.set_defaults(func=cmd_mirror_restrict)

    fa = sub.add_parser("fan", help="fan-level queries on one stratum")
    fas = fa.add_subparsers(dest="subcommand", required=True)
    p = fas.add_parser("props", parents=[common])
    p.add_argument("--stratum", help="stratum id (default: all strata)")
    p.set_defaults(func=cmd_fan_props)
    p = fas.add_parser("quotient", parents=[common])
    p.add_argument("--stratum", required=True)
    p.add_argument("--cone", required=True, help="comma-separated ray indices ('' = zero cone)")
    p.set_defaults(func=cmd_fan_quotient)
    p = fas.add_parser("resolve", parents=[common])
    p.add_argument("--stratum", required=True)
    p.set_defaults(func=cmd_fan_resolve)
    p = fas.add_parser("refines", parents=[common])
    p.add_argument("--stratum", required=True, help="FINE,COARSE stratum ids")
    p.set_defaults(func=cmd_fan_refines)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        return args.func(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

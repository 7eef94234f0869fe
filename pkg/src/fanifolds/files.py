"""Reading and writing exit diagrams in the ``fanifold/1`` JSON schema.

The document shape:

    {
      "format": "fanifold/1",
      "dimension": <int>,
      "strata": [
        {"id": ..., "dim": ..., "interior": ..., "chi_c": <optional int>,
         "lattice_rank": ...,
         "fan": {"rays": [[...], ...], "cones": [[ray indices], ...],
                 "stacky_beta": <optional matrix, one row per ray>}},
        ...
      ],
      "arrows": [
        {"from": ..., "to": ..., "cone": [ray indices in the source fan],
         "quotient_matrix": <integer matrix>},
        ...
      ]
    }

Cones are stored by the indices of their extremal rays, so only pointed
cones round-trip; the zero cone is the empty list.  Serialization is
deterministic and loading re-validates everything it can check locally
(shapes, ids, ray references); diagram-level coherence stays with
``Fanifold.validate``.
"""

from __future__ import annotations

import json

from .cones import Cone, zero_cone
from .fanifold import Arrow, Fanifold, Stratum
from .fans import Fan, StackyFan
from .lattice import lattice_map, primitivize

FORMAT = "fanifold/1"


def _fan_to_dict(fan: Fan | StackyFan) -> dict:
    plain = fan.fan if isinstance(fan, StackyFan) else fan
    rays = [list(r) for r in plain.rays]
    ray_index = {tuple(r): i for i, r in enumerate(plain.rays)}
    cones = []
    for c in plain.cones:
        idx = []
        for r in c.extremal_rays:
            if tuple(r) not in ray_index:
                raise ValueError(f"cone ray {r} missing from the fan's ray list")
            idx.append(ray_index[tuple(r)])
        if Cone([plain.rays[i] for i in idx], plain.rank) != c:
            raise ValueError("cone is not recovered by its extremal rays")
        cones.append(sorted(idx))
    out = {"rays": rays, "cones": cones}
    if isinstance(fan, StackyFan):
        out["stacky_beta"] = [
            list(fan.stacky_generator(r)) for r in plain.rays
        ]
    return out


def _fan_from_dict(d: dict, rank: int) -> Fan | StackyFan:
    rays = [tuple(int(x) for x in r) for r in d.get("rays", [])]
    for r in rays:
        if len(r) != rank:
            raise ValueError(f"ray {r} does not have {rank} entries")
    cones = []
    for idx in d.get("cones", []):
        for i in idx:
            if not 0 <= i < len(rays):
                raise ValueError(f"cone refers to missing ray {i}")
        if idx:
            cones.append(Cone([rays[i] for i in idx], rank))
        else:
            cones.append(zero_cone(rank))
    fan = Fan(cones, rank)
    beta = d.get("stacky_beta")
    if beta is None:
        return fan
    if len(beta) != len(rays):
        raise ValueError("stacky_beta needs one row per ray")
    multiples = {}
    for r, b in zip(rays, beta):
        b = tuple(int(x) for x in b)
        if len(b) != rank:
            raise ValueError(f"stacky generator {b} does not have {rank} entries")
        if not any(b):
            raise ValueError(f"stacky generator for ray {r} is zero")
        prim = tuple(primitivize(r))
        # positive multiple: b = k * primitive(r)
        k = None
        for x, px in zip(b, prim):
            if px != 0:
                k = x // px
                break
        if k is None or k <= 0 or tuple(px * k for px in prim) != b:
            raise ValueError(f"stacky generator {b} is not a positive multiple of {r}")
        multiples[tuple(primitivize(r))] = k
    return StackyFan(fan, multiples)


def fanifold_to_dict(phi: Fanifold) -> dict:
    strata = []
    for st in phi.strata:
        entry = {
            "id": st.name,
            "dim": st.dim,
            "interior": st.interior,
            "lattice_rank": st.lattice_rank,
            "fan": _fan_to_dict(st.fan),
        }
        if st.chi_c is not None:
            entry["chi_c"] = st.chi_c
        strata.append(entry)
    arrows = []
    for a in phi.arrows:
        src = phi.stratum(a.source)
        plain = src.plain_fan
        ray_index = {tuple(r): i for i, r in enumerate(plain.rays)}
        cone = plain.cones[a.cone_index]
        arrows.append(
            {
                "from": a.source,
                "to": a.target,
                "cone": sorted(ray_index[tuple(r)] for r in cone.extremal_rays),
                "quotient_matrix": [list(row) for row in a.iso.matrix],
            }
        )
    return {
        "format": FORMAT,
        "dimension": phi.dimension,
        "strata": strata,
        "arrows": arrows,
    }


def fanifold_from_dict(d: dict) -> Fanifold:
    if d.get("format") != FORMAT:
        raise ValueError(f"unsupported format {d.get('format')!r}; need {FORMAT!r}")
    dimension = int(d["dimension"])
    strata = []
    seen = set()
    for s in d.get("strata", []):
        name = s["id"]
        if name in seen:
            raise ValueError(f"duplicate stratum id {name!r}")
        seen.add(name)
        rank = int(s["lattice_rank"])
        fan = _fan_from_dict(s.get("fan", {}), rank)
        strata.append(
            Stratum(
                name=name,
                dim=int(s["dim"]),
                fan=fan,
                interior=bool(s.get("interior", True)),
                chi_c=int(s["chi_c"]) if "chi_c" in s else None,
            )
        )
    by_name = {s.name: s for s in strata}
    arrows = []
    for a in d.get("arrows", []):
        src_name, tgt_name = a["from"], a["to"]
        if src_name not in by_name or tgt_name not in by_name:
            raise ValueError(f"arrow references unknown stratum: {a}")
        src = by_name[src_name]
        plain = src.plain_fan
        rays = plain.rays
        for i in a["cone"]:
            if not 0 <= i < len(rays):
                raise ValueError(f"arrow cone refers to missing ray {i}")
        if a["cone"]:
            cone = Cone([rays[i] for i in a["cone"]], plain.rank)
        else:
            cone = zero_cone(plain.rank)
        idx = plain.cone_index(cone)
        if idx is None:
            raise ValueError(
                f"arrow cone {a['cone']} is not a cone of the fan at {src_name!r}"
            )
        q_rank = plain.rank - cone.dim
        t_rank = by_name[tgt_name].lattice_rank
        matrix = tuple(tuple(int(x) for x in row) for row in a["quotient_matrix"])
        if len(matrix) != t_rank or any(len(row) != q_rank for row in matrix):
            raise ValueError(
                f"quotient matrix of arrow {src_name!r} -> {tgt_name!r} must be "
                f"{t_rank} x {q_rank}"
            )
        arrows.append(
            Arrow(
                source=src_name,
                target=tgt_name,
                cone_index=idx,
                iso=lattice_map(matrix, q_rank, t_rank),
            )
        )
    return Fanifold(dimension=dimension, strata=strata, arrows=arrows)


def dumps(phi: Fanifold) -> str:
    return json.dumps(fanifold_to_dict(phi), indent=2) + "\n"


def loads(text: str) -> Fanifold:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"not valid JSON: {e}") from e
    return fanifold_from_dict(d)


def save_fanifold(phi: Fanifold, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(phi))


def load_fanifold(path: str) -> Fanifold:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())

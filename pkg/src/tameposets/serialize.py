"""JSON formats and DOT export.

Rationals travel as ``"num/den"`` strings; matrices as nested integer lists;
cover maps are keyed ``"x->y"``.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from pathlib import Path

from .errors import ValidationError
from .homalg import BettiDiagram, VectFunctor
from .pipeline import MetricDataset, PipelineConfig
from .poset import Poset
from .realisation import GridPoset, GridSpec, RealPoint, format_fraction, lattice_point, to_fraction
from .transfer import NEG_INF, TameFunctor, build_grid


def load(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: invalid JSON ({e})") from e


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _need(obj: Mapping, key: str):
    if not isinstance(obj, Mapping) or key not in obj:
        raise ValidationError(f"missing field {key!r}")
    return obj[key]


def poset_to_json(p: Poset) -> dict:
    return {"elements": list(p.elements), "covers": [list(c) for c in sorted(p.covers)]}


def poset_from_json(obj: Mapping, reduce: bool = False) -> Poset:
    covers = [tuple(c) for c in obj.get("covers", [])]
    if any(len(c) != 2 for c in covers):
        raise ValidationError("covers must be pairs")
    return Poset(_need(obj, "elements"), covers, reduce=reduce or bool(obj.get("reduce", False)))


def grid_spec_to_json(spec: GridSpec) -> dict:
    i = spec.base_poset
    return {
        "base_poset": poset_to_json(i),
        "D": sorted(spec.D, key=i.idx),
        "V": [format_fraction(v) for v in spec.V],
    }


def grid_spec_from_json(obj: Mapping, d: str | None = None, v: list | None = None) -> GridSpec:
    i = poset_from_json(_need(obj, "base_poset"))
    vals = [to_fraction(x) for x in (v if v is not None else obj.get("V", []))]
    top = d if d is not None else obj.get("d")
    if top is not None:
        return GridSpec.below(i, top, vals)
    return GridSpec(i, frozenset(obj.get("D", i.elements)), tuple(vals))


def point_to_json(p: RealPoint) -> dict:
    return {"base": p.base, "coords": {k: format_fraction(v) for k, v in p.coords}}


def point_from_json(obj) -> RealPoint:
    """A point given as ``{"base", "coords"}`` or as lattice coordinates ``[x, y, ...]``."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if isinstance(obj, list):
        return lattice_point(obj)
    coords = obj.get("coords", {})
    if isinstance(coords, list):
        return lattice_point(coords)
    return RealPoint(_need(obj, "base"), tuple(coords.items()))


def grid_to_json(g: GridPoset) -> dict:
    out = grid_spec_to_json(g.spec)
    out["grid"] = poset_to_json(g.poset)
    out["labels"] = {x: point_to_json(g.labels[x]) for x in g.poset.elements}
    return out


def functor_from_json(obj: Mapping, poset: Poset | None = None, p: int | None = None) -> VectFunctor:
    pos = poset if poset is not None else poset_from_json(_need(obj, "poset"))
    maps = {}
    for key, m in obj.get("maps", {}).items():
        if "->" not in key:
            raise ValidationError(f"map key {key!r} must look like 'x->y'")
        x, y = key.split("->", 1)
        maps[(x, y)] = m
    prime = p if p is not None else obj.get("p", 2)
    return VectFunctor(pos, {k: int(v) for k, v in obj.get("dims", {}).items()}, maps, prime)


def functor_to_json(f: VectFunctor) -> dict:
    out = f.to_json()
    out["poset"] = poset_to_json(f.poset)
    return out


def betti_to_json(b: BettiDiagram) -> dict:
    return {k: int(v) for k, v in b.items() if v}


def tame_from_json(obj: Mapping, p: int | None = None) -> TameFunctor:
    spec = grid_spec_from_json(_need(obj, "grid"))
    grid = build_grid(spec)
    return TameFunctor(grid, functor_from_json(_need(obj, "functor"), grid.poset, p))


def transfer_result_json(grid: GridPoset, r) -> dict:
    if r is NEG_INF:
        return {"id": None, "point": None, "neg_inf": True}
    return {"id": r, "point": point_to_json(grid.point(r)), "neg_inf": False}


def dataset_from_json(obj: Mapping) -> MetricDataset:
    return MetricDataset(tuple(_need(obj, "points")), tuple(tuple(r) for r in _need(obj, "dist")), _need(obj, "m"))


def subsets_from_json(obj: Mapping) -> dict[str, frozenset[str]]:
    return {k: frozenset(v) for k, v in obj.items()}


def pipeline_from_json(obj: Mapping, **overrides) -> PipelineConfig:
    spec = grid_spec_from_json(obj, d=overrides.get("d"), v=overrides.get("V"))
    eps = overrides.get("epsilon")
    return PipelineConfig(
        spec=spec,
        dataset=dataset_from_json(_need(obj, "dataset")),
        U=subsets_from_json(_need(obj, "U")),
        epsilon=to_fraction(eps if eps is not None else obj.get("epsilon", "0")),
        p=int(overrides.get("p") or obj.get("p", 2)),
        max_degree=int(overrides["max_degree"] if overrides.get("max_degree") is not None else obj.get("max_degree", 2)),
        jobs=int(overrides.get("jobs") or 1),
    )


def to_dot(p: Poset, name: str = "poset", labels: Mapping[str, str] | None = None) -> str:
    """Hasse diagram in Graphviz DOT, bottom to top."""

    def q(s: str) -> str:
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = [f"digraph {q(name)} {{", "  rankdir=BT;"]
    for x in p.elements:
        lab = labels.get(x, x) if labels else x
        lines.append(f"  {q(x)} [label={q(lab)}];")
    for x, y in sorted(p.covers):
        lines.append(f"  {q(x)} -> {q(y)};")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""From a bounded metric dataset and a subset-valued functor to Betti diagrams.

``extend_U`` spreads a monotone family of subsets over a realisation grid,
``h0_functor`` takes connected components of the epsilon-graph on each value,
and ``pipeline_run`` chains both into the Koszul Betti computation.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse.csgraph import connected_components

from . import linalg as la
from .errors import CertificationMismatch, EmptyValue, KoszulValidityUnknown, NotMonotone, ValidationError
from .homalg import BettiDiagram, VectFunctor, betti_koszul, koszul_complex, minimal_resolution, validate_functor
from .poset import Poset
from .realisation import GridPoset, GridSpec, build_grid, to_fraction


@dataclass(frozen=True)
class MetricDataset:
    """Named points with exact pairwise distances bounded by ``m``."""

    points: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]
    m: Fraction

    def __post_init__(self) -> None:
        pts = tuple(self.points)
        n = len(pts)
        if len(set(pts)) != n:
            raise ValidationError("duplicate point ids")
        d = tuple(tuple(to_fraction(v) for v in row) for row in self.dist)
        if len(d) != n or any(len(r) != n for r in d):
            raise ValidationError("distance matrix shape does not match points")
        m = to_fraction(self.m)
        for i in range(n):
            if d[i][i] != 0:
                raise ValidationError(f"d({pts[i]},{pts[i]}) != 0")
            for j in range(n):
                if d[i][j] != d[j][i]:
                    raise ValidationError(f"distance not symmetric at {pts[i]},{pts[j]}")
                if d[i][j] < 0 or d[i][j] > m:
                    raise ValidationError(f"distance {d[i][j]} outside [0, {m}]")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "m", m)

    @property
    def index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.points)}

    def d(self, x: str, y: str) -> Fraction:
        ix = self.index
        return self.dist[ix[x]][ix[y]]

    def ball(self, centres: Iterable[str], r: Fraction) -> frozenset[str]:
        """Points at distance strictly less than ``r`` from some centre."""
        ix = self.index
        cs = [ix[c] for c in centres]
        return frozenset(y for j, y in enumerate(self.points) if any(self.dist[c][j] < r for c in cs))


@dataclass(frozen=True)
class SubsetFunctor:
    poset: Poset
    values: dict[str, frozenset[str]]

    def check(self, require_nonempty: bool = True) -> None:
        for x in self.poset.elements:
            if x not in self.values:
                raise ValidationError(f"no value at {x!r}")
            if require_nonempty and not self.values[x]:
                raise EmptyValue(f"empty value at {x!r}")
        for x, y in self.poset.covers:
            if not self.values[x] <= self.values[y]:
                raise NotMonotone(f"value at {x!r} is not contained in value at {y!r}")


def extend_U(i: Poset, u: SubsetFunctor, grid: GridPoset, data: MetricDataset) -> SubsetFunctor:
    """Values on grid points: U(a) cut down by balls around U at each supported parent.

    A zero coordinate imposes no condition, which keeps the value at (a, 0)
    equal to U(a) even when distances reach the bound.
    """
    u.check()
    for vals in u.values.values():
        unknown = set(vals) - set(data.points)
        if unknown:
            raise ValidationError(f"unknown points {sorted(unknown)}")
    out = {}
    for x, pt in grid.labels.items():
        val = set(u.values[pt.base])
        for par, v in pt.coords:
            val &= data.ball(u.values[par], (1 + v) * data.m)
        out[x] = frozenset(val)
    ext = SubsetFunctor(grid.poset, out)
    try:
        ext.check()
    except (EmptyValue, NotMonotone) as e:
        raise CertificationMismatch(f"extension lost monotonicity or non-emptiness: {e}") from e
    return ext


def components(points: list[str], data: MetricDataset, eps: Fraction) -> list[list[str]]:
    """Connected components of the graph joining points at distance <= eps, in dataset order."""
    ix = data.index
    pts = sorted(points, key=ix.__getitem__)
    n = len(pts)
    if n == 0:
        return []
    adj = np.array([[data.dist[ix[a]][ix[b]] <= eps for b in pts] for a in pts], dtype=bool)
    _, labels = connected_components(adj, directed=False)
    groups: dict[int, list[str]] = {}
    for x, lab in zip(pts, labels):
        groups.setdefault(int(lab), []).append(x)
    return sorted(groups.values(), key=lambda g: ix[g[0]])


def h0_functor(s: SubsetFunctor, eps, p: int, data: MetricDataset) -> VectFunctor:
    """Free vector space on components at each element, with the induced maps."""
    eps = to_fraction(eps)
    if eps < 0:
        raise ValidationError("epsilon must be non-negative")
    comps = {x: components(list(s.values[x]), data, eps) for x in s.poset.elements}
    where = {x: {pt: k for k, c in enumerate(cs) for pt in c} for x, cs in comps.items()}
    maps = {}
    for x, y in s.poset.covers:
        m = la.zeros(len(comps[y]), len(comps[x]))
        for k, c in enumerate(comps[x]):
            m[where[y][c[0]], k] = 1
        maps[(x, y)] = m
    f = VectFunctor(s.poset, {x: len(c) for x, c in comps.items()}, maps, p, validate=False)
    validate_functor(f)
    return f


@dataclass
class PipelineResult:
    grid: GridPoset
    extension: SubsetFunctor
    functor: VectFunctor
    betti: dict[int, BettiDiagram]
    resolution_fallback: dict[int, list[str]]

    def to_json(self) -> dict:
        from .serialize import grid_to_json

        order = self.grid.poset.elements
        return {
            "grid": grid_to_json(self.grid),
            "extension": {x: sorted(self.extension.values[x]) for x in order},
            "functor": self.functor.to_json(),
            "betti": {str(i): {x: n for x, n in d.items()} for i, d in sorted(self.betti.items())},
            "resolution_fallback": {str(i): v for i, v in sorted(self.resolution_fallback.items()) if v},
        }


def betti_all(f: VectFunctor, max_degree: int, jobs: int = 1) -> tuple[dict[int, BettiDiagram], dict[int, list[str]]]:
    """Koszul Betti numbers in degrees 0..max_degree at every element.

    Uncertified degrees fall back to a minimal resolution and are listed.
    """
    elems = list(f.poset.elements)

    def one(a: str) -> list[int | None]:
        cx = koszul_complex(f, a)
        row: list[int | None] = []
        for i in range(max_degree + 1):
            try:
                row.append(betti_koszul(f, a, i, cx))
            except KoszulValidityUnknown:
                row.append(None)
        return row

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            rows = list(ex.map(one, elems))
    else:
        rows = [one(a) for a in elems]
    fallback: dict[int, list[str]] = {i: [] for i in range(max_degree + 1)}
    res = None
    betti: dict[int, BettiDiagram] = {i: {} for i in range(max_degree + 1)}
    for a, row in zip(elems, rows):
        for i, v in enumerate(row):
            if v is None:
                res = res or minimal_resolution(f, max_degree)
                v = res.betti(i).get(a, 0)
                fallback[i].append(a)
            if v:
                betti[i][a] = v
    return betti, fallback


def pipeline_run(config: Mapping) -> PipelineResult:
    """Run the whole chain from a config mapping (see ``serialize.pipeline_from_json``)."""
    from .serialize import pipeline_from_json

    cfg = pipeline_from_json(config) if not isinstance(config, PipelineConfig) else config
    grid = build_grid(cfg.spec)
    u = SubsetFunctor(cfg.spec.base_poset, cfg.U)
    ext = extend_U(cfg.spec.base_poset, u, grid, cfg.dataset)
    f = h0_functor(ext, cfg.epsilon, cfg.p, cfg.dataset)
    betti, fallback = betti_all(f, cfg.max_degree, cfg.jobs)
    return PipelineResult(grid, ext, f, betti, fallback)


@dataclass(frozen=True)
class PipelineConfig:
    spec: GridSpec
    dataset: MetricDataset
    U: dict[str, frozenset[str]]
    epsilon: Fraction
    p: int = 2
    max_degree: int = 2
    jobs: int = 1

"""Transfers, left Kan extensions, transfer fibers and tame functors.

The transfer of ``f: I -> J`` sends ``a`` in J to the coproduct of the
elements mapping below ``a``, or to ``NEG_INF`` when there are none.
"""

from __future__ import annotations

from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .errors import (
    CertificationMismatch,
    KoszulValidityUnknown,
    NotHomomorphism,
    NotRelated,
    NotSemilattice,
    PreconditionFailed,
    ShapeMismatch,
    ValidationError,
)
from .homalg import (
    BettiDiagram,
    NatTransformation,
    VectFunctor,
    betti_koszul,
    colimit,
    induced_map,
    nat_space_basis,
    nat_space_dim,
)
from .poset import MonotoneMap, Poset, homomorphism_witness, is_consistent, is_upper_semilattice
from .realisation import (
    ZERO,
    GridPoset,
    GridSpec,
    RealPoint,
    build_grid,
    real_leq,
    validate_point,
)


class _NegInf:
    """The adjoined global minimum."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "-inf"

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()


def leq_star(p: Poset, x, y) -> bool:
    """Order on the poset with NEG_INF adjoined."""
    if x is NEG_INF:
        return True
    if y is NEG_INF:
        return False
    return p.leq(x, y)


def _fstar(f: MonotoneMap, x):
    return NEG_INF if x is NEG_INF else f(x)


@dataclass(frozen=True)
class TransferTable:
    f: MonotoneMap
    table: dict[str, object]

    def __call__(self, a):
        return NEG_INF if a is NEG_INF else self.table[a]

    @property
    def source(self) -> Poset:
        return self.f.target

    @property
    def target(self) -> Poset:
        return self.f.source


def transfer(f: MonotoneMap) -> TransferTable:
    i, j = f.source, f.target
    if not is_upper_semilattice(i):
        raise NotSemilattice("transfers need an upper semilattice as source")
    table = {}
    for a in j.elements:
        below = f.below(a)
        table[a] = NEG_INF if not below else i.coproduct(below)
    for a, b in j.covers:
        if not leq_star(i, table[a], table[b]):
            raise CertificationMismatch(f"transfer not monotone on {a} -> {b}")
    return TransferTable(f, table)


@dataclass
class TransferReport:
    failures: dict[str, tuple] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def first_counterexample(self) -> tuple[str, tuple] | None:
        return next(iter(self.failures.items()), None)


def check_transfer_props(f: MonotoneMap) -> TransferReport:
    """Check the eight standard properties of a transfer exhaustively.

    Failures are collected per item with a witness; a non-homomorphism is
    reported under ``"precondition"`` and the items are still checked.
    """
    i, j = f.source, f.target
    t = transfer(f)
    rep = TransferReport()
    w = homomorphism_witness(f)
    if w is not None:
        rep.failures["precondition"] = w
    i_star = [NEG_INF, *i.elements]
    j_star = [NEG_INF, *j.elements]

    def fail(item: str, *witness) -> None:
        rep.failures.setdefault(item, witness)

    def down_f(a) -> frozenset:
        return frozenset(x for x in i_star if leq_star(j, _fstar(f, x), a))

    for x in i_star:
        if not leq_star(i, x, t(_fstar(f, x))):
            fail("0", x)
    for a in j_star:
        fa = t(a)
        ffa = _fstar(f, fa)
        if not leq_star(j, ffa, a):
            fail("1", a)
        below = down_f(a)
        if fa not in below or not all(leq_star(i, x, fa) for x in below):
            fail("2", a)
        if t(_fstar(f, fa)) != fa:
            fail("3", a)
        fiber = [b for b in j_star if down_f(b) == below]
        if ffa not in fiber or not all(leq_star(j, ffa, b) for b in fiber):
            fail("5", a)
    for x in i_star:
        fx = _fstar(f, x)
        if _fstar(f, t(fx)) != fx:
            fail("4", x)
    downs = {a: f.below(a) for a in j.elements}
    for a in j.elements:
        for b in j.elements:
            if (downs[a] == downs[b]) != (t(a) == t(b)):
                fail("6", a, b)
    if f.is_injective:
        for x in i_star:
            if t(_fstar(f, x)) != x:
                fail("7", x)
    if f.is_surjective:
        for a in j_star:
            if _fstar(f, t(a)) != a:
                fail("8", a)
    return rep


def fibers(f: MonotoneMap) -> tuple[list[tuple[str, ...]], list[str | None]]:
    """Partition of the target by the set of source elements mapping below.

    Returns the blocks (each checked convex) and, for homomorphisms out of a
    semilattice, the global minimum of each block whose down-set is non-empty.
    """
    j = f.target
    groups: dict[frozenset, list[str]] = {}
    for a in j.elements:
        groups.setdefault(f.below(a), []).append(a)
    blocks = [tuple(v) for v in groups.values()]
    for blk in blocks:
        idx = [j.idx(x) for x in blk]
        between = j.leq_matrix[idx].any(axis=0) & j.leq_matrix[:, idx].any(axis=1)
        if set(np.flatnonzero(between)) != set(idx):
            raise CertificationMismatch(f"fiber {blk} is not convex")
    minima: list[str | None] = [None] * len(blocks)
    if is_upper_semilattice(f.source) and homomorphism_witness(f) is None:
        t = transfer(f)
        for k, blk in enumerate(blocks):
            fa = t(blk[0])
            if fa is NEG_INF:
                continue
            m = f(fa)
            if m not in blk or not all(j.leq(m, b) for b in blk):
                raise CertificationMismatch(f"block {blk} has no global minimum {m}")
            minima[k] = m
    return blocks, minima


# -- left Kan extensions -------------------------------------------------------


def _require_hom(f: MonotoneMap) -> TransferTable:
    if not is_upper_semilattice(f.source):
        raise NotHomomorphism("source is not an upper semilattice")
    w = homomorphism_witness(f)
    if w is not None:
        raise NotHomomorphism(f"not a homomorphism: witness {w}")
    return transfer(f)


def kan_extend_hom(g: VectFunctor, f: MonotoneMap, table: TransferTable | None = None) -> VectFunctor:
    """Left Kan extension along a homomorphism: ``g`` composed with the transfer."""
    t = table if table is not None else _require_hom(f)
    j = f.target
    dims = {a: 0 if t(a) is NEG_INF else g.dims[t(a)] for a in j.elements}
    maps = {}
    for a, b in j.covers:
        ta, tb = t(a), t(b)
        maps[(a, b)] = la.zeros(dims[b], 0) if ta is NEG_INF else g.matrix(ta, tb)
    return VectFunctor(j, dims, maps, g.p, validate=False)


@dataclass
class KanExtension:
    functor: VectFunctor
    unit: NatTransformation
    index: dict[str, list[str]]
    colimits: dict


def kan_extend_general(g: VectFunctor, f: MonotoneMap) -> KanExtension:
    """Left Kan extension by colimits over (f <= a), with its unit ``g -> ext o f``."""
    i, j = f.source, f.target
    index = {a: sorted(f.below(a), key=i.idx) for a in j.elements}
    cols = {a: colimit(g, index[a]) for a in j.elements}
    maps = {}
    for a, b in j.covers:
        maps[(a, b)] = induced_map(cols[a], index[a], cols[b].cocone(index[a]), g.p)
    ext = VectFunctor(j, {a: c.dim for a, c in cols.items()}, maps, g.p, validate=False)
    pulled = ext.pullback(f)
    unit = NatTransformation(g, pulled, {x: cols[f(x)].projections[x] for x in i.elements}, validate=False)
    return KanExtension(ext, unit, index, cols)


def kan_comparison(g: VectFunctor, f: MonotoneMap) -> NatTransformation:
    """The canonical map from the colimit form to the transfer form.

    For a homomorphism each (f <= a) has the transfer value as its maximum, so
    this is an isomorphism; it is returned unvalidated for the caller to check.
    """
    t = _require_hom(f)
    gen = kan_extend_general(g, f)
    hom = kan_extend_hom(g, f, t)
    comps = {}
    for a in f.target.elements:
        ta = t(a)
        if ta is NEG_INF:
            comps[a] = la.zeros(0, gen.functor.dims[a])
        else:
            cocone = np.hstack([g.matrix(x, ta) for x in gen.index[a]])
            comps[a] = induced_map(gen.colimits[a], gen.index[a], cocone, g.p)
    return NatTransformation(gen.functor, hom, comps, validate=False)


def is_isomorphism(phi: NatTransformation) -> bool:
    try:
        phi.validate()
    except ValidationError:
        return False
    for x, m in phi.components.items():
        if m.shape[0] != m.shape[1] or la.rank(m, phi.p) != m.shape[0]:
            return False
    return True


# -- adjunction ---------------------------------------------------------------


@dataclass
class AdjunctionReport:
    dim_left: int
    dim_right: int
    roundtrip_ok: bool

    @property
    def ok(self) -> bool:
        return self.dim_left == self.dim_right and self.roundtrip_ok


def adjunction_check(f: MonotoneMap, g: VectFunctor, h: VectFunctor) -> AdjunctionReport:
    """Compare Nat(g o transfer, h) on J with Nat(g, h o f) on I and round-trip bases."""
    if g.poset != f.source or h.poset != f.target or g.p != h.p:
        raise ShapeMismatch("functors do not live on the source and target of f")
    t = _require_hom(f)
    p = g.p
    left = kan_extend_hom(g, f, t)
    right = h.pullback(f)
    lb = nat_space_basis(left, h)
    rb = nat_space_basis(g, right)

    def bar(phi: Mapping[str, np.ndarray]) -> dict[str, np.ndarray]:
        out = {}
        for x in f.source.elements:
            fx = f(x)
            out[x] = la.compose(phi[fx], g.matrix(x, t(fx)), p)
        return out

    def hat(psi: Mapping[str, np.ndarray]) -> dict[str, np.ndarray]:
        out = {}
        for a in f.target.elements:
            ta = t(a)
            if ta is NEG_INF:
                out[a] = la.zeros(h.dims[a], 0)
            else:
                out[a] = la.compose(h.matrix(f(ta), a), psi[ta], p)
        return out

    ok = True
    for phi in lb:
        b = bar(phi)
        try:
            NatTransformation(g, right, b)
        except ValidationError:
            ok = False
        back = hat(b)
        ok &= all(np.array_equal(back[a] % p, phi[a] % p) for a in f.target.elements)
    for psi in rb:
        hh = hat(psi)
        try:
            NatTransformation(left, h, hh)
        except ValidationError:
            ok = False
        back = bar(hh)
        ok &= all(np.array_equal(back[x] % p, psi[x] % p) for x in f.source.elements)
    return AdjunctionReport(len(lb), len(rb), bool(ok))


# -- grid transfer ------------------------------------------------------------


def _check_grid_preconditions(spec: GridSpec) -> str:
    i = spec.base_poset
    if not is_upper_semilattice(i):
        raise PreconditionFailed("base poset is not an upper semilattice")
    if not is_consistent(i):
        raise PreconditionFailed("base poset is not consistent")
    d = spec.top
    if d is None:
        raise PreconditionFailed("grid bases must be the down-set of a single element")
    return d


def grid_transfer_point(spec: GridSpec, q: RealPoint):
    """Closed form for the largest grid point below ``q`` (NEG_INF if none)."""
    d = _check_grid_preconditions(spec)
    i = spec.base_poset
    validate_point(i, q)
    a = q.base
    # the base itself must share an ancestor with d; with empty support this
    # is not implied by the support condition
    if not i.has_ancestor(q.support | {d, a}):
        return NEG_INF
    v0 = spec.V[0] if spec.V else ZERO
    s = [x for x in i.parents(a) if q.value(x) < v0]
    c = i.meet(i.product(s), d) if s else i.meet(a, d)
    if c is None:
        raise CertificationMismatch(f"missing meet while transferring {q}")
    allowed = (*spec.V, ZERO)
    coords = {}
    pa = i.parents(a)
    for y in i.parents(c):
        above = [x for x in pa if i.leq(y, x)]
        loose = [x for x in above if not i.leq(c, x)]
        if not loose:
            continue
        m = min(q.value(x) for x in loose)
        coords[y] = max(v for v in allowed if v <= m)
    return RealPoint(c, tuple(coords.items()))


def grid_transfer(grid: GridPoset, q: RealPoint):
    """Grid id of the transfer of ``q``, or NEG_INF."""
    r = grid_transfer_point(grid.spec, q)
    return r if r is NEG_INF else grid.id_of(r)


def grid_transfer_bruteforce(grid: GridPoset, q: RealPoint):
    """Coproduct in the grid of every grid point below ``q``."""
    i = grid.spec.base_poset
    below = [x for x, pt in grid.labels.items() if real_leq(i, pt, q)]
    if not below:
        return NEG_INF
    c = grid.poset.coproduct(below)
    if c is None:
        raise CertificationMismatch(f"grid points below {q} have no coproduct")
    return c


# -- tame functors ------------------------------------------------------------


@dataclass
class TameFunctor:
    """A functor on the realisation, constant on the transfer fibers of a grid."""

    grid: GridPoset
    values: VectFunctor

    def __post_init__(self) -> None:
        _check_grid_preconditions(self.grid.spec)
        if self.values.poset != self.grid.poset:
            raise ValidationError("values must live on the grid poset")

    @classmethod
    def on_grid(cls, spec: GridSpec, make_values) -> TameFunctor:
        grid = build_grid(spec)
        return cls(grid, make_values(grid.poset))


def tame_eval(t: TameFunctor, p: RealPoint, q: RealPoint | None = None) -> tuple[int, np.ndarray | None]:
    """Dimension at ``p`` and, if ``q`` is given, the matrix along ``p <= q``."""
    x = grid_transfer(t.grid, p)
    d = 0 if x is NEG_INF else t.values.dims[x]
    if q is None:
        return d, None
    i = t.grid.spec.base_poset
    if not real_leq(i, p, q):
        raise NotRelated(f"{p} is not below {q}")
    y = grid_transfer(t.grid, q)
    if x is NEG_INF:
        return d, la.zeros(0 if y is NEG_INF else t.values.dims[y], 0)
    return d, t.values.matrix(x, y)


def restrict_to_grid(t: TameFunctor, grid: GridPoset) -> VectFunctor:
    """The tame functor evaluated on another grid over the same poset."""
    to = {x: grid_transfer(t.grid, pt) for x, pt in grid.labels.items()}
    vals = t.values
    dims = {x: 0 if s is NEG_INF else vals.dims[s] for x, s in to.items()}
    maps = {}
    for x, y in grid.poset.covers:
        sx, sy = to[x], to[y]
        maps[(x, y)] = la.zeros(dims[y], 0) if sx is NEG_INF else vals.matrix(sx, sy)
    return VectFunctor(grid.poset, dims, maps, vals.p, validate=False)


def refined_restriction(t: TameFunctor) -> tuple[GridPoset, VectFunctor]:
    grid = build_grid(t.grid.spec.refined())
    return grid, restrict_to_grid(t, grid)


def tame_betti(t: TameFunctor, i: int, jobs: int = 1) -> BettiDiagram:
    """Betti diagram in degree ``i`` on the grid points, via Koszul homology.

    Degrees above 2 are computed on the grid refined by one value below
    ``min V``, so every original point has a grid value strictly below all
    its coordinates.
    """
    if i <= 2:
        grid, values = t.grid, t.values
    else:
        grid, values = refined_restriction(t)
    targets = [(x, grid.id_of(pt)) for x, pt in t.grid.labels.items()]

    def one(pair):
        try:
            return pair[0], betti_koszul(values, pair[1], i)
        except KoszulValidityUnknown as e:
            raise PreconditionFailed(str(e)) from e

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            res = list(ex.map(one, targets))
    else:
        res = [one(pr) for pr in targets]
    return {x: n for x, n in sorted(res, key=lambda r: t.grid.poset.idx(r[0])) if n}


def pushforward_betti(beta: Mapping[str, int], f: MonotoneMap) -> BettiDiagram:
    """Generators moved along ``f`` and summed over fibers."""
    out: dict[str, int] = {}
    for b, n in beta.items():
        out[f(b)] = out.get(f(b), 0) + n
    return {k: v for k, v in out.items() if v}

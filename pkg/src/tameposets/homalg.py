"""Functors from finite posets to finite-dimensional F_p vector spaces.

Covers validation, colimits, free functors, radicals, minimal covers and
resolutions, Koszul complexes and Betti diagrams.
"""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .errors import (
    CertificationMismatch,
    KoszulValidityUnknown,
    NotExact,
    NotFunctorial,
    NotNatural,
    PreconditionFailed,
    ShapeMismatch,
    ValidationError,
)
from .poset import Poset

BettiDiagram = dict[str, int]


def _ro(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class VectFunctor:
    """Dimensions per element and a matrix ``dims[y] x dims[x]`` per cover ``x -> y``.

    Missing cover maps are allowed only when one side is zero-dimensional.
    ``free_generators`` is set by :func:`free_functor` and lists the element
    each generator sits at.
    """

    def __init__(
        self,
        poset: Poset,
        dims: Mapping[str, int],
        maps: Mapping[tuple[str, str], object] | None = None,
        p: int = la.DEFAULT_PRIME,
        *,
        validate: bool = True,
        free_generators: tuple[str, ...] | None = None,
    ):
        self.poset = poset
        self.p = la.check_prime(p)
        for x in dims:
            poset.idx(x)
        self.dims: dict[str, int] = {x: int(dims.get(x, 0)) for x in poset.elements}
        if any(d < 0 for d in self.dims.values()):
            raise ValidationError("dimensions must be non-negative")
        maps = dict(maps or {})
        for key in maps:
            if tuple(key) not in poset.covers:
                raise ShapeMismatch(f"{key} is not a cover")
        self.maps: dict[tuple[str, str], np.ndarray] = {}
        for x, y in poset.covers:
            shape = (self.dims[y], self.dims[x])
            if (x, y) in maps:
                self.maps[(x, y)] = _ro(la.as_matrix(maps[(x, y)], self.p, shape))
            elif 0 in shape:
                self.maps[(x, y)] = _ro(la.zeros(*shape))
            else:
                raise ShapeMismatch(f"missing map for cover {x} -> {y}")
        self.free_generators = free_generators
        self._paths: dict[str, dict[str, np.ndarray]] = {}
        if validate:
            validate_functor(self)

    def __call__(self, x: str) -> int:
        return self.dims[x]

    def __repr__(self) -> str:
        return f"VectFunctor(p={self.p}, total dim={self.total_dim}, on {self.poset!r})"

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0

    def _paths_from(self, x: str) -> dict[str, np.ndarray]:
        got = self._paths.get(x)
        if got is not None:
            return got
        p = self.poset
        xi = p.idx(x)
        out = {x: la.identity(self.dims[x])}
        up = p.leq_matrix[xi]
        for y in p.topological_order:
            yi = p.idx(y)
            if y == x or not up[yi]:
                continue
            q = next(p.elements[k] for k in p._parent_idx[yi] if up[k])
            out[y] = la.compose(self.maps[(q, y)], out[q], self.p)
        for m in out.values():
            m.setflags(write=False)
        self._paths[x] = out
        return out

    def matrix(self, x: str, y: str) -> np.ndarray:
        """The canonical matrix of ``x <= y``."""
        try:
            return self._paths_from(x)[y]
        except KeyError:
            raise ValidationError(f"{x!r} is not below {y!r}") from None

    def restrict(self, sub: Poset) -> VectFunctor:
        """Restriction to an induced subposet."""
        maps = {(x, y): self.matrix(x, y) for x, y in sub.covers}
        return VectFunctor(sub, {x: self.dims[x] for x in sub.elements}, maps, self.p, validate=False)

    def pullback(self, f) -> VectFunctor:
        """The composite ``self o f`` for a monotone map ``f`` into this poset."""
        src = f.source
        maps = {(x, y): self.matrix(f(x), f(y)) for x, y in src.covers}
        return VectFunctor(src, {x: self.dims[f(x)] for x in src.elements}, maps, self.p, validate=False)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "dims": dict(self.dims),
            "maps": {f"{x}->{y}": m.tolist() for (x, y), m in sorted(self.maps.items()) if m.size},
        }


def validate_functor(f: VectFunctor) -> None:
    """Check that all cover paths between two elements compose to the same matrix."""
    p = f.poset
    for x in p.elements:
        paths = f._paths_from(x)
        for y, m in paths.items():
            for zi in p._child_idx[p.idx(y)]:
                z = p.elements[zi]
                if not np.array_equal(la.compose(f.maps[(y, z)], m, f.p), paths[z]):
                    raise NotFunctorial(f"paths {x} -> {z} disagree through {y}")


def zero_functor(poset: Poset, p: int = la.DEFAULT_PRIME) -> VectFunctor:
    return VectFunctor(poset, {}, {}, p, validate=False)


def constant_functor(poset: Poset, n: int = 1, p: int = la.DEFAULT_PRIME) -> VectFunctor:
    return VectFunctor(poset, {x: n for x in poset.elements}, {c: la.identity(n) for c in poset.covers}, p, validate=False)


def direct_sum(f: VectFunctor, g: VectFunctor) -> VectFunctor:
    if f.poset != g.poset or f.p != g.p:
        raise ShapeMismatch("direct sum needs functors on one poset over one field")
    maps = {c: la.direct_sum(f.maps[c], g.maps[c]) for c in f.poset.covers}
    return VectFunctor(f.poset, {x: f.dims[x] + g.dims[x] for x in f.poset.elements}, maps, f.p, validate=False)


class NatTransformation:
    """Components ``target(x) x source(x)`` satisfying naturality on covers."""

    def __init__(self, source: VectFunctor, target: VectFunctor, components: Mapping[str, object], *, validate: bool = True):
        if source.poset != target.poset or source.p != target.p:
            raise ShapeMismatch("natural transformations need functors on one poset over one field")
        self.source, self.target = source, target
        self.p = source.p
        self.components: dict[str, np.ndarray] = {}
        for x in source.poset.elements:
            shape = (target.dims[x], source.dims[x])
            c = components.get(x)
            self.components[x] = _ro(la.zeros(*shape) if c is None else la.as_matrix(c, self.p, shape))
        if validate:
            self.validate()

    def __getitem__(self, x: str) -> np.ndarray:
        return self.components[x]

    def validate(self) -> None:
        for x, y in self.source.poset.covers:
            lhs = la.compose(self.target.maps[(x, y)], self.components[x], self.p)
            rhs = la.compose(self.components[y], self.source.maps[(x, y)], self.p)
            if not np.array_equal(lhs, rhs):
                raise NotNatural(f"square at cover {x} -> {y} does not commute")

    def compose(self, other: NatTransformation) -> NatTransformation:
        """``self o other``."""
        comps = {x: la.compose(self.components[x], other.components[x], self.p) for x in self.components}
        return NatTransformation(other.source, self.target, comps, validate=False)


def identity_nat(f: VectFunctor) -> NatTransformation:
    return NatTransformation(f, f, {x: la.identity(d) for x, d in f.dims.items()}, validate=False)


# -- colimits -----------------------------------------------------------------


@dataclass(frozen=True)
class Colimit:
    dim: int
    projections: dict[str, np.ndarray]

    def cocone(self, index: Sequence[str]) -> np.ndarray:
        """Projections side by side, in ``index`` order."""
        return np.hstack([self.projections[x] for x in index]) if index else la.zeros(self.dim, 0)


def colimit(f: VectFunctor, over: Iterable[str] | None = None, *, shortcut: bool = True) -> Colimit:
    """Colimit of ``f`` restricted to ``over`` (default: the whole poset).

    Presented as the cokernel of ``v -> f(x<y)v - v`` over the covers of the
    induced index poset. With ``shortcut`` an index poset with a maximum just
    returns the value there.
    """
    p = f.poset
    idx = sorted({p.idx(x) for x in (p.elements if over is None else over)})
    index = [p.elements[i] for i in idx]
    if not index:
        return Colimit(0, {})
    sub = p.leq_matrix[np.ix_(idx, idx)]
    top = np.flatnonzero(sub.all(axis=0))
    if shortcut and top.size:
        m = index[int(top[0])]
        return Colimit(f.dims[m], {x: f.matrix(x, m) for x in index})
    offs = np.concatenate([[0], np.cumsum([f.dims[x] for x in index])])
    covers = np.argwhere(_hasse(sub))
    cols = []
    for s, t in covers:
        d = f.dims[index[s]]
        if d == 0:
            continue
        block = la.zeros(int(offs[-1]), d)
        block[offs[t] : offs[t + 1]] = f.matrix(index[s], index[t])
        block[offs[s] : offs[s + 1]] = (-la.identity(d)) % f.p
        cols.append(block)
    rel = np.hstack(cols) if cols else la.zeros(int(offs[-1]), 0)
    dim, q = la.cokernel(rel, f.p)
    return Colimit(dim, {x: q[:, offs[k] : offs[k + 1]] for k, x in enumerate(index)})


def _hasse(sub: np.ndarray) -> np.ndarray:
    lt = sub & ~np.eye(sub.shape[0], dtype=bool)
    li = lt.astype(np.int32)
    return lt & ~((li @ li) > 0)


def cofinal_index(p: Poset, a: str) -> frozenset[str]:
    """Products of non-empty parent sets of ``a`` that have an ancestor."""
    pars = sorted(p.parents(a))
    out = set()
    for k in range(1, len(pars) + 1):
        for s in itertools.combinations(pars, k):
            if not p.has_ancestor(s):
                continue
            m = p.product(s)
            if m is None:
                raise PreconditionFailed(f"parents {s} of {a!r} have no product")
            out.add(m)
    return frozenset(out)


def colimit_below(f: VectFunctor, a: str, *, use_cofinal_reduction: bool = False, shortcut: bool = True) -> Colimit:
    """Colimit over (I < a), optionally over the smaller cofinal index."""
    p = f.poset
    index = cofinal_index(p, a) if use_cofinal_reduction else p.strict_down(a)
    return colimit(f, index, shortcut=shortcut)


def betti0_via_colimit(g: VectFunctor, a: str, *, use_cofinal_reduction: bool = False) -> int:
    """Generators at ``a``: the cokernel of the colimit over (I < a) mapping into g(a).

    Falls back to the full index when the cofinal one is undefined.
    """
    try:
        col = colimit_below(g, a, use_cofinal_reduction=use_cofinal_reduction)
    except PreconditionFailed:
        col = colimit_below(g, a)
    index = sorted(col.projections, key=g.poset.idx)
    if not index or col.dim == 0:
        return g.dims[a]
    m = induced_map(col, index, np.hstack([g.matrix(x, a) for x in index]), g.p)
    return g.dims[a] - la.rank(m, g.p)


def induced_map(src: Colimit, src_index: Sequence[str], cocone: np.ndarray, p: int) -> np.ndarray:
    """The map out of a colimit determined by a compatible cocone."""
    q = src.cocone(src_index)
    m = la.solve_right(q, cocone, p)
    if m is None:
        raise CertificationMismatch("cocone does not factor through the colimit")
    return m


# -- free functors, radicals, covers ----------------------------------------


def free_functor(beta: Mapping[str, int], poset: Poset, p: int = la.DEFAULT_PRIME) -> VectFunctor:
    """Direct sum of ``beta[b]`` copies of K[b, -) for each ``b``."""
    gens = tuple(b for b in poset.elements for _ in range(int(beta.get(b, 0))))
    for b in beta:
        poset.idx(b)
    leq = poset.leq_matrix
    gidx = np.array([poset.idx(b) for b in gens], dtype=np.int64)
    live = {x: np.flatnonzero(leq[gidx, poset.idx(x)]) if gens else np.zeros(0, dtype=np.int64) for x in poset.elements}
    maps = {}
    for x, y in poset.covers:
        m = la.zeros(live[y].size, live[x].size)
        pos = {int(g): r for r, g in enumerate(live[y])}
        for c, g in enumerate(live[x]):
            m[pos[int(g)], c] = 1
        maps[(x, y)] = m
    dims = {x: int(live[x].size) for x in poset.elements}
    return VectFunctor(poset, dims, maps, p, validate=False, free_generators=gens)


def betti_of_free(f: VectFunctor) -> BettiDiagram:
    if f.free_generators is None:
        raise ValidationError("functor is not flagged free")
    return dict(Counter(f.free_generators))


def radical(g: VectFunctor) -> dict[str, np.ndarray]:
    """A column basis of rad(g)(a) inside g(a) for each a.

    Images along any s < a factor through a parent of a, so parent maps span it.
    """
    p = g.poset
    out = {}
    for a in p.elements:
        blocks = [g.maps[(q, a)] for q in p.parents(a)]
        m = np.hstack(blocks) if blocks else la.zeros(g.dims[a], 0)
        out[a] = la.image_basis(m, g.p) if m.size else la.zeros(g.dims[a], 0)
    return out


def radical_quotient(g: VectFunctor) -> BettiDiagram:
    rad = radical(g)
    return _nonzero({a: g.dims[a] - rad[a].shape[1] for a in g.poset.elements})


def _nonzero(d: Mapping[str, int]) -> BettiDiagram:
    return {k: int(v) for k, v in d.items() if v}


def minimal_cover(g: VectFunctor) -> tuple[VectFunctor, NatTransformation]:
    """A free functor with a surjection onto ``g`` that is an iso on radical quotients."""
    p = g.poset
    rad = radical(g)
    chosen: dict[str, list[int]] = {}
    for a in p.elements:
        chosen[a] = la.extend_to_basis(rad[a], g.dims[a], g.p) if g.dims[a] else []
    beta = {a: len(v) for a, v in chosen.items()}
    cover = free_functor(beta, p, g.p)
    gens = cover.free_generators
    slot = Counter()
    gen_vec = []
    for b in gens:
        gen_vec.append((b, chosen[b][slot[b]]))
        slot[b] += 1
    comps = {}
    for c in p.elements:
        cols = []
        for b, j in gen_vec:
            if p.leq(b, c):
                cols.append(g.matrix(b, c)[:, j])
        comps[c] = np.column_stack(cols) if cols else la.zeros(g.dims[c], 0)
        if la.rank(comps[c], g.p) != g.dims[c]:
            raise CertificationMismatch(f"minimal cover is not surjective at {c!r}")
    return cover, NatTransformation(cover, g, comps, validate=False)


def kernel(phi: NatTransformation) -> tuple[VectFunctor, NatTransformation]:
    """The kernel functor with its inclusion into the source."""
    f, p = phi.source, phi.p
    bases = {x: la.kernel_basis(phi[x], p) for x in f.poset.elements}
    maps = {}
    for x, y in f.poset.covers:
        m = la.solve(bases[y], la.compose(f.maps[(x, y)], bases[x], p), p)
        if m is None:
            raise CertificationMismatch(f"kernel not preserved along {x} -> {y}")
        maps[(x, y)] = m
    k = VectFunctor(f.poset, {x: b.shape[1] for x, b in bases.items()}, maps, p, validate=False)
    return k, NatTransformation(k, f, bases, validate=False)


def image(phi: NatTransformation) -> tuple[VectFunctor, NatTransformation]:
    """The image functor with its inclusion into the target."""
    g, p = phi.target, phi.p
    bases = {x: la.image_basis(phi[x], p) for x in g.poset.elements}
    maps = {}
    for x, y in g.poset.covers:
        m = la.solve(bases[y], la.compose(g.maps[(x, y)], bases[x], p), p)
        if m is None:
            raise CertificationMismatch(f"image not preserved along {x} -> {y}")
        maps[(x, y)] = m
    im = VectFunctor(g.poset, {x: b.shape[1] for x, b in bases.items()}, maps, p, validate=False)
    return im, NatTransformation(im, g, bases, validate=False)


def cokernel(phi: NatTransformation) -> tuple[VectFunctor, NatTransformation]:
    """The cokernel functor with the projection from the target."""
    g, p = phi.target, phi.p
    qs = {x: la.cokernel(phi[x], p)[1] for x in g.poset.elements}
    maps = {}
    for x, y in g.poset.covers:
        m = la.solve_right(qs[x], la.compose(qs[y], g.maps[(x, y)], p), p)
        if m is None:
            raise CertificationMismatch(f"cokernel map undefined along {x} -> {y}")
        maps[(x, y)] = m
    h = VectFunctor(g.poset, {x: q.shape[0] for x, q in qs.items()}, maps, p, validate=False)
    return h, NatTransformation(g, h, qs, validate=False)


# -- resolutions --------------------------------------------------------------


@dataclass
class Resolution:
    """Free terms ``P_0, P_1, ...`` with ``diffs[i-1]: P_i -> P_{i-1}`` and ``P_0 -> G``.

    ``complete`` is true when the last kernel was zero, so all later terms vanish.
    """

    functor: VectFunctor
    terms: list[VectFunctor]
    diffs: list[NatTransformation]
    augmentation: NatTransformation
    complete: bool

    def betti(self, i: int) -> BettiDiagram:
        if i < len(self.terms):
            return _nonzero(betti_of_free(self.terms[i]))
        if self.complete:
            return {}
        raise ValidationError(f"resolution was truncated before degree {i}")

    def check_exact(self) -> None:
        p = self.functor.p
        for a in self.functor.poset.elements:
            ranks = [la.rank(self.augmentation[a], p)] + [la.rank(d[a], p) for d in self.diffs]
            if ranks[0] != self.functor.dims[a]:
                raise CertificationMismatch(f"augmentation not surjective at {a!r}")
            for i, t in enumerate(self.terms):
                incoming = ranks[i + 1] if i + 1 < len(ranks) else None
                if incoming is None:
                    if self.complete and ranks[i] != t.dims[a]:
                        raise CertificationMismatch(f"last differential not injective at {a!r}")
                    continue
                if ranks[i] + incoming != t.dims[a]:
                    raise CertificationMismatch(f"resolution not exact at degree {i}, element {a!r}")


def minimal_resolution(g: VectFunctor, length: int | None = None) -> Resolution:
    """Iterated minimal covers of kernels; ``length`` caps the top degree."""
    p0, aug = minimal_cover(g)
    terms, diffs = [p0], []
    k, inc = kernel(aug)
    while not k.is_zero and (length is None or len(terms) <= length):
        pi, cov = minimal_cover(k)
        d = inc.compose(cov)
        terms.append(pi)
        diffs.append(d)
        k, inc = kernel(d)
    res = Resolution(g, terms, diffs, aug, k.is_zero)
    res.check_exact()
    return res


def betti_resolution(g: VectFunctor, i: int) -> BettiDiagram:
    return minimal_resolution(g, i).betti(i)


# -- Koszul complexes -------------------------------------------------------


@dataclass
class VectComplex:
    """Vector spaces ``C_0, C_1, ...`` with ``diffs[k-1]: C_k -> C_{k-1}``."""

    dims: list[int]
    diffs: list[np.ndarray]
    p: int

    def rank_out(self, k: int) -> int:
        if k == 0 or k >= len(self.dims):
            return 0
        return la.rank(self.diffs[k - 1], self.p)

    def homology(self, k: int) -> int:
        if k >= len(self.dims):
            return 0
        return self.dims[k] - self.rank_out(k) - self.rank_out(k + 1)

    def homologies(self) -> list[int]:
        return [self.homology(k) for k in range(len(self.dims))]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.dims))

    def check_square_zero(self) -> None:
        for k in range(1, len(self.diffs)):
            if not la.is_zero(la.compose(self.diffs[k - 1], self.diffs[k], self.p), self.p):
                raise CertificationMismatch(f"d o d != 0 at degree {k + 1}")


@dataclass
class KoszulComplex(VectComplex):
    element: str = ""
    order: tuple[str, ...] = ()
    subsets: list[list[tuple[str, ...]]] = field(default_factory=list)


def koszul_complex(g: VectFunctor, a: str, order: Sequence[str] | None = None, *, shortcut: bool = True) -> KoszulComplex:
    """The Koszul complex of ``g`` at ``a`` for a linear order on the parents of ``a``.

    Degree k sums colimits over the common down-set of each k-element parent
    set with an ancestor; the differential drops one parent at a time with
    alternating signs.
    """
    pos = g.poset
    pars = tuple(sorted(pos.parents(a)) if order is None else order)
    if set(pars) != pos.parents(a) or len(pars) != len(set(pars)):
        raise ValidationError(f"order must list the parents of {a!r}")
    p = g.p
    subsets: list[list[tuple[str, ...]]] = [[()]]
    colims: dict[tuple[str, ...], Colimit] = {}
    index: dict[tuple[str, ...], list[str]] = {}
    for k in range(1, len(pars) + 1):
        level = []
        for s in itertools.combinations(pars, k):
            anc = pos.ancestors(s)
            if not anc:
                continue
            level.append(s)
            index[s] = sorted(anc, key=pos.idx)
            colims[s] = colimit(g, anc, shortcut=shortcut)
        if not level:
            break
        subsets.append(level)
    dims = [g.dims[a]] + [sum(colims[s].dim for s in lvl) for lvl in subsets[1:]]
    diffs = []
    for k in range(1, len(subsets)):
        rows_off = _offsets(subsets[k - 1], lambda s: g.dims[a] if not s else colims[s].dim)
        cols_off = _offsets(subsets[k], lambda s: colims[s].dim)
        d = la.zeros(dims[k - 1], dims[k])
        for s in subsets[k]:
            c0, c1 = cols_off[s]
            if c0 == c1:
                continue
            for j in range(len(s)):
                t = s[:j] + s[j + 1 :]
                r0, r1 = rows_off[t]
                if r0 == r1:
                    continue
                if t:
                    cocone = colims[t].cocone(index[s])
                else:
                    cocone = np.hstack([g.matrix(x, a) for x in index[s]])
                block = induced_map(colims[s], index[s], cocone, p)
                d[r0:r1, c0:c1] = (d[r0:r1, c0:c1] + (-1) ** j * block) % p
        diffs.append(d)
    cx = KoszulComplex(dims, diffs, p, element=a, order=pars, subsets=subsets)
    cx.check_square_zero()
    return cx


def _offsets(items, size) -> dict:
    out, o = {}, 0
    for s in items:
        n = size(s)
        out[s] = (o, o + n)
        o += n
    return out


def koszul_homology(g: VectFunctor, a: str, i: int, order: Sequence[str] | None = None) -> int:
    return koszul_complex(g, a, order).homology(i)


def has_parent_products(p: Poset, a: str) -> bool:
    """Every non-empty parent set of ``a`` with an ancestor has a product."""
    pars = sorted(p.parents(a))
    for k in range(2, len(pars) + 1):
        for s in itertools.combinations(pars, k):
            if p.has_ancestor(s) and p.product(s) is None:
                return False
    return True


def betti_koszul(g: VectFunctor, a: str, i: int, complex_: KoszulComplex | None = None) -> int:
    """Betti number at ``a`` in degree ``i`` read off Koszul homology.

    Degrees up to 2 are always valid; higher degrees need the parent-product
    property at ``a``.
    """
    if i > 2 and not has_parent_products(g.poset, a):
        raise KoszulValidityUnknown(f"degree {i} at {a!r} is not certified: some parent set lacks a product")
    cx = complex_ if complex_ is not None else koszul_complex(g, a)
    return cx.homology(i)


def betti_koszul_diagram(g: VectFunctor, i: int) -> BettiDiagram:
    return _nonzero({a: betti_koszul(g, a, i) for a in g.poset.elements})


# -- short exact sequences ----------------------------------------------------


@dataclass
class ExactnessReport:
    element: str
    degree_dims: dict[str, list[int]]
    homology: dict[str, list[int]]
    additive: list[bool]
    certified_degrees: list[int]
    euler: dict[str, int]

    @property
    def ok(self) -> bool:
        return all(self.additive[k] for k in self.certified_degrees if k < len(self.additive))

    @property
    def euler_additive(self) -> bool:
        return self.euler["G"] == self.euler["F"] + self.euler["H"]


def exactness_report(iota: NatTransformation, pi: NatTransformation, a: str) -> ExactnessReport:
    """Degreewise comparison of Koszul complexes at ``a`` along ``0 -> F -> G -> H -> 0``."""
    f, g, h = iota.source, iota.target, pi.target
    if pi.source is not g and (pi.source.poset != g.poset or pi.source.dims != g.dims):
        raise NotExact("maps do not compose")
    p = g.p
    for x in g.poset.elements:
        if la.rank(iota[x], p) != f.dims[x]:
            raise NotExact(f"first map not injective at {x!r}")
        if la.rank(pi[x], p) != h.dims[x]:
            raise NotExact(f"second map not surjective at {x!r}")
        if not la.is_zero(la.compose(pi[x], iota[x], p), p) or g.dims[x] != f.dims[x] + h.dims[x]:
            raise NotExact(f"not exact in the middle at {x!r}")
    cxs = {"F": koszul_complex(f, a), "G": koszul_complex(g, a), "H": koszul_complex(h, a)}
    top = max(len(c.dims) for c in cxs.values())
    dims = {k: c.dims + [0] * (top - len(c.dims)) for k, c in cxs.items()}
    additive = [dims["G"][k] == dims["F"][k] + dims["H"][k] for k in range(top)]
    certified = list(range(top)) if has_parent_products(g.poset, a) else [k for k in range(min(top, 2))]
    return ExactnessReport(
        element=a,
        degree_dims=dims,
        homology={k: c.homologies() + [0] * (top - len(c.dims)) for k, c in cxs.items()},
        additive=additive,
        certified_degrees=certified,
        euler={k: c.euler_characteristic() for k, c in cxs.items()},
    )


# -- spaces of natural transformations -------------------------------------------


def nat_space_basis(f: VectFunctor, g: VectFunctor) -> list[dict[str, np.ndarray]]:
    """A basis of Nat(f, g), solved from the naturality equations on covers."""
    if f.poset != g.poset or f.p != g.p:
        raise ShapeMismatch("functors must share poset and field")
    p = f.p
    pos = f.poset
    offs, o = {}, 0
    for x in pos.elements:
        offs[x] = o
        o += g.dims[x] * f.dims[x]
    rows = []
    for x, y in sorted(pos.covers):
        # vec(G(xy) phi_x - phi_y F(xy)) with row-major vec(A X B) = (A kron B^T) vec(X)
        n_out = g.dims[y] * f.dims[x]
        if n_out == 0:
            continue
        block = la.zeros(n_out, o)
        a1 = np.kron(g.maps[(x, y)], la.identity(f.dims[x]))
        block[:, offs[x] : offs[x] + a1.shape[1]] = a1 % p
        a2 = np.kron(la.identity(g.dims[y]), f.maps[(x, y)].T)
        block[:, offs[y] : offs[y] + a2.shape[1]] = (block[:, offs[y] : offs[y] + a2.shape[1]] - a2) % p
        rows.append(block)
    system = np.vstack(rows) if rows else la.zeros(0, o)
    ker = la.kernel_basis(system, p)
    out = []
    for c in range(ker.shape[1]):
        v = ker[:, c]
        out.append({x: v[offs[x] : offs[x] + g.dims[x] * f.dims[x]].reshape(g.dims[x], f.dims[x]) for x in pos.elements})
    return out


def nat_space_dim(f: VectFunctor, g: VectFunctor) -> int:
    return len(nat_space_basis(f, g))

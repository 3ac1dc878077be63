"""Points of the realisation of a finite poset, its order, sups, and finite grids.

A point ``(a, f)`` pairs an element ``a`` with rational coordinates in
``(-1, 0]`` on the parents of ``a``; only non-zero coordinates are stored.
All comparisons use exact ``Fraction`` arithmetic.
"""

from __future__ import annotations

import itertools
import math
import os
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    CertificationMismatch,
    CoordinateHitMinusOne,
    GridTooLarge,
    NotASup,
    NotRelated,
    SearchBudgetExceeded,
    SupportNoAncestor,
    UnknownElement,
    ValidationError,
    ValueOutOfRange,
)
from .poset import PAR_DIM_BUDGET, Poset, _max_ancestral_subset

GRID_CAP = 20_000
ZERO = Fraction(0)
MINUS_ONE = Fraction(-1)

# cross-check the two forms of the order on every comparison
DEBUG_CROSSCHECK = os.environ.get("TAMEPOSETS_DEBUG", "").strip().lower() in {"1", "true", "yes"}


def to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise ValidationError(f"not a rational: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except ValueError:
            raise ValidationError(f"not a rational: {v!r}") from None
    raise ValidationError(f"exact rationals required, got {type(v).__name__} {v!r}")


def format_fraction(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True, order=True)
class RealPoint:
    """The point ``(base, f)``; ``coords`` keeps the non-zero values sorted by parent."""

    base: str
    coords: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self) -> None:
        raw = self.coords.items() if isinstance(self.coords, Mapping) else self.coords
        clean = {}
        for k, v in raw:
            v = to_fraction(v)
            if v != 0:
                clean[str(k)] = v
        object.__setattr__(self, "coords", tuple(sorted(clean.items())))

    def value(self, parent: str) -> Fraction:
        for k, v in self.coords:
            if k == parent:
                return v
        return ZERO

    @property
    def support(self) -> frozenset[str]:
        return frozenset(k for k, _ in self.coords)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.coords)

    def encode(self) -> str:
        if not self.coords:
            return self.base
        inner = ";".join(f"{k}={format_fraction(v)}" for k, v in self.coords)
        return f"{self.base}[{inner}]"

    def __str__(self) -> str:
        return self.encode()


def point(base: str, coords: Mapping[str, object] | None = None) -> RealPoint:
    return RealPoint(base, tuple((coords or {}).items()))


def validate_point(i: Poset, p: RealPoint) -> None:
    pars = i.parents(p.base)
    for k, v in p.coords:
        if k not in pars:
            raise UnknownElement(f"{k!r} is not a parent of {p.base!r}")
        if not (MINUS_ONE < v <= 0):
            raise ValueOutOfRange(f"coordinate {k}={v} outside (-1, 0]")
    if not i.has_ancestor(p.support):
        raise SupportNoAncestor(f"support {sorted(p.support)} of {p} has no ancestor")


def _below_parents(i: Poset, a: int, x: int) -> list[int]:
    """Parents of ``a`` lying below ``x``."""
    return [q for q in i._parent_idx[a] if i.leq_matrix[q, x]]


def translate(i: Poset, f: Mapping[str, Fraction] | RealPoint, a: str, b: str) -> dict[str, Fraction]:
    """The translation of coordinates ``f`` at ``a`` along ``a <= b``.

    Returns a value for every parent of ``b``: -1 on a-dependent parents,
    the minimum of ``f`` over the parents of ``a`` below it on a-independent
    ones, and 0 on a-inconsistent ones.
    """
    if not i.leq(a, b):
        raise NotRelated(f"{a!r} is not below {b!r}")
    vals = f.as_dict() if isinstance(f, RealPoint) else {k: to_fraction(v) for k, v in f.items()}
    ai = i.idx(a)
    cls = i.class_matrix
    out = {}
    for x in i._parent_idx[i.idx(b)]:
        c = cls[ai, x]
        if c == 0:
            v = MINUS_ONE
        elif c == 1:
            v = min(vals.get(i.elements[q], ZERO) for q in _below_parents(i, ai, x))
        else:
            v = ZERO
        out[i.elements[x]] = v
    return out


def real_leq_conditions(i: Poset, p: RealPoint, q: RealPoint) -> bool:
    """Order test by the three conditions on bases, supports and minima."""
    a, b = i.idx(p.base), i.idx(q.base)
    if not i.leq_matrix[a, b]:
        return False
    cls = i.class_matrix
    for x, _ in q.coords:
        if cls[a, i.idx(x)] == 2:
            return False
    for x in i._parent_idx[b]:
        if cls[a, x] == 1:
            m = min(p.value(i.elements[y]) for y in _below_parents(i, a, x))
            if m > q.value(i.elements[x]):
                return False
    return True


def real_leq_translation(i: Poset, p: RealPoint, q: RealPoint) -> bool:
    """Order test by comparing the translated coordinates pointwise."""
    if not i.leq(p.base, q.base):
        return False
    t = translate(i, p, p.base, q.base)
    return all(v <= q.value(x) for x, v in t.items())


def real_leq(i: Poset, p: RealPoint, q: RealPoint, *, crosscheck: bool | None = None) -> bool:
    r = real_leq_conditions(i, p, q)
    if DEBUG_CROSSCHECK if crosscheck is None else crosscheck:
        if r != real_leq_translation(i, p, q):
            raise CertificationMismatch(f"order forms disagree on {p} <= {q}")
    return r


def real_sup_over(i: Poset, s: Iterable[RealPoint], b: str) -> RealPoint:
    """The sup of ``s`` sitting over ``b``, where ``b`` is a sup of the bases."""
    s = list(s)
    if b not in i.sups({p.base for p in s}):
        raise NotASup(f"{b!r} is not a sup of the bases {sorted({p.base for p in s})}")
    out = {x: MINUS_ONE for x in i.parents(b)}
    for p in s:
        for x, v in translate(i, p, p.base, b).items():
            out[x] = max(out[x], v)
    if not s:
        out = {x: ZERO for x in out}
    hit = [x for x, v in out.items() if v == MINUS_ONE]
    if hit:
        raise CoordinateHitMinusOne(f"sup over {b!r} has coordinate -1 at {hit}")
    return RealPoint(b, tuple(out.items()))


def real_join(i: Poset, p: RealPoint, q: RealPoint) -> RealPoint | None:
    """The coproduct of two points when the bases have a coproduct."""
    b = i.join(p.base, q.base)
    return None if b is None else real_sup_over(i, (p, q), b)


def real_dim(i: Poset, p: RealPoint, budget: int = PAR_DIM_BUDGET) -> int:
    """Largest parent set containing the support and having an ancestor."""
    pars = list(i._parent_idx[i.idx(p.base)])
    if len(pars) > budget:
        raise SearchBudgetExceeded(f"{len(pars)} parents exceed budget {budget}")
    return _max_ancestral_subset(i, pars, [i.idx(x) for x in p.support])


# -- grids ------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Bases ``D`` inside ``base_poset`` and coordinate values ``V`` in (-1, 0)."""

    base_poset: Poset
    D: frozenset[str]
    V: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        vs = sorted({to_fraction(v) for v in self.V})
        for v in vs:
            if not (MINUS_ONE < v < 0):
                raise ValueOutOfRange(f"grid value {v} outside (-1, 0)")
        d = frozenset(self.D)
        for x in d:
            self.base_poset.idx(x)
        object.__setattr__(self, "V", tuple(vs))
        object.__setattr__(self, "D", d)

    @classmethod
    def below(cls, i: Poset, d: str, v: Iterable = ()) -> GridSpec:
        return cls(i, i.down(d), tuple(v))

    @property
    def is_down_closed(self) -> bool:
        return self.base_poset.is_down_closed(self.D)

    @property
    def top(self) -> str | None:
        """The element ``d`` with ``D = (I <= d)``, if there is one."""
        i = self.base_poset
        m = i.maximal_elements(self.D)
        if len(m) != 1:
            return None
        (d,) = m
        return d if i.down(d) == self.D else None

    def refined(self) -> GridSpec:
        """Same grid with one extra value halfway between -1 and ``min V``."""
        lo = self.V[0] if self.V else ZERO
        return GridSpec(self.base_poset, self.D, (*self.V, (lo - 1) / 2))

    def has_epsilon_below(self, p: RealPoint) -> bool:
        """Some value of V lies strictly below every coordinate of ``p``, zeros included."""
        if not self.V:
            return False
        return all(v > self.V[0] for _, v in p.coords)


def grid_points(spec: GridSpec, max_elements: int = GRID_CAP) -> list[RealPoint]:
    i = spec.base_poset
    vals = spec.V
    plans = []
    total = 0
    for a in sorted(spec.D, key=i.idx):
        pars = sorted(i.parents(a))
        for k in range(len(pars) + 1):
            for supp in itertools.combinations(pars, k):
                if k and not i.has_ancestor(supp):
                    continue
                total += len(vals) ** k
                plans.append((a, supp))
        if total > max_elements:
            raise GridTooLarge(f"grid exceeds {max_elements} elements")
    out = []
    for a, supp in plans:
        for combo in itertools.product(vals, repeat=len(supp)):
            out.append(RealPoint(a, tuple(zip(supp, combo))))
    return out


@dataclass(frozen=True, eq=False)
class GridPoset:
    """A finite grid materialised as a poset whose ids encode its points."""

    spec: GridSpec
    poset: Poset
    labels: dict[str, RealPoint] = field(repr=False)
    ids: dict[RealPoint, str] = field(repr=False)

    def point(self, x: str) -> RealPoint:
        try:
            return self.labels[x]
        except KeyError:
            raise UnknownElement(f"{x!r} is not a grid element") from None

    def id_of(self, p: RealPoint) -> str:
        try:
            return self.ids[p]
        except KeyError:
            raise UnknownElement(f"{p} is not a grid point") from None

    def __contains__(self, p: object) -> bool:
        return p in self.ids

    def __len__(self) -> int:
        return len(self.poset)


def build_grid(spec: GridSpec, max_elements: int = GRID_CAP, crosscheck: bool | None = None) -> GridPoset:
    i = spec.base_poset
    pts = grid_points(spec, max_elements)
    n = len(pts)
    leq = np.zeros((n, n), dtype=bool)
    base_idx = [i.idx(p.base) for p in pts]
    for s in range(n):
        row = i.leq_matrix[base_idx[s]]
        for t in range(n):
            if row[base_idx[t]]:
                leq[s, t] = real_leq(i, pts[s], pts[t], crosscheck=crosscheck)
    ids = [p.encode() for p in pts]
    poset = Poset.from_leq_matrix(ids, leq)
    return GridPoset(spec, poset, dict(zip(ids, pts)), dict(zip(pts, ids)))


# -- coordinates on truncated lattices ---------------------------------------


def _parse_lattice_id(a: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in a.split(","))
    except ValueError:
        raise ValidationError(f"{a!r} is not a lattice element id") from None


def _lattice_id(t: Iterable[int]) -> str:
    return ",".join(str(v) for v in t)


def lattice_point(coords: Iterable) -> RealPoint:
    """The point of the realisation of [n]^r sitting at rational ``coords``."""
    xs = [to_fraction(c) for c in coords]
    if any(x < 0 for x in xs):
        raise ValueOutOfRange("lattice coordinates must be non-negative")
    a = [math.ceil(x) for x in xs]
    vals = {}
    for k, x in enumerate(xs):
        if x != a[k]:
            par = list(a)
            par[k] -= 1
            vals[_lattice_id(par)] = x - a[k]
    return RealPoint(_lattice_id(a), tuple(vals.items()))


def lattice_coords(p: RealPoint) -> tuple[Fraction, ...]:
    a = _parse_lattice_id(p.base)
    out = []
    for k, ak in enumerate(a):
        par = list(a)
        par[k] -= 1
        out.append(Fraction(ak) + (p.value(_lattice_id(par)) if ak > 0 else ZERO))
    return tuple(out)

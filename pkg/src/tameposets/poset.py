"""Finite posets: construction, order queries, predicates and dimensions."""

from __future__ import annotations

import enum
import itertools
from collections.abc import Callable, Iterable, Iterator, Mapping
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import (
    CycleDetected,
    DistributivityRequiresSemilattice,
    NotHasse,
    NotMonotone,
    NotSemilattice,
    SearchBudgetExceeded,
    UnknownElement,
    ValidationError,
)

DIM_BUDGET = 24
PAR_DIM_BUDGET = 20


class ElementClass(enum.Enum):
    DEPENDENT = "dependent"
    INDEPENDENT = "independent"
    INCONSISTENT = "inconsistent"


def _bits(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


def _iter_bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


class Poset:
    """A finite poset given by its elements and Hasse covers.

    ``covers`` holds pairs ``(x, y)`` with ``x`` a parent of ``y``. With
    ``reduce=True`` transitively implied pairs are dropped instead of rejected.
    Instances are immutable.
    """

    def __init__(self, elements: Iterable[str], covers: Iterable[tuple[str, str]] = (), *, reduce: bool = False):
        elements = tuple(elements)
        index: dict[str, int] = {}
        for i, e in enumerate(elements):
            if not isinstance(e, str):
                raise ValidationError(f"element identifiers must be strings, got {e!r}")
            if e in index:
                raise ValidationError(f"duplicate element {e!r}")
            index[e] = i
        n = len(elements)
        adj = np.zeros((n, n), dtype=bool)
        for pair in covers:
            x, y = pair
            for e in (x, y):
                if e not in index:
                    raise UnknownElement(f"unknown element {e!r} in cover {(x, y)}")
            if x == y:
                raise CycleDetected(f"self-loop at {x!r}")
            adj[index[x], index[y]] = True
        _check_acyclic(adj, elements)
        leq = _kernels.closure_kernel(adj) if n else np.zeros((0, 0), dtype=bool)
        hasse = _kernels.hasse_kernel(leq) if n else adj
        extra = adj & ~hasse
        if extra.any() and not reduce:
            i, j = map(int, np.argwhere(extra)[0])
            raise NotHasse(f"cover {(elements[i], elements[j])} is implied by transitivity")
        self._init(elements, index, leq, hasse)

    def _init(self, elements, index, leq, hasse) -> None:
        leq = np.ascontiguousarray(leq, dtype=bool)
        hasse = np.ascontiguousarray(hasse, dtype=bool)
        leq.setflags(write=False)
        hasse.setflags(write=False)
        self.elements: tuple[str, ...] = elements
        self.index: dict[str, int] = index
        self.leq_matrix: np.ndarray = leq
        self.cover_matrix: np.ndarray = hasse
        self.covers: frozenset[tuple[str, str]] = frozenset(
            (elements[i], elements[j]) for i, j in zip(*np.nonzero(hasse))
        )

    @classmethod
    def from_leq_matrix(cls, elements: Iterable[str], leq: np.ndarray) -> Poset:
        elements = tuple(elements)
        leq = np.array(leq, dtype=bool)
        n = len(elements)
        if leq.shape != (n, n):
            raise ValidationError("order matrix shape does not match elements")
        np.fill_diagonal(leq, True)
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            raise CycleDetected("relation is not antisymmetric")
        if n and not np.array_equal(_kernels.closure_kernel(leq), leq):
            raise ValidationError("relation is not transitive")
        index = {e: i for i, e in enumerate(elements)}
        if len(index) != n:
            raise ValidationError("duplicate element identifiers")
        obj = cls.__new__(cls)
        obj._init(elements, index, leq, _kernels.hasse_kernel(leq) if n else leq)
        return obj

    @classmethod
    def from_relation(cls, elements: Iterable[str], leq: Callable[[str, str], bool]) -> Poset:
        elements = tuple(elements)
        m = np.array([[bool(leq(x, y)) for y in elements] for x in elements], dtype=bool).reshape(len(elements), -1)
        return cls.from_leq_matrix(elements, m)

    # -- basics -------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self.index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return set(self.elements) == set(other.elements) and self.covers == other.covers

    def __hash__(self) -> int:
        return hash((frozenset(self.elements), self.covers))

    def __repr__(self) -> str:
        return f"Poset({len(self)} elements, {len(self.covers)} covers)"

    def idx(self, x: str) -> int:
        try:
            return self.index[x]
        except (KeyError, TypeError):
            raise UnknownElement(f"unknown element {x!r}") from None

    def _idxs(self, xs: Iterable[str]) -> list[int]:
        return [self.idx(x) for x in xs]

    def _ids(self, mask: np.ndarray) -> frozenset[str]:
        return frozenset(self.elements[i] for i in np.flatnonzero(mask))

    def leq(self, x: str, y: str) -> bool:
        return bool(self.leq_matrix[self.idx(x), self.idx(y)])

    def lt(self, x: str, y: str) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x: str, y: str) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    @cached_property
    def _parent_idx(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(i) for i in np.flatnonzero(self.cover_matrix[:, j])) for j in range(len(self)))

    @cached_property
    def _child_idx(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(j) for j in np.flatnonzero(self.cover_matrix[i])) for i in range(len(self)))

    def parents(self, a: str) -> frozenset[str]:
        return frozenset(self.elements[i] for i in self._parent_idx[self.idx(a)])

    def sorted_parents(self, a: str) -> tuple[str, ...]:
        return tuple(sorted(self.parents(a)))

    def children(self, a: str) -> frozenset[str]:
        return frozenset(self.elements[i] for i in self._child_idx[self.idx(a)])

    def down(self, a: str) -> frozenset[str]:
        """The down-set (I <= a)."""
        return self._ids(self.leq_matrix[:, self.idx(a)])

    def up(self, a: str) -> frozenset[str]:
        return self._ids(self.leq_matrix[self.idx(a)])

    def strict_down(self, a: str) -> frozenset[str]:
        return self.down(a) - {a}

    def _common_up(self, idx: list[int]) -> np.ndarray:
        if not idx:
            return np.ones(len(self), dtype=bool)
        return self.leq_matrix[idx].all(axis=0)

    def _common_down(self, idx: list[int]) -> np.ndarray:
        if not idx:
            return np.ones(len(self), dtype=bool)
        return self.leq_matrix[:, idx].all(axis=1)

    def descendents(self, s: Iterable[str]) -> frozenset[str]:
        return self._ids(self._common_up(self._idxs(s)))

    def ancestors(self, s: Iterable[str]) -> frozenset[str]:
        return self._ids(self._common_down(self._idxs(s)))

    def has_ancestor(self, s: Iterable[str]) -> bool:
        return bool(self._common_down(self._idxs(s)).any())

    def has_common_ancestor_idx(self, idx: list[int]) -> bool:
        return bool(self._common_down(idx).any())

    def minimal_elements(self, s: Iterable[str] | None = None) -> frozenset[str]:
        idx = range(len(self)) if s is None else self._idxs(s)
        mask = np.zeros(len(self), dtype=bool)
        mask[list(idx)] = True
        return self._ids(self._minimal_mask(mask))

    def maximal_elements(self, s: Iterable[str] | None = None) -> frozenset[str]:
        idx = range(len(self)) if s is None else self._idxs(s)
        mask = np.zeros(len(self), dtype=bool)
        mask[list(idx)] = True
        return self._ids(self._maximal_mask(mask))

    def _minimal_mask(self, mask: np.ndarray) -> np.ndarray:
        sub = self.leq_matrix[np.ix_(mask, mask)]
        out = np.zeros(len(self), dtype=bool)
        out[np.flatnonzero(mask)[sub.sum(axis=0) == 1]] = True
        return out

    def _maximal_mask(self, mask: np.ndarray) -> np.ndarray:
        sub = self.leq_matrix[np.ix_(mask, mask)]
        out = np.zeros(len(self), dtype=bool)
        out[np.flatnonzero(mask)[sub.sum(axis=1) == 1]] = True
        return out

    @cached_property
    def _up_count(self) -> np.ndarray:
        return self.leq_matrix.sum(axis=1)

    @cached_property
    def _down_count(self) -> np.ndarray:
        return self.leq_matrix.sum(axis=0)

    def sups(self, s: Iterable[str]) -> frozenset[str]:
        return self._ids(self._minimal_mask(self._common_up(self._idxs(s))))

    def infs(self, s: Iterable[str]) -> frozenset[str]:
        return self._ids(self._maximal_mask(self._common_down(self._idxs(s))))

    def _coproduct_idx(self, idx: list[int]) -> int:
        # the common up-set is up-closed, so its minimum is the element whose
        # own up-set has the same size
        d = self._common_up(idx)
        hit = np.flatnonzero(d & (self._up_count == d.sum()))
        return int(hit[0]) if hit.size else -1

    def _product_idx(self, idx: list[int]) -> int:
        d = self._common_down(idx)
        hit = np.flatnonzero(d & (self._down_count == d.sum()))
        return int(hit[0]) if hit.size else -1

    def coproduct(self, s: Iterable[str]) -> str | None:
        i = self._coproduct_idx(self._idxs(s))
        return None if i < 0 else self.elements[i]

    def product(self, s: Iterable[str]) -> str | None:
        i = self._product_idx(self._idxs(s))
        return None if i < 0 else self.elements[i]

    def join(self, x: str, y: str) -> str | None:
        return self.coproduct((x, y))

    def meet(self, x: str, y: str) -> str | None:
        return self.product((x, y))

    @cached_property
    def join_table(self) -> np.ndarray:
        """Index of the coproduct of each pair, -1 where none exists."""
        return self._pair_table(self.leq_matrix, self._up_count)

    @cached_property
    def meet_table(self) -> np.ndarray:
        return self._pair_table(self.leq_matrix.T, self._down_count)

    @staticmethod
    def _pair_table(rel: np.ndarray, counts: np.ndarray) -> np.ndarray:
        n = rel.shape[0]
        out = np.full((n, n), -1, dtype=np.int64)
        for i in range(n):
            d = rel[i][None, :] & rel
            cand = d & (counts[None, :] == d.sum(axis=1)[:, None])
            has = cand.any(axis=1)
            out[i, has] = cand[has].argmax(axis=1)
        out.setflags(write=False)
        return out

    @cached_property
    def topological_order(self) -> tuple[str, ...]:
        order = np.argsort(self._down_count, kind="stable")
        return tuple(self.elements[i] for i in order)

    @cached_property
    def parent_leq(self) -> np.ndarray:
        """``[a, x]`` is true when some parent of ``a`` lies below ``x``."""
        c = self.cover_matrix.T.astype(np.int32) @ self.leq_matrix.astype(np.int32)
        out = c > 0
        out.setflags(write=False)
        return out

    @cached_property
    def class_matrix(self) -> np.ndarray:
        """0 dependent, 1 independent, 2 inconsistent; indexed ``[a, x]``."""
        out = np.full((len(self),) * 2, 2, dtype=np.int8)
        out[self.parent_leq] = 1
        out[self.leq_matrix] = 0
        out.setflags(write=False)
        return out

    @cached_property
    def common_ancestor_matrix(self) -> np.ndarray:
        li = self.leq_matrix.astype(np.int32)
        out = (li.T @ li) > 0
        out.setflags(write=False)
        return out

    def subposet(self, elements: Iterable[str]) -> Poset:
        """Induced subposet, keeping the order of ``self.elements``."""
        keep = set(elements)
        idx = [i for i, e in enumerate(self.elements) if e in keep]
        if len(idx) != len(keep):
            missing = keep - set(self.elements)
            raise UnknownElement(f"unknown elements {sorted(missing)}")
        return Poset.from_leq_matrix([self.elements[i] for i in idx], self.leq_matrix[np.ix_(idx, idx)])

    def is_down_closed(self, d: Iterable[str]) -> bool:
        mask = np.zeros(len(self), dtype=bool)
        mask[self._idxs(d)] = True
        return not np.any(self.leq_matrix[:, mask].any(axis=1) & ~mask)

    def top(self) -> str | None:
        return self.product(())

    def bottom(self) -> str | None:
        return self.coproduct(())


def _check_acyclic(adj: np.ndarray, elements: tuple[str, ...]) -> None:
    indeg = adj.sum(axis=0)
    stack = list(np.flatnonzero(indeg == 0))
    seen = 0
    indeg = indeg.copy()
    while stack:
        i = stack.pop()
        seen += 1
        for j in np.flatnonzero(adj[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                stack.append(j)
    if seen != len(elements):
        stuck = [elements[i] for i in np.flatnonzero(indeg > 0)]
        raise CycleDetected(f"covers contain a cycle through {sorted(stuck)[:5]}")


def build_poset(elements: Iterable[str], covers: Iterable[tuple[str, str]], *, reduce: bool = False) -> Poset:
    return Poset(elements, covers, reduce=reduce)


# -- module-level queries ---------------------------------------------------


def parents(p: Poset, a: str) -> frozenset[str]:
    return p.parents(a)


def sups(p: Poset, s: Iterable[str]) -> frozenset[str]:
    return p.sups(s)


def infs(p: Poset, s: Iterable[str]) -> frozenset[str]:
    return p.infs(s)


def coproduct(p: Poset, s: Iterable[str]) -> str | None:
    return p.coproduct(s)


def product(p: Poset, s: Iterable[str]) -> str | None:
    return p.product(s)


def classify(p: Poset, a: str, x: str) -> ElementClass:
    c = int(p.class_matrix[p.idx(a), p.idx(x)])
    return (ElementClass.DEPENDENT, ElementClass.INDEPENDENT, ElementClass.INCONSISTENT)[c]


def consistency_witness(p: Poset) -> tuple[str, str, str] | None:
    """A triple ``(a, b, x)`` breaking consistency, or None."""
    cls = p.class_matrix
    indep = (cls == 1).astype(np.int32)
    bad = p.common_ancestor_matrix & (cls == 2)
    hits = ((p.leq_matrix.astype(np.int32) @ indep) > 0) & bad
    if not hits.any():
        return None
    a, x = map(int, np.argwhere(hits)[0])
    for b in np.flatnonzero(p.leq_matrix[a]):
        if cls[b, x] == 1:
            return p.elements[a], p.elements[int(b)], p.elements[x]
    raise AssertionError("unreachable")


def is_consistent(p: Poset) -> bool:
    return consistency_witness(p) is None


def is_upper_semilattice(p: Poset) -> bool:
    if len(p) == 0:
        return True
    return bool(np.all(p.join_table >= 0))


def is_lower_semilattice(p: Poset) -> bool:
    if len(p) == 0:
        return True
    return bool(np.all(p.meet_table >= 0))


def distributivity_witness(p: Poset) -> tuple[str, str, str] | None:
    if not is_upper_semilattice(p):
        raise DistributivityRequiresSemilattice("distributivity is only defined for upper semilattices")
    n = len(p)
    if n == 0:
        return None
    j, m = p.join_table, p.meet_table
    a, b, x = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    ma, mb = m[a, x], m[b, x]
    active = (ma >= 0) & (mb >= 0)
    lhs = m[j[a, b], x]
    rhs = j[np.maximum(ma, 0), np.maximum(mb, 0)]
    bad = active & ((lhs < 0) | (lhs != rhs))
    if not bad.any():
        return None
    i, k, l = map(int, np.argwhere(bad)[0])
    return p.elements[i], p.elements[k], p.elements[l]


def is_distributive(p: Poset) -> bool:
    return distributivity_witness(p) is None


def is_forest(p: Poset) -> bool:
    incomparable = ~(p.leq_matrix | p.leq_matrix.T)
    return not np.any(incomparable & p.common_ancestor_matrix)


def is_connected(p: Poset) -> bool:
    n = len(p)
    if n == 0:
        return False
    und = p.leq_matrix | p.leq_matrix.T
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = seen.copy()
    while frontier.any():
        nxt = und[frontier].any(axis=0) & ~seen
        seen |= nxt
        frontier = nxt
    return bool(seen.all())


def is_tree(p: Poset) -> bool:
    return is_connected(p) and is_forest(p)


def sublattice_generated(p: Poset, u: Iterable[str]) -> frozenset[str]:
    if not is_upper_semilattice(p):
        raise NotSemilattice("sublattice generation needs an upper semilattice")
    jt = p.join_table
    out = set(p._idxs(u))
    frontier = set(out)
    while frontier:
        new = {int(jt[i, k]) for i in frontier for k in out} - out
        out |= new
        frontier = new
    return frozenset(p.elements[i] for i in out)


# -- dimensions -------------------------------------------------------------


def dim(p: Poset, x: str, budget: int = DIM_BUDGET) -> int:
    """Largest U whose minimal sup is ``x`` with U irredundant and having a proper ancestor.

    Candidates with two or more members are antichains strictly below ``x``,
    so the search enumerates those antichains; sets without a common proper
    ancestor are pruned since every superset lacks one too.
    """
    xi = p.idx(x)
    below = [int(i) for i in np.flatnonzero(p.leq_matrix[:, xi]) if i != xi]
    if len(below) + 1 > budget:
        raise SearchBudgetExceeded(f"|P <= {x}| = {len(below) + 1} exceeds budget {budget}")
    if not below:
        return 0
    leq = p.leq_matrix
    down = {z: _bits(np.flatnonzero(leq[:, z])) for z in below}
    strict = {z: down[z] & ~(1 << z) for z in below}
    all_below = _bits(below)
    incomparable = {z: all_below & ~_bits(np.flatnonzero(leq[:, z] | leq[z])) for z in below}
    downs = list(down.values())

    def is_min_sup(u: int) -> bool:
        return not any(u & ~d == 0 for d in downs)

    def irredundant(u: int) -> bool:
        for v in _iter_bits(u):
            rest = u & ~(1 << v)
            if not any(rest & ~d == 0 for d in downs):
                return False
        return True

    best = 1
    order = sorted(below)

    def grow(u: int, size: int, anc: int, cands: int) -> None:
        nonlocal best
        if size >= 2 and size > best and is_min_sup(u) and irredundant(u):
            best = size
        if size + bin(cands).count("1") <= best:
            return
        for v in _iter_bits(cands):
            new_anc = anc & strict[v]
            if new_anc == 0:
                continue
            later = cands & ~((1 << (v + 1)) - 1)
            grow(u | (1 << v), size + 1, new_anc, later & incomparable[v])

    full = (1 << len(p)) - 1
    for v in order:
        if strict[v]:
            later = all_below & ~((1 << (v + 1)) - 1)
            grow(1 << v, 1, strict[v] & full, later & incomparable[v])
    return best


def par_dim(p: Poset, x: str, budget: int = PAR_DIM_BUDGET) -> int:
    """Largest set of parents of ``x`` sharing a common ancestor."""
    pars = list(p._parent_idx[p.idx(x)])
    if len(pars) > budget:
        raise SearchBudgetExceeded(f"|P({x})| = {len(pars)} exceeds budget {budget}")
    return _max_ancestral_subset(p, pars, [])


def _max_ancestral_subset(p: Poset, pool: list[int], required: list[int]) -> int:
    """Largest ``|S|`` with ``required <= S <= pool | required`` and S having an ancestor; -1 if none."""
    downs = {i: _bits(np.flatnonzero(p.leq_matrix[:, i])) for i in pool + required}
    base = (1 << len(p)) - 1
    for r in required:
        base &= downs[r]
    if base == 0:
        return -1
    rest = [i for i in pool if i not in required]
    for k in range(len(rest), -1, -1):
        for combo in itertools.combinations(rest, k):
            m = base
            for i in combo:
                m &= downs[i]
                if not m:
                    break
            if m:
                return k + len(required)
    return -1


# -- constructors -----------------------------------------------------------


def chain(n: int) -> Poset:
    """The totally ordered set {0 < 1 < ... < n}."""
    ids = [str(i) for i in range(n + 1)]
    return Poset(ids, zip(ids, ids[1:]))


def antichain(ids: Iterable[str]) -> Poset:
    return Poset(tuple(ids), ())


def subset_id(s: Iterable[str]) -> str:
    return "{" + ",".join(sorted(s)) + "}"


def discrete_cube(s: Iterable[str]) -> Poset:
    """All subsets of ``s`` ordered by inclusion."""
    s = sorted(set(s))
    subsets = [frozenset(c) for k in range(len(s) + 1) for c in itertools.combinations(s, k)]
    ids = [subset_id(u) for u in subsets]
    covers = [(subset_id(u), subset_id(u | {e})) for u in subsets for e in s if e not in u]
    return Poset(ids, covers)


def suspension(s: Iterable[str], bottom: str = "bottom", top: str = "top") -> Poset:
    """``s`` as an antichain with a global minimum and maximum added."""
    s = list(s)
    return Poset([bottom, *s, top], [(bottom, e) for e in s] + [(e, top) for e in s])


def adjoin_min(p: Poset, name: str = "-inf") -> Poset:
    if name in p:
        raise ValidationError(f"{name!r} already present")
    covers = set(p.covers) | {(name, m) for m in p.minimal_elements()}
    return Poset((name, *p.elements), covers)


def product_id(x: str, y: str) -> str:
    return f"{x},{y}"


def product_poset(p: Poset, q: Poset) -> Poset:
    """Cartesian product with the componentwise order; ids joined by commas."""
    ids = [product_id(x, y) for x in p.elements for y in q.elements]
    covers = [(product_id(x, y), product_id(x2, y)) for x, x2 in p.covers for y in q.elements]
    covers += [(product_id(x, y), product_id(x, y2)) for x in p.elements for y, y2 in q.covers]
    return Poset(ids, covers)


def lattice(n: int, r: int) -> Poset:
    """The truncated lattice [n]^r with ids like ``"1,0"``."""
    out = chain(n)
    for _ in range(r - 1):
        out = product_poset(out, chain(n))
    return out


def from_points(points: Mapping[str, tuple]) -> Poset:
    """Named points of R^k under the componentwise order."""
    return Poset.from_relation(points, lambda a, b: all(u <= v for u, v in zip(points[a], points[b])))


# -- maps ---------------------------------------------------------------


class MonotoneMap:
    """A function between the element sets of two posets.

    ``is_monotone`` is always computed; ``require_monotone`` turns a failure
    into ``NotMonotone`` (the functor case).
    """

    def __init__(self, source: Poset, target: Poset, mapping: Mapping[str, str], *, require_monotone: bool = True):
        mapping = dict(mapping)
        for x in source.elements:
            if x not in mapping:
                raise ValidationError(f"map undefined on {x!r}")
            target.idx(mapping[x])
        for x in mapping:
            source.idx(x)
        self.source = source
        self.target = target
        self.mapping = mapping
        img = np.array([target.idx(mapping[x]) for x in source.elements], dtype=np.int64)
        self._img = img
        sl = source.leq_matrix
        tl = target.leq_matrix
        self.is_monotone = bool(np.all(~sl | tl[np.ix_(img, img)])) if len(img) else True
        if require_monotone and not self.is_monotone:
            i, j = map(int, np.argwhere(sl & ~tl[np.ix_(img, img)])[0])
            raise NotMonotone(f"{source.elements[i]} <= {source.elements[j]} but images are not related")

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def below(self, a: str) -> frozenset[str]:
        """The set (f <= a) of source elements mapping below ``a``."""
        col = self.target.leq_matrix[:, self.target.idx(a)]
        return frozenset(x for x, i in zip(self.source.elements, self._img) if col[i])

    @property
    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.mapping)

    @property
    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.target.elements)

    @classmethod
    def identity(cls, p: Poset) -> MonotoneMap:
        return cls(p, p, {x: x for x in p.elements})

    @classmethod
    def inclusion(cls, sub: Poset, p: Poset) -> MonotoneMap:
        return cls(sub, p, {x: x for x in sub.elements})


def antichains(p: Poset, elements: Iterable[str] | None = None, min_size: int = 2, budget: int = 200_000) -> Iterator[frozenset[str]]:
    """All antichains of size ``>= min_size`` inside ``elements``."""
    idx = sorted(p._idxs(elements)) if elements is not None else list(range(len(p)))
    comp = p.leq_matrix | p.leq_matrix.T
    count = 0

    def grow(chosen: list[int], cands: list[int]) -> Iterator[frozenset[str]]:
        nonlocal count
        if len(chosen) >= min_size:
            count += 1
            if count > budget:
                raise SearchBudgetExceeded(f"more than {budget} antichains")
            yield frozenset(p.elements[i] for i in chosen)
        for k, v in enumerate(cands):
            yield from grow(chosen + [v], [w for w in cands[k + 1 :] if not comp[v, w]])

    yield from grow([], idx)


def homomorphism_witness(f: MonotoneMap, exhaustive: bool = True) -> tuple[str, ...] | None:
    """An antichain whose coproduct is not sent to a sup of its image, or None.

    Pairs alone do not settle the question when the target is not a
    semilattice, so by default every antichain is examined.
    """
    src, tgt = f.source, f.target
    if not is_upper_semilattice(src):
        raise NotSemilattice("homomorphisms are defined on upper semilattices")
    if not f.is_monotone:
        for x, y in src.covers:
            if not tgt.leq(f(x), f(y)):
                return (x, y)
    it = antichains(src) if exhaustive else (frozenset(c) for c in itertools.combinations(src.elements, 2) if not src.comparable(*c))
    for u in it:
        j = src.coproduct(u)
        if f(j) not in tgt.sups({f(x) for x in u}):
            return tuple(sorted(u))
    return None


def is_homomorphism(f: MonotoneMap, exhaustive: bool = True) -> bool:
    return homomorphism_witness(f, exhaustive) is None


def relabel(p: Poset, names: Mapping[str, str]) -> Poset:
    return Poset([names[x] for x in p.elements], [(names[x], names[y]) for x, y in p.covers])

"""Random and named test inputs.

Every generator takes a ``numpy.random.Generator`` so runs are reproducible.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import linalg as la
from .homalg import NatTransformation, VectFunctor, cokernel, free_functor
from .poset import MonotoneMap, Poset, from_points, subset_id


def random_poset(n: int, rng: np.random.Generator, density: float | None = None) -> Poset:
    """Transitive closure of a random DAG on ``n`` elements named p0..p{n-1}."""
    q = rng.uniform(0.15, 0.6) if density is None else density
    perm = rng.permutation(n)
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < q:
                adj[perm[i], perm[j]] = True
    ids = [f"p{k}" for k in range(n)]
    leq = adj | np.eye(n, dtype=bool)
    for k in range(n):  # Warshall, fine at this size
        leq |= leq[:, [k]] & leq[[k], :]
    return Poset.from_leq_matrix(ids, leq)


def _union_closure(sets: set[frozenset]) -> set[frozenset]:
    out = set(sets)
    while True:
        new = {a | b for a in out for b in out} - out
        if not new:
            return out
        out |= new


def random_union_family(rng: np.random.Generator, max_elements: int = 10, ground: int = 4) -> set[frozenset]:
    """A union-closed family of subsets of range(ground) with at most ``max_elements`` members."""
    while True:
        k = int(rng.integers(1, 5))
        gens = {frozenset(int(e) for e in np.flatnonzero(rng.random(ground) < 0.45)) for _ in range(k)}
        fam = _union_closure(gens)
        if len(fam) <= max_elements:
            return fam


def poset_of_family(fam: set[frozenset]) -> Poset:
    names = {s: subset_id(str(e) for e in s) for s in fam}
    return Poset.from_relation(sorted(names.values()), lambda x, y: _parse(x) <= _parse(y))


def _parse(sid: str) -> frozenset:
    body = sid[1:-1]
    return frozenset(body.split(",")) if body else frozenset()


def random_semilattice(rng: np.random.Generator, max_elements: int = 10, ground: int = 4) -> Poset:
    """Union-closed families under inclusion are exactly the finite upper semilattices up to isomorphism."""
    return poset_of_family(random_union_family(rng, max_elements, ground))


def random_homomorphism(
    rng: np.random.Generator, max_elements: int = 10, ground: int = 4, extra: int = 2
) -> MonotoneMap:
    """A union-preserving map between random union-closed families.

    Each ground point x goes to a random subset phi(x); a set A goes to the
    union of phi over A, which preserves every non-empty union. The target
    family is the closure of the image plus a few random sets.
    """
    while True:
        src = random_union_family(rng, max_elements, ground)
        phi = {e: frozenset(int(t) for t in np.flatnonzero(rng.random(ground) < 0.4)) for e in range(ground)}

        def f(a: frozenset) -> frozenset:
            return frozenset().union(*(phi[e] for e in a))

        image = {f(a) for a in src}
        noise = {frozenset(int(t) for t in np.flatnonzero(rng.random(ground) < 0.5)) for _ in range(extra)}
        tgt = _union_closure(image | noise)
        if len(tgt) > max_elements:
            continue
        sp, tp = poset_of_family(src), poset_of_family(tgt)
        name = lambda s: subset_id(str(e) for e in s)  # noqa: E731
        return MonotoneMap(sp, tp, {name(a): name(f(a)) for a in src})


def free_map(src_gens: list[str], tgt_gens: list[str], poset: Poset, coeffs: np.ndarray, p: int) -> NatTransformation:
    """The map of free functors with scalar ``coeffs[t, s]`` from generator s to generator t.

    Entries where the target generator is not below the source generator are ignored.
    """
    fs = free_functor(_count(src_gens), poset, p)
    ft = free_functor(_count(tgt_gens), poset, p)
    sg, tg = fs.free_generators, ft.free_generators
    leq = poset.leq_matrix
    comps = {}
    for x in poset.elements:
        xi = poset.idx(x)
        live_s = [k for k, g in enumerate(sg) if leq[poset.idx(g), xi]]
        live_t = [k for k, g in enumerate(tg) if leq[poset.idx(g), xi]]
        m = la.zeros(len(live_t), len(live_s))
        for r, t in enumerate(live_t):
            for c, s in enumerate(live_s):
                if leq[poset.idx(tg[t]), poset.idx(sg[s])]:
                    m[r, c] = coeffs[t, s] % p
        comps[x] = m
    return NatTransformation(fs, ft, comps)


def _count(gens: list[str]) -> dict[str, int]:
    out: dict[str, int] = {}
    for g in gens:
        out[g] = out.get(g, 0) + 1
    return out


def random_functor(poset: Poset, rng: np.random.Generator, p: int = 2, max_gens: int = 4, max_rels: int = 4) -> VectFunctor:
    """Cokernel of a random map between free functors; every value has dimension at most ``max_gens``."""
    els = list(poset.elements)
    g0 = sorted((str(x) for x in rng.choice(els, size=int(rng.integers(1, max_gens + 1)))), key=poset.idx)
    g1 = sorted((str(x) for x in rng.choice(els, size=int(rng.integers(0, max_rels + 1)))), key=poset.idx)
    tg = free_functor(_count(g0), poset, p).free_generators
    sg = free_functor(_count(g1), poset, p).free_generators
    coeffs = rng.integers(0, p, size=(len(tg), len(sg)))
    phi = free_map(list(sg), list(tg), poset, coeffs, p)
    return cokernel(phi)[0]


# -- named posets -------------------------------------------------------------


def lambda_poset() -> Poset:
    """Two minimal elements below a common top, with no product."""
    return Poset(["a", "b", "c"], [("a", "c"), ("b", "c")])


def figure_posets() -> dict[str, Poset]:
    """Three planar posets; I2 adds h to I1, I3 adds k to I2."""
    pts = {"a": (0, 0), "b": (3, 0), "c": (0, 2), "d": (3, 2), "h": (2, 0), "k": (1, 2)}
    return {
        "I1": from_points({x: pts[x] for x in "abcd"}),
        "I2": from_points({x: pts[x] for x in "abcdh"}),
        "I3": from_points({x: pts[x] for x in "abcdhk"}),
    }


def non_consistent_planar() -> Poset:
    return figure_posets()["I2"]


def non_consistent_spatial() -> Poset:
    """Nine points of R^3 whose realisation is not an upper semilattice."""
    return from_points(
        {
            "a^x": (1, 0, 0),
            "b^x": (0, 1, 0),
            "a": (3, 0, 0),
            "b": (0, 3, 0),
            "x^z": (1, 1, 0),
            "z": (2, 2, 0),
            "avb": (3, 3, 0),
            "x": (1, 1, 2),
            "c": (3, 3, 2),
        }
    )


def support_gap_poset() -> Poset:
    """Five points of R^3 where a realisation point has smaller dimension than its base."""
    return from_points(
        {"100": (1, 0, 0), "110": (1, 1, 0), "101": (1, 0, 1), "011": (0, 1, 1), "111": (1, 1, 1)}
    )


def two_bars() -> VectFunctor:
    """K on {0,1} x {0,1} minus the origin: generated at 01 and 10 with one relation at 11."""
    from .poset import lattice

    p = lattice(1, 2)
    dims = {"0,0": 0, "0,1": 1, "1,0": 1, "1,1": 1}
    maps = {
        ("0,0", "0,1"): la.zeros(1, 0),
        ("0,0", "1,0"): la.zeros(1, 0),
        ("0,1", "1,1"): [[1]],
        ("1,0", "1,1"): [[1]],
    }
    return VectFunctor(p, dims, maps, 2)


def all_subsets(xs, min_size: int = 0):
    xs = list(xs)
    for k in range(min_size, len(xs) + 1):
        yield from itertools.combinations(xs, k)

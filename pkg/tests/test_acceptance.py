"""Acceptance criteria 1-10, one test function each.

Counts of random instances are the minimums the criteria ask for; seeds are fixed.
"""

import itertools
import json
import time
from fractions import Fraction

import numpy as np
import pytest

from tameposets import generators as gen
from tameposets import homalg as h
from tameposets import linalg as la
from tameposets.errors import PreconditionFailed
from tameposets.poset import (
    MonotoneMap,
    chain,
    dim,
    discrete_cube,
    is_consistent,
    is_distributive,
    is_upper_semilattice,
    lattice,
    par_dim,
    product_id,
    product_poset,
    suspension,
)
from tameposets.realisation import (
    GridSpec,
    RealPoint,
    build_grid,
    lattice_coords,
    lattice_point,
    real_dim,
    real_join,
    real_leq_conditions,
    real_leq_translation,
)
from tameposets.transfer import (
    NEG_INF,
    TameFunctor,
    adjunction_check,
    check_transfer_props,
    grid_transfer,
    grid_transfer_bruteforce,
    is_isomorphism,
    kan_comparison,
    kan_extend_general,
    kan_extend_hom,
    tame_betti,
    transfer,
    refined_restriction,
)

pytestmark = pytest.mark.acceptance

F = Fraction
HALF = F(-1, 2)


def _named_families():
    out = {f"chain{n}": chain(n) for n in (0, 1, 3, 5)}
    out.update({f"cube{k}": discrete_cube("abcd"[:k]) for k in range(5)})
    out.update({f"susp{k}": suspension([f"s{i}" for i in range(k)]) for k in range(1, 6)})
    out["chain2xcube2"] = product_poset(chain(2), discrete_cube("ab"))
    out["lattice2x2"] = lattice(2, 2)
    return out


def _dim_pairs(p):
    return {x: (dim(p, x), par_dim(p, x)) for x in p.elements}


# 1 -------------------------------------------------------------------------


def test_criterion_01_dimension_laws():
    rng = np.random.default_rng(1)
    posets = [gen.random_poset(int(rng.integers(1, 13)), rng) for _ in range(200)]
    posets += list(_named_families().values())
    for p in posets:
        for x, (d, pd) in _dim_pairs(p).items():
            assert d <= pd, (p, x)
            assert (d == 0) == (pd == 0) and (d == 1) == (pd == 1), (p, x, d, pd)
            if not p.parents(x):
                assert d == pd == 0

    # additivity over products
    for _ in range(30):
        a = gen.random_poset(int(rng.integers(1, 5)), rng)
        b = gen.random_poset(int(rng.integers(1, 5)), rng)
        ab = product_poset(a, b)
        da, db = _dim_pairs(a), _dim_pairs(b)
        for x in a.elements:
            for y in b.elements:
                z = product_id(x, y)
                assert dim(ab, z) == da[x][0] + db[y][0]
                assert par_dim(ab, z) == da[x][1] + db[y][1]

    # distributive semilattices
    seen = 0
    for _ in range(150):
        p = gen.random_semilattice(rng, 10)
        if is_distributive(p):
            seen += 1
            assert all(d == pd for d, pd in _dim_pairs(p).values())
    for p in (discrete_cube("abcd"), lattice(3, 2), chain(4)):
        assert is_distributive(p)
        assert all(d == pd for d, pd in _dim_pairs(p).values())
    assert seen >= 20

    for k in (3, 4, 5):
        s = suspension([f"s{i}" for i in range(k)])
        assert dim(s, "top") == 2 and par_dim(s, "top") == k


# 2 -------------------------------------------------------------------------


def _order_grids():
    grids = []
    for n in (1, 2, 3):
        for r in (1, 2):
            i = lattice(n, r)
            top = ",".join([str(n)] * r)
            grids.append(("lattice", build_grid(GridSpec.below(i, top, (F(-2, 3), F(-1, 3))))))
    for name, i in gen.figure_posets().items():
        grids.append((name, build_grid(GridSpec(i, frozenset(i.elements), (HALF, F(-1, 4))))))
    return grids


def test_criterion_02_realisation_order_consistency():
    for kind, g in _order_grids():
        i = g.spec.base_poset
        pts = list(g.labels.values())
        for p in pts:
            for q in pts:
                a = real_leq_conditions(i, p, q)
                assert a == real_leq_translation(i, p, q), (kind, p, q)
                if kind == "lattice":
                    cw = all(u <= v for u, v in zip(lattice_coords(p), lattice_coords(q)))
                    assert a == cw, (p, q)
        if kind == "lattice":
            for p in pts:
                assert lattice_point(lattice_coords(p)) == p


# 3 -------------------------------------------------------------------------


def test_criterion_03_grid_dimension_theorem():
    cases = [lattice(2, 2), suspension("xyz"), gen.support_gap_poset(), *gen.figure_posets().values()]
    checked = 0
    for i in cases:
        spec = GridSpec(i, frozenset(i.elements), (HALF, F(-1, 4)))
        g = build_grid(spec)
        for x, pt in g.labels.items():
            if not spec.has_epsilon_below(pt):
                continue
            want = real_dim(i, pt)
            assert dim(g.poset, x, budget=64) == want, (x, want)
            assert par_dim(g.poset, x) == want
            checked += 1
    assert checked > 50


# 4 -------------------------------------------------------------------------


def _consistent_semilattices(rng):
    out = [lattice(2, 2), suspension("xyz"), gen.lambda_poset(), gen.figure_posets()["I1"], discrete_cube("abc")]
    while len(out) < 12:
        p = gen.random_semilattice(rng, 8)
        if is_consistent(p):
            out.append(p)
    return out


def _down_closed(i, rng):
    m = i.maximal_elements()
    keep = [x for x in m if rng.random() < 0.6] or [next(iter(m))]
    return frozenset().union(*(i.down(x) for x in keep))


def test_criterion_04_semilattice_structure():
    rng = np.random.default_rng(4)
    for i in _consistent_semilattices(rng):
        for d in (frozenset(i.elements), _down_closed(i, rng)):
            g = build_grid(GridSpec(i, d, (HALF,)))
            assert is_upper_semilattice(g.poset)
            labels = g.labels
            for x, y in itertools.combinations(g.poset.elements, 2):
                j = real_join(i, labels[x], labels[y])
                assert j is not None and g.id_of(j) == g.poset.join(x, y)
            if is_distributive(i):
                assert is_distributive(g.poset)

    spatial = gen.non_consistent_spatial()
    assert is_upper_semilattice(spatial) and not is_consistent(spatial)
    g = build_grid(GridSpec(spatial, frozenset(spatial.elements), (HALF, F(-1, 4))))
    pf = g.id_of(RealPoint("a", (("a^x", F(-1, 4)),)))
    pg = g.id_of(RealPoint("b", (("b^x", HALF),)))
    sups = g.poset.sups([pf, pg])
    assert len(sups) == 2
    m, c = sorted(sups)
    assert g.labels[m].base == "avb" and g.labels[m].value("z") == F(-1, 4)
    assert g.labels[c].base == "c" and g.labels[c].value("x") == F(-1, 4)
    assert not g.poset.comparable(m, c)


# 5 -------------------------------------------------------------------------


def _random_point(i, rng, denominators=(2, 3, 4, 5, 10)):
    a = str(rng.choice(i.elements))
    pars = sorted(i.parents(a))
    while True:
        supp = [x for x in pars if rng.random() < 0.6]
        if not supp or i.has_ancestor(supp):
            break
    coords = []
    for x in supp:
        den = int(rng.choice(denominators))
        coords.append((x, F(-int(rng.integers(1, den)), den)))
    return RealPoint(a, tuple(coords))


def test_criterion_05_transfer_suite():
    rng = np.random.default_rng(5)
    for _ in range(100):
        f = gen.random_homomorphism(rng, 10)
        rep = check_transfer_props(f)
        assert rep.ok, rep.failures

    grids = [
        build_grid(GridSpec.below(lattice(2, 2), "1,1", (HALF,))),
        build_grid(GridSpec.below(lattice(2, 2), "2,1", (F(-3, 4), F(-1, 4)))),
        build_grid(GridSpec.below(gen.lambda_poset(), "a", (HALF,))),
        build_grid(GridSpec.below(suspension("xyz"), "top", (F(-1, 3),))),
        build_grid(GridSpec.below(discrete_cube("abc"), "{a,b}", (HALF, F(-1, 5)))),
    ]
    neg = 0
    for g in grids:
        i = g.spec.base_poset
        for _ in range(500):
            q = _random_point(i, rng)
            r = grid_transfer(g, q)
            assert r == grid_transfer_bruteforce(g, q), q
            neg += r is NEG_INF
    assert neg > 0

    g = grids[0]
    r = grid_transfer(g, lattice_point(["7/10", "3/10"]))
    assert lattice_coords(g.point(r)) == (F(1, 2), F(0))
    assert grid_transfer(grids[2], RealPoint("b", ())) is NEG_INF


# 6 -------------------------------------------------------------------------


def test_criterion_06_kan_and_adjunction():
    rng = np.random.default_rng(6)
    for _ in range(100):
        f = gen.random_homomorphism(rng, 8)
        g = gen.random_functor(f.source, rng, p=2, max_gens=3, max_rels=3)
        hh = gen.random_functor(f.target, rng, p=2, max_gens=3, max_rels=3)

        ext = kan_extend_hom(g, f)
        general = kan_extend_general(g, f).functor
        assert ext.dims == general.dims
        assert is_isomorphism(kan_comparison(g, f))

        rep = adjunction_check(f, g, hh)
        assert rep.ok, rep

        # kernels commute with the extension
        g2 = gen.random_functor(f.source, rng, p=2, max_gens=3, max_rels=2)
        basis = h.nat_space_basis(g, g2)
        if not basis:
            continue
        coeffs = rng.integers(0, 2, size=len(basis))
        comps = {x: sum(int(c) * b[x] for c, b in zip(coeffs, basis)) % 2 for x in f.source.elements}
        phi = h.NatTransformation(g, g2, comps)
        ker_then_ext = kan_extend_hom(h.kernel(phi)[0], f)
        e1, e2 = kan_extend_hom(g, f), kan_extend_hom(g2, f)
        t = transfer(f)
        ext_comps = {
            a: (phi[t(a)] if t(a) is not NEG_INF else np.zeros((0, 0), dtype=np.int64)) for a in f.target.elements
        }
        ext_phi = h.NatTransformation(e1, e2, ext_comps)
        ext_then_ker = h.kernel(ext_phi)[0]
        assert ker_then_ext.dims == ext_then_ker.dims


# 7 -------------------------------------------------------------------------


def test_criterion_07_betti_cross_check():
    rng = np.random.default_rng(7)
    for k in range(200):
        pos = gen.random_poset(int(rng.integers(1, 11)), rng)
        p = 2 if k % 2 == 0 else 5
        g = gen.random_functor(pos, rng, p=p)
        res = h.minimal_resolution(g, 2)
        for a in pos.elements:
            cx = h.koszul_complex(g, a)
            for i in range(3):
                assert cx.homology(i) == res.betti(i).get(a, 0), (k, a, i)

    for k in range(40):
        pos = gen.random_semilattice(rng, 10)
        g = gen.random_functor(pos, rng, p=2 if k % 2 else 5)
        top = max(par_dim(pos, a) for a in pos.elements) + 1
        res = h.minimal_resolution(g, top)
        for a in pos.elements:
            pd = par_dim(pos, a)
            cx = h.koszul_complex(g, a)
            for i in range(top + 1):
                want = res.betti(i).get(a, 0)
                if i <= pd:
                    assert h.betti_koszul(g, a, i, cx) == want
                else:
                    assert want == 0

        a = str(rng.choice(pos.elements))
        order = list(pos.sorted_parents(a))
        rng.shuffle(order)
        base = h.koszul_complex(g, a).homologies()
        assert h.koszul_complex(g, a, order=order).homologies() == base

    for _ in range(20):
        pos = gen.random_poset(int(rng.integers(1, 9)), rng)
        beta = {str(x): int(rng.integers(1, 3)) for x in rng.choice(pos.elements, size=2)}
        free = h.free_functor(beta, pos)
        for a in pos.elements:
            hom = h.koszul_complex(free, a).homologies()
            assert all(v == 0 for v in hom[1:])
            assert hom[0] == beta.get(a, 0)


# 8 -------------------------------------------------------------------------


def _tame_cases(rng):
    specs = [
        GridSpec.below(lattice(2, 2), "2,2", (HALF,)),
        GridSpec.below(gen.lambda_poset(), "c", (HALF,)),
        GridSpec.below(chain(2), "2", (F(-1, 3),)),
        GridSpec.below(suspension("xy"), "top", (HALF,)),
        GridSpec.below(suspension("xyz"), "top", (HALF,)),
    ]
    for spec in specs:
        grid = build_grid(spec)
        for _ in range(2):
            yield TameFunctor(grid, gen.random_functor(grid.poset, rng, p=2, max_gens=3, max_rels=4))


def test_criterion_08_tame_betti():
    rng = np.random.default_rng(8)
    for t in _tame_cases(rng):
        res = h.minimal_resolution(t.values, 2)
        for i in range(3):
            assert tame_betti(t, i) == res.betti(i)
        rgrid, rvals = refined_restriction(t)
        rres = h.minimal_resolution(rvals, 4)
        back = {rgrid.id_of(pt): x for x, pt in t.grid.labels.items()}
        for i in (3, 4):
            want = {back[y]: n for y, n in rres.betti(i).items() if y in back}
            assert tame_betti(t, i) == want


# 9 -------------------------------------------------------------------------


def test_criterion_09_pipeline(data_dir):
    from tameposets.pipeline import pipeline_run
    from tameposets.serialize import dumps, load

    two = pipeline_run(load(data_dir / "two_point.json"))
    assert two.extension.values["1[0=-1/2]"] == {"p"}
    assert two.extension.values["0"] == {"p"} and two.extension.values["1"] == {"p", "q"}

    cfg = load(data_dir / "two_cluster.json")
    r = pipeline_run(cfg)
    assert {x: set(v) for x, v in r.extension.values.items()} == {
        "0": {"a"},
        "1[0=-1/2]": {"a"},
        "1": {"a", "b"},
        "2[1=-1/2]": {"a", "b"},
        "2": {"a", "b", "c"},
    }
    assert r.functor.dims == {"0": 1, "1[0=-1/2]": 1, "1": 2, "2[1=-1/2]": 2, "2": 1}
    assert r.betti == {0: {"0": 1, "1": 1}, 1: {"2": 1}, 2: {}}
    for s in (two, r):
        for x, y in s.grid.poset.covers:
            assert s.extension.values[x] <= s.extension.values[y]
            assert s.extension.values[x]
    assert dumps(pipeline_run(cfg).to_json()) == dumps(r.to_json())
    assert json.loads(dumps(r.to_json()))["betti"]["1"] == {"2": 1}


# 10 ------------------------------------------------------------------------


def test_criterion_10_cofinality():
    rng = np.random.default_rng(10)
    posets = [discrete_cube("abcd"), lattice(2, 2), suspension("xyz")]
    posets += [gen.random_semilattice(rng, 10) for _ in range(15)]
    for pos in posets:
        g = gen.random_functor(pos, rng, p=5)
        for a in pos.elements:
            full = h.colimit_below(g, a)
            try:
                red = h.colimit_below(g, a, use_cofinal_reduction=True)
            except PreconditionFailed:
                continue
            assert red.dim == full.dim
            idx = sorted(h.cofinal_index(pos, a), key=pos.idx)
            m = h.induced_map(red, idx, full.cocone(idx), g.p)
            assert m.shape == (full.dim, red.dim)
            assert la.rank(m, g.p) == full.dim

    cube = discrete_cube("abcd")
    g = gen.random_functor(cube, rng, p=2)
    top = cube.top()
    timings = {}
    for flag in (False, True):
        t0 = time.perf_counter()
        for _ in range(20):
            h.colimit_below(g, top, use_cofinal_reduction=flag, shortcut=False)
        timings[flag] = time.perf_counter() - t0
    print(f"cofinal colimit timing over 2^4: full {timings[False]:.4f}s, reduced {timings[True]:.4f}s")

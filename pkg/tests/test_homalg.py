import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tameposets import generators as gen
from tameposets import homalg as h
from tameposets import linalg as la
from tameposets.errors import KoszulValidityUnknown, NotExact, NotFunctorial
from tameposets.poset import Poset, chain, discrete_cube, lattice, par_dim, suspension


def test_validate_functor_examples():
    h.constant_functor(lattice(2, 2), 2, 3)
    sq = lattice(1, 2)
    maps = {("0,0", "0,1"): [[1]], ("0,0", "1,0"): [[1]], ("0,1", "1,1"): [[1]], ("1,0", "1,1"): [[2]]}
    with pytest.raises(NotFunctorial):
        h.VectFunctor(sq, {x: 1 for x in sq.elements}, maps, 3)
    h.validate_functor(h.free_functor({"0,0": 2, "1,0": 1}, sq, 3))


def test_colimit_examples():
    assert h.colimit(h.constant_functor(lattice(2, 2))).dim == 1
    span = Poset(["l", "m", "r"], [("m", "l"), ("m", "r")])
    assert h.colimit(h.constant_functor(span), shortcut=False).dim == 1
    assert h.colimit(h.zero_functor(span)).dim == 0
    two = Poset(["x", "y"])
    assert h.colimit(h.constant_functor(two, 2)).dim == 4


def test_colimit_shortcut_agrees():
    rng = np.random.default_rng(3)
    pos = lattice(2, 2)
    g = gen.random_functor(pos, rng, p=5)
    for a in pos.elements:
        below = sorted(pos.strict_down(a), key=pos.idx)
        assert h.colimit(g, below).dim == h.colimit(g, below, shortcut=False).dim
    assert h.colimit(g).dim == g.dims["2,2"]


def test_free_functor_examples():
    pos = lattice(2, 2)
    f = h.free_functor({"1,0": 1}, pos)
    assert f.dims == {x: int(pos.leq("1,0", x)) for x in pos.elements}
    assert h.free_functor({}, pos).is_zero
    assert h.betti_of_free(h.free_functor({"1,0": 2, "0,2": 1}, pos)) == {"1,0": 2, "0,2": 1}


def test_radical_examples():
    pos = lattice(2, 2)
    beta = {"0,1": 1, "2,0": 2}
    assert h.radical_quotient(h.free_functor(beta, pos)) == beta
    assert h.radical_quotient(h.constant_functor(chain(1))) == {"0": 1}
    assert h.radical_quotient(h.zero_functor(pos)) == {}


def test_minimal_cover_examples():
    pos = lattice(1, 2)
    free = h.free_functor({"0,1": 1, "1,1": 1}, pos)
    cover, pi = h.minimal_cover(free)
    assert h.betti_of_free(cover) == {"0,1": 1, "1,1": 1}
    assert all(la.rank(pi[x], 2) == free.dims[x] == cover.dims[x] for x in pos.elements)
    cover, _ = h.minimal_cover(gen.two_bars())
    assert h.betti_of_free(cover) == {"0,1": 1, "1,0": 1}
    simple = h.VectFunctor(pos, {"0,0": 0, "0,1": 1, "1,0": 0, "1,1": 0}, {("0,0", "0,1"): la.zeros(1, 0), ("0,1", "1,1"): la.zeros(0, 1)}, 2)
    cover, _ = h.minimal_cover(simple)
    assert h.betti_of_free(cover) == {"0,1": 1}


def test_resolution_examples():
    pos = lattice(2, 2)
    beta = {"1,1": 1, "0,2": 2}
    res = h.minimal_resolution(h.free_functor(beta, pos))
    assert res.betti(0) == beta and res.betti(1) == {} and res.complete
    tb = h.minimal_resolution(gen.two_bars())
    assert tb.betti(1) == {"1,1": 1} and tb.betti(2) == {}
    assert h.minimal_resolution(h.zero_functor(pos)).betti(0) == {}


def test_koszul_examples():
    tb = gen.two_bars()
    cx = h.koszul_complex(tb, "1,1")
    assert cx.dims[:3] == [1, 2, 0] and cx.homologies()[:3] == [0, 1, 0]
    assert h.betti_koszul(tb, "1,1", 1) == 1 == h.betti_resolution(tb, 1)["1,1"]
    cube = discrete_cube("abc")
    g = gen.random_functor(cube, np.random.default_rng(4), p=3)
    top = "{a,b,c}"
    cx = h.koszul_complex(g, top)
    cx.check_square_zero()
    assert len(cx.dims) <= par_dim(cube, top) + 1 or all(d == 0 for d in cx.dims[par_dim(cube, top) + 1 :])
    rad = h.radical_quotient(g)
    for a in cube.elements:
        assert h.betti_koszul(g, a, 0) == rad.get(a, 0)


def test_koszul_uncertified_raises():
    # four incomparable parents without pairwise products
    pos = Poset(
        ["u", "v", "p1", "p2", "p3", "top"],
        [("u", "p1"), ("u", "p2"), ("u", "p3"), ("v", "p1"), ("v", "p2"), ("v", "p3"), ("p1", "top"), ("p2", "top"), ("p3", "top")],
    )
    assert not h.has_parent_products(pos, "top")
    g = h.constant_functor(pos)
    with pytest.raises(KoszulValidityUnknown):
        h.betti_koszul(g, "top", 3)
    assert h.betti_koszul(g, "top", 1) == h.betti_resolution(g, 1).get("top", 0)


def test_exactness_split_and_errors():
    rng = np.random.default_rng(5)
    pos = suspension("xyz")
    f = gen.random_functor(pos, rng, p=5)
    k = gen.random_functor(pos, rng, p=5)
    s = h.direct_sum(f, k)
    iota = h.NatTransformation(f, s, {x: np.vstack([la.identity(f.dims[x]), la.zeros(k.dims[x], f.dims[x])]) for x in pos.elements})
    pi = h.NatTransformation(s, k, {x: np.hstack([la.zeros(k.dims[x], f.dims[x]), la.identity(k.dims[x])]) for x in pos.elements})
    for a in pos.elements:
        rep = h.exactness_report(iota, pi, a)
        assert all(rep.additive) and rep.euler_additive
    with pytest.raises(NotExact):
        h.exactness_report(iota, h.identity_nat(s), "top")


@st.composite
def functors_on_semilattices(draw):
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    pos = gen.random_semilattice(rng, 9)
    return pos, gen.random_functor(pos, rng, p=draw(st.sampled_from([2, 3])))


@given(functors_on_semilattices(), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_exactness_random_subquotient(data, seed):
    pos, g = data
    rng = np.random.default_rng(seed)
    src = h.free_functor({str(rng.choice(pos.elements)): 1}, pos, g.p)
    basis = h.nat_space_basis(src, g)
    coeffs = rng.integers(0, g.p, len(basis))
    comps = {x: la.zeros(g.dims[x], src.dims[x]) for x in pos.elements}
    for c, b in zip(coeffs, basis):
        comps = {x: (comps[x] + int(c) * b[x]) % g.p for x in pos.elements}
    phi = h.NatTransformation(src, g, comps)
    im, iota = h.image(phi)
    _, pi = h.cokernel(iota)
    for a in pos.elements:
        rep = h.exactness_report(iota, pi, a)
        assert all(rep.additive) and rep.euler_additive


@given(functors_on_semilattices())
@settings(max_examples=40, deadline=None)
def test_koszul_vanishes_above_par_dim(data):
    pos, g = data
    for a in pos.elements:
        dims = h.koszul_complex(g, a).dims
        assert all(d == 0 for d in dims[par_dim(pos, a) + 1 :])


@given(functors_on_semilattices())
@settings(max_examples=30, deadline=None)
def test_resolution_is_exact_and_minimal(data):
    _, g = data
    res = h.minimal_resolution(g)
    res.check_exact()
    # minimality: no differential hits a generator of the previous term
    for d in res.diffs:
        rad = h.radical(d.target)
        for a in g.poset.elements:
            span = np.hstack([rad[a], d[a]])
            assert la.rank(span, g.p) == la.rank(rad[a], g.p)
    assert res.betti(0) == h.radical_quotient(g)


def test_betti0_three_routes():
    rng = np.random.default_rng(9)
    pos = discrete_cube("abc")
    g = gen.random_functor(pos, rng, p=5)
    b0 = h.betti_resolution(g, 0)
    for a in pos.elements:
        for flag in (False, True):
            assert h.betti0_via_colimit(g, a, use_cofinal_reduction=flag) == b0.get(a, 0)

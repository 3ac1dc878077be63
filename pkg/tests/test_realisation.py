from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tameposets import generators as gen
from tameposets.errors import NotASup, NotRelated, SupportNoAncestor, ValueOutOfRange, ValidationError
from tameposets.poset import chain, discrete_cube, from_points, is_consistent, lattice
from tameposets.realisation import (
    GridSpec,
    RealPoint,
    build_grid,
    format_fraction,
    lattice_coords,
    lattice_point,
    point,
    real_dim,
    real_leq,
    real_leq_conditions,
    real_leq_translation,
    real_sup_over,
    to_fraction,
    translate,
    validate_point,
)

F = Fraction


def ex_chain():
    return from_points({"x": (0, 0), "a": (2, 0), "b": (3, 0), "y": (0, 2), "c": (3, 2)})


def test_validate_point():
    lam = gen.lambda_poset()
    validate_point(lam, point("c"))
    with pytest.raises(ValueOutOfRange):
        validate_point(lam, point("c", {"a": -1}))
    with pytest.raises(SupportNoAncestor):
        validate_point(lam, point("c", {"a": "-3/10", "b": "-3/10"}))
    with pytest.raises(ValidationError):
        to_fraction(0.5)


def test_translation_examples():
    i = ex_chain()
    assert translate(i, {"x": F(-1, 2)}, "a", "a") == {"x": F(-1, 2)}
    tab = translate(i, {"x": F(-1, 2)}, "a", "b")
    assert tab == {"a": -1}
    assert translate(i, tab, "b", "c") == {"y": 0, "b": -1}
    assert translate(i, {"x": F(-1, 2)}, "a", "c") == {"y": F(-1, 2), "b": -1}
    with pytest.raises(NotRelated):
        translate(i, {}, "b", "a")


def test_order_examples():
    i = lattice(3, 2)
    p, q = lattice_point(["7/10", "7/10"]), lattice_point([1, 1])
    assert real_leq(i, p, q, crosscheck=True)
    assert not real_leq(i, q, p, crosscheck=True)
    assert real_leq(i, p, p)


def test_spatial_sups_incomparable():
    i = gen.non_consistent_spatial()
    f = point("a", {"a^x": F(-1, 4)})
    g = point("b", {"b^x": F(-1, 2)})
    m = real_sup_over(i, [f, g], "avb")
    assert m == point("avb", {"z": F(-1, 4)})
    h = point("c", {"x": F(-1, 4)})
    assert real_leq(i, f, h) and real_leq(i, g, h)
    assert not real_leq(i, m, h, crosscheck=True) and not real_leq(i, h, m, crosscheck=True)


def test_sup_examples():
    i = lattice(3, 2)
    s = [lattice_point(["7/10", 0]), lattice_point([0, "1/2"])]
    assert lattice_coords(real_sup_over(i, s, "1,1")) == (F(7, 10), F(1, 2))
    f = lattice_point(["1/2", 0])
    assert real_sup_over(i, [f], f.base) == f
    with pytest.raises(NotASup):
        real_sup_over(i, s, "2,2")


def test_real_dim_examples():
    assert real_dim(chain(2), point("0")) == 0
    gap = gen.support_gap_poset()
    assert real_dim(gap, point("111", {"011": F(-1, 2)})) == 1
    from tameposets.poset import par_dim

    assert par_dim(gap, "111") == 2
    cube = discrete_cube("abc")
    full = point("{a,b,c}", {x: F(-1, 2) for x in cube.parents("{a,b,c}")})
    assert real_dim(cube, full) == 3


def test_grid_examples():
    i = chain(3)
    g0 = build_grid(GridSpec.below(i, "2"))
    assert len(g0) == 3 and g0.poset.covers == {("0", "1"), ("1", "2")}
    g = build_grid(GridSpec(chain(1), frozenset({"0", "1"}), (F(-1, 2),)))
    assert sorted(g.poset.elements) == ["0", "1", "1[0=-1/2]"]
    assert g.poset.leq("0", "1[0=-1/2]") and g.poset.leq("1[0=-1/2]", "1")
    half = build_grid(GridSpec.below(lattice(3, 2), "2,2", (F(-1, 2),)))
    coords = {lattice_coords(p) for p in half.labels.values()}
    steps = [F(k, 2) for k in range(5)]
    assert coords == {(u, v) for u in steps for v in steps}


def test_fraction_format():
    assert format_fraction(F(-1, 2)) == "-1/2"
    assert point("1", {"0": "-1/2"}).encode() == "1[0=-1/2]"


# -- properties -------------------------------------------------------------


@st.composite
def semilattice_points(draw):
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    i = gen.random_semilattice(rng, 9)
    pts = []
    for _ in range(3):
        a = str(rng.choice(i.elements))
        pars = sorted(i.parents(a))
        supp = [x for x in pars if rng.random() < 0.5]
        if supp and not i.has_ancestor(supp):
            supp = supp[:1]
        pts.append(RealPoint(a, tuple((x, F(-int(rng.integers(1, 4)), 4)) for x in supp)))
    return i, pts


@given(semilattice_points())
@settings(max_examples=120, deadline=None)
def test_order_forms_agree(data):
    i, pts = data
    for p in pts:
        for q in pts:
            assert real_leq_conditions(i, p, q) == real_leq_translation(i, p, q)


@given(semilattice_points())
@settings(max_examples=120, deadline=None)
def test_translation_is_lax_and_strict_when_consistent(data):
    i, (p, _, _) = data
    a = p.base
    ups = sorted(i.up(a), key=i.idx)
    for b in ups:
        for c in ups:
            if not i.leq(b, c):
                continue
            direct = translate(i, p, a, c)
            via = translate(i, translate(i, p, a, b), b, c)
            assert all(direct[x] <= via[x] for x in direct)
            if is_consistent(i):
                assert direct == via


@given(st.lists(st.fractions(min_value=0, max_value=3, max_denominator=6), min_size=2, max_size=2))
@settings(max_examples=100, deadline=None)
def test_lattice_coordinates_roundtrip(xs):
    p = lattice_point(xs)
    validate_point(lattice(3, 2), p)
    assert lattice_coords(p) == tuple(xs)

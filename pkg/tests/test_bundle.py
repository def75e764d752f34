import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from dirichlet import bundle as bd
from dirichlet import finset
from dirichlet.bundle import Bundle, BundleMap, ContraBundleMap, SliceObject
from dirichlet.errors import (BaseMismatch, CodomainMismatch, IndexOutOfRange, NotCommuting,
                              NotFiberwiseBijective, ShapeMismatch, ValidationError)
from dirichlet.finset import FinSet, function

bundles = st.lists(st.integers(0, 3), max_size=3).map(lambda t: Bundle(tuple(t)))
small_bundles = st.lists(st.integers(0, 2), max_size=2).map(lambda t: Bundle(tuple(t)))


def corpus(n):
    return list(bd.all_bundles(n, n))


# -- the Bundle type -----------------------------------------------------------

@pytest.mark.parametrize("fibers, b, size, offset", [
    ((2, 3), 1, 3, 2), ((0, 2, 0), 0, 0, 0), ((5,), 0, 5, 0),
])
def test_fiber_examples(fibers, b, size, offset):
    pi = Bundle(fibers)
    assert pi.fiber(b).size == size
    assert pi.offsets[b] == offset


def test_fiber_out_of_range():
    with pytest.raises(IndexOutOfRange):
        Bundle((1, 2)).fiber(2)


def test_negative_fiber_rejected():
    with pytest.raises(ValidationError) as exc:
        Bundle((1, -1))
    assert exc.value.invariant == "fiber sizes >= 0"


@given(bundles)
def test_projection_and_codec(pi):
    assert pi.projection.table == oracle.projection(pi.fiber_sizes)
    assert pi.total.size == sum(pi.fiber_sizes)
    pairs = [pi.decode(e) for e in range(pi.total.size)]
    assert pairs == oracle.total_pairs(pi.fiber_sizes)
    assert [pi.encode(b, i) for b, i in pairs] == list(range(pi.total.size))
    hit = set(pi.projection.table)
    assert hit == {b for b, k in enumerate(pi.fiber_sizes) if k}


def test_fiber_embedding_lands_in_fiber():
    pi = Bundle((2, 3))
    emb = pi.fiber_embedding(1)
    assert emb.table == (2, 3, 4)
    assert set(finset.compose(pi.projection, emb).table) == {1}


def test_normalize_keeps_labels():
    raw = function([1, 0, 1, 1], 3)
    ing = bd.normalize(raw)
    assert ing.bundle == Bundle((1, 3, 0))
    assert finset.compose(ing.bundle.projection, ing.relabel) == raw
    assert ing.relabel.is_bijective()


def test_all_bundles_order():
    got = [b.fiber_sizes for b in bd.all_bundles(2, 1)]
    assert got == [(), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]


# -- covariant maps ----------------------------------------------------------------

def test_square_checked_on_construction():
    with pytest.raises(NotCommuting):
        BundleMap(Bundle((2,)), Bundle((1, 3)), function([0], 2), function([1, 2], 4))
    with pytest.raises(ShapeMismatch):
        BundleMap(Bundle((2,)), Bundle((1, 3)), function([0, 0], 2), function([1, 2], 4))


@settings(max_examples=40, deadline=None)
@given(small_bundles, small_bundles)
def test_hom_matches_oracle(src, dst):
    got = [(m.base_map.table, m.total_map.table) for m in bd.hom(src, dst)]
    want = oracle.covariant_maps(src.fiber_sizes, dst.fiber_sizes)
    assert sorted(got) == sorted(want)
    assert len(got) == bd.count_hom(src, dst)


def test_compose_maps_laws():
    a, b, c = Bundle((1,)), Bundle((2,)), Bundle((2,))
    for f in bd.hom(a, b):
        assert bd.compose_maps(bd.identity_map(b), f) == f
        assert bd.compose_maps(f, bd.identity_map(a)) == f
        for g in bd.hom(b, c):
            for h in bd.hom(c, c):
                assert bd.compose_maps(bd.compose_maps(h, g), f) == \
                    bd.compose_maps(h, bd.compose_maps(g, f))


def test_compose_maps_mismatch():
    f = bd.identity_map(Bundle((1,)))
    with pytest.raises(CodomainMismatch):
        bd.compose_maps(f, bd.identity_map(Bundle((2,))))


# -- cartesian maps ------------------------------------------------------------------

def test_identity_is_cartesian():
    assert bd.is_cartesian(bd.identity_map(Bundle((2, 3))))


def test_injection_is_not_cartesian():
    m = BundleMap.from_fibers(Bundle((2,)), Bundle((1, 3)), [1], [[0, 2]])
    assert not bd.is_cartesian(m)
    assert not bd.is_cartesian_by_pullback(m)


def test_fiber_bijection_is_cartesian():
    m = BundleMap.from_fibers(Bundle((3,)), Bundle((1, 3)), [1], [[2, 0, 1]])
    assert bd.is_cartesian(m)
    assert bd.is_cartesian_by_pullback(m)


def test_cartesian_tests_agree_with_oracle():
    for src, dst in itertools.product(corpus(2), repeat=2):
        for m in bd.hom(src, dst):
            want = oracle.is_fiberwise_bijective(src.fiber_sizes, dst.fiber_sizes,
                                                 m.base_map.table, m.total_map.table)
            assert bd.is_cartesian(m) == want == bd.is_cartesian_by_pullback(m)


# -- contravariant maps -----------------------------------------------------------------

def test_contra_shape_checked():
    with pytest.raises(ShapeMismatch):
        ContraBundleMap(Bundle((2,)), Bundle((1, 3)), function([1], 2), [function([0], 2)])


@given(small_bundles, small_bundles)
def test_count_hom_contra_matches_oracle(src, dst):
    assert bd.count_hom_contra(src, dst) == \
        oracle.contravariant_count(src.fiber_sizes, dst.fiber_sizes)
    assert len(list(bd.hom_contra(src, dst))) == bd.count_hom_contra(src, dst)


def test_contra_identity_translates_to_identity():
    pi = Bundle((2, 3))
    assert bd.contra_to_cartesian_covariant(bd.identity_contra(pi)) == bd.identity_map(pi)


def test_contra_swap_translates_to_swap():
    swap = ContraBundleMap(Bundle((2,)), Bundle((2, 1)), function([0], 2), [function([1, 0], 2)])
    m = bd.contra_to_cartesian_covariant(swap)
    assert m.fiber_map(0).table == (1, 0)
    assert bd.is_cartesian(m)


def test_non_bijective_contra_rejected():
    m = ContraBundleMap(Bundle((2,)), Bundle((2,)), function([0], 1), [function([0, 0], 2)])
    with pytest.raises(NotFiberwiseBijective):
        bd.contra_to_cartesian_covariant(m)
    with pytest.raises(NotFiberwiseBijective):
        bd.cartesian_covariant_to_contra(
            BundleMap.from_fibers(Bundle((2,)), Bundle((2,)), [0], [[0, 0]]))


def test_contra_round_trip_exhaustive():
    for src, dst in itertools.product(bd.all_bundles(2, 3), repeat=2):
        if max(src.fiber_sizes + dst.fiber_sizes, default=0) > 3:
            continue
        for m in bd.hom_contra(src, dst):
            if all(fm.is_bijective() for fm in m.fiber_back):
                back = bd.cartesian_covariant_to_contra(bd.contra_to_cartesian_covariant(m))
                assert back == m


# -- slices ----------------------------------------------------------------------

def test_slice_base_checked():
    with pytest.raises(BaseMismatch):
        SliceObject(FinSet(2), Bundle((1,)))


def test_pi_along_counts_sections():
    out = bd.pi_along(Bundle((2,)), SliceObject(FinSet(2), Bundle((3, 4))))
    assert out.bundle == Bundle((12,))


def test_pi_along_empty_fiber():
    out = bd.pi_along(Bundle((0, 1)), SliceObject(FinSet(1), Bundle((2,))))
    assert out.bundle.fiber_sizes == (1, 2)


def test_pi_along_section_order():
    pi, q = Bundle((2,)), SliceObject(FinSet(2), Bundle((2, 3)))
    got = [bd.pi_along_section(pi, q, 0, c) for c in range(6)]
    assert got == list(itertools.product(range(2), range(3)))


def test_delta_along_terminal_map():
    q = SliceObject(FinSet(1), Bundle((2,)))
    assert bd.delta(finset.terminal_map(3), q).bundle == Bundle((2, 2, 2))


def test_delta_projection_is_cartesian():
    q = SliceObject.of(Bundle((1, 3)))
    m = bd.delta_projection(function([1, 1, 0], 2), q)
    assert m.src == Bundle((3, 3, 1))
    assert bd.is_cartesian_by_pullback(m)


@pytest.mark.parametrize("q, r, want", [((2,), (3,), (9,)), ((0,), (0,), (1,)),
                                        ((1, 2), (2, 2), (2, 4))])
def test_fiberwise_hom(q, r, want):
    out = bd.fiberwise_hom(SliceObject.of(Bundle(q)), SliceObject.of(Bundle(r)))
    assert out.bundle.fiber_sizes == want


def test_fiberwise_hom_base_mismatch():
    with pytest.raises(BaseMismatch):
        bd.fiberwise_hom(SliceObject.of(Bundle((1,))), SliceObject.of(Bundle((1, 1))))


@given(bundles, st.integers(0, 3))
def test_sigma_pi_delta_composite(pi, x):
    pulled = bd.delta(finset.terminal_map(pi.total), SliceObject(FinSet(1), Bundle((x,))))
    out = bd.sigma(bd.pi_along(pi, pulled))
    assert out.size == sum(x ** k for k in pi.fiber_sizes)


# -- the adjoint sextuple objects -----------------------------------------------------

def test_sextuple_objects():
    pi = Bundle((0, 2, 0))
    z, incl = bd.zc(pi)
    assert z.size == 2 and incl.table == (0, 2)
    assert bd.dom(pi).size == 2 and bd.cod(pi).size == 3
    assert bd.bang_down(3) == Bundle((3,))
    assert bd.const(2) == Bundle((1, 1))
    assert bd.bang_up(2) == Bundle((0, 0))


@pytest.mark.parametrize("x", range(6))
def test_dom_of_bang_down(x):
    assert bd.dom(bd.bang_down(x)).size == x


def test_hom_from_bang_down_counts_dirichlet():
    for pi in corpus(3):
        for x in range(4):
            assert bd.count_hom(bd.bang_down(x), pi) == sum(k ** x for k in pi.fiber_sizes)


# -- factorization ------------------------------------------------------------------------

def test_factor_example():
    m = BundleMap.from_fibers(Bundle((1,)), Bundle((2,)), [0], [[0]])
    fac = bd.factor_vertical_cartesian(m)
    assert fac.cartesian == bd.identity_map(Bundle((2,)))
    assert fac.vertical == m


def test_factor_of_cartesian_has_bijective_vertical():
    m = BundleMap.from_fibers(Bundle((3,)), Bundle((1, 3)), [1], [[2, 0, 1]])
    fac = bd.factor_vertical_cartesian(m)
    assert fac.vertical.total_map.is_bijective()


def test_factor_with_identity_base():
    m = BundleMap.from_fibers(Bundle((2, 1)), Bundle((1, 2)), [0, 1], [[0, 0], [1]])
    fac = bd.factor_vertical_cartesian(m)
    assert fac.cartesian == bd.identity_map(m.dst)
    assert fac.vertical == m


def test_factorization_laws_exhaustive():
    for src, dst in itertools.product(corpus(2), repeat=2):
        for m in bd.hom(src, dst):
            fac = bd.factor_vertical_cartesian(m)
            assert bd.compose_maps(fac.cartesian, fac.vertical) == m
            assert bd.is_cartesian(fac.cartesian)
            assert fac.vertical.base_map == finset.identity(src.base)
            assert bd.is_cartesian(m) == fac.vertical.total_map.is_bijective()

import itertools

import pytest
from hypothesis import given, strategies as st

import oracle
from dirichlet import finset
from dirichlet.errors import (CodomainMismatch, DomainMismatch, EnumerationCapExceeded,
                              ShapeMismatch, ValidationError)
from dirichlet.finset import FinFunction, FinSet, QuiverDiagram, function


def fn_strategy(max_dom=4, max_cod=4):
    return st.integers(0, max_cod).flatmap(
        lambda m: st.just(function([], 0)) if m == 0 else
        st.lists(st.integers(0, m - 1), max_size=max_dom).map(lambda t: function(t, m)))


def fns_into(cod, max_dom=3):
    if cod == 0:
        return st.just(function([], 0))
    return st.lists(st.integers(0, cod - 1), max_size=max_dom).map(lambda t: function(t, cod))


# -- basics ------------------------------------------------------------------

@pytest.mark.parametrize("n, table", [(3, (0, 1, 2)), (0, ()), (1, (0,))])
def test_identity_tables(n, table):
    assert finset.identity(n).table == table


def test_compose_example():
    g, f = function([0, 0], 1), function([1, 0], 2)
    assert finset.compose(g, f) == function([0, 0], 1)


@given(fn_strategy())
def test_identity_is_unit(f):
    assert finset.compose(f, finset.identity(f.dom)) == f
    assert finset.compose(finset.identity(f.cod), f) == f


def test_compose_rejects_mismatch():
    with pytest.raises(CodomainMismatch):
        finset.compose(function([0], 1), function([0, 1], 2))


def test_compose_associative_exhaustive():
    sizes = range(4)
    for a, b, c, d in itertools.product(sizes, repeat=4):
        for f in finset.all_functions(a, b):
            for g in finset.all_functions(b, c):
                for h in list(finset.all_functions(c, d))[:4]:
                    assert finset.compose(h, finset.compose(g, f)) == \
                        finset.compose(finset.compose(h, g), f)


def test_table_validation():
    with pytest.raises(ValidationError) as exc:
        function([0, 2], 2)
    assert exc.value.invariant == "table entries < cod.size"
    with pytest.raises(ValidationError) as exc:
        FinFunction(FinSet(3), FinSet(2), (0, 1))
    assert exc.value.invariant == "len(table) == dom.size"
    with pytest.raises(ValidationError):
        FinSet(-1)


def test_finsets_equal_by_size():
    assert FinSet(3) == FinSet(3)
    assert FinSet(3) != FinSet(2)


# -- exponentials and codes ------------------------------------------------------

@pytest.mark.parametrize("b, e, size", [(2, 3, 8), (0, 0, 1), (0, 2, 0)])
def test_exponential_examples(b, e, size):
    assert finset.exponential(b, e).size == size


@given(st.integers(0, 4), st.integers(0, 4))
def test_all_functions_matches_oracle_order(n, m):
    tables = [f.table for f in finset.all_functions(n, m)]
    assert tables == oracle.functions(n, m)
    assert len(tables) == finset.exponential(m, n).size


@given(st.integers(1, 5).flatmap(
    lambda m: st.lists(st.integers(0, m - 1), max_size=5).map(lambda t: (t, m))))
def test_function_code_roundtrip(case):
    table, m = case
    code = finset.encode_function(table, m)
    assert finset.decode_function(code, len(table), m) == tuple(table)
    assert code == oracle.functions(len(table), m).index(tuple(table))


def test_all_functions_respects_cap():
    with pytest.raises(EnumerationCapExceeded):
        list(finset.all_functions(10, 10, cap=1000))


def test_cap_precedence(monkeypatch):
    monkeypatch.setenv(finset.CAP_ENV, "50")
    assert finset.get_cap() == 50
    with finset.enumeration_cap(7):
        assert finset.get_cap() == 7
        assert finset.get_cap(9) == 9
    assert finset.get_cap() == 50
    monkeypatch.setenv(finset.CAP_ENV, "zero")
    with pytest.raises(ValidationError):
        finset.get_cap()
    monkeypatch.delenv(finset.CAP_ENV)
    assert finset.get_cap() == finset.DEFAULT_CAP


# -- pullbacks --------------------------------------------------------------------

def test_pullback_over_point_is_product():
    pb = finset.pullback(function([0, 0], 1), function([0, 0, 0], 1))
    assert pb.apex.size == 6


def test_pullback_along_identity():
    h = function([1, 0, 1], 2)
    pb = finset.pullback(finset.identity(2), h)
    assert pb.apex.size == 3
    assert pb.p2.is_bijective()
    assert finset.compose(h, pb.p2) == pb.p1


def test_pullback_single_pair():
    pb = finset.pullback(function([0, 1], 2), function([1], 2))
    assert pb.pairs == ((1, 0),)


def test_pullback_rejects_non_cospan():
    with pytest.raises(CodomainMismatch):
        finset.pullback(function([0], 1), function([0], 2))


@given(st.integers(1, 3).flatmap(lambda c: st.tuples(fns_into(c), fns_into(c))))
def test_pullback_matches_filter(pair):
    f, g = pair
    want = [(a, b) for a in range(f.dom.size) for b in range(g.dom.size)
            if f.table[a] == g.table[b]]
    pb = finset.pullback(f, g)
    assert list(pb.pairs) == want
    assert finset.compose(f, pb.p1) == finset.compose(g, pb.p2)


def test_pullback_universal_property_exhaustive():
    for c in range(1, 3):
        for a, b in itertools.product(range(3), repeat=2):
            for f in finset.all_functions(a, c):
                for g in finset.all_functions(b, c):
                    pb = finset.pullback(f, g)
                    for apex in range(3):
                        for h in finset.all_functions(apex, a):
                            for k in finset.all_functions(apex, b):
                                if finset.compose(f, h) != finset.compose(g, k):
                                    continue
                                hits = [u for u in finset.all_functions(apex, pb.apex)
                                        if finset.compose(pb.p1, u) == h
                                        and finset.compose(pb.p2, u) == k]
                                assert hits == [pb.mediate(h, k)]


def test_equalizer_keeps_agreeing_points():
    e, incl = finset.equalizer(function([0, 1, 1], 2), function([0, 0, 1], 2))
    assert e.size == 2 and incl.table == (0, 2)


# -- pushouts and coequalizers ----------------------------------------------------

def test_pushout_of_empty_span_is_sum():
    po = finset.pushout(finset.initial_map(1), finset.initial_map(1))
    assert po.apex.size == 2


def test_pushout_of_identities():
    assert finset.pushout(finset.identity(2), finset.identity(2)).apex.size == 2


def test_pushout_union_find_example():
    po = finset.pushout(function([0], 1), function([0], 2))
    assert po.apex.size == 2
    assert po.q1.table == (0,) and po.q2.table == (0, 1)


def test_pushout_rejects_non_span():
    with pytest.raises(DomainMismatch):
        finset.pushout(function([0], 1), function([0, 0], 1))


@given(st.integers(0, 3).flatmap(lambda z: st.tuples(
    st.integers(1, 3).flatmap(lambda x: st.lists(st.integers(0, x - 1), min_size=z, max_size=z)
                              .map(lambda t: function(t, x))),
    st.integers(1, 3).flatmap(lambda y: st.lists(st.integers(0, y - 1), min_size=z, max_size=z)
                              .map(lambda t: function(t, y))))))
def test_pushout_size_matches_oracle(span):
    f, g = span
    n1 = f.cod.size
    want = oracle.quotient_size(n1 + g.cod.size,
                                [(f.table[c], n1 + g.table[c]) for c in range(f.dom.size)])
    po = finset.pushout(f, g)
    assert po.apex.size == want
    assert finset.compose(po.q1, f) == finset.compose(po.q2, g)


def test_pushout_couniversal_exhaustive():
    for z, x, y in itertools.product(range(3), repeat=3):
        for f in finset.all_functions(z, x):
            for g in finset.all_functions(z, y):
                po = finset.pushout(f, g)
                for w in range(3):
                    for h in finset.all_functions(x, w):
                        for k in finset.all_functions(y, w):
                            cocone = finset.compose(h, f) == finset.compose(k, g)
                            hits = [u for u in finset.all_functions(po.apex, w)
                                    if finset.compose(u, po.q1) == h
                                    and finset.compose(u, po.q2) == k]
                            assert len(hits) == (1 if cocone else 0)
                            assert (po.mediate(h, k) is not None) == cocone
                            if cocone:
                                assert hits == [po.mediate(h, k)]


def test_classes_numbered_by_first_appearance():
    co = finset.coequalizer(function([2], 3), function([1], 3))
    assert co.q.table == (0, 1, 1)


@pytest.mark.parametrize("f, g, cod, size", [
    ([0, 1], [0, 1], 2, 2),
    ([0, 1], [1, 0], 2, 1),
    ([0], [1], 3, 2),
])
def test_coequalizer_examples(f, g, cod, size):
    assert finset.coequalizer(function(f, cod), function(g, cod)).apex.size == size


def test_coequalizer_rejects_non_parallel():
    with pytest.raises(ShapeMismatch):
        finset.coequalizer(function([0], 1), function([0], 2))


def test_coequalizer_couniversal_exhaustive():
    for x, y in itertools.product(range(3), repeat=2):
        fs = list(finset.all_functions(x, y))
        for f, g in itertools.product(fs, repeat=2):
            co = finset.coequalizer(f, g)
            for w in range(3):
                for h in finset.all_functions(y, w):
                    forks = finset.compose(h, f) == finset.compose(h, g)
                    hits = [u for u in finset.all_functions(co.apex, w)
                            if finset.compose(u, co.q) == h]
                    assert len(hits) == (1 if forks else 0)


# -- quiver limits ----------------------------------------------------------------

def test_limit_of_single_object():
    lim = finset.limit_of_quiver(QuiverDiagram((FinSet(3),)))
    assert lim.apex.size == 3
    assert lim.projections[0] == finset.identity(3)


@given(st.integers(1, 3).flatmap(lambda c: st.tuples(fns_into(c), fns_into(c))))
def test_limit_of_cospan_is_pullback(pair):
    f, g = pair
    d = QuiverDiagram((f.dom, g.dom, f.cod), ((0, 2, f), (1, 2, g)))
    lim = finset.limit_of_quiver(d)
    pb = finset.pullback(f, g)
    assert [(t[0], t[1]) for t in lim.tuples] == list(pb.pairs)


def test_left_cone_limit_for_fibers_2_3():
    proj = function(oracle.projection((2, 3)), 2)
    d = QuiverDiagram((FinSet(2), FinSet(5), FinSet(5)), ((1, 0, proj), (2, 0, proj)))
    assert finset.limit_of_quiver(d).apex.size == 13


def test_limit_cap():
    d = QuiverDiagram((FinSet(100), FinSet(100), FinSet(100)))
    with pytest.raises(EnumerationCapExceeded):
        finset.limit_of_quiver(d, cap=10**5)


def test_quiver_rejects_bad_edge():
    with pytest.raises(ShapeMismatch):
        QuiverDiagram((FinSet(2), FinSet(3)), ((0, 1, function([0], 3)),))


def test_inverse_and_predicates():
    f = function([2, 0, 1], 3)
    assert f.is_bijective()
    assert finset.compose(f, f.inverse()) == finset.identity(3)
    assert not function([0, 0], 2).is_injective()
    with pytest.raises(ValidationError):
        function([0, 0], 2).inverse()

import itertools
import math

import pytest

import oracle
from dirichlet import bundle as bd
from dirichlet import equivalence as eq
from dirichlet.bundle import Bundle
from dirichlet.errors import EnumerationCapExceeded, ValidationError
from dirichlet.functor import check_naturality

B = Bundle


def corpus(n):
    return list(bd.all_bundles(n, n))


@pytest.mark.parametrize("src, dst, count", [((2,), (1, 3), 10), ((1,), (1,), 1),
                                             ((0,), (4,), 1)])
def test_covariant_counts(src, dst, count):
    assert len(eq.enumerate_covariant_maps(B(src), B(dst))) == count


def test_covariant_order_is_canonical():
    for src, dst in itertools.product(corpus(2), repeat=2):
        got = [(m.base_map.table, m.total_map.table)
               for m in eq.enumerate_covariant_maps(src, dst)]
        assert got == oracle.covariant_maps(src.fiber_sizes, dst.fiber_sizes)


@pytest.mark.parametrize("src, dst, count", [((2,), (1, 3), 10), ((1,), (1,), 1),
                                             ((2,), (0,), 1)])
def test_contravariant_counts(src, dst, count):
    assert len(eq.enumerate_contravariant_maps(B(src), B(dst))) == count


def test_natural_family_witness():
    fams = eq.enumerate_natural_families(B((2,)), B((1, 3)), 2)
    assert len(fams) == 10
    assert len(eq.enumerate_natural_families(B((1,)), B((1,)), 2)) == 1


def test_dropping_naturality_admits_more():
    src, dst = B((2,)), B((1, 3))
    assert eq.count_unconstrained_families(src, dst, 2) > 10


@pytest.mark.parametrize("src, dst, probe_max", [
    ((1,), (2,), 2), ((2,), (1, 2), 1), ((0, 1), (2,), 2), ((2,), (2,), 2),
])
def test_natural_families_match_brute_force(src, dst, probe_max):
    want = oracle.natural_families(src, dst, probe_max)
    assert len(eq.enumerate_natural_families(B(src), B(dst), probe_max)) == want
    assert want == len(oracle.covariant_maps(src, dst))


def test_probe_must_include_one():
    with pytest.raises(ValidationError):
        eq.enumerate_natural_families(B((1,)), B((1,)), 0)


def test_natural_family_search_cap():
    with pytest.raises(EnumerationCapExceeded):
        eq.enumerate_natural_families(B((2, 2)), B((2, 2)), 3, cap=5)


def test_round_trips():
    src, dst = B((2,)), B((1, 3))
    maps = eq.enumerate_covariant_maps(src, dst)
    for m in maps:
        assert eq.restrict_at_bang0(eq.extend_from_bang0(m, 3)) == m
    fams = eq.enumerate_natural_families(src, dst, 3)
    for t in fams:
        assert eq.extend_from_bang0(eq.restrict_at_bang0(t), 3) == t
    assert sorted(map(eq.restrict_at_bang0, fams), key=repr) == sorted(maps, key=repr)


def test_identity_family_is_identity_map():
    pi = B((2, 1))
    fam = eq.extend_from_bang0(bd.identity_map(pi), 3)
    assert eq.restrict_at_bang0(fam) == bd.identity_map(pi)


def test_every_family_is_natural():
    for t in eq.enumerate_natural_families(B((1, 2)), B((2,)), 2):
        assert check_naturality(t, 2).ok


@pytest.mark.parametrize("src, dst, count", [((2,), (2, 3), 2), ((1,), (1,), 1)])
def test_cartesian_equivalence_examples(src, dst, count):
    e = eq.poly_dir_cartesian_equiv(B(src), B(dst))
    assert len(e.dir_maps) == len(e.poly_maps) == count
    assert e.is_bijective


@pytest.mark.parametrize("n", range(5))
def test_representable_cartesian_maps(n):
    e = eq.poly_dir_cartesian_equiv(B((n,)), B((n,)))
    assert len(e.dir_maps) == len(e.poly_maps) == math.factorial(n)


def test_cartesian_count_matches_oracle():
    for src, dst in itertools.product(corpus(2), repeat=2):
        want = sum(oracle.is_fiberwise_bijective(src.fiber_sizes, dst.fiber_sizes, b, t)
                   for b, t in oracle.covariant_maps(src.fiber_sizes, dst.fiber_sizes))
        assert len(eq.enumerate_cartesian_maps(src, dst)) == want


def test_poly_natural_families_match_contravariant_maps():
    for src, dst in itertools.product(corpus(2), repeat=2):
        probe = max(src.fiber_sizes, default=0) or 1
        fams = eq.enumerate_poly_natural_families(src, dst, probe)
        assert len(fams) == oracle.contravariant_count(src.fiber_sizes, dst.fiber_sizes)

"""Bundles ``pi: E -> B`` over finite sets and the maps between them.

A bundle is stored by its fiber sizes; the total set is the concatenation
of the fibers, so element ``e`` of ``E`` is ``offsets[b] + i`` for the
``i``-th element of fiber ``b``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from . import finset
from .errors import (
    BaseMismatch,
    CodomainMismatch,
    IndexOutOfRange,
    NotCommuting,
    NotFiberwiseBijective,
    ShapeMismatch,
    ValidationError,
)
from .finset import FinFunction, FinSet, as_finset, check_cap, compose, identity


@dataclass(frozen=True)
class Bundle:
    fiber_sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(self.fiber_sizes)
        for b, k in enumerate(sizes):
            if not isinstance(k, int) or isinstance(k, bool) or k < 0:
                raise ValidationError(f"fiber_sizes[{b}] = {k!r} is not a nonnegative int",
                                      "fiber sizes >= 0")
        object.__setattr__(self, "fiber_sizes", sizes)

    def __repr__(self) -> str:
        return f"Bundle({list(self.fiber_sizes)})"

    @property
    def base(self) -> FinSet:
        return FinSet(len(self.fiber_sizes))

    @property
    def total(self) -> FinSet:
        return FinSet(sum(self.fiber_sizes))

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        return tuple(itertools.accumulate(self.fiber_sizes, initial=0))[:-1]

    @cached_property
    def projection(self) -> FinFunction:
        table = tuple(b for b, k in enumerate(self.fiber_sizes) for _ in range(k))
        return FinFunction(self.total, self.base, table)

    def fiber(self, b: int) -> FinSet:
        if not 0 <= b < len(self.fiber_sizes):
            raise IndexOutOfRange(f"base element {b} not in base of size {len(self.fiber_sizes)}")
        return FinSet(self.fiber_sizes[b])

    def fiber_embedding(self, b: int) -> FinFunction:
        k, o = self.fiber(b).size, self.offsets[b]
        return FinFunction(FinSet(k), self.total, tuple(range(o, o + k)))

    def encode(self, b: int, i: int) -> int:
        if not 0 <= i < self.fiber(b).size:
            raise IndexOutOfRange(f"{i} not in fiber {b} of size {self.fiber_sizes[b]}")
        return self.offsets[b] + i

    def decode(self, e: int) -> tuple[int, int]:
        if not 0 <= e < self.total.size:
            raise IndexOutOfRange(f"{e} not in total set of size {self.total.size}")
        b = self.projection.table[e]
        return b, e - self.offsets[b]


@dataclass(frozen=True)
class Ingestion:
    """Result of normalising an arbitrary function into a canonical bundle.

    ``relabel`` sends each original element of E to its canonical index and
    satisfies ``bundle.projection . relabel == original``.
    """
    bundle: Bundle
    relabel: FinFunction


def normalize(pi: FinFunction) -> Ingestion:
    sizes = [0] * pi.cod.size
    for b in pi.table:
        sizes[b] += 1
    bundle = Bundle(tuple(sizes))
    order = sorted(range(pi.dom.size), key=lambda e: (pi.table[e], e))
    relabel = [0] * pi.dom.size
    for new, old in enumerate(order):
        relabel[old] = new
    return Ingestion(bundle, FinFunction(pi.dom, bundle.total, tuple(relabel)))


def all_bundles(max_base: int, max_fiber: int) -> Iterator[Bundle]:
    """Canonical corpus order: by base size, then fiber tuple lexicographically."""
    for n in range(max_base + 1):
        for sizes in itertools.product(range(max_fiber + 1), repeat=n):
            yield Bundle(sizes)


# -- covariant maps ---------------------------------------------------------

@dataclass(frozen=True)
class BundleMap:
    src: Bundle
    dst: Bundle
    base_map: FinFunction
    total_map: FinFunction

    def __post_init__(self):
        if self.base_map.dom != self.src.base or self.base_map.cod != self.dst.base:
            raise ShapeMismatch(
                f"base_map is {self.base_map.dom.size}->{self.base_map.cod.size}, expected "
                f"{self.src.base.size}->{self.dst.base.size}", "base_map: B -> B'")
        if self.total_map.dom != self.src.total or self.total_map.cod != self.dst.total:
            raise ShapeMismatch(
                f"total_map is {self.total_map.dom.size}->{self.total_map.cod.size}, expected "
                f"{self.src.total.size}->{self.dst.total.size}", "total_map: E -> E'")
        lhs = compose(self.dst.projection, self.total_map)
        rhs = compose(self.base_map, self.src.projection)
        if lhs != rhs:
            e = next(i for i in range(len(lhs.table)) if lhs.table[i] != rhs.table[i])
            raise NotCommuting(f"square fails at total element {e}: pi'(tot(e)) = "
                               f"{lhs.table[e]} but f(pi(e)) = {rhs.table[e]}")

    def fiber_map(self, b: int) -> FinFunction:
        """The restriction ``E_b -> E'_{f(b)}``."""
        fb = self.base_map.table[b]
        o, o2 = self.src.offsets[b], self.dst.offsets[fb]
        k = self.src.fiber_sizes[b]
        return FinFunction(FinSet(k), self.dst.fiber(fb),
                           tuple(self.total_map.table[o + i] - o2 for i in range(k)))

    @classmethod
    def from_fibers(cls, src: Bundle, dst: Bundle, base_map: FinFunction | Sequence[int],
                    fiber_maps: Sequence[FinFunction | Sequence[int]]) -> BundleMap:
        if not isinstance(base_map, FinFunction):
            base_map = finset.function(base_map, dst.base)
        if len(fiber_maps) != src.base.size:
            raise ShapeMismatch(f"need {src.base.size} fiber maps, got {len(fiber_maps)}")
        total = []
        for b, fm in enumerate(fiber_maps):
            table = fm.table if isinstance(fm, FinFunction) else tuple(fm)
            fb = base_map.table[b]
            if len(table) != src.fiber_sizes[b]:
                raise ShapeMismatch(f"fiber map {b} has length {len(table)}, "
                                    f"fiber has size {src.fiber_sizes[b]}")
            total.extend(dst.encode(fb, i) for i in table)
        return cls(src, dst, base_map, FinFunction(src.total, dst.total, tuple(total)))


def identity_map(pi: Bundle) -> BundleMap:
    return BundleMap(pi, pi, identity(pi.base), identity(pi.total))


def compose_maps(g: BundleMap, f: BundleMap) -> BundleMap:
    if f.dst != g.src:
        raise CodomainMismatch(f"cannot compose bundle maps: {f.dst!r} != {g.src!r}")
    return BundleMap(f.src, g.dst, compose(g.base_map, f.base_map),
                     compose(g.total_map, f.total_map))


def is_cartesian(m: BundleMap) -> bool:
    """Fiberwise test: every ``E_b -> E'_{f(b)}`` is a bijection."""
    return all(m.fiber_map(b).is_bijective() for b in range(m.src.base.size))


def is_cartesian_by_pullback(m: BundleMap) -> bool:
    """Square test: the mediating map into ``pullback(pi', f)`` is a bijection."""
    return finset.is_pullback_square(m.total_map, m.src.projection,
                                     m.dst.projection, m.base_map)


def hom_tables(src: Bundle, dst: Bundle,
               cap: int | None = None) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """``(base table, total table)`` of every covariant map, in canonical order:
    base map lexicographic, then the fiber maps in order, each mixed-radix."""
    check_cap(count_hom(src, dst), cap, f"bundle maps {src!r}->{dst!r}")
    for f in itertools.product(range(dst.base.size), repeat=src.base.size):
        choices = [itertools.product(range(dst.fiber_sizes[f[b]]), repeat=k)
                   for b, k in enumerate(src.fiber_sizes)]
        for fibers in itertools.product(*choices):
            yield f, tuple(dst.offsets[f[b]] + i for b, tab in enumerate(fibers) for i in tab)


def hom(src: Bundle, dst: Bundle, cap: int | None = None) -> Iterator[BundleMap]:
    """All covariant maps ``src -> dst`` in the order of ``hom_tables``."""
    for f, total in hom_tables(src, dst, cap):
        yield BundleMap(src, dst, FinFunction(src.base, dst.base, f),
                        FinFunction(src.total, dst.total, total))


def count_hom(src: Bundle, dst: Bundle) -> int:
    """``sum_f prod_b |E'_{f b}|^{|E_b|}``, computed fiber by fiber."""
    return math.prod(sum(k2 ** k for k2 in dst.fiber_sizes) for k in src.fiber_sizes)


# -- contravariant maps -----------------------------------------------------

@dataclass(frozen=True)
class ContraBundleMap:
    """A base map ``f`` with backwards fiber maps ``E'_{f(b)} -> E_b``."""
    src: Bundle
    dst: Bundle
    base_map: FinFunction
    fiber_back: tuple[FinFunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "fiber_back", tuple(self.fiber_back))
        if self.base_map.dom != self.src.base or self.base_map.cod != self.dst.base:
            raise ShapeMismatch("base_map must go from src.base to dst.base", "base_map: B -> B'")
        if len(self.fiber_back) != self.src.base.size:
            raise ShapeMismatch(f"need {self.src.base.size} fiber maps, "
                                f"got {len(self.fiber_back)}")
        for b, fm in enumerate(self.fiber_back):
            want_dom = self.dst.fiber_sizes[self.base_map.table[b]]
            want_cod = self.src.fiber_sizes[b]
            if fm.dom.size != want_dom or fm.cod.size != want_cod:
                raise ShapeMismatch(
                    f"fiber_back[{b}] is {fm.dom.size}->{fm.cod.size}, "
                    f"expected {want_dom}->{want_cod}", "fiber_back[b]: E'_{f b} -> E_b")


def identity_contra(pi: Bundle) -> ContraBundleMap:
    return ContraBundleMap(pi, pi, identity(pi.base),
                           tuple(identity(k) for k in pi.fiber_sizes))


def compose_contra(g: ContraBundleMap, f: ContraBundleMap) -> ContraBundleMap:
    if f.dst != g.src:
        raise CodomainMismatch(f"cannot compose contravariant maps: {f.dst!r} != {g.src!r}")
    backs = tuple(compose(f.fiber_back[b], g.fiber_back[f.base_map.table[b]])
                  for b in range(f.src.base.size))
    return ContraBundleMap(f.src, g.dst, compose(g.base_map, f.base_map), backs)


def hom_contra(src: Bundle, dst: Bundle, cap: int | None = None) -> Iterator[ContraBundleMap]:
    """All contravariant maps, base map lexicographic then fiber maps in order."""
    check_cap(count_hom_contra(src, dst), cap, f"contravariant maps {src!r}->{dst!r}")
    for f in finset.all_functions(src.base, dst.base):
        choices = [list(finset.all_functions(dst.fiber_sizes[f.table[b]], k))
                   for b, k in enumerate(src.fiber_sizes)]
        for backs in itertools.product(*choices):
            yield ContraBundleMap(src, dst, f, backs)


def count_hom_contra(src: Bundle, dst: Bundle) -> int:
    return math.prod(sum(k ** k2 for k2 in dst.fiber_sizes) for k in src.fiber_sizes)


def contra_to_cartesian_covariant(m: ContraBundleMap) -> BundleMap:
    for b, fm in enumerate(m.fiber_back):
        if not fm.is_bijective():
            raise NotFiberwiseBijective(f"fiber_back[{b}] = {fm!r} is not a bijection")
    return BundleMap.from_fibers(m.src, m.dst, m.base_map,
                                 [fm.inverse() for fm in m.fiber_back])


def cartesian_covariant_to_contra(m: BundleMap) -> ContraBundleMap:
    backs = []
    for b in range(m.src.base.size):
        fm = m.fiber_map(b)
        if not fm.is_bijective():
            raise NotFiberwiseBijective(f"fiber map over {b} = {fm!r} is not a bijection")
        backs.append(fm.inverse())
    return ContraBundleMap(m.src, m.dst, m.base_map, tuple(backs))


# -- slices, Sigma / Pi / Delta ---------------------------------------------

@dataclass(frozen=True)
class SliceObject:
    over: FinSet
    bundle: Bundle

    def __post_init__(self):
        object.__setattr__(self, "over", as_finset(self.over))
        if self.bundle.base != self.over:
            raise BaseMismatch(f"bundle base has size {self.bundle.base.size}, "
                               f"slice is over {self.over.size}", "bundle.base == over")

    @classmethod
    def of(cls, bundle: Bundle) -> SliceObject:
        return cls(bundle.base, bundle)


def sigma(pi: Bundle | SliceObject) -> FinSet:
    if isinstance(pi, SliceObject):
        pi = pi.bundle
    return pi.total


def pi_along(pi: Bundle, q: SliceObject, cap: int | None = None) -> SliceObject:
    """Dependent product: over ``b``, the sections of ``q`` over ``E_b``."""
    if q.over != pi.total:
        raise BaseMismatch(f"q must live over E (size {pi.total.size}), not {q.over.size}")
    sizes = tuple(math.prod(q.bundle.fiber_sizes[pi.offsets[b] + i] for i in range(k))
                  for b, k in enumerate(pi.fiber_sizes))
    check_cap(sum(sizes), cap, "pi_along total")
    return SliceObject(pi.base, Bundle(sizes))


def pi_along_section(pi: Bundle, q: SliceObject, b: int, code: int) -> tuple[int, ...]:
    """Decode element ``code`` of the fiber over ``b`` as one q-fiber index per
    ``e`` in ``E_b`` (increasing ``e``, first one most significant)."""
    radices = [q.bundle.fiber_sizes[pi.offsets[b] + i] for i in range(pi.fiber_sizes[b])]
    digits = [0] * len(radices)
    for j in range(len(radices) - 1, -1, -1):
        code, digits[j] = divmod(code, radices[j])
    return tuple(digits)


def delta(f: FinFunction, q: SliceObject) -> SliceObject:
    """Pullback of ``q`` along ``f: X -> B``."""
    if f.cod != q.over:
        raise BaseMismatch(f"f lands in a set of size {f.cod.size}, q is over {q.over.size}")
    return SliceObject(f.dom, Bundle(tuple(q.bundle.fiber_sizes[b] for b in f.table)))


def delta_projection(f: FinFunction, q: SliceObject) -> BundleMap:
    """The cartesian map ``delta(f, q) -> q`` lying over ``f``."""
    pulled = delta(f, q).bundle
    return BundleMap.from_fibers(pulled, q.bundle, f,
                                 [tuple(range(k)) for k in pulled.fiber_sizes])


def fiberwise_hom(q: SliceObject, r: SliceObject) -> SliceObject:
    """Over ``b``: all functions ``q_b -> r_b`` in mixed-radix order."""
    if q.over != r.over:
        raise BaseMismatch(f"slices over {q.over.size} and {r.over.size}")
    return SliceObject(q.over, Bundle(tuple(
        b ** a for a, b in zip(q.bundle.fiber_sizes, r.bundle.fiber_sizes))))


# -- the adjoint sextuple ---------------------------------------------------

def dom(pi: Bundle) -> FinSet:
    return pi.total


def cod(pi: Bundle) -> FinSet:
    return pi.base


def const(x: FinSet | int) -> Bundle:
    """The identity bundle ``X -> X``."""
    return Bundle((1,) * as_finset(x).size)


def bang_up(x: FinSet | int) -> Bundle:
    """The bundle ``0 -> X``."""
    return Bundle((0,) * as_finset(x).size)


def bang_down(x: FinSet | int) -> Bundle:
    """The bundle ``X -> 1``."""
    return Bundle((as_finset(x).size,))


def zc(pi: Bundle) -> tuple[FinSet, FinFunction]:
    """Base points with empty fiber, with their inclusion into B."""
    keep = tuple(b for b, k in enumerate(pi.fiber_sizes) if k == 0)
    z = FinSet(len(keep))
    return z, FinFunction(z, pi.base, keep)


def const_map(g: FinFunction) -> BundleMap:
    return BundleMap(const(g.dom), const(g.cod), g, g)


def bang_up_map(g: FinFunction) -> BundleMap:
    return BundleMap(bang_up(g.dom), bang_up(g.cod), g, finset.initial_map(0))


def bang_down_map(g: FinFunction) -> BundleMap:
    return BundleMap(bang_down(g.dom), bang_down(g.cod), identity(1), g)


# -- vertical / cartesian factorization --------------------------------------

@dataclass(frozen=True)
class Factorization:
    vertical: BundleMap
    cartesian: BundleMap


def factor_vertical_cartesian(m: BundleMap) -> Factorization:
    """``m = cartesian . vertical`` through the pullback of dst along the base map."""
    cart = delta_projection(m.base_map, SliceObject.of(m.dst))
    vert = BundleMap.from_fibers(m.src, cart.src, identity(m.src.base),
                                 [m.fiber_map(b) for b in range(m.src.base.size)])
    return Factorization(vert, cart)


def count_factorizations(m: BundleMap, cap: int | None = None) -> int:
    """Vertical maps ``v`` into the canonical pullback with ``cartesian . v == m``."""
    cart = delta_projection(m.base_map, SliceObject.of(m.dst))
    n = 0
    for v in hom(m.src, cart.src, cap):
        if v.base_map == identity(m.src.base) and compose_maps(cart, v) == m:
            n += 1
    return n

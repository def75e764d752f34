"""Dirichlet and polynomial functors of a bundle, evaluated on finite sets.

Element encodings are part of the public contract.  An element of
``D(X) = sum_b E_b^X`` is a pair ``(b, h)`` with ``h: X -> E_b``; its code is
its rank in the lexicographic order of ``(b, h)``, reading ``h`` as a
mixed-radix number with position 0 most significant.  ``P(X) = sum_b X^{E_b}``
is coded the same way with ``t: E_b -> X``.  With these codes ``D(0)`` is
literally ``B`` and ``D(1)`` is literally ``E``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from . import bundle as bd
from . import finset
from .bundle import Bundle, BundleMap, SliceObject
from .errors import IndexOutOfRange, ShapeMismatch, ValidationError
from .finset import (FinFunction, FinSet, QuiverDiagram, as_finset, check_cap,
                     decode_function, encode_function)

DIR_METHODS = ("sum", "hom", "limit", "pullback", "slice")
POLY_METHODS = ("sum", "composite")


def _n(x: FinSet | int) -> int:
    return as_finset(x).size


# -- Dirichlet side -----------------------------------------------------------

@dataclass(frozen=True)
class DirichletElement:
    bundle: Bundle
    arg_size: int
    base: int
    fiber_datum: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "fiber_datum", tuple(self.fiber_datum))
        k = self.bundle.fiber(self.base).size
        if len(self.fiber_datum) != self.arg_size:
            raise ShapeMismatch(f"fiber datum has length {len(self.fiber_datum)}, "
                                f"expected |X| = {self.arg_size}")
        if any(not 0 <= v < k for v in self.fiber_datum):
            raise IndexOutOfRange(f"fiber datum {list(self.fiber_datum)} leaves fiber "
                                  f"{self.base} of size {k}")


def dir_size(pi: Bundle, x: FinSet | int) -> int:
    n = _n(x)
    return sum(k ** n for k in pi.fiber_sizes)


def _dir_offsets(pi: Bundle, n: int) -> tuple[int, ...]:
    return tuple(itertools.accumulate((k ** n for k in pi.fiber_sizes), initial=0))


@dataclass(frozen=True)
class DirichletSet:
    """``D(X)`` as a canonical finite set together with its element codec."""
    bundle: Bundle
    arg_size: int

    @property
    def carrier(self) -> FinSet:
        return FinSet(dir_size(self.bundle, self.arg_size))

    @property
    def size(self) -> int:
        return self.carrier.size

    def encode(self, b: int, h: Sequence[int]) -> int:
        el = DirichletElement(self.bundle, self.arg_size, b, h)
        return (_dir_offsets(self.bundle, self.arg_size)[b]
                + encode_function(el.fiber_datum, self.bundle.fiber_sizes[b]))

    def decode(self, code: int) -> DirichletElement:
        offs = _dir_offsets(self.bundle, self.arg_size)
        if not 0 <= code < offs[-1]:
            raise IndexOutOfRange(f"code {code} not in D(X) of size {offs[-1]}")
        b = next(b for b in range(len(offs) - 1) if offs[b] <= code < offs[b + 1])
        h = decode_function(code - offs[b], self.arg_size, self.bundle.fiber_sizes[b])
        return DirichletElement(self.bundle, self.arg_size, b, h)

    def __iter__(self) -> Iterator[DirichletElement]:
        check_cap(self.size, None, "D(X) elements")
        for b, k in enumerate(self.bundle.fiber_sizes):
            for h in itertools.product(range(k), repeat=self.arg_size):
                yield DirichletElement(self.bundle, self.arg_size, b, h)


def dir_eval(pi: Bundle, x: FinSet | int) -> DirichletSet:
    return DirichletSet(pi, _n(x))


@lru_cache(maxsize=65536)
def dir_eval_map(pi: Bundle, g: FinFunction) -> FinFunction:
    """``D(g): D(X') -> D(X)`` for ``g: X -> X'``, by ``(b, h) -> (b, h . g)``."""
    n, n2 = g.dom.size, g.cod.size
    check_cap(dir_size(pi, n2), None, "D(g) table")
    offs = _dir_offsets(pi, n)
    table = []
    for b, k in enumerate(pi.fiber_sizes):
        for h in itertools.product(range(k), repeat=n2):
            table.append(offs[b] + encode_function([h[y] for y in g.table], k))
    return FinFunction(FinSet(dir_size(pi, n2)), FinSet(offs[-1]), tuple(table))


# -- polynomial side ----------------------------------------------------------

@dataclass(frozen=True)
class PolyElement:
    bundle: Bundle
    arg_size: int
    base: int
    fiber_datum: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "fiber_datum", tuple(self.fiber_datum))
        k = self.bundle.fiber(self.base).size
        if len(self.fiber_datum) != k:
            raise ShapeMismatch(f"fiber datum has length {len(self.fiber_datum)}, "
                                f"expected |E_b| = {k}")
        if any(not 0 <= v < self.arg_size for v in self.fiber_datum):
            raise IndexOutOfRange(f"fiber datum {list(self.fiber_datum)} leaves X "
                                  f"of size {self.arg_size}")


def poly_size(pi: Bundle, x: FinSet | int) -> int:
    n = _n(x)
    return sum(n ** k for k in pi.fiber_sizes)


def _poly_offsets(pi: Bundle, n: int) -> tuple[int, ...]:
    return tuple(itertools.accumulate((n ** k for k in pi.fiber_sizes), initial=0))


@dataclass(frozen=True)
class PolySet:
    bundle: Bundle
    arg_size: int

    @property
    def carrier(self) -> FinSet:
        return FinSet(poly_size(self.bundle, self.arg_size))

    @property
    def size(self) -> int:
        return self.carrier.size

    def encode(self, b: int, t: Sequence[int]) -> int:
        el = PolyElement(self.bundle, self.arg_size, b, t)
        return _poly_offsets(self.bundle, self.arg_size)[b] + encode_function(el.fiber_datum,
                                                                              self.arg_size)

    def decode(self, code: int) -> PolyElement:
        offs = _poly_offsets(self.bundle, self.arg_size)
        if not 0 <= code < offs[-1]:
            raise IndexOutOfRange(f"code {code} not in P(X) of size {offs[-1]}")
        b = next(b for b in range(len(offs) - 1) if offs[b] <= code < offs[b + 1])
        t = decode_function(code - offs[b], self.bundle.fiber_sizes[b], self.arg_size)
        return PolyElement(self.bundle, self.arg_size, b, t)

    def __iter__(self) -> Iterator[PolyElement]:
        check_cap(self.size, None, "P(X) elements")
        for b, k in enumerate(self.bundle.fiber_sizes):
            for t in itertools.product(range(self.arg_size), repeat=k):
                yield PolyElement(self.bundle, self.arg_size, b, t)


def poly_eval(pi: Bundle, x: FinSet | int) -> PolySet:
    return PolySet(pi, _n(x))


@lru_cache(maxsize=65536)
def poly_eval_map(pi: Bundle, g: FinFunction) -> FinFunction:
    """``P(g): P(X) -> P(X')`` by ``(b, t) -> (b, g . t)``."""
    n, n2 = g.dom.size, g.cod.size
    check_cap(poly_size(pi, n), None, "P(g) table")
    offs = _poly_offsets(pi, n2)
    table = []
    for b, k in enumerate(pi.fiber_sizes):
        for t in itertools.product(range(n), repeat=k):
            table.append(offs[b] + encode_function([g.table[v] for v in t], n2))
    return FinFunction(FinSet(poly_size(pi, n)), FinSet(offs[-1]), tuple(table))


# -- presentations ------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """A set computed by one presentation, with its bijection to the sum form.

    ``elements`` are the presentation's native elements, in its native order;
    ``to_sum`` sends native index ``i`` to the canonical code of the matching
    element of ``D(X)`` (or ``P(X)``).
    """
    method: str
    bundle: Bundle
    arg_size: int
    elements: tuple
    to_sum: FinFunction
    _index: dict = field(compare=False, repr=False, hash=False, default_factory=dict)

    @property
    def carrier(self) -> FinSet:
        return FinSet(len(self.elements))

    def index_of(self, element) -> int:
        if not self._index:
            self._index.update({el: i for i, el in enumerate(self.elements)})
        return self._index[element]


def _left_cone(pi: Bundle, n: int) -> QuiverDiagram:
    """Cone point sent to B, each of the n points sent to E, edges by pi."""
    objects = (pi.base,) + (pi.total,) * n
    edges = tuple((1 + x, 0, pi.projection) for x in range(n))
    return QuiverDiagram(objects, edges)


def _native_pullback(pi: Bundle, n: int, cap: int | None):
    """``{(s, b) in E^X x B : pi . s == const_b}`` as a finset pullback."""
    e, b = pi.total.size, pi.base.size
    check_cap(e ** n, cap, "E^X")
    post = FinFunction(FinSet(e ** n), FinSet(b ** n), tuple(
        encode_function([pi.projection.table[v] for v in s], b)
        for s in itertools.product(range(e), repeat=n)))
    consts = FinFunction(pi.base, FinSet(b ** n),
                         tuple(encode_function([c] * n, b) for c in range(b)))
    return finset.pullback(post, consts)


def _slice_composite(pi: Bundle, n: int) -> Bundle:
    """``Sigma_B . Set_{/B}(-, pi) . Delta_B`` as a bundle whose total is D(X)."""
    constant = bd.delta(finset.terminal_map(pi.base), SliceObject(FinSet(1), Bundle((n,))))
    return bd.fiberwise_hom(constant, SliceObject.of(pi)).bundle


def dir_eval_via(method: str, pi: Bundle, x: FinSet | int,
                 cap: int | None = None) -> Presentation:
    return _dir_eval_via(method, pi, _n(x), finset.get_cap(cap))


@lru_cache(maxsize=4096)
def _dir_eval_via(method: str, pi: Bundle, n: int, cap: int) -> Presentation:
    target = dir_eval(pi, n)
    if method == "sum":
        elements = tuple((el.base, el.fiber_datum) for el in target)
        codes = tuple(range(len(elements)))
    elif method == "hom":
        # brute force over all squares !_X -> pi, kept if they commute
        check_cap(pi.base.size * pi.total.size ** n, cap, "squares !_X -> pi")
        elements = []
        for base in finset.all_functions(1, pi.base):
            for top in finset.all_functions(n, pi.total):
                if all(pi.projection.table[v] == base.table[0] for v in top.table):
                    elements.append(BundleMap(bd.bang_down(n), pi, base, top))
        elements = tuple(elements)
        codes = tuple(target.encode(m.base_map.table[0], m.fiber_map(0).table)
                      for m in elements)
    elif method == "limit":
        lim = finset.limit_of_quiver(_left_cone(pi, n), cap)
        elements = lim.tuples
        codes = tuple(target.encode(t[0], [v - pi.offsets[t[0]] for v in t[1:]])
                      for t in elements)
    elif method == "pullback":
        pb = _native_pullback(pi, n, cap)
        elements = pb.pairs
        codes = tuple(target.encode(b, [v - pi.offsets[b] for v in
                                        decode_function(s, n, pi.total.size)])
                      for s, b in elements)
    elif method == "slice":
        composite = _slice_composite(pi, n)
        elements = tuple(range(composite.total.size))
        codes = []
        for e in elements:
            b, i = composite.decode(e)
            codes.append(target.encode(b, decode_function(i, n, pi.fiber_sizes[b])))
        codes = tuple(codes)
    else:
        raise ValidationError(f"unknown method {method!r}; expected one of "
                              f"{', '.join(DIR_METHODS)}", "method")
    to_sum = FinFunction(FinSet(len(elements)), target.carrier, codes)
    return Presentation(method, pi, n, elements, to_sum)


def presentation_map(method: str, pi: Bundle, g: FinFunction,
                     cap: int | None = None) -> FinFunction:
    """The contravariant action of ``g: X -> X'`` computed inside the given
    presentation, as a map from its carrier at X' to its carrier at X."""
    n, n2 = g.dom.size, g.cod.size
    src, dst = dir_eval_via(method, pi, n2, cap), dir_eval_via(method, pi, n, cap)
    if method == "sum":
        act = lambda el: (el[0], tuple(el[1][y] for y in g.table))
    elif method == "hom":
        act = lambda m: bd.compose_maps(m, bd.bang_down_map(g))
    elif method == "limit":
        act = lambda t: (t[0],) + tuple(t[1 + y] for y in g.table)
    elif method == "pullback":
        e = pi.total.size

        def act(pair):
            s, b = pair
            tab = decode_function(s, n2, e)
            return encode_function([tab[y] for y in g.table], e), b
    elif method == "slice":
        big, small = _slice_composite(pi, n2), _slice_composite(pi, n)

        def act(i):
            b, j = big.decode(i)
            k = pi.fiber_sizes[b]
            tab = decode_function(j, n2, k)
            return small.encode(b, encode_function([tab[y] for y in g.table], k))
    else:
        raise ValidationError(f"unknown method {method!r}", "method")
    table = tuple(dst.index_of(act(el)) for el in src.elements)
    return FinFunction(src.carrier, dst.carrier, table)


def poly_eval_via(method: str, pi: Bundle, x: FinSet | int) -> Presentation:
    n = _n(x)
    target = poly_eval(pi, n)
    if method == "sum":
        elements = tuple((el.base, el.fiber_datum) for el in target)
        codes = tuple(range(len(elements)))
    elif method == "composite":
        # Sigma_{!B} . Pi_pi . Delta_{!E}
        const_x = bd.delta(finset.terminal_map(pi.total), SliceObject(FinSet(1), Bundle((n,))))
        sections = bd.pi_along(pi, const_x).bundle
        elements, codes = [], []
        for e in range(sections.total.size):
            b, i = sections.decode(e)
            t = bd.pi_along_section(pi, const_x, b, i)
            elements.append((b, t))
            codes.append(target.encode(b, t))
        elements, codes = tuple(elements), tuple(codes)
    else:
        raise ValidationError(f"unknown method {method!r}; expected one of "
                              f"{', '.join(POLY_METHODS)}", "method")
    return Presentation(method, pi, n, elements,
                        FinFunction(FinSet(len(elements)), target.carrier, codes))


# -- natural transformations ----------------------------------------------------

@dataclass(frozen=True)
class NatTransform:
    """A transformation of Dirichlet functors, carried by its bundle map."""
    src: Bundle
    dst: Bundle
    carrier: BundleMap

    def __post_init__(self):
        if self.carrier.src != self.src or self.carrier.dst != self.dst:
            raise ShapeMismatch("carrier must go from src to dst", "carrier.src/dst")

    @classmethod
    def of(cls, m: BundleMap) -> NatTransform:
        return cls(m.src, m.dst, m)

    def component(self, x: FinSet | int) -> FinFunction:
        return nat_component(self, x)


@lru_cache(maxsize=65536)
def _nat_component(m: BundleMap, n: int) -> FinFunction:
    src, dst = dir_eval(m.src, n), dir_eval(m.dst, n)
    offs = _dir_offsets(m.dst, n)
    table = []
    for b, k in enumerate(m.src.fiber_sizes):
        fb = m.base_map.table[b]
        fm = m.fiber_map(b).table
        k2 = m.dst.fiber_sizes[fb]
        for h in itertools.product(range(k), repeat=n):
            table.append(offs[fb] + encode_function([fm[v] for v in h], k2))
    return FinFunction(src.carrier, dst.carrier, tuple(table))


def nat_component(t: NatTransform, x: FinSet | int) -> FinFunction:
    """``t_X: (b, h) -> (f(b), f_# . h)``."""
    return _nat_component(t.carrier, _n(x))


def probe_morphisms(probe_max: int) -> Iterator[FinFunction]:
    """All functions between sets of size <= probe_max, ordered by
    (dom size, cod size, table)."""
    for a in range(probe_max + 1):
        for b in range(probe_max + 1):
            yield from finset.all_functions(a, b)


@dataclass(frozen=True)
class ProbeReport:
    ok: bool
    squares_checked: int
    failure: str | None = None
    failing_probe: FinFunction | None = None


def check_naturality(t, probe_max: int = 3) -> ProbeReport:
    """``D'(g) . t_X' == t_X . D(g)`` for every probe ``g: X -> X'``.

    ``t`` is anything with ``src``, ``dst`` and ``component(n)``.
    """
    if probe_max < 1:
        raise ValidationError("probe_max must be >= 1", "probe_max >= 1")
    src, dst = t.src, t.dst
    checked = 0
    for g in probe_morphisms(probe_max):
        lhs = finset.compose(dir_eval_map(dst, g), t.component(g.cod.size))
        rhs = finset.compose(t.component(g.dom.size), dir_eval_map(src, g))
        checked += 1
        if lhs != rhs:
            return ProbeReport(False, checked,
                               f"naturality square for g={list(g.table)}: "
                               f"{g.dom.size}->{g.cod.size} does not commute", g)
    return ProbeReport(True, checked)


@dataclass(frozen=True)
class CartesianReport:
    by_bundle: bool
    by_probe: bool
    failing_probe: FinFunction | None = None

    @property
    def agree(self) -> bool:
        return self.by_bundle == self.by_probe


def is_cartesian_nat(t, probe_max: int = 3) -> CartesianReport:
    """Compare the bundle test with "every naturality square is a pullback"."""
    by_bundle = bd.is_cartesian(t.carrier) if hasattr(t, "carrier") else None
    src, dst = t.src, t.dst
    failing = None
    for g in probe_morphisms(probe_max):
        top, bottom = t.component(g.cod.size), t.component(g.dom.size)
        if not finset.is_pullback_square(top, dir_eval_map(src, g),
                                         dir_eval_map(dst, g), bottom):
            failing = g
            break
    return CartesianReport(by_bundle, failing is None, failing)


# -- connected limits -----------------------------------------------------------

@dataclass(frozen=True)
class LimitPreservationReport:
    ok: bool
    pushouts_checked: int
    coequalizers_checked: int
    failure: str | None = None


def pushout_comparison(pi: Bundle, f: FinFunction, g: FinFunction) -> FinFunction:
    """``D(X +_Z Y) -> D(X) x_{D(Z)} D(Y)`` from the pushout's coprojections."""
    po = finset.pushout(f, g)
    pb = finset.pullback(dir_eval_map(pi, f), dir_eval_map(pi, g))
    return pb.mediate(dir_eval_map(pi, po.q1), dir_eval_map(pi, po.q2))


def coequalizer_comparison(pi: Bundle, f: FinFunction, g: FinFunction) -> FinFunction:
    """``D(coeq(f, g)) -> eq(D(f), D(g))`` from the coequalizer's quotient map."""
    co = finset.coequalizer(f, g)
    _, incl = finset.equalizer(dir_eval_map(pi, f), dir_eval_map(pi, g))
    where = {y: i for i, y in enumerate(incl.table)}
    dq = dir_eval_map(pi, co.q)
    return FinFunction(dq.dom, incl.dom, tuple(where[y] for y in dq.table))


def check_preserves_connected_limits(pi: Bundle, probe_max: int = 3) -> LimitPreservationReport:
    """D sends every small pushout and coequalizer to a pullback / equalizer."""
    pushouts = coeqs = 0
    sizes = range(probe_max + 1)
    for z in sizes:
        for x in sizes:
            for y in sizes:
                for f in finset.all_functions(z, x):
                    for g in finset.all_functions(z, y):
                        pushouts += 1
                        if not pushout_comparison(pi, f, g).is_bijective():
                            return LimitPreservationReport(
                                False, pushouts, coeqs,
                                f"pushout of {list(f.table)}:{z}->{x} and "
                                f"{list(g.table)}:{z}->{y}")
    for x in sizes:
        for y in sizes:
            fs = list(finset.all_functions(x, y))
            for f in fs:
                for g in fs:
                    coeqs += 1
                    if not coequalizer_comparison(pi, f, g).is_bijective():
                        return LimitPreservationReport(
                            False, pushouts, coeqs,
                            f"coequalizer of {list(f.table)}, {list(g.table)}: {x}->{y}")
    return LimitPreservationReport(True, pushouts, coeqs)


# -- P after D ----------------------------------------------------------------

def compose_poly_after_dirichlet(p: Bundle, d: Bundle, cap: int | None = None) -> Bundle:
    """The bundle whose Dirichlet functor is ``P . D``.

    Base: pairs ``(b, g: E_{P,b} -> B_D)``; fiber over ``(b, g)`` has size
    ``prod_e |E_{D, g(e)}|``.
    """
    nb = d.base.size
    check_cap(sum(nb ** k for k in p.fiber_sizes), cap, "P.D base")
    sizes = []
    for k in p.fiber_sizes:
        for g in itertools.product(range(nb), repeat=k):
            sizes.append(math.prod(d.fiber_sizes[c] for c in g))
    return Bundle(tuple(sizes))


def poly_after_dirichlet_iso(p: Bundle, d: Bundle, x: FinSet | int) -> FinFunction:
    """Bijection ``P(D(X)) -> D_{P.D}(X)`` regrouping the pointwise data."""
    n = _n(x)
    result = compose_poly_after_dirichlet(p, d)
    dx = dir_eval(d, n)
    outer = poly_eval(p, dx.size)
    target = dir_eval(result, n)
    nb = d.base.size
    base_offsets = tuple(itertools.accumulate((nb ** k for k in p.fiber_sizes), initial=0))
    table = []
    for el in outer:
        parts = [dx.decode(c) for c in el.fiber_datum]
        gcode = encode_function([part.base for part in parts], nb)
        radices = [d.fiber_sizes[part.base] for part in parts]
        h = []
        for xi in range(n):
            v = 0
            for part, r in zip(parts, radices):
                v = v * r + part.fiber_datum[xi]
            h.append(v)
        table.append(target.encode(base_offsets[el.base] + gcode, h))
    return FinFunction(outer.carrier, target.carrier, tuple(table))

"""Bundle maps versus natural transformations, by exhaustive enumeration.

``enumerate_natural_families`` does not assume that a transformation is
determined by its components at sizes 0 and 1: it searches all component
tables over the probe category, pruning only with naturality constraints,
and the tests compare what it finds against the bundle maps.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

from . import bundle as bd
from . import finset
from .bundle import Bundle, BundleMap, ContraBundleMap
from .errors import EnumerationCapExceeded, ValidationError
from .finset import FinFunction, FinSet, get_cap
from .functor import (NatTransform, dir_eval_map, dir_size, nat_component,
                      poly_eval_map, poly_size, probe_morphisms)


def enumerate_covariant_maps(src: Bundle, dst: Bundle, cap: int | None = None) -> list[BundleMap]:
    return list(bd.hom(src, dst, cap))


def enumerate_contravariant_maps(src: Bundle, dst: Bundle,
                                 cap: int | None = None) -> list[ContraBundleMap]:
    return list(bd.hom_contra(src, dst, cap))


def enumerate_cartesian_maps(src: Bundle, dst: Bundle, cap: int | None = None) -> list[BundleMap]:
    return [m for m in bd.hom(src, dst, cap) if bd.is_cartesian(m)]


@dataclass(frozen=True)
class NaturalFamily:
    """Component tables ``D(n) -> D'(n)`` for every ``n <= probe_max``."""
    src: Bundle
    dst: Bundle
    probe_max: int
    components: tuple[FinFunction, ...]

    def component(self, n: int) -> FinFunction:
        return self.components[n]


# -- generic search -------------------------------------------------------------

def _search(f_size: Callable[[int], int], g_size: Callable[[int], int],
            f_act: Callable[[FinFunction], FinFunction],
            g_act: Callable[[FinFunction], FinFunction],
            probe_max: int, contravariant: bool, cap: int | None,
            constrained: bool = True) -> list[tuple[tuple[int, ...], ...]]:
    """All families ``t_n: F(n) -> G(n)``, n <= probe_max, natural for every
    probe morphism.  Constraint: ``t_tgt[F(g)[d]] == G(g)[t_src[d]]``."""
    limit = get_cap(cap)
    # (src level, tgt level, F(g) table, G(g) table)
    constraints = []
    if constrained:
        for g in probe_morphisms(probe_max):
            a, b = g.dom.size, g.cod.size
            if a == b and g.table == tuple(range(a)):
                continue
            src, tgt = (b, a) if contravariant else (a, b)
            constraints.append((src, tgt, f_act(g).table, g_act(g).table))

    results: list[tuple[tuple[int, ...], ...]] = []
    chosen: list[tuple[int, ...]] = []
    nodes = 0

    def level(n: int) -> None:
        nonlocal nodes
        if n > probe_max:
            results.append(tuple(chosen))
            return
        m = f_size(n)
        cands = [set(range(g_size(n))) for _ in range(m)]
        endo = []
        for src, tgt, ft, gt in constraints:
            if src == tgt == n:
                endo.append((ft, gt))
            elif src == n and tgt < n:
                lower = chosen[tgt]
                for d in range(m):
                    cands[d] = {c for c in cands[d] if gt[c] == lower[ft[d]]}
            elif tgt == n and src < n:
                lower = chosen[src]
                for d0, d in enumerate(ft):
                    cands[d] &= {gt[lower[d0]]}
        ordered = [sorted(c) for c in cands]
        # endo constraint (d, ft[d]) is checked once both ends are assigned
        due: list[list[tuple[int, tuple, tuple]]] = [[] for _ in range(m)]
        for ft, gt in endo:
            for d in range(m):
                due[max(d, ft[d])].append((d, ft, gt))
        table = [0] * m

        def assign(i: int) -> None:
            nonlocal nodes
            if i == m:
                chosen.append(tuple(table))
                level(n + 1)
                chosen.pop()
                return
            for c in ordered[i]:
                nodes += 1
                if nodes > limit:
                    raise EnumerationCapExceeded(nodes, limit, "natural family search")
                table[i] = c
                if all(table[ft[d]] == gt[table[d]] for d, ft, gt in due[i]):
                    assign(i + 1)

        assign(0)

    level(0)
    return results


def enumerate_natural_families(src: Bundle, dst: Bundle, probe_max: int = 3,
                               cap: int | None = None) -> list[NaturalFamily]:
    """Every family of maps ``D(n) -> D'(n)``, n <= probe_max, natural with
    respect to all functions between those sets."""
    if probe_max < 1:
        raise ValidationError("probe_max must be >= 1 so that sizes 0 and 1 are probed",
                              "probe_max >= 1")
    raw = _search(lambda n: dir_size(src, n), lambda n: dir_size(dst, n),
                  lambda g: dir_eval_map(src, g), lambda g: dir_eval_map(dst, g),
                  probe_max, True, cap)
    return [NaturalFamily(src, dst, probe_max, tuple(
        FinFunction(FinSet(dir_size(src, n)), FinSet(dir_size(dst, n)), t)
        for n, t in enumerate(tables))) for tables in raw]


def count_unconstrained_families(src: Bundle, dst: Bundle, probe_max: int = 3) -> int:
    """Diagnostic: the number of component tables with naturality dropped."""
    return math.prod(dir_size(dst, n) ** dir_size(src, n) for n in range(probe_max + 1))


def enumerate_poly_natural_families(src: Bundle, dst: Bundle, probe_max: int,
                                    cap: int | None = None) -> list[tuple[FinFunction, ...]]:
    """Families ``P(n) -> P'(n)`` natural over the probe category.

    Exact for the whole functor category once ``probe_max`` is at least the
    largest fiber of ``src``: every element of P then lives over a probe set.
    """
    raw = _search(lambda n: poly_size(src, n), lambda n: poly_size(dst, n),
                  lambda g: poly_eval_map(src, g), lambda g: poly_eval_map(dst, g),
                  probe_max, False, cap)
    return [tuple(FinFunction(FinSet(poly_size(src, n)), FinSet(poly_size(dst, n)), t)
                  for n, t in enumerate(tables)) for tables in raw]


# -- restriction and extension ----------------------------------------------------

def restrict_at_bang0(t: NaturalFamily) -> BundleMap:
    """Read the bundle map off the components at 0 and 1 (``D(0) = B``, ``D(1) = E``)."""
    t0, t1 = t.component(0), t.component(1)
    return BundleMap(t.src, t.dst, FinFunction(t.src.base, t.dst.base, t0.table),
                     FinFunction(t.src.total, t.dst.total, t1.table))


def extend_from_bang0(m: BundleMap, probe_max: int = 3) -> NaturalFamily:
    nat = NatTransform.of(m)
    return NaturalFamily(m.src, m.dst, probe_max,
                         tuple(nat_component(nat, n) for n in range(probe_max + 1)))


# -- cartesian maps on both sides --------------------------------------------------

def _bijective_contra_maps(src: Bundle, dst: Bundle) -> list[ContraBundleMap]:
    out = []
    for f in finset.all_functions(src.base, dst.base):
        if any(dst.fiber_sizes[f.table[b]] != k for b, k in enumerate(src.fiber_sizes)):
            continue
        choices = [list(finset.all_bijections(k, k)) for k in src.fiber_sizes]
        for backs in itertools.product(*choices):
            out.append(ContraBundleMap(src, dst, f, backs))
    return out


@dataclass(frozen=True)
class CartesianEquivalence:
    dir_maps: tuple[BundleMap, ...]
    poly_maps: tuple[ContraBundleMap, ...]
    pairing: tuple[int, ...]

    @property
    def is_bijective(self) -> bool:
        return (len(self.dir_maps) == len(self.poly_maps)
                and sorted(self.pairing) == list(range(len(self.poly_maps))))


def poly_dir_cartesian_equiv(src: Bundle, dst: Bundle,
                             cap: int | None = None) -> CartesianEquivalence:
    """Cartesian covariant maps paired with fiberwise-bijective contravariant
    maps by inverting every fiber map."""
    dir_maps = tuple(enumerate_cartesian_maps(src, dst, cap))
    poly_maps = tuple(_bijective_contra_maps(src, dst))
    where = {m: i for i, m in enumerate(poly_maps)}
    pairing = tuple(where.get(bd.cartesian_covariant_to_contra(m), -1) for m in dir_maps)
    return CartesianEquivalence(dir_maps, poly_maps, pairing)

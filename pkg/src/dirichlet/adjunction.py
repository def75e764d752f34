"""Exhaustive hom-set checks for the adjunctions between Set and bundles.

Each pair compares the two hom-sets of a claimed adjunction on every small
instance, builds the comparison bijection when the counts agree, and checks
that bijection is natural in the set variable.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import bundle as bd
from . import finset
from .bundle import Bundle, BundleMap
from .errors import ValidationError
from .finset import FinFunction

PAIRS = ("bangup-cod", "cod-const", "const-dom", "dom-bangdown", "zc-bangup")
MODES = ("naive", "cartesian")


@dataclass(frozen=True)
class AdjunctionInstance:
    bundle: Bundle
    x: int
    left_count: int
    right_count: int
    bijective: bool

    @property
    def ok(self) -> bool:
        return self.left_count == self.right_count and self.bijective


@dataclass
class AdjunctionReport:
    pair: str
    mode: str
    max_size: int
    left_label: str
    right_label: str
    instances: list[AdjunctionInstance] = field(default_factory=list)
    naturality_failure: str | None = None

    @property
    def counterexample(self) -> AdjunctionInstance | None:
        return next((i for i in self.instances if not i.ok), None)

    @property
    def counterexamples(self) -> list[AdjunctionInstance]:
        return [i for i in self.instances if not i.ok]

    def instance(self, fibers, x: int) -> AdjunctionInstance | None:
        fibers = tuple(fibers)
        return next((i for i in self.instances
                     if i.bundle.fiber_sizes == fibers and i.x == x), None)

    @property
    def holds(self) -> bool:
        return self.counterexample is None and self.naturality_failure is None

    def summary(self) -> str:
        ce = self.counterexample
        if ce is not None:
            return (f"{self.pair}: counterexample at bundle {list(ce.bundle.fiber_sizes)}, "
                    f"X={ce.x}: |{self.left_label}| = {ce.left_count}, "
                    f"|{self.right_label}| = {ce.right_count}")
        if self.naturality_failure:
            return f"{self.pair}: bijection not natural: {self.naturality_failure}"
        return f"{self.pair}: holds on {len(self.instances)} instances (max size {self.max_size})"


@dataclass(frozen=True)
class _PairDef:
    left_label: str
    right_label: str
    left: Callable[[Bundle, int], Iterable]
    right: Callable[[Bundle, int], Iterable]
    phi: Callable[[Bundle, int, object], object] | None
    # action of g: X -> X' on each side; "contra" means sides at X' map to X
    variance: str
    act_left: Callable[[tuple, object], object] | None = None
    act_right: Callable[[tuple, object], object] | None = None


# Elements are raw tables: a function is its image tuple, a bundle map is
# (base table, total table).  Keeps the size-3 sweep fast.

def _c(g: tuple, f: tuple) -> tuple:
    return tuple(map(g.__getitem__, f))


def _functions(dom: int, cod: int):
    return itertools.product(range(cod), repeat=dom)


def _cartesian_tables(src: Bundle, dst: Bundle):
    for f, tot in bd.hom_tables(src, dst):
        m = BundleMap(src, dst, FinFunction(src.base, dst.base, f),
                      FinFunction(src.total, dst.total, tot))
        if bd.is_cartesian(m):
            yield f, tot


def _corestrict_to_zc(pi: Bundle, x: int, m: tuple) -> tuple:
    where = {b: i for i, b in enumerate(bd.zc(pi)[1].table)}
    return tuple(where[b] for b in m[0])


def _pair_def(pair: str, mode: str) -> _PairDef:
    if pair == "bangup-cod":
        return _PairDef("Hom(!^X, pi)", "Hom(X, B)",
                     lambda pi, x: bd.hom_tables(bd.bang_up(x), pi),
                     lambda pi, x: _functions(x, pi.base.size),
                     lambda pi, x, m: m[0], "contra",
                     lambda g, m: (_c(m[0], g), ()),
                     lambda g, f: _c(f, g))
    if pair == "cod-const":
        return _PairDef("Hom(B, X)", "Hom(pi, const X)",
                     lambda pi, x: _functions(pi.base.size, x),
                     lambda pi, x: bd.hom_tables(pi, bd.const(x)),
                     lambda pi, x, f: (f, _c(f, pi.projection.table)), "co",
                     lambda g, f: _c(g, f),
                     lambda g, m: (_c(g, m[0]), _c(g, m[1])))
    if pair == "const-dom":
        return _PairDef("Hom(const X, pi)", "Hom(X, E)",
                     lambda pi, x: bd.hom_tables(bd.const(x), pi),
                     lambda pi, x: _functions(x, pi.total.size),
                     lambda pi, x, m: m[1], "contra",
                     lambda g, m: (_c(m[0], g), _c(m[1], g)),
                     lambda g, h: _c(h, g))
    if pair == "dom-bangdown":
        return _PairDef("Hom(E, X)", "Hom(pi, !_X)",
                     lambda pi, x: _functions(pi.total.size, x),
                     lambda pi, x: bd.hom_tables(pi, bd.bang_down(x)),
                     lambda pi, x, h: ((0,) * pi.base.size, h), "co",
                     lambda g, h: _c(g, h),
                     lambda g, m: (m[0], _c(g, m[1])))
    if pair == "zc-bangup" and mode == "naive":
        # no candidate bijection: the counts are compared and reported as-is
        return _PairDef("Hom(ZC pi, X)", "Hom(pi, !^X)",
                     lambda pi, x: _functions(bd.zc(pi)[0].size, x),
                     lambda pi, x: bd.hom_tables(pi, bd.bang_up(x)),
                     None, "co")
    if pair == "zc-bangup" and mode == "cartesian":
        return _PairDef("Hom_cart(!^X, pi)", "Hom(X, ZC pi)",
                     lambda pi, x: _cartesian_tables(bd.bang_up(x), pi),
                     lambda pi, x: _functions(x, bd.zc(pi)[0].size),
                     _corestrict_to_zc, "contra",
                     lambda g, m: (_c(m[0], g), ()),
                     lambda g, f: _c(f, g))
    raise ValidationError(f"unknown adjunction {pair!r} (mode {mode!r}); "
                          f"expected one of {', '.join(PAIRS)}", "known adjunction")


def _is_bijection(image: list, codomain: list) -> bool:
    seen = set(image)
    return len(seen) == len(image) == len(codomain) and seen == set(codomain)


def check_adjunction(pair: str, max_size: int, mode: str = "naive",
                     naturality: bool = True, cap: int | None = None) -> AdjunctionReport:
    """Compare both hom-sets for every bundle with base and fibers <= max_size
    and every set X with |X| <= max_size."""
    if max_size < 1:
        raise ValidationError("max_size must be >= 1", "max_size >= 1")
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}", "mode in naive|cartesian")
    pd = _pair_def(pair, mode)
    report = AdjunctionReport(pair, mode, max_size, pd.left_label, pd.right_label)
    for pi in bd.all_bundles(max_size, max_size):
        finset.check_cap(pi.total.size ** max_size, cap, "adjunction probe")
        sides = {}
        for x in range(max_size + 1):
            left, right = list(pd.left(pi, x)), list(pd.right(pi, x))
            # without a candidate map, equal counts are all that can be asked
            bij = pd.phi is None and len(left) == len(right)
            if pd.phi is not None and len(left) == len(right):
                image = [pd.phi(pi, x, a) for a in left]
                bij = _is_bijection(image, right)
                sides[x] = dict(zip(left, image))
            report.instances.append(AdjunctionInstance(pi, x, len(left), len(right), bij))
        if naturality and report.naturality_failure is None and pd.act_left is not None \
                and len(sides) == max_size + 1:
            report.naturality_failure = _check_natural(pd, pi, sides, max_size)
    return report


def _check_natural(pd: _PairDef, pi: Bundle, sides: dict, max_size: int) -> str | None:
    """phi . act_left(g) == act_right(g) . phi for every g: X -> X'."""
    for x in range(max_size + 1):
        for x2 in range(max_size + 1):
            for g in _functions(x, x2):
                src = x2 if pd.variance == "contra" else x
                dst = x if pd.variance == "contra" else x2
                phi_src, phi_dst = sides[src], sides[dst]
                for a, phi_a in phi_src.items():
                    if phi_dst[pd.act_left(g, a)] != pd.act_right(g, phi_a):
                        return f"bundle {list(pi.fiber_sizes)}, g={list(g)}: {x}->{x2}"
    return None

"""The verification suite behind ``dirichlet verify``.

Each check is exhaustive over a corpus of small bundles and returns a
``CheckResult``; ``run_suite`` runs them in check-id order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from . import adjunction
from . import bundle as bd
from . import equivalence as eq
from . import finset
from . import functor as fn
from .bundle import Bundle
from .series import eval_series, series_of


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.check_id} {self.title}: {self.detail}"


def corpus(max_size: int) -> list[Bundle]:
    """Every bundle with base and fibers of size <= max_size."""
    return list(bd.all_bundles(max_size, max_size))


def _fail(check_id: str, title: str, detail: str) -> CheckResult:
    return CheckResult(check_id, title, False, detail)


def check_presentations(max_size: int = 3) -> CheckResult:
    cid, title = "presentations", "five presentations of D agree naturally"
    checked = 0
    for pi in corpus(max_size):
        sizes = {}
        for n in range(max_size + 1):
            want = fn.dir_size(pi, n)
            for method in fn.DIR_METHODS:
                pres = _presentation(method, pi, n)
                if len(pres.elements) != want or not pres.to_sum.is_bijective():
                    return _fail(cid, title, f"{method} at {pi!r}, |X|={n}: "
                                             f"{len(pres.elements)} elements vs {want}")
            sizes[n] = want
        for g in fn.probe_morphisms(max_size):
            dg = fn.dir_eval_map(pi, g)
            for method in fn.DIR_METHODS:
                act = fn.presentation_map(method, pi, g)
                lhs = finset.compose(_presentation(method, pi, g.dom.size).to_sum, act)
                rhs = finset.compose(dg, _presentation(method, pi, g.cod.size).to_sum)
                checked += 1
                if lhs != rhs:
                    return _fail(cid, title, f"{method} bijection not natural at {pi!r}, "
                                             f"g={list(g.table)}")
    return CheckResult(cid, title, True, f"{checked} naturality squares over "
                                         f"{len(corpus(max_size))} bundles")


def _presentation(method: str, pi: Bundle, n: int) -> fn.Presentation:
    return fn.dir_eval_via(method, pi, n)


def check_equivalence(corpus_size: int = 2, probe_max: int = 3) -> CheckResult:
    cid, title = "equivalence", "natural families = bundle maps, round trips"
    total = 0
    for src, dst in itertools.product(corpus(corpus_size), repeat=2):
        maps = eq.enumerate_covariant_maps(src, dst)
        fams = eq.enumerate_natural_families(src, dst, probe_max)
        if len(maps) != len(fams):
            return _fail(cid, title, f"{src!r} -> {dst!r}: {len(fams)} families, "
                                     f"{len(maps)} bundle maps")
        for m in maps:
            if eq.restrict_at_bang0(eq.extend_from_bang0(m, probe_max)) != m:
                return _fail(cid, title, f"restrict . extend != id at {m!r}")
        for t in fams:
            if eq.extend_from_bang0(eq.restrict_at_bang0(t), probe_max) != t:
                return _fail(cid, title, f"extend . restrict != id for a family "
                                         f"{src!r} -> {dst!r}")
        total += len(maps)
    witness = len(eq.enumerate_natural_families(Bundle((2,)), Bundle((1, 3)), probe_max))
    witness_maps = len(eq.enumerate_covariant_maps(Bundle((2,)), Bundle((1, 3))))
    if (witness, witness_maps) != (10, 10):
        return _fail(cid, title, f"witness [2] -> [1,3]: {witness} families, "
                                 f"{witness_maps} maps (expected 10, 10)")
    return CheckResult(cid, title, True, f"{total} maps matched; witness [2]->[1,3]: 10 = 10")


def check_cartesian(corpus_size: int = 2, probe_max: int = 3) -> CheckResult:
    cid, title = "cartesian", "cartesian by bundle iff by probe"
    seen = 0
    for src, dst in itertools.product(corpus(corpus_size), repeat=2):
        maps = eq.enumerate_covariant_maps(src, dst)
        by_squares = 0
        for m in maps:
            rep = fn.is_cartesian_nat(fn.NatTransform.of(m), probe_max)
            if not rep.agree:
                return _fail(cid, title, f"{m!r}: by_bundle={rep.by_bundle}, "
                                         f"by_probe={rep.by_probe}")
            by_squares += bd.is_cartesian_by_pullback(m)
            seen += 1
        cart = eq.enumerate_cartesian_maps(src, dst)
        if len(cart) != by_squares:
            return _fail(cid, title, f"{src!r} -> {dst!r}: {len(cart)} cartesian maps, "
                                     f"{by_squares} pullback squares")
    return CheckResult(cid, title, True, f"{seen} maps agree; counts match pullback squares")


def check_poly_dir(corpus_size: int = 2) -> CheckResult:
    cid, title = "poly-dir", "Poly_cart ~ Dir_cart by fiberwise inversion"
    bundles = corpus(corpus_size)
    equivs = {}
    for src, dst in itertools.product(bundles, repeat=2):
        e = eq.poly_dir_cartesian_equiv(src, dst)
        if not e.is_bijective:
            return _fail(cid, title, f"{src!r} -> {dst!r}: {len(e.dir_maps)} vs "
                                     f"{len(e.poly_maps)}, not a bijection")
        equivs[src, dst] = e
    for pi in bundles:
        if bd.cartesian_covariant_to_contra(bd.identity_map(pi)) != bd.identity_contra(pi):
            return _fail(cid, title, f"identity not preserved at {pi!r}")
    composites = 0
    for a, b, c in itertools.product(bundles, repeat=3):
        for f in equivs[a, b].dir_maps:
            for g in equivs[b, c].dir_maps:
                lhs = bd.cartesian_covariant_to_contra(bd.compose_maps(g, f))
                rhs = bd.compose_contra(bd.cartesian_covariant_to_contra(g),
                                        bd.cartesian_covariant_to_contra(f))
                composites += 1
                if lhs != rhs:
                    return _fail(cid, title, f"composition not preserved: {g!r} . {f!r}")
    rep = eq.poly_dir_cartesian_equiv(Bundle((3,)), Bundle((3,)))
    if (len(rep.dir_maps), len(rep.poly_maps)) != (6, 6):
        return _fail(cid, title, f"representable witness n=3: {len(rep.dir_maps)}, "
                                 f"{len(rep.poly_maps)} (expected 6, 6)")
    return CheckResult(cid, title, True, f"{composites} composites preserved; witness n=3: 6 = 6")


def check_factorization(corpus_size: int = 2) -> CheckResult:
    cid, title = "factorization", "vertical / cartesian factorization"
    seen = 0
    for src, dst in itertools.product(corpus(corpus_size), repeat=2):
        for m in bd.hom(src, dst):
            fac = bd.factor_vertical_cartesian(m)
            if bd.compose_maps(fac.cartesian, fac.vertical) != m:
                return _fail(cid, title, f"recomposition differs at {m!r}")
            if not bd.is_cartesian(fac.cartesian):
                return _fail(cid, title, f"cartesian part not cartesian at {m!r}")
            if fac.vertical.base_map != finset.identity(src.base):
                return _fail(cid, title, f"vertical part moves the base at {m!r}")
            if bd.count_factorizations(m) != 1:
                return _fail(cid, title, f"factorization not unique at {m!r}")
            seen += 1
    return CheckResult(cid, title, True, f"{seen} maps factor uniquely")


def check_connected_limits(corpus_size: int = 2, probe_max: int = 3) -> CheckResult:
    cid, title = "connected-limits", "D sends pushouts/coequalizers to limits"
    pushouts = coeqs = 0
    for pi in corpus(corpus_size):
        rep = fn.check_preserves_connected_limits(pi, probe_max)
        if not rep.ok:
            return _fail(cid, title, f"{pi!r}: {rep.failure}")
        pushouts += rep.pushouts_checked
        coeqs += rep.coequalizers_checked
    pi = Bundle((2, 3))
    empty = finset.initial_map(1)
    comp = fn.pushout_comparison(pi, empty, empty)
    if (comp.dom.size, comp.cod.size) != (13, 13) or not comp.is_bijective():
        return _fail(cid, title, f"witness [2,3] pushout 1<-0->1: {comp.dom.size} vs "
                                 f"{comp.cod.size}")
    return CheckResult(cid, title, True, f"{pushouts} pushouts, {coeqs} coequalizers; "
                                         f"witness [2,3]: 13 = 13")


def check_series(corpus_size: int = 2, max_x: int = 6) -> CheckResult:
    cid, title = "series", "series evaluation matches evaluators"
    for pi in corpus(corpus_size):
        ds, ps = series_of(pi, "dirichlet"), series_of(pi, "polynomial")
        for x in range(max_x + 1):
            if eval_series(ds, x) != fn.dir_eval(pi, x).size:
                return _fail(cid, title, f"dirichlet series of {pi!r} at {x}")
            if eval_series(ps, x) != fn.poly_eval(pi, x).size:
                return _fail(cid, title, f"polynomial series of {pi!r} at {x}")
    golden = series_of(Bundle((2, 3, 3)), "dirichlet").render()
    if golden != "2^X + 2·3^X":
        return _fail(cid, title, f"golden rendering is {golden!r}")
    return CheckResult(cid, title, True, f"x <= {max_x}; golden '2^X + 2·3^X'")


def check_adjunctions(max_size: int = 3) -> CheckResult:
    cid, title = "adjunctions", "adjoint sextuple hom-set bijections"
    for pair in adjunction.PAIRS[:4]:
        rep = adjunction.check_adjunction(pair, max_size)
        if not rep.holds:
            return _fail(cid, title, rep.summary())
    zc = adjunction.check_adjunction("zc-bangup", max_size)
    inst = zc.instance((1,), 1)
    if inst is None or (inst.left_count, inst.right_count) != (1, 0):
        return _fail(cid, title, "expected ZC counterexample at [1], X=1 (1 != 0) "
                                 "was not found")
    return CheckResult(cid, title, True, "four adjunctions hold; ZC counterexample "
                                         "[1], X=1: 1 != 0 found as expected")


def check_poly_after_dirichlet(corpus_size: int = 2, max_x: int = 3) -> CheckResult:
    cid, title = "poly-after-dirichlet", "P . D is the extent of the synthesized bundle"
    for p, d in itertools.product(corpus(corpus_size), repeat=2):
        result = fn.compose_poly_after_dirichlet(p, d)
        isos = {}
        for n in range(max_x + 1):
            want = fn.poly_eval(p, fn.dir_eval(d, n).size).size
            if fn.dir_eval(result, n).size != want:
                return _fail(cid, title, f"p={p!r}, d={d!r}, |X|={n}")
            isos[n] = fn.poly_after_dirichlet_iso(p, d, n)
            if not isos[n].is_bijective():
                return _fail(cid, title, f"iso not bijective at p={p!r}, d={d!r}, |X|={n}")
        for g in fn.probe_morphisms(max_x):
            pdg = fn.poly_eval_map(p, fn.dir_eval_map(d, g))
            lhs = finset.compose(isos[g.dom.size], pdg)
            rhs = finset.compose(fn.dir_eval_map(result, g), isos[g.cod.size])
            if lhs != rhs:
                return _fail(cid, title, f"iso not natural at p={p!r}, d={d!r}, "
                                         f"g={list(g.table)}")
    w = fn.compose_poly_after_dirichlet(Bundle((2,)), Bundle((2,)))
    if w != Bundle((4,)):
        return _fail(cid, title, f"witness p=[2], d=[2] gave {w!r}")
    return CheckResult(cid, title, True, "sizes and naturality match; witness [2].[2] = 4^X")


def check_functor_laws(max_size: int = 3) -> CheckResult:
    cid, title = "functor-laws", "identity and composition laws"
    probes = list(fn.probe_morphisms(max_size))
    by_dom: dict[int, list] = {}
    for g in probes:
        by_dom.setdefault(g.dom.size, []).append(g)
    for pi in corpus(max_size):
        for n in range(max_size + 1):
            if fn.dir_eval_map(pi, finset.identity(n)) != finset.identity(fn.dir_size(pi, n)):
                return _fail(cid, title, f"D(id) != id at {pi!r}, {n}")
            if fn.poly_eval_map(pi, finset.identity(n)) != finset.identity(fn.poly_size(pi, n)):
                return _fail(cid, title, f"P(id) != id at {pi!r}, {n}")
        for g in probes:
            for h in by_dom[g.cod.size]:
                hg = finset.compose(h, g)
                if fn.dir_eval_map(pi, hg) != finset.compose(fn.dir_eval_map(pi, g),
                                                             fn.dir_eval_map(pi, h)):
                    return _fail(cid, title, f"D(h.g) != D(g).D(h) at {pi!r}")
                if fn.poly_eval_map(pi, hg) != finset.compose(fn.poly_eval_map(pi, h),
                                                              fn.poly_eval_map(pi, g)):
                    return _fail(cid, title, f"P(h.g) != P(h).P(g) at {pi!r}")
    return CheckResult(cid, title, True, f"{len(probes)} probe maps, bundles <= {max_size}")


CHECKS: dict[str, Callable[[int, int], CheckResult]] = {
    "presentations": lambda m, p: check_presentations(m),
    "equivalence": lambda m, p: check_equivalence(m, p),
    "cartesian": lambda m, p: check_cartesian(m, p),
    "poly-dir": lambda m, p: check_poly_dir(m),
    "factorization": lambda m, p: check_factorization(m),
    "connected-limits": lambda m, p: check_connected_limits(m, p),
    "series": lambda m, p: check_series(m),
    "adjunctions": lambda m, p: check_adjunctions(m),
    "poly-after-dirichlet": lambda m, p: check_poly_after_dirichlet(m, p),
    "functor-laws": lambda m, p: check_functor_laws(m),
}


def run_suite(max_size: int = 2, probe_max: int = 3,
              only: list[str] | None = None) -> list[CheckResult]:
    ids = only or list(CHECKS)
    return [CHECKS[i](max_size, probe_max) for i in ids]

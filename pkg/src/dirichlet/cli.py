"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input or validation error,
3 enumeration cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from . import adjunction
from . import bundle as bd
from . import equivalence as eq
from . import finset
from . import functor as fn
from . import io
from .errors import DirichletError, EnumerationCapExceeded, ValidationError
from .series import KINDS, CardinalitySeries, eval_series, series_of
from .verify import CHECKS, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


@dataclass(frozen=True)
class CliConfig:
    command: str
    cap: int
    probe_max: int
    output: str

    def __post_init__(self):
        if self.cap < 1:
            raise ValidationError(f"--cap {self.cap} must be >= 1", "cap >= 1")
        if self.probe_max < 1:
            raise ValidationError(f"--probe-max {self.probe_max} must be >= 1",
                                  "probe_max >= 1")


class _Out:
    def __init__(self, cfg: CliConfig):
        self.cfg = cfg

    def emit(self, text: str, machine) -> None:
        if self.cfg.output == "machine":
            print(json.dumps(machine, sort_keys=True, ensure_ascii=False))
        else:
            print(text)


def _map_line(m: bd.BundleMap) -> str:
    return f"base={list(m.base_map.table)} total={list(m.total_map.table)}"


def _contra_line(m: bd.ContraBundleMap) -> str:
    backs = [list(f.table) for f in m.fiber_back]
    return f"base={list(m.base_map.table)} fiber_back={backs}"


def _contra_json(m: bd.ContraBundleMap) -> dict:
    return {"base_map": list(m.base_map.table),
            "fiber_back": [list(f.table) for f in m.fiber_back]}


# -- commands -----------------------------------------------------------------

def cmd_eval_dirichlet(args, cfg, out) -> int:
    pi = io.load_bundle(args.bundle)
    pres = fn.dir_eval_via(args.method, pi, args.size)
    size = len(pres.elements)
    if args.elements:
        target = fn.dir_eval(pi, args.size)
        rows = [target.decode(c) for c in sorted(pres.to_sum.table)]
        text = "\n".join([str(size)] + [f"{i}: b={el.base} h={list(el.fiber_datum)}"
                                         for i, el in enumerate(rows)])
        out.emit(text, {"method": args.method, "size": size,
                        "elements": [[el.base, list(el.fiber_datum)] for el in rows]})
    else:
        out.emit(str(size), {"method": args.method, "size": size})
    return EXIT_OK


def cmd_eval_poly(args, cfg, out) -> int:
    pi = io.load_bundle(args.bundle)
    pres = fn.poly_eval_via(args.method, pi, args.size)
    size = len(pres.elements)
    if args.elements:
        target = fn.poly_eval(pi, args.size)
        rows = [target.decode(c) for c in sorted(pres.to_sum.table)]
        text = "\n".join([str(size)] + [f"{i}: b={el.base} t={list(el.fiber_datum)}"
                                         for i, el in enumerate(rows)])
        out.emit(text, {"method": args.method, "size": size,
                        "elements": [[el.base, list(el.fiber_datum)] for el in rows]})
    else:
        out.emit(str(size), {"method": args.method, "size": size})
    return EXIT_OK


def cmd_series(args, cfg, out) -> int:
    s = series_of(io.load_bundle(args.bundle), args.kind)
    out.emit(s.render(), s.to_json())
    return EXIT_OK


def cmd_eval_series(args, cfg, out) -> int:
    if args.series:
        s = CardinalitySeries.from_json(io.read_json(args.series))
    elif args.bundle:
        s = series_of(io.load_bundle(args.bundle), args.kind)
    else:
        raise ValidationError("eval-series needs --bundle or --series", "input given")
    value = eval_series(s, args.x)
    out.emit(str(value), {"kind": s.kind, "x": args.x, "value": value})
    return EXIT_OK


def cmd_enum_maps(args, cfg, out) -> int:
    src, dst = io.load_bundle(args.src), io.load_bundle(args.dst)
    if args.variant == "contravariant":
        maps = eq.enumerate_contravariant_maps(src, dst)
        out.emit("\n".join([f"count: {len(maps)}"] + [_contra_line(m) for m in maps]),
                 {"variant": args.variant, "count": len(maps),
                  "maps": [_contra_json(m) for m in maps]})
        return EXIT_OK
    if args.variant == "cartesian":
        maps = eq.enumerate_cartesian_maps(src, dst)
    else:
        maps = eq.enumerate_covariant_maps(src, dst)
    out.emit("\n".join([f"count: {len(maps)}"] + [_map_line(m) for m in maps]),
             {"variant": args.variant, "count": len(maps),
              "maps": [io.map_to_json(m) for m in maps]})
    return EXIT_OK


def cmd_enum_nats(args, cfg, out) -> int:
    src, dst = io.load_bundle(args.src), io.load_bundle(args.dst)
    fams = eq.enumerate_natural_families(src, dst, cfg.probe_max)
    maps = [eq.restrict_at_bang0(t) for t in fams]
    lines = [f"count: {len(fams)} (probe_max {cfg.probe_max})"]
    lines += [f"at !0: {_map_line(m)}" for m in maps]
    out.emit("\n".join(lines), {"count": len(fams), "probe_max": cfg.probe_max,
                                "restrictions": [io.map_to_json(m) for m in maps]})
    return EXIT_OK


def cmd_factor(args, cfg, out) -> int:
    m = io.load_map(args.map)
    fac = bd.factor_vertical_cartesian(m)
    text = "\n".join([f"vertical:  {fac.vertical.src.fiber_sizes} -> "
                      f"{fac.vertical.dst.fiber_sizes} {_map_line(fac.vertical)}",
                      f"cartesian: {fac.cartesian.src.fiber_sizes} -> "
                      f"{fac.cartesian.dst.fiber_sizes} {_map_line(fac.cartesian)}"])
    out.emit(text, {"vertical": io.map_to_json(fac.vertical),
                    "cartesian": io.map_to_json(fac.cartesian)})
    return EXIT_OK


def cmd_check(args, cfg, out) -> int:
    prop = args.property
    if prop == "connected-limits":
        if not args.bundle:
            raise ValidationError("--property connected-limits needs --bundle", "input given")
        rep = fn.check_preserves_connected_limits(io.load_bundle(args.bundle), cfg.probe_max)
        detail = (f"{rep.pushouts_checked} pushouts, {rep.coequalizers_checked} coequalizers"
                  if rep.ok else rep.failure)
        return _verdict(out, prop, rep.ok, detail)
    if not args.map:
        raise ValidationError(f"--property {prop} needs --map", "input given")
    if prop == "commutes":
        src, dst, base, total = io.load_map(args.map, check=False)
        try:
            bd.BundleMap(src, dst, base, total)
        except DirichletError as exc:
            return _verdict(out, prop, False, str(exc))
        return _verdict(out, prop, True, "square commutes")
    m = io.load_map(args.map)
    nat = fn.NatTransform.of(m)
    if prop == "cartesian":
        rep = fn.is_cartesian_nat(nat, cfg.probe_max)
        by_square = bd.is_cartesian_by_pullback(m)
        ok = rep.by_bundle and rep.by_probe and by_square
        detail = f"by_bundle={rep.by_bundle} by_pullback={by_square} by_probe={rep.by_probe}"
        if rep.failing_probe is not None:
            g = rep.failing_probe
            detail += f"; first non-pullback square at g={list(g.table)}: {g.dom.size}->{g.cod.size}"
        return _verdict(out, prop, ok, detail)
    if prop == "naturality":
        rep = fn.check_naturality(nat, cfg.probe_max)
        return _verdict(out, prop, rep.ok, rep.failure or f"{rep.squares_checked} squares commute")
    raise ValidationError(f"unknown property {prop!r}", "property")


def _verdict(out: _Out, prop: str, ok: bool, detail: str) -> int:
    out.emit(f"{'PASS' if ok else 'FAIL'} {prop}: {detail}",
             {"property": prop, "passed": ok, "detail": detail})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_compose_pd(args, cfg, out) -> int:
    p, d = io.load_bundle(args.poly), io.load_bundle(args.dirichlet)
    result = fn.compose_poly_after_dirichlet(p, d)
    out.emit(json.dumps(io.bundle_to_json(result)), io.bundle_to_json(result))
    return EXIT_OK


def cmd_adjoints(args, cfg, out) -> int:
    data = {}
    lines = []
    if args.bundle:
        pi = io.load_bundle(args.bundle)
        z, incl = bd.zc(pi)
        data.update(dom=bd.dom(pi).size, cod=bd.cod(pi).size, zc=z.size,
                    zc_inclusion=list(incl.table))
        lines += [f"dom: {bd.dom(pi).size}", f"cod: {bd.cod(pi).size}",
                  f"zc: {z.size} inclusion={list(incl.table)}"]
    if args.set is not None:
        x = args.set
        for name, b in (("const", bd.const(x)), ("bang_up", bd.bang_up(x)),
                        ("bang_down", bd.bang_down(x))):
            data[name] = io.bundle_to_json(b)
            lines.append(f"{name}({x}): fibers={list(b.fiber_sizes)}")
    if not lines:
        raise ValidationError("adjoints needs --bundle and/or --set", "input given")
    out.emit("\n".join(lines), data)
    return EXIT_OK


def cmd_adjunction_check(args, cfg, out) -> int:
    rep = adjunction.check_adjunction(args.pair, args.max_size, args.mode)
    ce = rep.counterexample
    data = {"pair": rep.pair, "mode": rep.mode, "holds": rep.holds,
            "instances": len(rep.instances),
            "counterexample": None if ce is None else {
                "fibers": list(ce.bundle.fiber_sizes), "x": ce.x,
                "left": ce.left_count, "right": ce.right_count},
            "naturality_failure": rep.naturality_failure}
    out.emit(rep.summary(), data)
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_verify(args, cfg, out) -> int:
    results = run_suite(args.max_size, cfg.probe_max, args.check)
    out.emit("\n".join(r.line() for r in results),
             [{"id": r.check_id, "passed": r.passed, "detail": r.detail} for r in results])
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# -- parser -------------------------------------------------------------------

def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"{value} must be >= 0")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=_positive, default=None,
                        help="enumeration cap (default: $DIRICHLET_ENUM_CAP or 10^6)")
    common.add_argument("--probe-max", type=_positive, default=3)
    common.add_argument("--format", choices=("text", "machine"), default="text")

    parser = argparse.ArgumentParser(prog="dirichlet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("eval-dirichlet", cmd_eval_dirichlet, "size of D(X)")
    p.add_argument("--bundle", required=True)
    p.add_argument("--size", type=_nonneg, required=True)
    p.add_argument("--method", choices=fn.DIR_METHODS, default="sum")
    p.add_argument("--elements", action="store_true", help="also list the elements")

    p = add("eval-poly", cmd_eval_poly, "size of P(X)")
    p.add_argument("--bundle", required=True)
    p.add_argument("--size", type=_nonneg, required=True)
    p.add_argument("--method", choices=fn.POLY_METHODS, default="sum")
    p.add_argument("--elements", action="store_true")

    p = add("series", cmd_series, "render the cardinality series")
    p.add_argument("--bundle", required=True)
    p.add_argument("--kind", choices=KINDS, default="dirichlet")

    p = add("eval-series", cmd_eval_series, "evaluate a series at |X| = x")
    p.add_argument("--bundle")
    p.add_argument("--series", help="series file in machine form")
    p.add_argument("--kind", choices=KINDS, default="dirichlet")
    p.add_argument("--x", type=_nonneg, required=True)

    p = add("enum-maps", cmd_enum_maps, "enumerate bundle maps")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--variant", choices=("covariant", "contravariant", "cartesian"),
                   default="covariant")

    p = add("enum-nats", cmd_enum_nats, "enumerate natural families over the probe")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)

    p = add("factor", cmd_factor, "vertical / cartesian factorization of a map")
    p.add_argument("--map", required=True)

    p = add("check", cmd_check, "check a property of a map or bundle")
    p.add_argument("--property", required=True,
                   choices=("commutes", "cartesian", "naturality", "connected-limits"))
    p.add_argument("--map")
    p.add_argument("--bundle")

    p = add("compose-pd", cmd_compose_pd, "bundle of P after D")
    p.add_argument("--poly", required=True)
    p.add_argument("--dirichlet", required=True)

    p = add("adjoints", cmd_adjoints, "the six adjoint functors on a bundle or set")
    p.add_argument("--bundle")
    p.add_argument("--set", type=_nonneg)

    p = add("adjunction-check", cmd_adjunction_check, "exhaustive hom-set comparison")
    p.add_argument("--pair", required=True, choices=adjunction.PAIRS)
    p.add_argument("--max-size", type=_positive, default=2)
    p.add_argument("--mode", choices=adjunction.MODES, default="naive")

    p = add("verify", cmd_verify, "run the verification suite")
    p.add_argument("--max-size", type=_positive, default=2)
    p.add_argument("--check", action="append", choices=list(CHECKS),
                   help="run only this check (repeatable)")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        cfg = CliConfig(args.command, finset.get_cap(args.cap), args.probe_max, args.format)
        with finset.enumeration_cap(cfg.cap):
            return args.func(args, cfg, _Out(cfg))
    except EnumerationCapExceeded as exc:
        print(f"error: {exc} [invariant: {exc.invariant}]", file=sys.stderr)
        return EXIT_CAP
    except DirichletError as exc:
        print(f"error: {exc} [invariant: {exc.invariant}]", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

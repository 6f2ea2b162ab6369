"""Command-line front end.

Every report is a sequence of ``key value`` lines: first ``command`` and the
resolved ``config.*`` settings, then the results.  Exit status: 0 success or
a true/consistent verdict, 1 a false/violated verdict, 2 an input error,
3 a budget ran out.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from . import embed, extraction, moduli, schreier, wellfounded, zschreier
from .formats import (
    ParseError,
    format_metric_space,
    format_modulus,
    format_rational,
    parse_family,
    parse_map,
    parse_metric_space,
    parse_modulus,
    parse_relation,
)
from .ordinal import add, classify, compare, fundamental_sequence, omega_pow, parse_ordinal

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _ordinal(text: str):
    try:
        return parse_ordinal(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _finset(text: str):
    try:
        return schreier.parse_finset(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _yes(flag: bool) -> str:
    return "true" if flag else "false"


def _positive(name: str, value: int):
    if value < 1:
        raise InputError(f"--{name} must be >= 1")


Report = List[Tuple[str, object]]


def cmd_ordinal(args) -> Tuple[int, Report]:
    a = _ordinal(args.a)
    if args.action == "cmp":
        return EXIT_OK, [("result", compare(a, _ordinal(args.b)))]
    if args.action == "add":
        return EXIT_OK, [("result", add(a, _ordinal(args.b)))]
    if args.action == "pow":
        return EXIT_OK, [("result", omega_pow(a))]
    if args.action == "classify":
        kind, pred = classify(a)
        out = [("kind", kind)]
        if pred is not None:
            out.append(("predecessor", pred))
        return EXIT_OK, out
    # fund
    if classify(a)[0] != "limit":
        raise InputError(f"{a} is not a limit ordinal")
    _positive("index", args.index)
    return EXIT_OK, [("result", fundamental_sequence(a, args.index))]


def cmd_schreier(args) -> Tuple[int, Report]:
    alpha = _ordinal(args.alpha)
    if args.action == "member":
        ok = schreier.member(_finset(args.set), alpha)
        return (EXIT_OK if ok else EXIT_FALSE), [("member", _yes(ok))]
    if args.action == "enum":
        _positive("N", args.N)
        sets = schreier.enumerate_truncated(alpha, args.N)
        return EXIT_OK, [("count", len(sets))] + [("set", schreier.format_finset(s)) for s in sets]
    a = _finset(args.set)
    if classify(alpha)[0] != "successor":
        raise InputError("decompose needs a successor --alpha")
    if not a:
        raise InputError("decompose needs a non-empty --set")
    blocks = schreier.decompose(a, alpha)
    if blocks is None:
        return EXIT_FALSE, [("decomposable", "false")]
    return EXIT_OK, [
        ("decomposable", "true"),
        ("blocks", " ".join(schreier.format_finset(b) for b in blocks)),
    ]


def cmd_rank(args) -> Tuple[int, Report]:
    if args.action == "relation":
        rel = parse_relation(_read(args.file))
        if not wellfounded.is_well_founded(rel):
            return EXIT_FALSE, [("well_founded", "false")]
        rho = wellfounded.rank_values(rel)
        out: Report = [("well_founded", "true"), ("rank", wellfounded.rank(rel))]
        out += [("rho", f"{x} {rho[x]}") for x in rel.nodes]
        return EXIT_OK, out
    alpha = _ordinal(args.alpha)
    _positive("N", args.N)
    _positive("budget", args.budget)
    try:
        rel = schreier.truncated_relation(alpha, args.N, budget=args.budget)
    except wellfounded.BudgetExceeded as exc:
        return EXIT_BUDGET, [("exhausted", "true"), ("error", exc)]
    return EXIT_OK, [("nodes", len(rel)), ("edges", len(rel.edges)), ("rank", wellfounded.rank(rel))]


def _instance(args):
    x = parse_metric_space(_read(args.x))
    e = parse_metric_space(_read(args.e))
    return x, e


def _modulus_lines(name: str, mod: moduli.Modulus) -> Report:
    return [(name, f"{c} {format_rational(v)}") for c, v in mod.items()]


def cmd_moduli(args) -> Tuple[int, Report]:
    if args.action == "classify":
        kappa = parse_modulus(_read(args.kappa))
        omega = parse_modulus(_read(args.omega))
        if kappa.window != omega.window:
            raise InputError(f"window mismatch: {kappa.window} vs {omega.window}")
        v = moduli.classify(kappa, omega, args.family)
        out: Report = [("verdict", v.status)]
        if v.witness is not None:
            out.append(("witness", format_rational(v.witness)))
        if v.constants is not None:
            out += [("c", format_rational(v.constants[0])), ("C", format_rational(v.constants[1]))]
        return (EXIT_FALSE if v.status == "violated" else EXIT_OK), out

    x, e = _instance(args)
    phi = parse_map(_read(args.map))
    if args.action == "compute":
        if args.window is None:
            args.window = moduli.covering_window(x)
        window = args.window
        kappa = moduli.compression(phi, x, e, window)
        omega = moduli.expansion(phi, x, e, window)
        if args.kappa_out:
            Path(args.kappa_out).write_text(format_modulus(kappa))
        if args.omega_out:
            Path(args.omega_out).write_text(format_modulus(omega))
        return EXIT_OK, [("window", window)] + _modulus_lines("kappa", kappa) + _modulus_lines("omega", omega)

    kappa = parse_modulus(_read(args.kappa))
    omega = parse_modulus(_read(args.omega))
    subset = args.subset.split(",") if args.subset else None
    res = moduli.sandwich_check(phi, kappa, omega, x, e, subset)
    if res:
        return EXIT_OK, [("holds", "true")]
    a, b = res.pair
    return EXIT_FALSE, [
        ("holds", "false"),
        ("violation", f"{a} {b} {res.side}"),
        ("bound", format_rational(res.bound)),
        ("image_distance", format_rational(res.image_distance)),
    ]


def _default_moduli(args, window):
    kappa = parse_modulus(_read(args.kappa)) if args.kappa else moduli.grid_identity(window)
    omega = parse_modulus(_read(args.omega)) if args.omega else moduli.grid_identity(window)
    return kappa, omega


def cmd_embed(args) -> Tuple[int, Report]:
    if args.action == "search":
        _positive("budget", args.budget)
        x, e = _instance(args)
        kappa = parse_modulus(_read(args.kappa))
        omega = parse_modulus(_read(args.omega))
        res = embed.extension_search(x, e, kappa, omega, args.budget)
        out: Report = [
            ("points", len(x)),
            ("max_depth", res.max_depth),
            ("witness", " ".join(res.witness.labels(e)) or "-"),
            ("exhausted", _yes(res.exhausted)),
            ("nodes_visited", res.nodes_visited),
            ("embeds", _yes(res.max_depth == len(x)) if res.max_depth == len(x) or not res.exhausted else "unknown"),
        ]
        if res.exhausted and res.max_depth < len(x):
            return EXIT_BUDGET, out
        return (EXIT_OK if res.max_depth == len(x) else EXIT_FALSE), out

    alpha = _ordinal(args.alpha)
    _positive("N", args.N)
    _positive("coeff-bound", args.coeff_bound)
    if args.window is None:
        args.window = 2 * args.coeff_bound
    window = args.window
    points = zschreier.enumerate_points(alpha, args.N, args.coeff_bound)
    if args.e:
        e = parse_metric_space(_read(args.e))
        raw = parse_map(_read(args.map)) if args.map else {}
        try:
            phi = {zschreier.LatticeVector.parse(k): v for k, v in raw.items()}
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        if args.map:
            raise InputError("--map needs --e")
        e = zschreier.to_metric_space(points)
        phi = {p: str(p) for p in points}
    kappa, omega = _default_moduli(args, window)
    cert = embed.rank_lower_bound_certificate(alpha, args.N, args.coeff_bound, phi, e, kappa, omega)
    out = [
        ("points", len(points)),
        ("verified", _yes(cert.verified)),
        ("certified_rank", "none" if cert.certified_rank is None else cert.certified_rank),
    ]
    if cert.failure is not None:
        u, v = cert.failure.pair
        out += [
            ("failed_support", schreier.format_finset(cert.failed_support)),
            ("violation", f"[{u}] [{v}] {cert.failure.side}"),
        ]
    return (EXIT_OK if cert.verified else EXIT_FALSE), out


def cmd_zschreier(args) -> Tuple[int, Report]:
    alpha = _ordinal(args.alpha)
    _positive("N", args.N)
    _positive("coeff-bound", args.coeff_bound)
    points = zschreier.enumerate_points(alpha, args.N, args.coeff_bound)
    if args.action == "gen":
        return EXIT_OK, [("count", len(points))] + [("point", p) for p in points]
    space = zschreier.to_metric_space(points)
    text = format_metric_space(space)
    if args.out:
        Path(args.out).write_text(text)
        return EXIT_OK, [("count", len(points)), ("written", args.out)]
    return EXIT_OK, [("count", len(points))] + [("line", ln) for ln in text.splitlines()]


def cmd_extract(args) -> Tuple[int, Report]:
    pairs = parse_family(_read(args.file))
    try:
        res = extraction.extract_equi_moduli(pairs)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    ok = extraction.verify_extraction(res, pairs)
    return (EXIT_OK if ok else EXIT_FALSE), [
        ("family_size", len(pairs)),
        ("h", res.h),
        ("g", res.g),
        ("f", res.f),
        ("m", res.threshold),
        ("J", " ".join(str(i) for i in res.members)),
        ("g_adjusted", res.g_adjusted),
        ("f_adjusted", res.f_adjusted),
        ("thresholds", " ".join(map(str, res.thresholds))),
        ("verified", _yes(ok)),
    ]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="embrank", allow_abbrev=False, description=__doc__.splitlines()[0])
    p.add_argument("--output", help="write the report here instead of standard output")
    sub = p.add_subparsers(dest="command", required=True)

    def group(name, handler):
        sp = sub.add_parser(name, allow_abbrev=False)
        sp.set_defaults(handler=handler)
        return sp.add_subparsers(dest="action", required=True)

    def action(parent, name):
        return parent.add_parser(name, allow_abbrev=False)

    g = group("ordinal", cmd_ordinal)
    for name in ("cmp", "add"):
        a = action(g, name)
        a.add_argument("a")
        a.add_argument("b")
    action(g, "pow").add_argument("a")
    action(g, "classify").add_argument("a")
    a = action(g, "fund")
    a.add_argument("a")
    a.add_argument("--index", type=int, required=True)

    g = group("schreier", cmd_schreier)
    for name in ("member", "decompose"):
        a = action(g, name)
        a.add_argument("--alpha", required=True)
        a.add_argument("--set", required=True)
    a = action(g, "enum")
    a.add_argument("--alpha", required=True)
    a.add_argument("--N", type=int, required=True)

    g = group("rank", cmd_rank)
    action(g, "relation").add_argument("file")
    a = action(g, "schreier-trunc")
    a.add_argument("--alpha", required=True)
    a.add_argument("--N", type=int, required=True)
    a.add_argument("--budget", type=int, default=1_000_000)

    g = group("moduli", cmd_moduli)
    a = action(g, "compute")
    for flag in ("--x", "--e", "--map"):
        a.add_argument(flag, required=True)
    a.add_argument("--window", type=int)
    a.add_argument("--kappa-out")
    a.add_argument("--omega-out")
    a = action(g, "classify")
    a.add_argument("--kappa", required=True)
    a.add_argument("--omega", required=True)
    a.add_argument("--family", choices=("coarse", "uniform", "lipschitz"), required=True)
    a = action(g, "sandwich")
    for flag in ("--x", "--e", "--map", "--kappa", "--omega"):
        a.add_argument(flag, required=True)
    a.add_argument("--subset", help="comma-separated X labels")

    g = group("embed", cmd_embed)
    a = action(g, "search")
    for flag in ("--x", "--e", "--kappa", "--omega"):
        a.add_argument(flag, required=True)
    a.add_argument("--budget", type=int, default=1_000_000)
    a = action(g, "certify")
    a.add_argument("--alpha", required=True)
    a.add_argument("--N", type=int, required=True)
    a.add_argument("--coeff-bound", type=int, required=True)
    a.add_argument("--e", help="target metric space (default: the point set itself)")
    a.add_argument("--map", help="lattice vector -> E label table (default: identity)")
    a.add_argument("--kappa")
    a.add_argument("--omega")
    a.add_argument("--window", type=int, help="window of the default grid-identity moduli")

    g = group("zschreier", cmd_zschreier)
    for name in ("gen", "export"):
        a = action(g, name)
        a.add_argument("--alpha", required=True)
        a.add_argument("--N", type=int, required=True)
        a.add_argument("--coeff-bound", type=int, required=True)
        if name == "export":
            a.add_argument("--out")

    g = group("extract", cmd_extract)
    action(g, "run").add_argument("file")
    return p


def _config(args) -> Report:
    skip = {"handler", "command", "action", "output"}
    return [(f"config.{k}", "-" if v is None else v) for k, v in sorted(vars(args).items()) if k not in skip]


def dispatch(args) -> Tuple[int, List[str]]:
    try:
        code, body = args.handler(args)
    except (InputError, ParseError, moduli.WindowError, moduli.MetricError) as exc:
        code, body = EXIT_INPUT, [("status", "input-error"), ("error", exc)]
    except wellfounded.BudgetExceeded as exc:
        code, body = EXIT_BUDGET, [("status", "budget-exhausted"), ("error", exc)]
    except (ValueError, KeyError) as exc:
        code, body = EXIT_INPUT, [("status", "input-error"), ("error", exc.args[0] if exc.args else exc)]
    # handlers fill in resolved defaults, so the configuration is read afterwards
    head: Report = [("command", f"{args.command} {args.action}")] + _config(args)
    return code, [f"{k} {v}" for k, v in head + body]


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    code, lines = dispatch(args)
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

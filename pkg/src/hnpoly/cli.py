"""The ``hn`` command.

Polynomials are given in the text grammar of :mod:`hnpoly.notation`, e.g.
``"(z1+i*z2)^3"`` or ``"3/2*z1^2*z2 - z3"``.  Scalars are written ``3/2``,
``3/2+1/2i`` or, over a prime field, ``4 mod 7``.  The ring is chosen with
``--ring`` (``Q``, ``QI`` or ``F<p>``); by default it is QQ(i) when ``i``
appears and QQ otherwise.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for bad input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import selftest
from .charp import vc_charp
from .harmonic import (SpecError, build_graph, span_dim, spec_from_json, trace_identity_check,
                       willems_structure_check)
from .hn import HNError, is_hn_direct, is_hn_powers, is_self_inverting, vc_scan
from .inversion import (NotHN, qpair, sigma_functions, vc_equivalence_report)
from .notation import PolyParseError, format_poly, parse_poly, poly_to_json
from .radius import DEFAULT_SEED, convergence_probe, radius_general, radius_hn, sup_norm
from .scalars import GF, QQ, QQI, RingError

METHODS = ("recursion", "closed", "tree", "map")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _ring(text):
    if text is None:
        return None
    t = text.strip().upper()
    if t in ("Q", "QQ"):
        return QQ
    if t in ("QI", "QQI"):
        return QQI
    if t.startswith("F") and t[1:].isdigit():
        return GF(int(t[1:]))
    raise InputError(f"unknown ring {text!r}; use Q, QI or F<p>")


def _poly(args, ring=None):
    return parse_poly(args.poly, args.n, ring if ring is not None else _ring(args.ring))


def _emit(args, text: str, payload: dict):
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


# --------------------------------------------------------------------------

def cmd_check(args) -> int:
    P = _poly(args)
    rep = is_hn_powers(P)
    try:
        rep.self_inverting = bool(is_self_inverting(P))
    except HNError:
        rep.self_inverting = None  # order or Hes(0) preconditions fail
    _emit(args, rep.summary(), json.loads(rep.to_json()))
    return EXIT_OK


def cmd_invert(args) -> int:
    P = _poly(args)
    methods = METHODS if args.method == "all" else (args.method,)
    if args.method == "all" and not is_hn_direct(P):
        methods = tuple(m for m in METHODS if m != "closed")
    pairs = {m: qpair(P, args.order, m) for m in methods}
    ref = pairs[methods[0]].Q
    agree = all(p.Q == ref for p in pairs.values())
    lines = [f"P = {format_poly(P)}, order {args.order}, methods: {', '.join(methods)}"]
    for m, q in enumerate(ref, 1):
        lines.append(f"Q_[{m}] = {format_poly(q)}")
    if len(methods) > 1:
        lines.append("methods agree" if agree else "METHODS DISAGREE")
        if not agree:
            for name, p in pairs.items():
                lines.append(f"  {name}: " + "; ".join(format_poly(q) for q in p.Q))
    payload = {"agree": agree, "pairs": {k: v.to_dict() for k, v in pairs.items()}}
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if agree else EXIT_FAIL


def cmd_vc(args) -> int:
    P = _poly(args)
    rows = vc_scan(P, args.mmax)
    lines = ["m  vanished  degree  expected"]
    for r in rows:
        deg = "-" if r.vanished else str(r.degree)
        exp = "-" if r.expected_degree is None else str(r.expected_degree)
        lines.append(f"{r.m:<3}{str(r.vanished):<10}{deg:<8}{exp}")
    payload = {"rows": [{"m": r.m, "vanished": r.vanished, "expected_degree": r.expected_degree,
                         "value": poly_to_json(r.value)} for r in rows]}
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_sigma(args) -> int:
    P = _poly(args)
    try:
        S = sigma_functions(P, args.order, N=args.degree, verify=True)
    except AssertionError as exc:
        print(f"FAIL: {exc}")
        return EXIT_FAIL
    relation = S.relation_holds()
    lines = [f"P = {format_poly(P)}, order {args.order}, identities checked through degree {args.degree}"]
    for j, u in enumerate(S.U):
        lines.append(f"[t^{j}] U = {format_poly(u)}")
    lines.append(f"W = 2V + 2tU: {relation}")
    payload = {"sigma": S.to_dict(), "relation": relation, "checked_degree": S.checked_degree}
    try:
        eq = vc_equivalence_report(P, args.order)
        lines.append(eq.summary())
        payload["vc_equivalence"] = {"m0": eq.m0, "agree": eq.agree, "decided": eq.decided}
        ok = relation and eq.agree
    except NotHN:
        lines.append("not HN: vanishing equivalences not applicable")
        ok = relation
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_graph(args) -> int:
    try:
        with open(args.spec) as fh:
            spec = spec_from_json(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(str(exc)) from exc
    G = build_graph(spec)
    comps = G.components()
    trace = trace_identity_check(spec, args.mmax)
    P = spec.assemble()
    hn = is_hn_direct(P)
    lines = [G.to_dot(), f"components: {[[v + 1 for v in c] for c in comps]}",
             f"l(P) = {span_dim(spec)}", f"trace identity (m <= {args.mmax}): {trace.ok}",
             f"HN: {hn}"]
    payload = {"dot": G.to_dot(), "components": comps, "l": span_dim(spec),
               "trace_ok": trace.ok, "hn": hn}
    ok = trace.ok
    if spec.d >= 4 and hn:
        w = willems_structure_check(spec)
        lines.append(f"structure: {w.case}, edges {w.edges}, consistent {w.consistent}")
        payload["structure"] = {"case": w.case, "consistent": w.consistent,
                                "path": w.is_path, "cycle": w.is_cycle}
        ok = ok and w.consistent
    else:
        lines.append("structure: applies to HN specs with d >= 4 only")
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_charp(args) -> int:
    P = _poly(args, GF(args.p))
    rep = vc_charp(P, args.margin)
    lines = [rep.summary(),
             "m: " + " ".join(str(m) for m in range(rep.scanned + 1)),
             "0: " + " ".join("y" if f else "n" for f in rep.vanished),
             f"vanishing from 2m > d(p-1), i.e. m >= {rep.strict_threshold}: {rep.strict_ok}"]
    lines += rep.notes
    payload = {"p": rep.p, "d": rep.d, "threshold": rep.threshold, "vanished": rep.vanished,
               "first_vanishing": rep.first_vanishing, "ok": rep.ok,
               "strict_threshold": rep.strict_threshold, "strict_ok": rep.strict_ok}
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_radius(args) -> int:
    P = _poly(args)
    if not P.is_homogeneous or P.degree < 3:
        raise InputError("radius needs a homogeneous polynomial of degree >= 3")
    sn = sup_norm(P, samples=args.samples, seed=args.seed)
    r_gen = radius_general(P, sn.value)
    r_hn = radius_hn(P, sn.value) if P.degree >= 4 and is_hn_direct(P) else None
    point = sn.witness * (args.fraction * r_gen)
    probe = convergence_probe(P, point, args.order, norm=sn.value)
    if args.json:
        _emit(args, "", {"seed": args.seed, "sup_norm": sn.value, "radius_general": r_gen,
                         "radius_hn": r_hn, "probe_ok": probe.ok, "probe_csv": probe.to_csv()})
    else:
        print(f"# seed {args.seed}, samples {args.samples}")
        print(f"# |P| >= {sn.value:.10g}")
        print(f"# r0 general = {r_gen:.10g}")
        print(f"# r0 HN = {r_hn:.10g}" if r_hn is not None else "# r0 HN: not applicable")
        print(f"# probe at |z| = {args.fraction} * r0 general")
        for note in probe.notes:
            print(f"# {note}")
        sys.stdout.write(probe.to_csv())
    return EXIT_OK if probe.ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    only = set(args.only) if args.only else None
    if not args.json:
        print(f"# seed {selftest.SEED}")
    results = selftest.run_all(only, echo=None if args.json else (lambda r: print(r.line(), flush=True)))
    if args.json:
        print(json.dumps({"seed": selftest.SEED, "results": [r.to_dict() for r in results]}, indent=2))
    else:
        passed = sum(r.passed for r in results)
        print(f"{passed}/{len(results)} criteria pass")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    poly = argparse.ArgumentParser(add_help=False)
    poly.add_argument("poly", help='polynomial text, e.g. "(z1+i*z2)^3"')
    poly.add_argument("-n", type=int, default=None, help="number of variables (default: highest index used)")
    poly.add_argument("--ring", default=None, help="Q, QI or F<p>")

    ap = argparse.ArgumentParser(prog="hn", description="Exact checks on Hessian nilpotent polynomials.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common, poly], help="Hessian nilpotency and self-inversion")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("invert", parents=[common, poly], help="inversion pair Q_[1..M]")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--method", choices=METHODS + ("all",), default="recursion")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("vc", parents=[common, poly], help="scan Delta^m P^(m+1)")
    p.add_argument("--mmax", type=int, default=6)
    p.set_defaults(func=cmd_vc)

    p = sub.add_parser("sigma", parents=[common, poly], help="U, V, W series and their vanishing")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--degree", type=int, default=11, help="z-degree for the composition checks")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("graph", parents=[common], help="graph of a harmonic spec (JSON file)")
    p.add_argument("spec")
    p.add_argument("--mmax", type=int, default=4, help="trace identity checked for m <= mmax")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("charp", parents=[common, poly], help="vanishing over GF(p)")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--margin", type=int, default=2)
    p.set_defaults(func=cmd_charp)

    p = sub.add_parser("radius", parents=[common, poly], help="convergence radii and a probe table (CSV)")
    p.add_argument("--samples", type=int, default=4000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--fraction", type=float, default=0.5, help="probe point at this fraction of r0")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    p.add_argument("--only", type=int, nargs="*", help="criterion numbers")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, PolyParseError, RingError, SpecError, HNError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

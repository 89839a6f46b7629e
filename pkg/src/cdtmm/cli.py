"""Command-line front end: ``cdtmm <subcommand> ...``.

Output is JSON (default) or CSV; both embed a run manifest. Exit code 2 means
bad arguments, 1 means the computation itself failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import __version__

THREADS_ENV = "CDTMM_THREADS"


# --- value encoding --------------------------------------------------------------

def _float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    return format(x, ".17g")


def encode(obj: Any) -> str:
    """JSON with rationals as {"num","den"} strings and floats at 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, Fraction):
        return encode({"num": str(obj.numerator), "den": str(obj.denominator)})
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, np.floating):
        return _float(float(obj))
    if isinstance(obj, np.integer):
        return str(int(obj))
    if isinstance(obj, complex):
        return encode([obj.real, obj.imag])
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(json.dumps(str(k)) + ": " + encode(v) for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(encode(v) for v in obj) + "]"
    return json.dumps(str(obj))


def _cell(v: Any) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return _float(v)
    return str(v)


def manifest(args: argparse.Namespace) -> dict:
    params = {k.removesuffix("_text"): (str(v) if isinstance(v, RepArg) else v)
              for k, v in sorted(vars(args).items())
              if k not in ("func", "command", "format", "timing", "seed") and not k.startswith("_")}
    out = {"subcommand": args.command, "parameters": params,
           "seed": getattr(args, "seed", None), "version": __version__}
    if getattr(args, "timing", False):
        out["wall_time"] = round(time.perf_counter() - args._t0, 6)
    return out


def emit(args, result: dict, rows: list[dict] | None = None, out=None) -> None:
    out = out or sys.stdout
    man = manifest(args)
    if args.format == "csv":
        if rows is None:
            rows = [{k: v for k, v in result.items() if not isinstance(v, (dict, list))}]
        for k, v in man.items():
            out.write(f"# {k}: {v if isinstance(v, str) else encode(v)}\n")
        if rows:
            buf = io.StringIO()
            w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: _cell(v) for k, v in r.items()})
            out.write(buf.getvalue())
        return
    out.write(encode({**result, "manifest": man}) + "\n")


def _value(v, as_float: bool) -> dict:
    if isinstance(v, Fraction) and not as_float:
        return {"num": str(v.numerator), "den": str(v.denominator)}
    return {"value_float": float(v)}


# --- argument types ------------------------------------------------------------------

def _arg(fn: Callable, what: str):
    def conv(text):
        try:
            return fn(text)
        except (ValueError, TypeError) as exc:
            raise argparse.ArgumentTypeError(f"bad {what} {text!r}: {exc}")
    conv.__name__ = what
    return conv


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _n_range(text: str) -> list[int]:
    """'2:20:2' (inclusive) or '4,8,12'."""
    if ":" in text:
        parts = [int(x) for x in text.split(":")]
        a, b = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        if step <= 0:
            raise ValueError("step must be positive")
        return list(range(a, b + 1, step))
    return _int_list(text)


def _number(text: str):
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


# --- subcommands ---------------------------------------------------------------------

def cmd_spectrum(args):
    from .cmspec import approx_spectrum, exact_spectrum, q_max
    spec = approx_spectrum(args.N, args.m) if args.approx else exact_spectrum(args.N, args.m)
    eigs = sorted(spec.eigenvalues, key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    rows = [{"re": float(z.real), "im": float(z.imag)} for z in eigs]
    result = {"N": args.N, "m": args.m, "source": spec.source,
              "eigenvalues": [[r["re"], r["im"]] for r in rows]}
    if not args.approx:
        result["residual"] = float(spec.residual)
    if args.qmax:
        result["q_max"] = q_max(spec)
    emit(args, result, rows)


def cmd_char(args):
    from .glchar import (chi_C1, chi_C2, chi_C2_over_C1, expansion_coefficient, gl_dimension,
                         invariant_dimension, littlewood_richardson, weyl_character)
    h = args.rep(args.N)
    par = h.parity()
    result = {"rep": str(h), "partition": list(h.partition), "N": h.N, "n": h.n,
              "dimension": gl_dimension(h), "expansion_coefficient": expansion_coefficient(h),
              "parity": {"even": par.even_count, "odd": par.odd_count, "admissible": par.admissible},
              "chi_C1": chi_C1(h), "chi_C2": chi_C2(h), "chi_C2_over_C1": chi_C2_over_C1(h)}
    if args.eigs:
        result["character"] = weyl_character(h, [Fraction(x) for x in args.eigs.split(",")])
    if args.tensor is not None:
        lr = littlewood_richardson(h.partition, args.tensor)
        result["littlewood_richardson"] = [{"partition": list(k), "coefficient": v}
                                           for k, v in sorted(lr.items())]
        result["invariant_dimension"] = invariant_dimension(h.partition, args.tensor)
    emit(args, result)


def _avg_value(rep_text: str, N: int, method: str, power: int, eps):
    from .gaussavg import average
    from .glchar import parse_rep
    return average(parse_rep(rep_text, N), method, power, eps)


def cmd_avg(args):
    h = args.rep(args.N)
    from .gaussavg import average
    res = average(h, args.method, args.power, args.eps)
    result = {**_value(res.value, args.float), "method": res.method, "power": args.power,
              "rep": str(h), "n": h.n, "N": h.N}
    emit(args, result)


def cmd_kn(args):
    from .gaussavg import conjecture_kN
    h = args.rep(args.N)
    k = conjecture_kN(h, args.vandermonde_scale)
    emit(args, {**_value(k, args.float), "rep": str(h), "n": h.n, "N": h.N})


def cmd_lemma(args):
    from .permgroup import Permutation, degree_deficits, format_poly, lemma_sum, partial_trace
    if args.gamma:
        gamma = Permutation.parse(args.gamma, 2 * args.n if args.n else None)
        e, rho = partial_trace(gamma)
        emit(args, {"gamma": str(gamma), "weight_exponent": e, "weight": format_poly({e: 1}),
                    "permutation": str(rho)})
        return
    if not args.n:
        raise ValueError("lemma needs --n or --gamma")
    lhs, rhs = lemma_sum(args.n)
    defs = degree_deficits(lhs, rhs)
    rows = []
    lhs_map, rhs_map = dict(lhs.items()), dict(rhs.items())
    for rho in sorted(lhs_map.keys() | rhs_map.keys(), key=lambda p: p.images):
        d = defs.get(rho, float("-inf"))
        rows.append({"permutation": str(rho), "lhs": format_poly(lhs_map.get(rho, {})),
                     "rhs": format_poly(rhs_map.get(rho, {})),
                     "deficit": "inf" if d == float("inf") else d})
    result = {"n": args.n, "terms": rows,
              "min_deficit": min(v for v in defs.values())}
    emit(args, result, rows)


def cmd_model(args):
    import sympy as sp
    from .models import (action_check, coupling_transform, model_spec, parse_rule,
                         wick_word_average, z_order_g2)
    gamma = args.gamma
    spec = model_spec(args.model, gamma)
    result: dict = {"model": args.model, "propagators": spec.table()}
    if args.word:
        rule = parse_rule(args.rule)
        r = wick_word_average(args.word, spec, rule)
        val = r.value.subs(sp.Symbol("g"), args.g) if args.g is not None else r.value
        result["word"] = args.word
        result["average"] = _sym(val)
        result["pairings"] = r.pairings
        result["orientation_consistent"] = r.orientation_consistent
    if args.order_g2:
        z = z_order_g2()
        result["order_g2"] = {"route1": str(z.route1), "route2": str(z.route2), "agree": z.agree,
                              "contributions": {",".join(map(str, k)): str(v)
                                                for k, v in z.contributions.items()}}
    if args.transform:
        if gamma is None or args.g is None:
            raise ValueError("--transform needs numeric --gamma and --g")
        cm = coupling_transform(float(gamma), float(args.g))
        result["transform"] = {**cm.as_dict(),
                               "action_relative_difference": action_check(float(gamma), float(args.g),
                                                                          seed=args.seed or 0)}
    emit(args, result)


def _sym(expr):
    import sympy as sp
    expr = sp.nsimplify(expr) if expr.is_number else expr
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    return str(sp.simplify(expr))


def cmd_graph(args):
    from .cdtgraph import (build, graph_summary, random_cdt_graph, RibbonGraph, validate_cdt,
                           classify_topology, euler_characteristic, strip_decomposition)
    import random as _random
    if args.action == "build":
        rng = _random.Random(args.seed) if args.seed is not None else None
        g = build(args.topology, args.sizes, args.variant, rng=rng)
        emit(args, {"topology": args.topology, "variant": args.variant, "graph": g.to_dict(),
                    "summary": graph_summary(g)})
    elif args.action == "classify":
        text = open(args.input).read() if args.input and args.input != "-" else sys.stdin.read()
        data = json.loads(text)
        g = RibbonGraph.from_dict(data.get("graph", data))
        rep = validate_cdt(g)
        result = {"validity": rep.as_dict()}
        if rep.valid:
            result["summary"] = graph_summary(g)
        emit(args, result)
    else:
        rows = []
        base = args.seed or 0
        for s in range(base, base + args.seeds):
            r = random_cdt_graph(s, args.max_strips, args.max_size)
            g = r.graph
            strips = strip_decomposition(g)
            rows.append({"seed": s, "family": r.family, "variant": r.variant or "",
                         "chi": euler_characteristic(g),
                         "singular": sum(1 for x in strips if x.kind.value == "Singular"),
                         "topology": classify_topology(g).value})
        counts: dict[str, int] = {}
        for r in rows:
            counts[r["topology"]] = counts.get(r["topology"], 0) + 1
        ok = all(r["chi"] == r["singular"] and r["chi"] in (0, 1, 2) for r in rows)
        emit(args, {"seeds": args.seeds, "counts": dict(sorted(counts.items())),
                    "chi_equals_singular": ok}, rows)


# sweep points must be picklable top-level callables

def _sweep_point(kind: str, N: int, opts: dict) -> dict:
    if kind == "avg":
        res = _avg_value(opts["rep"], N, opts["method"], opts["power"], opts["eps"])
        v = res.value
        return {"N": N, "value": v if (isinstance(v, Fraction) and not opts["float"]) else float(v)}
    if kind == "ratio":
        from .gaussavg import chiA2_largeN, oracle_chiA2
        from .glchar import parse_partition
        lam = parse_partition(opts["rep"])
        ex = oracle_chiA2(lam, N)
        dev = abs(chiA2_largeN(lam, N) / ex - 1)
        return {"N": N, "deviation": float(dev)}
    if kind == "qmax":
        from .cmspec import approx_spectrum, exact_spectrum, q_max
        spec = approx_spectrum(N, opts["m"]) if opts["approx"] else exact_spectrum(N, opts["m"])
        return {"N": N, "q_max": q_max(spec)}
    raise ValueError(f"unknown sweep kind {kind!r}")


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def cmd_sweep(args):
    opts = {"rep": args.rep_text, "method": args.method, "power": args.power, "eps": args.eps,
            "float": args.float, "m": args.m, "approx": args.approx}
    Ns = sorted(set(args.N))
    workers = min(_threads(), len(Ns))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, [args.kind] * len(Ns), Ns, [opts] * len(Ns)))
    else:
        rows = [_sweep_point(args.kind, N, opts) for N in Ns]
    rows.sort(key=lambda r: r["N"])
    emit(args, {"kind": args.kind, "rows": rows}, rows)


# --- parser --------------------------------------------------------------------

class RepArg:
    """Representation text, resolved against N once N is known."""

    def __init__(self, text: str):
        from .glchar import parse_partition, parse_rep
        self.text = text.strip()
        if self.text.startswith("h:"):
            parse_rep(self.text)
        elif self.text.startswith("det:"):
            if int(self.text[4:]) < 0:
                raise ValueError("q must be non-negative")
        else:
            parse_partition(self.text)

    def __call__(self, N):
        from .glchar import parse_rep
        return parse_rep(self.text, N)

    def __str__(self) -> str:
        return self.text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--timing", action="store_true", help="record wall time in the manifest")
    common.add_argument("--seed", type=int, default=None)

    p = argparse.ArgumentParser(prog="cdtmm", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="eigenvalues of C_m")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--approx", action="store_true", help="Lambert-W approximation instead of exact roots")
    s.add_argument("--qmax", action="store_true", help="also report q_max")
    s.set_defaults(func=cmd_spectrum)

    rep_help = "partition '3,1', 'trivial', 'defining', 'det:q' or shifted weights 'h:4,2,0'"
    s = sub.add_parser("char", parents=[common], help="GL(N) character data")
    s.add_argument("--rep", type=_arg(RepArg, "representation"), required=True, help=rep_help)
    s.add_argument("--N", type=int, default=None)
    s.add_argument("--eigs", default=None, help="comma-separated eigenvalues (rationals)")
    s.add_argument("--tensor", type=_arg(_int_list, "partition"), default=None,
                   help="second partition for Littlewood-Richardson data")
    s.set_defaults(func=cmd_char)

    s = sub.add_parser("avg", parents=[common], help="Gaussian character averages")
    s.add_argument("--rep", type=_arg(RepArg, "representation"), required=True, help=rep_help)
    s.add_argument("--N", type=int, default=None)
    s.add_argument("--method", choices=("oracle", "dfi", "pfaffian", "large-n", "saddle"), default="oracle")
    s.add_argument("--power", type=int, choices=(1, 2), default=2, help="<chi(A)> (1) or <chi(A^2)> (2)")
    s.add_argument("--eps", type=_arg(_number, "number"), default=0)
    s.add_argument("--float", action="store_true", help="convert exact results to floats")
    s.set_defaults(func=cmd_avg)

    s = sub.add_parser("kn", parents=[common], help="proportionality factor k_N of the conjecture")
    s.add_argument("--rep", type=_arg(RepArg, "representation"), required=True, help=rep_help)
    s.add_argument("--N", type=int, default=None)
    s.add_argument("--vandermonde-scale", type=int, default=1)
    s.add_argument("--float", action="store_true")
    s.set_defaults(func=cmd_kn)

    s = sub.add_parser("lemma", parents=[common], help="partial-trace lemma")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--gamma", default=None, help="pairing in cycle notation, e.g. '(1 5)(2 6)...'")
    s.set_defaults(func=cmd_lemma)

    s = sub.add_parser("model", parents=[common], help="propagators, Wick words, order-g^2 check")
    s.add_argument("--model", choices=("cdt", "ising", "cdt-ising"), default="cdt")
    s.add_argument("--gamma", type=_arg(_number, "number"), default=None)
    s.add_argument("--g", type=_arg(_number, "number"), default=None)
    s.add_argument("--word", default=None, help="e.g. 'Tr(A^2 C A^2 C)'")
    s.add_argument("--rule", default="large-n", help="large-n or spectrum:N")
    s.add_argument("--order-g2", action="store_true")
    s.add_argument("--transform", action="store_true", help="Ising coupling map and action check")
    s.set_defaults(func=cmd_model)

    s = sub.add_parser("graph", parents=[common], help="CDT ribbon graphs")
    gsub = s.add_subparsers(dest="action", required=True)
    b = gsub.add_parser("build", parents=[common])
    b.add_argument("topology", choices=("sphere", "torus", "projective", "klein"))
    b.add_argument("--sizes", type=_arg(_int_list, "sizes"), default=[2, 2])
    b.add_argument("--variant", default=None)
    c = gsub.add_parser("classify", parents=[common])
    c.add_argument("input", nargs="?", default="-", help="graph JSON file (default stdin)")
    k = gsub.add_parser("census", parents=[common])
    k.add_argument("--seeds", type=int, default=100)
    k.add_argument("--max-strips", type=int, default=4)
    k.add_argument("--max-size", type=int, default=4)
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("sweep", parents=[common], help="parameter sweeps over N (CSV friendly)")
    s.add_argument("kind", choices=("avg", "ratio", "qmax"))
    s.add_argument("--N", type=_arg(_n_range, "N range"), required=True, help="'10:60:10' or '4,8'")
    s.add_argument("--rep", dest="rep_text", default="2")
    s.add_argument("--method", default="oracle")
    s.add_argument("--power", type=int, choices=(1, 2), default=2)
    s.add_argument("--eps", type=_arg(_number, "number"), default=0)
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--approx", action="store_true")
    s.add_argument("--float", action="store_true")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._t0 = time.perf_counter()
    try:
        args.func(args)
    except Exception as exc:  # computation errors become structured output
        sys.stdout.write(encode({"error": {"type": type(exc).__name__, "message": str(exc)},
                                 "manifest": manifest(args)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

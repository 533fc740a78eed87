"""Command-line front end: ``khinchin <subcommand> ...``.

Every subcommand writes deterministic JSON (or CSV) to stdout.  Errors are a
single JSON object on stderr with a nonzero exit code; verdicts such as
fails_hypothesis or inapplicable are data and exit 0.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from gmpy2 import mpfr

from . import __version__
from .admissibility import full_report
from .config import RunConfig
from .family import FamilyEvaluator, approach_grid
from .numbertheory import alternating_closed_forms, alternating_divisor_sum, divisor_profile, exact_count
from .saddle import (BUILTIN_SCHEMES, MeanBounded, baez_duarte_estimate, hardy_ramanujan,
                     hayman_estimate, load_scheme, make_oracle, solve_saddle)
from .series import exp_series, parse_series_spec, precision


class UsageError(ValueError):
    pass


def _jdump(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=_jdefault)


def _jdefault(o):
    if isinstance(o, Fraction):
        return str(o)
    if type(o).__name__ == "mpfr":
        return float(o)
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def _int_list(text: str) -> list[int]:
    """"5", "1,2,3" or "lo:hi[:step]" (inclusive)."""
    out: list[int] = []
    for part in text.split(","):
        if ":" in part:
            bits = [int(x) for x in part.split(":")]
            lo, hi = bits[0], bits[1]
            step = bits[2] if len(bits) > 2 else 1
            out.extend(range(lo, hi + 1, step))
        elif part.strip():
            out.append(int(part))
    return out


def _t_values(specs: list[str], radius) -> list:
    """Explicit values or lo:hi:steps, spaced geometrically toward R."""
    out = []
    for spec in specs:
        if ":" not in spec:
            out.append(mpfr(spec))
            continue
        lo, hi, steps = spec.split(":")
        lo, hi, steps = mpfr(lo), mpfr(hi), int(steps)
        if steps < 2:
            out.append(lo)
            continue
        for i in range(steps):
            u = mpfr(i) / (steps - 1)
            if radius.finite:
                R = radius.value()
                out.append(R - (R - lo) * ((R - hi) / (R - lo)) ** u)
            else:
                out.append(lo * (hi / lo) ** u)
    return out


def _series(args, cfg):
    return parse_series_spec(args.series, N=cfg.N, precision_bits=cfg.precision_bits)


def _evaluator(g, cfg):
    return FamilyEvaluator(g, cfg.precision_bits, cfg.tail())


# --- subcommands -------------------------------------------------------------------


def cmd_coeffs(args, cfg, out):
    g = _series(args, cfg)
    ns = _int_list(args.n)
    top = max(ns)
    gg = g.extended(top) if g.N < top else g
    f = gg if args.of == "g" else exp_series(gg)
    fact = 1
    facts = [1]
    for k in range(1, top + 1):
        fact *= k
        facts.append(fact)
    for n in ns:
        v = f.coeffs[n]
        if args.scale == "factorial":
            v = v * facts[n]
        out.write(_jdump({"series": g.provenance, "of": args.of, "scale": args.scale, "n": n,
                          "value": str(v)}) + "\n")


def cmd_eval(args, cfg, out):
    g = _series(args, cfg)
    ev = _evaluator(g, cfg)
    with precision(cfg.precision_bits):
        ts = _t_values(args.t, g.radius)
    for t in ts:
        rec = {"t": float(t)}
        if args.what == "f":
            rec["log_f"] = float(ev.log_f(t))
        elif args.what == "mean":
            rec["mean"] = float(ev.mean(t))
        elif args.what == "var":
            rec["variance"] = float(ev.variance(t))
        elif args.what == "ratio":
            rec["gaussianity_ratio"] = float(ev.gaussianity_ratio(t))
        elif args.what == "mass":
            ns = _int_list(args.n or "0")
            lm = ev.log_mass_table(t, max(ns))
            rec["mass"] = {str(n): float(math.exp(lm[n])) for n in ns}
        elif args.what == "char":
            thetas = [float(x) for x in (args.theta or "0").split(",")]
            vals = ev.normalized_char(t, thetas) if args.normalized else ev.char_fn(t, thetas)
            rec["char"] = [{"theta": th, "re": float(v.real), "im": float(v.imag)}
                           for th, v in zip(thetas, vals)]
        out.write(_jdump(rec) + "\n")


def cmd_divisors(args, cfg, out):
    for m in _int_list(args.m):
        p = divisor_profile(m, args.c)
        odd_form, half_form = alternating_closed_forms(m, args.c)
        out.write(_jdump({
            "m": m, "c": args.c, "sigma": p.sigma, "sigma_odd": p.sigma_odd, "chi": p.chi,
            "omega": str(p.omega), "alternating_sum": alternating_divisor_sum(m, args.c),
            "odd_times_omega": str(odd_form), "sigma_minus_twice_half": half_form,
        }) + "\n")


def cmd_exact(args, cfg, out):
    g = _series(args, cfg) if args.kind == "assembly" else None
    if args.kind == "assembly" and g is None:
        raise UsageError("--kind assembly needs --series")
    for n in _int_list(args.n):
        v = exact_count(args.kind, n, g=g, budget=cfg.memory_budget)
        out.write(_jdump({"kind": args.kind, "n": n, "value": str(v)}) + "\n")


def cmd_check(args, cfg, out):
    g = _series(args, cfg)
    over = {}
    if args.window:
        lo, hi = (int(x) for x in args.window.split(":"))
        over["window"] = (lo, hi)
    if args.grid:
        over["ks"] = tuple(_int_list(args.grid))
    if args.alpha is not None:
        over["alpha"] = args.alpha
    cfg = RunConfig.from_json({**cfg.to_json(), **over})
    rep = full_report(g, cfg.report_options(diagnostics=not args.no_diagnostics),
                      _evaluator(g, cfg)).to_json()
    rep["run_config"] = cfg.to_json()
    text = json.dumps(rep, sort_keys=True, indent=2, default=_jdefault) + "\n"
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text)
    out.write(text)


def _estimates(g, ev, ns, scheme_name, oracle_mode, cfg):
    oracle = make_oracle(g, max(ns), oracle_mode, cfg.memory_budget)
    rows = []
    if scheme_name == "saddle":
        t0 = None
        for n in sorted(ns):
            e = hayman_estimate(ev, n, oracle, t0=t0)
            t0 = e.t
            rows.append(e)
    else:
        scheme = load_scheme(scheme_name)
        rows = [baez_duarte_estimate(ev, scheme, n, oracle) for n in sorted(ns)]
    return rows


def _fmt(v):
    return "" if v is None else repr(float(v))


def cmd_estimate(args, cfg, out):
    g = _series(args, cfg)
    ev = _evaluator(g, cfg)
    rows = _estimates(g, ev, _int_list(args.n), args.scheme, args.oracle, cfg)
    w = csv.writer(out, lineterminator="\n")
    head = ["n", "t", "log_estimate", "log_exact", "log_ratio"]
    alt = any(r.log_estimate_sigma_tilde is not None for r in rows)
    if alt:
        head += ["log_estimate_sigma_tilde", "log_ratio_sigma_tilde"]
    w.writerow(head)
    for r in rows:
        row = [r.n, _fmt(r.t), _fmt(r.log_estimate), _fmt(r.log_exact), _fmt(r.log_ratio)]
        if alt:
            row += [_fmt(r.log_estimate_sigma_tilde), _fmt(r.log_ratio_sigma_tilde)]
        w.writerow(row)


# --- reproduce fixtures -------------------------------------------------------------


def _rep_partitions_hr(cfg, out):
    g = parse_series_spec("builtin:partitions", cfg.N, cfg.precision_bits)
    ev = _evaluator(g, cfg)
    ns = [50, 100, 200, 500]
    oracle = make_oracle(g, max(ns), "auto", cfg.memory_budget)
    scheme = BUILTIN_SCHEMES["partitions-euler"]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "p_n", "log_p_n", "log_hardy_ramanujan", "hr_ratio", "log_baez_duarte",
                "bd_ratio", "log_baez_duarte_sigma_tilde", "bd_sigma_tilde_ratio", "log_hayman", "hayman_ratio"])
    for n in ns:
        lp = oracle(n)
        hr = hardy_ramanujan(n)
        bd = baez_duarte_estimate(ev, scheme, n, oracle)
        hy = hayman_estimate(ev, n, oracle)
        w.writerow([n, oracle._vals[n], _fmt(lp), _fmt(hr), _fmt(math.exp(hr - lp)),
                    _fmt(bd.log_estimate), _fmt(math.exp(bd.log_ratio)),
                    _fmt(bd.log_estimate_sigma_tilde), _fmt(math.exp(bd.log_ratio_sigma_tilde)),
                    _fmt(hy.log_estimate), _fmt(math.exp(hy.log_ratio))])


def _rep_bell(cfg, out):
    g = parse_series_spec("builtin:sets_of_sets", cfg.N, cfg.precision_bits)
    ev = _evaluator(g, cfg)
    ns = [10, 20, 50, 100]
    oracle = make_oracle(g, max(ns), "auto", cfg.memory_budget)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "bell_n", "t_n", "log_a_n", "log_hayman", "ratio"])
    for n in ns:
        e = hayman_estimate(ev, n, oracle)
        w.writerow([n, oracle._vals[n], _fmt(e.t), _fmt(e.log_exact), _fmt(e.log_estimate),
                    _fmt(math.exp(e.log_ratio))])


def _rep_distinct(cfg, out):
    g = parse_series_spec("builtin:distinct_parts", cfg.N, cfg.precision_bits)
    rep = full_report(g, cfg.report_options(), _evaluator(g, cfg))
    d = rep.diagnostics
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["k", "t", "variance", "cut_condition", "minor_arc", "major_arc", "central_limit"])
    for i, (k, t) in enumerate(zip(d["grid"]["k"], d["grid"]["t"])):
        clt = d["central_limit"]["points"][i]
        w.writerow([k, _fmt(t), _fmt(d["variance"]["values"][i]), _fmt(d["cut_condition"]["values"][i]),
                    _fmt(d["minor_arc"]["points"][i]["value"]), _fmt(d["major_arc"]["points"][i]["value"]),
                    _fmt(clt["value"]) if clt else ""])
    w.writerow([])
    w.writerow(["verdict", rep.verdict])
    w.writerow(["reason", rep.inapplicable_reason])
    for name in ("variance", "cut_condition"):
        w.writerow([f"{name}_trend", d[name]["verdict"]])
    for name in ("minor_arc", "major_arc"):
        w.writerow([f"{name}_trend", d[name]["trend"]["verdict"]])


def _rep_forests(cfg, out):
    g = parse_series_spec("builtin:rooted_trees", cfg.N, cfg.precision_bits)
    ev = _evaluator(g, cfg)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["k", "t", "log_f", "mean", "sigma", "mean_over_sigma"])
    with precision(cfg.precision_bits):
        grid = approach_grid(g.radius, range(3, 9))
    for k, t in zip(range(3, 9), grid):
        m, s = ev.mean(t), ev.sigma(t)
        w.writerow([k, _fmt(t), _fmt(ev.log_f(t)), _fmt(m), _fmt(s), _fmt(m / s)])
    w.writerow([])
    n = 10**6
    try:
        sol = solve_saddle(ev, n)
        w.writerow(["saddle", n, _fmt(sol.t)])
    except MeanBounded as exc:
        w.writerow(["saddle", n, "MeanBounded", _fmt(exc.ceiling)])


FIXTURES = {
    "partitions-hardy-ramanujan": _rep_partitions_hr,
    "bell-hayman": _rep_bell,
    "distinct-parts-direct": _rep_distinct,
    "forests-counterexample": _rep_forests,
}


def cmd_reproduce(args, cfg, out):
    FIXTURES[args.fixture](cfg, out)


# --- wiring ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="khinchin", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--config", help="RunConfig JSON file")
    p.add_argument("--precision", type=int, help="working precision in bits")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("coeffs", help="exact coefficients of g or f = exp(g)")
    s.add_argument("--series", required=True)
    s.add_argument("--n", required=True)
    s.add_argument("--of", choices=["f", "g"], default="f")
    s.add_argument("--scale", choices=["plain", "factorial"], default="plain")

    s = sub.add_parser("eval", help="evaluate the Khinchin family at t")
    s.add_argument("--series", required=True)
    s.add_argument("--t", action="append", required=True, help="value or lo:hi:steps")
    s.add_argument("--what", choices=["f", "mean", "var", "mass", "char", "ratio"], default="f")
    s.add_argument("--n", help="indices for --what mass")
    s.add_argument("--theta", help="comma-separated angles for --what char")
    s.add_argument("--normalized", action="store_true", help="normalized characteristic function")

    s = sub.add_parser("divisors", help="divisor sums and the alternating identity")
    s.add_argument("--m", required=True)
    s.add_argument("--c", type=int, default=1)

    s = sub.add_parser("exact", help="exact counting oracles")
    s.add_argument("--kind", required=True,
                   choices=["partitions", "distinct_parts", "plane_partitions", "bell", "assembly"])
    s.add_argument("--n", required=True)
    s.add_argument("--series")

    s = sub.add_parser("check", help="admissibility report")
    s.add_argument("--series", required=True)
    s.add_argument("--window", help="lo:hi coefficient window for the growth fit")
    s.add_argument("--grid", help="approach exponents k, e.g. 4:9")
    s.add_argument("--alpha", type=float)
    s.add_argument("--no-diagnostics", action="store_true")
    s.add_argument("--json", help="also write the report to this path")

    s = sub.add_parser("estimate", help="coefficient estimates vs exact values (CSV)")
    s.add_argument("--series", required=True)
    s.add_argument("--n", required=True)
    s.add_argument("--scheme", default="saddle")
    s.add_argument("--oracle", choices=["auto", "none"], default="auto")

    s = sub.add_parser("reproduce", help="run a named scenario end to end")
    s.add_argument("fixture", choices=sorted(FIXTURES))
    return p


COMMANDS = {
    "coeffs": cmd_coeffs, "eval": cmd_eval, "divisors": cmd_divisors, "exact": cmd_exact,
    "check": cmd_check, "estimate": cmd_estimate, "reproduce": cmd_reproduce,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.load(args.config) if args.config else RunConfig()
        cfg = cfg.with_env()
        if args.precision:
            cfg = RunConfig.from_json({**cfg.to_json(), "precision_bits": args.precision})
        buf = io.StringIO()
        COMMANDS[args.command](args, cfg, buf)
        out.write(buf.getvalue())
        return 0
    except Exception as exc:  # every module error becomes machine-readable output
        err.write(_jdump({"error": type(exc).__name__, "message": str(exc), "command": args.command}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())

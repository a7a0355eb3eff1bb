"""Command-line interface.

Subcommands mirror the library layers: ``young`` (gauge calculus),
``orlicz`` (averages), ``osc`` (oscillation scans), ``sparse`` (families
and their operators), ``op`` (singular operators), ``bump`` (weight-pair
constants), and the scenario layer ``run`` / ``sweep`` / ``suite``.

Reports are printed as JSON to stdout; with ``--out DIR`` they are also
written as JSON and CSV, and the report path renders matplotlib figures
next to the delimited output (disable with ``--no-figures``).  ``run`` and
``suite`` exit 0 exactly when every hard check passes.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import bumps, figures, harness, operators, oscillation, sparse, young
from .errors import SparsityError, TwoWeightError
from .grid import Cube, DyadicGrid, SampledFunction, Weight, make_function, make_weight
from .orlicz import orlicz_average


# -- shared option groups ------------------------------------------------------


def _add_out_opts(p):
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="primary stdout format (files always get both)")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")


def _add_lattice_opts(p, depth=9):
    p.add_argument("--domain", default="0,1", help="domain as 'x0,x1' (power-of-two length)")
    p.add_argument("--depth", type=int, default=depth, help="samples = 2**depth")
    p.add_argument("--cube-depth", type=int, default=None, help="cube levels below the top")
    p.add_argument("--shifts", type=int, choices=(1, 3), default=1)


def _parse_domain(text):
    x0, x1 = (float(t) for t in text.split(","))
    return (x0, x1)


def _parse_cube(text):
    a, side = (float(t) for t in text.split(","))
    return Cube(a, side)


def _fn_spec(text):
    return json.loads(text) if text.strip().startswith("{") else {"csv": text}


def _gauge_from_args(args, slot="gauge"):
    text = getattr(args, slot.replace("-", "_"))
    if text is None:
        raise TwoWeightError(f"--{slot} is required")
    if text.strip().startswith("{"):
        return young.young_from_dict(json.loads(text))
    return young.young_preset(
        text,
        p=getattr(args, "p", 2.0),
        m=getattr(args, "m", 1),
        delta=getattr(args, "delta", 1.0),
        eps=getattr(args, "eps", 1.0),
    )


def _grid_from_args(args, domain):
    k_max = int(round(np.log2(domain[1] - domain[0])))
    cube_depth = args.cube_depth if args.cube_depth is not None else max(args.depth - 2, 2)
    return DyadicGrid(domain, k_max - cube_depth, k_max)


# -- output helpers ------------------------------------------------------------


def _flatten(obj, prefix=""):
    rows = []
    if isinstance(obj, dict):
        for k in obj:
            rows.extend(_flatten(obj[k], f"{prefix}{k}." if prefix else f"{k}."))
    elif isinstance(obj, (list, tuple)) and obj and isinstance(obj[0], (dict, list, tuple)):
        for i, item in enumerate(obj):
            rows.extend(_flatten(item, f"{prefix}{i}."))
    else:
        rows.append((prefix.rstrip("."), obj))
    return rows


def _write_csv(data, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["key", "value"])
        for key, value in _flatten(data):
            w.writerow([key, value])


def _emit(data, args, stem):
    text = json.dumps(data, indent=2, sort_keys=True, default=str)
    if args.format == "json" or args.out is None:
        print(text)
    else:
        for key, value in _flatten(data):
            print(f"{key},{value}")
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / f"{stem}.json").write_text(text + "\n")
        _write_csv(data, args.out / f"{stem}.csv")


def _emit_cube_table(table, out_dir, stem):
    with open(Path(out_dir) / f"{stem}_cubes.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cube_a", "cube_side", "term1", "term2"])
        for (a, side), t1, t2 in table:
            w.writerow([a, side, t1, t2])


# -- young ----------------------------------------------------------------------


def _cmd_young_inspect(args):
    g = _gauge_from_args(args)
    ts = [float(t) for t in args.t.split(",")] if args.t else [0.5, 1.0, 2.0, 4.0, 10.0]
    data = {
        "gauge": g.to_dict(),
        "values": {str(t): g.evaluate(t) for t in ts},
        "inverse_at_1": young.inverse(g, 1.0),
    }
    _emit(data, args, "young_inspect")
    return 0


def _cmd_young_check(args):
    g = _gauge_from_args(args)
    s_grid = np.logspace(-2, 8, 50)
    data = {"gauge": g.to_dict()}
    if g.convex_ok and not (isinstance(g, young.Power) and g.p == 1.0):
        data["duality_sandwich"] = young.check_duality_sandwich(g, s_grid).as_dict()
    tail = young.bp_tail(g, args.p)
    data["tail_test"] = tail.as_dict()
    analytic = young.bp_verdict_analytic(g, args.p)
    if analytic:
        data["tail_verdict_analytic"] = analytic
    if isinstance(g, (young.LogBump, young.LogLogBump)):
        data["asymptotics"] = young.log_bump_asymptotics_check(g).as_dict()
    _emit(data, args, "young_check")
    if args.out and not args.no_figures:
        figures.save_tail_curve(data["tail_test"], args.out / "young_check_tail.png",
                                label=json.dumps(g.to_dict()))
    return 0


# -- orlicz ----------------------------------------------------------------------


def _cmd_orlicz_avg(args):
    domain = _parse_domain(args.domain)
    f = make_function(_fn_spec(args.fn), domain, 2 ** args.depth)
    g = _gauge_from_args(args)
    Q = _parse_cube(args.cube) if args.cube else f.top_cube()
    rep = orlicz_average(g, f, Q)
    _emit(
        {
            "value": rep.value,
            "cube": Q.as_list(),
            "gauge": g.to_dict(),
            "iterations": rep.iterations,
        },
        args,
        "orlicz_avg",
    )
    return 0


# -- oscillation ------------------------------------------------------------------


def _cmd_osc(args):
    domain = _parse_domain(args.domain)
    n = 2 ** args.depth
    b = make_function(_fn_spec(args.fn), domain, n)
    grid = _grid_from_args(args, domain)
    if args.mode == "bmo":
        rep = oscillation.bmo_seminorm(b, grid, keep_table=bool(args.out))
        data = rep.as_dict()
    elif args.mode == "phi":
        g = _gauge_from_args(args)
        rep = oscillation.osc_seminorm(g, b, grid, keep_table=bool(args.out))
        data = rep.as_dict()
    else:  # rootcheck
        rep = oscillation.root_bmo_check(b, args.a, grid)
        data = rep.as_dict()
    _emit(data, args, f"osc_{args.mode}")
    return 0


# -- sparse -----------------------------------------------------------------------


def _cmd_sparse_build(args):
    domain = _parse_domain(args.domain)
    n = 2 ** args.depth
    f = make_function(_fn_spec(args.fn), domain, n)
    if np.any(f.values < 0):
        f = abs(f)
    grid = _grid_from_args(args, domain)
    S = sparse.build_sparse_stopping(f, grid, args.ratio)
    data = S.to_json_dict()
    data["achieved_delta"] = S.achieved_delta()
    _emit(data, args, "sparse_family")
    return 0


def _cmd_sparse_verify(args):
    with open(args.family) as fh:
        d = json.load(fh)
    cubes = [Cube(a, side) for a, side in d["cubes"]]
    delta = args.delta if args.delta is not None else d["delta"]
    try:
        S = sparse.verify_or_build_exceptional(cubes, delta, tuple(d["domain"]), d["n"])
    except SparsityError as exc:
        _emit(
            {"ok": False, "offending_cube": exc.cube.as_list(), "achieved_ratio": exc.ratio},
            args,
            "sparse_verify",
        )
        return 1
    _emit({"ok": True, "delta": delta, "achieved_delta": S.achieved_delta()}, args, "sparse_verify")
    return 0


def _cmd_sparse_apply(args):
    with open(args.family) as fh:
        S = sparse.SparseFamily.from_json_dict(json.load(fh))
    domain, n = S.domain, S.n
    b = make_function(_fn_spec(args.symbol), domain, n)
    f = make_function(_fn_spec(args.fn), domain, n)
    op = sparse.apply_sparse_adjoint if args.adjoint else sparse.apply_sparse
    out = op(S, b, args.m, f)
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        out.to_csv(args.out / "sparse_apply.csv")
        if not args.no_figures:
            figures.save_function_overlay(
                [("input", f.midpoints(), f.values), ("output", out.midpoints(), out.values)],
                args.out / "sparse_apply.png",
                title=f"sparse {'adjoint ' if args.adjoint else ''}operator, m={args.m}",
            )
    print(json.dumps({"output_linf": float(np.abs(out.values).max()),
                      "output_l1": out.integral()}, indent=2))
    return 0


# -- operators ---------------------------------------------------------------------


def _cmd_op(args):
    domain = _parse_domain(args.domain)
    n = 2 ** args.depth
    f = make_function(_fn_spec(args.fn), domain, n)
    if args.mode == "hilbert":
        out = operators.hilbert(f)
        name = "hilbert"
    else:
        b = make_function(_fn_spec(args.symbol), domain, n)
        if args.form == "kernel":
            out = operators.commutator_kernel_apply(b, args.m, f)
        else:
            out = operators.commutator_recursive(b, args.m, f)
        name = f"commutator_m{args.m}_{args.form}"
    data = {
        "operator": name,
        "output_linf": float(np.abs(out.values).max()),
        "output_l2": out.lp_norm(2.0),
    }
    if args.at is not None:
        xs = [float(t) for t in args.at.split(",")]
        if args.mode == "hilbert":
            vals = operators.hilbert(f, eval_points=xs)
        else:
            vals = operators.commutator_kernel_apply(b, args.m, f, eval_points=xs)
        data["values_at"] = {str(x): float(v) for x, v in zip(xs, vals)}
    _emit(data, args, name)
    if args.out:
        out.to_csv(args.out / f"{name}.csv")
        if not args.no_figures:
            figures.save_function_overlay(
                [("input", f.midpoints(), f.values), ("output", out.midpoints(), out.values)],
                args.out / f"{name}.png",
                title=name,
            )
    return 0


# -- bump --------------------------------------------------------------------------


def _load_weights_symbol(args, need_symbol=True):
    domain = _parse_domain(args.domain)
    n = 2 ** args.depth
    u = make_weight(_fn_spec(args.u), domain, n)
    v = make_weight(_fn_spec(args.v), domain, n) if args.v else u
    b = make_function(_fn_spec(args.symbol), domain, n) if need_symbol and args.symbol else None
    grid = _grid_from_args(args, domain)
    return domain, n, u, v, b, grid


def _cmd_bump_K(args):
    _, _, u, v, b, grid = _load_weights_symbol(args)
    quad = [young.young_from_dict(json.loads(t)) for t in (args.A, args.B, args.C, args.D)]
    rep = bumps.bump_constant_K(*quad, b, args.m, u, v, args.p, grid, keep_table=bool(args.out))
    data = rep.as_dict()
    table = data.pop("per_cube", None)
    _emit(data, args, "bump_K")
    if args.out and table:
        _emit_cube_table([((a, s), t1, t2) for (a, s), t1, t2 in table], args.out, "bump_K")
        if not args.no_figures:
            figures.save_bump_profile(rep.as_dict(), args.out / "bump_K_profile.png")
    return 0


def _cmd_bump_preset(args):
    _, _, u, v, b, grid = _load_weights_symbol(args, need_symbol=False)
    rep = bumps.separated_log_bump(
        args.preset, u, v, args.p, grid, m=args.m, delta=args.delta, eps=args.eps,
        b=b, a_root=args.a_root, keep_table=bool(args.out),
    )
    data = rep.as_dict()
    table = data.pop("per_cube", None)
    _emit(data, args, f"bump_preset_{args.preset}")
    if args.out and table:
        _emit_cube_table([((a, s), t1, t2) for (a, s), t1, t2 in table],
                         args.out, f"bump_preset_{args.preset}")
        if not args.no_figures:
            figures.save_bump_profile(rep.as_dict(), args.out / f"bump_preset_{args.preset}.png",
                                      title=f"preset {args.preset}")
    return 0


def _cmd_bump_necessity(args):
    _, _, u, v, b, grid = _load_weights_symbol(args)
    rep = bumps.necessity_constants(b, args.m, u, v, args.p, grid)
    _emit(rep.as_dict(), args, "bump_necessity")
    return 0


def _cmd_bump_ap(args):
    domain = _parse_domain(args.domain)
    n = 2 ** args.depth
    w = make_weight(_fn_spec(args.u), domain, n)
    grid = _grid_from_args(args, domain)
    data = {
        "ap": bumps.ap_constant(w, args.p, grid).as_dict(),
        "chain": bumps.ap_chain_check(w, args.p, grid).as_dict(),
    }
    if args.reverse_holder_cap is not None:
        data["reverse_holder"] = bumps.reverse_holder_exponent(
            w, grid, args.reverse_holder_cap
        ).as_dict()
    _emit(data, args, "bump_ap")
    return 0


# -- scenarios ----------------------------------------------------------------------


def _apply_overrides(sc, args):
    sc = dict(sc)
    if args.depth is not None:
        sc["depth"] = args.depth
    if args.shifts is not None:
        sc["shifts"] = args.shifts
    if args.seed is not None:
        sc["seed"] = args.seed
    return sc


def _cmd_run(args):
    sc = _apply_overrides(harness.load_scenario(args.scenario), args)
    report = harness.run_scenario(sc)
    stem = f"run_{report['scenario']['name'].replace(' ', '_')}"
    table = report["K_symbol"].pop("per_cube", None)
    _emit(report, args, stem)
    if args.out:
        if table:
            _emit_cube_table([((a, s), t1, t2) for (a, s), t1, t2 in table], args.out, stem)
        if not args.no_figures:
            report["K_symbol"]["per_cube"] = table
            figures.report_figures(report, args.out, stem)
    return 0 if report["all_hard_pass"] else 1


def _cmd_sweep(args):
    sc = _apply_overrides(harness.load_scenario(args.scenario), args)
    depths = [int(d) for d in args.depths.split(",")]
    table = harness.refinement_sweep(sc, depths)
    _emit(table, args, "sweep")
    if args.out and not args.no_figures:
        figures.sweep_figures(table, args.out, "sweep")
    return 0


def _cmd_suite(args):
    summary = harness.corollary_suite(seed=args.seed, keep_tables=bool(args.out))
    brief = {
        "all_hard_pass": summary["all_hard_pass"],
        "scenarios": {
            r["scenario"]["name"]: r["all_hard_pass"] for r in summary["scenarios"]
        },
        "root_bmo_ratios": [row["ratio"] for row in summary["extras"]["root_bmo"]],
        "one_weight_hard_ok": summary["extras"]["one_weight"]["hard_ok"],
    }
    print(json.dumps(brief, indent=2, sort_keys=True))
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "suite.json").write_text(
            json.dumps(summary, indent=2, sort_keys=True, default=str) + "\n"
        )
        _write_csv(brief, args.out / "suite.csv")
        if not args.no_figures:
            figures.suite_figures(summary, args.out)
    return 0 if summary["all_hard_pass"] else 1


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twoweight", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    # young
    yp = sub.add_parser("young", help="gauge calculus").add_subparsers(dest="mode", required=True)
    for mode, fn in (("inspect", _cmd_young_inspect), ("check", _cmd_young_check)):
        q = yp.add_parser(mode)
        q.add_argument("--gauge", help="gauge JSON record or preset name")
        q.add_argument("--p", type=float, default=2.0)
        q.add_argument("--m", type=int, default=1)
        q.add_argument("--delta", type=float, default=1.0)
        q.add_argument("--eps", type=float, default=1.0)
        if mode == "inspect":
            q.add_argument("--t", help="comma-separated evaluation points")
        _add_out_opts(q)
        q.set_defaults(func=fn)

    # orlicz
    op_ = sub.add_parser("orlicz").add_subparsers(dest="mode", required=True)
    q = op_.add_parser("avg")
    q.add_argument("--fn", required=True, help="generator JSON or CSV path")
    q.add_argument("--gauge", required=True)
    q.add_argument("--cube", help="'a,side' (default: whole domain)")
    q.add_argument("--p", type=float, default=2.0)
    q.add_argument("--m", type=int, default=1)
    q.add_argument("--delta", type=float, default=1.0)
    q.add_argument("--eps", type=float, default=1.0)
    _add_lattice_opts(q)
    _add_out_opts(q)
    q.set_defaults(func=_cmd_orlicz_avg)

    # osc
    osp = sub.add_parser("osc").add_subparsers(dest="mode", required=True)
    for mode in ("bmo", "phi", "rootcheck"):
        q = osp.add_parser(mode)
        q.add_argument("--fn", required=True)
        if mode == "phi":
            q.add_argument("--gauge", required=True)
            q.add_argument("--p", type=float, default=2.0)
            q.add_argument("--m", type=int, default=1)
            q.add_argument("--delta", type=float, default=1.0)
            q.add_argument("--eps", type=float, default=1.0)
        if mode == "rootcheck":
            q.add_argument("--a", type=float, required=True)
        _add_lattice_opts(q)
        _add_out_opts(q)
        q.set_defaults(func=_cmd_osc)

    # sparse
    spp = sub.add_parser("sparse").add_subparsers(dest="mode", required=True)
    q = spp.add_parser("build")
    q.add_argument("--fn", required=True, help="nonnegative driver")
    q.add_argument("--ratio", type=float, default=2.0)
    _add_lattice_opts(q)
    _add_out_opts(q)
    q.set_defaults(func=_cmd_sparse_build)
    q = spp.add_parser("verify")
    q.add_argument("--family", required=True, help="family JSON file")
    q.add_argument("--delta", type=float, default=None)
    _add_out_opts(q)
    q.set_defaults(func=_cmd_sparse_verify)
    q = spp.add_parser("apply")
    q.add_argument("--family", required=True)
    q.add_argument("--symbol", required=True)
    q.add_argument("--fn", required=True)
    q.add_argument("--m", type=int, default=1)
    q.add_argument("--adjoint", action="store_true")
    _add_out_opts(q)
    q.set_defaults(func=_cmd_sparse_apply)

    # op
    opp = sub.add_parser("op").add_subparsers(dest="mode", required=True)
    q = opp.add_parser("hilbert")
    q.add_argument("--fn", required=True)
    q.add_argument("--at", help="extra evaluation points 'x1,x2,...'")
    _add_lattice_opts(q, depth=12)
    _add_out_opts(q)
    q.set_defaults(func=_cmd_op)
    q = opp.add_parser("commutator")
    q.add_argument("--fn", required=True)
    q.add_argument("--symbol", required=True)
    q.add_argument("--m", type=int, default=1)
    q.add_argument("--form", choices=("recursive", "kernel"), default="recursive")
    q.add_argument("--at", help="extra evaluation points 'x1,x2,...'")
    _add_lattice_opts(q, depth=10)
    _add_out_opts(q)
    q.set_defaults(func=_cmd_op)

    # bump
    bpp = sub.add_parser("bump").add_subparsers(dest="mode", required=True)
    q = bpp.add_parser("K")
    for slot in "ABCD":
        q.add_argument(f"--{slot}", required=True, help=f"gauge {slot} JSON")
    q.add_argument("--symbol", required=True)
    q.add_argument("--u", required=True)
    q.add_argument("--v")
    q.add_argument("--p", type=float, default=2.0)
    q.add_argument("--m", type=int, default=1)
    _add_lattice_opts(q)
    _add_out_opts(q)
    q.set_defaults(func=_cmd_bump_K)
    q = bpp.add_parser("preset")
    q.add_argument("--preset", required=True, choices=bumps.PRESETS)
    q.add_argument("--symbol")
    q.add_argument("--u", required=True)
    q.add_argument("--v")
    q.add_argument("--p", type=float, default=2.0)
    q.add_argument("--m", type=int, default=1)
    q.add_argument("--delta", type=float, default=1.0)
    q.add_argument("--eps", type=float, default=1.0)
    q.add_argument("--a-root", type=float, default=None)
    _add_lattice_opts(q)
    _add_out_opts(q)
    q.set_defaults(func=_cmd_bump_preset)
    q = bpp.add_parser("necessity")
    q.add_argument("--symbol", required=True)
    q.add_argument("--u", required=True)
    q.add_argument("--v")
    q.add_argument("--p", type=float, default=2.0)
    q.add_argument("--m", type=int, default=1)
    _add_lattice_opts(q)
    _add_out_opts(q)
    q.set_defaults(func=_cmd_bump_necessity)
    q = bpp.add_parser("ap")
    q.add_argument("--u", required=True, help="the weight")
    q.add_argument("--p", type=float, default=2.0)
    q.add_argument("--reverse-holder-cap", type=float, default=None)
    _add_lattice_opts(q)
    _add_out_opts(q)
    q.set_defaults(func=_cmd_bump_ap)

    # scenarios
    q = sub.add_parser("run", help="run one scenario file")
    q.add_argument("scenario", type=Path)
    q.add_argument("--depth", type=int, default=None)
    q.add_argument("--shifts", type=int, choices=(1, 3), default=None)
    q.add_argument("--seed", type=int, default=None)
    _add_out_opts(q)
    q.set_defaults(func=_cmd_run)

    q = sub.add_parser("sweep", help="refinement sweep of one scenario")
    q.add_argument("scenario", type=Path)
    q.add_argument("--depths", default="6,8,10")
    q.add_argument("--depth", type=int, default=None)
    q.add_argument("--shifts", type=int, choices=(1, 3), default=None)
    q.add_argument("--seed", type=int, default=None)
    _add_out_opts(q)
    q.set_defaults(func=_cmd_sweep)

    q = sub.add_parser("suite", help="run the shipped scenario suite")
    q.add_argument("--seed", type=int, default=None)
    _add_out_opts(q)
    q.set_defaults(func=_cmd_suite)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TwoWeightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

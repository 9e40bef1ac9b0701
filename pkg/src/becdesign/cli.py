"""Command-line front end.

Exit codes: 0 success, 1 malformed input (bad arguments or unparseable
files), 2 infeasible design request (the message carries the remedy).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from importlib import resources

import numpy as np

from . import bounds as bounds_mod
from . import convergence, design_eps, design_rate, io, optimizer, series, simulator
from .ensemble import Ensemble, check_dist, design_rate_of, variable_dist
from .errors import (
    BecDesignError,
    InfeasibleChannelError,
    InfeasibleRateError,
    InfeasibleSearchError,
)

REPRODUCE_TARGETS = (
    "example1", "example3", "example4", "example5", "example8",
    "example9", "example10", "example11",
    "table1", "table2", "table3", "fig1",
)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for infeasible designs here
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def fixture_path(name: str) -> str:
    return str(resources.files("becdesign").joinpath("fixtures", f"{name}.json"))


def load_fixture(name: str):
    return io.load_ensemble(fixture_path(name))


def _fmt4(x: float) -> str:
    return f"{x:.4f}"


def _print_summary(payload: dict, as_json: bool):
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for k, v in payload.items():
            if isinstance(v, float):
                v = _fmt4(v)
            print(f"{k}: {v}")


def _write_csv(path, header, rows, manifest):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    io.write_manifest(str(path) + ".manifest.json", manifest)


def _design(args) -> int:
    rho = io.load_rho_spec(args.rho)
    if args.category == "eps":
        if args.eps is None:
            raise ValueError("--eps is required for --category eps")
        if args.type == "a":
            res = design_eps.type_a_eps(rho, args.eps)
        elif args.type == "b":
            res = design_eps.type_b_eps(rho, args.eps, _need_p(args))
        else:
            res = design_eps.type_mb_eps(rho, args.eps, _need_p(args))
    else:
        if args.rate is None:
            raise ValueError("--rate is required for --category rate")
        if args.type == "a":
            res = design_rate.type_a_rate(rho, args.rate)
        elif args.type == "b":
            res = design_rate.type_b_rate(rho, args.rate, _need_p(args))
        else:
            res = design_rate.type_mb_rate(rho, args.rate, _need_p(args))
    meta = io.result_meta(res)
    if args.out:
        doc = io.ensemble_doc(res.ensemble, meta)
        doc["manifest"] = io.run_manifest("design", _params(args))
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    payload = dict(meta)
    payload["lambda"] = {str(d): c for d, c in res.ensemble.lam.coeffs.items()}
    if not args.json:
        print(res.summary())
        if args.out:
            print(f"written: {args.out}")
        return 0
    _print_summary(payload, True)
    return 0


def _need_p(args) -> int:
    if args.P is None:
        raise ValueError("--P is required for type b/mb designs")
    return args.P


def _params(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def _verify(args) -> int:
    ens, _ = io.load_ensemble(args.ensemble)
    verdict = convergence.check_convergent(ens, args.eps)
    _print_summary(
        {
            "convergent": verdict.convergent,
            "margin": verdict.margin,
            "witness_x": verdict.witness_x,
        },
        args.json,
    )
    return 0


def _threshold(args) -> int:
    ens, _ = io.load_ensemble(args.ensemble)
    thr = convergence.threshold(ens, tol=args.tol)
    _print_summary({"threshold": round(thr, 4), "raw": thr}, args.json)
    return 0


def _bounds(args) -> int:
    ens, meta = io.load_ensemble(args.ensemble)
    dc_bar = 1.0 / ens.rho.avg_inverse_degree()
    rate = args.rate if args.rate is not None else meta.get("design_rate")
    eps = args.eps if args.eps is not None else meta.get("design_eps")
    payload = {"dc_bar": dc_bar}
    if rate is not None:
        z = bounds_mod.threshold_upper_bound(rate, dc_bar)
        payload["threshold_upper_bound"] = z
        thr = meta.get("threshold_claimed")
        if thr is not None:
            payload["threshold_ratio_to_bound"] = thr / z
            payload["threshold_ratio_to_capacity"] = thr / (1.0 - rate)
    if eps is not None:
        r = bounds_mod.rate_upper_bound(eps, dc_bar)
        payload["rate_upper_bound"] = r
        dr = meta.get("design_rate", design_rate_of(ens))
        payload["rate_ratio_to_bound"] = dr / r
    if len(payload) == 1:
        raise ValueError("no design parameters: pass --eps and/or --rate")
    _print_summary(payload, args.json)
    return 0


def _taylor(args) -> int:
    rho = io.load_rho_spec(args.rho)
    tc = series.taylor_for(rho, args.M)
    rows = [(i, repr(tc.T(i))) for i in range(2, args.M + 1)]
    if args.out:
        _write_csv(args.out, ["i", "T_i"], rows,
                   io.run_manifest("taylor", _params(args)))
        print(f"written: {args.out} (tail mass {tc.tail_mass:.6g})")
    else:
        print("i,T_i")
        for i, t in rows:
            print(f"{i},{t}")
    return 0


def _search(args) -> int:
    rho = io.load_rho_spec(args.rho)
    reports = optimizer.sweep_degree_sets(
        args.P, args.dv_max, rho, args.eps,
        require_degree_two=args.require_degree_two,
        resolution=args.resolution,
    )
    header = ["degrees", "rate", "ratio_to_bound", "lambda"]
    rows = []
    for r in reports:
        lam = " + ".join(f"{c:.4f}x^{d - 1}" for d, c in r.best_lambda.coeffs.items())
        rows.append(["[" + ",".join(map(str, r.degree_set)) + "]",
                     f"{r.best_rate:.6f}", f"{r.ratio_to_bound:.6f}", lam])
    if args.out:
        _write_csv(args.out, header, rows, io.run_manifest("search", _params(args)))
        print(f"written: {args.out} ({len(rows)} degree sets)")
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(row))
    return 0


def _parse_eps_range(spec: str):
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("eps range must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        count = int(math.floor((stop - start) / step + 0.5)) + 1
        return [start + k * step for k in range(count)]
    return [float(p) for p in spec.split(",") if p]


def _simulate(args) -> int:
    ens, _ = io.load_ensemble(args.ensemble)
    eps_list = _parse_eps_range(args.eps)
    seed = args.seed if args.seed is not None else io.default_seed()
    curve = simulator.monte_carlo(
        ens,
        n=args.n,
        eps_list=eps_list,
        stop_target=args.stop,
        max_iters=args.max_iters,
        master_seed=seed,
        trial_cap=args.trial_cap,
        fixed_graph=args.fixed_graph,
        conditioning=args.conditioning,
    )
    header = ["eps", "trials", "word_events", "WER", "BER", "low_confidence"]
    rows = [
        (f"{p.eps:.6f}", p.trials, p.word_erasure_events,
         f"{p.word_erasure_rate:.8f}", f"{p.bit_erasure_rate:.8e}",
         int(p.low_confidence))
        for p in curve.points
    ]
    if args.out:
        _write_csv(args.out, header, rows,
                   io.run_manifest("simulate", _params(args), master_seed=seed))
        print(f"written: {args.out}")
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(str(v) for v in row))
    return 0


def _reproduce(args) -> int:
    outdir = args.outdir or os.path.join("reproductions", args.target)
    os.makedirs(outdir, exist_ok=True)
    seed = args.seed if args.seed is not None else io.default_seed()
    fn = globals()[f"_repro_{args.target}"]
    fn(outdir, seed)
    return 0


def _save_result(outdir, name, res):
    path = os.path.join(outdir, f"{name}.json")
    io.save_ensemble(path, res.ensemble, io.result_meta(res))
    print(res.summary())
    return path


def _repro_example1(outdir, seed):
    rho = check_dist({6: 1.0})
    res = design_eps.type_a_eps(rho, 0.48)
    _save_result(outdir, "type_a_eps048", res)
    thr = convergence.threshold(res.ensemble)
    print(f"bisection threshold: {thr:.4f}")


def _repro_example3(outdir, seed):
    rho = check_dist({6: 1.0})
    b = design_eps.type_b_eps(rho, 0.48, 4)
    _save_result(outdir, "type_b_eps048_p4", b)
    bound = design_eps.dv_lower_bound(rho, 0.48, 4)
    print(f"sufficient top-degree bound: {bound:.4f}")
    mb = design_eps.type_mb_eps(rho, 0.48, 4)
    _save_result(outdir, "type_mb_eps048_p4", mb)
    seven = dict(mb.ensemble.lam.coeffs)
    seven[7] = seven.pop(mb.Dv)
    verdict = convergence.check_convergent(
        Ensemble(variable_dist(seven), rho), 0.48)
    print(f"top degree 7 candidate convergent: {verdict.convergent}")


def _repro_example4(outdir, seed):
    res = design_rate.type_a_rate(check_dist({6: 1.0}), 0.5)
    _save_result(outdir, "type_a_rate05", res)


def _repro_example5(outdir, seed):
    rho = check_dist({6: 1.0})
    b = design_rate.type_b_rate(rho, 0.5, 4)
    _save_result(outdir, "type_b_rate05_p4", b)
    mb = design_rate.type_mb_rate(rho, 0.5, 4)
    _save_result(outdir, "type_mb_rate05_p4", mb)


def _repro_example8(outdir, seed):
    rho = check_dist({7: 1.0})
    a = design_rate.type_a_rate(rho, 0.5)
    _save_result(outdir, "type_a_rate05_dc7", a)
    mb = design_rate.type_mb_rate(rho, 0.5, 8)
    _save_result(outdir, "type_mb_rate05_dc7_p8", mb)
    for name, res in (("type-a", a), ("type-mb", mb)):
        thr = convergence.threshold(res.ensemble)
        print(f"{name} bisection threshold: {thr:.4f}")


def _repro_example9(outdir, seed):
    res = design_rate.type_mb_rate(check_dist({11: 1.0}), 0.5, 90)
    _save_result(outdir, "type_mb_rate05_dc11_p90", res)


def _repro_example10(outdir, seed):
    for name in ("c1", "c3"):
        ens, meta = load_fixture(name)
        thr = convergence.threshold(ens)
        print(f"{name}: threshold {thr:.4f} (reported {meta['reported_threshold']})")
    c2 = design_rate.type_mb_rate(check_dist({7: 1.0}), 0.5, 7)
    _save_result(outdir, "c2_type_mb_rate05_dc7_p7", c2)
    print(f"c2: bisection threshold {convergence.threshold(c2.ensemble):.4f}")


def _repro_example11(outdir, seed):
    rho = check_dist({5: 1.0})
    reports = optimizer.sweep_degree_sets(4, 7, rho, 0.48)
    rows = [
        ("[" + ",".join(map(str, r.degree_set)) + "]",
         f"{r.best_rate:.4f}", f"{r.ratio_to_bound:.4f}")
        for r in reports
    ]
    _write_csv(os.path.join(outdir, "search_p4_dc5_eps048.csv"),
               ["degrees", "rate", "ratio_to_bound"], rows,
               io.run_manifest("reproduce example11", {}))
    for row in rows[:3]:
        print(" ".join(row))
    mb = design_eps.type_mb_eps(rho, 0.48, 4)
    _save_result(outdir, "type_mb_eps048_dc5_p4", mb)
    print(f"type-mb rate ratio to bound: "
          f"{mb.design_rate / bounds_mod.rate_upper_bound(0.48, 5.0):.4f}")


_repro_table3 = _repro_example11


def _repro_table1(outdir, seed):
    rows = []
    for dc in (5, 6, 7):
        res = design_rate.type_mb_rate(check_dist({dc: 1.0}), 0.5, 4)
        z = bounds_mod.threshold_upper_bound(0.5, dc)
        lam = " + ".join(f"{c:.4f}x^{d - 1}"
                         for d, c in res.ensemble.lam.coeffs.items())
        rows.append((dc, res.Dv, f"{res.threshold_claimed / 0.5:.4f}",
                     f"{res.threshold_claimed / z:.4f}", lam))
        print(f"Dc={dc} Dv={res.Dv} thr/0.5={res.threshold_claimed / 0.5:.4f} "
              f"thr/bound={res.threshold_claimed / z:.4f}")
    _write_csv(os.path.join(outdir, "table1.csv"),
               ["Dc", "Dv", "thr_over_half", "thr_over_bound", "lambda"],
               rows, io.run_manifest("reproduce table1", {}))


def _repro_table2(outdir, seed):
    rows = []
    for P, dc in ((5, 7), (6, 7), (7, 7), (8, 7), (9, 8), (10, 8)):
        res = design_rate.type_mb_rate(check_dist({dc: 1.0}), 0.5, P)
        z = bounds_mod.threshold_upper_bound(0.5, dc)
        lam = " + ".join(f"{c:.4f}x^{d - 1}"
                         for d, c in res.ensemble.lam.coeffs.items())
        rows.append((P, dc, res.Dv, f"{res.threshold_claimed / 0.5:.4f}",
                     f"{res.threshold_claimed / z:.4f}", lam))
        print(f"P={P} Dc={dc} Dv={res.Dv} thr={res.threshold_claimed:.4f}")
    _write_csv(os.path.join(outdir, "table2.csv"),
               ["P", "Dc", "Dv", "thr_over_half", "thr_over_bound", "lambda"],
               rows, io.run_manifest("reproduce table2", {}))


def _repro_fig1(outdir, seed):
    rho = check_dist({7: 1.0})
    codes = {
        "type_a": design_rate.type_a_rate(rho, 0.5),
        "type_mb": design_rate.type_mb_rate(rho, 0.5, 8),
    }
    eps_list = [round(0.40 + 0.01 * k, 4) for k in range(11)]
    for name, res in codes.items():
        curve = simulator.monte_carlo(
            res.ensemble, n=5000, eps_list=eps_list, stop_target=100,
            max_iters=200, master_seed=seed, trial_cap=3000,
            fixed_graph=True, conditioning="expurgate",
        )
        rows = [
            (f"{p.eps:.4f}", p.trials, p.word_erasure_events,
             f"{p.word_erasure_rate:.6f}", f"{p.bit_erasure_rate:.6e}",
             int(p.low_confidence))
            for p in curve.points
        ]
        _write_csv(os.path.join(outdir, f"fig1_{name}.csv"),
                   ["eps", "trials", "word_events", "WER", "BER", "low_confidence"],
                   rows, io.run_manifest("reproduce fig1", {"code": name},
                                         master_seed=seed))
        print(f"{name}: " + " ".join(f"{p.eps:.2f}:{p.word_erasure_rate:.3f}"
                                     for p in curve.points))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="becdesign",
                description="deterministic LDPC degree-distribution designs "
                            "for the binary erasure channel")
    sub = p.add_subparsers(dest="cmd", required=True)

    d = sub.add_parser("design", parents=[], help="construct an ensemble")
    d.add_argument("--category", choices=("eps", "rate"), required=True)
    d.add_argument("--rho", required=True,
                   help="check side: 'regular:Dc' or an ensemble file")
    d.add_argument("--eps", type=float)
    d.add_argument("--rate", type=float)
    d.add_argument("--P", type=int)
    d.add_argument("--type", choices=("a", "b", "mb"), default="a")
    d.add_argument("--out")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=_design)

    v = sub.add_parser("verify", help="convergence verdict at a channel parameter")
    v.add_argument("--ensemble", required=True)
    v.add_argument("--eps", type=float, required=True)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=_verify)

    t = sub.add_parser("threshold", help="bisection threshold of an ensemble")
    t.add_argument("--ensemble", required=True)
    t.add_argument("--tol", type=float, default=1e-6)
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=_threshold)

    b = sub.add_parser("bounds", help="capacity-style bounds for a design")
    b.add_argument("--ensemble", required=True)
    b.add_argument("--eps", type=float)
    b.add_argument("--rate", type=float)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=_bounds)

    ty = sub.add_parser("taylor", help="inverse-series coefficients as CSV")
    ty.add_argument("--rho", required=True)
    ty.add_argument("--M", type=int, default=series.DEFAULT_M)
    ty.add_argument("--out")
    ty.set_defaults(func=_taylor)

    s = sub.add_parser("search", help="LP rate optimization over degree sets")
    s.add_argument("--P", type=int, required=True)
    s.add_argument("--dv-max", dest="dv_max", type=int, required=True)
    s.add_argument("--rho", required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--require-degree-two", action="store_true")
    s.add_argument("--resolution", type=int, default=convergence.GRID_POINTS)
    s.add_argument("--out")
    s.set_defaults(func=_search)

    si = sub.add_parser("simulate", help="finite-length erasure-rate curve")
    si.add_argument("--ensemble", required=True)
    si.add_argument("--n", type=int, default=5000)
    si.add_argument("--eps", required=True,
                    help="start:stop:step or comma list")
    si.add_argument("--stop", type=int, default=100)
    si.add_argument("--max-iters", dest="max_iters", type=int, default=200)
    si.add_argument("--seed", type=int)
    si.add_argument("--trial-cap", dest="trial_cap", type=int,
                    default=simulator.TRIAL_CAP)
    si.add_argument("--fixed-graph", action="store_true",
                    help="reuse one sampled code for the whole curve")
    si.add_argument("--conditioning", choices=("none", "simple", "expurgate"),
                    default="none")
    si.add_argument("--out")
    si.set_defaults(func=_simulate)

    r = sub.add_parser("reproduce", help="run a bundled case study")
    r.add_argument("target", choices=REPRODUCE_TARGETS)
    r.add_argument("--outdir")
    r.add_argument("--seed", type=int)
    r.set_defaults(func=_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InfeasibleChannelError, InfeasibleRateError, InfeasibleSearchError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except (io.EnsembleFileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BecDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``hrvtail <subcommand> ...``.

Exit status is 0 on success, 1 on usage errors and 2 on data errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import __version__, dataio
from .angular import DEFAULT_K_ANGLES, empirical_s0, fit_wedge, top_k_angles
from .errors import HrvError
from .geometry import Branch, Wedge, region_filter_upper
from .hrv import DetectConfig, branch_transform, detect, estimate_alpha0, k_for_b0
from .risk import RatioStudyConfig, RiskQuery, ratio_study, risk_estimate
from .simgen import SimConfig, simulate
from .tailest import alt_hill_curve, hill, hill_curve, hillish_pair_curve, jitter, qq_curve, qq_slope


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _pair(text, conv=float):
    parts = [p for p in text.replace(":", ",").split(",") if p]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two values like 'a,b', got {text!r}")
    return tuple(conv(p) for p in parts)


def _krange(text):
    return _pair(text, int)


def _default_seed():
    return int(os.environ.get("HRVTAIL_SEED", "0"))


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_series(path, column):
    _, arr = dataio.read_table(path)
    if arr.shape[1] == 1:
        return arr[:, 0]
    return arr[:, column - 1]


def _wedge_args(p, fit=True):
    p.add_argument("--al", type=float, help="lower wedge slope a_l (with --au, overrides fitting)")
    p.add_argument("--au", type=float, help="upper wedge slope a_u")
    if fit:
        p.add_argument("--k-angles", type=int, default=None,
                       help=f"points used for angle quantiles (default {DEFAULT_K_ANGLES})")
        p.add_argument("--q", type=_pair, default=None,
                       help="angle quantile pair q_low,q_high (default 0.05,0.95; the data "
                            "workflows used 0.25,0.75 for degrees and 0.10,0.90 for returns)")


def _explicit_wedge(args):
    if (args.al is None) != (args.au is None):
        raise UsageError("--al and --au must be given together")
    return None if args.al is None else Wedge(args.al, args.au)


def _resolve_wedge(args, z):
    w = _explicit_wedge(args)
    if w is not None:
        return w, False
    k = args.k_angles or DEFAULT_K_ANGLES
    q = args.q or (0.05, 0.95)
    ang = top_k_angles(z, min(k, len(z)))
    if np.any(z < 0):
        ang = ang.first_quadrant()
    return fit_wedge(ang, *q), True


def _curve_ks(args, n):
    if args.k is not None:
        return None
    lo, hi = args.k_range if args.k_range else (2, n - 1)
    return np.arange(lo, min(hi, n - 1) + 1)


# subcommand handlers -------------------------------------------------------

def cmd_simulate(args):
    z = simulate(SimConfig(args.n, args.seed, args.model))
    dataio.write_xy_csv(z, args.out)


def cmd_hill(args):
    x = _load_series(args.input, args.column)
    if args.k is not None:
        print(repr(hill(x, args.k)))
        return
    curve = hill_curve(x, _curve_ks(args, int(np.sum(x > 0))))
    _write_or_print_curve(curve, args.out)


def cmd_althill(args):
    x = _load_series(args.input, args.column)
    grid = None
    if args.theta_range:
        lo, hi = args.theta_range
        grid = np.round(np.arange(lo, hi + 1e-9, args.theta_step), 10)
    _write_or_print_curve(alt_hill_curve(x, grid), args.out)


def cmd_qq(args):
    x = _load_series(args.input, args.column)
    if args.k is not None:
        print(repr(qq_slope(x, args.k)))
        return
    _write_or_print_curve(qq_curve(x, _curve_ks(args, int(np.sum(x > 0)))), args.out)


def _write_or_print_curve(curve, out):
    if out:
        dataio.write_curve(curve, out)
    else:
        for k, v in curve.entries():
            print(f"{int(k)},{float(v)!r}")


def cmd_hillish(args):
    z = dataio.read_xy_csv(args.input)
    w = _explicit_wedge(args)
    if w is not None:
        if args.returns:
            z = region_filter_upper(z, w)
        bd = branch_transform(z, w, Branch(args.branch), prefiltered=args.returns)
        xi, eta = bd.xi, bd.eta
    else:
        xi, eta = z[:, 0], z[:, 1]
    if args.jitter_seed is not None:
        eta = jitter(eta, args.jitter_seed)
    lo, hi = args.k_range if args.k_range else (2, len(xi))
    ks = np.arange(lo, min(hi, len(xi)) + 1)
    pos, neg = hillish_pair_curve(xi, eta, ks)
    header = ["k", "hillish", "hillish_neg"]
    if args.out:
        dataio.write_columns(args.out, header, [pos.ks, pos.values, neg.values])
    else:
        print(",".join(header))
        for k, a, b in zip(pos.ks, pos.values, neg.values):
            print(f"{int(k)},{float(a)!r},{float(b)!r}")


def cmd_diamond(args):
    z = dataio.read_xy_csv(args.input)
    ang = top_k_angles(z, args.k)
    pts = ang.points / ang.norms[:, None]
    cols = [pts[:, 0], pts[:, 1], ang.norms]
    if args.out:
        dataio.write_columns(args.out, ["theta1", "theta2", "norm"], cols)
    else:
        print("theta1,theta2,norm")
        for row in zip(*cols):
            print(",".join(repr(float(v)) for v in row))


def cmd_wedge_fit(args):
    z = dataio.read_xy_csv(args.input)
    w, _ = _resolve_wedge(args, z)
    doc = {"a_l": w.a_l, "a_u": w.a_u, "theta_l": w.theta_l, "theta_u": w.theta_u, "valid": w.valid,
           "k_angles": args.k_angles or DEFAULT_K_ANGLES, "q": list(args.q or (0.05, 0.95))}
    _emit(doc, args.out)


def _detect_config(args):
    base = {}
    if args.config:
        doc = dataio.read_report(args.config)
        base = doc.get("config", doc)
    cfg = DetectConfig.from_dict(base) if base else DetectConfig()
    w = _explicit_wedge(args)
    if w is not None:
        cfg.wedge = w
    if args.k_angles is not None:
        cfg.k_angles = args.k_angles
    if args.q is not None:
        cfg.q_low, cfg.q_high = args.q
    if args.k is not None:
        cfg.k = args.k
    if args.stable is not None:
        cfg.stable_lo, cfg.stable_hi = args.stable
    if args.margin is not None:
        cfg.alpha_margin = args.margin
    if args.band is not None:
        cfg.hillish_band = args.band
    if args.jitter_seed is not None:
        cfg.jitter_seed = args.jitter_seed
    if args.marginal is not None:
        cfg.marginal = args.marginal
    if args.returns:
        cfg.returns = True
    return cfg


def cmd_hrv_detect(args):
    z = dataio.read_xy_csv(args.input)
    cfg = _detect_config(args)
    report = detect(z, cfg)
    doc = report.to_dict(include_curves=not args.no_curves)
    doc["config"]["input"] = os.path.basename(args.input)
    if args.out:
        dataio.write_report(doc, args.out)
    else:
        print(json.dumps(doc, indent=2))
    if args.curves_dir:
        os.makedirs(args.curves_dir, exist_ok=True)
        for name, c in report.curves.items():
            dataio.write_curve(c, os.path.join(args.curves_dir, f"{name}.csv"))


def cmd_risk(args):
    z = dataio.read_xy_csv(args.input)
    w, fitted = _resolve_wedge(args, z)
    if (args.b0 is None) == (args.k is None):
        raise UsageError("give exactly one of --b0 and --k")
    k = args.k if args.k is not None else k_for_b0(z, w, args.b0)
    alpha0 = args.alpha0
    if alpha0 is None:
        alpha0 = estimate_alpha0(z, w, k)["pooled"]
    est = risk_estimate(z, w, RiskQuery(args.c, args.x), alpha0, k=args.k, b0=args.b0,
                        on_conflict="warn" if args.allow_conflict else "raise")
    if args.s0_out:
        dataio.write_s0(empirical_s0(z, w, est.k_used), args.s0_out)
    _emit({"p_hat": est.p_hat, "alpha0": est.alpha0_used, "b0": est.b0_used, "k": est.k_used, "n": est.n,
           "c": est.c, "x": est.x, "wedge": w.to_dict(), "wedge_fitted": fitted, "flags": est.flags}, args.out)


def cmd_ratio_study(args):
    w = _explicit_wedge(args)
    cfg = RatioStudyConfig(seed=args.seed, b0=args.b0, wedge=w, xs=tuple(args.xs))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        table = ratio_study(args.reps, args.n, cfg, workers=args.workers)
    if args.out:
        table.write(args.out)
    if args.summary:
        table.write_summary(args.summary)
    if not args.out and not args.summary:
        print("quantity,x,min,q1,median,q3,max")
        for r in table.summary():
            print(",".join([r["quantity"], repr(r["x"])] + [f"{r[k]:.6g}" for k in ("min", "q1", "median", "q3", "max")]))


def cmd_degrees(args):
    recs = dataio.edges_to_degrees(args.input)
    if args.xy:
        dataio.write_xy_csv(dataio.degrees_to_sample(recs), args.out, header=("out_degree", "in_degree"))
    else:
        dataio.write_degrees(recs, args.out)
    print(f"{len(recs)} nodes, {sum(r.out_degree for r in recs)} edges", file=sys.stderr)


def cmd_returns(args):
    cols = args.columns or None
    header, prices = dataio.read_table(args.input, columns=cols)
    series = [dataio.prices_to_returns(prices[:, j], log=args.log).returns for j in range(prices.shape[1])]
    names = [f"r{j + 1}" for j in range(len(series))]
    if header is not None and cols:
        names = [f"{header[int(c)] if str(c).isdigit() else c}_return" for c in cols]
    dataio.write_columns(args.out, names, series)


# parser --------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="hrvtail", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"hrvtail {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("simulate", help="generate a sample from one of the two models")
    s.add_argument("--model", choices=["example1", "example2"], default="example2")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate)

    for name, fn, help_ in (("hill", cmd_hill, "Hill estimate or Hill plot data"),
                            ("qq", cmd_qq, "QQ-slope estimate or curve")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--in", dest="input", required=True)
        s.add_argument("--column", type=int, default=1, choices=[1, 2])
        s.add_argument("--k", type=int, help="single k; prints one value")
        s.add_argument("--k-range", type=_krange, help="lo,hi for a curve")
        s.add_argument("--out")
        s.set_defaults(func=fn)

    s = sub.add_parser("althill", help="altHill plot data, k = ceil(n^theta)")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--column", type=int, default=1, choices=[1, 2])
    s.add_argument("--theta-range", type=_pair, help="lo,hi (default 0.10,0.95)")
    s.add_argument("--theta-step", type=float, default=0.01)
    s.add_argument("--out")
    s.set_defaults(func=cmd_althill)

    s = sub.add_parser("hillish", help="Hillish pair curves for (xi, eta) or for one side of a wedge")
    s.add_argument("--in", dest="input", required=True)
    _wedge_args(s, fit=False)
    s.add_argument("--branch", choices=["above", "below"], default="above")
    s.add_argument("--returns", action="store_true", help="apply the upper-region filter first (data on the plane)")
    s.add_argument("--k-range", type=_krange)
    s.add_argument("--jitter-seed", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_hillish)

    s = sub.add_parser("diamond", help="diamond-plot coordinates of the k largest points")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--k", type=int, default=DEFAULT_K_ANGLES)
    s.add_argument("--out")
    s.set_defaults(func=cmd_diamond)

    s = sub.add_parser("wedge-fit", help="fit the wedge from angle quantiles")
    s.add_argument("--in", dest="input", required=True)
    _wedge_args(s)
    s.add_argument("--out")
    s.set_defaults(func=cmd_wedge_fit)

    s = sub.add_parser("hrv-detect", help="full detection report as JSON")
    s.add_argument("--in", dest="input", required=True)
    _wedge_args(s)
    s.add_argument("--k", type=int, help="order statistics for alpha, alpha0 and b0 (default 2%% of n)")
    s.add_argument("--stable", type=_pair, help="stable k-range as fractions of n (default 0.005,0.05)")
    s.add_argument("--margin", type=float, help="alpha0 - alpha margin (default 0.3)")
    s.add_argument("--band", type=float, help="Hillish band half-width (default 0.15)")
    s.add_argument("--marginal", choices=["hill", "qq"])
    s.add_argument("--jitter-seed", type=int, help="break ties in eta (integer data)")
    s.add_argument("--returns", action="store_true",
                   help="data on the plane: analyse only points nearest the upper wedge boundary")
    s.add_argument("--config", help="JSON report or config to start from")
    s.add_argument("--no-curves", action="store_true")
    s.add_argument("--curves-dir")
    s.add_argument("--out")
    s.set_defaults(func=cmd_hrv_detect)

    s = sub.add_parser("risk", help="estimate P(Z2 - c Z1 > x) via hidden regular variation")
    s.add_argument("--in", dest="input", required=True)
    _wedge_args(s)
    s.add_argument("--c", type=float, required=True)
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--b0", type=float)
    s.add_argument("--k", type=int)
    s.add_argument("--alpha0", type=float, help="known hidden index (default: Hill estimate)")
    s.add_argument("--allow-conflict", action="store_true")
    s.add_argument("--s0-out", help="write the empirical angular measure atoms")
    s.add_argument("--out")
    s.set_defaults(func=cmd_risk)

    s = sub.add_parser("ratio-study", help="replicated estimate/truth ratios on the strong-dependence model")
    s.add_argument("--reps", type=int, default=100)
    s.add_argument("--n", type=int, default=10000)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--b0", type=float, default=2.0)
    s.add_argument("--xs", type=float, nargs="+", default=[1.0, 4.0])
    _wedge_args(s, fit=False)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out")
    s.add_argument("--summary")
    s.set_defaults(func=cmd_ratio_study)

    s = sub.add_parser("degrees", help="edge list to node-wise out/in degrees")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--xy", action="store_true", help="write only (out, in) columns")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_degrees)

    s = sub.add_parser("returns", help="price columns to daily returns")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--columns", type=lambda t: [c for c in t.split(",") if c],
                   help="0-based indices or header names of price columns")
    s.add_argument("--log", action="store_true", help="log returns instead of simple returns")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_returns)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return 1
        if getattr(args, "seed", "absent") is None:
            args.seed = _default_seed()
        args.func(args)
    except UsageError as e:
        print(f"hrvtail: usage error: {e}", file=sys.stderr)
        return 1
    except (HrvError, OSError) as e:
        print(f"hrvtail: error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

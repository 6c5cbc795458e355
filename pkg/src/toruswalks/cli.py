"""Command-line front end: simulate, analyze, theory-eval, oracle, verify.

Exit codes: 0 success, 1 verification/test failure, 2 usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from .analyze import AnalyzeError, analyze
from .engine import build_length_law, simulate
from .lattice import TorusSpec
from .runconfig import ConfigError, apply_overrides, parse_config
from .theory import (
    CollapseParams,
    h_d,
    half_normal_cdf,
    lemma_sums,
    prop1_rhs,
    srw_green_constant,
    standardized_F,
)
from .writers import site_key, write_rows


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = parse_config(Path(args.config).read_text())
    overrides = list(args.override or [])
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.chains is not None:
        overrides.append(f"chains={args.chains}")
    if args.out is not None:
        overrides.append(f"out={args.out}")
    if overrides:
        cfg = apply_overrides(cfg, overrides)
    outputs = simulate(cfg, workers=args.workers)
    for L, path in outputs.items():
        print(f"L={L}: wrote {path}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    outputs = analyze([Path(p) for p in args.inputs], Path(args.out))
    for name, path in outputs.items():
        print(f"{name}: {path}")
    return 0


def _xi_grid(args: argparse.Namespace) -> list[float]:
    n = args.points
    lo, hi = args.xi_min, args.xi_max
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _cmd_theory_eval(args: argparse.Namespace) -> int:
    rows: list[tuple] = []
    if args.kind == "hd":
        params = CollapseParams(alpha=args.alpha, beta=args.beta, gamma=args.gamma, d=args.d)
        for xi in _xi_grid(args):
            rows.append(("hd", args.d, repr(xi), h_d(params, xi), None, 0))
    elif args.kind == "prop1-step":
        g = lambda u: 1.0 if u >= 1.0 else 0.0
        for xi in _xi_grid(args):
            rows.append(("prop1_step", args.d, repr(xi), prop1_rhs(g, args.d, xi), None, 0))
    elif args.kind == "const":
        rows.append(("srw_constant", args.d, "", srw_green_constant(args.d), None, 0))
    elif args.kind in ("F", "halfnormal"):
        fn = standardized_F if args.kind == "F" else half_normal_cdf
        n = args.points
        for i in range(n):
            x = args.x_min + (args.x_max - args.x_min) * i / (n - 1)
            rows.append((args.kind, args.d, repr(x), float(fn(x)), None, 0))
    write_rows(Path(args.out), rows)
    print(f"wrote {args.out}")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    out = Path(args.out)
    rows: list[tuple] = []
    if args.kind == "saw":
        from .oracles import enumerate_saw

        ens = enumerate_saw(TorusSpec(args.d, args.L))
        J = Fraction(args.coupling).limit_denominator(10**12)
        for n, p in ens.length_law(J).items():
            rows.append(("saw_length_law", args.L, n, float(p), None, ens.n_walks))
        for z, val in sorted(ens.g_tilde(J).items()):
            rows.append(("saw_gtilde", args.L, site_key(z), float(val), None, ens.n_walks))
    elif args.kind == "ht":
        from .oracles import enumerate_high_temperature
        from .samplers import WormGraph

        ht = enumerate_high_temperature(WormGraph.from_torus(TorusSpec(args.d, args.L)))
        t = Fraction(args.coupling).limit_denominator(10**12)
        for v in sorted(ht.cv_counts):
            rows.append(
                ("sigma_correlation", args.L, site_key(v), float(ht.sigma_correlation(v, t)), None, 0)
            )
        for n, p in ht.trail_length_law(t).items():
            rows.append(("trail_length_law", args.L, n, float(p), None, 0))
    elif args.kind == "rlrw":
        from .oracles import oracle_rlrw_two_point_map

        spec = TorusSpec(args.d, max(args.L, 2))
        law = build_length_law(args.law, spec)
        table, bound = oracle_rlrw_two_point_map(law, args.d, args.n_max, args.radius)
        rows.append(("truncation_bound", args.L, "", bound, None, 0))
        for z, val in sorted(table.items()):
            if sum(abs(c) for c in z) <= args.norm_cap:
                rows.append(("rlrw_twopoint", args.L, site_key(z), val, None, 0))
    elif args.kind == "rllerw":
        from .oracles import RllerwExact

        exact = RllerwExact.fixed_length(TorusSpec(args.d, args.L), args.length)
        for z, p in sorted(exact.endpoint_z().items()):
            rows.append(("rllerw_endpoint", args.L, site_key(z), float(p), None, 0))
        for z, p in sorted(exact.visit_prob_z().items()):
            rows.append(("rllerw_visit", args.L, site_key(z), float(p), None, 0))
    elif args.kind == "lemma":
        from .oracles import srw_onaxis_pn

        for m in args.z_list:
            pn = srw_onaxis_pn(args.d, m, args.nmax_factor * m * m)
            s = lemma_sums(pn, (m,) + (0,) * (args.d - 1), args.d)
            rows.append(("sum_p_pbar", m, f"n_max={s.n_max}", s.sum_p_pbar, None, 0))
            rows.append(("sum_pbar_diff", m, f"n_max={s.n_max}", s.sum_pbar_diff, None, 0))
            rows.append(("tail_scale", m, f"a={s.split_a}", s.tail_scale, None, 0))
    write_rows(out, rows)
    print(f"wrote {out}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    from .verify import run_verify

    return 0 if run_verify() else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toruswalks",
        description="Walk ensembles on discrete tori: simulation, analysis, oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a configured simulation")
    p.add_argument("--config", required=True, help="path to a key=value config document")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--chains", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=1, help="parallel chain workers")
    p.add_argument("--override", action="append", metavar="KEY=VALUE")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("analyze", help="fits, ratios, profiles, collapse tables")
    p.add_argument("--in", dest="inputs", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("theory-eval", help="emit theory curves as CSV grids")
    p.add_argument("--kind", required=True, choices=["hd", "prop1-step", "const", "F", "halfnormal"])
    p.add_argument("--d", type=int, default=5)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--xi-min", type=float, default=0.05)
    p.add_argument("--xi-max", type=float, default=3.0)
    p.add_argument("--x-min", type=float, default=-2.0)
    p.add_argument("--x-max", type=float, default=4.0)
    p.add_argument("--points", type=int, default=60)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_theory_eval)

    p = sub.add_parser("oracle", help="exact small-instance tables")
    p.add_argument("--kind", required=True, choices=["saw", "ht", "rlrw", "rllerw", "lemma"])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--L", type=int, default=3)
    p.add_argument("--coupling", type=float, default=0.3)
    p.add_argument("--law", default="geometric:0.6")
    p.add_argument("--length", type=int, default=2)
    p.add_argument("--n-max", type=int, default=200)
    p.add_argument("--radius", type=int, default=20)
    p.add_argument("--norm-cap", type=int, default=6)
    p.add_argument("--z-list", type=lambda s: [int(x) for x in s.split(",")], default=[8, 16])
    p.add_argument("--nmax-factor", type=int, default=16)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("verify", help="oracle-equivalence scorecard")
    p.set_defaults(fn=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, AnalyzeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

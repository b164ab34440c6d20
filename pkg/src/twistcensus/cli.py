"""Command-line front end.

Subcommands mirror the stages of the experiment: enumerate a character
family, tabulate Gauss-sum statistics, run the checkpointed census of
twisted central values, fit the vanishing-count asymptotic, regenerate
plot CSVs, and verify a finished record store.
"""

from __future__ import annotations

import argparse
import os
import sys

from .census import (
    CensusConfig,
    emit_plot_data,
    load_records,
    records_path,
    resolve_curve,
    run_census,
    vanishing_grid,
    verify_store,
)
from .characters import FamilySpec, Variant, count_family, write_family_csv
from .gauss import weyl_sums, write_weyl_csv, histogram_args, write_histogram_csv
from .rmt import fit_constant, log_exponent, predicted_vanishings


def parse_family(text: str, coprime_to: int = 1, include_nine: bool = False) -> FamilySpec:
    """'4-all', 'quartic-tot', '6-prime', 'sextic-all', ..."""
    head, _, tail = text.strip().lower().partition("-")
    orders = {"4": 4, "quartic": 4, "6": 6, "sextic": 6}
    if head not in orders or not tail:
        raise ValueError(f"family must look like 4-all / sextic-prime, got {text!r}")
    return FamilySpec(
        orders[head], Variant.parse(tail), coprime_to=coprime_to, sextic_include_nine=include_nine
    )


def _add_family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True, help="{4,6}-{all,tot,prime}, e.g. 4-all")
    p.add_argument("--xmax", type=int, required=True, help="conductor bound X")
    p.add_argument(
        "--nine", action="store_true", help="include conductor 9 in the totally sextic family"
    )


def cmd_enumerate(args: argparse.Namespace) -> int:
    fam = parse_family(args.family, coprime_to=args.coprime_to, include_nine=args.nine)
    if args.out:
        n = write_family_csv(fam, args.xmax, args.out)
        print(f"{fam.tag()}: wrote {n} characters with conductor <= {args.xmax} to {args.out}")
    else:
        n = count_family(fam, [args.xmax])[0]
        print(f"{fam.tag()}: {n} characters with conductor <= {args.xmax}")
    return 0


def cmd_gauss_stats(args: argparse.Namespace) -> int:
    fam = parse_family(args.family, include_nine=args.nine)
    stats = weyl_sums(fam, args.xmax, args.kmax)
    for st in stats:
        x, w = st.grid[-1], st.normalized_sum[-1]
        size = st.family_size[-1] if isinstance(st.family_size, (tuple, list)) else st.family_size
        print(f"k={st.k}: |W_k|/|family| = {abs(w):.5f} at X={x} (family size {size})")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        write_weyl_csv(stats, fam, f"{args.out}/{fam.tag()}_weyl.csv")
        hist = histogram_args(fam, args.xmax, bins=args.bins)
        write_histogram_csv(hist, f"{args.out}/{fam.tag()}_hist.csv")
        print(f"wrote weyl and histogram CSVs to {args.out}")
    return 0


def _census_config(args: argparse.Namespace) -> CensusConfig:
    fam = parse_family(args.family, include_nine=getattr(args, "nine", False))
    return CensusConfig(
        curve=args.curve,
        family=fam,
        x_max=args.xmax,
        tol=args.tol,
        workers=args.workers,
        out_dir=args.out,
        checkpoint_every=args.checkpoint_every,
        stop_after=args.stop_after,
    )


def cmd_census(args: argparse.Namespace) -> int:
    cfg = _census_config(args)
    summary = run_census(cfg, resume=args.resume)
    tail = summary.grid[-1] if summary.grid else (0, 0, 0)
    state = "partial" if summary.partial else "complete"
    print(
        f"{summary.curve} {summary.family_tag} X<={summary.x_max}: {state}, "
        f"{summary.records} records, {tail[2]} vanishing, "
        f"{len(summary.failures)} quality failures, {summary.wall_time:.1f}s"
    )
    for fail in summary.failures:
        print(f"  quality failure: {fail}", file=sys.stderr)
    return 0 if not summary.failures else 1


def cmd_fit(args: argparse.Namespace) -> int:
    fam = parse_family(args.family, include_nine=getattr(args, "nine", False))
    cfg = CensusConfig(args.curve, fam, x_max=args.xmax, out_dir=args.out)
    records = load_records(records_path(cfg))
    grid = vanishing_grid(records)
    empirical = [(float(x), float(v)) for x, _, v in grid if v > 0]
    curve_fit = fit_constant(empirical, cfg.family)
    e = log_exponent(cfg.family)
    print(f"{cfg.family.tag()}: fitted b = {curve_fit.fitted_b:.6g} for sqrt(X) (log X)^({e})")
    x, v = grid[-1][0], grid[-1][2]
    print(f"  empirical |V({x})| = {v}, predicted {predicted_vanishings(cfg.family, x, curve_fit.fitted_b):.2f}")
    for x, pred, emp, ratio in curve_fit.grid[-5:]:
        print(f"  X={x:>10.0f}  empirical={emp:>8.0f}  predicted={pred:>10.2f}  shape/empirical={ratio:.4f}")
    return 0


def cmd_plot_data(args: argparse.Namespace) -> int:
    cfg = _census_config(args)
    for path in emit_plot_data(cfg, bins=args.bins, k_max=args.kmax):
        print(f"wrote {path}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _census_config(args)
    problems = verify_store(cfg)
    if problems:
        for p in problems:
            print(f"FAIL {p}")
        return 1
    n = len(load_records(records_path(cfg)))
    print(f"ok: {n} records satisfy the invariant suite")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twistcensus",
        description="Census of central values of elliptic curve L-functions "
        "twisted by quartic and sextic Dirichlet characters.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="count or export a character family")
    _add_family_args(p)
    p.add_argument("--coprime-to", type=int, default=1, help="restrict conductors coprime to this")
    p.add_argument("--out", help="write the family as CSV here")
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("gauss-stats", help="Weyl sums and angle histogram for a family")
    _add_family_args(p)
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--out", help="directory for CSV output")
    p.set_defaults(fn=cmd_gauss_stats)

    for name, fn, help_text in (
        ("census", cmd_census, "run the checkpointed census of twisted L-values"),
        ("plot-data", cmd_plot_data, "regenerate ratio/histogram/Weyl CSVs from a record store"),
        ("verify", cmd_verify, "run the invariant suite over a record store"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_family_args(p)
        p.add_argument("--curve", required=True, help="builtin label (11.a.1) or curve file path")
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", default="census-out", help="output directory")
        p.add_argument("--checkpoint-every", type=int, default=50)
        p.add_argument("--stop-after", type=int, default=None, help="stop after N conductors")
        p.add_argument("--resume", action="store_true")
        p.add_argument("--bins", type=int, default=100)
        p.add_argument("--kmax", type=int, default=4)
        p.set_defaults(fn=fn)

    p = sub.add_parser("fit", help="fit the vanishing-count constant from a record store")
    _add_family_args(p)
    p.add_argument("--curve", required=True)
    p.add_argument("--out", default="census-out", help="directory holding the record store")
    p.set_defaults(fn=cmd_fit)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

"""``ttpc`` command line.

Exit codes: 0 success, 2 validation or parse error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from ..circuit import build_ttpc
from ..errors import InvalidArgument, NumericalFailure, SingularInput
from . import commands
from .config import load_config
from .io import write_batches_csv, write_json, write_matrix_csv, write_table_csv

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ttpc", description="Four-mode TTPC entanglement simulator and verifier.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="analytic simulation from a JSON config")
    s.add_argument("-c", "--config", required=True)
    s.add_argument("-o", "--output", help="JSON report path")
    s.add_argument("--csv", help="plot-ready table path")

    s = sub.add_parser("from-measurements", help="criteria from measured dB values")
    s.add_argument("csv_path")
    s.add_argument("--gain", type=float, required=True, help="electronic gain used for every slot")
    s.add_argument("-o", "--output")

    s = sub.add_parser("reproduce-paper", help="compare reported values with this package")
    s.add_argument("-o", "--output")
    s.add_argument("--csv")

    s = sub.add_parser("fit", help="fit squeezing and uniform loss to measured dB values")
    s.add_argument("csv_path")
    s.add_argument("--fix-eta", type=float, default=None)
    s.add_argument("-o", "--output")

    s = sub.add_parser("mc", help="Monte Carlo homodyne estimate of the criteria")
    s.add_argument("-c", "--config", required=True)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("-n", type=int, default=None, help="sample count (overrides mc.n)")
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("-o", "--output")
    s.add_argument("--samples-csv")

    s = sub.add_parser("audit-eq6", help="check the printed closed-form variances against the covariance oracle")
    s.add_argument("-o", "--output")
    return p


def _fmt(x, digits=6):
    return "-" if x is None else f"{x:.{digits}f}"


def _print_criteria(rows, out):
    for c in rows:
        verdict = "satisfied" if c["satisfied"] else "NOT satisfied"
        unc = f" +/- {c['lhs_uncertainty']:.3f}" if c.get("lhs_uncertainty") is not None else ""
        out.write(f"  {c['id']:>3}: {c['lhs']:.6f}{unc}  (bound {c['bound']:.6f})  {verdict}\n")


def _print_table(rows, out):
    for r in rows:
        flag = f"  [{r['flag']}]" if r.get("flag") else ""
        reported = "" if r["paper_value"] is None else f"reported {r['paper_value']} | "
        if r.get("rounded") is not None:
            value = f"{r['rounded']:g} (raw {r['computed_value']:.6g})"
        else:
            value = f"{r['computed_value']:.6g}"
        out.write(f"  {r['quantity']}: {reported}computed {value} {r['unit']}{flag}\n")


def run(args, out=None) -> int:
    out = sys.stdout if out is None else out
    if args.command == "simulate":
        cfg = load_config(args.config)
        report = commands.simulate(cfg)
        out.write("criteria:\n")
        _print_criteria(report["criteria"], out)
        out.write("nullifier variances: " + ", ".join(_fmt(v) for v in report["nullifiers"]["variances"]) + "\n")
        json_path = args.output or cfg.outputs.get("json")
        csv_path = args.csv or cfg.outputs.get("csv")
        if cfg.outputs.get("cov_csv"):
            write_matrix_csv(cfg.outputs["cov_csv"], build_ttpc(cfg.circuit_params()).cov)
        if csv_path:
            write_table_csv(csv_path, report["table"])
    elif args.command == "from-measurements":
        report = commands.from_measurements(args.csv_path, args.gain)
        _print_criteria(report["criteria"], out)
        for c in report["criteria"]:
            out.write(f"  {c['id']} rounded: {c['lhs_rounded']:.2f}\n")
        json_path = args.output
    elif args.command == "reproduce-paper":
        report = commands.reproduce_paper()
        _print_table(report["table"], out)
        json_path = args.output
        if args.csv:
            write_table_csv(args.csv, report["table"])
    elif args.command == "fit":
        report = commands.fit(args.csv_path, args.fix_eta)
        f = report["fit"]
        out.write(f"  r = {f['r']:.4f}, eta = {f['eta']:.4f}, rss = {f['rss']:.4g} dB^2"
                  f"{'' if f['converged'] else '  [' + f['warning'] + ']'}\n")
        for cid, v in f["residuals_db"].items():
            out.write(f"  residual {cid}: {v:+.4f} dB\n")
        json_path = args.output
    elif args.command == "mc":
        cfg = load_config(args.config)
        report = commands.mc(cfg, seed=args.seed, n=args.n, workers=args.workers)
        m = report["mc"]
        for cid, t in m["terms"].items():
            out.write(f"  {cid}: {t['variance']:.6f} +/- {t['standard_error']:.6f} "
                      f"(analytic {t['analytic']:.6f}, {t['deviation_in_se']:+.2f} SE)\n")
        for c in m["criteria"]:
            out.write(f"  {c['id']:>3}: {c['lhs']:.6f} +/- {c['lhs_standard_error']:.6f} "
                      f"(analytic {c['analytic_lhs']:.6f})  {'satisfied' if c['satisfied'] else 'NOT satisfied'}\n")
        json_path = args.output or cfg.outputs.get("json")
        samples_path = args.samples_csv or cfg.outputs.get("samples_csv")
        if samples_path:
            write_batches_csv(samples_path, commands.mc_samples(cfg, m["seed"], m["n"]))
    else:
        report = commands.audit()
        for a in report["lines"]:
            extra = ""
            if a["gap_model"]:
                extra = f", gap = {a['gap_model']} (rel. error {a['gap_model_max_rel_error']:.1e})"
            out.write(f"  line {a['line']} ({a['combo_id']}): {a['status']} "
                      f"(max rel. deviation {a['max_rel_deviation']:.2e}{extra})\n")
        json_path = args.output
    if json_path:
        write_json(json_path, report)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except InvalidArgument as exc:
        sys.stderr.write(f"ttpc: error: {exc}\n")
        return EXIT_INVALID
    except (NumericalFailure, SingularInput) as exc:
        sys.stderr.write(f"ttpc: numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``xistrip {eval,verify,scan,threshold,ledger}``.

Exit codes: 0 success / all asserted lemmas pass, 1 an asserted lemma
fails, 2 numerical or I/O failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import functools
import io
import sys
from pathlib import Path

from .errors import DomainError, XiStripError
from .kernels import OscParams, StripPoint
from .ledger import half_period_ledger
from .report import (
    ConfigError,
    clean,
    dumps,
    exit_code_for,
    load_config,
    parse_value,
    summary_table,
    verify_document,
)
from .verifier import (
    SUITE,
    Grid,
    critical_a_threshold,
    grid_map,
    im_slope,
    lower_majorant_crossing,
    run_suite,
)
from .xi_eval import ROUTES, SeriesConfig, evaluate, f_prime, h_r, im_xi_kernel, xi_eq6

EXIT_OK, EXIT_FAIL, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2, 64
SCAN_QUANTITIES = ("im", "re", "dIm_db", "h", "f_prime")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_grid_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key=value config file (flags override it)")
    for f in dataclasses.fields(Grid):
        p.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, metavar="VALUE",
                       help=f"default: {f.default}")
    p.add_argument("--exploratory", action="store_true", default=None,
                   help="allow a-values beyond the region bound")


def _config_from(args):
    overrides = {}
    for f in dataclasses.fields(Grid):
        text = getattr(args, f.name, None)
        if text is not None:
            overrides[f.name] = parse_value(f.name, text)
    overrides["exploratory"] = args.exploratory
    if getattr(args, "output", None):
        overrides["output"] = args.output
    return load_config(args.config, overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xistrip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate Xi(a + bi) by one or all routes")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--route", choices=ROUTES + ("all",), default="all")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--terms", type=int, default=8, help="n-series truncation for eq6")
    p.add_argument("--json", help="also write the values as JSON")

    p = sub.add_parser("verify", help="run lemma scans and write a JSON report")
    p.add_argument("lemmas", nargs="*", metavar="LEMMA", help=f"subset of {', '.join(SUITE)}")
    p.add_argument("-o", "--output", help="report path (default: stdout summary only)")
    _add_grid_flags(p)

    p = sub.add_parser("scan", help="tabulate a quantity on the a x b grid as CSV")
    p.add_argument("quantity", choices=SCAN_QUANTITIES)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--n", type=int, default=1, help="series index for h and f_prime")
    _add_grid_flags(p)

    p = sub.add_parser("threshold", help="critical a where the J majorant changes sign")
    p.add_argument("--resolutions", default="1e-3,1e-4")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--json")

    p = sub.add_parser("ledger", help="print the half-period ledger")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--K", type=int, default=8)
    p.add_argument("--json")
    return parser


def _write_text(path: str, text: str):
    Path(path).write_text(text)


def cmd_eval(args) -> int:
    try:
        t = StripPoint(args.a, args.b)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    routes = ROUTES if args.route == "all" else (args.route,)
    cfg = SeriesConfig(args.terms)
    values = {r: evaluate(t, r, args.tol, cfg) for r in routes}
    print(f"t = {args.a!r} + {args.b!r}i")
    for v in values.values():
        print(f"{v.route:>6}  re = {v.re:.16g}  im = {v.im:.16g}  err_budget = {v.err_budget:.3g}")
    deviations = {}
    if len(values) > 1:
        names = list(values)
        for i, x in enumerate(names):
            for y in names[i + 1:]:
                d = abs(values[x].value - values[y].value)
                deviations[f"{x}-{y}"] = d
                print(f"|{x} - {y}| = {d:.3g}")
    if args.json:
        doc = {"a": args.a, "b": args.b, "values": [v.to_dict() for v in values.values()],
               "deviations": deviations}
        _write_text(args.json, dumps(clean(doc)))
    return EXIT_OK


def cmd_verify(args) -> int:
    unknown = [x for x in args.lemmas if x not in SUITE]
    if unknown:
        raise UsageError(f"unknown lemma id(s): {', '.join(unknown)}; choose from {', '.join(SUITE)}")
    cfg = _config_from(args)
    lemma_ids = list(args.lemmas) or list(SUITE)
    reports = run_suite(lemma_ids, cfg.grid)
    doc = verify_document(reports, cfg, lemma_ids)
    if cfg.output:
        _write_text(cfg.output, dumps(doc))
    print(summary_table(reports))
    for r in reports:
        if r.verdict != "pass":
            print(f"[{r.lemma_id}] {r.notes}")
    return exit_code_for(reports)


def scan_value(quantity: str, a: float, b: float, grid: Grid, n: int) -> float:
    """One CSV cell; ``h`` and ``f_prime`` take ``r = 1/2 - b``."""
    cfg = SeriesConfig(grid.series_terms)
    t = StripPoint(a, b)
    if quantity == "im":
        return im_xi_kernel(t, grid.tol, cfg).value
    if quantity == "re":
        return xi_eq6(t, grid.tol, cfg).re
    if quantity == "dIm_db":
        return im_slope(a, b, grid.fd_step, grid.tol, grid.series_terms)[0]
    if quantity == "h":
        return h_r(t.r, a, n).value
    method = "amplitude-phase" if a > 0 else "finite-difference"
    return f_prime(t.r, a, n, method=method, step=grid.fd_step).value


def _scan_cell(quantity, grid, n, cell):
    return scan_value(quantity, cell[0], cell[1], grid, n)


def cmd_scan(args) -> int:
    cfg = _config_from(args)
    grid = cfg.grid
    cells = [(a, b) for a in grid.a_values for b in grid.b_values]
    fn = functools.partial(_scan_cell, args.quantity, grid, args.n)
    values = grid_map(fn, cells, grid.workers)
    rows = [(a, b, v) for (a, b), v in zip(cells, values)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["a", "b", args.quantity])
    for row in rows:
        writer.writerow([format(v, ".17g") for v in row])
    _write_text(args.output, buf.getvalue())
    print(f"wrote {len(rows)} rows to {args.output}")
    return EXIT_OK


def cmd_threshold(args) -> int:
    try:
        resolutions = [float(x) for x in args.resolutions.split(",")]
    except ValueError:
        raise UsageError(f"bad resolutions {args.resolutions!r}") from None
    out = {}
    for res in resolutions:
        out[str(res)] = critical_a_threshold(res, args.n)
        print(f"r-resolution {res:g}: critical a = {out[str(res)]:.10f}")
    low = lower_majorant_crossing(resolutions[-1], args.n)
    print(f"majorant also non-negative for a < {low:.10f}")
    if args.json:
        _write_text(args.json, dumps(clean({"n": args.n, "thresholds": out, "lower_crossing": low})))
    return EXIT_OK


def cmd_ledger(args) -> int:
    try:
        p = OscParams(args.a, args.r, args.n)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    ledger = half_period_ledger(p, args.K)
    cmp = ledger.compare_f_prime()
    print(f"half-period ledger a={p.a} r={p.r} n={p.n} K={args.K}")
    print(f"{'k':>3} {'x_lo':>22} {'x_hi':>22} {'sign':>4} {'log|I_k|':>22} {'I_k':>24}")
    for e in ledger.entries:
        print(f"{e.k:>3} {e.x_lo:>22.16g} {e.x_hi:>22.16g} {e.sign:>4} {e.log_abs:>22.16g} {e.integral:>24.17g}")
    for k, v in ledger.checks.items():
        print(f"{k}: {v}")
    print(f"total {ledger.total:.17g}  -f'/2 {cmp['minus_half_f_prime']:.17g}  "
          f"deviation {cmp['deviation']:.3g}  budget {cmp['budget']:.3g}")
    if args.json:
        doc = ledger.to_dict() | {"f_prime_check": cmp}
        _write_text(args.json, dumps(clean(doc)))
    ok = cmp["agrees"] and all(v for k, v in ledger.checks.items() if k != "min_log_gap")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "scan": cmd_scan,
            "threshold": cmd_threshold, "ledger": cmd_ledger}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError) as exc:
        print(f"xistrip: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (XiStripError, OSError, ArithmeticError) as exc:
        print(f"xistrip: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: test data files for a mean change, run rejection
experiments, and query the limit law.

Exit codes: 0 = ran (regardless of the test decision), 2 = usage error,
3 = data error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from meanbreak import core, dist, montecarlo

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3

PVALUE_FLOOR = 1e-12


class DataError(Exception):
    """A problem with user-supplied data (unreadable, unparsable, degenerate)."""


def _parse_rows(text: str) -> list[list[str]]:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if "," in line:
            rows.extend(csv.reader(io.StringIO(line)))
        else:
            rows.append(line.split())
    return rows


def _column_index(selector: str, header: list[str]) -> int:
    try:
        return int(selector)
    except ValueError:
        pass
    try:
        return header.index(selector)
    except ValueError:
        raise DataError(f"column {selector!r} not found in header {header}") from None


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def load_column(path: str, column: str, date_column: str | None = None):
    """Read one numeric column (by index or header name) from a delimited
    file; optionally collect a companion date column.  Rows that fail to
    parse are an error, never silently skipped."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows = _parse_rows(text)
    if not rows:
        raise DataError(f"{path} contains no data rows")

    has_header = any(not _is_float(cell) for cell in rows[0])
    header = rows[0] if has_header else []
    data_rows = rows[1:] if has_header else rows
    first_row_number = 2 if has_header else 1

    col = _column_index(column, header)
    date_col = _column_index(date_column, header) if date_column is not None else None

    values, dates, bad = [], [], []
    for offset, row in enumerate(data_rows):
        row_number = first_row_number + offset
        if col >= len(row) or not _is_float(row[col]):
            bad.append(row_number)
            continue
        values.append(float(row[col]))
        if date_col is not None:
            dates.append(row[date_col] if date_col < len(row) else "")
    if bad:
        shown = ", ".join(str(r) for r in bad[:10])
        more = "" if len(bad) <= 10 else f" (+{len(bad) - 10} more)"
        raise DataError(f"{path}: rows failed to parse: {shown}{more}")
    if not values:
        raise DataError(f"{path}: no usable rows in column {column!r}")
    return np.asarray(values), (dates if date_col is not None else None)


def _format_p(p: float) -> str:
    return "< 1e-12" if p < PVALUE_FLOOR else f"{p:.7f}"


def cmd_test(args) -> int:
    values, dates = load_column(args.file, args.column, args.date_column)
    minimum = 3 if args.kind == "levels" else 2  # 3 prices give 2 returns
    if len(values) < minimum:
        raise DataError(
            f"{args.file}: need at least {minimum} usable rows, got {len(values)}"
        )
    series = values
    if args.kind == "levels":
        if np.any(series <= 0.0):
            bad = int(np.flatnonzero(series <= 0.0)[0])
            raise DataError(
                f"levels must be strictly positive for the log-return step "
                f"(offending data row {bad + 1})"
            )
        series = core.compute_returns(series)
        if dates is not None:
            dates = dates[1:]
    if args.abs:
        series = core.absolute_transform(series)

    estimates = core.null_estimates(series)
    try:
        outcome = core.lm_test(series, alpha=args.alpha)
    except core.DegenerateSeriesError as exc:
        raise DataError(f"{args.file}: {exc}") from exc

    break_date = (
        dates[outcome.break_index - 1]
        if dates is not None and 0 < outcome.break_index <= len(dates)
        else None
    )
    underflow = outcome.p_value < PVALUE_FLOOR
    if args.format == "json":
        doc = {
            "n": len(series),
            "mu_hat": estimates.mu_hat,
            "sigma2_hat": estimates.sigma2_hat,
            "statistic": outcome.statistic,
            "p_value": 0.0 if underflow else outcome.p_value,
            "underflow": underflow,
            "break_index": outcome.break_index,
            "break_date": break_date,
            "alpha": outcome.alpha,
            "reject": outcome.reject,
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        decision = "reject" if outcome.reject else "fail to reject"
        where = f"{outcome.break_index}"
        if break_date:
            where += f" ({break_date})"
        print(f"n:           {len(series)}")
        print(f"mean:        {estimates.mu_hat:.10g}")
        print(f"variance:    {estimates.sigma2_hat:.10g}")
        print(f"statistic:   {outcome.statistic:.7f}")
        print(f"p-value:     {_format_p(outcome.p_value)}")
        print(f"break index: {where}")
        print(f"decision:    {decision} no-change at alpha={outcome.alpha:g}")
    return EXIT_OK


def _read_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}") from exc
    options: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        sep = "=" if "=" in line else (":" if ":" in line else None)
        if sep is None:
            raise DataError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition(sep)
        options[key.strip()] = value.strip()
    return options


def _config_from_args(args) -> montecarlo.ExperimentConfig:
    file_opts = _read_config_file(args.config) if args.config else {}

    def pick(flag_value, key, convert, default):
        if flag_value not in (None, []):
            return flag_value
        if key in file_opts:
            return convert(file_opts[key])
        return default

    def int_list(raw: str) -> list[int]:
        return [int(tok) for tok in raw.replace(",", " ").split()]

    def float_list(raw: str) -> list[float]:
        return [float(tok) for tok in raw.replace(",", " ").split()]

    series_all = args.all or file_opts.get("series", "").strip() == "all"
    if series_all:
        series = list(montecarlo.PRESET_IDS)
    else:
        series = pick(args.series, "series", int_list, None)
        if not series:
            raise ValueError("no series selected: pass --series or --all")
    return montecarlo.ExperimentConfig(
        series=tuple(series),
        sample_sizes=tuple(pick(args.n, "n", int_list, [30, 100, 500, 1000])),
        levels=tuple(sorted(pick(args.alpha, "alpha", float_list, [0.01, 0.05, 0.10]))),
        replications=pick(args.reps, "reps", int, 1000),
        master_seed=pick(args.seed, "seed", int, 0),
        workers=pick(args.workers, "workers", int, os.cpu_count() or 1),
    )


def cmd_simulate(args) -> int:
    config = _config_from_args(args)
    table = montecarlo.run_experiment(config)
    document = montecarlo.emit_table(table, format=args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(document)
    else:
        sys.stdout.write(document)
    if args.diagnostics:
        _print_diagnostics(config)
    return EXIT_OK


def _print_diagnostics(config: montecarlo.ExperimentConfig) -> None:
    """Empirical vs limiting variance of the partial-sum process at a few
    sample fractions, for each simulated volatility spec."""
    from meanbreak import asymptotics, signals

    taus = (0.25, 0.5, 0.75)
    n = max(config.sample_sizes)
    reps = min(config.replications, 500)
    for entry in config.series:
        label, key, _, sigma_spec = montecarlo._resolve(entry)
        sigma_bar2 = signals.ergodic_variance_limit(sigma_spec)
        path = signals.sigma_path(sigma_spec, n)
        samples = np.empty((reps, len(taus)))
        for r in range(reps):
            eps = signals.gaussian_stream((config.master_seed, key, n, r), n)
            wn = asymptotics.wn_path(path * eps, sigma_bar2)
            samples[r] = [wn[int(t * n)] for t in taus]
        print(f"FCLT diagnostics, {label} (n={n}, reps={reps}):", file=sys.stderr)
        for i, tau in enumerate(taus):
            limit = asymptotics.partial_variance_limit(sigma_spec, tau) / sigma_bar2
            print(
                f"  var W({tau:g}) = {samples[:, i].var():.4f}  limit {limit:.4f}",
                file=sys.stderr,
            )


def cmd_quantile(args) -> int:
    print(f"{dist.bridge_sup_quantile(args.p):.7f}")
    return EXIT_OK


def cmd_pvalue(args) -> int:
    print(f"{dist.p_value(args.z):.7f}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meanbreak",
        description="Test for a change in the mean of a heteroskedastic time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run the change-in-mean test on a data file")
    p_test.add_argument("file", help="delimited text file (comma or whitespace)")
    p_test.add_argument("--column", default="0", help="column index or header name")
    p_test.add_argument("--date-column", default=None, help="companion date column")
    p_test.add_argument(
        "--kind", choices=("levels", "returns"), default="returns",
        help="'levels' converts prices to log returns first",
    )
    p_test.add_argument("--abs", action="store_true", help="test absolute values")
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument("--format", choices=("text", "json"), default="text")
    p_test.set_defaults(func=cmd_test)

    p_sim = sub.add_parser("simulate", help="run a rejection-frequency experiment")
    p_sim.add_argument("--series", type=int, action="append", help="preset id 1..9")
    p_sim.add_argument("--all", action="store_true", help="all nine presets")
    p_sim.add_argument("--n", type=int, action="append", help="sample size")
    p_sim.add_argument("--alpha", type=float, action="append", help="significance level")
    p_sim.add_argument("--reps", type=int, default=None)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--workers", type=int, default=None)
    p_sim.add_argument("--format", choices=("csv", "json", "text"), default="text")
    p_sim.add_argument("--out", default=None)
    p_sim.add_argument("--config", default=None, help="flat key = value config file")
    p_sim.add_argument("--diagnostics", action="store_true")
    p_sim.set_defaults(func=cmd_simulate)

    p_q = sub.add_parser("quantile", help="quantile of the limit law")
    p_q.add_argument("p", type=float)
    p_q.set_defaults(func=cmd_quantile)

    p_p = sub.add_parser("pvalue", help="p-value of a statistic under the limit law")
    p_p.add_argument("z", type=float)
    p_p.set_defaults(func=cmd_pvalue)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits with 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (core.InsufficientDataError, core.DegenerateSeriesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""``boxcast`` command-line interface.

Exit status: 0 on success, 1 on data or model errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Optional, Sequence

from .diagnostics import (
    backtest,
    fit_statistics,
    select_order,
    ses_statistics,
)
from .errors import BoxcastError
from .estimate import FittedModel, ModelOrder, fit
from .forecast import forecast_intervals
from .ingest import Month, MonthlySeries, parse_month, read_table, select_boroughs
from .render import FORMATS, format_stat, render_plot, render_rows, render_table

COMMANDS = ("fit", "select", "forecast", "backtest", "report", "plot")
DEFAULT_HORIZON = 24
DEFAULT_LEVEL = 0.95
BUNDLED = "synthetic_london.csv"


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: Optional[str] = None
    boroughs: Optional[tuple] = None
    order: Optional[ModelOrder] = None
    horizon: int = DEFAULT_HORIZON
    level: float = DEFAULT_LEVEL
    output_format: str = "csv"
    output_path: Optional[str] = None
    train_end: Optional[Month] = None
    lags: int = 18


# -- argument types ------------------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _level(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie strictly between 0 and 1, got {value}")
    return value


def _order(text: str) -> tuple:
    if not re.fullmatch(r"\s*\d+\s*,\s*\d+\s*,\s*\d+\s*", text):
        raise argparse.ArgumentTypeError(f"expected p,d,q, got {text!r}")
    return tuple(int(v) for v in text.split(","))


def _month(text: str) -> Month:
    try:
        return parse_month(text)
    except BoxcastError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="PATH",
                        help="wide or long CSV file (default: bundled synthetic dataset)")
    common.add_argument("--borough", metavar="NAME", nargs="+", action="extend",
                        help="borough(s) to process, or 'all' (default)")
    group = common.add_mutually_exclusive_group()
    group.add_argument("--order", type=_order, metavar="p,d,q",
                       help="fixed ARIMA order; without it the order is selected by BIC")
    group.add_argument("--select", action="store_true",
                       help="select the order by BIC (the default when --order is absent)")
    common.add_argument("--seasonal-d", type=int, choices=(0, 1), default=0,
                        help="seasonal (lag 12) differences for --order")
    common.add_argument("--horizon", type=_positive_int, default=DEFAULT_HORIZON, metavar="N")
    common.add_argument("--level", type=_level, default=DEFAULT_LEVEL, metavar="X")
    common.add_argument("--train-end", type=_month, metavar="YYYY-MM")
    common.add_argument("--lags", type=_positive_int, default=18, metavar="N",
                        help="Ljung-Box lags")
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("--out", metavar="PATH",
                        help="output file (plot: output directory)")

    parser = argparse.ArgumentParser(
        prog="boxcast", description="ARIMA forecasting of monthly crime counts.")
    sub = parser.add_subparsers(dest="command", metavar="<command>", required=True)
    helps = {
        "fit": "fit a model per borough and print parameters and fit statistics",
        "select": "rank candidate orders by BIC",
        "forecast": "forecast table with confidence limits",
        "backtest": "fit up to --train-end and score the remaining months",
        "report": "model statistics (ARIMA and SES) plus the forecast table",
        "plot": "write one SVG chart per borough",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], description=helps[name])
    return parser


def config_from_args(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    order = None
    if args.order is not None:
        try:
            order = ModelOrder(*args.order, ds=args.seasonal_d)
        except BoxcastError as exc:
            parser.error(str(exc))
    if args.command == "backtest" and args.train_end is None:
        parser.error("backtest requires --train-end")
    boroughs = None
    if args.borough and [b for b in args.borough if b.lower() != "all"]:
        boroughs = tuple(b for b in args.borough if b.lower() != "all")
    return RunConfig(args.command, args.input, boroughs, order, args.horizon, args.level,
                     args.format, args.out, args.train_end, args.lags)


# -- commands ------------------------------------------------------------------

def _load(config: RunConfig) -> list[MonthlySeries]:
    if config.input_path is None:
        content = resources.files("boxcast").joinpath("data", BUNDLED).read_bytes()
    else:
        try:
            with open(config.input_path, "rb") as fh:
                content = fh.read()
        except OSError as exc:
            raise BoxcastError(f"cannot read {config.input_path}: {exc.strerror}") from None
    table = read_table(content)
    return select_boroughs(table, config.boroughs if config.boroughs else table.header)


def _model_for(series: MonthlySeries, config: RunConfig) -> FittedModel:
    if config.order is not None:
        return fit(series, config.order)
    return select_order(series).ranked[0].model


def _join(values) -> str:
    return " ".join(f"{v:.4f}" for v in values) or "-"


def cmd_fit(series_list, config: RunConfig) -> str:
    header = ["model", "order", "mu", "phi", "theta", "sigma2", "converged",
              "Stationary R-squared", "R-squared", "Ljung-Box Q", "DF", "Sig."]
    rows = []
    for s in series_list:
        m = _model_for(s, config)
        st = fit_statistics(m, s, config.lags)
        rows.append([f"{s.name}-Model", str(m.order), f"{m.params.mu:.4f}",
                     _join(m.params.phi), _join(m.params.theta), f"{m.params.sigma2:.4f}",
                     "yes" if m.converged else "no",
                     format_stat(st.stationary_r_squared), format_stat(st.r_squared),
                     format_stat(st.ljung_box.q_stat), str(st.ljung_box.df),
                     format_stat(st.ljung_box.sig)])
    return render_rows(header, rows, config.output_format)


def cmd_select(series_list, config: RunConfig) -> str:
    header = ["borough", "rank", "order", "BIC", "R-squared"]
    rows = []
    for s in series_list:
        sel = select_order(s)
        for rank, cand in enumerate(sel.ranked, start=1):
            rows.append([s.name, str(rank), str(cand.order), format_stat(cand.bic),
                         format_stat(cand.r_squared)])
    return render_rows(header, rows, config.output_format)


def _forecast_tables(series_list, config: RunConfig):
    return [forecast_intervals(_model_for(s, config), s, config.horizon, config.level)
            for s in series_list]


def cmd_forecast(series_list, config: RunConfig) -> str:
    return render_table(_forecast_tables(series_list, config), config.output_format)


def cmd_backtest(series_list, config: RunConfig) -> str:
    header = ["borough", "order", "train_end", "holdout_months",
              "coverage_pct", "within_20pct", "mape"]
    rows = []
    for s in series_list:
        r = backtest(s, config.train_end, config.order, config.level)
        rows.append([s.name, str(r.order), config.train_end.iso(), str(r.actual.size),
                     format_stat(r.coverage_pct), format_stat(r.within_20pct),
                     format_stat(r.mape)])
    return render_rows(header, rows, config.output_format)


def model_statistics_rows(series_list, config: RunConfig):
    """Statistics rows: each ARIMA model followed by its SES baseline."""
    models, rows = [], []
    for s in series_list:
        m = _model_for(s, config)
        models.append(m)
        st = fit_statistics(m, s, config.lags)
        alpha, ses = ses_statistics(s, config.lags)
        for label, desc, x in ((f"{s.name}-Model", str(m.order), st),
                               (f"{s.name}-SES", f"SES(alpha={alpha:.2f})", ses)):
            rows.append([label, desc, format_stat(x.stationary_r_squared),
                         format_stat(x.r_squared), format_stat(x.rmse), format_stat(x.mape),
                         format_stat(x.ljung_box.q_stat), str(x.ljung_box.df),
                         format_stat(x.ljung_box.sig)])
    return models, rows


STATS_HEADER = ["model", "form", "Stationary R-squared", "R-squared", "RMSE", "MAPE",
                "Ljung-Box Q", "DF", "Sig."]


def cmd_report(series_list, config: RunConfig) -> str:
    models, rows = model_statistics_rows(series_list, config)
    stats = render_rows(STATS_HEADER, rows, config.output_format)
    tables = [forecast_intervals(m, s, config.horizon, config.level)
              for m, s in zip(models, series_list)]
    forecast = render_table(tables, config.output_format)
    if config.output_format == "markdown":
        return (f"## Model statistics (Ljung-Box Q({config.lags}))\n\n{stats}\n"
                f"## Forecasts ({config.level * 100:g}% limits)\n\n{forecast}")
    return stats + "\n" + forecast


def _slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_") or "series"


def cmd_plot(series_list, config: RunConfig) -> str:
    out_dir = config.output_path or "."
    os.makedirs(out_dir, exist_ok=True)
    tables = _forecast_tables(series_list, config)
    written = []
    for s, t in zip(series_list, tables):
        path = os.path.join(out_dir, f"{_slug(s.name)}.svg")
        try:
            render_plot(s, t, path, title=f"Forecasting model of {s.name}")
        except OSError as exc:
            raise BoxcastError(f"cannot write {path}: {exc.strerror}") from None
        written.append(path)
    return "".join(p + "\n" for p in written)


HANDLERS = {"fit": cmd_fit, "select": cmd_select, "forecast": cmd_forecast,
            "backtest": cmd_backtest, "report": cmd_report, "plot": cmd_plot}


def run(config: RunConfig) -> str:
    """Execute one command and return its text output."""
    return HANDLERS[config.command](_load(config), config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = config_from_args(args, parser)
    try:
        text = run(config)
        if config.output_path and config.command != "plot":
            with open(config.output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except (BoxcastError, OSError, ValueError) as exc:
        print(f"boxcast: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

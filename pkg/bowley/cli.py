"""Command-line entry point for the bowley toolkit."""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from . import __version__
from .checks import run_property_checks
from .config import config
from .errors import BowleyError, UsageError
from .estimation import fit_cobb_douglas, fit_cobb_douglas_scale, fit_logistic_production
from .growth import (
    eval_exponential,
    eval_logistic,
    fit_logistic,
    fit_panel_exponential,
    fit_panel_logistic,
)
from .invariants import (
    b_coefficient,
    beta_given_alpha,
    classify_returns,
    crs_elasticities,
    eval_cobb_douglas,
    eval_logistic_production,
)
from .models import (
    PANEL_COLUMNS,
    CobbDouglasFit,
    EconPanel,
    ExpFit,
    LogisticFit,
    LogisticProductionFit,
    ReturnsClass,
    TripleFit,
)
from .plot import emit_plot
from .report import FORMATS, emit_report, input_digest
from .schemas import NamedSeries, RunReport
from .series import read_panel
from .shares import (
    analytic_logistic_share,
    logistic_share_trajectory,
    numeric_wage_share,
    share_constancy_report,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

Handler = Callable[[argparse.Namespace], RunReport]


def main() -> None:
    """Console script entry point."""
    sys.exit(run(sys.argv[1:]))


def run(argv: Sequence[str]) -> int:
    """Run one subcommand and return its exit code.

    0 on success, 2 on a usage error, 1 on a configuration, data or numerical
    failure.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    try:
        config.validate()
    except ValueError as e:
        print(f"error: configuration validation failed: {e}", file=sys.stderr)
        return 1

    _configure_logging(args.verbose)
    handler: Handler = COMMANDS[args.command]
    try:
        report = handler(args)
        if args.out:
            emit_report(report, args.format, args.out)
        else:
            emit_report(report, args.format, sys.stdout.buffer)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"error: {e.message}", file=sys.stderr)
        return 2
    except BowleyError as e:
        logger.error(f"{args.command} failed: {e}", extra={"error_code": e.code})
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (OSError, ValidationError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1

    failed = [check.name for check in report.checks if not check.passed]
    if failed:
        print(f"error: property checks failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per analysis."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--input", type=Path, help="Panel CSV (year,labor,capital,production)"
    )
    common.add_argument("--out", type=Path, help="Report path (default: stdout)")
    common.add_argument(
        "--format", choices=FORMATS, default="json", help="Report format"
    )
    common.add_argument(
        "--origin-year",
        type=int,
        help="Calendar year mapped to t = 0 (default: first year)",
    )
    common.add_argument("--plot", type=Path, help="Write an SVG plot to this path")
    common.add_argument("--verbose", action="store_true", help="Debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="bowley",
        description="Growth-flow invariants, production functions and factor shares",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser(
        "fit-exp", parents=[common], help="Fit exponential growth to each series"
    )

    p = sub.add_parser(
        "fit-logistic", parents=[common], help="Fit logistic growth to each series"
    )
    p.add_argument("--init", type=_float_triple, help="Starting b,x0,N for one series")
    p.add_argument(
        "--series",
        choices=(*PANEL_COLUMNS, "all"),
        default="all",
        help="Series to fit (default: all)",
    )

    p = sub.add_parser("fit-cd", parents=[common], help="Fit a Cobb-Douglas surface")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--fix-crs", action="store_true", help="Impose alpha + beta = 1")
    mode.add_argument(
        "--alpha", type=float, help="Fix alpha, take beta from the growth rates, fit A"
    )
    p.add_argument("--b", type=_float_triple, help="Growth rates b1,b2,b3 for --alpha")

    p = sub.add_parser(
        "fit-lpf", parents=[common], help="Fit the logistic production function"
    )
    p.add_argument(
        "--capacities",
        type=_float_triple,
        help="Carrying capacities N_L,N_K,N_Y (default: from logistic fits)",
    )

    p = sub.add_parser(
        "elasticities", parents=[common], help="Elasticities on the orthogonality line"
    )
    p.add_argument("--b", type=_float_triple, help="Growth rates b1,b2,b3")
    p.add_argument("--alpha", type=float, help="Also report beta for this alpha")

    p = sub.add_parser("classify", parents=[common], help="Classify returns to scale")
    p.add_argument("--b", type=_float_triple, help="Growth rates b1,b2,b3")

    p = sub.add_parser("shares", parents=[common], help="Labor share along the flows")
    p.add_argument("--alpha", type=float, help="Labor elasticity of the surface")
    p.add_argument("--logistic", action="store_true", help="Use logistic flows")

    p = sub.add_parser(
        "verify-invariants", parents=[common], help="Run the property suites"
    )
    p.add_argument("--seed", type=int, default=0, help="Seed for random draws")

    p = sub.add_parser("report", parents=[common], help="Full analysis of one panel")
    p.add_argument("--logistic", action="store_true", help="Include the logistic side")

    return parser


# Subcommands


def cmd_fit_exp(args: argparse.Namespace) -> RunReport:
    panel = _load(args)
    fits = fit_panel_exponential(panel)
    report = _new_report(args, panel)
    _add_exponential(report, fits)
    _summarize("b", {name: fit.b for name, fit in _named(fits)})
    if args.plot:
        _plot_fits(panel, fits, args.plot, "Exponential fits")
    return report


def cmd_fit_logistic(args: argparse.Namespace) -> RunReport:
    if args.init is not None and args.series == "all":
        raise UsageError("--init needs a single --series")
    panel = _load(args)
    report = _new_report(args, panel)

    named: dict[str, ExpFit | LogisticFit]
    if args.series == "all":
        fits = fit_panel_logistic(panel, opts=config.nls_options())
        named = dict(_named(fits))
    else:
        named = {
            args.series: fit_logistic(
                panel.column(args.series), args.init, config.nls_options(), panel.t
            )
        }

    for name, fit in named.items():
        _add_logistic(report, name, _logistic(fit))
    _summarize("N", {name: _logistic(fit).N for name, fit in named.items()})
    if args.plot:
        _plot_series(panel, named, args.plot, "Logistic fits")
    return report


def cmd_fit_cd(args: argparse.Namespace) -> RunReport:
    panel = _load(args)
    report = _new_report(args, panel)

    if args.alpha is not None:
        rates = args.b or fit_panel_exponential(panel).rates
        beta = beta_given_alpha(rates, args.alpha)
        fit = fit_cobb_douglas_scale(panel, args.alpha, beta)
    else:
        fit = fit_cobb_douglas(panel, config.nls_options(), fix_crs=args.fix_crs)

    _add_cobb_douglas(report, fit)
    cd = fit.cd
    _summarize("Cobb-Douglas", {"A": cd.A, "alpha": cd.alpha, "beta": cd.beta})
    if args.plot:
        fitted = [
            eval_cobb_douglas(fit.cd, L, K)
            for L, K in zip(panel.labor, panel.capital, strict=True)
        ]
        _plot_observed_vs(panel, fitted, "Cobb-Douglas", args.plot)
    return report


def cmd_fit_lpf(args: argparse.Namespace) -> RunReport:
    panel = _load(args)
    report = _new_report(args, panel)

    capacities = args.capacities
    if capacities is None:
        fits = fit_panel_logistic(panel, opts=config.nls_options())
        _add_logistic_triple(report, fits)
        capacities = tuple(_logistic(fit).N for _, fit in _named(fits))

    lpf = fit_logistic_production(panel, capacities, config.nls_options())
    _add_logistic_production(report, lpf)
    _summarize(
        "logistic production",
        {"alpha": lpf.lp.alpha, "beta": lpf.lp.beta, "C": lpf.lp.C},
    )
    if args.plot:
        fitted = [
            eval_logistic_production(lpf.lp, L, K)
            for L, K in zip(panel.labor, panel.capital, strict=True)
        ]
        _plot_observed_vs(panel, fitted, "logistic production", args.plot)
    return report


def cmd_elasticities(args: argparse.Namespace) -> RunReport:
    report, rates = _rates_report(args)
    solution = crs_elasticities(rates)
    report.classification = solution.classification.value
    report.parameters["alpha"] = solution.alpha
    report.parameters["beta"] = solution.beta
    if args.alpha is not None:
        report.parameters["beta_given_alpha"] = {
            "alpha": args.alpha,
            "beta": beta_given_alpha(rates, args.alpha),
        }
    _summarize("elasticities", {"alpha": solution.alpha, "beta": solution.beta})
    return report


def cmd_classify(args: argparse.Namespace) -> RunReport:
    report, rates = _rates_report(args)
    report.classification = classify_returns(rates).value
    logger.info(f"Returns classification: {report.classification}")
    return report


def cmd_shares(args: argparse.Namespace) -> RunReport:
    panel = _load(args)
    report = _new_report(args, panel)
    if args.logistic:
        _add_logistic_shares(report, panel, args.plot)
    else:
        _add_exponential_shares(report, panel, args.alpha, args.plot)
    return report


def cmd_verify(args: argparse.Namespace) -> RunReport:
    panel = _load(args) if args.input else None
    report = _new_report(args, panel)
    report.checks = run_property_checks(panel, seed=args.seed)
    for check in report.checks:
        status = "pass" if check.passed else "FAIL"
        logger.info(
            f"{status} {check.name}: {check.metric:.7g} (tolerance {check.tolerance:.1g})"
        )
    return report


def cmd_report(args: argparse.Namespace) -> RunReport:
    panel = _load(args)
    report = _new_report(args, panel)

    fits = fit_panel_exponential(panel)
    _add_exponential(report, fits)
    solution = crs_elasticities(fits.rates)
    report.classification = solution.classification.value
    report.parameters["elasticities"] = {"alpha": solution.alpha, "beta": solution.beta}
    _add_cobb_douglas(report, fit_cobb_douglas(panel, config.nls_options()))
    _add_exponential_shares(report, panel, None, None)

    if args.logistic:
        _add_logistic_shares(report, panel, args.plot)
    elif args.plot:
        _plot_fits(panel, fits, args.plot, "Exponential fits")
    return report


COMMANDS: dict[str, Handler] = {
    "fit-exp": cmd_fit_exp,
    "fit-logistic": cmd_fit_logistic,
    "fit-cd": cmd_fit_cd,
    "fit-lpf": cmd_fit_lpf,
    "elasticities": cmd_elasticities,
    "classify": cmd_classify,
    "shares": cmd_shares,
    "verify-invariants": cmd_verify,
    "report": cmd_report,
}


# Report building


def _new_report(args: argparse.Namespace, panel: EconPanel | None) -> RunReport:
    arguments = {
        key: (str(value) if isinstance(value, Path) else value)
        for key, value in sorted(vars(args).items())
    }
    digest = input_digest(args.input, len(panel)) if panel is not None else None
    return RunReport(command=args.command, arguments=arguments, input=digest)


def _rates_report(
    args: argparse.Namespace,
) -> tuple[RunReport, tuple[float, float, float]]:
    if args.b is not None:
        report = _new_report(args, None)
        rates = args.b
    else:
        panel = _load(args)
        report = _new_report(args, panel)
        fits = fit_panel_exponential(panel)
        _add_exponential(report, fits)
        rates = fits.rates
    report.parameters["b"] = list(rates)
    return report, rates


def _add_exponential(report: RunReport, fits: TripleFit) -> None:
    for name, fit in _named(fits):
        exp_fit = _exponential(fit)
        report.parameters[name] = {"b": exp_fit.b, "x0": exp_fit.x0, "c": exp_fit.c}
        report.rss[f"{name}_log"] = exp_fit.rss_log
        report.rss[f"{name}_raw"] = exp_fit.rss_raw


def _add_logistic(report: RunReport, name: str, fit: LogisticFit) -> None:
    report.parameters[name] = {
        "b": fit.b,
        "x0": fit.x0,
        "N": fit.N,
        "converged": fit.converged,
        "near_degenerate": fit.near_degenerate,
        "termination": fit.termination.value if fit.termination else None,
    }
    report.rss[name] = fit.rss


def _add_logistic_triple(report: RunReport, fits: TripleFit) -> None:
    for name, fit in _named(fits):
        _add_logistic(report, f"logistic_{name}", _logistic(fit))


def _add_cobb_douglas(report: RunReport, fit: CobbDouglasFit) -> None:
    report.parameters["cobb_douglas"] = {
        "A": fit.cd.A,
        "alpha": fit.cd.alpha,
        "beta": fit.cd.beta,
        "mode": fit.mode.value,
        "converged": fit.converged,
        "iterations": fit.iterations,
    }
    report.rss["cobb_douglas"] = fit.rss


def _add_logistic_production(report: RunReport, fit: LogisticProductionFit) -> None:
    lp = fit.lp
    report.parameters["logistic_production"] = {
        "N_L": lp.N_L,
        "N_K": lp.N_K,
        "N_Y": lp.N_Y,
        "C": lp.C,
        "B": b_coefficient(lp),
        "alpha": lp.alpha,
        "beta": lp.beta,
        "converged": fit.converged,
        "iterations": fit.iterations,
    }
    report.rss["logistic_production"] = fit.rss


def _add_exponential_shares(
    report: RunReport, panel: EconPanel, alpha: float | None, plot: Path | None
) -> None:
    """Labor share of a Cobb-Douglas surface along the fitted exponential flows."""
    fits = fit_panel_exponential(panel)
    labor, capital = _exponential(fits.labor), _exponential(fits.capital)

    if alpha is None:
        solution = crs_elasticities(fits.rates)
        if solution.classification is ReturnsClass.CRS_ATTAINABLE:
            alpha = solution.alpha
    if alpha is not None:
        cd = fit_cobb_douglas_scale(panel, alpha, beta_given_alpha(fits.rates, alpha)).cd
    else:
        cd = fit_cobb_douglas(panel, config.nls_options()).cd

    def surface(L: float, K: float) -> float:
        return eval_cobb_douglas(cd, L, K)

    summary = share_constancy_report(
        surface,
        lambda t: eval_exponential(labor, t),
        lambda t: eval_exponential(capital, t),
        panel.t,
    )
    report.parameters["share_surface"] = {"A": cd.A, "alpha": cd.alpha, "beta": cd.beta}
    report.shares.update(_prefixed("exponential", summary.model_dump()))
    _summarize(
        "exponential labor share",
        {"mean": summary.mean, "range": summary.relative_range},
    )
    if plot:
        shares = [
            numeric_wage_share(
                surface, eval_exponential(labor, t), eval_exponential(capital, t)
            ).s_L
            for t in panel.t
        ]
        years = [float(y) for y in panel.years]
        emit_plot(
            [NamedSeries(name="labor share", t=years, values=shares)],
            plot,
            "Labor share along exponential flows",
        )


def _add_logistic_shares(report: RunReport, panel: EconPanel, plot: Path | None) -> None:
    """Labor share of the fitted logistic production function along logistic flows."""
    fits = fit_panel_logistic(panel, opts=config.nls_options())
    labor, capital = _logistic(fits.labor), _logistic(fits.capital)
    production = _logistic(fits.production)
    _add_logistic_triple(report, fits)

    lpf = fit_logistic_production(
        panel, (labor.N, capital.N, production.N), config.nls_options()
    )
    _add_logistic_production(report, lpf)
    lp = lpf.lp

    t = [float(v) for v in panel.t]
    analytic = [
        analytic_logistic_share(lp, eval_logistic(labor, s), eval_logistic(capital, s))
        for s in t
    ]
    printed = logistic_share_trajectory(fits, t)
    composed = logistic_share_trajectory(fits, t, alpha=lp.alpha)
    summary = share_constancy_report(
        lambda L, K: eval_logistic_production(lp, L, K),
        lambda s: eval_logistic(labor, s),
        lambda s: eval_logistic(capital, s),
        t,
    )

    report.parameters["logistic_share"] = {
        "analytic": analytic,
        "trajectory_rate_ratio": [float(v) for v in printed],
        "trajectory_alpha": [float(v) for v in composed],
    }
    report.shares.update(_prefixed("logistic", summary.model_dump()))
    _summarize("logistic labor share", {"min": summary.minimum, "max": summary.maximum})
    if plot:
        years = [float(y) for y in panel.years]
        emit_plot(
            [
                NamedSeries(name="labor share (analytic)", t=years, values=analytic),
                NamedSeries(
                    name="labor share (rate ratio)",
                    t=years,
                    values=[float(v) for v in printed],
                ),
            ],
            plot,
            "Labor share along logistic flows",
        )


# Helpers


def _load(args: argparse.Namespace) -> EconPanel:
    if args.input is None:
        raise UsageError(f"{args.command} needs --input")
    return read_panel(args.input, origin_year=args.origin_year)


def _named(fits: TripleFit) -> list[tuple[str, ExpFit | LogisticFit]]:
    return [(name, getattr(fits, name)) for name in PANEL_COLUMNS]


def _exponential(fit: ExpFit | LogisticFit) -> ExpFit:
    if not isinstance(fit, ExpFit):
        raise TypeError(f"expected an exponential fit, got {type(fit).__name__}")
    return fit


def _logistic(fit: ExpFit | LogisticFit) -> LogisticFit:
    if not isinstance(fit, LogisticFit):
        raise TypeError(f"expected a logistic fit, got {type(fit).__name__}")
    return fit


def _prefixed(prefix: str, values: dict[str, Any]) -> dict[str, float]:
    return {f"{prefix}_{key}": float(value) for key, value in values.items()}


def _plot_fits(panel: EconPanel, fits: TripleFit, path: Path, title: str) -> None:
    _plot_series(panel, dict(_named(fits)), path, title)


def _plot_series(
    panel: EconPanel, fits: dict[str, ExpFit | LogisticFit], path: Path, title: str
) -> None:
    years = [float(y) for y in panel.years]
    series = []
    for name, fit in fits.items():
        if isinstance(fit, ExpFit):
            fitted = [eval_exponential(fit, t) for t in panel.t]
        else:
            fitted = [eval_logistic(fit, t) for t in panel.t]
        observed = list(panel.column(name))
        series.append(NamedSeries(name=f"{name} observed", t=years, values=observed))
        series.append(NamedSeries(name=f"{name} fitted", t=years, values=fitted))
    emit_plot(series, path, title)


def _plot_observed_vs(
    panel: EconPanel, fitted: list[float], label: str, path: Path
) -> None:
    years = [float(y) for y in panel.years]
    emit_plot(
        [
            NamedSeries(
                name="production observed", t=years, values=list(panel.production)
            ),
            NamedSeries(name=f"{label} fitted", t=years, values=fitted),
        ],
        path,
        f"Observed vs {label}",
    )


def _summarize(label: str, values: dict[str, float | None]) -> None:
    """Log a human summary with 7 significant digits."""
    text = ", ".join(
        f"{key}={value:.7g}" if value is not None else f"{key}=n/a"
        for key, value in values.items()
    )
    logger.info(f"{label}: {text}")


def _float_triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected three comma-separated numbers, got '{text}'"
        )
    try:
        a, b, c = (float(part) for part in parts)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a number in '{text}'") from e
    return a, b, c


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, config.log_level.upper())
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


if __name__ == "__main__":
    main()

"""
Command line front end: `python -m src.cli <audit|analyze|simulate> ...`.

Reports go to `--output` when given, otherwise to stdout. JSON reports carry
a `schema_version`; CSV reports have a header row, comma separators and
'\\n' line endings. Exit codes: 0 success, 2 usage, format or I/O error,
3 no usable data.
"""
import argparse
import logging
import sys
from typing import Any, List, Literal, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from .config import configure_logging, settings
from .errors import BenfordAuditError, EmptyDataError
from .services import audit
from .services.ingest import SCHEMA_VERSION, analyze_dataset, load_dataset
from .services.mixture import MixtureSpec, mixture_experiment, random_mixture_spec
from .services.modone import AnalyticDistribution

logger = logging.getLogger("benford_audit")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_EMPTY = 3

DEFAULT_BASECHANGE_DIST = '{"kind": "power_of_uniform", "a": 1, "base": 10}'


class RunConfig(BaseModel):
    """
    Pydantic model for the options shared by every command.
    """
    model_config = ConfigDict(frozen=True)

    base: int = Field(settings.BASE, ge=2, description="Radix b >= 2.")
    seed: int = Field(settings.SEED, ge=0, lt=2 ** 64, description="64-bit seed.")
    samples: int = Field(settings.SAMPLES, ge=1, description="Monte Carlo draws.")
    alpha: float = Field(settings.ALPHA, gt=0, lt=0.5, description="Quantile level of the quantile spread.")
    grid: int = Field(settings.GRID, ge=16, description="Phase grid size of the uniform-law curve.")
    format: Literal["json", "csv"] = "json"
    output: Optional[str] = Field(None, description="Report path; stdout when absent.")


class Report(BaseModel):
    """Versioned JSON envelope of every report."""
    model_config = ConfigDict(ser_json_inf_nan="strings")

    schema_version: str = SCHEMA_VERSION
    command: str
    result: Any


# --- Output ---
def _emit_text(text: str, config: RunConfig) -> None:
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        logger.info("report written to %s", config.output)
    else:
        sys.stdout.write(text)


def _emit_json(command: str, result: Any, config: RunConfig) -> None:
    text = Report(command=command, result=result).model_dump_json(indent=2, by_alias=True)
    _emit_text(text + "\n", config)


def _emit_frame(frame: pd.DataFrame, config: RunConfig) -> None:
    _emit_text(frame.to_csv(index=False, lineterminator="\n"), config)


def _parse_ints(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


# --- Commands ---
def _audit_prop1(args, config: RunConfig) -> None:
    curve = audit.prop1_curve(config.base, config.grid)
    summary = {
        "base": curve.base,
        "bound": curve.bound,
        "bound_source": curve.bound_source,
        "d_star": curve.d_star,
        "theta_star": curve.theta_star,
        "residual": curve.residual,
        "w_star": curve.w_star,
        "grid": config.grid,
    }
    if curve.base == 10:
        summary["printed_decimal"] = audit.PRINTED_BOUND_DECIMAL
        summary["printed_decimal_gap"] = curve.bound - audit.PRINTED_BOUND_DECIMAL

    if config.format == "csv":
        audit.write_curve_csv(curve, config.output or sys.stdout)
    else:
        _emit_json("audit prop1", {**summary, "curve": curve}, config)

    # with the artifact on stdout the summary goes to stderr
    stream = sys.stderr if config.output is None else sys.stdout
    stream.write(Report(command="audit prop1 summary", result=summary).model_dump_json(indent=2) + "\n")


def _audit_counterexamples(args, config: RunConfig) -> None:
    n_max = args.n if args.n is not None else 12
    n_min = args.n if args.n is not None else 0
    rows = audit.counterexamples_report(n_max, config.base, n_min=n_min)
    if config.format == "csv":
        _emit_frame(pd.DataFrame([r.model_dump() for r in rows]), config)
    else:
        _emit_json("audit counterexamples", {"base": config.base, "rows": rows}, config)


def _audit_nonmonotonicity(args, config: RunConfig) -> None:
    report = audit.nonmonotonicity_report(config.base, config.alpha)
    if config.format == "csv":
        audit.write_nonmonotonicity_csv(report, config.output or sys.stdout)
    else:
        _emit_json("audit nonmonotonicity", report, config)


def _audit_basechange(args, config: RunConfig) -> None:
    dist = TypeAdapter(AnalyticDistribution).validate_json(args.dist)
    rows = audit.base_change_audit(dist, args.bases, config.seed, config.samples)
    if config.format == "csv":
        _emit_frame(pd.DataFrame([{
            "base": r.base,
            "ks": r.distance.ks,
            "ks_argmax": r.distance.argmax_s,
            "wasserstein": r.distance.wasserstein,
            "log_std_dev": r.log_spread.std_dev,
            "log_spread_ratio": r.log_spread_ratio,
        } for r in rows]), config)
    else:
        _emit_json("audit basechange", {"distribution": dist, "rows": rows}, config)


def _audit_benford_log(args, config: RunConfig) -> None:
    rows = []
    for k in args.k:
        log_scale = audit.log_of_benford_audit(k, config.base)
        itself = audit.benford_decade_distance(k, config.base)
        rows.append({"k": k, "log_scale": log_scale, "benford_decade": itself})
    if config.format == "csv":
        _emit_frame(pd.DataFrame([{
            "k": r["k"],
            "ks_log": r["log_scale"].ks,
            "ks_log_argmax": r["log_scale"].argmax_s,
            "wasserstein_log": r["log_scale"].wasserstein,
            "ks_benford_decade": r["benford_decade"].ks,
        } for r in rows]), config)
    else:
        _emit_json("audit benford-log", {"base": config.base, "rows": rows}, config)


AUDITS = {
    "prop1": _audit_prop1,
    "counterexamples": _audit_counterexamples,
    "nonmonotonicity": _audit_nonmonotonicity,
    "basechange": _audit_basechange,
    "benford-log": _audit_benford_log,
}


def cmd_audit(args, config: RunConfig) -> int:
    AUDITS[args.audit](args, config)
    return EXIT_OK


def cmd_analyze(args, config: RunConfig) -> int:
    dataset = load_dataset(args.input, args.column, stream=sys.stdin)
    report = analyze_dataset(dataset, config.base, config.alpha, args.digits_from_text)
    if config.format == "csv":
        _emit_frame(pd.DataFrame([r.model_dump() for r in report.first_digits]), config)
    else:
        _emit_json("analyze", report, config)
    return EXIT_OK


def cmd_simulate(args, config: RunConfig) -> int:
    if args.spec:
        try:
            with open(args.spec, "r", encoding="utf-8") as handle:
                payload = handle.read()
        except OSError as e:
            raise BenfordAuditError(f"cannot read {args.spec}: {e}") from e
        spec = MixtureSpec.model_validate_json(payload)
        if args.seed is not None:
            spec = spec.model_copy(update={"seed": config.seed})
    else:
        spec = random_mixture_spec(args.components, args.per_component, config.seed, config.base)

    trace = mixture_experiment(spec, config.base)
    if config.format == "csv":
        audit.write_trace_csv(trace, config.output or sys.stdout)
    else:
        _emit_json("simulate", trace, config)
    return EXIT_OK


# --- Parser ---
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", type=int, help=f"radix b >= 2 (default {settings.BASE})")
    common.add_argument("--seed", type=int, help=f"64-bit seed (default {settings.SEED})")
    common.add_argument("--samples", type=int, help=f"Monte Carlo draws (default {settings.SAMPLES})")
    common.add_argument("--alpha", type=float, help=f"quantile level in (0, 1/2) (default {settings.ALPHA})")
    common.add_argument("--grid", type=int, help=f"phase grid size >= 16 (default {settings.GRID})")
    common.add_argument("--format", choices=("json", "csv"), help="report format (default json)")
    common.add_argument("--output", help="report path (default stdout)")
    common.add_argument("--log-level", help=f"logging level (default {settings.LOG_LEVEL})")

    parser = argparse.ArgumentParser(
        prog="benford-audit",
        description="Audit the claim that large spread implies Benford's law, and test datasets against it.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    audit_parser = commands.add_parser("audit", help="run one of the audits")
    audits = audit_parser.add_subparsers(dest="audit", required=True)
    audits.add_parser("prop1", parents=[common], help="sharp KS bound for uniform laws")
    counter = audits.add_parser("counterexamples", parents=[common], help="leading-1 share of {1..2b^n}")
    counter.add_argument("--n", type=int, help="single n; default reports n = 0..12")
    audits.add_parser("nonmonotonicity", parents=[common], help="X = b^Y against Z = b^(3Y/2)")
    basechange = audits.add_parser("basechange", parents=[common], help="one distribution read in several bases")
    basechange.add_argument("--bases", type=_parse_ints, default=[10, 2], help="comma-separated radices")
    basechange.add_argument("--dist", default=DEFAULT_BASECHANGE_DIST, help="distribution as JSON")
    benford_log = audits.add_parser("benford-log", parents=[common], help="Benford variables on the log scale")
    benford_log.add_argument("--k", type=_parse_ints, default=[1, 5, 10], help="comma-separated decade indices")

    analyze = commands.add_parser("analyze", parents=[common], help="first-digit conformance of a dataset")
    analyze.add_argument("input", nargs="?", default="-", help="input file, '-' for stdin")
    analyze.add_argument("--column", help="CSV column name or 0-based index; plain lines when absent")
    analyze.add_argument("--digits-from-text", action="store_true",
                         help="take first digits from the decimal text (base 10)")

    simulate = commands.add_parser("simulate", parents=[common], help="pooled-mixture conformance trace")
    simulate.add_argument("spec", nargs="?", help="mixture spec JSON; a seeded random mixture when absent")
    simulate.add_argument("--components", type=int, default=20, help="components of the random mixture")
    simulate.add_argument("--per-component", type=int, default=10_000, help="draws per random component")
    return parser


def _run_config(args) -> RunConfig:
    given = {
        name: getattr(args, name)
        for name in ("base", "seed", "samples", "alpha", "grid", "format", "output")
        if getattr(args, name, None) is not None
    }
    return RunConfig(**given)


def _validation_message(e: ValidationError) -> str:
    first = e.errors()[0]
    path = ""
    for part in first["loc"]:
        path += f"[{part}]" if isinstance(part, int) else (f".{part}" if path else str(part))
    return f"{path or '<root>'}: {first['msg']}"


COMMANDS = {"audit": cmd_audit, "analyze": cmd_analyze, "simulate": cmd_simulate}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parses `argv` and runs one command.

    Returns:
        int: The process exit code.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(getattr(args, "log_level", None))

    try:
        config = _run_config(args)
        return COMMANDS[args.command](args, config)
    except EmptyDataError as e:
        print(f"benford-audit: error: {e}", file=sys.stderr)
        return EXIT_EMPTY
    except ValidationError as e:
        print(f"benford-audit: error: {_validation_message(e)}", file=sys.stderr)
        return EXIT_USAGE
    except BenfordAuditError as e:
        line = getattr(e, "line_number", None)
        where = f" (line {line})" if line else ""
        print(f"benford-audit: error: {e}{where}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"benford-audit: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""
Command-line interface for intervalroc
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .bootstrap import (
    PredictionMatrix,
    interval_bounds,
    interval_rows,
    percentile_intervals,
    point_auc,
    run_bootstrap_lab,
)
from .config import (
    DEFAULT_ALPHAS,
    DEFAULT_LEVELS,
    EMIT_KINDS,
    QUANTILE_RULES,
    LogisticConfig,
    RunConfig,
    parse_float_list,
    parse_percent_list,
)
from .curves import IntegrationRule, Pairing, build_curve
from .errors import (
    ConvergenceError,
    InputContractError,
    ResampleError,
    SweepLevelError,
)
from .metrics import ConfidenceSweep, confidence_sweep, curve_diagnostics, evaluate
from .models import ClassedIntervalDataset
from .svg import SvgFigureGenerator
from .synthetic import SyntheticConfig, validate_bounds
from .tabular import load_csv, load_interval_csv, load_labels_csv
from .writers import OutputBundle

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

CURVE_FIELDS = ("threshold", "x", "y", "pairing")
SWEEP_FIELDS = (
    "confidence_level", "auc_l", "auc_u", "p_correct", "p_overlap", "p_incorrect",
    "uauc", "abstention_rate", "bound_lower", "bound_upper", "bound_p_pair", "n_pos", "n_neg",
)
STACKED_FIELDS = ("confidence_level", "p_correct", "p_overlap", "p_incorrect")
BOUND_FIELDS = (
    "alpha", "auc_l", "auc_u", "p_pair", "lower_bound", "upper_bound", "auc_star", "contained",
)


@dataclass
class RunResult:
    """Staged outputs, manifest extras and the human summary of one command"""
    bundle: OutputBundle
    seeds: Dict[str, Any] = field(default_factory=dict)
    extras: Dict[str, Any] = field(default_factory=dict)
    summary: List[str] = field(default_factory=list)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    if not args.command and not args.from_manifest:
        parser.print_help()
        return EXIT_FAILURE

    try:
        config = config_from_manifest(args) if args.from_manifest else config_from_args(args)
        result = run(config)
        manifest = build_manifest(config, result)
        written = result.bundle.commit(manifest)
    except SweepLevelError as e:
        print(f"Error: {e}", file=sys.stderr)
        return _exit_code(e.cause)
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        return _exit_code(e)

    if not args.quiet:
        for line in result.summary:
            print(line)
        print(f"📁 Wrote {len(written)} files to {config.out_dir}")
    return EXIT_OK


def _exit_code(error: BaseException) -> int:
    if isinstance(error, (InputContractError, FileNotFoundError)):
        return EXIT_INPUT
    if isinstance(error, (ConvergenceError, ResampleError)):
        return EXIT_NUMERIC
    return EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intervalroc",
        description="Uncertainty-aware ROC analysis for interval-valued risk predictions",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Evaluate an interval file (label,lower,upper)
  intervalroc eval --input intervals.csv --out-dir out/ --alpha-pos 0.05 --alpha-neg 0.05

  # Sweep confidence levels over a bootstrap prediction matrix
  intervalroc sweep --input matrix.csv --labels test_labels.csv --levels 50,70,90,95 --out-dir out/

  # Run the bootstrap lab end to end
  intervalroc bootstrap --input diabetes.csv --train-frac 0.3 --bootstrap-B 300 --out-dir out/

  # Validate the optimal-AUC bounds on the synthetic world
  intervalroc synth-bounds --alphas 0.01,0.02,0.05 --out-dir out/

  # Re-run a previous manifest
  intervalroc --from-manifest out/manifest.json --out-dir rerun/
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="No summary on stdout")
    parser.add_argument("--from-manifest", help="Re-run the configuration recorded in a manifest.json")
    parser.add_argument("--out-dir", dest="top_out_dir", help="Output directory for --from-manifest")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    def common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--out-dir", required=True, help="Output directory")
        sub.add_argument("--emit", default=",".join(EMIT_KINDS), help="Comma list of json,csv,svg")

    def alphas(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--alpha-pos", type=float, help="Positive-class miscoverage for the bounds")
        sub.add_argument("--alpha-neg", type=float, help="Negative-class miscoverage for the bounds")

    def levels(sub: argparse.ArgumentParser) -> None:
        default = ",".join(f"{level * 100:g}" for level in DEFAULT_LEVELS)
        sub.add_argument("--levels", default=default, help="Confidence levels in percent")
        sub.add_argument("--quantile-rule", default="linear", choices=QUANTILE_RULES,
                         help="Empirical quantile rule (default: linear)")

    # Eval command
    eval_parser = subparsers.add_parser("eval", help="Evaluate a label,lower,upper interval file")
    eval_parser.add_argument("--input", required=True, help="Interval CSV")
    eval_parser.add_argument("--confidence-level", type=float,
                             help="Nominal level of the intervals in percent (metadata)")
    eval_parser.add_argument("--integration", default="trapezoid", choices=["trapezoid", "step"])
    common(eval_parser)
    alphas(eval_parser)

    # Sweep command
    sweep_parser = subparsers.add_parser("sweep", help="Sweep confidence levels over a prediction matrix")
    sweep_parser.add_argument("--input", required=True, help="Prediction matrix CSV (B rows x m columns)")
    sweep_parser.add_argument("--labels", required=True, help="CSV with a 'label' column, one row per column")
    common(sweep_parser)
    levels(sweep_parser)
    alphas(sweep_parser)

    # Bootstrap command
    boot_parser = subparsers.add_parser("bootstrap", help="Run the bootstrap lab end to end")
    boot_parser.add_argument("--input", required=True, help="Raw tabular CSV")
    boot_parser.add_argument("--label-column", default="Outcome")
    boot_parser.add_argument("--train-frac", type=float, default=0.30)
    boot_parser.add_argument("--seed", type=int, default=0)
    boot_parser.add_argument("--bootstrap-B", dest="bootstrap_b", type=int, default=300)
    boot_parser.add_argument("--lambda", dest="l2", type=float, help="L2 strength (default 1/n_train)")
    boot_parser.add_argument("--max-iter", type=int, default=100)
    boot_parser.add_argument("--tol", type=float, default=1e-8)
    boot_parser.add_argument("--zero-as-missing", default="",
                             help="Comma list of columns whose zeros are imputed by the training median")
    boot_parser.add_argument("--workers", type=int, default=1)
    boot_parser.add_argument("--integration", default="trapezoid", choices=["trapezoid", "step"])
    common(boot_parser)
    levels(boot_parser)
    alphas(boot_parser)

    # Synthetic bounds command
    synth_parser = subparsers.add_parser("synth-bounds", help="Validate optimal-AUC bounds on synthetic data")
    synth_parser.add_argument("--alphas", default=",".join(f"{a:g}" for a in DEFAULT_ALPHAS))
    synth_parser.add_argument("--n", dest="n_per_class", type=int, default=20_000, help="Samples per class")
    synth_parser.add_argument("--seed", type=int, default=0)
    synth_parser.add_argument("--mu0", type=float, default=0.0)
    synth_parser.add_argument("--mu1", type=float, default=1.0)
    synth_parser.add_argument("--workers", type=int, default=1)
    common(synth_parser)

    return parser


def _names(text: str) -> tuple:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Resolve parsed flags into a RunConfig"""
    values: Dict[str, Any] = {
        "command": args.command,
        "out_dir": args.out_dir,
        "emit": _names(args.emit),
    }
    if args.command != "synth-bounds":
        values["input"] = args.input
        values["alpha_pos"] = args.alpha_pos
        values["alpha_neg"] = args.alpha_neg
    if args.command == "eval" and args.confidence_level is not None:
        values["levels"] = (args.confidence_level / 100.0,)
    if args.command in ("eval", "bootstrap"):
        values["integration"] = args.integration
    if args.command in ("sweep", "bootstrap"):
        values["levels"] = tuple(parse_percent_list(args.levels))
        values["quantile_rule"] = args.quantile_rule
    if args.command == "sweep":
        values["labels"] = args.labels
    if args.command == "bootstrap":
        values.update(
            label_column=args.label_column,
            train_frac=args.train_frac,
            seed=args.seed,
            bootstrap_b=args.bootstrap_b,
            zero_as_missing=_names(args.zero_as_missing),
            workers=args.workers,
            logistic=LogisticConfig(l2=args.l2, max_iter=args.max_iter, tol=args.tol),
        )
    if args.command == "synth-bounds":
        values.update(
            alphas=tuple(parse_float_list(args.alphas)),
            n_per_class=args.n_per_class,
            seed=args.seed,
            mu0=args.mu0,
            mu1=args.mu1,
            workers=args.workers,
        )
    return RunConfig(**values)


def config_from_manifest(args: argparse.Namespace) -> RunConfig:
    path = Path(args.from_manifest)
    if not path.exists():
        raise FileNotFoundError(f"Manifest not found: {path}")
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputContractError(f"manifest {path} is not valid JSON: {exc}") from exc
    if "config" not in manifest:
        raise InputContractError(f"manifest {path} has no config section")
    config = RunConfig.from_dict(manifest["config"])
    out_dir = args.top_out_dir or getattr(args, "out_dir", None)
    if out_dir:
        config = replace(config, out_dir=out_dir)
    return config


def build_manifest(config: RunConfig, result: RunResult) -> Dict[str, Any]:
    return {
        "tool": "intervalroc",
        "version": __version__,
        "config": config.to_dict(),
        "seeds": result.seeds,
        **result.extras,
    }


def run(config: RunConfig) -> RunResult:
    """Dispatch one resolved configuration to its command"""
    handlers = {
        "eval": cmd_eval,
        "sweep": cmd_sweep,
        "bootstrap": cmd_bootstrap,
        "synth-bounds": cmd_synth_bounds,
    }
    return handlers[config.command](config)


def _percent_tag(level: float) -> str:
    return f"{level * 100:g}".replace(".", "_")


def _stage_evaluation(
    bundle: OutputBundle,
    config: RunConfig,
    data: ClassedIntervalDataset,
    level: Optional[float],
    suffix: str = "",
) -> Dict[str, Any]:
    """Report JSON, curve CSV, ROC SVG and diagnostics for one dataset"""
    report = evaluate(data, level, config.alpha_pos, config.alpha_neg)
    rule = IntegrationRule(config.integration)
    diagnostics = curve_diagnostics(data, rule)

    if config.emits("json"):
        bundle.add_json(f"report{suffix}.json", report.to_dict())
        bundle.add_json(f"diagnostics{suffix}.json", diagnostics)
    if config.emits("csv") or config.emits("svg"):
        strict = build_curve(data, Pairing.STRICT)
        permissive = build_curve(data, Pairing.PERMISSIVE)
        rows = list(strict.to_rows()) + list(permissive.to_rows())
        bundle.add_csv(f"curves{suffix}.csv", rows, CURVE_FIELDS)
        if config.emits("svg"):
            title = "Interval ROC" if level is None else f"Interval ROC at {level * 100:g}% CI"
            bundle.add(f"roc{suffix}.svg", SvgFigureGenerator().roc_figure(strict, permissive, title))
    return {"report": report.to_dict(), "diagnostics": diagnostics}


def cmd_eval(config: RunConfig) -> RunResult:
    """Handle eval command"""
    data = load_interval_csv(config.input)
    level = config.levels[0] if config.levels and len(config.levels) == 1 else None
    bundle = OutputBundle(config.out_dir)
    staged = _stage_evaluation(bundle, config, data, level)

    report, diagnostics = staged["report"], staged["diagnostics"]
    summary = [
        f"✅ Evaluated {data.n_pos} positive and {data.n_neg} negative intervals from {config.input}",
        f"📊 AUC_L {report['auc_l']:.4f}  AUC_U {report['auc_u']:.4f}  overlap {report['p_overlap']:.4f}",
        f"🎯 uAUC {_fmt(report['uauc'])}  abstention rate {report['abstention_rate']:.4f}",
        f"📐 integration deltas {diagnostics['auc_l_delta']:.4f} / {diagnostics['auc_u_delta']:.4f}",
    ]
    if report["bounds"]:
        b = report["bounds"]
        summary.append(f"🔒 AUC* bound [{b['lower']:.4f}, {b['upper']:.4f}] (p_pair {b['p_pair']:.4f})")
    return RunResult(bundle=bundle, extras={"diagnostics": diagnostics}, summary=summary)


def _stage_sweep(
    bundle: OutputBundle, config: RunConfig, matrix: PredictionMatrix, labels
) -> ConfidenceSweep:
    def provider(level: float) -> ClassedIntervalDataset:
        return percentile_intervals(matrix, labels, level, config.quantile_rule)

    sweep = confidence_sweep(provider, config.levels, config.alpha_pos, config.alpha_neg)
    if config.emits("json"):
        bundle.add_json("sweep.json", [report.to_dict() for report in sweep.reports])
    if config.emits("csv") or config.emits("svg"):
        bundle.add_csv("sweep.csv", sweep.to_rows(), SWEEP_FIELDS)
        bundle.add_csv("three_region.csv", sweep.stacked_rows(), STACKED_FIELDS)
    if config.emits("svg"):
        figure = SvgFigureGenerator().stacked_regions_figure(sweep.stacked_levels, sweep.stacked_regions)
        bundle.add("three_region.svg", figure)
    return sweep


def _sweep_summary(sweep: ConfidenceSweep) -> List[str]:
    lines = []
    for report in sweep.reports:
        lines.append(
            f"   {report.confidence_level * 100:5.1f}%  AUC_L {report.auc_l:.4f}  AUC_U {report.auc_u:.4f}"
            f"  overlap {report.abstention_rate:.4f}  uAUC {_fmt(report.uauc)}"
        )
    if not sweep.uauc_monotone:
        lines.append("⚠ uAUC is not monotone across these levels")
    return lines


def cmd_sweep(config: RunConfig) -> RunResult:
    """Handle sweep command"""
    matrix = PredictionMatrix.read_csv(config.input)
    labels = load_labels_csv(config.labels)
    if labels.shape[0] != matrix.n_instances:
        raise InputContractError(
            f"{labels.shape[0]} labels for a matrix with {matrix.n_instances} columns"
        )
    bundle = OutputBundle(config.out_dir)
    sweep = _stage_sweep(bundle, config, matrix, labels)
    baseline = point_auc(matrix.mean_predictions(), labels)

    summary = [f"✅ Swept {len(sweep.reports)} confidence levels over a {matrix.n_replicates} x "
               f"{matrix.n_instances} matrix", f"📊 point AUC of bootstrap means {baseline:.4f}"]
    summary += _sweep_summary(sweep)
    return RunResult(
        bundle=bundle,
        extras={"point_auc": baseline, "uauc_monotone": sweep.uauc_monotone},
        summary=summary,
    )


def cmd_bootstrap(config: RunConfig) -> RunResult:
    """Handle bootstrap command"""
    data = load_csv(config.input, label_column=config.label_column)
    lab = run_bootstrap_lab(
        data,
        config.train_frac,
        config.seed,
        config.bootstrap_b,
        config.logistic,
        config.zero_as_missing,
        config.workers,
    )
    matrix, labels = lab.matrix, lab.test_labels
    bundle = OutputBundle(config.out_dir)
    bundle.add("matrix.csv", matrix.to_csv())
    bundle.add_csv("test_labels.csv", ({"label": int(y)} for y in labels), ("label",))
    bundle.add_json(
        "matrix.json",
        {
            "shape": [matrix.n_replicates, matrix.n_instances],
            "master_seed": lab.master_seed,
            "split_seed": lab.split_seed,
            "replicate_seeds": list(matrix.replicate_seeds),
            "config": config.to_dict(),
        },
    )

    for level in config.levels:
        lower, upper = interval_bounds(matrix, level, config.quantile_rule)
        tag = _percent_tag(level)
        bundle.add_csv(f"intervals_{tag}.csv", interval_rows(lower, upper, labels), ("label", "lower", "upper"))
        data_at_level = ClassedIntervalDataset.from_labels(labels, lower, upper)
        _stage_evaluation(bundle, config, data_at_level, level, suffix=f"_{tag}")

    sweep = _stage_sweep(bundle, config, matrix, labels)
    baseline = lab.point_auc()
    summary = [
        f"✅ Bootstrap lab: {lab.train.n_rows} train / {lab.test.n_rows} test rows, "
        f"{matrix.n_replicates} replicates",
        f"📊 point AUC of bootstrap means {baseline:.4f}",
    ] + _sweep_summary(sweep)
    return RunResult(
        bundle=bundle,
        seeds={"master_seed": lab.master_seed, "split_seed": lab.split_seed,
               "replicate_seeds": list(matrix.replicate_seeds)},
        extras={"point_auc": baseline, "uauc_monotone": sweep.uauc_monotone},
        summary=summary,
    )


def cmd_synth_bounds(config: RunConfig) -> RunResult:
    """Handle synth-bounds command"""
    if not config.alphas:
        raise InputContractError("synth-bounds needs at least one alpha")
    template = SyntheticConfig(
        mu0=config.mu0, mu1=config.mu1, n_per_class=config.n_per_class, seed=config.seed
    )
    validation = validate_bounds(template, config.alphas, config.workers)

    bundle = OutputBundle(config.out_dir)
    rows = [row.to_row() for row in validation.rows]
    if config.emits("csv") or config.emits("svg"):
        bundle.add_csv("bounds.csv", rows, BOUND_FIELDS)
    if config.emits("svg"):
        bundle.add("bounds.svg", SvgFigureGenerator().bound_band_figure(validation.rows))
    details = [
        {
            "alpha": row.alpha,
            "raw_lower": row.raw_lower,
            "raw_upper": row.raw_upper,
            "width": row.width,
            "half_width": row.half_width,
            "realized_alpha_pos": row.realized_alpha_pos,
            "realized_alpha_neg": row.realized_alpha_neg,
        }
        for row in validation.rows
    ]
    if config.emits("json"):
        bundle.add_json(
            "bounds.json",
            {
                "auc_star": validation.auc_star,
                "analytic_auc_star": validation.analytic_auc_star,
                "all_contained": validation.all_contained,
                "widths_monotone": validation.widths_monotone,
                "rows": [dict(row, **detail) for row, detail in zip(rows, details)],
            },
        )

    summary = [
        f"✅ Validated {len(rows)} miscoverage rates on {2 * config.n_per_class} synthetic samples",
        f"🎯 AUC* {validation.auc_star:.4f} (analytic {validation.analytic_auc_star:.4f})",
    ]
    for row in validation.rows:
        mark = "✓" if row.contained else "✗"
        summary.append(
            f"   {mark} alpha {row.alpha:.2f}: [{row.lower_bound:.4f}, {row.upper_bound:.4f}] "
            f"width {row.width:.4f}"
        )
    return RunResult(
        bundle=bundle,
        seeds={"seed": config.seed, "alpha_seeds": validation.extras["alpha_seeds"]},
        extras={
            "auc_star": validation.auc_star,
            "analytic_auc_star": validation.analytic_auc_star,
            "all_contained": validation.all_contained,
        },
        summary=summary,
    )


def _fmt(value: Optional[float]) -> str:
    return "undefined" if value is None else f"{value:.4f}"


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: curve dumps, invariant checks, training, sweeps.

Exit codes: 0 success, 1 runtime failure, 2 usage or config error. Progress
goes to stdout, errors to stderr. Report CSVs get a PNG rendering next to
them (same stem) unless --no-plot is given.
"""

from __future__ import annotations

import argparse
import sys

from .activations import (
    Activation,
    Aria1,
    Aria2,
    Aria2Params,
    AriaFull,
    Relu,
    RichardsParams,
    Sigmoid,
    Swish,
)
from .checks import run_checks
from .config import ConfigError, load_sweep_config, load_train_config
from .errors import AriabenchError, InvalidParamsError
from .model import build_model
from .reports import write_curve_csv, write_report_csv, write_sweep_csv
from .sweep import run_sweep
from .train import train


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo_text, hi_text = text.split(":", 1)
        lo, hi = float(lo_text), float(hi_text)
    except ValueError:
        raise InvalidParamsError(f"--range expects MIN:MAX, got {text!r}") from None
    if not lo < hi:
        raise InvalidParamsError(f"--range needs MIN < MAX, got {text!r}")
    return lo, hi


def _activation_from_flags(args) -> Activation:
    kind = args.activation
    if kind == "relu":
        return Relu()
    if kind == "sigmoid":
        return Sigmoid()
    if kind == "swish":
        return Swish(args.beta)
    if kind == "aria1":
        return Aria1(args.alpha)
    if kind == "aria2":
        return Aria2(Aria2Params(args.alpha, args.beta))
    # full Richard's curve: six colon-separated parameters
    if args.richards is None:
        raise InvalidParamsError("--activation aria requires --richards A:K:B:nu:Q:C")
    parts = args.richards.split(":")
    if len(parts) != 6:
        raise InvalidParamsError(f"--richards expects 6 values, got {len(parts)}")
    try:
        a, k, b, nu, q, c = (float(p) for p in parts)
    except ValueError:
        raise InvalidParamsError(f"--richards has a non-numeric value: {args.richards!r}") from None
    return AriaFull(RichardsParams(A=a, K=k, B=b, nu=nu, Q=q, C=c))


def cmd_curve(args) -> int:
    try:
        act = _activation_from_flags(args)
        x_min, x_max = _parse_range(args.range)
        if args.steps < 2:
            raise InvalidParamsError(f"--steps must be >= 2, got {args.steps}")
    except AriabenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        write_curve_csv(act, x_min, x_max, args.steps, args.out)
        written = [str(args.out)]
        if not args.no_plot:
            from .plots import plot_path_for, save_curve_plot

            written.append(str(save_curve_plot(act, x_min, x_max, args.steps,
                                               plot_path_for(args.out))))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {' and '.join(written)}")
    return 0


def cmd_check(args) -> int:
    results = run_checks(
        grid_density=args.grid_density,
        stability_samples=args.stability_samples,
        break_gradient=args.break_gradient,
    )
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    failures = [r for r in results if not r.passed]
    if failures:
        first = failures[0]
        print(f"first failure: {first.name}: {first.detail}", file=sys.stderr)
        return 1
    return 0


def cmd_train(args) -> int:
    try:
        cfg = load_train_config(args.config)
    except ConfigError as exc:
        print(f"config error at {exc}", file=sys.stderr)
        return 2
    try:
        train_data, test_data = cfg.dataset.load()
        model = build_model(cfg.model.spec_for(None))

        def progress(m):
            print(
                f"epoch {m.epoch}/{cfg.train.epochs}  "
                f"loss {m.train_loss:.6f}  accuracy {m.test_accuracy:.4f}",
                flush=True,
            )

        report = train(model, train_data, test_data, cfg.train, progress=progress)
        write_report_csv(report, cfg.report_csv)
        written = [cfg.report_csv]
        if cfg.plot and not args.no_plot:
            from .plots import plot_path_for, save_training_plot

            written.append(str(save_training_plot(report, plot_path_for(cfg.report_csv))))
    except (AriabenchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"final accuracy {report.final_accuracy:.4f} ({report.wall_seconds:.1f}s); "
          f"wrote {' and '.join(written)}")
    return 0


def cmd_sweep(args) -> int:
    try:
        cfg = load_sweep_config(args.config)
    except ConfigError as exc:
        print(f"config error at {exc}", file=sys.stderr)
        return 2
    try:
        train_data, test_data = cfg.dataset.load()

        def progress(report):
            if report.status == "ok":
                print(
                    f"{report.run_id}: accuracy {report.final_accuracy:.4f} "
                    f"({report.wall_seconds:.1f}s)",
                    flush=True,
                )
            else:
                print(f"{report.run_id}: FAILED", flush=True)

        reports = run_sweep(cfg, train_data, test_data, jobs=args.jobs,
                            progress=progress)
        write_sweep_csv(reports, cfg.output_path)
        written = [cfg.output_path]
        if cfg.plot and not args.no_plot:
            from .plots import plot_path_for, save_sweep_plot

            written.append(str(save_sweep_plot(reports, plot_path_for(cfg.output_path))))
    except (AriabenchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {' and '.join(written)}")
    failed = [r for r in reports if r.status != "ok"]
    if failed:
        print(f"{len(failed)} run(s) failed: "
              + ", ".join(r.activation for r in failed), file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ariabench",
        description="Richard's-curve weighted activations: curves, checks, "
                    "training runs, and hyper-parameter sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    curve = sub.add_parser("curve", help="sample an activation and its derivative to CSV")
    curve.add_argument("--activation", required=True,
                       choices=["relu", "sigmoid", "swish", "aria1", "aria2", "aria"])
    curve.add_argument("--alpha", type=float, default=1.0,
                       help="exponent hyper-parameter (aria1/aria2)")
    curve.add_argument("--beta", type=float, default=1.0,
                       help="rate hyper-parameter (swish/aria2)")
    curve.add_argument("--richards", default=None, metavar="A:K:B:nu:Q:C",
                       help="full six-parameter curve (activation 'aria')")
    curve.add_argument("--range", default="-5:5", metavar="MIN:MAX")
    curve.add_argument("--steps", type=int, default=201)
    curve.add_argument("--out", required=True)
    curve.add_argument("--no-plot", action="store_true")
    curve.set_defaults(func=cmd_curve)

    check = sub.add_parser("check", help="run the activation invariant battery")
    check.add_argument("--grid-density", type=int, default=4001,
                       help="points on the [-20, 20] evaluation grid")
    check.add_argument("--stability-samples", type=int, default=1_000_000)
    check.add_argument("--break-gradient", action="store_true",
                       help=argparse.SUPPRESS)  # negative control for tests
    check.set_defaults(func=cmd_check)

    tr = sub.add_parser("train", help="train one model from a JSON config")
    tr.add_argument("config")
    tr.add_argument("--no-plot", action="store_true")
    tr.set_defaults(func=cmd_train)

    sw = sub.add_parser("sweep", help="train the (alpha, beta) grid from a JSON config")
    sw.add_argument("config")
    sw.add_argument("--jobs", type=int, default=None,
                    help="worker processes (default: the config's value)")
    sw.add_argument("--no-plot", action="store_true")
    sw.set_defaults(func=cmd_sweep)
    return parser


def _merge_dash_values(argv: list[str]) -> list[str]:
    """Join flags whose values may start with '-' (e.g. --range -5:5) into
    --flag=value form so argparse does not mistake the value for an option."""
    out = []
    it = iter(argv)
    for token in it:
        if token in ("--range", "--richards"):
            value = next(it, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_merge_dash_values(list(argv)))
    except SystemExit as exc:  # argparse already printed usage/help
        return 0 if exc.code in (0, None) else int(exc.code)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

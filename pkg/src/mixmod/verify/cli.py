"""``verify <experiment> [options]``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
invalid arguments or configurations.
"""

from __future__ import annotations

import argparse
import sys

from .config import EXPERIMENTS, ConfigError, ExperimentConfig
from .experiments import run_experiment
from .report import emit_report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _p_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="verify", description="Run a seeded numerical experiment and report the result.")
    ap.add_argument("experiment", choices=EXPERIMENTS)
    ap.add_argument("--dim", type=int, help="signal length N")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--p", type=_p_list, help="comma-separated exponents, e.g. 1,1.5,2")
    ap.add_argument("--s", type=float, help="weight exponent")
    ap.add_argument("--a", type=int, help="lattice time step")
    ap.add_argument("--b", type=int, help="lattice frequency step")
    ap.add_argument("--channels", type=int, help="Wilson channel count M")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--format", choices=("json", "csv"))
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = ExperimentConfig.defaults(
            args.experiment,
            N=args.dim,
            trials=args.trials,
            p_grid=args.p,
            s=args.s,
            a=args.a,
            b=args.b,
            M=args.channels,
            seed=args.seed,
            out=args.out,
            format=args.format,
        ).validate()
    except ConfigError as exc:
        print(f"verify: error: {exc}", file=sys.stderr)
        return 2

    report = run_experiment(cfg)
    text = emit_report(report, cfg.format, cfg.out)
    if cfg.out is None:
        sys.stdout.write(text)
    if not report.passed:
        failed = [name for name, (mx, tol) in report.checks.items() if mx > tol]
        print(f"verify: {cfg.name} failed checks: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line surface: identity checks, figure data, scalar sweeps, Monte Carlo.

Exit codes: 0 success (and all checks passed), 1 check failures, 2 malformed
configuration or arguments, 3 numerical convergence failures.  All file I/O
goes through explicit paths; CSV output is deterministic with full
round-trip-precision numbers.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NumericalError
from .priors import DiscretePrior, JointPrior
from .pp_sim import TARGET_MODES, PiecewiseSignalModel, mc_estimate
from .scalar_channel import mle, mmle, mutual_information, output_kl
from .verify import figure2_curves, figure3_curves, full_suite

__all__ = ["GammaGrid", "RunConfig", "dispatch", "main", "load_prior", "load_joint_prior", "load_model"]

EXIT_OK = 0
EXIT_CHECK_FAILURES = 1
EXIT_BAD_CONFIG = 2
EXIT_NUMERICAL = 3


@dataclass(frozen=True)
class GammaGrid:
    """SNR grid specification: start, stop, count, linear or log spacing."""

    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("grid count must be at least 1")
        if self.start < 0.0 or self.stop < self.start:
            raise ValueError("grid requires 0 <= start <= stop")
        if self.spacing not in ("linear", "log"):
            raise ValueError("spacing must be 'linear' or 'log'")
        if self.spacing == "log" and self.start <= 0.0:
            raise ValueError("log spacing requires start > 0")

    @classmethod
    def parse(cls, spec: str) -> "GammaGrid":
        parts = spec.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"grid spec must be start:stop:count[:linear|log], got {spec!r}")
        spacing = parts[3] if len(parts) == 4 else "linear"
        return cls(float(parts[0]), float(parts[1]), int(parts[2]), spacing)

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation: one command plus its file paths and numeric settings."""

    command: str
    prior_path: Optional[str] = None
    mismatch_path: Optional[str] = None
    model_path: Optional[str] = None
    filter_path: Optional[str] = None
    suite_path: Optional[str] = None
    gamma_grid: Optional[GammaGrid] = None
    gamma: Optional[float] = None
    target: Optional[str] = None
    replicates: int = 1
    seed: int = 0
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.gamma is not None and self.gamma < 0.0:
            raise ValueError("gamma must be non-negative")
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")


def load_prior(path: str) -> DiscretePrior:
    """Read {"atoms": [{"x": number, "w": number}, ...]}."""
    with open(path) as fh:
        doc = json.load(fh)
    try:
        return DiscretePrior((a["x"], a["w"]) for a in doc["atoms"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: expected {{'atoms': [{{'x':..., 'w':...}}]}}") from exc


def load_joint_prior(path: str) -> JointPrior:
    """Read {"atoms": [{"values": [...], "w": number}, ...]}."""
    with open(path) as fh:
        doc = json.load(fh)
    try:
        return JointPrior((a["values"], a["w"]) for a in doc["atoms"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: expected {{'atoms': [{{'values': [...], 'w':...}}]}}") from exc


def load_model(path: str) -> PiecewiseSignalModel:
    """Read {"breakpoints": [...], "atoms": [{"values": [...], "w": number}, ...]}."""
    with open(path) as fh:
        doc = json.load(fh)
    try:
        prior = JointPrior((a["values"], a["w"]) for a in doc["atoms"])
        return PiecewiseSignalModel(doc["breakpoints"], prior)
    except (KeyError, TypeError) as exc:
        raise ValueError(
            f"{path}: expected {{'breakpoints': [...], 'atoms': [{{'values': [...], 'w':...}}]}}"
        ) from exc


def _json_safe(value):
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def _write_csv(path: Optional[str], header: Sequence[str], rows) -> None:
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])
    finally:
        if path:
            out.close()


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poischan",
        description="Numerical checks of Poisson-channel information-estimation identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the identity-check suite")
    p_verify.add_argument("--suite", help="JSON suite config: {'checks': [{'id':..., 'params':...}]}")
    p_verify.add_argument("--report", help="write newline-delimited JSON reports here (default: stdout)")

    p_fig2 = sub.add_parser("figure2", help="binary DC curve family as CSV")
    p_fig2.add_argument("--p", type=float, default=0.5)
    p_fig2.add_argument("--q", type=float, default=0.2)
    p_fig2.add_argument("--gmax", type=float, default=12.0)
    p_fig2.add_argument("--points", type=int, default=200)
    p_fig2.add_argument("--out", help="CSV path (default: stdout)")

    p_fig3 = sub.add_parser("figure3", help="deterministic-amplitude curve pair as CSV")
    p_fig3.add_argument("--gmax", type=float, default=20.0)
    p_fig3.add_argument("--points", type=int, default=200)
    p_fig3.add_argument("--out", help="CSV path (default: stdout)")

    p_scalar = sub.add_parser("scalar", help="scalar-channel sweep as CSV")
    p_scalar.add_argument("--prior", required=True, help="true prior JSON")
    p_scalar.add_argument("--mismatch", required=True, help="belief prior JSON")
    p_scalar.add_argument("--gamma-grid", required=True, help="start:stop:count[:linear|log]")
    p_scalar.add_argument("--out", help="CSV path (default: stdout)")

    p_mc = sub.add_parser("mc", help="Monte Carlo loss estimate as one-line JSON")
    p_mc.add_argument("--model", required=True, help="piecewise signal model JSON")
    p_mc.add_argument("--filter", required=True, dest="filter_path", help="belief prior JSON")
    p_mc.add_argument("--gamma", type=float, required=True)
    p_mc.add_argument("--target", required=True, choices=sorted(TARGET_MODES))
    p_mc.add_argument("--reps", type=int, required=True)
    p_mc.add_argument("--seed", type=int, required=True)

    return parser


def _cmd_verify(args) -> int:
    config = None
    if args.suite:
        with open(args.suite) as fh:
            config = json.load(fh)
    reports, summary = full_suite(config)
    lines = [json.dumps(_json_safe(dataclasses.asdict(r)), sort_keys=True) for r in reports]
    if args.report:
        with open(args.report, "w") as fh:
            fh.write("\n".join(lines) + ("\n" if lines else ""))
    else:
        for line in lines:
            print(line)
    for report in reports:
        status = "pass" if report.passed else "FAIL"
        print(f"{status}  {report.check_id:6s} {report.description}")
    for note in summary["notes"]:
        print(f"note: {note}")
    print(f"PASS {summary['passed']}/{summary['total']}")
    return EXIT_OK if summary["all_passed"] else EXIT_CHECK_FAILURES


def _cmd_figure2(args) -> int:
    curves = figure2_curves(args.p, args.q, args.gmax, args.points)
    header = ["gamma", "mle_PP", "cmle_PP", "mle_PQ", "cmle_PQ"]
    rows = zip(*(curves[c] for c in header))
    _write_csv(args.out, header, rows)
    return EXIT_OK


def _cmd_figure3(args) -> int:
    curves = figure3_curves(args.gmax, args.points)
    header = ["gamma", "mle_PQ", "cmle_PQ"]
    rows = zip(*(curves[c] for c in header))
    _write_csv(args.out, header, rows)
    return EXIT_OK


def _cmd_scalar(args) -> int:
    config = RunConfig(
        command="scalar",
        prior_path=args.prior,
        mismatch_path=args.mismatch,
        gamma_grid=GammaGrid.parse(args.gamma_grid),
        output_path=args.out,
    )
    p = load_prior(config.prior_path)
    q = load_prior(config.mismatch_path)
    rows = []
    for g in config.gamma_grid.values():
        rows.append(
            (g, mmle(p, g), mle(p, q, g), output_kl(p, q, g), mutual_information(p, g))
        )
    _write_csv(config.output_path, ["gamma", "mmle", "mle", "output_kl", "mutual_information"], rows)
    return EXIT_OK


def _cmd_mc(args) -> int:
    config = RunConfig(
        command="mc",
        model_path=args.model,
        filter_path=args.filter_path,
        gamma=args.gamma,
        target=args.target,
        replicates=args.reps,
        seed=args.seed,
    )
    model = load_model(config.model_path)
    belief = load_joint_prior(config.filter_path)
    est = mc_estimate(model, belief, config.gamma, config.target, config.replicates, config.seed)
    print(json.dumps(_json_safe(dataclasses.asdict(est)), sort_keys=True))
    return EXIT_OK


_COMMANDS = {
    "verify": _cmd_verify,
    "figure2": _cmd_figure2,
    "figure3": _cmd_figure3,
    "scalar": _cmd_scalar,
    "mc": _cmd_mc,
}


def dispatch(argv: Sequence[str]) -> int:
    """Parse argv and run one subcommand, mapping failures to exit codes."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()

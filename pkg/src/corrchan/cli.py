"""Command-line interface: capacity curves, ensembles, verification,
shot simulation and protocol rates in stable CSV/JSON formats.

Output contracts: CSV uses 9 fractional digits, LF line endings and no
trailing whitespace; JSON is UTF-8 with lexicographically sorted keys.
All outputs are byte-identical across runs with identical flags, seed and
shard count. Exit codes: 0 success, 1 verification failure, 2 usage or
I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .capacity import (CURVE_MODES, MODES, ENSEMBLE_PAIR_LABELS, capacity_breakdown,
                       capacity_curve, chi2_bound, crange)
from .channel import NoiseModel
from .exceptions import ContractError, ConvergenceError, InvalidStateError
from .measurement import simulate_shots
from .protocol import TrainProtocolConfig, extended_rate, optimize_photon_probability
from .verify import SUITE_ORDER, run_suites

_CURVE_COLUMNS = {
    "entangled": "chi_total_entangled",
    "separable": "chi_total_separable",
    "baseline": "chi_total_baseline",
}


@dataclass(frozen=True)
class RunConfig:
    """Validated CLI parameters for one invocation."""

    command: str
    eta_min: float = 0.0
    eta_max: float = 1.0
    steps: int = 11
    mode: str = "all"
    samples: int = 100000
    shots: int = 1000000
    seed: int = 0
    shards: int = 1
    output_path: Optional[str] = None
    out_format: str = "csv"
    plot_path: Optional[str] = None
    p_photon: float = 0.5
    optimize: bool = False
    suite: Optional[str] = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.eta_min <= self.eta_max <= 1.0):
            raise ContractError("eta range must satisfy 0 <= eta-min <= eta-max <= 1")
        if self.steps < 1:
            raise ContractError("steps must be >= 1")
        if self.shards < 1:
            raise ContractError("shards must be >= 1")
        if self.seed < 0:
            raise ContractError("seed must be a nonnegative integer")
        if not (0.0 <= self.p_photon <= 1.0):
            raise ContractError("p must lie in [0, 1]")


def _fmt(value: float) -> str:
    return f"{value:.9f}"


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_curve(cfg: RunConfig) -> int:
    modes = list(CURVE_MODES) if cfg.mode == "all" else [cfg.mode]
    etas = np.linspace(cfg.eta_min, cfg.eta_max, cfg.steps)
    series = {mode: [total for _, total in capacity_curve(mode, etas)] for mode in modes}
    if cfg.out_format == "csv":
        header = "eta," + ",".join(_CURVE_COLUMNS[m] for m in modes)
        lines = [header]
        for i, eta in enumerate(etas):
            lines.append(",".join([_fmt(float(eta))] + [_fmt(series[m][i]) for m in modes]))
        text = "\n".join(lines) + "\n"
    else:
        payload = {"eta": [float(e) for e in etas]}
        for m in modes:
            payload[_CURVE_COLUMNS[m]] = series[m]
        text = _dump_json(payload)
    _write(text, cfg.output_path)
    if cfg.plot_path is not None:
        from .plotting import plot_capacity_curve
        plot_capacity_curve([float(e) for e in etas], series, cfg.plot_path)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    names = None if cfg.suite in (None, "all") else (cfg.suite,)
    report = run_suites(names, samples=cfg.samples, seed=cfg.seed, shards=cfg.shards)
    _write(_dump_json(report), cfg.output_path)
    return 0 if report["all_passed"] else 1


def cmd_ensemble(cfg: RunConfig) -> int:
    eta = cfg.eta_max
    breakdown = capacity_breakdown(cfg.mode, eta)
    bound = chi2_bound(crange(cfg.mode), eta)
    c_range = crange(cfg.mode)
    pair_labels = ENSEMBLE_PAIR_LABELS[cfg.mode]
    p0, p1, p2 = breakdown.block_probs
    states = [
        {"block": "zero_photon", "label": "00", "probability": p0},
        {"block": "one_photon", "label": "V0", "probability": p1 / 2.0},
        {"block": "one_photon", "label": "0V", "probability": p1 / 2.0},
        {"block": "two_photon", "label": pair_labels[0],
         "probability": p2 * bound.output_probs[0], "werner_parameter": c_range.c_min},
        {"block": "two_photon", "label": pair_labels[1],
         "probability": p2 * bound.output_probs[1], "werner_parameter": c_range.c_max},
    ]
    payload = {
        "block_probabilities": {"one_photon": p1, "two_photon": p2, "zero_photon": p0},
        "chi_blocks": {"chi0": breakdown.chi0, "chi1": breakdown.chi1,
                       "chi2": breakdown.chi2},
        "chi_total": breakdown.total,
        "eta": eta,
        "gamma_opt": breakdown.gamma_opt,
        "mode": cfg.mode,
        "mu": breakdown.mu,
        "states": states,
        "within_block_probabilities": list(bound.output_probs),
    }
    _write(_dump_json(payload), cfg.output_path)
    return 0


def cmd_simulate(cfg: RunConfig) -> int:
    q = cfg.eta_max
    result = simulate_shots(cfg.mode, NoiseModel.mixture(q), cfg.shots,
                            cfg.seed, cfg.shards)
    payload = {
        "abs_error": result.abs_error,
        "analytic_mi": result.analytic_mi,
        "counts": result.counts.tolist(),
        "empirical_mi": result.mi,
        "mode": result.mode,
        "q": result.q,
        "seed": result.seed,
        "shards": result.shards,
        "shots": result.shots,
        "std_error": result.std_error,
        "within_3_sigma": result.within_three_sigma,
    }
    _write(_dump_json(payload), cfg.output_path)
    return 0


def cmd_protocol(cfg: RunConfig) -> int:
    eta = cfg.eta_max
    rate = extended_rate(TrainProtocolConfig(cfg.p_photon, eta))
    payload = {
        "eta": eta,
        "note": ("rates for eta < 1 use the prior-optimized pair information; "
                 "the closed 2.5-bit figure applies at eta = 1, p = 1/2"),
        "p_photon": cfg.p_photon,
        "rate_bits_per_slot_pair": rate,
    }
    if cfg.optimize:
        p_star, rate_star = optimize_photon_probability(eta)
        payload["optimal_p"] = p_star
        payload["optimal_rate"] = rate_star
    _write(_dump_json(payload), cfg.output_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrchan",
        description="Capacity of a two-slot optical channel with correlated "
                    "polarization noise.")
    parser.add_argument("--version", action="version", version=f"corrchan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    curve = sub.add_parser("curve", help="capacity versus correlation parameter")
    curve.add_argument("--eta-min", type=float, default=0.0)
    curve.add_argument("--eta-max", type=float, default=1.0)
    curve.add_argument("--steps", type=int, default=11)
    curve.add_argument("--mode", choices=("entangled", "separable", "baseline", "all"),
                       default="all")
    curve.add_argument("--format", choices=("csv", "json"), default="csv")
    curve.add_argument("--out", default=None, help="output path (default stdout)")
    curve.add_argument("--plot", default=None, metavar="PATH",
                       help="also render the curve figure to PATH")

    ver = sub.add_parser("verify", help="run the self-verification suites")
    ver.add_argument("--suite", choices=SUITE_ORDER + ("all",), default="all")
    ver.add_argument("--samples", type=int, default=100000)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--shards", type=int, default=1)
    ver.add_argument("--out", default=None)

    ens = sub.add_parser("ensemble", help="describe the optimal input ensemble")
    ens.add_argument("--mode", choices=MODES, default="entangled")
    ens.add_argument("--eta", type=float, default=1.0)
    ens.add_argument("--out", default=None)

    sim = sub.add_parser("simulate", help="shot-level simulation of the pair protocol")
    sim.add_argument("--mode", choices=MODES, default="entangled")
    sim.add_argument("--eta", type=float, default=1.0,
                     help="mixture parameter q of the sampled noise (equals eta)")
    sim.add_argument("--shots", type=int, default=1000000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--shards", type=int, default=1)
    sim.add_argument("--out", default=None)

    prot = sub.add_parser("protocol", help="rate of the multi-slot train protocol")
    prot.add_argument("--p", type=float, default=0.5, dest="p_photon",
                      help="per-slot photon probability")
    prot.add_argument("--eta", type=float, default=1.0)
    prot.add_argument("--optimize", action="store_true",
                      help="also report the rate-maximizing p")
    prot.add_argument("--out", default=None)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    eta_point = getattr(args, "eta", None)
    return RunConfig(
        command=args.command,
        eta_min=getattr(args, "eta_min", eta_point if eta_point is not None else 0.0),
        eta_max=getattr(args, "eta_max", eta_point if eta_point is not None else 1.0),
        steps=getattr(args, "steps", 1),
        mode=getattr(args, "mode", "all"),
        samples=getattr(args, "samples", 100000),
        shots=getattr(args, "shots", 1000000),
        seed=getattr(args, "seed", 0),
        shards=getattr(args, "shards", 1),
        output_path=getattr(args, "out", None),
        out_format=getattr(args, "format", "csv"),
        plot_path=getattr(args, "plot", None),
        p_photon=getattr(args, "p_photon", 0.5),
        optimize=getattr(args, "optimize", False),
        suite=getattr(args, "suite", None),
    )


_COMMANDS = {
    "curve": cmd_curve,
    "verify": cmd_verify,
    "ensemble": cmd_ensemble,
    "simulate": cmd_simulate,
    "protocol": cmd_protocol,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[args.command](cfg)
    except (ContractError, InvalidStateError, ConvergenceError, OSError) as exc:
        print(f"corrchan: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

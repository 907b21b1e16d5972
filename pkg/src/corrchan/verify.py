"""Self-verification suites cross-checking closed forms against oracles.

Each suite reports its worst measured deviation against a fixed tolerance.
Suites are deterministic for a given (seed, shards): every random stream
derives from the seed through a fixed spawn key, independent of which
suites run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional

import numpy as np

from . import capacity, channel, group, measurement, protocol, qstate
from .exceptions import ContractError

SUITE_ORDER = (
    "group-representation",
    "lemma2-oracle",
    "monotonicity",
    "orthogonality",
    "protocol-rate",
    "saturation",
    "twirl-mc",
    "werner-entropy",
)

_ETA_GRID = np.round(np.linspace(0.0, 1.0, 11), 10)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    samples: int
    seed: int
    details: Dict = field(default_factory=dict)

    def as_dict(self) -> Dict:
        def plain(value):
            if isinstance(value, dict):
                return {k: plain(v) for k, v in value.items()}
            if isinstance(value, (bool, np.bool_)):
                return bool(value)
            if isinstance(value, (int, np.integer)):
                return int(value)
            if isinstance(value, (float, np.floating)):
                return float(value)
            return value

        return {
            "details": plain(self.details),
            "max_deviation": float(self.max_deviation),
            "name": self.name,
            "passed": bool(self.passed),
            "samples": int(self.samples),
            "seed": int(self.seed),
            "tolerance": float(self.tolerance),
        }


def _suite_rng(seed: int, name: str) -> np.random.Generator:
    key = SUITE_ORDER.index(name)
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(key,)))


def _suite_orthogonality(samples: int, seed: int, shards: int) -> SuiteResult:
    rng = _suite_rng(seed, "orthogonality")
    cases = (
        ((0.5, 0, 0, 0.5, 0, 0), 0.5),
        ((1.0, 1, 1, 0.5, 0, 0), 0.0),
        ((1.0, 0, 0, 1.0, 1, 1), 0.0),
    )
    deviations = {}
    for args, expected in cases:
        est = group.mc_orthogonality(*args, samples=samples, rng=rng)
        deviations[str(args)] = abs(est.value - expected)
    worst = max(deviations.values())
    return SuiteResult("orthogonality", worst < 5e-3, float(worst), 5e-3,
                       samples, seed, {"cases": deviations})


def _suite_twirl_mc(samples: int, seed: int, shards: int) -> SuiteResult:
    rng = _suite_rng(seed, "twirl-mc")
    inputs = [qstate.random_density(rng) for _ in range(20)]
    worst = 0.0
    per_q = {}
    for q in (0.0, 0.5, 1.0):
        transfer = channel.mc_transfer_matrix(q, samples, (seed, int(q * 2)), shards)
        analytic = channel.ChannelMap(channel.NoiseModel.mixture(q))
        dev = 0.0
        for rho in inputs:
            mc_out = channel.apply_transfer(transfer, rho.matrix)
            mc_out /= np.real(np.trace(mc_out))
            dev = max(dev, float(np.abs(mc_out - analytic(rho).matrix).max()))
        per_q[f"q={q:g}"] = dev
        worst = max(worst, dev)
    return SuiteResult("twirl-mc", worst < 5e-3, worst, 5e-3, samples, seed,
                       {"per_q": per_q})


def _suite_lemma2(samples: int, seed: int, shards: int) -> SuiteResult:
    worst = 0.0
    for mode in capacity.MODES:
        for eta in _ETA_GRID:
            closed = capacity.chi2_bound(capacity.crange(mode), float(eta)).chi2
            oracle = capacity.brute_force_chi2(capacity.crange(mode), float(eta), 41)
            worst = max(worst, abs(closed - oracle))
    return SuiteResult("lemma2-oracle", worst < 1e-6, worst, 1e-6, 0, seed,
                       {"grid_points": 41, "eta_grid": len(_ETA_GRID)})


def _suite_saturation(samples: int, seed: int, shards: int) -> SuiteResult:
    worst_mi = 0.0
    worst_prior = 0.0
    for mode in capacity.MODES:
        for eta in _ETA_GRID:
            report = measurement.saturation_check(mode, float(eta))
            bound = capacity.chi2_bound(capacity.crange(mode), float(eta))
            worst_mi = max(worst_mi, abs(report.mi_max - report.chi2))
            worst_prior = max(worst_prior,
                              abs(report.optimal_prior[0] - bound.output_probs[0]))
    passed = worst_mi < 1e-9 and worst_prior < 1e-6
    return SuiteResult("saturation", passed, worst_mi, 1e-9, 0, seed,
                       {"max_prior_deviation": worst_prior, "prior_tolerance": 1e-6})


def _suite_monotonicity(samples: int, seed: int, shards: int) -> SuiteResult:
    grid = np.linspace(0.0, 1.0, 101)
    curves = {mode: np.array([t for _, t in capacity.capacity_curve(mode, grid)])
              for mode in capacity.CURVE_MODES}
    slack = min(
        float(np.diff(curves["entangled"]).min()),
        float(np.diff(curves["separable"]).min()),
        float((curves["entangled"] - curves["separable"]).min()),
        float((curves["separable"] - curves["baseline"]).min()),
    )
    violation = max(0.0, -slack)
    return SuiteResult("monotonicity", violation <= 1e-10, violation, 1e-10, 0, seed,
                       {"grid_points": 101})


def _suite_werner_entropy(samples: int, seed: int, shards: int) -> SuiteResult:
    grid = np.linspace(-1.0, 1.0 / 3.0, 100)
    worst = 0.0
    for c in grid:
        worst = max(worst, abs(capacity.f_of_c(float(c))
                               - qstate.von_neumann_entropy(qstate.werner_state(float(c)))))
    return SuiteResult("werner-entropy", worst < 1e-12, worst, 1e-12, 0, seed,
                       {"grid_points": 100})


def _suite_group_representation(samples: int, seed: int, shards: int) -> SuiteResult:
    rng = _suite_rng(seed, "group-representation")
    n = min(samples, 10000)
    su2 = group.haar_su2(rng, n)
    worst_unitary = float(np.abs(su2 @ su2.conj().transpose(0, 2, 1) - np.eye(2)).max())
    dets = su2[:, 0, 0] * su2[:, 1, 1] - su2[:, 0, 1] * su2[:, 1, 0]
    worst_det = float(np.abs(dets - 1.0).max())
    pairs = group.haar_su2(rng, 300).reshape(150, 2, 2, 2)
    d1 = group.spin1_matrix
    hom = float(np.abs(d1(pairs[:, 0] @ pairs[:, 1])
                       - d1(pairs[:, 0]) @ d1(pairs[:, 1])).max())
    worst = max(worst_unitary, worst_det, hom)
    return SuiteResult("group-representation", worst < 1e-12, worst, 1e-12, n, seed,
                       {"unitarity": worst_unitary, "determinant": worst_det,
                        "homomorphism": hom})


def _suite_protocol(samples: int, seed: int, shards: int) -> SuiteResult:
    rate = protocol.extended_rate(protocol.TrainProtocolConfig(0.5, 1.0))
    dev = abs(rate - 2.5)
    exceeds = rate > float(np.log2(5.0))
    return SuiteResult("protocol-rate", dev < 1e-12 and exceeds, dev, 1e-12, 0, seed,
                       {"rate": rate, "exceeds_two_slot_optimum": exceeds})


_SUITES = {
    "group-representation": _suite_group_representation,
    "lemma2-oracle": _suite_lemma2,
    "monotonicity": _suite_monotonicity,
    "orthogonality": _suite_orthogonality,
    "protocol-rate": _suite_protocol,
    "saturation": _suite_saturation,
    "twirl-mc": _suite_twirl_mc,
    "werner-entropy": _suite_werner_entropy,
}


def run_suites(names: Optional[Iterable[str]] = None, samples: int = 100000,
               seed: int = 0, shards: int = 1) -> Dict:
    """Run the requested suites (all by default) and assemble a report."""
    selected = tuple(names) if names else SUITE_ORDER
    for name in selected:
        if name not in _SUITES:
            raise ContractError(f"unknown suite {name!r}; known: {', '.join(SUITE_ORDER)}")
    results = [_SUITES[name](samples, seed, shards)
               for name in SUITE_ORDER if name in selected]
    return {
        "all_passed": all(r.passed for r in results),
        "samples": samples,
        "seed": seed,
        "shards": shards,
        "suites": [r.as_dict() for r in results],
    }

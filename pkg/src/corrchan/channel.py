"""The correlated-polarization-noise channel on two temporal slots.

The channel factors into a perfectly correlated twirl (same random U(2)
transformation on both slots) followed by residual depolarization of the
second slot. The analytic backend applies closed-form block rules; the
Monte Carlo backend averages sampled noise realizations of the mixture
model, where the relative slot-B transformation is the identity with
probability q and fully Haar-random otherwise. The mixture model makes
both shrink factors equal to q exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .exceptions import ContractError, InvalidStateError
from .group import haar_su2, pair_unitary_batch
from .qstate import BLOCK_SLICES, DensityOperator

SeedLike = Union[int, Sequence[int]]

_MC_PSD_TOL = 1e-2
_CHUNK = 16384


@dataclass(frozen=True)
class NoiseModel:
    """Correlation parameters of the residual slot-B depolarization.

    eta shrinks the two-photon Werner parameter, eta_prime shrinks the
    one-photon inter-slot coherence. When mixture_q is set the model is
    sampleable and ties eta = eta_prime = q.
    """

    eta: float
    eta_prime: float
    mixture_q: Optional[float] = None

    def __post_init__(self) -> None:
        for name in ("eta", "eta_prime"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ContractError(f"{name}={v} outside [0, 1]")
        if self.mixture_q is not None:
            q = self.mixture_q
            if not 0.0 <= q <= 1.0:
                raise ContractError(f"mixture_q={q} outside [0, 1]")
            if abs(self.eta - q) > 1e-12 or abs(self.eta_prime - q) > 1e-12:
                raise ContractError("mixture model requires eta = eta_prime = mixture_q")

    @classmethod
    def mixture(cls, q: float) -> "NoiseModel":
        return cls(eta=q, eta_prime=q, mixture_q=q)


@dataclass(frozen=True)
class OnePhotonBlockSummary:
    """The pair (a, b): slot-A photon weight and inter-slot coherence."""

    a: float
    b: complex

    def __post_init__(self) -> None:
        if not -1e-12 <= self.a <= 1.0 + 1e-12:
            raise InvalidStateError(f"a={self.a} outside [0, 1]")
        if abs(self.b) ** 2 > self.a * (1.0 - self.a) + 1e-12:
            raise InvalidStateError("(a, b) violate positivity: |b|^2 > a(1-a)")


@dataclass(frozen=True)
class ChannelMap:
    """Channel configuration: analytic rules or seeded Monte Carlo.

    Instances are callable on a DensityOperator. The Monte Carlo backend
    needs a sampleable noise model (mixture_q set), a sample count and a
    seed; results are deterministic for fixed (seed, shards).
    """

    noise: NoiseModel
    backend: str = "analytic"
    samples: Optional[int] = None
    seed: Optional[int] = None
    shards: int = 1

    def __post_init__(self) -> None:
        if self.backend not in ("analytic", "monte_carlo"):
            raise ContractError(f"unknown backend {self.backend!r}")
        if self.backend == "monte_carlo":
            if self.noise.mixture_q is None:
                raise ContractError("Monte Carlo backend requires a mixture noise model")
            if not self.samples or self.samples < 1:
                raise ContractError("Monte Carlo backend requires a positive sample count")
            if self.seed is None:
                raise ContractError("Monte Carlo backend requires a seed")
        if self.shards < 1:
            raise ContractError("shard count must be >= 1")

    def __call__(self, rho: DensityOperator) -> DensityOperator:
        return lambda_full(rho, self)


def one_photon_summary(rho: DensityOperator) -> OnePhotonBlockSummary:
    """Extract (a, b) from a one-photon block state."""
    if rho.basis_tag != "one_photon":
        raise ContractError("summary is defined on the one-photon block")
    m = rho.matrix
    a = float(np.real(m[0, 0] + m[1, 1]))
    b = complex(m[0, 2] + m[1, 3])
    return OnePhotonBlockSummary(a, b)


def lambda_perf_analytic(rho: DensityOperator) -> DensityOperator:
    """Perfectly correlated twirl: average over the same U(2) on both slots.

    Output is exactly block-diagonal in photon number. The vacuum entry is
    untouched; the one-photon block collapses onto the (a, b) form with
    both polarizations equalized; the two-photon block becomes the Werner
    state matching the input's singlet overlap.
    """
    if rho.basis_tag != "two_slot":
        raise ContractError("the channel acts on the 9-dim two-slot space")
    m = rho.matrix
    out = np.zeros((9, 9), dtype=complex)
    out[0, 0] = np.real(m[0, 0])
    # one-photon block: Schur averaging leaves only sector traces
    a = np.real(m[1, 1] + m[2, 2])
    b = m[1, 3] + m[2, 4]
    w1 = a + np.real(m[3, 3] + m[4, 4])
    out[1, 1] = out[2, 2] = a / 2.0
    out[3, 3] = out[4, 4] = (w1 - a) / 2.0
    out[1, 3] = out[2, 4] = b / 2.0
    out[3, 1] = out[4, 2] = np.conj(b) / 2.0
    # two-photon block: singlet population survives, triplet is equalized
    s = np.real(m[5, 5])
    w2 = np.real(np.trace(m[5:9, 5:9]))
    out[5, 5] = s
    out[6, 6] = out[7, 7] = out[8, 8] = max(w2 - s, 0.0) / 3.0
    return DensityOperator(out, "two_slot")


def _require_block_diagonal(m: np.ndarray) -> None:
    mask = np.zeros((9, 9), dtype=bool)
    for sl in BLOCK_SLICES:
        mask[sl, sl] = True
    if np.abs(m[~mask]).max() > 1e-13:
        raise ContractError("input must be block-diagonal in photon number")


def lambda_dep_analytic(rho: DensityOperator, noise: NoiseModel) -> DensityOperator:
    """Residual slot-B depolarization on a twirled (block-diagonal) state.

    One-photon block: inter-slot coherences scale by eta_prime. Two-photon
    block: convex shrink toward the maximally mixed state, which multiplies
    the Werner parameter by eta. Vacuum untouched.
    """
    if rho.basis_tag != "two_slot":
        raise ContractError("the channel acts on the 9-dim two-slot space")
    m = rho.matrix
    _require_block_diagonal(m)
    out = m.copy()
    out[1:3, 3:5] *= noise.eta_prime
    out[3:5, 1:3] *= noise.eta_prime
    block2 = m[5:9, 5:9]
    w2 = np.real(np.trace(block2))
    out[5:9, 5:9] = noise.eta * block2 + (1.0 - noise.eta) * w2 * np.eye(4) / 4.0
    return DensityOperator(out, "two_slot")


def lambda_full(rho: DensityOperator, channel: ChannelMap) -> DensityOperator:
    """Full channel action with the configured backend."""
    if channel.backend == "analytic":
        return lambda_dep_analytic(lambda_perf_analytic(rho), channel.noise)
    transfer = mc_transfer_matrix(channel.noise.mixture_q, channel.samples,
                                  channel.seed, channel.shards)
    out = apply_transfer(transfer, rho.matrix)
    out = (out + out.conj().T) / 2.0
    out /= np.real(np.trace(out))
    return DensityOperator(out, "two_slot", psd_tol=_MC_PSD_TOL)


def sample_pair_unitaries(rng: np.random.Generator, n: int, q: float) -> np.ndarray:
    """n sampled noise realizations (9x9 unitaries) of the mixture model.

    Slot A gets a Haar U(2) element; slot B gets the same element composed
    with a relative transformation that is the identity with probability q
    and Haar-random otherwise.
    """
    su2_a = haar_su2(rng, n)
    alpha_a = rng.uniform(0.0, 2.0 * np.pi, n)
    su2_p = haar_su2(rng, n)
    alpha_p = rng.uniform(0.0, 2.0 * np.pi, n)
    frozen = rng.random(n) < q
    su2_p[frozen] = np.eye(2)
    alpha_p[frozen] = 0.0
    su2_b = su2_p @ su2_a
    alpha_b = alpha_p + alpha_a
    return pair_unitary_batch(su2_a, alpha_a, su2_b, alpha_b)


def mc_transfer_matrix(q: float, samples: int, seed: SeedLike, shards: int = 1) -> np.ndarray:
    """Empirical 81x81 superoperator of the mixture channel.

    Averages kron(W, conj(W)) over sampled realizations W, accumulated
    shard by shard from independent spawned streams so the result is
    deterministic for fixed (seed, shards). Row-major vec convention:
    out[i, k] = sum_jl T[(i, k), (j, l)] rho[j, l].
    """
    if not 0.0 <= q <= 1.0:
        raise ContractError(f"mixture parameter {q} outside [0, 1]")
    if samples < 1:
        raise ContractError("sample count must be positive")
    if shards < 1 or shards > samples:
        raise ContractError("shard count must be in [1, samples]")
    children = np.random.SeedSequence(seed).spawn(shards)
    base, extra = divmod(samples, shards)
    gram = np.zeros((81, 81), dtype=complex)
    for idx, child in enumerate(children):
        rng = np.random.default_rng(child)
        remaining = base + (1 if idx < extra else 0)
        while remaining > 0:
            n = min(_CHUNK, remaining)
            flat = sample_pair_unitaries(rng, n, q).reshape(n, 81)
            gram += flat.T @ flat.conj()
            remaining -= n
    transfer = gram.reshape(9, 9, 9, 9).transpose(0, 2, 1, 3).reshape(81, 81)
    return transfer / samples


def apply_transfer(transfer: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Apply an 81x81 superoperator to a 9x9 matrix."""
    return (transfer @ matrix.reshape(81)).reshape(9, 9)

"""Rate of the long-train protocol over many temporal slots.

The sender fills each slot with a photon with probability p; successive
photons are paired first-come and jointly encode one singlet/triplet bit
per pair. Per pair of slots the rate is 2*H(p) presence bits plus p times
the pair information. The pair information at noise level eta uses the
prior-optimized singlet/triplet channel of the measurement module; the
eta < 1 generalization is an extension of the basic protocol, which is
stated for negligible inter-pair fluctuations (eta = 1, one extra bit per
pair, 2.5 bits per slot pair at p = 1/2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .capacity import crange
from .exceptions import ContractError
from .measurement import channel_stats, golden_section_max, optimal_prior
from .qstate import _xlog2x


@dataclass(frozen=True)
class TrainProtocolConfig:
    """Photon occupation probability and noise correlation parameter."""

    p_photon: float
    eta: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_photon <= 1.0:
            raise ContractError(f"p_photon={self.p_photon} outside [0, 1]")
        if not 0.0 <= self.eta <= 1.0:
            raise ContractError(f"eta={self.eta} outside [0, 1]")


def _binary_entropy(p: float) -> float:
    return float(-_xlog2x(p) - _xlog2x(1.0 - p))


def pair_information(eta: float) -> float:
    """Prior-optimized singlet/triplet information of one entangled pair."""
    c_range = crange("entangled")
    stats = channel_stats(c_range.c_min, c_range.c_max, eta)
    return optimal_prior(stats)[1]


def extended_rate(config: TrainProtocolConfig) -> float:
    """Bits per pair of temporal slots: 2*H(p) + p * I_pair(eta)."""
    return 2.0 * _binary_entropy(config.p_photon) + config.p_photon * pair_information(config.eta)


def optimize_photon_probability(eta: float) -> Tuple[float, float]:
    """Occupation probability maximizing the train rate at a given eta."""
    if not 0.0 <= eta <= 1.0:
        raise ContractError(f"eta={eta} outside [0, 1]")
    info = pair_information(eta)
    def rate(p: float) -> float:
        return 2.0 * _binary_entropy(p) + p * info
    p_star, rate_star = golden_section_max(rate, 0.0, 1.0)
    return p_star, rate_star

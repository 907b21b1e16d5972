"""Holevo quantities per photon-number block and their optimal combination.

The two-photon block reduces to a one-parameter family: every output is a
Werner state, so the block capacity is the gap between the concave entropy
function f and its chord over the reachable parameter interval. The block
capacities combine into the total via log2 of summed exponentials, with
the block weights falling out of the same optimization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Tuple

import numpy as np

from .exceptions import ContractError, ConvergenceError
from .qstate import (DensityOperator, StateEnsemble, _xlog2x, embed_block, ket,
                     polarization_product_ket, two_photon_ket)

MODES = ("entangled", "separable")
CURVE_MODES = ("entangled", "separable", "baseline")

C_MIN_ENTANGLED = -1.0
C_MIN_SEPARABLE = -1.0 / 3.0
C_MAX = 1.0 / 3.0

# two-photon input pairs realizing (c_min, c_max) per mode, as block kets
ENSEMBLE_PAIR_LABELS = {
    "entangled": ("psi-", "VV"),
    "separable": ("VH", "VV"),
}


@dataclass(frozen=True)
class CRange:
    """Reachable Werner-parameter interval for an input class."""

    mode: str
    c_min: float
    c_max: float

    def __post_init__(self) -> None:
        expected = {"entangled": (C_MIN_ENTANGLED, C_MAX),
                    "separable": (C_MIN_SEPARABLE, C_MAX)}
        if self.mode not in expected:
            raise ContractError(f"unknown mode {self.mode!r}")
        if (self.c_min, self.c_max) != expected[self.mode]:
            raise ContractError(f"range {self.c_min, self.c_max} does not match mode {self.mode!r}")


def crange(mode: str) -> CRange:
    if mode == "entangled":
        return CRange("entangled", C_MIN_ENTANGLED, C_MAX)
    if mode == "separable":
        return CRange("separable", C_MIN_SEPARABLE, C_MAX)
    raise ContractError(f"unknown mode {mode!r}")


@dataclass(frozen=True, eq=False)
class WernerEnsemble:
    """Weighted Werner parameters (q_j, c_j) describing a two-photon alphabet."""

    items: tuple

    def __post_init__(self) -> None:
        items = tuple((float(q), float(c)) for q, c in self.items)
        probs = np.array([q for q, _ in items])
        cs = np.array([c for _, c in items])
        if probs.min() < 0.0 or abs(probs.sum() - 1.0) > 1e-12:
            raise ContractError("weights must be a probability distribution")
        if cs.min() < -1.0 - 1e-12 or cs.max() > C_MAX + 1e-12:
            raise ContractError("Werner parameters must lie in [-1, 1/3]")
        object.__setattr__(self, "items", items)


class Chi2Bound(NamedTuple):
    chi2: float
    gamma_opt: float
    mu: float
    output_probs: Tuple[float, float]


@dataclass(frozen=True)
class CapacityBreakdown:
    """Per-block Holevo quantities and the optimal block mixing."""

    chi0: float
    chi1: float
    chi2: float
    block_probs: Tuple[float, float, float]
    total: float
    gamma_opt: float
    mu: float


def f_of_c(c):
    """Entropy of the Werner state with parameter c, in bits.

    f(c) = 2 - (3/4)(1+c) log2(1+c) - (1/4)(1-3c) log2(1-3c), with the
    0*log 0 = 0 convention at the interval ends.
    """
    arr = np.asarray(c, dtype=float)
    if np.any(arr < -1.0 - 1e-12) or np.any(arr > C_MAX + 1e-12):
        raise ContractError("Werner parameter outside [-1, 1/3]")
    val = 2.0 - 0.75 * _xlog2x(1.0 + arr) - 0.25 * _xlog2x(1.0 - 3.0 * arr)
    return float(val) if np.isscalar(c) or arr.ndim == 0 else val


def chi0() -> float:
    """Zero-photon block capacity: a single available state carries nothing."""
    return 0.0


def chi1() -> float:
    """One-photon block capacity.

    The block output entropy is sandwiched between 1 and 2 bits, so the
    Holevo quantity is at most 1 bit; confining the photon to one slot or
    the other attains it regardless of the coherence shrink factor.
    """
    return 1.0


def chi2_bound(c_range: CRange, eta: float) -> Chi2Bound:
    """Two-photon block capacity: supremum of f minus its chord.

    With the interval [alpha, beta] = eta * [c_min, c_max] and the chord
    slope mu, the maximizer is gamma = (1 - 2^(4mu/3)) / (3 + 2^(4mu/3)),
    clamped into the interval. The returned probabilities are the weights
    on the (c_min, c_max) endpoint states whose average lands on gamma.
    A degenerate interval (eta = 0) yields zero capacity.
    """
    if not 0.0 <= eta <= 1.0:
        raise ContractError(f"eta={eta} outside [0, 1]")
    alpha = eta * c_range.c_min
    beta = eta * c_range.c_max
    if beta - alpha < 1e-15:
        return Chi2Bound(0.0, alpha, 0.0, (0.5, 0.5))
    f_a = f_of_c(alpha)
    f_b = f_of_c(beta)
    mu = (f_b - f_a) / (beta - alpha)
    t = 2.0 ** (4.0 * mu / 3.0)
    gamma = float(np.clip((1.0 - t) / (3.0 + t), alpha, beta))
    chord = f_a + mu * (gamma - alpha)
    chi2 = max(f_of_c(gamma) - chord, 0.0)
    probs = ((beta - gamma) / (beta - alpha), (gamma - alpha) / (beta - alpha))
    return Chi2Bound(chi2, gamma, mu, probs)


def chi2_closed_form(c_range: CRange, eta: float) -> float:
    """Algebraically reduced form of the chord-gap supremum.

    Equals log2(3 + 2^(4mu/3)) - f(alpha) + mu*(alpha - 1/3). A variant of
    this expression carrying a spurious trailing "-2" is off by exactly two
    bits (it evaluates to -1 where the true capacity is 1) and is rejected
    by the nonnegativity of the Holevo quantity; the test suite pins this.
    """
    if not 0.0 <= eta <= 1.0:
        raise ContractError(f"eta={eta} outside [0, 1]")
    alpha = eta * c_range.c_min
    beta = eta * c_range.c_max
    if beta - alpha < 1e-15:
        return 0.0
    mu = (f_of_c(beta) - f_of_c(alpha)) / (beta - alpha)
    return float(np.log2(3.0 + 2.0 ** (4.0 * mu / 3.0)) - f_of_c(alpha)
                 + mu * (alpha - 1.0 / 3.0))


def combine_subspace_capacities(chis: Iterable[float]):
    """Optimal mixing of block capacities: log2-sum-exp2 and its weights."""
    arr = np.asarray(list(chis), dtype=float)
    if arr.size == 0:
        raise ContractError("need at least one block capacity")
    if arr.min() < -1e-12:
        raise ContractError("block capacities must be nonnegative")
    weights = np.exp2(np.maximum(arr, 0.0))
    total = float(np.log2(weights.sum()))
    probs = tuple(float(w) for w in weights / weights.sum())
    return total, probs


def holevo_of_werner_ensemble(ensemble: WernerEnsemble, eta: float) -> float:
    """f(sum q_j eta c_j) - sum q_j f(eta c_j)."""
    if not 0.0 <= eta <= 1.0:
        raise ContractError(f"eta={eta} outside [0, 1]")
    probs = np.array([q for q, _ in ensemble.items])
    cs = np.array([c for _, c in ensemble.items])
    return float(f_of_c(float(probs @ (eta * cs))) - probs @ f_of_c(eta * cs))


def brute_force_chi2(c_range: CRange, eta: float, grid_points: int = 41,
                     tol: float = 1e-10, max_iter: int = 100000) -> float:
    """Independent oracle for the two-photon block capacity.

    All channel outputs commute (they share the singlet/triplet
    eigenbasis), so the Holevo maximum equals the capacity of the
    classical binary channel c -> (singlet, triplet) outcome with
    P(singlet | c) = (1 - 3*eta*c)/4, maximized by Blahut-Arimoto over
    priors on a c-grid. Iteration stops when the capacity estimate moves
    by less than `tol` per step.
    """
    if grid_points < 11:
        raise ContractError("grid must have at least 11 points")
    if not 0.0 <= eta <= 1.0:
        raise ContractError(f"eta={eta} outside [0, 1]")
    c = np.linspace(c_range.c_min, c_range.c_max, grid_points)
    p_singlet = np.clip((1.0 - 3.0 * eta * c) / 4.0, 0.0, 1.0)
    rows = np.stack([p_singlet, 1.0 - p_singlet], axis=1)
    prior = np.full(grid_points, 1.0 / grid_points)
    previous = None
    for _ in range(max_iter):
        marginal = prior @ rows
        ok = (rows > 0.0) & (marginal[None, :] > 0.0)
        ratio = np.where(ok, rows / np.where(marginal[None, :] > 0.0, marginal[None, :], 1.0), 1.0)
        divergence = (rows * np.log2(ratio)).sum(axis=1)
        weights = prior * np.exp2(divergence)
        norm = weights.sum()
        capacity = float(np.log2(norm))
        prior = weights / norm
        if previous is not None and abs(capacity - previous) < tol:
            return capacity
        previous = capacity
    raise ConvergenceError(f"Blahut-Arimoto did not converge in {max_iter} iterations")


def capacity_breakdown(mode: str, eta: float) -> CapacityBreakdown:
    """Block capacities, optimal block weights and total for a mode."""
    bound = chi2_bound(crange(mode), eta)
    total, probs = combine_subspace_capacities((chi0(), chi1(), bound.chi2))
    return CapacityBreakdown(chi0(), chi1(), bound.chi2, probs, total,
                             bound.gamma_opt, bound.mu)


def optimal_input_ensemble(mode: str, eta: float):
    """Concrete optimal alphabet: vacuum, one slot-confined photon per slot,
    and the mode's two-photon endpoint pair with the chord weights.

    Returns the ensemble of embedded 9-dim states and the breakdown.
    """
    breakdown = capacity_breakdown(mode, eta)
    bound = chi2_bound(crange(mode), eta)
    p0, p1, p2 = breakdown.block_probs
    pair = _two_photon_pair(mode)
    items = [
        (p0, DensityOperator.pure(ket("00"))),
        (p1 / 2.0, DensityOperator.pure(ket("V0"))),
        (p1 / 2.0, DensityOperator.pure(ket("0V"))),
        (p2 * bound.output_probs[0], embed_block(pair[0], 2)),
        (p2 * bound.output_probs[1], embed_block(pair[1], 2)),
    ]
    return StateEnsemble(tuple(items)), breakdown


def _two_photon_pair(mode: str):
    labels = ENSEMBLE_PAIR_LABELS.get(mode)
    if labels is None:
        raise ContractError(f"unknown mode {mode!r}")
    states = []
    for label in labels:
        if label in ("psi-", "psi+", "HH", "VV"):
            vec = two_photon_ket(label)
        else:
            vec = polarization_product_ket(label[0], label[1])
        states.append(DensityOperator.pure(vec, "two_photon"))
    return tuple(states)


def capacity_curve(mode: str, eta_grid: Sequence[float]):
    """Total capacity per grid point; "baseline" ignores polarization."""
    if mode not in CURVE_MODES:
        raise ContractError(f"unknown curve mode {mode!r}")
    rows = []
    for eta in eta_grid:
        if mode == "baseline":
            chi2 = 0.0
        else:
            chi2 = chi2_bound(crange(mode), float(eta)).chi2
        total, _ = combine_subspace_capacities((chi0(), chi1(), chi2))
        rows.append((float(eta), total))
    return rows

"""Density-operator primitives on the two-temporal-slot Hilbert space.

Two consecutive temporal slots, each carrying either vacuum or a single
photon with two polarizations (H/V), span a 9-dimensional space. One fixed
basis ordering is used bit-exactly everywhere in this package:

    0 : |0_A 0_B>                      zero photons
    1 : |H_A 0_B>    2 : |V_A 0_B>     one photon, in slot A
    3 : |0_A H_B>    4 : |0_A V_B>     one photon, in slot B
    5 : |psi->       6 : |H_A H_B>     two photons: singlet first,
    7 : |psi+>       8 : |V_A V_B>     then the three triplet states

where |psi+-> = (|H_A V_B> +- |V_A H_B>)/sqrt(2). Photon-number blocks are
the contiguous index ranges [0:1], [1:5] and [5:9]; within the two-photon
block the local order is (singlet, HH, psi+, VV).
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .exceptions import ContractError, InvalidStateError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

BASIS_LABELS = ("00", "H0", "V0", "0H", "0V", "psi-", "HH", "psi+", "VV")

# photon-number blocks of the 9-dim space
BLOCK_SLICES = (slice(0, 1), slice(1, 5), slice(5, 9))
BLOCK_DIMS = (1, 4, 4)
BLOCK_TAGS = ("zero_photon", "one_photon", "two_photon")

_TAG_DIMS = {"two_slot": 9, "zero_photon": 1, "one_photon": 4, "two_photon": 4}

_TWO_PHOTON_LABELS = ("psi-", "HH", "psi+", "VV")


def _xlog2x(x: np.ndarray) -> np.ndarray:
    """x*log2(x) extended by 0 at x=0; tiny negative x (rounding) clamped."""
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    return np.where(x > 0.0, x * np.log2(np.where(x > 0.0, x, 1.0)), 0.0)


def ket(label: str) -> np.ndarray:
    """Unit vector of one of the nine fixed basis states."""
    try:
        idx = BASIS_LABELS.index(label)
    except ValueError:
        raise ContractError(f"unknown basis label {label!r}") from None
    v = np.zeros(9, dtype=complex)
    v[idx] = 1.0
    return v


def two_photon_ket(label: str) -> np.ndarray:
    """Unit vector in the 4-dim two-photon block, order (psi-, HH, psi+, VV)."""
    try:
        idx = _TWO_PHOTON_LABELS.index(label)
    except ValueError:
        raise ContractError(f"unknown two-photon label {label!r}") from None
    v = np.zeros(4, dtype=complex)
    v[idx] = 1.0
    return v


def polarization_product_ket(pol_a: str, pol_b: str) -> np.ndarray:
    """Two-photon product state |pol_a, pol_b> in the coupled block basis."""
    if pol_a not in ("H", "V") or pol_b not in ("H", "V"):
        raise ContractError("polarizations must be 'H' or 'V'")
    r = 1.0 / np.sqrt(2.0)
    table = {
        ("H", "H"): [0.0, 1.0, 0.0, 0.0],
        ("H", "V"): [r, 0.0, r, 0.0],
        ("V", "H"): [-r, 0.0, r, 0.0],
        ("V", "V"): [0.0, 0.0, 0.0, 1.0],
    }
    return np.array(table[(pol_a, pol_b)], dtype=complex)


def pair_coupling_matrix() -> np.ndarray:
    """4x4 basis change for two polarization qubits.

    Columns are the coupled vectors (psi-, HH, psi+, VV) expressed in the
    product order (HH, HV, VH, VV); conjugating kron(D_A, D_B) with this
    matrix expresses it in the coupled two-photon basis.
    """
    r = 1.0 / np.sqrt(2.0)
    s = np.zeros((4, 4), dtype=complex)
    s[:, 0] = [0.0, r, -r, 0.0]
    s[:, 1] = [1.0, 0.0, 0.0, 0.0]
    s[:, 2] = [0.0, r, r, 0.0]
    s[:, 3] = [0.0, 0.0, 0.0, 1.0]
    return s


def product_to_coupled() -> np.ndarray:
    """9x9 unitary whose columns are the fixed basis vectors in product order.

    The product order is kron(slot_A, slot_B) with per-slot order
    (vacuum, H, V), i.e. product index 3*i_A + i_B.
    """
    v = np.zeros((9, 9), dtype=complex)
    r = 1.0 / np.sqrt(2.0)
    v[0, 0] = 1.0       # |0_A 0_B>
    v[3, 1] = 1.0       # |H_A 0_B>
    v[6, 2] = 1.0       # |V_A 0_B>
    v[1, 3] = 1.0       # |0_A H_B>
    v[2, 4] = 1.0       # |0_A V_B>
    v[5, 5] = r         # |psi-> = (|HV> - |VH>)/sqrt(2)
    v[7, 5] = -r
    v[4, 6] = 1.0       # |H_A H_B>
    v[5, 7] = r         # |psi+>
    v[7, 7] = r
    v[8, 8] = 1.0       # |V_A V_B>
    return v


def _check_density(matrix: np.ndarray, psd_tol: float = PSD_TOL) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got {m.shape}")
    if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
        raise InvalidStateError("matrix is not Hermitian within 1e-12")
    if abs(m.trace() - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace {m.trace():.3e} differs from 1 beyond 1e-12")
    eigs = np.linalg.eigvalsh(m)
    if eigs.min() < -psd_tol:
        raise InvalidStateError(f"negative eigenvalue {eigs.min():.3e} below -{psd_tol:g}")
    return m


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, PSD, trace-one matrix on the two-slot space or a block.

    `basis_tag` pins the convention: "two_slot" (dim 9), "zero_photon"
    (dim 1), "one_photon" or "two_photon" (dim 4). Validation tolerances:
    Hermiticity and trace within 1e-12, eigenvalues above -psd_tol
    (1e-10 by default; Monte Carlo estimates pass a looser bound).
    """

    matrix: np.ndarray
    basis_tag: str = "two_slot"
    psd_tol: InitVar[float] = PSD_TOL

    def __post_init__(self, psd_tol: float) -> None:
        if self.basis_tag not in _TAG_DIMS:
            raise ContractError(f"unknown basis tag {self.basis_tag!r}")
        m = _check_density(self.matrix, psd_tol=psd_tol)
        if m.shape[0] != _TAG_DIMS[self.basis_tag]:
            raise ContractError(
                f"basis tag {self.basis_tag!r} expects dim {_TAG_DIMS[self.basis_tag]}, "
                f"got {m.shape[0]}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vector: Sequence[complex], basis_tag: str = "two_slot") -> "DensityOperator":
        v = np.asarray(vector, dtype=complex)
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > 1e-9:
            raise InvalidStateError(f"state vector norm {norm:.6f} is not 1")
        v = v / norm
        return cls(np.outer(v, v.conj()), basis_tag)

    def overlap(self, vector: np.ndarray) -> float:
        """Real expectation <v|rho|v>."""
        v = np.asarray(vector, dtype=complex)
        return float(np.real(v.conj() @ self.matrix @ v))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True, eq=False)
class StateEnsemble:
    """Weighted list of density operators on a common space."""

    items: tuple

    def __post_init__(self) -> None:
        items = tuple((float(p), rho) for p, rho in self.items)
        if not items:
            raise ContractError("ensemble must contain at least one state")
        probs = np.array([p for p, _ in items])
        if probs.min() < 0.0:
            raise ContractError("ensemble probabilities must be nonnegative")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ContractError(f"ensemble probabilities sum to {probs.sum():.15f}")
        dims = {rho.dim for _, rho in items}
        if len(dims) != 1:
            raise ContractError(f"ensemble mixes dimensions {sorted(dims)}")
        object.__setattr__(self, "items", items)

    @property
    def dim(self) -> int:
        return self.items[0][1].dim


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """Photon-number block weights and normalized block states.

    Blocks with weight below 1e-14 are stored as None.
    """

    weights: tuple
    blocks: tuple

    def __post_init__(self) -> None:
        w = tuple(float(x) for x in self.weights)
        if abs(sum(w) - 1.0) > 1e-12:
            raise InvalidStateError(f"block weights sum to {sum(w):.15f}")
        object.__setattr__(self, "weights", w)

    def assemble(self) -> np.ndarray:
        """Weighted re-embedding of the blocks; equals the block-diagonal
        part of the original state up to roundoff."""
        out = np.zeros((9, 9), dtype=complex)
        for k, (w, rho) in enumerate(zip(self.weights, self.blocks)):
            if rho is not None:
                out[BLOCK_SLICES[k], BLOCK_SLICES[k]] = w * rho.matrix
        return out


def von_neumann_entropy(rho) -> float:
    """Entropy -sum(lam * log2 lam) in bits, with 0*log 0 = 0.

    Accepts a DensityOperator or a raw matrix; raw input is validated
    against the same invariants.
    """
    if isinstance(rho, DensityOperator):
        m = rho.matrix
    else:
        m = _check_density(rho)
    eigs = np.linalg.eigvalsh(m)
    if eigs.min() < -PSD_TOL:
        raise InvalidStateError(f"negative eigenvalue {eigs.min():.3e}")
    eigs = np.clip(eigs, 0.0, 1.0)
    return float(-_xlog2x(eigs).sum())


def truncate_to_blocks(rho: DensityOperator) -> BlockDecomposition:
    """Split a two-slot state into its photon-number blocks.

    Weight k is the trace of the k-photon diagonal block; each present
    block is the renormalized diagonal sub-matrix.
    """
    if rho.basis_tag != "two_slot":
        raise ContractError("block truncation expects a 9-dim two-slot state")
    weights = []
    blocks = []
    for sl, tag in zip(BLOCK_SLICES, BLOCK_TAGS):
        sub = rho.matrix[sl, sl]
        w = float(np.real(np.trace(sub)))
        weights.append(w)
        if w < 1e-14:
            blocks.append(None)
        else:
            blocks.append(DensityOperator(sub / w, tag))
    return BlockDecomposition(tuple(weights), tuple(blocks))


def embed_block(rho: DensityOperator, photon_number: int) -> DensityOperator:
    """Embed a block state into the full 9-dim space (other blocks empty)."""
    if photon_number not in (0, 1, 2):
        raise ContractError("photon number must be 0, 1 or 2")
    if rho.basis_tag != BLOCK_TAGS[photon_number]:
        raise ContractError(
            f"expected a {BLOCK_TAGS[photon_number]!r} state, got {rho.basis_tag!r}")
    out = np.zeros((9, 9), dtype=complex)
    out[BLOCK_SLICES[photon_number], BLOCK_SLICES[photon_number]] = rho.matrix
    return DensityOperator(out, "two_slot")


def holevo_quantity(ensemble: StateEnsemble, channel: Callable) -> float:
    """S(sum_i p_i L(rho_i)) - sum_i p_i S(L(rho_i)) in bits.

    `channel` is any callable mapping a DensityOperator to a
    DensityOperator on a common output space (e.g. a ChannelMap).
    """
    outputs = [(p, channel(rho)) for p, rho in ensemble.items]
    dims = {out.dim for _, out in outputs}
    if len(dims) != 1:
        raise ContractError("channel produced outputs of mixed dimension")
    avg = sum(p * out.matrix for p, out in outputs)
    avg_entropy = von_neumann_entropy(DensityOperator(avg, outputs[0][1].basis_tag))
    return avg_entropy - sum(p * von_neumann_entropy(out) for p, out in outputs)


def werner_state(c: float) -> DensityOperator:
    """Two-photon state -c|psi-><psi-| + (1+c)*I/4.

    Diagonal in the coupled basis with entries ((1-3c)/4, (1+c)/4 x3);
    positivity restricts c to [-1, 1/3].
    """
    c = float(c)
    if c < -1.0 - 1e-12 or c > 1.0 / 3.0 + 1e-12:
        raise InvalidStateError(f"Werner parameter {c} outside [-1, 1/3] violates positivity")
    singlet = (1.0 - 3.0 * c) / 4.0
    triplet = (1.0 + c) / 4.0
    return DensityOperator(np.diag([singlet, triplet, triplet, triplet]).astype(complex),
                           "two_photon")


def werner_parameter(rho: DensityOperator) -> float:
    """c = 1/3 - (4/3)<psi-|rho|psi-> of a two-photon state."""
    if rho.basis_tag != "two_photon":
        raise ContractError("Werner parameter is defined on the two-photon block")
    return 1.0 / 3.0 - 4.0 / 3.0 * float(np.real(rho.matrix[0, 0]))


def random_density(rng: np.random.Generator, dim: int = 9,
                   basis_tag: str = "two_slot") -> DensityOperator:
    """Random full-rank state (normalized Ginibre square), for tests."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2.0
    return DensityOperator(m / np.trace(m).real, basis_tag)

"""U(2) noise elements, Haar sampling, and their spin representations.

A polarization transformation is stored as a special-unitary 2x2 matrix
plus a separate overall phase alpha, because the phase enters the slot
unitaries with photon-number-dependent powers e^{i*alpha*k}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ContractError
from .qstate import pair_coupling_matrix

TAU = 2.0 * np.pi

_UNITARY_TOL = 1e-12
_S4 = pair_coupling_matrix()


@dataclass(frozen=True, eq=False)
class GroupElementU2:
    """SU(2) matrix plus an overall phase in [0, 2*pi)."""

    su2: np.ndarray
    phase: float

    def __post_init__(self) -> None:
        m = np.asarray(self.su2, dtype=complex)
        if m.shape != (2, 2):
            raise ContractError(f"su2 part must be 2x2, got {m.shape}")
        if np.abs(m @ m.conj().T - np.eye(2)).max() > _UNITARY_TOL:
            raise ContractError("su2 part is not unitary within 1e-12")
        if abs(np.linalg.det(m) - 1.0) > _UNITARY_TOL:
            raise ContractError("su2 part must have determinant 1")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "su2", m)
        object.__setattr__(self, "phase", float(self.phase) % TAU)


@dataclass(frozen=True, eq=False)
class WignerD:
    """(2j+1)-dimensional representation matrix of a group element."""

    j: float
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        d = m.shape[0]
        if np.abs(m @ m.conj().T - np.eye(d)).max() > _UNITARY_TOL:
            raise ContractError("representation matrix is not unitary within 1e-12")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def identity() -> GroupElementU2:
    return GroupElementU2(np.eye(2, dtype=complex), 0.0)


def su2_from_quaternion(quat: np.ndarray) -> np.ndarray:
    """Map unit quaternions (..., 4) to SU(2) matrices (..., 2, 2)."""
    q = np.asarray(quat, dtype=float)
    q = q / np.linalg.norm(q, axis=-1, keepdims=True)
    w, x, y, z = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    m = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    m[..., 0, 0] = w + 1j * z
    m[..., 0, 1] = y + 1j * x
    m[..., 1, 0] = -y + 1j * x
    m[..., 1, 1] = w - 1j * z
    return m


def haar_su2(rng: np.random.Generator, n: int) -> np.ndarray:
    """n Haar-distributed SU(2) matrices (normalized Gaussian quaternions)."""
    return su2_from_quaternion(rng.standard_normal((n, 4)))


def haar_sample(rng: np.random.Generator) -> GroupElementU2:
    """One Haar-distributed U(2) element: Haar SU(2) part, uniform phase."""
    su2 = su2_from_quaternion(rng.standard_normal(4))
    return GroupElementU2(su2, rng.uniform(0.0, TAU))


def compose(a: GroupElementU2, b: GroupElementU2) -> GroupElementU2:
    """Group product: su2 parts multiply, phases add mod 2*pi."""
    return GroupElementU2(a.su2 @ b.su2, (a.phase + b.phase) % TAU)


def inverse(a: GroupElementU2) -> GroupElementU2:
    return GroupElementU2(a.su2.conj().T, (-a.phase) % TAU)


def spin1_matrix(su2: np.ndarray) -> np.ndarray:
    """Spin-1 representation in the triplet basis (HH, psi+, VV).

    Closed-form degree-2 polynomials in the SU(2) entries; equals the
    restriction of kron(D, D) to the symmetric subspace. Broadcasts over
    leading axes.
    """
    su2 = np.asarray(su2, dtype=complex)
    a = su2[..., 0, 0]
    b = su2[..., 0, 1]
    c = su2[..., 1, 0]
    d = su2[..., 1, 1]
    r2 = np.sqrt(2.0)
    out = np.empty(su2.shape[:-2] + (3, 3), dtype=complex)
    out[..., 0, 0] = a * a
    out[..., 0, 1] = r2 * a * b
    out[..., 0, 2] = b * b
    out[..., 1, 0] = r2 * a * c
    out[..., 1, 1] = a * d + b * c
    out[..., 1, 2] = r2 * b * d
    out[..., 2, 0] = c * c
    out[..., 2, 1] = r2 * c * d
    out[..., 2, 2] = d * d
    return out


def wigner_d(j: float, omega: GroupElementU2) -> WignerD:
    """Representation matrix for spin j in {0, 1/2, 1}."""
    if j == 0:
        return WignerD(0.0, np.ones((1, 1), dtype=complex))
    if j == 0.5:
        return WignerD(0.5, omega.su2)
    if j == 1:
        return WignerD(1.0, spin1_matrix(omega.su2))
    raise ContractError(f"unsupported spin {j}; only 0, 1/2 and 1 are defined")


def slot_unitary(omega: GroupElementU2) -> np.ndarray:
    """3x3 single-slot unitary: vacuum untouched, e^{i alpha} D on the photon."""
    u = np.zeros((3, 3), dtype=complex)
    u[0, 0] = 1.0
    u[1:, 1:] = np.exp(1j * omega.phase) * omega.su2
    return u


def two_slot_unitary(omega: GroupElementU2) -> np.ndarray:
    """9x9 action of the same transformation on both slots, in the fixed basis.

    Block structure: 1 on the vacuum, e^{i alpha} (D + D) on the one-photon
    block, e^{2i alpha} (1 + spin-1) on the (singlet, triplet) block.
    """
    u = np.zeros((9, 9), dtype=complex)
    p = np.exp(1j * omega.phase)
    u[0, 0] = 1.0
    u[1:3, 1:3] = p * omega.su2
    u[3:5, 3:5] = p * omega.su2
    u[5, 5] = p * p
    u[6:9, 6:9] = p * p * spin1_matrix(omega.su2)
    return u


def pair_slot_unitary(omega_a: GroupElementU2, omega_b: GroupElementU2) -> np.ndarray:
    """9x9 action of independent transformations on slot A and slot B."""
    w = pair_unitary_batch(omega_a.su2[None], np.array([omega_a.phase]),
                           omega_b.su2[None], np.array([omega_b.phase]))
    return w[0]


def pair_unitary_batch(su2_a: np.ndarray, alpha_a: np.ndarray,
                       su2_b: np.ndarray, alpha_b: np.ndarray) -> np.ndarray:
    """Batched (n, 9, 9) unitaries U(omega_A) x U(omega_B) in the fixed basis.

    The two-photon block is kron(D_A, D_B) conjugated into the coupled
    (singlet, triplet) basis; it is not block-diagonal there unless the
    two elements coincide.
    """
    n = su2_a.shape[0]
    pa = np.exp(1j * np.asarray(alpha_a))
    pb = np.exp(1j * np.asarray(alpha_b))
    w = np.zeros((n, 9, 9), dtype=complex)
    w[:, 0, 0] = 1.0
    w[:, 1:3, 1:3] = pa[:, None, None] * su2_a
    w[:, 3:5, 3:5] = pb[:, None, None] * su2_b
    kron = np.einsum("nij,nkl->nikjl", su2_a, su2_b).reshape(n, 4, 4)
    coupled = _S4.conj().T @ kron @ _S4
    w[:, 5:9, 5:9] = (pa * pb)[:, None, None] * coupled
    return w


def _wigner_entries(j: float, m: int, n: int, su2: np.ndarray) -> np.ndarray:
    dim = int(round(2 * j + 1))
    if j not in (0, 0.5, 1):
        raise ContractError(f"unsupported spin {j}")
    if not (0 <= m < dim and 0 <= n < dim):
        raise ContractError(f"indices ({m},{n}) out of range for spin {j}")
    if j == 0:
        return np.ones(su2.shape[0], dtype=complex)
    if j == 0.5:
        return su2[:, m, n]
    return spin1_matrix(su2)[:, m, n]


@dataclass(frozen=True)
class OrthogonalityEstimate:
    value: complex
    std_error: float
    samples: int


def mc_orthogonality(j: float, m: int, n: int, j2: float, m2: int, n2: int,
                     samples: int, rng: np.random.Generator) -> OrthogonalityEstimate:
    """Monte Carlo estimate of the Haar average of conj(D^j_mn) * D^j2_m2n2.

    The representation matrices do not involve the overall phase, so
    sampling the SU(2) part suffices. The exact average is
    delta_{jj2} delta_{mm2} delta_{nn2} / (2j+1).
    """
    if samples < 1000:
        raise ContractError("orthogonality estimate needs at least 1000 samples")
    su2 = haar_su2(rng, samples)
    vals = np.conj(_wigner_entries(j, m, n, su2)) * _wigner_entries(j2, m2, n2, su2)
    mean = complex(vals.mean())
    var = vals.real.var(ddof=1) + vals.imag.var(ddof=1)
    return OrthogonalityEstimate(mean, float(np.sqrt(var / samples)), samples)

"""Fermionic Gaussian states as correlation and covariance matrices.

Correlation matrices follow the block layout

    Gamma = [[ <c^dag c>, <c^dag c^dag> ],
             [ <c c>,     <c c^dag>     ]]        (per chain, chains stacked),

matching the operator ordering of :mod:`tetronsim.model`.  The covariance
matrix lives in the rescaled-Majorana basis r_i = (c_i + c_i^dag)/sqrt(2),
r_{i+N} = (c_i - c_i^dag)/(i sqrt(2)) and is obtained from

    M = -i Omega* (2 Gamma - 1) Omega^T.

Quasiparticle-basis quantities use the same formulas with the site operators
replaced by the instantaneous Bogoliubov modes (zero mode first).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import BasisMismatchError, InvalidParameterError
from .model import ModeBasis

SITE = "site"
QP = "qp"


class QubitStateLabel(str, enum.Enum):
    ZERO = "zero"
    ONE = "one"
    PLUS = "plus"


@dataclass(frozen=True)
class CorrelationMatrix:
    """Two-point function matrix of a Gaussian state, with its basis tag."""

    matrix: np.ndarray
    basis: str
    n_sites: int
    n_chains: int = 2

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def purity_defect(self) -> float:
        q = 2.0 * self.matrix - np.eye(self.dim)
        return float(np.max(np.abs(q @ q - np.eye(self.dim))))


@dataclass(frozen=True)
class CovarianceMatrix:
    """Real antisymmetric Majorana-basis form of a Gaussian state."""

    matrix: np.ndarray
    basis: str
    n_sites: int
    n_chains: int = 2

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def antisymmetry_defect(self) -> float:
        return float(np.max(np.abs(self.matrix + self.matrix.T)))

    def purity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix @ self.matrix.T - np.eye(self.dim))))


def _zero_mode_slots(n: int):
    # diagonal positions of the zero-mode occupations per chain:
    # (d^dag d at 0 and 2N, d d^dag at N and 3N)
    return (0, n, 2 * n, 3 * n)


def ground_state_qp_correlation(n_sites: int, label) -> CorrelationMatrix:
    """Correlation matrix of |0>, |1> or |+> in the quasiparticle basis.

    |0> is the quasiparticle vacuum, |1> carries the occupied zero mode on
    each chain, and |+> is their equal-weight coherent superposition whose
    cross terms sit in the four zero-mode rows and columns.
    """
    if n_sites < 2:
        raise InvalidParameterError("n_sites must be >= 2")
    label = QubitStateLabel(label)
    n = n_sites
    dim = 4 * n
    u0 = np.zeros((dim, dim), dtype=complex)
    u0[np.arange(n, 2 * n), np.arange(n, 2 * n)] = 1.0
    u0[np.arange(3 * n, 4 * n), np.arange(3 * n, 4 * n)] = 1.0
    if label is QubitStateLabel.ZERO:
        mat = u0
    else:
        u1 = u0.copy()
        a, b, c, d = _zero_mode_slots(n)
        u1[a, a] = 1.0
        u1[b, b] = 0.0
        u1[c, c] = 1.0
        u1[d, d] = 0.0
        if label is QubitStateLabel.ONE:
            mat = u1
        else:
            cross = np.zeros((dim, dim), dtype=complex)
            cross[n, 2 * n] = 1j
            cross[0, 3 * n] = 1j
            mat = 0.5 * (u0 + u1 + cross + cross.conj().T)
    return CorrelationMatrix(matrix=mat, basis=QP, n_sites=n, n_chains=2)


def _check_dims(matrix_dim: int, basis: ModeBasis) -> None:
    expected = basis.n_chains * 2 * basis.params.n_sites
    if matrix_dim != expected:
        raise BasisMismatchError(
            "matrix dimension %d does not match basis dimension %d" % (matrix_dim, expected)
        )


def rotate_to_site_basis(u: CorrelationMatrix, basis: ModeBasis) -> CorrelationMatrix:
    """Gamma = V* Upsilon V^T: quasiparticle-basis correlations to site basis."""
    if u.basis != QP:
        raise BasisMismatchError("input must be in the quasiparticle basis")
    _check_dims(u.dim, basis)
    v = basis.mode_matrix
    return CorrelationMatrix(matrix=v.conj() @ u.matrix @ v.T, basis=SITE,
                             n_sites=u.n_sites, n_chains=u.n_chains)


def rotate_to_qp_basis(g: CorrelationMatrix, basis: ModeBasis) -> CorrelationMatrix:
    """Inverse rotation of :func:`rotate_to_site_basis`."""
    if g.basis != SITE:
        raise BasisMismatchError("input must be in the site basis")
    _check_dims(g.dim, basis)
    v = basis.mode_matrix
    return CorrelationMatrix(matrix=v.T @ g.matrix @ v.conj(), basis=QP,
                             n_sites=g.n_sites, n_chains=g.n_chains)


def majorana_rotation(n_sites: int, n_chains: int = 2) -> np.ndarray:
    """Matrix Omega with r = Omega c for the rescaled Majorana operators."""
    n = n_sites
    eye = np.eye(n)
    block = np.block([[eye, eye], [-1j * eye, 1j * eye]]) / np.sqrt(2.0)
    if n_chains == 1:
        return block
    z = np.zeros_like(block)
    return np.block([[block, z], [z, block]])


def covariance_from_correlation(g: CorrelationMatrix) -> CovarianceMatrix:
    """M = -i Omega* (2 Gamma - 1) Omega^T in the matching Majorana basis."""
    omega = majorana_rotation(g.n_sites, g.n_chains)
    m = -1j * omega.conj() @ (2.0 * g.matrix - np.eye(g.dim)) @ omega.T
    residue = float(np.max(np.abs(m.imag)))
    if residue > 1e-8:
        raise BasisMismatchError("non-physical correlation matrix: imaginary residue %g" % residue)
    return CovarianceMatrix(matrix=np.ascontiguousarray(m.real), basis=g.basis,
                            n_sites=g.n_sites, n_chains=g.n_chains)


def qp_vacuum_covariance(n_sites: int) -> CovarianceMatrix:
    """Covariance of the quasiparticle vacuum |0> in its own Majorana basis."""
    n = n_sites
    m = np.zeros((4 * n, 4 * n))
    for off in (0, 2 * n):
        for i in range(n):
            m[off + i, off + n + i] = 1.0
            m[off + n + i, off + i] = -1.0
    return CovarianceMatrix(matrix=m, basis=QP, n_sites=n, n_chains=2)


def qp_occupied_pair_covariance(n_sites: int) -> CovarianceMatrix:
    """Covariance of |1> (zero mode occupied on each chain) in the QP basis."""
    base = qp_vacuum_covariance(n_sites)
    m = base.matrix.copy()
    n = n_sites
    for off in (0, 2 * n):
        m[off, off + n] = -1.0
        m[off + n, off] = 1.0
    return CovarianceMatrix(matrix=m, basis=QP, n_sites=n, n_chains=2)


def pfaffian4(a: np.ndarray) -> float:
    """Pfaffian of a 4x4 antisymmetric matrix, a12 a34 - a13 a24 + a14 a23."""
    a = np.asarray(a)
    if a.shape != (4, 4):
        raise InvalidParameterError("pfaffian4 expects a 4x4 matrix")
    if np.max(np.abs(a + a.T)) > 1e-10:
        raise InvalidParameterError("matrix is not antisymmetric")
    return float(a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2])


def parity_expectation(m: CovarianceMatrix) -> float:
    """Expectation of the product of the four zero-mode Majoranas.

    Requires the covariance in the instantaneous quasiparticle Majorana basis;
    the relevant rows are the zero-mode Majorana slots of each chain.
    """
    if m.basis != QP:
        raise BasisMismatchError("parity needs the quasiparticle Majorana basis")
    idx = list(_zero_mode_slots(m.n_sites))
    return pfaffian4(m.matrix[np.ix_(idx, idx)])


def overlap_sq(ma: CovarianceMatrix, mb: CovarianceMatrix) -> float:
    """Squared overlap of two pure Gaussian states from their covariances.

    |<A|B>|^2 = 2^(-n_modes) sqrt(det(M_A + M_B)), evaluated through slogdet
    so large systems do not overflow.  A significantly negative determinant
    means the two matrices were not expressed in the same basis.
    """
    if ma.dim != mb.dim or ma.basis != mb.basis:
        raise BasisMismatchError("covariance matrices disagree in dimension or basis")
    n_modes = ma.dim // 2
    sign, logdet = np.linalg.slogdet(ma.matrix + mb.matrix)
    if sign == 0:
        return 0.0
    # normalized determinant det/2^(2 n_modes) = |overlap|^4
    q = sign * np.exp(logdet - 2.0 * n_modes * np.log(2.0))
    if q < -1e-10:
        raise BasisMismatchError("negative overlap determinant: %g" % q)
    return float(np.sqrt(max(q, 0.0)))

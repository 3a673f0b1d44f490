"""Dense complex linear algebra for small Hermitian problems (dim <= 16).

Everything here operates on plain numpy arrays and returns new arrays;
inputs are never modified. All spectral quantities downstream (entropies,
fidelities) are in base 2, so eigenvalue conventions fixed here (descending
order, round-off clamping) are relied on throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HermitianEigen",
    "NotHermitian",
    "NotPSD",
    "EIG_CLAMP",
    "eig_hermitian",
    "psd_sqrt",
    "purity",
]

# Max |A - A†| entry before a matrix is rejected as non-Hermitian.
HERMITIAN_TOL = 1e-8
# Most negative eigenvalue tolerated before a matrix is rejected as non-PSD.
PSD_TOL = 1e-8
# Round-off negatives above -EIG_CLAMP are treated as exact zeros.
EIG_CLAMP = 1e-10


class NotHermitian(ValueError):
    """Matrix differs from its conjugate transpose beyond tolerance."""


class NotPSD(ValueError):
    """Hermitian matrix has an eigenvalue below the PSD tolerance."""


def _square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def _check_hermitian(a: np.ndarray) -> np.ndarray:
    asym = np.abs(a - a.conj().T).max()
    if asym > HERMITIAN_TOL:
        raise NotHermitian(
            f"max asymmetry {asym:.3e} exceeds {HERMITIAN_TOL:.0e}"
        )
    # Symmetrize so downstream results do not depend on which triangle
    # carried the round-off.
    return (a + a.conj().T) / 2


@dataclass(frozen=True)
class HermitianEigen:
    """Spectral decomposition with eigenvalues sorted in descending order.

    ``eigenvectors[:, i]`` is the unit eigenvector paired with
    ``eigenvalues[i]``; the columns are orthonormal.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Return V diag(w) V†."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(m) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    Raises NotHermitian if the max asymmetry exceeds 1e-8. Eigenvalues are
    real and returned in descending order.
    """
    a = _check_hermitian(_square(m))
    w, v = np.linalg.eigh(a)
    order = slice(None, None, -1)
    return HermitianEigen(np.ascontiguousarray(w[order]), np.ascontiguousarray(v[:, order]))


def psd_sqrt(m) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in [-1e-8, 0) are treated as round-off and clamped to zero;
    anything more negative raises NotPSD. The result R is Hermitian and
    satisfies R @ R ~= m.
    """
    eig = eig_hermitian(m)
    w = eig.eigenvalues
    if w.min() < -PSD_TOL:
        raise NotPSD(f"eigenvalue {w.min():.3e} below -{PSD_TOL:.0e}")
    v = eig.eigenvectors
    root = (v * np.sqrt(np.maximum(w, 0.0))) @ v.conj().T
    return (root + root.conj().T) / 2


def purity(m) -> float:
    """tr(m²) for Hermitian m; equals the squared Frobenius norm."""
    a = _square(m)
    return float(np.vdot(a, a).real)

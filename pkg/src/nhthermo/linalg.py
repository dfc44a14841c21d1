"""Dense complex linear algebra for operators with real spectra.

The eigensolver runs LAPACK on a diagonally balanced copy of the input.
Balancing minimizes the Frobenius norm of ``S A S^-1`` over positive diagonal
``S``; for tridiagonal matrices with positive off-diagonal products this is
exactly the symmetrizing similarity, which is what keeps strongly non-normal
Toeplitz Hamiltonians (eigenvalue condition numbers ~1e16) solvable in double
precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .errors import (
    ComplexSpectrum,
    ConvergenceFailure,
    DegenerateSpectrum,
    DimensionOverflow,
    InvalidParameter,
)

EPS_BIO = 1e-9
EPS_EIG = 1e-10
REL_REAL = 1e-8
REL_GAP = 1e-8
MAX_KRON_DIM = 4096

# Largest allowed spread of log-scalings; keeps exp(2*spread) finite.
_MAX_LOG_SPREAD = 200.0


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and copy ``a`` into a read-only square complex array."""
    arr = np.array(a, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise InvalidParameter(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter(f"{name} has non-finite entries")
    arr.flags.writeable = False
    return arr


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.flags.writeable = False
    return a


def balance_scaling(a: np.ndarray, max_iter: int = 100) -> np.ndarray:
    """Positive diagonal ``s`` minimizing ``||diag(s) A diag(s)^-1||_F``.

    Newton's method on the convex objective ``sum |a_ij|^2 exp(2(x_i - x_j))``
    in log-scalings ``x``; the Hessian is a weighted graph Laplacian, solved
    in the least-squares sense to fix the gauge.
    """
    a = np.asarray(a)
    n = a.shape[0]
    x = np.zeros(n)
    w = np.abs(a) ** 2
    np.fill_diagonal(w, 0.0)
    if n == 1 or not w.any():
        return np.ones(n)
    with np.errstate(divide="ignore"):
        lw = np.log(w)

    def terms(x):
        return np.exp(lw + 2.0 * (x[:, None] - x[None, :]))

    for _ in range(max_iter):
        b = terms(x)
        f = b.sum()
        g = 2.0 * (b.sum(axis=1) - b.sum(axis=0))
        c = b + b.T
        lap = 4.0 * (np.diag(c.sum(axis=1)) - c)
        step = -np.linalg.lstsq(lap, g, rcond=None)[0]
        decrement = -g @ step
        if not np.isfinite(decrement) or decrement <= 1e-26 * f:
            break
        t = 1.0
        for _ in range(60):
            trial = x + t * step
            if np.ptp(trial) <= _MAX_LOG_SPREAD and terms(trial).sum() <= f - 0.25 * t * decrement:
                break
            t *= 0.5
        else:
            break
        x = trial
    x -= x.mean()
    return np.exp(x)


def _eig(b: np.ndarray):
    try:
        return sla.eig(b)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f"eigenvalue iteration did not converge: {exc}") from exc


def eig_general(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and unit-norm right eigenvectors (columns) of a general matrix."""
    a = as_complex_matrix(a)
    s = balance_scaling(a)
    b = a * s[:, None] / s[None, :]
    vals, phi = _eig(b)
    vecs = phi / s[:, None]
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    return vals, vecs


@dataclass(frozen=True)
class BiorthogonalEigensystem:
    """Real simple spectrum with paired right/left eigenvectors.

    ``right_vectors[:, k]`` is unit norm, ``left_vectors[:, k]`` is an
    eigenvector of ``H^dagger`` scaled so that ``<psi_k, psi~_l> = delta_kl``.
    ``scaling`` is the balancing diagonal used to build the system; checks
    involving outer products are done in that frame, where the entries are
    of comparable magnitude.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    source_residual: float
    scaling: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def biorthogonality_residual(self) -> float:
        gram = self.left_vectors.conj().T @ self.right_vectors
        return float(np.max(np.abs(gram - np.eye(self.dim))))

    def completeness_residual(self) -> float:
        s = self.scaling
        right = self.right_vectors * s[:, None]
        left = self.left_vectors / s[:, None]
        return float(np.linalg.norm(right @ left.conj().T - np.eye(self.dim)))

    def left_residual(self, h) -> float:
        """Max of ``||H^dagger psi~ - lambda psi~|| / ||psi~||`` over the basis."""
        h = np.asarray(h)
        r = h.conj().T @ self.left_vectors - self.left_vectors * self.eigenvalues
        return float(np.max(np.linalg.norm(r, axis=0) / np.linalg.norm(self.left_vectors, axis=0)))


def biorthogonalize(
    h,
    eps_bio: float = EPS_BIO,
    rel_real: float = REL_REAL,
    rel_gap: float = REL_GAP,
) -> BiorthogonalEigensystem:
    """Biorthonormal eigensystem of ``h``; rejects complex or degenerate spectra."""
    h = as_complex_matrix(h, "H")
    n = h.shape[0]
    scale = max(np.linalg.norm(h), np.finfo(float).tiny)
    s = balance_scaling(h)
    b = h * s[:, None] / s[None, :]

    vals, phi = _eig(b)
    lvals, chi = _eig(b.conj().T)

    worst = np.max(np.abs(vals.imag))
    if worst > rel_real * scale:
        raise ComplexSpectrum(f"eigenvalue with imaginary part {worst:.3e} (limit {rel_real * scale:.3e})")
    order = np.argsort(vals.real)
    vals, phi = vals.real[order], phi[:, order]
    if n > 1:
        gap = np.min(np.diff(vals))
        if gap < rel_gap * scale:
            raise DegenerateSpectrum(f"eigenvalue gap {gap:.3e} below {rel_gap * scale:.3e}")

    # H^dagger has conjugate eigenvalues; pair each with the nearest one of H.
    lvals = lvals.conj()
    pairing = np.array([np.argmin(np.abs(lvals - lam)) for lam in vals])
    if len(set(pairing.tolist())) != n:
        raise DegenerateSpectrum("left and right spectra could not be paired one-to-one")
    chi = chi[:, pairing]

    cosines = np.abs(np.einsum("ik,ik->k", chi.conj(), phi))
    cosines /= np.linalg.norm(chi, axis=0) * np.linalg.norm(phi, axis=0)
    if np.any(cosines < np.sqrt(np.finfo(float).eps)):
        raise DegenerateSpectrum("left and right eigenvectors are numerically orthogonal")
    right = phi / s[:, None]
    right = right / np.linalg.norm(right, axis=0)
    left = chi * s[:, None]
    left = left / np.einsum("ik,ik->k", left.conj(), right).conj()

    residual = float(np.max(np.linalg.norm(h @ right - right * vals, axis=0)))
    es = BiorthogonalEigensystem(
        eigenvalues=_frozen(vals),
        right_vectors=_frozen(right),
        left_vectors=_frozen(left),
        source_residual=residual,
        scaling=_frozen(s),
    )
    bio = es.biorthogonality_residual()
    if bio > eps_bio:
        raise DegenerateSpectrum(f"biorthonormality residual {bio:.3e} exceeds {eps_bio:.1e}")
    comp = es.completeness_residual()
    if comp > n * eps_bio:
        raise DegenerateSpectrum(f"eigenbasis numerically incomplete (residual {comp:.3e})")
    return es


def spectral_apply(es: BiorthogonalEigensystem, f: Callable) -> np.ndarray:
    """``sum_k f(lambda_k) psi_k psi~_k^dagger``."""
    lam = es.eigenvalues
    try:
        values = np.asarray(f(lam), dtype=float)
        if values.shape != lam.shape:
            values = np.broadcast_to(values, lam.shape)
    except TypeError:
        values = np.array([f(x) for x in lam], dtype=float)
    return (es.right_vectors * values) @ es.left_vectors.conj().T


def kron_sum(a, b, max_dim: int = MAX_KRON_DIM) -> np.ndarray:
    """``A (x) I + I (x) B`` on the tensor-product space."""
    a = as_complex_matrix(a, "A")
    b = as_complex_matrix(b, "B")
    n, m = a.shape[0], b.shape[0]
    if n * m > max_dim:
        raise DimensionOverflow(f"product dimension {n * m} exceeds cap {max_dim}")
    return np.kron(a, np.eye(m)) + np.kron(np.eye(n), b)

"""Metric operators and the D-inner product.

A metric ``D`` is Hermitian positive definite with ``D H = H^dagger D``.
``build_metric`` constructs it as ``sum_k psi~_k psi~_k^dagger`` from a
biorthogonal eigensystem, so that ``D psi_k = psi~_k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, NotDHermitian, NotPositiveDefinite
from .linalg import EPS_BIO, BiorthogonalEigensystem, as_complex_matrix

REL_HERM = 1e-10
REL_PD = 1e-12
TOL_D_HERMITIAN = 1e-9


def _frozen(a):
    a = np.array(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class MetricOperator:
    matrix: np.ndarray
    sqrt: np.ndarray
    inv_sqrt: np.ndarray
    min_eigenvalue: float
    # Set for metrics given by an exact positive diagonal; similarity
    # transforms then reduce to row/column scaling.
    diagonal: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_matrix(cls, d, rel_herm: float = REL_HERM, rel_pd: float = REL_PD) -> "MetricOperator":
        d = np.array(as_complex_matrix(d, "D"))
        norm = np.linalg.norm(d)
        asym = np.linalg.norm(d - d.conj().T)
        if asym > rel_herm * norm:
            raise NotPositiveDefinite(f"metric is not Hermitian (||D - D^dagger|| = {asym:.3e})")
        d = 0.5 * (d + d.conj().T)
        w, u = np.linalg.eigh(d)
        if w[0] <= rel_pd * norm:
            raise NotPositiveDefinite(f"metric min eigenvalue {w[0]:.3e} not above {rel_pd * norm:.3e}")
        root = np.sqrt(w)
        return cls(
            matrix=_frozen(d),
            sqrt=_frozen((u * root) @ u.conj().T),
            inv_sqrt=_frozen((u / root) @ u.conj().T),
            min_eigenvalue=float(w[0]),
        )

    @classmethod
    def from_diagonal(cls, values) -> "MetricOperator":
        """Exact diagonal metric; eigenvalues are the entries themselves, so
        no roundoff floor applies beyond strict positivity."""
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size == 0 or not np.all(np.isfinite(values)):
            raise InvalidParameter("diagonal metric needs a finite 1-d array")
        if np.any(values <= 0):
            raise NotPositiveDefinite("diagonal metric has a non-positive entry")
        root = np.sqrt(values)
        return cls(
            matrix=_frozen(np.diag(values).astype(complex)),
            sqrt=_frozen(np.diag(root).astype(complex)),
            inv_sqrt=_frozen(np.diag(1.0 / root).astype(complex)),
            min_eigenvalue=float(values.min()),
            diagonal=_frozen(values),
        )

    def similarity(self, x) -> np.ndarray:
        """``D^{1/2} X D^{-1/2}``."""
        x = np.asarray(x)
        if self.diagonal is not None:
            root = np.sqrt(self.diagonal)
            return x * root[:, None] / root[None, :]
        return self.sqrt @ x @ self.inv_sqrt

    def inverse_similarity(self, x) -> np.ndarray:
        """``D^{-1/2} X D^{1/2}``."""
        x = np.asarray(x)
        if self.diagonal is not None:
            root = np.sqrt(self.diagonal)
            return x * root[None, :] / root[:, None]
        return self.inv_sqrt @ x @ self.sqrt


def build_metric(es: BiorthogonalEigensystem, eps_bio: float = EPS_BIO) -> MetricOperator:
    left = es.left_vectors
    metric = MetricOperator.from_matrix(left @ left.conj().T)
    mapped = metric.matrix @ es.right_vectors - left
    err = np.linalg.norm(mapped, axis=0) / np.maximum(1.0, np.linalg.norm(left, axis=0))
    if np.max(err) > es.dim * eps_bio:
        raise NotPositiveDefinite(f"D psi_k != psi~_k (worst column error {np.max(err):.3e})")
    return metric


def pseudo_hermiticity_residual(metric: MetricOperator, x) -> float:
    """``||D X - X^dagger D||_F / max(1, ||D||_F ||X||_F)``; zero iff X is D-Hermitian."""
    x = np.asarray(x, dtype=complex)
    if x.shape != metric.matrix.shape:
        raise InvalidParameter(f"shape mismatch {x.shape} vs {metric.matrix.shape}")
    d = metric.matrix
    if metric.diagonal is not None:
        v = metric.diagonal
        diff = v[:, None] * x - x.conj().T * v[None, :]
    else:
        diff = d @ x - x.conj().T @ d
    scale = max(1.0, np.linalg.norm(d) * np.linalg.norm(x))
    return float(np.linalg.norm(diff) / scale)


def to_hermitian(metric: MetricOperator, x, tol: float = TOL_D_HERMITIAN) -> np.ndarray:
    """Hermitian operator ``D^{1/2} X D^{-1/2}`` similar to a D-Hermitian ``X``."""
    res = pseudo_hermiticity_residual(metric, x)
    if res > tol:
        raise NotDHermitian(f"pseudo-Hermiticity residual {res:.3e} exceeds {tol:.1e}")
    return metric.similarity(x)


def d_inner(metric: MetricOperator, phi, psi) -> complex:
    """``<D phi, psi>``, conjugate-linear in ``psi``."""
    phi = np.asarray(phi)
    psi = np.asarray(psi)
    if phi.shape != (metric.dim,) or psi.shape != (metric.dim,):
        raise InvalidParameter("vector dimension does not match the metric")
    return complex(np.vdot(psi, metric.matrix @ phi))


def random_density(n: int, seed: int, rank: int | None = None) -> np.ndarray:
    """Seeded random Hermitian PSD unit-trace matrix (Ginibre ensemble)."""
    rng = np.random.default_rng(seed)
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    sigma = g @ g.conj().T
    return sigma / np.trace(sigma).real


def random_d_hermitian_density(metric: MetricOperator, seed: int, rank: int | None = None) -> np.ndarray:
    """``D^{-1/2} sigma D^{1/2}`` for a seeded random density ``sigma``."""
    sigma = random_density(metric.dim, seed, rank)
    return metric.inverse_similarity(sigma)

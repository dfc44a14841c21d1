"""Two-charge Gibbs states for commuting D-Hermitian observables.

Everything thermodynamic is evaluated in the shared eigenbasis through the
Gibbs weights ``p_k = exp(-beta lambda_k - zeta mu_k) / Z``; density
matrices are assembled from the biorthogonal projectors only when a matrix
is actually asked for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import InvalidParameter, InvalidState, NotDHermitian
from .linalg import (
    BiorthogonalEigensystem,
    as_complex_matrix,
    biorthogonalize,
    kron_sum,
)
from .metric import MetricOperator, build_metric, pseudo_hermiticity_residual

EPS_COMM = 1e-9
TOL_D_HERMITIAN = 1e-9
EPS_ZERO = 1e-14
MAX_MULTIPLIER = 1e3


def _frozen(a):
    a = np.array(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class ObservablePair:
    h: np.ndarray
    k: np.ndarray
    metric: MetricOperator
    eigensystem: BiorthogonalEigensystem
    joint_spectrum: np.ndarray  # (n, 2): energy, charge

    @property
    def dim(self) -> int:
        return self.h.shape[0]

    @property
    def energies(self) -> np.ndarray:
        return self.joint_spectrum[:, 0]

    @property
    def charges(self) -> np.ndarray:
        return self.joint_spectrum[:, 1]


def observable_pair(
    h,
    k,
    metric: MetricOperator | None = None,
    eigensystem: BiorthogonalEigensystem | None = None,
    eps_comm: float = EPS_COMM,
    tol: float = TOL_D_HERMITIAN,
) -> ObservablePair:
    """Validate a commuting pair and read off its joint spectrum.

    The metric defaults to the one built from the eigensystem of ``h``.
    """
    h = as_complex_matrix(h, "H")
    k = as_complex_matrix(k, "K")
    if h.shape != k.shape:
        raise InvalidParameter(f"H and K shapes differ: {h.shape} vs {k.shape}")
    comm = np.linalg.norm(h @ k - k @ h)
    if comm > eps_comm * max(np.linalg.norm(h) * np.linalg.norm(k), 1.0):
        raise InvalidParameter(f"H and K do not commute (||[H,K]|| = {comm:.3e})")
    es = eigensystem if eigensystem is not None else biorthogonalize(h)
    metric = metric if metric is not None else build_metric(es)
    for name, x in (("H", h), ("K", k)):
        res = pseudo_hermiticity_residual(metric, x)
        if res > tol:
            raise NotDHermitian(f"{name} is not D-Hermitian (residual {res:.3e})")

    right, left = es.right_vectors, es.left_vectors
    mu = np.einsum("ik,ik->k", left.conj(), k @ right)
    if np.max(np.abs(mu.imag)) > tol * max(np.linalg.norm(k), 1.0):
        raise NotDHermitian("charge expectation on an eigenvector is not real")
    mu = mu.real
    kres = np.max(np.linalg.norm(k @ right - right * mu, axis=0))
    if kres > tol * max(np.linalg.norm(k), 1.0):
        raise InvalidParameter(f"eigenvectors of H are not eigenvectors of K (residual {kres:.3e})")
    joint = np.column_stack([es.eigenvalues, mu])
    return ObservablePair(h=h, k=k, metric=metric, eigensystem=es, joint_spectrum=_frozen(joint))


def _check_multipliers(beta, zeta):
    for name, v in (("beta", beta), ("zeta", zeta)):
        if not math.isfinite(v) or abs(v) > MAX_MULTIPLIER:
            raise InvalidParameter(f"{name}={v} outside the supported range |{name}| <= {MAX_MULTIPLIER:g}")


def gibbs_weights(pair: ObservablePair, beta: float, zeta: float) -> tuple[float, np.ndarray]:
    """``(log Z, p)`` with max-shift stabilization."""
    _check_multipliers(beta, zeta)
    exponent = -beta * pair.energies - zeta * pair.charges
    top = exponent.max()
    w = np.exp(exponent - top)
    total = w.sum()
    return float(top + math.log(total)), w / total


def log_partition(pair: ObservablePair, beta: float, zeta: float) -> float:
    return gibbs_weights(pair, beta, zeta)[0]


def _weighted_stats(points: np.ndarray, p: np.ndarray):
    mean = p @ points
    centered = points - mean
    cov = (centered * p[:, None]).T @ centered
    return mean, 0.5 * (cov + cov.T)


def _shannon(p: np.ndarray) -> float:
    q = p[p > EPS_ZERO]
    return float(-(q * np.log(q)).sum())


@dataclass(frozen=True)
class GibbsState:
    beta: float
    zeta: float
    log_z: float
    mean_h: float
    mean_k: float
    entropy: float
    covariance: np.ndarray
    weights: np.ndarray = field(repr=False)
    eigensystem: BiorthogonalEigensystem = field(repr=False)

    @property
    def rho(self) -> np.ndarray:
        es = self.eigensystem
        return (es.right_vectors * self.weights) @ es.left_vectors.conj().T

    def as_record(self) -> dict:
        return {
            "beta": self.beta,
            "zeta": self.zeta,
            "log_z": self.log_z,
            "mean_h": self.mean_h,
            "mean_k": self.mean_k,
            "entropy": self.entropy,
            "covariance": self.covariance.tolist(),
        }


def gibbs_state(pair: ObservablePair, beta: float, zeta: float) -> GibbsState:
    log_z, p = gibbs_weights(pair, beta, zeta)
    mean, cov = _weighted_stats(pair.joint_spectrum, p)
    return GibbsState(
        beta=float(beta),
        zeta=float(zeta),
        log_z=log_z,
        mean_h=float(mean[0]),
        mean_k=float(mean[1]),
        entropy=_shannon(p),
        covariance=_frozen(cov),
        weights=_frozen(p),
        eigensystem=pair.eigensystem,
    )


def gibbs_density_dense(pair: ObservablePair, beta: float, zeta: float) -> np.ndarray:
    """``exp(-beta H - zeta K) / Tr`` via the dense matrix exponential.

    Cross-check path only; loses accuracy for large multipliers.
    """
    _check_multipliers(beta, zeta)
    g = sla.expm(-beta * np.asarray(pair.h) - zeta * np.asarray(pair.k))
    return g / np.trace(g)


def state_spectrum(pair: ObservablePair, rho) -> np.ndarray:
    """Real eigenvalues of a D-Hermitian density, via its Hermitian similar."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != pair.h.shape:
        raise InvalidState(f"state shape {rho.shape} does not match {pair.h.shape}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > 1e-10:
        raise InvalidState(f"trace {tr} is not 1")
    sigma = pair.metric.similarity(rho)
    skew = np.linalg.norm(sigma - sigma.conj().T)
    if skew > 1e-8 * max(np.linalg.norm(sigma), 1.0):
        raise InvalidState(f"state is not D-Hermitian (skew part {skew:.3e})")
    eta = np.linalg.eigvalsh(0.5 * (sigma + sigma.conj().T))
    if eta[0] < -1e-10:
        raise InvalidState(f"state has negative eigenvalue {eta[0]:.3e}")
    return eta


def entropy_of_state(pair: ObservablePair, rho) -> float:
    """``-sum eta log eta`` with ``0 log 0 = 0`` below ``EPS_ZERO``."""
    return _shannon(state_spectrum(pair, rho))


def _real_trace(x, name):
    t = np.trace(x)
    if abs(t.imag) > 1e-9 * max(1.0, abs(t)):
        raise InvalidState(f"Tr({name} rho) is not real: {t}")
    return float(t.real)


def free_energy(pair: ObservablePair, rho) -> float:
    """``Tr(H rho) + Tr(rho log rho)`` at unit temperature."""
    entropy = entropy_of_state(pair, rho)
    return _real_trace(np.asarray(pair.h) @ rho, "H") - entropy


def theorem1_gap(pair: ObservablePair, rho, beta: float, zeta: float) -> float:
    """``Tr rho(beta H + zeta K + log rho) + log Z``; non-negative, zero only at the Gibbs state."""
    entropy = entropy_of_state(pair, rho)
    energy = _real_trace(np.asarray(pair.h) @ rho, "H")
    charge = _real_trace(np.asarray(pair.k) @ rho, "K")
    return beta * energy + zeta * charge - entropy + log_partition(pair, beta, zeta)


def covariance_hessian(pair: ObservablePair, beta: float, zeta: float) -> np.ndarray:
    """Covariance of (energy, charge) under the Gibbs weights = Hessian of log Z."""
    _, p = gibbs_weights(pair, beta, zeta)
    return _weighted_stats(pair.joint_spectrum, p)[1]


@dataclass(frozen=True)
class CompositionReport:
    n_systems: int
    log_z: float
    mean_h: float
    entropy: float
    var_h: float
    single_log_z: float
    single_mean_h: float
    single_entropy: float
    single_var_h: float
    explicit: bool
    relative_error: float
    relative_error_ratio: float

    def as_record(self) -> dict:
        return dict(self.__dict__)


def _composed_dense(pair: ObservablePair, beta: float, zeta: float):
    """Composite (N = 2) quantities from Kronecker sums and dense exponentials."""
    h2 = kron_sum(pair.h, pair.h)
    k2 = kron_sum(pair.k, pair.k)
    gen = -beta * h2 - zeta * k2
    shift = np.max(np.linalg.eigvals(gen).real)
    g = sla.expm(gen - shift * np.eye(len(gen)))
    z = np.trace(g).real
    rho = g / z
    mean_h = np.trace(rho @ h2).real
    mean_k = np.trace(rho @ k2).real
    var_h = np.trace(rho @ h2 @ h2).real - mean_h**2
    root = np.kron(pair.metric.sqrt, pair.metric.sqrt)
    inv_root = np.kron(pair.metric.inv_sqrt, pair.metric.inv_sqrt)
    sigma = root @ rho @ inv_root
    entropy = _shannon(np.linalg.eigvalsh(0.5 * (sigma + sigma.conj().T)))
    return shift + math.log(z), mean_h, mean_k, entropy, var_h


def compose_n(pair: ObservablePair, n_systems: int, beta: float, zeta: float = 0.0) -> CompositionReport:
    """Thermodynamics of ``N`` independent copies.

    ``N = 2`` is built explicitly with Kronecker sums and checked against the
    single system; other ``N`` use additivity directly.
    """
    if n_systems < 1:
        raise InvalidParameter("number of systems must be >= 1")
    single = gibbs_state(pair, beta, zeta)
    var1 = float(single.covariance[0, 0])
    explicit = n_systems == 2
    if explicit:
        log_z, mean_h, _, entropy, var_h = _composed_dense(pair, beta, zeta)
    else:
        log_z = n_systems * single.log_z
        mean_h = n_systems * single.mean_h
        entropy = n_systems * single.entropy
        var_h = n_systems * var1

    def rel(var, mean):
        return math.sqrt(max(var, 0.0)) / abs(mean) if mean != 0 else math.inf

    rel_n = rel(var_h, mean_h)
    rel_1 = rel(var1, single.mean_h)
    ratio = rel_n / rel_1 if rel_1 not in (0.0, math.inf) else math.nan
    return CompositionReport(
        n_systems=n_systems,
        log_z=float(log_z),
        mean_h=float(mean_h),
        entropy=float(entropy),
        var_h=float(var_h),
        single_log_z=single.log_z,
        single_mean_h=single.mean_h,
        single_entropy=single.entropy,
        single_var_h=var1,
        explicit=explicit,
        relative_error=rel_n,
        relative_error_ratio=ratio,
    )

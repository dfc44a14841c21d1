"""Benchmark models with closed-form spectra.

``example1`` is the 4x4 tridiagonal Hamiltonian (diagonal 1, super 1, sub 3)
with the commuting charge ``H^2 / 3``. ``toeplitz_model`` is the tridiagonal
Toeplitz family with diagonal 2, super ``1 - d`` and sub ``1 + d``, whose
spectrum is ``2 - 2 sqrt(1 - d^2) cos(k pi / (n + 1))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import InvalidParameter, QuadratureFailure
from .gibbs import ObservablePair, observable_pair
from .metric import MetricOperator

BESSEL_MAX_ARG = 800.0


def example1_hamiltonian() -> np.ndarray:
    return np.array(
        [
            [1, 1, 0, 0],
            [3, 1, 1, 0],
            [0, 3, 1, 1],
            [0, 0, 3, 1],
        ],
        dtype=complex,
    )


def example1_eigenvalues() -> np.ndarray:
    k = np.arange(1, 5)
    return np.sort(1.0 + 2.0 * math.sqrt(3.0) * np.cos(k * np.pi / 5.0))


def example1() -> ObservablePair:
    h = example1_hamiltonian()
    return observable_pair(h, h @ h / 3.0)


@dataclass(frozen=True)
class ToeplitzModel:
    n: int
    d: float

    def __post_init__(self):
        if self.n < 2:
            raise InvalidParameter(f"n must be >= 2, got {self.n}")
        if not math.isfinite(self.d) or abs(self.d) >= 1.0:
            raise InvalidParameter(f"|d| < 1 required for a real spectrum, got d={self.d}")

    @property
    def amplitude(self) -> float:
        """``2 sqrt(1 - d^2)``: half-width of the spectral band around 2."""
        return 2.0 * math.sqrt(1.0 - self.d**2)

    @property
    def analytic_eigenvalues(self) -> np.ndarray:
        k = np.arange(1, self.n + 1)
        return np.sort(2.0 - self.amplitude * np.cos(k * np.pi / (self.n + 1)))

    def matrix(self) -> np.ndarray:
        n, d = self.n, self.d
        return (2.0 * np.eye(n) + (1.0 - d) * np.eye(n, k=1) + (1.0 + d) * np.eye(n, k=-1)).astype(complex)

    def metric_diagonal(self) -> np.ndarray:
        """Diagonal metric with consecutive ratio ``(1 - d) / (1 + d)``, first entry 1."""
        ratio = (1.0 - self.d) / (1.0 + self.d)
        return ratio ** np.arange(self.n, dtype=float)

    def metric(self) -> MetricOperator:
        return MetricOperator.from_diagonal(self.metric_diagonal())


def toeplitz_model(n: int, d: float, two_charge: bool = False) -> tuple[ToeplitzModel, ObservablePair]:
    """Toeplitz model and its observable pair.

    By default the charge equals the Hamiltonian (single-multiplier use, with
    ``zeta = 0``). With ``two_charge`` the charge is ``K_n^2 / 4``.
    """
    model = ToeplitzModel(int(n), float(d))
    h = model.matrix()
    k = h @ h / 4.0 if two_charge else h
    return model, observable_pair(h, k, metric=model.metric())


def bessel_i0(h: float) -> float:
    """Modified Bessel function ``I_0`` by its power series."""
    h = float(h)
    if not math.isfinite(h) or abs(h) > BESSEL_MAX_ARG:
        raise OverflowError(f"|h| = {abs(h)} beyond the guard {BESSEL_MAX_ARG:g}")
    q = 0.25 * h * h
    total = term = 1.0
    m = 0
    while True:
        m += 1
        term *= q / (m * m)
        total += term
        if math.isinf(total):
            raise OverflowError(f"I0({h}) overflows double precision")
        if term < 1e-16 * total:
            return total


@dataclass(frozen=True)
class EulerMaclaurinResult:
    approx: float
    exact: float
    endpoint_corrected: float

    @property
    def rel_error(self) -> float:
        return abs(self.endpoint_corrected - self.exact) / abs(self.exact)


def _em_terms(model: ToeplitzModel, beta: float):
    n, a = model.n, model.amplitude
    exact = float(np.exp(-beta * model.analytic_eigenvalues).sum())
    integral = math.exp(-2.0 * beta) * (n + 1) * bessel_i0(beta * a)
    endpoints = 0.5 * (math.exp(-beta * (2.0 + a)) + math.exp(-beta * (2.0 - a)))
    return exact, integral, endpoints


def euler_maclaurin_partition(model: ToeplitzModel, beta: float) -> EulerMaclaurinResult:
    """Bessel-function approximation of ``sum_k exp(-beta lambda_k)``.

    The sum over ``k = 0..n+1`` of ``g(k) = exp(-beta (2 - a cos(k pi/(n+1))))``
    is replaced by its integral plus the trapezoidal end corrections, and the
    two boundary terms ``k = 0, n+1`` are removed again. The first-derivative
    correction ``(g'(n+1) - g'(0)) / 12`` is added for ``endpoint_corrected``;
    it vanishes analytically because ``g`` is even about both endpoints.
    """
    exact, integral, endpoints = _em_terms(model, beta)
    approx = integral - endpoints
    n1, a = model.n + 1, model.amplitude

    def dg(k):
        arg = k * math.pi / n1
        return -beta * a * (math.pi / n1) * math.sin(arg) * math.exp(-beta * (2.0 - a * math.cos(arg)))

    corrected = approx + (dg(n1) - dg(0.0)) / 12.0
    return EulerMaclaurinResult(approx=approx, exact=exact, endpoint_corrected=corrected)


def euler_maclaurin_error_mp(model: ToeplitzModel, beta: float, digits: int | None = None):
    """Relative error of the Bessel approximation as an ``mpmath.mpf``.

    The trapezoidal rule is exponentially accurate for this periodic
    integrand, so the error sits far below double roundoff (and, for large
    n, below the smallest double); the working precision is raised from an
    a-priori estimate of its size.
    """
    import mpmath

    n1, a = model.n + 1, model.amplitude
    x = abs(beta) * a
    if digits is None:
        # aliasing error ~ 2 (n+1) I_{2(n+1)}(x) relative to I_0(x)
        order = 2 * n1
        log10_err = (order * math.log10(max(x, 1e-300) / 2.0) - math.lgamma(order + 1) / math.log(10)) if x > 0 else -400.0
        digits = int(max(30, -log10_err + 30))
    with mpmath.workdps(digits):
        b = mpmath.mpf(beta)
        amp = 2 * mpmath.sqrt(1 - mpmath.mpf(model.d) ** 2)
        exact = mpmath.fsum(mpmath.exp(-b * (2 - amp * mpmath.cos(k * mpmath.pi / n1))) for k in range(1, n1))
        approx = mpmath.exp(-2 * b) * n1 * mpmath.besseli(0, b * amp) - (
            mpmath.exp(-b * (2 + amp)) + mpmath.exp(-b * (2 - amp))
        ) / 2
        return +(abs(approx - exact) / exact)


def _second_derivative(f: Callable[[float], float], step: float = 1e-4) -> Callable[[float], float]:
    return lambda x: (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step)


def _first_derivative(f: Callable[[float], float], step: float = 1e-5) -> Callable[[float], float]:
    return lambda x: (f(x + step) - f(x - step)) / (2.0 * step)


def bernoulli_b2(x):
    return x * x - x + 1.0 / 6.0


def euler_maclaurin_remainder(
    f: Callable[[float], float],
    n: int,
    d2f: Callable[[float], float] | None = None,
    lower: float = 0.0,
    rtol: float = 1e-12,
    max_subdivisions: int = 100,
) -> float:
    """``-(1/2n) int_lower^1 B_2({n x}) f''(x) dx``.

    Integrated period by period, where ``B_2({n x})`` is smooth, with
    adaptive Gauss-Kronrod (21 nodes per period at minimum).
    ``lower = 0`` gives the exact remainder of the second-order formula;
    ``lower = 1/n`` drops the first period.
    """
    if n < 1:
        raise InvalidParameter("n must be a positive integer")
    d2f = d2f or _second_derivative(f)
    breaks = np.arange(n + 1) / n
    breaks = np.unique(np.concatenate([[lower], breaks[breaks > lower]]))
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        j = math.floor(lo * n + 1e-12)

        def integrand(x, j=j):
            return bernoulli_b2(n * x - j) * d2f(x)

        out = integrate.quad(integrand, lo, hi, epsabs=1e-15, epsrel=rtol, limit=max_subdivisions, full_output=1)
        val, err = out[:2]
        budget_hit = len(out) > 3 and "subdivisions" in str(out[3])
        if budget_hit or err > max(1e-10, 1e-8 * abs(val)):
            raise QuadratureFailure(f"quadrature on [{lo}, {hi}] did not converge (error {err:.2e})")
        total += val
    return -total / (2.0 * n)


def euler_maclaurin_identity(
    f: Callable[[float], float],
    n: int,
    integral: float | None = None,
    df: Callable[[float], float] | None = None,
    d2f: Callable[[float], float] | None = None,
    lower: float = 0.0,
) -> tuple[float, float]:
    """Both sides of the remainder identity: ``(lhs - explicit terms, R_n)``."""
    df = df or _first_derivative(f)
    if integral is None:
        integral = integrate.quad(f, 0.0, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200)[0]
    lhs = math.fsum(f(k / n) for k in range(1, n + 1))
    explicit = n * integral + 0.5 * (f(1.0) - f(0.0)) + (df(1.0) - df(0.0)) / (12.0 * n)
    return lhs - explicit, euler_maclaurin_remainder(f, n, d2f=d2f, lower=lower)


@dataclass(frozen=True)
class SweepRow:
    d: float
    beta: float
    log_z_exact: float
    log_z_em_approx: float
    rel_error: float
    mean_h: float
    entropy: float


def toeplitz_sweep(n: int, d: float, betas) -> list[SweepRow]:
    """Single-charge thermodynamics of the Toeplitz model over a beta grid.

    ``log_z_exact`` sums over the analytic spectrum; mean energy and entropy
    come from the Gibbs state of the numerically diagonalized pair.
    """
    from .gibbs import gibbs_state

    model, pair = toeplitz_model(n, d)
    rows = []
    for beta in betas:
        beta = float(beta)
        em = euler_maclaurin_partition(model, beta)
        st = gibbs_state(pair, beta, 0.0)
        rows.append(
            SweepRow(
                d=model.d,
                beta=beta,
                log_z_exact=math.log(em.exact),
                log_z_em_approx=math.log(em.endpoint_corrected) if em.endpoint_corrected > 0 else math.nan,
                rel_error=em.rel_error,
                mean_h=st.mean_h,
                entropy=st.entropy,
            )
        )
    return rows


def second_differences(y, x=None) -> np.ndarray:
    """Second differences of ``y``; divided differences when ``x`` is given.

    For a non-uniform ``x`` the result is ``2 [x0, x1, x2] y``, which is the
    second derivative for a quadratic and keeps the sign test meaningful.
    """
    y = np.asarray(y, dtype=float)
    if x is None:
        return y[2:] - 2.0 * y[1:-1] + y[:-2]
    x = np.asarray(x, dtype=float)
    order = np.argsort(x)
    x, y = x[order], y[order]
    slopes = np.diff(y) / np.diff(x)
    return 2.0 * np.diff(slopes) / (x[2:] - x[:-2])


@dataclass(frozen=True)
class ShapeCertificate:
    d: float
    min_log_z_second_difference: float
    max_entropy_second_difference: float
    tol: float

    @property
    def log_z_convex(self) -> bool:
        return self.min_log_z_second_difference >= -self.tol

    @property
    def entropy_concave(self) -> bool:
        return self.max_entropy_second_difference <= self.tol


def shape_certificate(rows: list[SweepRow], tol: float = 1e-9) -> ShapeCertificate:
    """Convexity of ``log Z(beta)`` and concavity of entropy against mean energy.

    ``rows`` must come from one uniform beta grid.
    """
    log_z = second_differences([r.log_z_exact for r in rows])
    ent = second_differences([r.entropy for r in rows], [r.mean_h for r in rows])
    return ShapeCertificate(
        d=rows[0].d,
        min_log_z_second_difference=float(log_z.min()),
        max_entropy_second_difference=float(ent.max()),
        tol=tol,
    )

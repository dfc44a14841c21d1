"""Thermodynamics of commuting pseudo-Hermitian observables.

Biorthogonal eigensystems and metric operators, two-charge Gibbs states,
maximum-entropy inference of the Lagrange multipliers, joint-spectrum
geometry and the tridiagonal Toeplitz benchmark family.
"""

from .errors import *  # noqa: F401,F403
from .geometry import (
    HullPolygon,
    Membership,
    convex_hull,
    hull_membership,
    joint_hull,
    metric_numerical_range_boundary,
    numerical_range_boundary,
)
from .gibbs import (
    GibbsState,
    ObservablePair,
    compose_n,
    covariance_hessian,
    entropy_of_state,
    free_energy,
    gibbs_state,
    log_partition,
    observable_pair,
    theorem1_gap,
)
from .linalg import BiorthogonalEigensystem, biorthogonalize, eig_general, kron_sum, spectral_apply
from .maxent import (
    SolverConfig,
    ThermalTarget,
    forward_map,
    gamma_beta0,
    gamma_theta,
    infer,
    infer_by_intersection,
)
from .matrixio import read_matrix, write_matrix
from .metric import MetricOperator, build_metric, d_inner, pseudo_hermiticity_residual, to_hermitian
from .models import ToeplitzModel, bessel_i0, euler_maclaurin_partition, example1, toeplitz_model

__version__ = "0.1.0"

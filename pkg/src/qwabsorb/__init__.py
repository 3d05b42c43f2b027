"""
Absorption probabilities of a two-state discrete-time quantum walk on the
line segment [-N, N] with sinks at both ends.

Three independent routes to the left/right absorption probabilities are
provided: direct simulation (:mod:`qwabsorb.simulator`), finite-N quadrature
of the generating-function integrals (:mod:`qwabsorb.exact`) and the large-N
closed forms (:mod:`qwabsorb.asymptotics`).  :mod:`qwabsorb.analysis` studies
how fast the finite-N values approach the limit.
"""

from .analysis import (
    ConvergenceSeries,
    FitResult,
    SlopePoint,
    SweepRow,
    convergence_series,
    fit_exponential,
    parameter_sweep,
    slope_sweep,
)
from .asymptotics import (
    AsymptoticResult,
    coefficients_asymptotic,
    integral_I_closed,
    integral_I_numeric,
    pl_pr_asymptotic,
)
from .core import (
    CoinAmplitudes,
    EigenbasisCoords,
    U2CoinParams,
    coin_eigenvectors,
    coin_matrix,
    eigen_to_standard,
    initial_amplitudes,
    reduce_u2_coin,
    standard_to_eigen,
)
from .errors import (
    InsufficientPointsError,
    NonConvergenceError,
    QWAbsorbError,
    SingularDenominatorError,
    ToleranceNotMetError,
)
from .exact import (
    CoefficientTriple,
    absorption_from_coefficients,
    coefficients_exact,
    coefficients_reformulated,
    lambda_pm,
    p_r_functions,
)
from .quadrature import QuadratureSpec
from .simulator import (
    AbsorptionTrace,
    TerminationSpec,
    WalkConfig,
    WalkState,
    enumerate_paths_oracle,
    run_walk,
    simulate_absorption,
)

__version__ = "0.1.0"

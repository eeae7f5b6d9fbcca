"""Spectral compression of high-order information signals.

The library estimates joint distributions from discrete or continuous data,
computes multivariate information measures (total correlation, dual total
correlation, and their signed difference and sum) over every variable subset,
arranges them as signals on the standard simplex, and re-expresses those
signals in the eigenbasis of weighted simplex Laplace operators. Cumulative
explained-variance reports quantify how much the change of basis concentrates
each signal, with random-basis and rank-controlled synthetic controls.
"""

from .distribution import (
    ContinuousSeriesTable,
    DiscreteSeriesTable,
    GaussianModel,
    JointDistribution,
    copula_gaussian_fit,
    entropy,
    estimate_empirical,
    gaussian_subset_entropy,
    marginalize,
    read_continuous_csv,
    read_discrete_csv,
)
from .errors import CapacityError, EstimationError, NumericalError, ValidationError
from .infotheory import (
    EntropyOracle,
    MeasureKind,
    dual_total_correlation,
    interaction_information,
    mutual_information,
    o_information,
    s_information,
    signal_sweep,
    total_correlation,
)
from .simplices import (
    SimilarityMetric,
    StructuralSimplex,
    WeightAggregator,
    boundary_matrix,
    enumerate_simplices,
    similarity_matrix,
    simplex_count,
    simplex_rank,
    simplex_unrank,
    structural_weights,
)
from .spectral import (
    FourierBasis,
    LaplaceOperator,
    WeightedInnerProduct,
    adjoint_matrix,
    fourier_basis,
    kernel_dimension,
    laplacian,
    weighted_inner_product,
)
from .synth import (
    RankedCovariance,
    random_rank_covariance,
    rank_experiment,
    sample_gaussian,
)
from .transform import (
    CevReport,
    ControlComparison,
    HighOrderSignal,
    build_signal,
    cev_report,
    control_comparison,
    from_fourier,
    random_basis,
    to_fourier,
)
from .units import entropy_units, set_entropy_units

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "CevReport",
    "ContinuousSeriesTable",
    "ControlComparison",
    "DiscreteSeriesTable",
    "EntropyOracle",
    "EstimationError",
    "FourierBasis",
    "GaussianModel",
    "HighOrderSignal",
    "JointDistribution",
    "LaplaceOperator",
    "MeasureKind",
    "NumericalError",
    "RankedCovariance",
    "SimilarityMetric",
    "StructuralSimplex",
    "ValidationError",
    "WeightAggregator",
    "WeightedInnerProduct",
    "adjoint_matrix",
    "boundary_matrix",
    "build_signal",
    "cev_report",
    "control_comparison",
    "copula_gaussian_fit",
    "dual_total_correlation",
    "entropy",
    "entropy_units",
    "enumerate_simplices",
    "estimate_empirical",
    "fourier_basis",
    "from_fourier",
    "gaussian_subset_entropy",
    "interaction_information",
    "kernel_dimension",
    "laplacian",
    "marginalize",
    "mutual_information",
    "o_information",
    "random_basis",
    "random_rank_covariance",
    "rank_experiment",
    "read_continuous_csv",
    "read_discrete_csv",
    "s_information",
    "sample_gaussian",
    "set_entropy_units",
    "signal_sweep",
    "similarity_matrix",
    "simplex_count",
    "simplex_rank",
    "simplex_unrank",
    "structural_weights",
    "to_fourier",
    "total_correlation",
    "weighted_inner_product",
]

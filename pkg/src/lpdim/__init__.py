"""lp norms and quasinorms, distance concentration, intrinsic dimension
estimation, and statistical comparison of lp-based kNN classifiers."""

from .metrics import (
    CANONICAL_EXPONENTS,
    DistanceSummary,
    lp_distance,
    lp_functional,
    pairwise_distance_matrix,
    pairwise_summary,
)
from .dataset import (
    DatasetError,
    DatasetManifest,
    LabeledDataset,
    PREPROCESS_MODES,
    duplicate_attributes,
    gen_uniform_cube,
    load_csv,
    load_manifest,
    prefix_dims,
    preprocess,
)
from .concentration import (
    ConcentrationRecord,
    DegenerateDatasetError,
    concentration_sweep,
    cv_from_summary,
    mean_point_rc,
    point_rc,
    rc_comparison_experiment,
    rc_from_summary,
)
from .spectral import SpectralSummary, covariance, fve, sym_eigen
from .dimension import (
    BoxCountCurve,
    DimensionConfig,
    DimensionReport,
    box_count,
    broken_stick_thresholds,
    estimate_all,
    fractal_dimension,
    pca_broken_stick,
    pca_condition_number,
    pca_kaiser,
    pearson_correlation_matrix,
    separability_dimension,
    separability_fraction,
    slope_through_origin,
)
from .knn import KnnConfig, QualityRecord, evaluate_grid, knn_indices, loo_evaluate
from .stats import (
    FrequencyReport,
    QualityCell,
    RankMatrix,
    TestOutcome,
    adaptive_alpha,
    chi2_sf,
    frequency_report,
    friedman_test,
    nemenyi_cd,
    normal_cdf,
    proportion_z_test,
    tied_ranks,
    wilcoxon_signed_rank,
)

__version__ = "0.1.0"

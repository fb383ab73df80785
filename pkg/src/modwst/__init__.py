"""Scattering features from the maximal overlap discrete wavelet transform."""

__version__ = "0.1.0"

from .filters import (
    WaveletFilter,
    ModwtFilter,
    ValidationReport,
    builtin_filter,
    load_filter,
    make_filter,
    modwt_rescale,
    scaling_from_wavelet,
    validate_filter,
    wavelet_from_scaling,
)
from .transforms import (
    DwtCoefficients,
    ModwtCoefficients,
    dwt,
    dwt_matrix,
    energy_decomposition,
    modwt,
)
from .scattering import (
    AveragingFilter,
    ScatteringCoefficients,
    ScatteringConfig,
    coefficient_count,
    config_from_json,
    config_to_json,
    enumerate_paths,
    flatten,
    flatten_labels,
    local_average,
    modulus_tree,
    modwst,
    path_energy,
    uniform_averaging_filter,
)
from .simulate import LabeledDataset, ProcessSpec, PROCESSES, benchmark_suite, simulate
from .classify import (
    ConfusionMatrix,
    EvalReport,
    FeatureMatrix,
    Preprocessor,
    apply_preprocessor,
    evaluate,
    fit_preprocessor,
    stratified_split,
    train_centroid,
    train_gnb,
    train_lda,
    train_linear_svm,
)

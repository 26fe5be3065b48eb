"""Parabolic Higgs bundles and meromorphic connections on the sphere:
singularity data, the Nahm transform on that data, explicit rational field
realizations, and numerical verification of the structural identities.
"""

from .moduli import (
    ConnectionData,
    DataError,
    HiggsData,
    InfinityGroup,
    LogPoint,
    WeightedEigen,
    check_connection_hypothesis,
    check_hypothesis,
    connection_to_higgs,
    critical_weight_zero,
    higgs_to_connection,
    parabolic_degree,
    random_connection_data,
    random_higgs_data,
    realizability_checks,
    slope,
    transformability_check,
)
from .fields import (
    ExplicitHiggsField,
    LocalForm,
    WeightAnnotation,
    deform_field,
    extract_data,
    gauge_relation_check,
    local_models_at,
    model_field,
    random_field,
)
from .spectral import (
    BranchPath,
    NonGenericError,
    SpectralError,
    SpectralSample,
    char_poly_at,
    fit_infinity_asymptotics,
    fit_puncture_asymptotics,
    reducedness_probe,
    spectral_points,
    track_branches,
    transformed_eigenvalue_samples,
)
from .nahm import (
    TransformError,
    TransformReport,
    connection_transform,
    data_match,
    dictionary_consistency_report,
    extension_bookkeeping,
    higgs_transform,
    inverse_transform,
    involution_check,
    pullback_minus,
    transform,
    transform_report,
)
from .serialize import SpecError, data_from_dict, data_to_dict

__version__ = "0.1.0"

__all__ = [
    "BranchPath",
    "ConnectionData",
    "DataError",
    "ExplicitHiggsField",
    "HiggsData",
    "InfinityGroup",
    "LocalForm",
    "LogPoint",
    "NonGenericError",
    "SpecError",
    "SpectralError",
    "SpectralSample",
    "TransformError",
    "TransformReport",
    "WeightAnnotation",
    "WeightedEigen",
    "char_poly_at",
    "check_connection_hypothesis",
    "check_hypothesis",
    "connection_to_higgs",
    "connection_transform",
    "critical_weight_zero",
    "data_from_dict",
    "data_match",
    "data_to_dict",
    "deform_field",
    "dictionary_consistency_report",
    "extension_bookkeeping",
    "extract_data",
    "fit_infinity_asymptotics",
    "fit_puncture_asymptotics",
    "gauge_relation_check",
    "higgs_to_connection",
    "higgs_transform",
    "inverse_transform",
    "involution_check",
    "local_models_at",
    "model_field",
    "parabolic_degree",
    "pullback_minus",
    "random_connection_data",
    "random_field",
    "random_higgs_data",
    "realizability_checks",
    "reducedness_probe",
    "slope",
    "spectral_points",
    "track_branches",
    "transform",
    "transform_report",
    "transformability_check",
    "transformed_eigenvalue_samples",
]

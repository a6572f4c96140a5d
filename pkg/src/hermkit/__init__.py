"""Chart-local numerical differential geometry: almost Hermitian structures,
tension fields and harmonic-morphism-style verification scenarios."""

from .errors import (ConfigError, CriticalPoint, DimensionMismatch, DslError,
                     DslSyntaxError, EvaluationError, EvaluationOutsideDomain,
                     FibreDimension, GeometryError, MissingStructure,
                     PreconditionFailed, RankDeficient, SingularMetric,
                     TargetDimensionTooSmall, TooManyExcludedSamples,
                     UnknownScenario, UnknownSymbol, WrongDimension)
from .hermitian import (AlmostComplexField, HermitianFrame, StructureReport,
                        classify_structure, divergence_J, hermitian_frame,
                        lee_vector, nabla_J, nijenhuis)
from .manifold import (Box, Chart, Christoffel, Embedding, SamplePlan, VectorField,
                       christoffel, covariant_derivative, embedded_pullbacks,
                       gradient, lie_bracket)
from .maps import (ConformalityData, MapSpec, TensionData, condition_ii_residual,
                   conformality, differential, fibre_mean_curvature,
                   holomorphy_residual, homothety_residual, lift_structure,
                   second_fundamental_form, superminimality_residual, tension)
from .numdiff import DiffConfig, FrameBasis, orthonormalize, partial, second_partial
from .scenarios import (CheckResult, VerificationReport, run_scenario,
                        scenario_description, scenario_ids)

__version__ = "0.1.0"

__all__ = [
    "AlmostComplexField", "Box", "Chart", "CheckResult", "Christoffel",
    "ConfigError", "ConformalityData", "CriticalPoint", "DiffConfig",
    "DimensionMismatch", "DslError", "DslSyntaxError", "Embedding",
    "EvaluationError", "EvaluationOutsideDomain", "FibreDimension", "FrameBasis",
    "GeometryError", "HermitianFrame", "MapSpec", "MissingStructure",
    "PreconditionFailed", "RankDeficient", "SamplePlan", "SingularMetric",
    "StructureReport", "TargetDimensionTooSmall", "TensionData",
    "TooManyExcludedSamples", "UnknownScenario", "UnknownSymbol",
    "VectorField", "VerificationReport", "WrongDimension",
    "christoffel", "classify_structure", "condition_ii_residual", "conformality",
    "covariant_derivative", "differential", "divergence_J", "embedded_pullbacks",
    "fibre_mean_curvature", "gradient", "hermitian_frame", "holomorphy_residual",
    "homothety_residual", "lee_vector", "lie_bracket", "lift_structure",
    "nabla_J", "nijenhuis", "orthonormalize", "partial", "run_scenario",
    "scenario_description", "scenario_ids", "second_fundamental_form",
    "second_partial", "superminimality_residual", "tension",
]

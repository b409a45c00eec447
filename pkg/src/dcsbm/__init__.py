"""Spectral community detection on degree-corrected stochastic block models.

The central object is the degree-normalized adjacency matrix (entries
A_uv / (Dhat_u Dhat_v)), which concentrates around a low-rank population
matrix whose eigenvectors are constant on communities. The package bundles
the model sampler, the detection pipeline, population-matrix oracles,
baseline methods and an empirical verification harness.
"""

from ._core import IMPLEMENTATION as kernel_implementation
from .detect import (
    Clustering,
    DetectConfig,
    Embedding,
    Regime,
    detect_communities,
    detect_with_known_L,
)
from .eigen import EigenSystem, alignment_report, eigen_gap, eigs_topk, spectral_radius
from .metrics import concentration_report, misclassification, random_walk_checks
from .model import (
    DcsbmParams,
    Graph,
    ModelError,
    aggregates,
    edge_probability,
    expected_degree,
    identifiability_check,
    reparameterize_equivalent,
    sample_graph,
    validate,
)
from .spectra import (
    SymMatrix,
    adjacency,
    block_matrix_Z,
    expected_model_normalized,
    inflated_normalized_adjacency,
    laplacian,
    lift_Z_eigenvector,
    model_normalized,
    normalized_adjacency,
    population_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "Clustering",
    "DcsbmParams",
    "DetectConfig",
    "EigenSystem",
    "Embedding",
    "Graph",
    "ModelError",
    "Regime",
    "SymMatrix",
    "adjacency",
    "aggregates",
    "alignment_report",
    "block_matrix_Z",
    "concentration_report",
    "detect_communities",
    "detect_with_known_L",
    "edge_probability",
    "eigen_gap",
    "eigs_topk",
    "expected_degree",
    "expected_model_normalized",
    "identifiability_check",
    "inflated_normalized_adjacency",
    "kernel_implementation",
    "laplacian",
    "lift_Z_eigenvector",
    "misclassification",
    "model_normalized",
    "normalized_adjacency",
    "population_matrix",
    "random_walk_checks",
    "reparameterize_equivalent",
    "sample_graph",
    "spectral_radius",
    "validate",
]

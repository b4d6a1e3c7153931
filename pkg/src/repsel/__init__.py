"""repsel: representative selection for datasets with arbitrary dissimilarities.

Given any dataset equipped with a pairwise dissimilarity d(a, b) — not
necessarily symmetric, metric, or zero on the diagonal — repsel computes a
small representative subset such that every sample lies within a distance
threshold of some representative, and ships the baselines, exact
small-instance oracles, and the evaluation harness used to compare them.
"""

from repsel.core import (
    Dataset,
    DistanceContractError,
    DistanceOracle,
    NoCoverError,
    SampleId,
    nearest_representative,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DistanceContractError",
    "DistanceOracle",
    "NoCoverError",
    "SampleId",
    "nearest_representative",
    "__version__",
]

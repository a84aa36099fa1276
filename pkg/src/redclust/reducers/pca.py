"""Principal component analysis: fit, encode, reconstruct.

The basis holds the top eigenvectors of the sample covariance of the
centered data. The retained count comes either from a fixed ``k`` or from
the smallest count whose cumulative eigenvalue fraction reaches a variance
threshold.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateInputError, InvalidConfigError, InvalidInputError
from ..linalg import as_matrix, center, svd, sym_eig
from .base import ReducedDataset


@dataclass(frozen=True)
class PcaModel:
    """Fitted PCA state.

    basis: (original_dim, retained) orthonormal columns, leading axes first.
    mean: column means removed before fitting.
    eigenvalues: all original_dim covariance eigenvalues, descending.
    """

    basis: np.ndarray
    mean: np.ndarray
    eigenvalues: np.ndarray

    @property
    def retained(self):
        return self.basis.shape[1]

    @property
    def original_dim(self):
        return self.basis.shape[0]


def retained_for_threshold(eigenvalues, threshold):
    """Smallest component count whose cumulative eigenvalue fraction >= threshold."""
    total = float(np.sum(eigenvalues))
    if total <= 0.0:
        return 1
    fractions = np.cumsum(eigenvalues) / total
    return int(np.searchsorted(fractions, threshold - 1e-12) + 1)


def pca_fit(x, k=None, variance_threshold=None):
    """Fit a PcaModel choosing the retained count by exactly one criterion.

    Pass ``k`` for a fixed count or ``variance_threshold`` in (0, 1] for the
    cumulative-variance rule.
    """
    x = as_matrix(x, "pca input")
    n, d = x.shape
    if n < 2:
        raise DegenerateInputError("pca_fit needs at least 2 rows")
    if (k is None) == (variance_threshold is None):
        raise InvalidConfigError("specify exactly one of k or variance_threshold")
    if k is not None and not 1 <= k <= d:
        raise InvalidConfigError(f"k must be in [1, {d}], got {k}")
    if variance_threshold is not None and not 0.0 < variance_threshold <= 1.0:
        raise InvalidConfigError(
            f"variance_threshold must be in (0, 1], got {variance_threshold}"
        )

    centered, mean = center(x)
    cov = (centered.T @ centered) / (n - 1)
    pairs = sym_eig(cov)
    eigenvalues = np.maximum(pairs.values, 0.0)  # clamp eigen-noise below zero

    if k is None:
        k = min(retained_for_threshold(eigenvalues, variance_threshold), d)
    return PcaModel(basis=pairs.vectors[:, :k].copy(), mean=mean, eigenvalues=eigenvalues)


def pca_encode(model, x):
    """Project rows onto the retained axes: (X - mean) @ basis."""
    x = as_matrix(x, "pca encode input")
    if x.shape[1] != model.original_dim:
        raise InvalidInputError(
            f"input has {x.shape[1]} columns, model expects {model.original_dim}"
        )
    return ReducedDataset(
        data=(x - model.mean) @ model.basis,
        reducer="pca",
        k=model.retained,
        original_dim=model.original_dim,
    )


def pca_reconstruct(model, reduced):
    """Map reduced coordinates back: Y @ basis^T + mean."""
    y = reduced.data if isinstance(reduced, ReducedDataset) else np.asarray(reduced, dtype=float)
    if y.ndim != 2 or y.shape[1] != model.retained:
        raise InvalidInputError(
            f"reduced data must have {model.retained} columns, got shape {y.shape}"
        )
    return y @ model.basis.T + model.mean


def svd_reduce(x, k):
    """Project rows onto the top-k right singular directions of the centered data.

    Returns U_k * S_k, which equals centered-X @ V_k; deterministic under
    the shared sign convention, so it matches pca_encode exactly (not just
    up to sign) on the same data.
    """
    x = as_matrix(x, "svd_reduce input")
    if not 1 <= k <= min(x.shape):
        raise InvalidConfigError(f"k must be in [1, {min(x.shape)}], got {k}")
    centered, _ = center(x)
    factors = svd(centered)
    return ReducedDataset(
        data=factors.u[:, :k] * factors.s[:k],
        reducer="svd",
        k=int(k),
        original_dim=x.shape[1],
    )

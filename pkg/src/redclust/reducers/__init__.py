"""The four dimension reducers behind one fit/transform contract."""

from .base import ReducedDataset
from .ica import IcaModel, fastica_fit, fastica_transform
from .pca import PcaModel, pca_encode, pca_fit, pca_reconstruct, retained_for_threshold, svd_reduce
from .som import SomGrid, quantization_error, som_encode, som_fit

__all__ = [
    "IcaModel",
    "PcaModel",
    "ReducedDataset",
    "SomGrid",
    "fastica_fit",
    "fastica_transform",
    "pca_encode",
    "pca_fit",
    "pca_reconstruct",
    "quantization_error",
    "retained_for_threshold",
    "som_encode",
    "som_fit",
    "svd_reduce",
]

"""Multi-class classification with binary codes and binary class weights."""

from .bitcore import (
    BitMatrix,
    BitVector,
    argmin_hamming,
    binary_inner_product,
    flip_bit,
    hamming_distance,
)
from .dataset import Dataset, Preprocessor, load_csv, load_libsvm, split
from .hashfn import Model, encode, fit_projection, predict
from .pipeline import train_model

__all__ = [
    "BitMatrix",
    "BitVector",
    "Dataset",
    "Model",
    "Preprocessor",
    "argmin_hamming",
    "binary_inner_product",
    "encode",
    "fit_projection",
    "flip_bit",
    "hamming_distance",
    "load_csv",
    "load_libsvm",
    "predict",
    "split",
    "train_model",
]

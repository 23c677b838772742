"""Aspect-level sentiment classification.

Thin wrapper over the compiled extension; see the module docstrings there.
"""

from ._acnn import (
    Classifier,
    ConfigError,
    DataError,
    NumericError,
    __version__,
    accuracy,
    atten_emb1,
    atten_emb2,
    attention_weights,
    clean_tokens,
    cosine,
    grad_check,
    macro_f1,
    parse_dataset,
    preprocess,
    train,
)

__all__ = [
    "Classifier",
    "ConfigError",
    "DataError",
    "NumericError",
    "__version__",
    "accuracy",
    "atten_emb1",
    "atten_emb2",
    "attention_weights",
    "clean_tokens",
    "cosine",
    "grad_check",
    "macro_f1",
    "parse_dataset",
    "preprocess",
    "train",
]

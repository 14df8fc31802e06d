"""Tense, aspect and modality classifiers for Japanese sentences."""

from ._core import (
    ArgumentError,
    ConfigError,
    Dataset,
    DescriptorError,
    EncodingError,
    Error,
    Example,
    IoError,
    Model,
    ModelError,
    ParseError,
    TrainingError,
    category_distribution,
    cross_validate,
    load_model,
    parse_corpus,
    read_corpus,
    serialize_corpus,
    sign_test,
    synthetic,
    train,
    write_corpus,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Sparse ADtree: cached counts and contingency tables for categorical data."""

from ._core import (
    ADTree,
    AdtreeError,
    ArgumentError,
    ConfigError,
    Dataset,
    FormatError,
    IntegrityError,
    QueryError,
    SizeError,
    linear_contab,
    linear_count,
    load_csv,
    memory_bounds,
    parse_csv,
    synth,
)

__all__ = [
    "ADTree",
    "AdtreeError",
    "ArgumentError",
    "ConfigError",
    "Dataset",
    "FormatError",
    "IntegrityError",
    "QueryError",
    "SizeError",
    "linear_contab",
    "linear_count",
    "load_csv",
    "memory_bounds",
    "parse_csv",
    "synth",
]

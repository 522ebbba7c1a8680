"""Paired code/narrative reasoning benchmarks with an execution oracle."""

__version__ = "0.1.0"

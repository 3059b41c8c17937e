"""Directed degree-heterogeneity network model with covariates."""

from ._core import (
    fit,
    log_likelihood,
    normal_quantile,
    sample,
    simulate,
)

__all__ = ["fit", "log_likelihood", "normal_quantile", "sample", "simulate"]

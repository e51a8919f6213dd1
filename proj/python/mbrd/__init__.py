"""Metric-aware decoding for sampled model outputs."""

from ._mbrd import (
    Target,
    alpha_from_temps,
    bayes_optimal,
    bipartite_score,
    empirical_entropy,
    expected_utility,
    mbr_decode,
    multipartite_auc,
    multipartite_score,
    parse_target,
    pointwise_metric,
    sample_argmax,
    weighted_mean,
    weighted_median,
)

__all__ = [
    "Target",
    "alpha_from_temps",
    "bayes_optimal",
    "bipartite_score",
    "empirical_entropy",
    "expected_utility",
    "mbr_decode",
    "multipartite_auc",
    "multipartite_score",
    "parse_target",
    "pointwise_metric",
    "sample_argmax",
    "weighted_mean",
    "weighted_median",
]

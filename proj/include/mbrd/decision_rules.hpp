#pragma once

// Closed-form decision rules over sampled responses: weighted argmax,
// mean, median, and ranking scores, with post-hoc temperature scaling.

#include <span>
#include <string>

#include "mbrd/core_types.hpp"

namespace mbrd {

enum class RuleKind {
    GreedyMode,
    SampleArgmax,
    WeightedMean,
    WeightedMedian,
    BipartitePositiveMass,
    MultipartiteMean,
};

std::string rule_kind_name(RuleKind kind);
std::optional<RuleKind> rule_kind_from_name(const std::string& name);

// A numeric rule output; fallback is set when no usable sample existed
// and the configured default was returned instead.
struct NumericResult {
    double value = 0.0;
    bool fallback = false;
};

// alpha = T / T' - 1 for sampling temperature T and effective temperature T'.
double alpha_from_temps(double sampling_temp, double effective_temp);

// Target of the sample with the largest probability; ties break to the
// earliest index.
Target sample_argmax(std::span<const SampledResponse> samples);

// Self-normalized weighted mean sum(w_i * y_i) / sum(w_i) with w_i = p_i^alpha.
// Non-numeric samples are dropped; if none remain the default value is
// returned with the fallback flag set.
NumericResult weighted_mean(std::span<const SampledResponse> samples,
                            const RuleParams& params);

// Lower weighted median: smallest value whose cumulative normalized weight
// reaches 1/2.
NumericResult weighted_median(std::span<const SampledResponse> samples,
                              const RuleParams& params);

// Weighted fraction of positive samples; targets must parse to binary
// labels ({-1,+1} or {0,1}).
NumericResult bipartite_score(std::span<const SampledResponse> samples,
                              const RuleParams& params);

// Expected-label scorer for multi-partite ranking; same estimator as
// weighted_mean.
NumericResult multipartite_score(std::span<const SampledResponse> samples,
                                 const RuleParams& params);

// Dispatches to the rule implementations; numeric results are wrapped as
// targets with canonical serialization.
Target apply_rule(RuleKind kind, std::span<const SampledResponse> samples,
                  const RuleParams& params);

}  // namespace mbrd

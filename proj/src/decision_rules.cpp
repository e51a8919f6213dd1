#include "mbrd/decision_rules.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mbrd {

std::string rule_kind_name(RuleKind kind) {
    switch (kind) {
        case RuleKind::GreedyMode: return "greedy";
        case RuleKind::SampleArgmax: return "argmax";
        case RuleKind::WeightedMean: return "mean";
        case RuleKind::WeightedMedian: return "median";
        case RuleKind::BipartitePositiveMass: return "bipartite";
        case RuleKind::MultipartiteMean: return "multipartite";
    }
    return "unknown";
}

std::optional<RuleKind> rule_kind_from_name(const std::string& name) {
    if (name == "greedy") return RuleKind::GreedyMode;
    if (name == "argmax") return RuleKind::SampleArgmax;
    if (name == "mean") return RuleKind::WeightedMean;
    if (name == "median") return RuleKind::WeightedMedian;
    if (name == "bipartite") return RuleKind::BipartitePositiveMass;
    if (name == "multipartite") return RuleKind::MultipartiteMean;
    return std::nullopt;
}

double alpha_from_temps(double sampling_temp, double effective_temp) {
    if (!(sampling_temp > 0.0) || !(effective_temp > 0.0)) {
        throw std::invalid_argument("temperatures must be strictly positive");
    }
    return sampling_temp / effective_temp - 1.0;
}

Target sample_argmax(std::span<const SampledResponse> samples) {
    if (samples.empty()) throw std::invalid_argument("argmax over empty sample list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].log_prob > samples[best].log_prob) best = i;
    }
    return samples[best].target;
}

namespace {

double weight_of(const SampledResponse& s, double alpha) {
    return std::exp(alpha * s.log_prob);
}

}  // namespace

NumericResult weighted_mean(std::span<const SampledResponse> samples,
                            const RuleParams& params) {
    double wsum = 0.0, wysum = 0.0;
    for (const auto& s : samples) {
        if (!s.target.is_numeric()) continue;
        double w = weight_of(s, params.alpha);
        wsum += w;
        wysum += w * (*s.target.numeric);
    }
    if (wsum <= 0.0) return {params.default_value, true};
    return {wysum / wsum, false};
}

NumericResult weighted_median(std::span<const SampledResponse> samples,
                              const RuleParams& params) {
    std::vector<std::pair<double, double>> items;  // (value, weight)
    double wsum = 0.0;
    for (const auto& s : samples) {
        if (!s.target.is_numeric()) continue;
        double w = weight_of(s, params.alpha);
        items.emplace_back(*s.target.numeric, w);
        wsum += w;
    }
    if (items.empty() || wsum <= 0.0) return {params.default_value, true};
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double cum = 0.0;
    for (const auto& [value, w] : items) {
        cum += w;
        if (cum >= 0.5 * wsum - 1e-12 * wsum) return {value, false};
    }
    return {items.back().first, false};
}

NumericResult bipartite_score(std::span<const SampledResponse> samples,
                              const RuleParams& params) {
    double wsum = 0.0, wpos = 0.0;
    for (const auto& s : samples) {
        if (!s.target.is_numeric()) continue;
        double v = *s.target.numeric;
        bool positive;
        if (v == 1.0) positive = true;
        else if (v == -1.0 || v == 0.0) positive = false;
        else continue;  // not a binary label
        double w = weight_of(s, params.alpha);
        wsum += w;
        if (positive) wpos += w;
    }
    if (wsum <= 0.0) return {params.default_value, true};
    return {wpos / wsum, false};
}

NumericResult multipartite_score(std::span<const SampledResponse> samples,
                                 const RuleParams& params) {
    return weighted_mean(samples, params);
}

namespace {

Target numeric_target(double v) { return Target{format_double(v), v}; }

}  // namespace

Target apply_rule(RuleKind kind, std::span<const SampledResponse> samples,
                  const RuleParams& params) {
    if (samples.empty()) throw std::invalid_argument("apply_rule on empty sample list");
    switch (kind) {
        case RuleKind::GreedyMode:
        case RuleKind::SampleArgmax:
            // On replayed samples the greedy baseline is approximated by the
            // highest-probability sample.
            return sample_argmax(samples);
        case RuleKind::WeightedMean:
            return numeric_target(weighted_mean(samples, params).value);
        case RuleKind::WeightedMedian:
            return numeric_target(weighted_median(samples, params).value);
        case RuleKind::BipartitePositiveMass:
            return numeric_target(bipartite_score(samples, params).value);
        case RuleKind::MultipartiteMean:
            return numeric_target(multipartite_score(samples, params).value);
    }
    throw std::invalid_argument("unknown rule kind");
}

}  // namespace mbrd

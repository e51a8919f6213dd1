#pragma once

// Dataset-level evaluation: regression errors, exact match, token F1,
// Pearson correlation, cost-weighted multi-partite AUC, empirical entropy.

#include <functional>
#include <span>

#include "mbrd/core_types.hpp"

namespace mbrd {

struct LabeledPrediction {
    Target label;
    Target prediction;
    std::optional<double> score;  // for ranking metrics
};

double rmse(std::span<const LabeledPrediction> items);
double mae(std::span<const LabeledPrediction> items);
double em_accuracy(std::span<const LabeledPrediction> items);
double mean_f1(std::span<const LabeledPrediction> items, const TokenizerConfig& cfg);
double pearson(std::span<const LabeledPrediction> items);

using PairCost = std::function<double(double, double)>;

// Cost of a mis-ranked pair as the label gap |y - y'|.
PairCost absolute_label_cost();
// Constant cost 1, recovering bipartite AUC on binary labels.
PairCost unit_cost();

// 1 - sum over label-ordered pairs of cost * (misrank + tie/2) / total cost.
double multipartite_auc(std::span<const LabeledPrediction> items, const PairCost& cost);

// Entropy (nats) of the empirical frequencies of distinct raw targets.
double empirical_entropy(std::span<const SampledResponse> samples);

}  // namespace mbrd

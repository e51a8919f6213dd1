#pragma once

// Simulated language model with explicit ground-truth conditional
// distributions. Supports temperature + top-k sampling that returns
// (target, probability) pairs, and fixed-grid enumeration scoring.

#include <cstdint>
#include <span>
#include <string>

#include "mbrd/core_types.hpp"

namespace mbrd {

struct SamplerConfig {
    double temperature = 1.0;
    std::size_t top_k = 0;  // 0 means unlimited
    std::uint64_t seed = 0;
    // When set, the reported probability is the unrestricted T=1 softmax
    // probability (as some model APIs report) instead of the probability in
    // the restricted, temperature-scaled distribution actually sampled from.
    bool report_base_probs = false;
};

// One simulated prediction task: per-input true distributions plus model
// logits over the same support. Setting the logits to log true
// probabilities makes the model perfectly calibrated.
class SyntheticTask {
public:
    struct Input {
        std::string id;
        PredictiveDistribution true_dist;
        std::vector<double> model_logits;  // same length as true_dist support
    };

    explicit SyntheticTask(std::vector<Input> inputs);

    std::size_t num_inputs() const { return inputs_.size(); }
    const Input& input(std::size_t idx) const;
    const Input* find(const std::string& id) const;

    // Model probabilities softmax(logits / T) over the full support.
    std::vector<double> model_probs(std::size_t idx, double temperature) const;

private:
    std::vector<Input> inputs_;
};

// Draws one target; the returned probability is the target's probability
// in the top-k-restricted, temperature-scaled distribution actually
// sampled from. Deterministic given (seed, input, draw_index).
SampledResponse generate(const SyntheticTask& task, std::size_t input_idx,
                         const SamplerConfig& cfg, std::uint64_t draw_index = 0);

std::vector<SampledResponse> generate_batch(const SyntheticTask& task,
                                            std::size_t input_idx, std::size_t k,
                                            const SamplerConfig& cfg);

// Scores a fixed grid of numeric targets: returns (grid value,
// temperature-scaled model probability) pairs, unnormalized over the grid.
// Grid values outside the support are dropped; an empty result is an error.
std::vector<SampledResponse> enumerate_grid(const SyntheticTask& task,
                                            std::size_t input_idx,
                                            std::span<const double> grid,
                                            double temperature);

// One ground-truth label per input, drawn from the true distributions.
std::vector<std::pair<std::size_t, Target>> sample_labels(const SyntheticTask& task,
                                                          std::uint64_t seed);

// JSON task file: per-input support, true probabilities, logits, plus
// global sampler defaults.
struct SyntheticTaskFile {
    SyntheticTask task;
    SamplerConfig sampler;
};

SyntheticTaskFile load_synthetic_task(const std::string& path);
SyntheticTaskFile parse_synthetic_task(const std::string& json_text);

}  // namespace mbrd

#include "mbrd/synthetic_lm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

namespace mbrd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t input, std::uint64_t draw) {
    return splitmix64(splitmix64(splitmix64(seed) ^ input) ^ draw);
}

std::vector<double> softmax(std::span<const double> logits, double temperature) {
    double max_logit = *std::max_element(logits.begin(), logits.end());
    std::vector<double> probs(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp((logits[i] - max_logit) / temperature);
        total += probs[i];
    }
    for (auto& p : probs) p /= total;
    return probs;
}

// Index drawn by inverse CDF over the given probabilities.
std::size_t draw_index(std::span<const double> probs, std::uint64_t stream_seed) {
    std::mt19937_64 rng(stream_seed);
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (u < cum) return i;
    }
    return probs.size() - 1;
}

}  // namespace

SyntheticTask::SyntheticTask(std::vector<Input> inputs) : inputs_(std::move(inputs)) {
    for (const auto& in : inputs_) {
        if (in.model_logits.size() != in.true_dist.size()) {
            throw std::invalid_argument("input " + in.id +
                                        ": logits and true distribution support differ");
        }
    }
}

const SyntheticTask::Input& SyntheticTask::input(std::size_t idx) const {
    if (idx >= inputs_.size()) throw std::out_of_range("invalid input index");
    return inputs_[idx];
}

const SyntheticTask::Input* SyntheticTask::find(const std::string& id) const {
    for (const auto& in : inputs_) {
        if (in.id == id) return &in;
    }
    return nullptr;
}

std::vector<double> SyntheticTask::model_probs(std::size_t idx, double temperature) const {
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
    return softmax(input(idx).model_logits, temperature);
}

SampledResponse generate(const SyntheticTask& task, std::size_t input_idx,
                         const SamplerConfig& cfg, std::uint64_t draw_index_value) {
    const auto& in = task.input(input_idx);
    if (!(cfg.temperature > 0.0)) throw std::invalid_argument("temperature must be positive");

    // Restrict to the top_k highest-logit targets (stable on ties).
    std::vector<std::size_t> order(in.model_logits.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return in.model_logits[a] > in.model_logits[b];
    });
    std::size_t k = cfg.top_k == 0 ? order.size() : std::min(cfg.top_k, order.size());
    order.resize(k);

    std::vector<double> restricted_logits(k);
    for (std::size_t i = 0; i < k; ++i) restricted_logits[i] = in.model_logits[order[i]];
    auto probs = softmax(restricted_logits, cfg.temperature);

    std::size_t pick = draw_index(probs, mix_stream(cfg.seed, input_idx, draw_index_value));
    double reported = probs[pick];
    if (cfg.report_base_probs) {
        reported = softmax(in.model_logits, 1.0)[order[pick]];
    }
    return SampledResponse::from_prob(in.true_dist.support()[order[pick]], reported);
}

std::vector<SampledResponse> generate_batch(const SyntheticTask& task,
                                            std::size_t input_idx, std::size_t k,
                                            const SamplerConfig& cfg) {
    if (k == 0) throw std::invalid_argument("batch size must be >= 1");
    std::vector<SampledResponse> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(generate(task, input_idx, cfg, i));
    return out;
}

std::vector<SampledResponse> enumerate_grid(const SyntheticTask& task,
                                            std::size_t input_idx,
                                            std::span<const double> grid,
                                            double temperature) {
    if (grid.empty()) throw std::invalid_argument("empty enumeration grid");
    const auto& in = task.input(input_idx);
    auto probs = task.model_probs(input_idx, temperature);

    std::vector<SampledResponse> out;
    for (double g : grid) {
        for (std::size_t i = 0; i < in.true_dist.size(); ++i) {
            const auto& t = in.true_dist.support()[i];
            if (t.is_numeric() && *t.numeric == g) {
                out.push_back(SampledResponse::from_prob(t, probs[i]));
                break;
            }
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("no grid value lies in the model support");
    }
    return out;
}

std::vector<std::pair<std::size_t, Target>> sample_labels(const SyntheticTask& task,
                                                          std::uint64_t seed) {
    std::vector<std::pair<std::size_t, Target>> labels;
    labels.reserve(task.num_inputs());
    for (std::size_t idx = 0; idx < task.num_inputs(); ++idx) {
        const auto& in = task.input(idx);
        std::size_t pick =
            draw_index(in.true_dist.probs(), mix_stream(seed ^ 0x5ab315UL, idx, 0));
        labels.emplace_back(idx, in.true_dist.support()[pick]);
    }
    return labels;
}

SyntheticTaskFile parse_synthetic_task(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);

    SamplerConfig sampler;
    if (j.contains("sampler")) {
        const auto& s = j.at("sampler");
        sampler.temperature = s.value("temperature", 1.0);
        sampler.top_k = s.value("top_k", std::size_t{0});
        sampler.seed = s.value("seed", std::uint64_t{0});
        sampler.report_base_probs = s.value("report_base_probs", false);
    }

    std::vector<SyntheticTask::Input> inputs;
    for (const auto& item : j.at("inputs")) {
        std::vector<Target> support;
        for (const auto& v : item.at("support")) {
            if (v.is_string()) support.push_back(parse_target(v.get<std::string>()));
            else support.push_back(parse_target(format_double(v.get<double>())));
        }
        auto true_probs = item.at("true_probs").get<std::vector<double>>();
        auto logits = item.at("logits").get<std::vector<double>>();
        inputs.push_back(SyntheticTask::Input{
            item.value("id", std::to_string(inputs.size())),
            PredictiveDistribution(std::move(support), std::move(true_probs)),
            std::move(logits)});
    }
    return SyntheticTaskFile{SyntheticTask(std::move(inputs)), sampler};
}

SyntheticTaskFile load_synthetic_task(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open task config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_synthetic_task(buf.str());
}

}  // namespace mbrd

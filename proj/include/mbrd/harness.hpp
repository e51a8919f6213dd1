#pragma once

// Experiment runner: JSONL replay of sampled model outputs, synthetic
// generation, rule/temperature/K sweeps, held-out temperature tuning, and
// report emission.

#include <cstdint>
#include <variant>

#include "mbrd/core_types.hpp"
#include "mbrd/decision_rules.hpp"
#include "mbrd/mbr.hpp"
#include "mbrd/synthetic_lm.hpp"

namespace mbrd {

// One evaluation instance: a label plus the K replayed samples.
struct SampleRecord {
    std::string id;
    Target label;
    std::vector<SampledResponse> samples;
    std::optional<std::string> input_text;
};

// JSONL format, one object per line:
// {"id": str, "input": str?, "label": str, "samples": [{"target": str, "logprob": float}]}
std::vector<SampleRecord> load_jsonl(const std::string& path);
SampleRecord parse_sample_record(const std::string& json_line, std::size_t line_number);
std::string sample_record_to_json(const SampleRecord& record);

// An MBR-based rule: maximize the given metric over the sampled candidate
// set, optionally augmented with pair concatenations.
struct MbrRuleSpec {
    MetricSpec metric;
    bool include_pairs = false;
};

struct RuleChoice {
    std::variant<RuleKind, MbrRuleSpec> spec;
    std::string name() const;
};

struct TuningConfig {
    std::vector<double> temp_grid = {0.25, 0.5, 0.75, 1.0, 2.5, 5.0, 7.5};
    double split_fraction = 1.0 / 3.0;
    std::size_t n_splits = 10;
    double confidence = 0.95;
};

struct ExperimentConfig {
    std::string dataset_name = "dataset";
    std::vector<RuleChoice> rules;
    std::vector<std::size_t> sample_counts = {16};  // K values
    double sampling_temp = 1.0;
    std::vector<double> effective_temps = {1.0};
    std::vector<std::string> metrics;  // rmse, mae, em, f1, pearson, auc
    std::uint64_t seed = 0;
    std::optional<std::pair<double, double>> clip_range;
    double default_value = 0.0;
    std::optional<TuningConfig> tuning;
};

struct ReportCell {
    std::string dataset;
    std::string rule;
    double effective_temp = 1.0;
    std::size_t k = 0;
    std::string metric;
    double value = 0.0;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::size_t fallback_count = 0;
    std::size_t sample_count = 0;  // records evaluated
};

struct ExperimentReport {
    std::vector<ReportCell> cells;
    double mean_empirical_entropy = 0.0;
};

// Decodes one record with one rule. GreedyMode replays the single
// highest-probability sample as the greedy stand-in.
Target decode_record(const SampleRecord& record, const RuleChoice& rule,
                     std::size_t k, double alpha, const ExperimentConfig& cfg,
                     bool* fallback = nullptr);

// Full sweep over rule x effective_temp x K. Deterministic given config
// and records.
ExperimentReport run_experiment(std::span<const SampleRecord> records,
                                const ExperimentConfig& cfg);

// Materializes records from a synthetic task: labels from the true
// distributions, samples drawn from the model at the sampling temperature.
std::vector<SampleRecord> synthesize_records(const SyntheticTask& task, std::size_t k,
                                             double sampling_temp, std::uint64_t seed,
                                             std::size_t top_k = 0);

struct TuningResult {
    std::vector<double> selected_temps;  // one per split
    std::vector<double> eval_values;     // held-out metric per split
    // record indices used per split; tuning and evaluation sets are disjoint
    std::vector<std::vector<std::size_t>> tune_indices;
    std::vector<std::vector<std::size_t>> eval_indices;
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::string metric;
};

// Held-out temperature tuning: per split, pick the grid temperature
// optimizing the target metric on the tuning fraction and evaluate on the
// rest; reports a normal-approximation confidence interval over splits.
TuningResult tune_temperature(std::span<const SampleRecord> records,
                              const ExperimentConfig& cfg);

enum class ReportFormat { Csv, Markdown };

// Stable column order: dataset, rule, effective_temp, K, metric, value,
// ci_low, ci_high, fallback_count.
std::string emit_report(const ExperimentReport& report, ReportFormat format);

// True when larger metric values are better (em, f1, pearson, auc).
bool metric_is_maximized(const std::string& metric);

}  // namespace mbrd

#include "mbrd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mbrd/eval_metrics.hpp"

namespace mbrd {

using nlohmann::json;

SampleRecord parse_sample_record(const std::string& json_line, std::size_t line_number) {
    json j;
    try {
        j = json::parse(json_line);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("line " + std::to_string(line_number) +
                                 ": malformed JSON: " + e.what());
    }
    auto fail = [&](const std::string& msg) -> std::runtime_error {
        return std::runtime_error("line " + std::to_string(line_number) + ": " + msg);
    };
    if (!j.contains("id")) throw fail("missing field \"id\"");
    if (!j.contains("label")) throw fail("missing field \"label\"");
    if (!j.contains("samples") || !j["samples"].is_array() || j["samples"].empty()) {
        throw fail("missing or empty \"samples\" array");
    }
    SampleRecord rec;
    rec.id = j["id"].get<std::string>();
    rec.label = parse_target(j["label"].get<std::string>());
    if (j.contains("input")) rec.input_text = j["input"].get<std::string>();
    for (const auto& s : j["samples"]) {
        if (!s.contains("target") || !s.contains("logprob")) {
            throw fail("sample missing \"target\" or \"logprob\"");
        }
        double lp = s["logprob"].get<double>();
        if (lp > 0.0) throw fail("logprob must be <= 0, got " + format_double(lp));
        rec.samples.push_back(
            SampledResponse::from_log_prob(parse_target(s["target"].get<std::string>()), lp));
    }
    return rec;
}

std::vector<SampleRecord> load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open JSONL file: " + path);
    std::vector<SampleRecord> records;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        records.push_back(parse_sample_record(line, line_number));
    }
    return records;
}

std::string sample_record_to_json(const SampleRecord& record) {
    json j;
    j["id"] = record.id;
    if (record.input_text) j["input"] = *record.input_text;
    j["label"] = record.label.raw;
    j["samples"] = json::array();
    for (const auto& s : record.samples) {
        j["samples"].push_back({{"target", s.target.raw}, {"logprob", s.log_prob}});
    }
    return j.dump();
}

std::string RuleChoice::name() const {
    if (const auto* kind = std::get_if<RuleKind>(&spec)) return rule_kind_name(*kind);
    const auto& m = std::get<MbrRuleSpec>(spec);
    std::string n = "mbr_" + metric_kind_name(m.metric.kind);
    if (m.include_pairs) n += "_pairs";
    return n;
}

bool metric_is_maximized(const std::string& metric) {
    return metric == "em" || metric == "f1" || metric == "pearson" || metric == "auc";
}

namespace {

double clip(double v, const std::optional<std::pair<double, double>>& range) {
    if (!range) return v;
    return std::clamp(v, range->first, range->second);
}

double evaluate_metric(const std::string& metric,
                       std::span<const LabeledPrediction> items) {
    if (metric == "rmse") return rmse(items);
    if (metric == "mae") return mae(items);
    if (metric == "em") return em_accuracy(items);
    if (metric == "f1") return mean_f1(items, TokenizerConfig{});
    if (metric == "pearson") return pearson(items);
    if (metric == "auc") return multipartite_auc(items, absolute_label_cost());
    throw std::invalid_argument("unknown dataset metric: " + metric);
}

double normal_quantile(double confidence) {
    // Two-sided z for the usual confidence levels; 0.95 is the default
    // protocol, others fall back to a rational approximation.
    if (std::abs(confidence - 0.95) < 1e-12) return 1.959963984540054;
    if (std::abs(confidence - 0.99) < 1e-12) return 2.5758293035489004;
    if (std::abs(confidence - 0.90) < 1e-12) return 1.6448536269514722;
    // Acklam-style approximation for the standard normal quantile.
    double p = 0.5 + confidence / 2.0;
    double t = std::sqrt(-2.0 * std::log(1.0 - p));
    return t - (2.30753 + 0.27061 * t) / (1.0 + 0.99229 * t + 0.04481 * t * t);
}

}  // namespace

Target decode_record(const SampleRecord& record, const RuleChoice& rule,
                     std::size_t k, double alpha, const ExperimentConfig& cfg,
                     bool* fallback) {
    if (record.samples.empty()) throw std::invalid_argument("record with no samples");
    std::size_t use = std::min(k, record.samples.size());
    std::span<const SampledResponse> samples(record.samples.data(), use);
    if (fallback) *fallback = false;

    Target result;
    if (const auto* kind = std::get_if<RuleKind>(&rule.spec)) {
        RuleParams params{alpha, cfg.default_value};
        switch (*kind) {
            case RuleKind::GreedyMode:
            case RuleKind::SampleArgmax:
                result = sample_argmax(samples);
                break;
            case RuleKind::WeightedMean: {
                auto r = weighted_mean(samples, params);
                if (fallback) *fallback = r.fallback;
                result = Target{format_double(r.value), r.value};
                break;
            }
            case RuleKind::WeightedMedian: {
                auto r = weighted_median(samples, params);
                if (fallback) *fallback = r.fallback;
                result = Target{format_double(r.value), r.value};
                break;
            }
            case RuleKind::BipartitePositiveMass: {
                auto r = bipartite_score(samples, params);
                if (fallback) *fallback = r.fallback;
                result = Target{format_double(r.value), r.value};
                break;
            }
            case RuleKind::MultipartiteMean: {
                auto r = multipartite_score(samples, params);
                if (fallback) *fallback = r.fallback;
                result = Target{format_double(r.value), r.value};
                break;
            }
        }
    } else {
        const auto& m = std::get<MbrRuleSpec>(rule.spec);
        auto candidates = build_candidates(samples, m.include_pairs, m.metric.tokenizer);
        result = mbr_decode(samples, candidates, m.metric, alpha).target;
    }

    if (result.is_numeric() && cfg.clip_range) {
        double v = clip(*result.numeric, cfg.clip_range);
        if (v != *result.numeric) result = Target{format_double(v), v};
    }
    return result;
}

ExperimentReport run_experiment(std::span<const SampleRecord> records,
                                const ExperimentConfig& cfg) {
    if (records.empty()) throw std::invalid_argument("no records to evaluate");
    if (cfg.rules.empty()) throw std::invalid_argument("no rules configured");
    if (cfg.metrics.empty()) throw std::invalid_argument("no metrics configured");
    for (double t : cfg.effective_temps) {
        if (!(t > 0.0)) throw std::invalid_argument("effective temperatures must be positive");
    }

    ExperimentReport report;
    double entropy_sum = 0.0;
    for (const auto& rec : records) entropy_sum += empirical_entropy(rec.samples);
    report.mean_empirical_entropy = entropy_sum / static_cast<double>(records.size());

    for (const auto& rule : cfg.rules) {
        for (double eff_temp : cfg.effective_temps) {
            double alpha = alpha_from_temps(cfg.sampling_temp, eff_temp);
            for (std::size_t k : cfg.sample_counts) {
                std::vector<LabeledPrediction> items;
                items.reserve(records.size());
                std::size_t fallback_count = 0;
                for (const auto& rec : records) {
                    bool fb = false;
                    Target pred = decode_record(rec, rule, k, alpha, cfg, &fb);
                    if (fb) ++fallback_count;
                    items.push_back(LabeledPrediction{rec.label, pred, pred.numeric});
                }
                for (const auto& metric : cfg.metrics) {
                    ReportCell cell;
                    cell.dataset = cfg.dataset_name;
                    cell.rule = rule.name();
                    cell.effective_temp = eff_temp;
                    cell.k = k;
                    cell.metric = metric;
                    cell.value = evaluate_metric(metric, items);
                    cell.fallback_count = fallback_count;
                    cell.sample_count = records.size();
                    report.cells.push_back(std::move(cell));
                }
            }
        }
    }
    return report;
}

std::vector<SampleRecord> synthesize_records(const SyntheticTask& task, std::size_t k,
                                             double sampling_temp, std::uint64_t seed,
                                             std::size_t top_k) {
    auto labels = sample_labels(task, seed);
    SamplerConfig sampler{sampling_temp, top_k, seed};
    std::vector<SampleRecord> records;
    records.reserve(task.num_inputs());
    for (const auto& [idx, label] : labels) {
        SampleRecord rec;
        rec.id = task.input(idx).id;
        rec.label = label;
        rec.samples = generate_batch(task, idx, k, sampler);
        records.push_back(std::move(rec));
    }
    return records;
}

TuningResult tune_temperature(std::span<const SampleRecord> records,
                              const ExperimentConfig& cfg) {
    if (!cfg.tuning) throw std::invalid_argument("tuning config missing");
    const auto& tuning = *cfg.tuning;
    if (tuning.temp_grid.empty()) throw std::invalid_argument("empty temperature grid");
    if (!(tuning.split_fraction > 0.0) || !(tuning.split_fraction < 1.0)) {
        throw std::invalid_argument("split fraction must lie in (0, 1)");
    }
    if (cfg.rules.empty() || cfg.metrics.empty()) {
        throw std::invalid_argument("tuning requires a rule and a metric");
    }
    const auto& rule = cfg.rules.front();
    const std::string& metric = cfg.metrics.front();
    const bool maximize = metric_is_maximized(metric);

    std::size_t n = records.size();
    std::size_t n_tune = static_cast<std::size_t>(
        std::llround(tuning.split_fraction * static_cast<double>(n)));
    if (n_tune == 0 || n_tune >= n) {
        throw std::invalid_argument("dataset too small to split for tuning");
    }

    auto evaluate_subset = [&](const std::vector<std::size_t>& idxs, double eff_temp) {
        double alpha = alpha_from_temps(cfg.sampling_temp, eff_temp);
        std::vector<LabeledPrediction> items;
        items.reserve(idxs.size());
        std::size_t k = cfg.sample_counts.front();
        for (std::size_t i : idxs) {
            Target pred = decode_record(records[i], rule, k, alpha, cfg);
            items.push_back(LabeledPrediction{records[i].label, pred, pred.numeric});
        }
        return evaluate_metric(metric, items);
    };

    TuningResult result;
    result.metric = metric;
    for (std::size_t split = 0; split < tuning.n_splits; ++split) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::mt19937_64 rng(cfg.seed + 0x7151u + split);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<std::size_t> tune_idx(order.begin(), order.begin() + n_tune);
        std::vector<std::size_t> eval_idx(order.begin() + n_tune, order.end());

        double best_temp = tuning.temp_grid.front();
        double best_value = evaluate_subset(tune_idx, best_temp);
        for (std::size_t g = 1; g < tuning.temp_grid.size(); ++g) {
            double v = evaluate_subset(tune_idx, tuning.temp_grid[g]);
            if (maximize ? v > best_value : v < best_value) {
                best_value = v;
                best_temp = tuning.temp_grid[g];
            }
        }
        result.selected_temps.push_back(best_temp);
        result.eval_values.push_back(evaluate_subset(eval_idx, best_temp));
        result.tune_indices.push_back(std::move(tune_idx));
        result.eval_indices.push_back(std::move(eval_idx));
    }

    double n_splits = static_cast<double>(result.eval_values.size());
    double mean = std::accumulate(result.eval_values.begin(), result.eval_values.end(), 0.0) /
                  n_splits;
    double var = 0.0;
    for (double v : result.eval_values) var += (v - mean) * (v - mean);
    double se = n_splits > 1 ? std::sqrt(var / (n_splits - 1.0) / n_splits) : 0.0;
    double z = normal_quantile(tuning.confidence);
    result.mean = mean;
    result.ci_low = mean - z * se;
    result.ci_high = mean + z * se;
    return result;
}

namespace {

std::string cell_field(const std::optional<double>& v) {
    return v ? format_double(*v) : "";
}

}  // namespace

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
    static const char* columns[] = {"dataset",  "rule",   "effective_temp",
                                    "K",        "metric", "value",
                                    "ci_low",   "ci_high", "fallback_count"};
    std::ostringstream out;
    if (format == ReportFormat::Csv) {
        for (std::size_t i = 0; i < std::size(columns); ++i) {
            if (i) out << ',';
            out << columns[i];
        }
        out << '\n';
        for (const auto& c : report.cells) {
            out << c.dataset << ',' << c.rule << ',' << format_double(c.effective_temp)
                << ',' << c.k << ',' << c.metric << ',' << format_double(c.value) << ','
                << cell_field(c.ci_low) << ',' << cell_field(c.ci_high) << ','
                << c.fallback_count << '\n';
        }
    } else {
        out << '|';
        for (const char* col : columns) out << ' ' << col << " |";
        out << "\n|";
        for (std::size_t i = 0; i < std::size(columns); ++i) out << " --- |";
        out << '\n';
        for (const auto& c : report.cells) {
            out << "| " << c.dataset << " | " << c.rule << " | "
                << format_double(c.effective_temp) << " | " << c.k << " | " << c.metric
                << " | " << format_double(c.value) << " | " << cell_field(c.ci_low)
                << " | " << cell_field(c.ci_high) << " | " << c.fallback_count << " |\n";
        }
    }
    return out.str();
}

}  // namespace mbrd

// Command-line harness: decode, sweep, tune, synth-gen.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbrd/eval_metrics.hpp"
#include "mbrd/harness.hpp"
#include "mbrd/synthetic_lm.hpp"

namespace {

using namespace mbrd;

struct CommonOpts {
    std::string jsonl_path;
    std::string config_path;
    std::string rule = "mean";
    std::string metric;
    std::size_t num_samples = 16;
    double sampling_temp = 1.0;
    std::vector<double> effective_temps = {1.0};
    bool pairs = false;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string clip_range;
};

RuleChoice make_rule(const std::string& name, bool pairs) {
    if (auto kind = rule_kind_from_name(name)) return RuleChoice{*kind};
    if (name.rfind("mbr_", 0) == 0) {
        auto metric = metric_kind_from_name(name.substr(4));
        if (metric) return RuleChoice{MbrRuleSpec{MetricSpec{*metric}, pairs}};
    }
    throw CLI::ValidationError("--rule", "unknown rule: " + name);
}

std::optional<std::pair<double, double>> parse_clip(const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw CLI::ValidationError("--clip-range", "expected lo:hi");
    }
    double lo = std::stod(spec.substr(0, colon));
    double hi = std::stod(spec.substr(colon + 1));
    if (lo > hi) throw CLI::ValidationError("--clip-range", "lo must be <= hi");
    return std::make_pair(lo, hi);
}

ExperimentConfig config_from_opts(const CommonOpts& opts) {
    ExperimentConfig cfg;
    cfg.rules = {make_rule(opts.rule, opts.pairs)};
    cfg.sample_counts = {opts.num_samples};
    cfg.sampling_temp = opts.sampling_temp;
    cfg.effective_temps = opts.effective_temps;
    if (!opts.metric.empty()) cfg.metrics = {opts.metric};
    cfg.seed = opts.seed;
    cfg.clip_range = parse_clip(opts.clip_range);
    return cfg;
}

// Optional JSON config file mirroring ExperimentConfig; flags given on the
// command line stay in effect for fields the file omits.
void merge_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    nlohmann::json j;
    in >> j;
    if (j.contains("dataset")) cfg.dataset_name = j["dataset"].get<std::string>();
    if (j.contains("rules")) {
        cfg.rules.clear();
        for (const auto& r : j["rules"]) {
            cfg.rules.push_back(make_rule(r.get<std::string>(), j.value("pairs", false)));
        }
    }
    if (j.contains("sample_counts")) {
        cfg.sample_counts = j["sample_counts"].get<std::vector<std::size_t>>();
    }
    if (j.contains("sampling_temp")) cfg.sampling_temp = j["sampling_temp"].get<double>();
    if (j.contains("effective_temps")) {
        cfg.effective_temps = j["effective_temps"].get<std::vector<double>>();
    }
    if (j.contains("metrics")) cfg.metrics = j["metrics"].get<std::vector<std::string>>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("clip_range")) {
        auto r = j["clip_range"].get<std::vector<double>>();
        if (r.size() == 2) cfg.clip_range = std::make_pair(r[0], r[1]);
    }
    if (j.contains("tuning")) {
        TuningConfig t;
        const auto& tj = j["tuning"];
        if (tj.contains("grid")) t.temp_grid = tj["grid"].get<std::vector<double>>();
        if (tj.contains("split_fraction")) t.split_fraction = tj["split_fraction"].get<double>();
        if (tj.contains("n_splits")) t.n_splits = tj["n_splits"].get<std::size_t>();
        if (tj.contains("confidence")) t.confidence = tj["confidence"].get<double>();
        cfg.tuning = t;
    }
}

ReportFormat format_from_name(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "md") return ReportFormat::Markdown;
    throw CLI::ValidationError("--format", "expected csv or md");
}

void add_common_flags(CLI::App* cmd, CommonOpts& opts, bool need_input) {
    auto* input = cmd->add_option("--input,-i", opts.jsonl_path, "JSONL sample file");
    if (need_input) input->required();
    cmd->add_option("--config", opts.config_path, "experiment config file (JSON)");
    cmd->add_option("--rule", opts.rule,
                    "decision rule: greedy|argmax|mean|median|bipartite|multipartite|"
                    "mbr_<metric>");
    cmd->add_option("--metric", opts.metric, "dataset metric: rmse|mae|em|f1|pearson|auc");
    cmd->add_option("--num-samples,-k", opts.num_samples, "samples per record (K)");
    cmd->add_option("--sampling-temp", opts.sampling_temp, "sampling temperature T");
    cmd->add_option("--effective-temp", opts.effective_temps,
                    "effective temperature(s) T'");
    cmd->add_flag("--pairs", opts.pairs, "augment MBR candidates with pair concatenations");
    cmd->add_option("--seed", opts.seed, "random seed");
    cmd->add_option("--format", opts.format, "report format: csv or md");
    cmd->add_option("--clip-range", opts.clip_range, "clip numeric predictions to lo:hi");
}

int cmd_decode(const CommonOpts& opts) {
    auto records = load_jsonl(opts.jsonl_path);
    auto cfg = config_from_opts(opts);
    const auto& rule = cfg.rules.front();
    for (double eff_temp : cfg.effective_temps) {
        double alpha = alpha_from_temps(cfg.sampling_temp, eff_temp);
        for (const auto& rec : records) {
            Target pred = decode_record(rec, rule, opts.num_samples, alpha, cfg);
            std::cout << rec.id << '\t' << pred.raw << '\n';
        }
    }
    return 0;
}

int cmd_sweep(const CommonOpts& opts) {
    auto cfg = config_from_opts(opts);
    if (!opts.config_path.empty()) merge_config_file(cfg, opts.config_path);
    if (cfg.metrics.empty()) throw CLI::ValidationError("--metric", "no metric configured");
    auto records = load_jsonl(opts.jsonl_path);
    auto report = run_experiment(records, cfg);
    std::cout << emit_report(report, format_from_name(opts.format));
    return 0;
}

int cmd_tune(const CommonOpts& opts, const std::vector<double>& grid) {
    auto cfg = config_from_opts(opts);
    if (!opts.config_path.empty()) merge_config_file(cfg, opts.config_path);
    if (cfg.metrics.empty()) throw CLI::ValidationError("--metric", "no metric configured");
    if (!cfg.tuning) cfg.tuning = TuningConfig{};
    if (!grid.empty()) cfg.tuning->temp_grid = grid;
    auto records = load_jsonl(opts.jsonl_path);
    auto result = tune_temperature(records, cfg);
    std::cout << "split,selected_temp,eval_" << result.metric << '\n';
    for (std::size_t i = 0; i < result.selected_temps.size(); ++i) {
        std::cout << i << ',' << format_double(result.selected_temps[i]) << ','
                  << format_double(result.eval_values[i]) << '\n';
    }
    std::cout << "mean," << format_double(result.mean) << '\n';
    std::cout << "ci," << format_double(result.ci_low) << ','
              << format_double(result.ci_high) << '\n';
    return 0;
}

int cmd_synth_gen(const std::string& task_path, const CommonOpts& opts,
                  const std::string& out_path) {
    auto file = load_synthetic_task(task_path);
    double temp = opts.sampling_temp;
    std::uint64_t seed = opts.seed != 0 ? opts.seed : file.sampler.seed;
    auto records =
        synthesize_records(file.task, opts.num_samples, temp, seed, file.sampler.top_k);
    std::ostream* out = &std::cout;
    std::ofstream fout;
    if (!out_path.empty()) {
        fout.open(out_path);
        if (!fout) throw std::runtime_error("cannot open output file: " + out_path);
        out = &fout;
    }
    for (const auto& rec : records) (*out) << sample_record_to_json(rec) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Metric-aware decoding over sampled model outputs"};
    app.require_subcommand(1);

    CommonOpts decode_opts, sweep_opts, tune_opts, synth_opts;
    std::vector<double> tune_grid;
    std::string synth_task_path, synth_out_path;

    auto* decode = app.add_subcommand("decode", "apply one rule to a JSONL sample file");
    add_common_flags(decode, decode_opts, true);

    auto* sweep = app.add_subcommand("sweep", "run a rule x temperature x K sweep");
    add_common_flags(sweep, sweep_opts, true);

    auto* tune = app.add_subcommand("tune", "held-out temperature tuning with CIs");
    add_common_flags(tune, tune_opts, true);
    tune->add_option("--grid", tune_grid, "temperature grid");

    auto* synth = app.add_subcommand("synth-gen", "generate JSONL from a synthetic task");
    add_common_flags(synth, synth_opts, false);
    synth->add_option("--task", synth_task_path, "synthetic task config (JSON)")->required();
    synth->add_option("--output,-o", synth_out_path, "output JSONL path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (decode->parsed()) return cmd_decode(decode_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_opts);
        if (tune->parsed()) return cmd_tune(tune_opts, tune_grid);
        if (synth->parsed()) return cmd_synth_gen(synth_task_path, synth_opts, synth_out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

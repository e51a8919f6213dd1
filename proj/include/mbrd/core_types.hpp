#pragma once

// Shared vocabulary: targets, samples, distributions, metric specs.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbrd {

// A model output string with an optional numeric view.
struct Target {
    std::string raw;
    std::optional<double> numeric;

    bool is_numeric() const { return numeric.has_value(); }
};

// One drawn response together with the model probability of the full
// target string. The log-probability is the stored representation;
// weights p^alpha are computed as exp(alpha * log_prob) so large alpha
// does not underflow.
struct SampledResponse {
    Target target;
    double log_prob = 0.0;

    double prob() const { return std::exp(log_prob); }

    static SampledResponse from_prob(Target t, double p);
    static SampledResponse from_log_prob(Target t, double lp);
};

// Explicit finite categorical distribution over targets.
class PredictiveDistribution {
public:
    PredictiveDistribution(std::vector<Target> support, std::vector<double> probs);

    const std::vector<Target>& support() const { return support_; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return support_.size(); }

private:
    std::vector<Target> support_;
    std::vector<double> probs_;
};

enum class MetricKind {
    ExactMatch,
    NegSquaredError,
    NegAbsError,
    TokenF1,
};

// Tokenization used by TokenF1 and by candidate concatenation.
struct TokenizerConfig {
    bool lowercase = true;
    bool strip_punctuation = true;
    std::string delimiter = " ";
};

// A pointwise utility m(y, yhat).
struct MetricSpec {
    MetricKind kind = MetricKind::ExactMatch;
    TokenizerConfig tokenizer{};
};

// Parameters shared by the closed-form decision rules.
struct RuleParams {
    double alpha = 0.0;          // post-hoc scaling exponent, >= 0
    double default_value = 0.0;  // fallback prediction for degenerate inputs
};

std::string metric_kind_name(MetricKind kind);
std::optional<MetricKind> metric_kind_from_name(const std::string& name);

// Trims ASCII whitespace from both ends.
std::string trim(const std::string& s);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

// Parses a raw model output. numeric is populated iff the trimmed string
// is a plain decimal real (optional sign, decimal point, exponent).
// Throws std::invalid_argument on an empty/whitespace-only string.
Target parse_target(const std::string& raw);

// Evaluates m(label, pred). Numeric metrics require both targets numeric
// and throw std::invalid_argument otherwise.
double pointwise_metric(const MetricSpec& spec, const Target& label, const Target& pred);

// Whitespace tokenization with optional lowercasing and per-token
// punctuation stripping; used for TokenF1.
std::vector<std::string> tokenize(const std::string& raw, const TokenizerConfig& cfg);

// Set-based token F1 between two strings.
double token_f1(const std::string& label, const std::string& pred, const TokenizerConfig& cfg);

}  // namespace mbrd

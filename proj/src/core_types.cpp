#include "mbrd/core_types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace mbrd {

SampledResponse SampledResponse::from_prob(Target t, double p) {
    if (!(p > 0.0) || p > 1.0) {
        throw std::invalid_argument("sample probability must be in (0, 1], got " +
                                    format_double(p));
    }
    return SampledResponse{std::move(t), std::log(p)};
}

SampledResponse SampledResponse::from_log_prob(Target t, double lp) {
    if (!(lp <= 0.0)) {
        throw std::invalid_argument("sample log-probability must be <= 0, got " +
                                    format_double(lp));
    }
    return SampledResponse{std::move(t), lp};
}

PredictiveDistribution::PredictiveDistribution(std::vector<Target> support,
                                               std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
    if (support_.empty()) throw std::invalid_argument("empty distribution support");
    if (support_.size() != probs_.size()) {
        throw std::invalid_argument("support/probs length mismatch");
    }
    double total = 0.0;
    for (double p : probs_) {
        if (p < 0.0) throw std::invalid_argument("negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("probabilities sum to " + format_double(total) +
                                    ", expected 1 within 1e-9");
    }
    std::unordered_set<std::string> seen;
    for (const auto& t : support_) {
        if (!seen.insert(t.raw).second) {
            throw std::invalid_argument("duplicate support entry: " + t.raw);
        }
    }
}

std::string metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::ExactMatch: return "exact_match";
        case MetricKind::NegSquaredError: return "neg_squared_error";
        case MetricKind::NegAbsError: return "neg_abs_error";
        case MetricKind::TokenF1: return "token_f1";
    }
    return "unknown";
}

std::optional<MetricKind> metric_kind_from_name(const std::string& name) {
    if (name == "exact_match" || name == "em") return MetricKind::ExactMatch;
    if (name == "neg_squared_error" || name == "nse") return MetricKind::NegSquaredError;
    if (name == "neg_abs_error" || name == "nae") return MetricKind::NegAbsError;
    if (name == "token_f1" || name == "f1") return MetricKind::TokenF1;
    return std::nullopt;
}

std::string trim(const std::string& s) {
    auto begin = s.begin();
    auto end = s.end();
    while (begin != end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
    while (end != begin && std::isspace(static_cast<unsigned char>(*(end - 1)))) --end;
    return std::string(begin, end);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

namespace {

// Plain decimal real: optional sign, digits with optional point, optional
// exponent. No hex, inf, nan, or locale forms.
bool is_decimal_real(const std::string& s) {
    std::size_t i = 0;
    const std::size_t n = s.size();
    if (i < n && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t int_digits = 0;
    while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++int_digits;
    std::size_t frac_digits = 0;
    if (i < n && s[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++frac_digits;
    }
    if (int_digits + frac_digits == 0) return false;
    if (i < n && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < n && (s[i] == '+' || s[i] == '-')) ++i;
        std::size_t exp_digits = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp_digits;
        if (exp_digits == 0) return false;
    }
    return i == n;
}

}  // namespace

Target parse_target(const std::string& raw) {
    std::string t = trim(raw);
    if (t.empty()) throw std::invalid_argument("malformed sample: empty target string");
    Target out{raw, std::nullopt};
    if (is_decimal_real(t)) {
        out.numeric = std::strtod(t.c_str(), nullptr);
    }
    return out;
}

std::vector<std::string> tokenize(const std::string& raw, const TokenizerConfig& cfg) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (cfg.strip_punctuation) {
            std::size_t b = 0, e = cur.size();
            while (b < e && std::ispunct(static_cast<unsigned char>(cur[b]))) ++b;
            while (e > b && std::ispunct(static_cast<unsigned char>(cur[e - 1]))) --e;
            cur = cur.substr(b, e - b);
        }
        if (!cur.empty()) tokens.push_back(cur);
        cur.clear();
    };
    for (char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            cur.push_back(cfg.lowercase ? static_cast<char>(std::tolower(
                                              static_cast<unsigned char>(c)))
                                        : c);
        }
    }
    flush();
    return tokens;
}

double token_f1(const std::string& label, const std::string& pred,
                const TokenizerConfig& cfg) {
    auto lt = tokenize(label, cfg);
    auto pt = tokenize(pred, cfg);
    std::unordered_set<std::string> ls(lt.begin(), lt.end());
    std::unordered_set<std::string> ps(pt.begin(), pt.end());
    if (ls.empty() && ps.empty()) return 1.0;
    if (ls.empty() || ps.empty()) return 0.0;
    std::size_t overlap = 0;
    for (const auto& t : ps) overlap += ls.count(t);
    if (overlap == 0) return 0.0;
    double precision = static_cast<double>(overlap) / static_cast<double>(ps.size());
    double recall = static_cast<double>(overlap) / static_cast<double>(ls.size());
    return 2.0 * precision * recall / (precision + recall);
}

double pointwise_metric(const MetricSpec& spec, const Target& label, const Target& pred) {
    switch (spec.kind) {
        case MetricKind::ExactMatch:
            return trim(label.raw) == trim(pred.raw) ? 1.0 : 0.0;
        case MetricKind::NegSquaredError: {
            if (!label.is_numeric() || !pred.is_numeric()) {
                throw std::invalid_argument("neg_squared_error requires numeric targets");
            }
            double d = *label.numeric - *pred.numeric;
            return -d * d;
        }
        case MetricKind::NegAbsError: {
            if (!label.is_numeric() || !pred.is_numeric()) {
                throw std::invalid_argument("neg_abs_error requires numeric targets");
            }
            return -std::abs(*label.numeric - *pred.numeric);
        }
        case MetricKind::TokenF1:
            return token_f1(label.raw, pred.raw, spec.tokenizer);
    }
    throw std::invalid_argument("unknown metric kind");
}

}  // namespace mbrd

#include "mbrd/eval_metrics.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace mbrd {

namespace {

void require_nonempty(std::span<const LabeledPrediction> items, const char* what) {
    if (items.empty()) throw std::invalid_argument(std::string(what) + " on empty item list");
}

double numeric_or_throw(const Target& t, const char* what) {
    if (!t.is_numeric()) {
        throw std::invalid_argument(std::string(what) + " requires numeric targets, got \"" +
                                    t.raw + "\"");
    }
    return *t.numeric;
}

}  // namespace

double rmse(std::span<const LabeledPrediction> items) {
    require_nonempty(items, "rmse");
    double sum = 0.0;
    for (const auto& it : items) {
        double d = numeric_or_throw(it.label, "rmse") - numeric_or_throw(it.prediction, "rmse");
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(items.size()));
}

double mae(std::span<const LabeledPrediction> items) {
    require_nonempty(items, "mae");
    double sum = 0.0;
    for (const auto& it : items) {
        sum += std::abs(numeric_or_throw(it.label, "mae") -
                        numeric_or_throw(it.prediction, "mae"));
    }
    return sum / static_cast<double>(items.size());
}

double em_accuracy(std::span<const LabeledPrediction> items) {
    require_nonempty(items, "em_accuracy");
    std::size_t hits = 0;
    for (const auto& it : items) {
        if (trim(it.label.raw) == trim(it.prediction.raw)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(items.size());
}

double mean_f1(std::span<const LabeledPrediction> items, const TokenizerConfig& cfg) {
    require_nonempty(items, "mean_f1");
    double sum = 0.0;
    for (const auto& it : items) sum += token_f1(it.label.raw, it.prediction.raw, cfg);
    return sum / static_cast<double>(items.size());
}

double pearson(std::span<const LabeledPrediction> items) {
    if (items.size() < 2) throw std::invalid_argument("pearson requires at least 2 items");
    double mx = 0.0, my = 0.0;
    for (const auto& it : items) {
        mx += numeric_or_throw(it.label, "pearson");
        my += numeric_or_throw(it.prediction, "pearson");
    }
    const double n = static_cast<double>(items.size());
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& it : items) {
        double dx = *it.label.numeric - mx;
        double dy = *it.prediction.numeric - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw std::invalid_argument("pearson undefined: zero variance");
    }
    return sxy / std::sqrt(sxx * syy);
}

PairCost absolute_label_cost() {
    return [](double y, double yp) { return std::abs(y - yp); };
}

PairCost unit_cost() {
    return [](double, double) { return 1.0; };
}

double multipartite_auc(std::span<const LabeledPrediction> items, const PairCost& cost) {
    require_nonempty(items, "multipartite_auc");
    double total_cost = 0.0;
    double penalty = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = 0; j < items.size(); ++j) {
            double yi = numeric_or_throw(items[i].label, "multipartite_auc");
            double yj = numeric_or_throw(items[j].label, "multipartite_auc");
            if (!(yi > yj)) continue;
            if (!items[i].score || !items[j].score) {
                throw std::invalid_argument("multipartite_auc requires scores");
            }
            double c = cost(yi, yj);
            total_cost += c;
            double si = *items[i].score, sj = *items[j].score;
            if (si < sj) penalty += c;
            else if (si == sj) penalty += 0.5 * c;  // tie convention
        }
    }
    if (total_cost <= 0.0) {
        throw std::invalid_argument("multipartite_auc: no comparable pairs");
    }
    return 1.0 - penalty / total_cost;
}

double empirical_entropy(std::span<const SampledResponse> samples) {
    if (samples.empty()) throw std::invalid_argument("empirical_entropy on empty samples");
    std::map<std::string, std::size_t> counts;
    for (const auto& s : samples) ++counts[s.target.raw];
    const double n = static_cast<double>(samples.size());
    double h = 0.0;
    for (const auto& [_, c] : counts) {
        double f = static_cast<double>(c) / n;
        h -= f * std::log(f);
    }
    return h;
}

}  // namespace mbrd

#include <doctest.h>

#include <cmath>
#include <random>

#include "mbrd/eval_metrics.hpp"

using namespace mbrd;

namespace {

LabeledPrediction item(const std::string& label, const std::string& pred,
                       std::optional<double> score = std::nullopt) {
    return LabeledPrediction{parse_target(label), parse_target(pred), score};
}

std::vector<LabeledPrediction> ranked(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<LabeledPrediction> items;
    for (const auto& [label, score] : pairs) {
        auto t = parse_target(format_double(label));
        items.push_back(LabeledPrediction{t, t, score});
    }
    return items;
}

}  // namespace

TEST_CASE("perfect predictor scores perfectly on every metric") {
    std::vector<LabeledPrediction> items = {item("1", "1"), item("2.5", "2.5"),
                                            item("4", "4")};
    CHECK(rmse(items) == doctest::Approx(0.0));
    CHECK(mae(items) == doctest::Approx(0.0));
    CHECK(em_accuracy(items) == doctest::Approx(1.0));
    CHECK(mean_f1(items, TokenizerConfig{}) == doctest::Approx(1.0));
}

TEST_CASE("rmse and mae hand arithmetic") {
    std::vector<LabeledPrediction> items = {item("0", "1"), item("0", "-1")};
    CHECK(rmse(items) == doctest::Approx(1.0));
    CHECK(mae(items) == doctest::Approx(1.0));
    // rmse^2 equals mean squared error exactly
    std::vector<LabeledPrediction> more = {item("0", "3"), item("1", "2"), item("5", "5")};
    double r = rmse(more);
    CHECK(r * r == doctest::Approx((9.0 + 1.0 + 0.0) / 3.0));
}

TEST_CASE("em_accuracy") {
    std::vector<LabeledPrediction> items = {item("a", "b")};
    CHECK(em_accuracy(items) == doctest::Approx(0.0));
    std::vector<LabeledPrediction> empty;
    CHECK_THROWS_AS(em_accuracy(empty), std::invalid_argument);
}

TEST_CASE("pearson") {
    std::vector<LabeledPrediction> same = {item("1", "1"), item("2", "2"), item("3", "3")};
    CHECK(pearson(same) == doctest::Approx(1.0));
    std::vector<LabeledPrediction> anti = {item("1", "-1"), item("2", "-2"), item("3", "-3")};
    CHECK(pearson(anti) == doctest::Approx(-1.0));
    std::vector<LabeledPrediction> affine = {item("1", "2"), item("2", "4"), item("3", "6")};
    CHECK(pearson(affine) == doctest::Approx(1.0));
    std::vector<LabeledPrediction> flat = {item("1", "5"), item("2", "5")};
    CHECK_THROWS_AS(pearson(flat), std::invalid_argument);
}

TEST_CASE("multipartite_auc basic cases") {
    CHECK(multipartite_auc(ranked({{1, 0.1}, {2, 0.5}, {3, 0.9}}), absolute_label_cost()) ==
          doctest::Approx(1.0));
    CHECK(multipartite_auc(ranked({{1, 0.9}, {2, 0.5}, {3, 0.1}}), absolute_label_cost()) ==
          doctest::Approx(0.0));
    // three pairs, one tied pair contributes half a unit of penalty
    CHECK(multipartite_auc(ranked({{1, 0.5}, {2, 0.5}, {3, 0.9}}), unit_cost()) ==
          doctest::Approx(5.0 / 6.0));
    CHECK_THROWS_AS(multipartite_auc(ranked({{1, 0.2}, {1, 0.4}}), unit_cost()),
                    std::invalid_argument);
}

TEST_CASE("multipartite_auc is invariant to strictly increasing score transforms") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> lab(1, 5);
    std::uniform_real_distribution<double> sc(-2, 2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<double, double>> pairs;
        for (int i = 0; i < 12; ++i) pairs.emplace_back(lab(rng), sc(rng));
        // guarantee at least one comparable pair
        pairs.emplace_back(1, sc(rng));
        pairs.emplace_back(5, sc(rng));
        double before = multipartite_auc(ranked(pairs), absolute_label_cost());
        for (auto& [_, s] : pairs) s = std::exp(s) + 3.0;
        double after = multipartite_auc(ranked(pairs), absolute_label_cost());
        CHECK(before == doctest::Approx(after));
    }
}

TEST_CASE("unit-cost multipartite_auc equals brute-force bipartite AUC on binary labels") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> lab(0, 1);
    std::uniform_real_distribution<double> sc(0, 1);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::pair<double, double>> pairs;
        for (int i = 0; i < 40; ++i) pairs.emplace_back(lab(rng), sc(rng));
        pairs.emplace_back(0, sc(rng));
        pairs.emplace_back(1, sc(rng));

        // classical Mann-Whitney count
        double wins = 0.0;
        std::size_t n_pairs = 0;
        for (const auto& [yp, sp] : pairs) {
            if (yp != 1) continue;
            for (const auto& [yn, sn] : pairs) {
                if (yn != 0) continue;
                ++n_pairs;
                if (sp > sn) wins += 1.0;
                else if (sp == sn) wins += 0.5;
            }
        }
        double classical = wins / static_cast<double>(n_pairs);
        CHECK(multipartite_auc(ranked(pairs), unit_cost()) == doctest::Approx(classical));
    }
}

TEST_CASE("empirical_entropy") {
    auto mk = [](const std::vector<std::string>& raws) {
        std::vector<SampledResponse> out;
        for (const auto& r : raws) {
            out.push_back(SampledResponse::from_prob(parse_target(r), 0.5));
        }
        return out;
    };
    CHECK(empirical_entropy(mk({"x", "x", "x", "x"})) == doctest::Approx(0.0));
    CHECK(empirical_entropy(mk({"a", "b"})) == doctest::Approx(std::log(2.0)));
    CHECK(empirical_entropy(mk({"a", "b", "c", "d"})) == doctest::Approx(std::log(4.0)));
}

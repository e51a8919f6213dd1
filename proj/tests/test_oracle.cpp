#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "mbrd/decision_rules.hpp"
#include "mbrd/mbr.hpp"
#include "mbrd/oracle.hpp"

using namespace mbrd;

namespace {

PredictiveDistribution make_dist(const std::vector<std::pair<std::string, double>>& pairs) {
    std::vector<Target> support;
    std::vector<double> probs;
    for (const auto& [raw, p] : pairs) {
        support.push_back(parse_target(raw));
        probs.push_back(p);
    }
    return PredictiveDistribution(std::move(support), std::move(probs));
}

CandidateSet support_candidates(const PredictiveDistribution& dist) {
    CandidateSet set;
    for (const auto& t : dist.support()) set.add(t, SampledProvenance{});
    return set;
}

// Distribution expressed as weighted samples with alpha = 1, so the
// closed-form rules evaluate on the exact probabilities.
std::vector<SampledResponse> dist_as_samples(const PredictiveDistribution& dist) {
    std::vector<SampledResponse> out;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        out.push_back(SampledResponse::from_prob(dist.support()[i], dist.probs()[i]));
    }
    return out;
}

PredictiveDistribution random_numeric_dist(std::mt19937_64& rng, std::size_t max_support) {
    std::size_t n = 1 + rng() % max_support;
    std::uniform_real_distribution<double> val(-50, 50);
    std::uniform_real_distribution<double> mass(0.05, 1.0);
    std::vector<std::pair<std::string, double>> pairs;
    std::vector<double> weights;
    double total = 0.0;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
        std::string raw = format_double(std::round(val(rng) * 16.0) / 16.0);
        if (!seen.insert(raw).second) continue;
        double w = mass(rng);
        pairs.emplace_back(raw, w);
        total += w;
    }
    for (auto& [_, w] : pairs) w /= total;
    // repair rounding drift so the sum is 1 within tolerance
    double sum = 0.0;
    for (auto& [_, w] : pairs) sum += w;
    pairs.back().second += 1.0 - sum;
    return make_dist(pairs);
}

}  // namespace

TEST_CASE("expected_utility hand values") {
    auto dist = make_dist({{"1", 0.3}, {"3", 0.3}, {"5", 0.4}});
    MetricSpec nae{MetricKind::NegAbsError};
    CHECK(expected_utility(dist, nae, parse_target("5")) == doctest::Approx(-1.8));
    CHECK(expected_utility(dist, nae, parse_target("3")) == doctest::Approx(-1.4));

    auto point = make_dist({{"yes", 1.0}});
    MetricSpec em{MetricKind::ExactMatch};
    CHECK(expected_utility(point, em, parse_target("yes")) == doctest::Approx(1.0));

    auto uniform = make_dist({{"0", 0.5}, {"2", 0.5}});
    MetricSpec nse{MetricKind::NegSquaredError};
    CHECK(expected_utility(uniform, nse, parse_target("1")) == doctest::Approx(-1.0));
}

TEST_CASE("bayes_optimal on the rating example") {
    auto dist = make_dist({{"1", 0.3}, {"3", 0.3}, {"5", 0.4}});
    auto cands = support_candidates(dist);

    auto em_choice = bayes_optimal(dist, MetricSpec{MetricKind::ExactMatch}, cands);
    CHECK(em_choice.target.raw == "5");  // the mode

    auto med_choice = bayes_optimal(dist, MetricSpec{MetricKind::NegAbsError}, cands);
    CHECK(med_choice.target.raw == "3");
    CHECK(med_choice.expected_utility == doctest::Approx(-1.4));
}

TEST_CASE("bayes_optimal over a dense grid approaches the distribution mean") {
    auto dist = make_dist({{"1", 0.3}, {"3", 0.3}, {"5", 0.4}});
    CandidateSet grid;
    for (double c = 0.0; c <= 6.0; c += 0.01) {
        grid.add(parse_target(format_double(c)), InjectedProvenance{});
    }
    auto choice = bayes_optimal(dist, MetricSpec{MetricKind::NegSquaredError}, grid);
    CHECK(*choice.target.numeric == doctest::Approx(3.2).epsilon(0.01));
}

TEST_CASE("closed-form rules match the oracle on random finite distributions") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        auto dist = random_numeric_dist(rng, 100);
        auto samples = dist_as_samples(dist);
        RuleParams a1{1.0, 0.0};

        // mean vs squared error: candidates = support plus the rule output
        {
            MetricSpec nse{MetricKind::NegSquaredError};
            double mean = weighted_mean(samples, a1).value;
            auto cands = support_candidates(dist);
            cands.add(parse_target(format_double(mean)), InjectedProvenance{});
            auto best = bayes_optimal(dist, nse, cands);
            double rule_utility =
                expected_utility(dist, nse, parse_target(format_double(mean)));
            CHECK(rule_utility >= best.expected_utility - 1e-9);
        }
        // median vs absolute error: the optimum lies in the support
        {
            MetricSpec nae{MetricKind::NegAbsError};
            double median = weighted_median(samples, a1).value;
            auto best = bayes_optimal(dist, nae, support_candidates(dist));
            double rule_utility =
                expected_utility(dist, nae, parse_target(format_double(median)));
            CHECK(rule_utility >= best.expected_utility - 1e-9);
        }
        // mode vs exact match
        {
            MetricSpec em{MetricKind::ExactMatch};
            auto mode = sample_argmax(samples);
            auto best = bayes_optimal(dist, em, support_candidates(dist));
            CHECK(expected_utility(dist, em, mode) >= best.expected_utility - 1e-9);
        }
    }
}

TEST_CASE("mbr_decode at alpha=1 agrees with the oracle when the optimum is unique") {
    std::mt19937_64 rng(515);
    MetricSpec specs[] = {MetricSpec{MetricKind::ExactMatch},
                          MetricSpec{MetricKind::NegSquaredError},
                          MetricSpec{MetricKind::NegAbsError}};
    for (int trial = 0; trial < 300; ++trial) {
        auto dist = random_numeric_dist(rng, 8);
        auto samples = dist_as_samples(dist);
        auto cands = support_candidates(dist);
        for (const auto& spec : specs) {
            auto best = bayes_optimal(dist, spec, cands);
            // skip ties: only a unique optimum pins down the choice
            std::size_t optima = 0;
            for (const auto& c : cands.candidates()) {
                if (expected_utility(dist, spec, c) >= best.expected_utility - 1e-12) {
                    ++optima;
                }
            }
            if (optima != 1) continue;
            auto choice = mbr_decode(samples, cands, spec, 1.0);
            CHECK(choice.target.raw == best.target.raw);
        }
    }
}

TEST_CASE("oracle confirms the F1 reading-comprehension example") {
    auto dist = make_dist(
        {{"July", 0.25}, {"July 2023", 0.23}, {"Month of July", 0.24}, {"May", 0.28}});
    auto choice =
        bayes_optimal(dist, MetricSpec{MetricKind::TokenF1}, support_candidates(dist));
    CHECK(choice.target.raw == "July");
}

TEST_CASE("bayes_optimal rejects empty candidates and incompatible metrics") {
    auto dist = make_dist({{"apple", 1.0}});
    CHECK_THROWS_AS(bayes_optimal(dist, MetricSpec{MetricKind::ExactMatch}, CandidateSet{}),
                    std::invalid_argument);
    CandidateSet cands;
    cands.add(parse_target("1"), InjectedProvenance{});
    CHECK_THROWS_AS(bayes_optimal(dist, MetricSpec{MetricKind::NegAbsError}, cands),
                    std::invalid_argument);
}

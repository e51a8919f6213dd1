#include <doctest.h>

#include <cmath>
#include <map>

#include "mbrd/decision_rules.hpp"
#include "mbrd/synthetic_lm.hpp"

using namespace mbrd;

namespace {

SyntheticTask::Input make_input(const std::string& id,
                                const std::vector<std::pair<std::string, double>>& dist,
                                const std::vector<double>& logits) {
    std::vector<Target> support;
    std::vector<double> probs;
    for (const auto& [raw, p] : dist) {
        support.push_back(parse_target(raw));
        probs.push_back(p);
    }
    return {id, PredictiveDistribution(std::move(support), std::move(probs)), logits};
}

// Calibrated input: logits are log true probabilities.
SyntheticTask::Input calibrated_input(const std::string& id,
                                      const std::vector<std::pair<std::string, double>>& dist) {
    std::vector<double> logits;
    for (const auto& [_, p] : dist) logits.push_back(std::log(p));
    return make_input(id, dist, logits);
}

}  // namespace

TEST_CASE("degenerate distribution always returns its single target with prob 1") {
    SyntheticTask task({calibrated_input("a", {{"42", 1.0}})});
    auto s = generate(task, 0, SamplerConfig{1.0, 0, 17});
    CHECK(s.target.raw == "42");
    CHECK(s.prob() == doctest::Approx(1.0));
}

TEST_CASE("top_k=1 always yields the argmax-logit target with prob 1") {
    SyntheticTask task({make_input("a", {{"1", 0.5}, {"2", 0.3}, {"3", 0.2}},
                                   {0.1, 2.0, -1.0})});
    for (std::uint64_t draw = 0; draw < 20; ++draw) {
        auto s = generate(task, 0, SamplerConfig{1.0, 1, 3}, draw);
        CHECK(s.target.raw == "2");
        CHECK(s.prob() == doctest::Approx(1.0));
    }
}

TEST_CASE("equal logits sample near-uniformly") {
    SyntheticTask task({make_input("a", {{"0", 0.5}, {"1", 0.5}}, {0.7, 0.7})});
    const std::size_t n = 100000;
    std::size_t ones = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto s = generate(task, 0, SamplerConfig{1.0, 0, 99}, i);
        if (s.target.raw == "1") ++ones;
    }
    double freq = static_cast<double>(ones) / static_cast<double>(n);
    // 3 sigma around 0.5 with sigma = 0.5/sqrt(n)
    CHECK(std::abs(freq - 0.5) <= 3.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("temperature identity: T=1, unlimited top_k reproduces softmax exactly") {
    std::vector<double> logits = {0.4, -1.2, 2.0, 0.0};
    SyntheticTask task({make_input(
        "a", {{"1", 0.25}, {"2", 0.25}, {"3", 0.25}, {"4", 0.25}}, logits)});
    auto probs = task.model_probs(0, 1.0);
    double z = 0.0;
    for (double l : logits) z += std::exp(l);
    for (std::size_t i = 0; i < logits.size(); ++i) {
        CHECK(std::abs(probs[i] - std::exp(logits[i]) / z) < 1e-12);
    }
    // the reported sample probability matches the same softmax
    for (std::uint64_t d = 0; d < 50; ++d) {
        auto s = generate(task, 0, SamplerConfig{1.0, 0, 1}, d);
        const auto* in = task.find("a");
        REQUIRE(in != nullptr);
        for (std::size_t i = 0; i < in->true_dist.size(); ++i) {
            if (in->true_dist.support()[i].raw == s.target.raw) {
                CHECK(s.prob() == doctest::Approx(probs[i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("batches are deterministic given the seed, K=1 equals single generate") {
    SyntheticTask task({make_input("a", {{"1", 0.4}, {"2", 0.6}}, {0.2, 0.9})});
    SamplerConfig cfg{0.7, 0, 12345};
    auto b1 = generate_batch(task, 0, 16, cfg);
    auto b2 = generate_batch(task, 0, 16, cfg);
    REQUIRE(b1.size() == 16);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(b1[i].target.raw == b2[i].target.raw);
        CHECK(b1[i].log_prob == b2[i].log_prob);
    }
    auto single = generate_batch(task, 0, 1, cfg);
    CHECK(single[0].target.raw == generate(task, 0, cfg, 0).target.raw);
}

TEST_CASE("chi-square goodness of fit between reported probs and draw frequencies") {
    SyntheticTask task({make_input("a",
                                   {{"1", 0.2}, {"2", 0.2}, {"3", 0.2}, {"4", 0.2}, {"5", 0.2}},
                                   {1.0, 0.3, -0.5, 0.0, 0.8})});
    SamplerConfig cfg{0.8, 0, 777};
    const std::size_t n = 100000;
    std::map<std::string, std::size_t> counts;
    std::map<std::string, double> reported;
    for (std::size_t i = 0; i < n; ++i) {
        auto s = generate(task, 0, cfg, i);
        ++counts[s.target.raw];
        reported[s.target.raw] = s.prob();
    }
    double chi2 = 0.0;
    std::size_t dof = 0;
    for (const auto& [raw, p] : reported) {
        double expected = p * static_cast<double>(n);
        double observed = static_cast<double>(counts[raw]);
        chi2 += (observed - expected) * (observed - expected) / expected;
        ++dof;
    }
    dof -= 1;
    // chi-square critical value at significance 0.001, dof = 4
    REQUIRE(dof == 4);
    CHECK(chi2 < 18.467);
}

TEST_CASE("enumerate_grid returns temperature-scaled model probabilities") {
    SyntheticTask task({make_input("a", {{"0", 0.25}, {"1", 0.25}, {"2", 0.5}},
                                   {0.0, 1.0, 2.0})});
    std::vector<double> grid = {0.0, 1.0, 2.0};
    auto scored = enumerate_grid(task, 0, grid, 1.0);
    auto probs = task.model_probs(0, 1.0);
    REQUIRE(scored.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(scored[i].prob() == doctest::Approx(probs[i]).epsilon(1e-12));
    }
    // missing grid values are dropped
    std::vector<double> sparse = {1.0, 7.0};
    CHECK(enumerate_grid(task, 0, sparse, 1.0).size() == 1);
    std::vector<double> outside = {9.0, 10.0};
    CHECK_THROWS_AS(enumerate_grid(task, 0, outside, 1.0), std::invalid_argument);
}

TEST_CASE("sample_labels is deterministic and matches the true distribution") {
    std::vector<SyntheticTask::Input> inputs;
    for (int i = 0; i < 20000; ++i) {
        inputs.push_back(calibrated_input(std::to_string(i), {{"0", 0.5}, {"1", 0.5}}));
    }
    SyntheticTask task(std::move(inputs));
    auto labels = sample_labels(task, 42);
    auto labels2 = sample_labels(task, 42);
    double mean = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        CHECK(labels[i].second.raw == labels2[i].second.raw);
        mean += *labels[i].second.numeric;
    }
    mean /= static_cast<double>(labels.size());
    CHECK(std::abs(mean - 0.5) <= 3.0 * 0.5 / std::sqrt(20000.0));

    SyntheticTask degenerate({calibrated_input("x", {{"7", 1.0}})});
    CHECK(sample_labels(degenerate, 1)[0].second.raw == "7");
}

TEST_CASE("report_base_probs returns the unrestricted T=1 probability") {
    SyntheticTask task({make_input("a", {{"1", 0.5}, {"2", 0.3}, {"3", 0.2}},
                                   {0.1, 2.0, -1.0})});
    SamplerConfig cfg{0.5, 1, 4};
    cfg.report_base_probs = true;
    auto probs = task.model_probs(0, 1.0);
    auto s = generate(task, 0, cfg);
    CHECK(s.target.raw == "2");
    CHECK(s.prob() == doctest::Approx(probs[1]).epsilon(1e-12));
}

TEST_CASE("invalid input index is rejected") {
    SyntheticTask task({calibrated_input("a", {{"1", 1.0}})});
    CHECK_THROWS_AS(generate(task, 5, SamplerConfig{}), std::out_of_range);
}

TEST_CASE("task config round-trips through JSON") {
    const char* text = R"({
      "sampler": {"temperature": 0.5, "top_k": 3, "seed": 9},
      "inputs": [
        {"id": "q1", "support": ["1", "2", "3"], "true_probs": [0.2, 0.3, 0.5],
         "logits": [-1.0, 0.0, 1.0]},
        {"id": "q2", "support": [1.5, 2.5], "true_probs": [0.5, 0.5],
         "logits": [0.0, 0.0]}
      ]
    })";
    auto file = parse_synthetic_task(text);
    CHECK(file.sampler.temperature == doctest::Approx(0.5));
    CHECK(file.sampler.top_k == 3);
    CHECK(file.task.num_inputs() == 2);
    REQUIRE(file.task.find("q2") != nullptr);
    CHECK(file.task.find("q2")->true_dist.support()[0].is_numeric());
}

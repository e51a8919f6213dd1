// Python bindings for the main decoding, evaluation, and oracle operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mbrd/decision_rules.hpp"
#include "mbrd/eval_metrics.hpp"
#include "mbrd/harness.hpp"
#include "mbrd/mbr.hpp"
#include "mbrd/oracle.hpp"
#include "mbrd/synthetic_lm.hpp"

namespace py = pybind11;
using namespace mbrd;

namespace {

MetricSpec spec_from_name(const std::string& name) {
    auto kind = metric_kind_from_name(name);
    if (!kind) throw std::invalid_argument("unknown metric: " + name);
    return MetricSpec{*kind};
}

std::vector<SampledResponse> samples_from_pairs(
    const std::vector<std::pair<std::string, double>>& pairs) {
    std::vector<SampledResponse> out;
    out.reserve(pairs.size());
    for (const auto& [raw, prob] : pairs) {
        out.push_back(SampledResponse::from_prob(parse_target(raw), prob));
    }
    return out;
}

PredictiveDistribution dist_from_pairs(
    const std::vector<std::pair<std::string, double>>& pairs) {
    std::vector<Target> support;
    std::vector<double> probs;
    for (const auto& [raw, p] : pairs) {
        support.push_back(parse_target(raw));
        probs.push_back(p);
    }
    return PredictiveDistribution(std::move(support), std::move(probs));
}

}  // namespace

PYBIND11_MODULE(_mbrd, m) {
    m.doc() = "Metric-aware decoding: closed-form Bayes-optimal rules, empirical "
              "MBR, evaluation metrics, and a brute-force oracle.";

    py::class_<Target>(m, "Target")
        .def_readonly("raw", &Target::raw)
        .def_readonly("numeric", &Target::numeric)
        .def("__repr__", [](const Target& t) { return "Target(" + t.raw + ")"; });

    m.def("parse_target", &parse_target, py::arg("raw"));

    m.def(
        "pointwise_metric",
        [](const std::string& metric, const std::string& label, const std::string& pred) {
            return pointwise_metric(spec_from_name(metric), parse_target(label),
                                    parse_target(pred));
        },
        py::arg("metric"), py::arg("label"), py::arg("pred"));

    m.def("alpha_from_temps", &alpha_from_temps, py::arg("sampling_temp"),
          py::arg("effective_temp"));

    m.def(
        "sample_argmax",
        [](const std::vector<std::pair<std::string, double>>& samples) {
            return sample_argmax(samples_from_pairs(samples)).raw;
        },
        py::arg("samples"));

    auto numeric_rule = [](NumericResult (*fn)(std::span<const SampledResponse>,
                                               const RuleParams&)) {
        return [fn](const std::vector<std::pair<std::string, double>>& samples,
                    double alpha, double default_value) {
            auto s = samples_from_pairs(samples);
            return fn(s, RuleParams{alpha, default_value}).value;
        };
    };
    m.def("weighted_mean", numeric_rule(&weighted_mean), py::arg("samples"),
          py::arg("alpha") = 0.0, py::arg("default_value") = 0.0);
    m.def("weighted_median", numeric_rule(&weighted_median), py::arg("samples"),
          py::arg("alpha") = 0.0, py::arg("default_value") = 0.0);
    m.def("bipartite_score", numeric_rule(&bipartite_score), py::arg("samples"),
          py::arg("alpha") = 0.0, py::arg("default_value") = 0.0);
    m.def("multipartite_score", numeric_rule(&multipartite_score), py::arg("samples"),
          py::arg("alpha") = 0.0, py::arg("default_value") = 0.0);

    m.def(
        "mbr_decode",
        [](const std::vector<std::pair<std::string, double>>& samples,
           const std::string& metric, double alpha, bool include_pairs) {
            auto s = samples_from_pairs(samples);
            auto spec = spec_from_name(metric);
            auto cands = build_candidates(s, include_pairs, spec.tokenizer);
            return mbr_decode(s, cands, spec, alpha).target.raw;
        },
        py::arg("samples"), py::arg("metric"), py::arg("alpha") = 0.0,
        py::arg("include_pairs") = false);

    m.def(
        "bayes_optimal",
        [](const std::vector<std::pair<std::string, double>>& dist,
           const std::string& metric,
           const std::vector<std::string>& candidates) {
            CandidateSet set;
            for (const auto& c : candidates) set.add(parse_target(c), InjectedProvenance{});
            auto choice = bayes_optimal(dist_from_pairs(dist), spec_from_name(metric), set);
            return std::make_pair(choice.target.raw, choice.expected_utility);
        },
        py::arg("dist"), py::arg("metric"), py::arg("candidates"));

    m.def(
        "expected_utility",
        [](const std::vector<std::pair<std::string, double>>& dist,
           const std::string& metric, const std::string& candidate) {
            return expected_utility(dist_from_pairs(dist), spec_from_name(metric),
                                    parse_target(candidate));
        },
        py::arg("dist"), py::arg("metric"), py::arg("candidate"));

    m.def(
        "empirical_entropy",
        [](const std::vector<std::pair<std::string, double>>& samples) {
            return empirical_entropy(samples_from_pairs(samples));
        },
        py::arg("samples"));

    m.def(
        "multipartite_auc",
        [](const std::vector<std::pair<double, double>>& label_score_pairs,
           bool unit_cost_flag) {
            std::vector<LabeledPrediction> items;
            for (const auto& [label, score] : label_score_pairs) {
                Target lt{format_double(label), label};
                items.push_back(LabeledPrediction{lt, lt, score});
            }
            return multipartite_auc(items,
                                    unit_cost_flag ? unit_cost() : absolute_label_cost());
        },
        py::arg("label_score_pairs"), py::arg("unit_cost") = false);
}

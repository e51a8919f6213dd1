#include "mbrd/oracle.hpp"

namespace mbrd {

double expected_utility(const PredictiveDistribution& dist, const MetricSpec& spec,
                        const Target& candidate) {
    double total = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        total += dist.probs()[i] * pointwise_metric(spec, dist.support()[i], candidate);
    }
    return total;
}

OracleChoice bayes_optimal(const PredictiveDistribution& dist, const MetricSpec& spec,
                           const CandidateSet& candidates) {
    if (candidates.empty()) throw std::invalid_argument("bayes_optimal on empty candidates");
    OracleChoice best;
    bool have_best = false;
    for (const auto& c : candidates.candidates()) {
        double eu = expected_utility(dist, spec, c);
        if (!have_best || eu > best.expected_utility) {
            best = OracleChoice{c, eu};
            have_best = true;
        }
    }
    return best;
}

}  // namespace mbrd

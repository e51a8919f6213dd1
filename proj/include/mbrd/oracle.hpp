#pragma once

// Brute-force Bayes-optimal decisions over explicit finite distributions.
// Ground truth for the closed-form rules and MBR results; never samples.

#include "mbrd/core_types.hpp"
#include "mbrd/mbr.hpp"

namespace mbrd {

struct OracleChoice {
    Target target;
    double expected_utility = 0.0;
};

// sum_y dist(y) * m(y, c).
double expected_utility(const PredictiveDistribution& dist, const MetricSpec& spec,
                        const Target& candidate);

// Candidate maximizing the expected utility under dist, by exhaustive
// evaluation; ties break to the earliest candidate.
OracleChoice bayes_optimal(const PredictiveDistribution& dist, const MetricSpec& spec,
                           const CandidateSet& candidates);

}  // namespace mbrd

#pragma once

// Empirical MBR maximization over a candidate set, for metrics without
// closed-form rules. Includes concatenation-augmented candidates for F1.

#include <span>
#include <variant>

#include "mbrd/core_types.hpp"

namespace mbrd {

struct SampledProvenance {};
struct ConcatenatedProvenance {
    std::size_t first = 0;
    std::size_t second = 0;
};
struct InjectedProvenance {};

using CandidateProvenance =
    std::variant<SampledProvenance, ConcatenatedProvenance, InjectedProvenance>;

// Deduplicated ordered candidate list with per-candidate provenance.
class CandidateSet {
public:
    void add(Target t, CandidateProvenance prov);

    const std::vector<Target>& candidates() const { return candidates_; }
    const std::vector<CandidateProvenance>& provenance() const { return provenance_; }
    bool empty() const { return candidates_.empty(); }
    std::size_t size() const { return candidates_.size(); }

private:
    std::vector<Target> candidates_;
    std::vector<CandidateProvenance> provenance_;
};

// Candidates from deduplicated sampled targets, optionally augmented with
// ordered-pair concatenations of distinct raw strings.
CandidateSet build_candidates(std::span<const SampledResponse> samples,
                              bool include_pairs, const TokenizerConfig& cfg);

struct MbrChoice {
    Target target;
    std::size_t candidate_index = 0;
    double objective = 0.0;  // sum_i p_i^alpha * m(y_i, chosen)
};

// argmax over candidates of sum_i p_i^alpha * m(y_i, c); ties break to the
// earliest candidate.
MbrChoice mbr_decode(std::span<const SampledResponse> samples,
                     const CandidateSet& candidates, const MetricSpec& spec,
                     double alpha);

}  // namespace mbrd

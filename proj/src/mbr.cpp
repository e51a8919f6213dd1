#include "mbrd/mbr.hpp"

#include <cmath>
#include <unordered_set>

namespace mbrd {

void CandidateSet::add(Target t, CandidateProvenance prov) {
    for (const auto& existing : candidates_) {
        if (existing.raw == t.raw) return;  // first occurrence kept
    }
    candidates_.push_back(std::move(t));
    provenance_.push_back(prov);
}

CandidateSet build_candidates(std::span<const SampledResponse> samples,
                              bool include_pairs, const TokenizerConfig& cfg) {
    if (samples.empty()) throw std::invalid_argument("build_candidates on empty samples");
    CandidateSet set;
    for (const auto& s : samples) set.add(s.target, SampledProvenance{});

    if (include_pairs) {
        const auto base = set.candidates();  // distinct sampled targets
        for (std::size_t i = 0; i < base.size(); ++i) {
            for (std::size_t j = 0; j < base.size(); ++j) {
                if (i == j) continue;
                std::string joined = base[i].raw + cfg.delimiter + base[j].raw;
                set.add(parse_target(joined), ConcatenatedProvenance{i, j});
            }
        }
    }
    return set;
}

MbrChoice mbr_decode(std::span<const SampledResponse> samples,
                     const CandidateSet& candidates, const MetricSpec& spec,
                     double alpha) {
    if (candidates.empty()) throw std::invalid_argument("mbr_decode on empty candidates");
    std::vector<double> weights;
    weights.reserve(samples.size());
    for (const auto& s : samples) weights.push_back(std::exp(alpha * s.log_prob));

    MbrChoice best;
    bool have_best = false;
    const auto& cands = candidates.candidates();
    for (std::size_t c = 0; c < cands.size(); ++c) {
        double objective = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            objective += weights[i] * pointwise_metric(spec, samples[i].target, cands[c]);
        }
        if (!have_best || objective > best.objective) {
            best = MbrChoice{cands[c], c, objective};
            have_best = true;
        }
    }
    return best;
}

}  // namespace mbrd

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "repshare/types.hpp"

namespace repshare {

struct Contribution {
    AgentId advisor = 0;
    double weight = 0.0;  // in [0, 1)
    Rating reported;

    bool operator==(const Contribution&) const = default;
};

struct AggregateResult {
    Rating value;
    bool unweighted_fallback = false;  // every contributor had zero weight

    bool operator==(const AggregateResult&) const = default;
};

/// Weighted mean of the honest opinions. Summation runs in ascending
/// advisor-id order so identical inputs always produce identical bits.
/// Empty input yields nullopt: there is nothing defensible to report and the
/// caller falls back to individual experience. An all-zero weight set (only
/// zero-history advisors) degrades to the unweighted mean, flagged.
std::optional<AggregateResult> aggregate(std::vector<Contribution> contributions);

/// Outcome of one full sharing round, aggregate plus provenance.
struct SharedReputationResult {
    std::optional<AggregateResult> aggregate;
    std::vector<Contribution> contributors;
    std::vector<std::pair<AgentId, ExclusionReason>> excluded;
};

}  // namespace repshare

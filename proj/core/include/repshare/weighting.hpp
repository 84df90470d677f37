#pragma once

#include <cstdint>

#include "repshare/types.hpp"

namespace repshare {

/// Per-advisor opinion history as seen by one buyer.
struct BehaviorStats {
    std::uint32_t honest_count = 0;  // opinions judged honest
    std::uint32_t total_count = 0;   // all judged opinions, >= honest_count

    bool operator==(const BehaviorStats&) const = default;
};

/// Percentage of honest past opinions on the 0-100 scale.
/// A zero history yields 0 rather than an error, so brand-new advisors
/// simply carry zero weight.
double percent_hpo(BehaviorStats stats);

/// Incentive multiplier 1 + j_step * honest_count. Derived, never stored,
/// and not reset by dishonest opinions.
double incentive_j(std::uint32_t honest_count, double j_step);

/// Consolidated past-behaviour score:
/// alpha_hat * %HPO + epsilon_hat * honest_count * J.
double consolidated_zeta(BehaviorStats stats, const EngineParams& params);

/// Opinion weight 1 - exp_base^(-kappa * zeta), in [0, 1).
double weight(double zeta, const EngineParams& params);

/// weight(consolidated_zeta(stats)) in one step.
double advisor_weight(BehaviorStats stats, const EngineParams& params);

}  // namespace repshare

#include "repshare/weighting.hpp"

#include <algorithm>
#include <cmath>

namespace repshare {

double percent_hpo(BehaviorStats stats) {
    if (stats.total_count == 0) {
        return 0.0;
    }
    return static_cast<double>(stats.honest_count) / static_cast<double>(stats.total_count) * 100.0;
}

double incentive_j(std::uint32_t honest_count, double j_step) {
    return 1.0 + j_step * static_cast<double>(honest_count);
}

double consolidated_zeta(BehaviorStats stats, const EngineParams& params) {
    const double pct = percent_hpo(stats);
    const double j = incentive_j(stats.honest_count, params.j_step);
    return params.alpha_hat * pct +
           params.epsilon_hat * static_cast<double>(stats.honest_count) * j;
}

double weight(double zeta, const EngineParams& params) {
    // The exponential underflows for huge zeta; keep the codomain [0, 1).
    return std::min(1.0 - std::pow(params.exp_base, -params.kappa * zeta),
                    max_rating_value());
}

double advisor_weight(BehaviorStats stats, const EngineParams& params) {
    return weight(consolidated_zeta(stats, params), params);
}

}  // namespace repshare

#include "repshare/aggregation.hpp"

#include <algorithm>

namespace repshare {

std::optional<AggregateResult> aggregate(std::vector<Contribution> contributions) {
    if (contributions.empty()) {
        return std::nullopt;
    }
    std::sort(contributions.begin(), contributions.end(),
              [](const Contribution& a, const Contribution& b) { return a.advisor < b.advisor; });

    double weight_sum = 0.0;
    for (const Contribution& c : contributions) {
        weight_sum += c.weight;
    }

    const bool fallback = weight_sum <= 0.0;
    double num = 0.0;
    double den = 0.0;
    for (const Contribution& c : contributions) {
        const double w = fallback ? 1.0 : c.weight;
        num += w * c.reported.value();
        den += w;
    }
    double value = num / den;

    // The weighted mean lies inside the opinion hull; pin it there so a
    // final-ulp rounding can never escape the Rating range.
    double lo = contributions.front().reported.value();
    double hi = lo;
    for (const Contribution& c : contributions) {
        lo = std::min(lo, c.reported.value());
        hi = std::max(hi, c.reported.value());
    }
    value = std::clamp(value, lo, hi);

    return AggregateResult{Rating(value), fallback};
}

}  // namespace repshare

#pragma once

#include <span>
#include <vector>

#include "repshare/types.hpp"

namespace repshare {

struct FilterVerdict {
    Opinion opinion;
    OpinionLabel label = OpinionLabel::Honest;
    double deviation = 0.0;  // signed reported - individual

    bool operator==(const FilterVerdict&) const = default;
};

/// Mean squared deviation of the received opinions from the buyer's own
/// rating of the seller. This is the round's honesty radius.
double second_moment(std::span<const Rating> opinions, Rating individual);

/// Labels each opinion honest when |reported - individual| <= m2 + eps,
/// with m2 computed once over the whole input. Output order matches input.
std::vector<FilterVerdict> classify(std::span<const Opinion> opinions, Rating individual,
                                    const EngineParams& params);

}  // namespace repshare

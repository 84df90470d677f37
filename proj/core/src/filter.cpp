#include "repshare/filter.hpp"

#include <cmath>
#include <stdexcept>

namespace repshare {

double second_moment(std::span<const Rating> opinions, Rating individual) {
    if (opinions.empty()) {
        throw std::domain_error("no opinions to filter");
    }
    double sum = 0.0;
    for (const Rating& sr : opinions) {
        const double d = sr.value() - individual.value();
        sum += d * d;
    }
    return sum / static_cast<double>(opinions.size());
}

std::vector<FilterVerdict> classify(std::span<const Opinion> opinions, Rating individual,
                                    const EngineParams& params) {
    std::vector<Rating> reported;
    reported.reserve(opinions.size());
    for (const Opinion& op : opinions) {
        reported.push_back(op.reported);
    }
    const double m2 = second_moment(reported, individual);

    std::vector<FilterVerdict> verdicts;
    verdicts.reserve(opinions.size());
    for (const Opinion& op : opinions) {
        const double d = op.reported.value() - individual.value();
        const bool honest = std::fabs(d) <= m2 + params.classify_eps;
        verdicts.push_back({op, honest ? OpinionLabel::Honest : OpinionLabel::Dishonest, d});
    }
    return verdicts;
}

}  // namespace repshare

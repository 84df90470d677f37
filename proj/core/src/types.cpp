#include "repshare/types.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace repshare {

namespace {

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

Rating::Rating(double v) {
    if (std::isnan(v) || v < 0.0) {
        throw std::domain_error("rating " + format_value(v) + " out of range: must be >= 0");
    }
    if (v >= 1.0) {
        throw std::domain_error("rating " + format_value(v) + " out of range: must be < 1");
    }
    value_ = v;
}

double max_rating_value() noexcept {
    return std::nextafter(1.0, 0.0);
}

Rating Rating::clamped(double v) noexcept {
    if (std::isnan(v) || v < 0.0) {
        v = 0.0;
    } else if (v >= 1.0) {
        v = max_rating_value();
    }
    Rating r;
    r.value_ = v;
    return r;
}

Rating make_rating(double v) {
    return Rating(v);
}

const char* to_string(AdvisorCategory c) noexcept {
    switch (c) {
        case AdvisorCategory::New: return "new";
        case AdvisorCategory::Reputed: return "reputed";
        case AdvisorCategory::NonReputed: return "non_reputed";
        case AdvisorCategory::DisReputed: return "dis_reputed";
    }
    return "unknown";
}

const char* to_string(OpinionLabel l) noexcept {
    return l == OpinionLabel::Honest ? "honest" : "dishonest";
}

const char* to_string(ExclusionReason r) noexcept {
    switch (r) {
        case ExclusionReason::DisReputedSender: return "dis_reputed_sender";
        case ExclusionReason::BelowRepThreshold: return "below_rep_threshold";
        case ExclusionReason::ClassifiedDishonest: return "classified_dishonest";
    }
    return "unknown";
}

std::vector<std::string> validate_params(const EngineParams& p) {
    std::vector<std::string> issues;
    auto in_unit_half_open = [](double v) { return v > 0.0 && v <= 1.0; };

    if (!in_unit_half_open(p.kappa)) issues.push_back("kappa must be in (0, 1]");
    if (!in_unit_half_open(p.alpha_hat)) issues.push_back("alpha_hat must be in (0, 1]");
    if (!in_unit_half_open(p.epsilon_hat)) issues.push_back("epsilon_hat must be in (0, 1]");
    if (!(p.lambda_decay > 0.0)) issues.push_back("lambda_decay must be > 0");
    if (!(p.penalty_p >= 1.0)) issues.push_back("penalty_p must be >= 1");
    if (!(p.exp_base > 1.0)) issues.push_back("exp_base must be > 1");
    if (!(p.j_step >= 0.0)) issues.push_back("j_step must be >= 0");
    if (!(p.rep_threshold > 0.0 && p.rep_threshold < 1.0)) {
        issues.push_back("rep_threshold must be in (0, 1)");
    }
    if (!(p.disrep_threshold > 0.0 && p.disrep_threshold < p.rep_threshold)) {
        issues.push_back("disrep_threshold must be in (0, rep_threshold)");
    }
    if (p.min_advisors == 0) issues.push_back("min_advisors must be >= 1");
    if (!in_unit_half_open(p.delta_init)) issues.push_back("delta_init must be in (0, 1]");
    if (!(p.delta_rate > 0.0 && p.delta_rate < 1.0)) {
        issues.push_back("delta_rate must be in (0, 1)");
    }
    if (!(p.delta_floor >= 0.0 && p.delta_floor <= p.delta_init)) {
        issues.push_back("delta_floor must be in [0, delta_init]");
    }
    if (!(p.classify_eps >= 0.0)) issues.push_back("classify_eps must be >= 0");
    return issues;
}

}  // namespace repshare

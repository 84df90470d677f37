#include "repshare/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace repshare {

double omega(double transaction_value, const EngineParams& params) {
    if (std::isnan(transaction_value) || transaction_value < 0.0) {
        throw std::domain_error("transaction value must be >= 0");
    }
    // The exponential underflows for huge x; keep the codomain [0, 1).
    return std::min(1.0 - std::pow(params.exp_base, -params.lambda_decay * transaction_value),
                    max_rating_value());
}

double phi(double transaction_value, const EngineParams& params) {
    return params.penalty_p * omega(transaction_value, params);
}

Rating reward(Rating ar, double omega_value) {
    return Rating::clamped(ar.value() + omega_value * (1.0 - ar.value()));
}

Rating penalize(Rating ar, double phi_value) {
    return Rating::clamped(ar.value() - phi_value * (1.0 - ar.value()));
}

AdvisorCategory recategorize(const AdvisorRecord& record, const EngineParams& params) {
    const double ar = record.reputation.value();
    if (record.category == AdvisorCategory::New && ar <= params.disrep_threshold) {
        return AdvisorCategory::New;
    }
    if (ar >= params.rep_threshold) {
        return AdvisorCategory::Reputed;
    }
    if (ar <= params.disrep_threshold) {
        return AdvisorCategory::DisReputed;
    }
    return AdvisorCategory::NonReputed;
}

void record_outcome(BuyerLedger& ledger, AgentId advisor, OpinionLabel verdict,
                    double transaction_value, const EngineParams& params) {
    auto [it, created] = ledger.records.try_emplace(advisor);
    AdvisorRecord& record = it->second;
    if (created) {
        record.advisor = advisor;
    }

    record.stats.total_count += 1;
    if (verdict == OpinionLabel::Honest) {
        record.stats.honest_count += 1;
        record.reputation = reward(record.reputation, omega(transaction_value, params));
    } else {
        record.reputation = penalize(record.reputation, phi(transaction_value, params));
    }
    record.category = recategorize(record, params);
}

}  // namespace repshare

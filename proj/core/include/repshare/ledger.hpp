#pragma once

#include <map>

#include "repshare/types.hpp"
#include "repshare/weighting.hpp"

namespace repshare {

struct AdvisorRecord {
    AgentId advisor = 0;
    Rating reputation;
    BehaviorStats stats;
    AdvisorCategory category = AdvisorCategory::New;

    bool operator==(const AdvisorRecord&) const = default;
};

/// One buyer's memory of every advisor it has judged, plus its current
/// exploration probability. Single writer: the owning buyer.
struct BuyerLedger {
    AgentId owner = 0;
    std::map<AgentId, AdvisorRecord> records;
    double delta = 1.0;

    bool operator==(const BuyerLedger&) const = default;
};

/// Reputation increase factor 1 - exp_base^(-lambda * x), in [0, 1).
/// Grows with the transaction value. Negative x is a domain error.
double omega(double transaction_value, const EngineParams& params);

/// Reputation decrease factor penalty_p * omega(x). At least omega(x)
/// whenever penalty_p >= 1.
double phi(double transaction_value, const EngineParams& params);

/// ar + omega * (1 - ar). Strictly below 1 for any ar < 1.
Rating reward(Rating ar, double omega_value);

/// ar - phi * (1 - ar), clamped at 0 so the rating range survives.
Rating penalize(Rating ar, double phi_value);

/// Total categorization over the updated reputation. A new advisor stays
/// new until its reputation first exceeds disrep_threshold; otherwise
/// reputed at >= rep_threshold, dis-reputed at <= disrep_threshold,
/// non-reputed in between.
AdvisorCategory recategorize(const AdvisorRecord& record, const EngineParams& params);

/// Applies one judged opinion: bump counts, reward or penalize by the
/// transaction-value factors, recategorize. First contact creates the
/// record as new with zero reputation.
void record_outcome(BuyerLedger& ledger, AgentId advisor, OpinionLabel verdict,
                    double transaction_value, const EngineParams& params);

}  // namespace repshare

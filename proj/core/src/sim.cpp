#include "repshare/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "repshare/random.hpp"
#include "repshare/weighting.hpp"

namespace repshare {

namespace {

bool is_liar(const AgentProfile& profile) {
    return profile.role == Role::Buyer && profile.behavior.kind != BehaviorKind::HonestAdvisor;
}

bool targets_seller(const Behavior& behavior, AgentId seller) {
    return std::find(behavior.targets.begin(), behavior.targets.end(), seller) !=
           behavior.targets.end();
}

}  // namespace

std::vector<std::string> validate_scenario(const ScenarioConfig& config) {
    std::vector<std::string> issues = validate_params(config.engine);

    std::size_t buyers = 0;
    std::size_t sellers = 0;
    std::set<AgentId> ids;
    std::set<AgentId> seller_ids;
    for (const AgentProfile& a : config.agents) {
        if (!ids.insert(a.id).second) {
            issues.push_back("duplicate agent id " + std::to_string(a.id));
        }
        if (a.role == Role::Seller) {
            ++sellers;
            seller_ids.insert(a.id);
            if (!(a.quality >= 0.0 && a.quality < 1.0)) {
                issues.push_back("seller " + std::to_string(a.id) +
                                 ": quality must be in [0, 1)");
            }
        } else {
            ++buyers;
        }
    }
    for (const AgentProfile& a : config.agents) {
        if (a.role != Role::Buyer) {
            continue;
        }
        const Behavior& b = a.behavior;
        if (b.kind == BehaviorKind::BallotStuffer || b.kind == BehaviorKind::BadMouther) {
            if (!(b.shift > 0.0 && b.shift < 1.0)) {
                issues.push_back("buyer " + std::to_string(a.id) +
                                 ": attack shift must be in (0, 1)");
            }
            for (AgentId t : b.targets) {
                if (!seller_ids.contains(t)) {
                    issues.push_back("buyer " + std::to_string(a.id) + ": target " +
                                     std::to_string(t) + " is not a seller");
                }
            }
        }
    }
    if (buyers == 0) issues.push_back("at least one buyer required");
    if (sellers == 0) issues.push_back("at least one seller required");
    if (config.rounds == 0) issues.push_back("rounds must be >= 1");
    if (!(config.ir_noise_sigma >= 0.0)) issues.push_back("ir_noise_sigma must be >= 0");

    const TransactionValueDist& tx = config.transaction_value;
    if (tx.kind == TransactionValueDist::Kind::Fixed) {
        if (!(tx.value >= 0.0)) issues.push_back("transaction value must be >= 0");
    } else {
        if (!(tx.lo >= 0.0 && tx.hi >= tx.lo)) {
            issues.push_back("transaction value range must satisfy 0 <= lo <= hi");
        }
    }
    return issues;
}

MarketState make_market(const ScenarioConfig& config) {
    MarketState state;
    state.config = config;
    for (const AgentProfile& a : config.agents) {
        state.profiles[a.id] = a;
        if (a.role == Role::Buyer) {
            state.buyers.push_back(a.id);
        } else {
            state.sellers.push_back(a.id);
        }
    }
    std::sort(state.buyers.begin(), state.buyers.end());
    std::sort(state.sellers.begin(), state.sellers.end());
    for (AgentId b : state.buyers) {
        BuyerLedger ledger;
        ledger.owner = b;
        ledger.delta = config.engine.delta_init;
        state.ledgers[b] = ledger;
    }
    return state;
}

Rating apply_attack(Rating true_quality, const Behavior& behavior, AgentId seller,
                    double noise_sigma, std::mt19937_64& rng) {
    const double q = true_quality.value();
    switch (behavior.kind) {
        case BehaviorKind::BallotStuffer:
            if (targets_seller(behavior, seller)) {
                return Rating::clamped(std::min(0.99, q + behavior.shift));
            }
            break;
        case BehaviorKind::BadMouther:
            if (targets_seller(behavior, seller)) {
                return Rating::clamped(std::max(0.0, q - behavior.shift));
            }
            break;
        case BehaviorKind::RandomRater:
            return Rating::clamped(uniform01(rng));
        case BehaviorKind::HonestAdvisor:
            break;
    }
    // Honest report (also non-target path of the colluders).
    return Rating::clamped(q + gaussian(rng, 0.0, noise_sigma));
}

RoundTrace run_round(MarketState& state, AgentId seller, AgentId buyer, double transaction_value,
                     std::mt19937_64& rng) {
    const ScenarioConfig& config = state.config;
    BuyerLedger& ledger = state.ledgers.at(buyer);
    const double quality = state.profiles.at(seller).quality;

    RoundTrace trace;
    trace.buyer = buyer;
    trace.seller = seller;
    trace.transaction_value = transaction_value;

    // Individual experience anchors the filter.
    trace.individual = Rating::clamped(quality + gaussian(rng, 0.0, config.ir_noise_sigma));

    std::set<AgentId> pool(state.buyers.begin(), state.buyers.end());
    pool.erase(buyer);
    trace.plan = select_advisors(ledger, pool, config.engine, rng());

    // Every solicited advisor responds; respond_policy only tells whether it
    // was obliged to. Responses are generated in ascending advisor order.
    for (AgentId advisor : trace.plan.targets) {
        Opinion op;
        op.advisor = advisor;
        op.seller = seller;
        op.time = trace.round;
        op.reported = apply_attack(Rating::clamped(quality),
                                   state.profiles.at(advisor).behavior, seller,
                                   config.ir_noise_sigma, rng);
        trace.received.push_back(op);
    }

    AdmissionResult admission =
        admit_opinions(trace.plan, trace.received, ledger, config.engine);
    for (const auto& [op, reason] : admission.excluded) {
        trace.shared.excluded.emplace_back(op.advisor, reason);
    }

    if (!admission.sufficient) {
        trace.insufficient = true;
        ledger.delta = decay_delta(ledger.delta, config.engine);
        return trace;
    }

    trace.verdicts = classify(admission.admitted, trace.individual, config.engine);
    {
        std::vector<Rating> reported;
        for (const Opinion& op : admission.admitted) reported.push_back(op.reported);
        trace.m2 = second_moment(reported, trace.individual);
    }

    std::vector<Contribution> honest;
    for (const FilterVerdict& v : trace.verdicts) {
        if (v.label == OpinionLabel::Honest) {
            BehaviorStats stats;  // zero history for first contact
            auto it = ledger.records.find(v.opinion.advisor);
            if (it != ledger.records.end()) {
                stats = it->second.stats;
            }
            honest.push_back({v.opinion.advisor, advisor_weight(stats, config.engine),
                              v.opinion.reported});
        } else {
            trace.shared.excluded.emplace_back(v.opinion.advisor,
                                               ExclusionReason::ClassifiedDishonest);
        }
    }
    trace.shared.contributors = honest;
    trace.shared.aggregate = aggregate(honest);

    // All verdicts of the round apply together.
    for (const FilterVerdict& v : trace.verdicts) {
        record_outcome(ledger, v.opinion.advisor, v.label, transaction_value, config.engine);
    }
    ledger.delta = decay_delta(ledger.delta, config.engine);
    return trace;
}

SimulationMetrics compute_metrics(std::span<const RoundTrace> traces,
                                  const ScenarioConfig& config) {
    std::map<AgentId, const AgentProfile*> profiles;
    for (const AgentProfile& a : config.agents) {
        profiles[a.id] = &a;
    }

    SimulationMetrics metrics;
    for (const RoundTrace& trace : traces) {
        MetricsRow row;
        row.round = trace.round;
        row.sr_absent = !trace.shared.aggregate.has_value();

        std::uint64_t tp = 0, fp = 0, fn = 0;
        for (const FilterVerdict& v : trace.verdicts) {
            const bool liar = is_liar(*profiles.at(v.opinion.advisor));
            const bool flagged = v.label == OpinionLabel::Dishonest;
            if (flagged && liar) ++tp;
            if (flagged && !liar) ++fp;
            if (!flagged && liar) ++fn;
        }
        if (tp + fp > 0) {
            row.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        }
        if (tp + fn > 0) {
            row.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        }
        if (trace.shared.aggregate) {
            row.agg_error = std::fabs(trace.shared.aggregate->value.value() -
                                      profiles.at(trace.seller)->quality);
        }
        metrics.per_round.push_back(row);
    }
    return metrics;
}

namespace {

void append_state_metrics(const MarketState& state, std::uint64_t round,
                          SimulationMetrics& metrics) {
    // Mean advisor reputation over every ledger that has judged it, and the
    // majority category (ties resolved toward the smaller enum value).
    std::map<AgentId, std::pair<double, std::uint32_t>> sums;
    std::map<AgentId, std::map<AdvisorCategory, std::uint32_t>> cats;
    for (const auto& [owner, ledger] : state.ledgers) {
        for (const auto& [advisor, record] : ledger.records) {
            auto& [sum, n] = sums[advisor];
            sum += record.reputation.value();
            n += 1;
            cats[advisor][record.category] += 1;
        }
    }
    for (const auto& [advisor, acc] : sums) {
        AdvisorRow row;
        row.round = round;
        row.advisor = advisor;
        row.reputation = acc.first / acc.second;
        std::uint32_t best = 0;
        for (const auto& [cat, n] : cats[advisor]) {
            if (n > best) {
                best = n;
                row.category = cat;
            }
        }
        metrics.advisor_trajectories.push_back(row);
    }

    double contamination_sum = 0.0;
    for (const auto& [owner, ledger] : state.ledgers) {
        std::uint32_t reputed = 0, liars = 0;
        for (const auto& [advisor, record] : ledger.records) {
            if (record.category != AdvisorCategory::Reputed) {
                continue;
            }
            ++reputed;
            if (is_liar(state.profiles.at(advisor))) {
                ++liars;
            }
        }
        if (reputed > 0) {
            contamination_sum += static_cast<double>(liars) / static_cast<double>(reputed);
        }
    }
    metrics.contamination.push_back(contamination_sum /
                                    static_cast<double>(state.ledgers.size()));
}

void finalize_metrics(const MarketState& state, SimulationMetrics& metrics) {
    if (!metrics.contamination.empty()) {
        metrics.final_contamination = metrics.contamination.back();
    }
    double liar_sum = 0.0, honest_sum = 0.0;
    std::uint64_t liar_n = 0, honest_n = 0;
    for (const auto& [owner, ledger] : state.ledgers) {
        for (const auto& [advisor, record] : ledger.records) {
            if (is_liar(state.profiles.at(advisor))) {
                liar_sum += record.reputation.value();
                ++liar_n;
            } else {
                honest_sum += record.reputation.value();
                ++honest_n;
            }
        }
    }
    if (liar_n > 0) metrics.final_mean_liar_reputation = liar_sum / liar_n;
    if (honest_n > 0) metrics.final_mean_honest_reputation = honest_sum / honest_n;
}

}  // namespace

SimulationMetrics run_scenario(const ScenarioConfig& config, std::vector<RoundTrace>* traces_out,
                               MarketState* final_state_out) {
    const std::vector<std::string> issues = validate_scenario(config);
    if (!issues.empty()) {
        std::string msg = "invalid scenario:";
        for (const std::string& s : issues) {
            msg += "\n  - " + s;
        }
        throw std::invalid_argument(msg);
    }

    MarketState state = make_market(config);
    std::vector<RoundTrace> traces;
    traces.reserve(config.rounds);

    SimulationMetrics metrics;
    for (std::uint64_t round = 0; round < config.rounds; ++round) {
        std::mt19937_64 rng(mix_seed(config.seed, round));
        const AgentId buyer = state.buyers[round % state.buyers.size()];
        const AgentId seller =
            state.sellers[(round / state.buyers.size()) % state.sellers.size()];

        double x = config.transaction_value.value;
        if (config.transaction_value.kind == TransactionValueDist::Kind::Uniform) {
            x = uniform_in(rng, config.transaction_value.lo, config.transaction_value.hi);
        }

        RoundTrace trace = run_round(state, seller, buyer, x, rng);
        trace.round = round;
        for (Opinion& op : trace.received) op.time = round;
        for (FilterVerdict& v : trace.verdicts) v.opinion.time = round;

        append_state_metrics(state, round, metrics);
        traces.push_back(std::move(trace));
    }

    SimulationMetrics judged = compute_metrics(traces, config);
    metrics.per_round = std::move(judged.per_round);
    finalize_metrics(state, metrics);

    if (traces_out) {
        *traces_out = std::move(traces);
    }
    if (final_state_out) {
        *final_state_out = std::move(state);
    }
    return metrics;
}

SimulationMetrics run_scenario(const ScenarioConfig& config) {
    return run_scenario(config, nullptr, nullptr);
}

}  // namespace repshare

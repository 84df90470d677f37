#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace repshare {

using AgentId = std::uint32_t;
using StepIndex = std::uint64_t;

/// A reputation value, always in [0, 1). The constructor rejects anything
/// out of range; update paths that can mathematically overshoot use clamped().
class Rating {
public:
    Rating() = default;
    explicit Rating(double v);            // throws std::domain_error out of [0,1)
    static Rating clamped(double v) noexcept;

    double value() const noexcept { return value_; }

    friend bool operator==(const Rating&, const Rating&) = default;
    friend auto operator<=>(const Rating&, const Rating&) = default;

private:
    double value_ = 0.0;
};

Rating make_rating(double v);

/// Largest admissible rating (one ulp below 1.0), used by clamping paths.
double max_rating_value() noexcept;

enum class AdvisorCategory { New, Reputed, NonReputed, DisReputed };
enum class OpinionLabel { Honest, Dishonest };

enum class ExclusionReason {
    DisReputedSender,
    BelowRepThreshold,
    ClassifiedDishonest,
};

const char* to_string(AdvisorCategory c) noexcept;
const char* to_string(OpinionLabel l) noexcept;
const char* to_string(ExclusionReason r) noexcept;

/// One advisor's reported seller reputation, with provenance.
struct Opinion {
    AgentId advisor = 0;
    AgentId seller = 0;
    Rating reported;
    StepIndex time = 0;

    bool operator==(const Opinion&) const = default;
};

/// Every engine constant in one place. Defaults reproduce the reference
/// marketplace configuration used by the case-study fixture.
struct EngineParams {
    double kappa = 0.95;            // weight curve steepness, (0,1]
    double alpha_hat = 0.6;         // %-of-honest-past-opinions coefficient, (0,1]
    double epsilon_hat = 0.3;       // honest-count coefficient, (0,1]
    double lambda_decay = 0.001;    // transaction-value decay for reward/penalty curves
    double penalty_p = 1.5;         // penalty multiplier, >= 1
    double exp_base = 1.01;         // base of the saturating exponentials, > 1
    double j_step = 0.01;           // incentive increment per honest opinion
    double rep_threshold = 0.38;    // reputed cutoff, (0,1)
    double disrep_threshold = 0.15; // dis-reputed cutoff, (0, rep_threshold)
    std::uint32_t min_advisors = 2; // minimum opinions before aggregating
    double delta_init = 1.0;        // initial exploration probability, (0,1]
    double delta_rate = 0.95;       // geometric decay per round, (0,1)
    double delta_floor = 0.05;      // exploration floor, [0, delta_init]
    double classify_eps = 1e-12;    // absolute slack on the honesty boundary

    bool operator==(const EngineParams&) const = default;
};

/// Returns every violated constraint, not just the first. Empty means valid.
std::vector<std::string> validate_params(const EngineParams& p);

}  // namespace repshare

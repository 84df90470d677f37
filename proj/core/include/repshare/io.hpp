#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "repshare/sim.hpp"

namespace repshare {

/// Malformed input text (position included in the message).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structurally sound input that violates constraints; carries every issue.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::vector<std::string>& issues);
    std::vector<std::string> issues;
};

/// Filesystem trouble, path included in the message.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Strict scenario parsing: unknown keys are rejected, all validation
/// failures are reported together.
ScenarioConfig parse_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario_text(std::string_view text);

/// One-shot filter input: JSON array of {"advisor": id, "reported": value}.
std::vector<Opinion> parse_opinions(const std::filesystem::path& path);

/// FNV-1a 64 over the raw bytes, as fixed-width hex.
std::string digest_bytes(std::string_view bytes);

/// Outcome of replaying the embedded marketplace fixture through the whole
/// pipeline, with the expected values it was checked against.
struct CaseStudyCheck {
    double m2 = 0.0;
    std::vector<std::pair<AgentId, OpinionLabel>> verdicts;
    std::vector<Contribution> contributors;
    double or_others = 0.0;
    double omega_value = 0.0;
    double phi_value = 0.0;
    std::map<AgentId, double> updated_reputation;
    std::vector<std::pair<AgentId, ExclusionReason>> excluded;
    bool pass = false;
    std::vector<std::string> mismatches;  // expected-vs-computed diffs
};

struct RunReport {
    std::string scenario_digest;
    EngineParams engine;
    SimulationMetrics metrics;
    std::vector<RoundTrace> traces;  // populated in verbose runs only
    bool include_traces = false;
    std::optional<CaseStudyCheck> case_study;
};

/// Replays the embedded fixture: five received opinions, one dropped before
/// filtering, one flagged dishonest, aggregate and the four reputation
/// updates checked against frozen expected values.
RunReport run_case_study();

enum class OutputFormat { Csv, Json };

/// Writes metrics.csv + advisors.csv (Csv) and report.json (Json) into
/// out_dir. Deterministic bytes for identical reports; whole-file atomic.
void emit_results(const RunReport& report, const std::set<OutputFormat>& formats,
                  const std::filesystem::path& out_dir);

/// Versioned ledger snapshot; load(persist(L)) == L, field for field.
void persist_ledger(const BuyerLedger& ledger, const std::filesystem::path& path);
BuyerLedger load_ledger(const std::filesystem::path& path);

}  // namespace repshare

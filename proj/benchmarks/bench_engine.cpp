#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "repshare/repshare.hpp"

using namespace repshare;

namespace {

std::vector<Opinion> make_opinions(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<Opinion> ops;
    for (std::size_t i = 0; i < n; ++i) {
        ops.push_back({static_cast<AgentId>(i), 0, Rating(uniform01(gen)), 0});
    }
    return ops;
}

void BM_classify(benchmark::State& state) {
    const auto ops = make_opinions(static_cast<std::size_t>(state.range(0)), 17);
    const Rating individual(0.5);
    const EngineParams params;
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify(ops, individual, params));
    }
}
BENCHMARK(BM_classify)->Arg(8)->Arg(64)->Arg(512);

void BM_aggregate(benchmark::State& state) {
    std::mt19937_64 gen(23);
    std::vector<Contribution> cs;
    for (std::int64_t i = 0; i < state.range(0); ++i) {
        cs.push_back({static_cast<AgentId>(i), uniform_in(gen, 0.01, 1.0),
                      Rating(uniform01(gen))});
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(aggregate(cs));
    }
}
BENCHMARK(BM_aggregate)->Arg(8)->Arg(64)->Arg(512);

void BM_record_outcome(benchmark::State& state) {
    const EngineParams params;
    std::mt19937_64 gen(29);
    BuyerLedger ledger;
    for (auto _ : state) {
        record_outcome(ledger, 1 + static_cast<AgentId>(gen() % 64),
                       (gen() & 1) ? OpinionLabel::Honest : OpinionLabel::Dishonest, 1800.0,
                       params);
    }
}
BENCHMARK(BM_record_outcome);

void BM_scenario_round(benchmark::State& state) {
    ScenarioConfig config;
    for (AgentId id = 1; id <= static_cast<AgentId>(state.range(0)); ++id) {
        AgentProfile a;
        a.id = id;
        a.role = Role::Buyer;
        if (id % 4 == 0) {
            a.behavior = {BehaviorKind::BallotStuffer, {101}, 0.3};
        }
        config.agents.push_back(a);
    }
    AgentProfile s;
    s.id = 101;
    s.role = Role::Seller;
    s.quality = 0.6;
    config.agents.push_back(s);
    config.ir_noise_sigma = 0.02;
    config.rounds = 64;
    config.seed = 5;

    for (auto _ : state) {
        benchmark::DoNotOptimize(run_scenario(config));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(config.rounds));
}
BENCHMARK(BM_scenario_round)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();

#pragma once

#include "qecforge/agent.hpp"
#include "qecforge/estimate.hpp"
#include "qecforge/lattice.hpp"
#include "qecforge/noise.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace qecforge {

// One phase of a scenario: the channel, the reward threshold and the agent's
// stage hyperparameters. Scenarios with a mid-run switch carry two stages.
struct StageConfig {
    NoiseProfile noise;
    double p_l_rew = 0.001;
    std::uint64_t estimator_trials = 1'000'000;
    PsHyper hyper;
};

struct ScenarioConfig {
    std::string name;
    int rows = 3, cols = 3;
    int qubit_budget = 50;
    std::int64_t trials = 10'000;
    int agents = 60;
    StageConfig stage1;
    std::optional<StageConfig> stage2;
    std::int64_t stage2_start = -1; // first trial index run under stage2
    EstimatorOptions estimator;
    std::uint64_t seed = 1;
    bool cache_estimates = false;
    int threads = 1;
};

struct StepTrace {
    std::uint64_t percept_digest = 0;
    Action action;
    double p_l_before = 0.0;
};

struct TrialRecord {
    std::int64_t trial = 0;
    int qubits_added = 0;
    bool rewarded = false;
    bool dead_end = false;  // ran out of legal actions before the budget
    double final_p_l = 0.0; // estimate that ended the trial
    std::vector<StepTrace> steps;
};

struct AgentRun {
    int agent_index = 0;
    std::uint64_t agent_seed = 0;
    std::vector<TrialRecord> trials;
    std::string final_network; // serialized snapshot
    std::optional<CodeLattice> best_lattice;
    int best_qubits = -1;
};

struct CurvePoint {
    std::int64_t trial = 0;
    double mean_qubits = 0.0;
    double std_qubits = 0.0;
    double reward_rate = 0.0;
    double mean_final_pl = 0.0;
};

struct ExperimentResult {
    std::vector<AgentRun> agents;
    std::vector<CurvePoint> curve;
};

// Reuses past estimates for revisited codes; keyed by percept digest,
// profile name and trial count. Off by default since hits change the
// reward stochasticity.
class EstimateCache {
public:
    std::optional<double> lookup(std::uint64_t digest, const std::string& profile,
                                 std::uint64_t trials) const;
    void store(std::uint64_t digest, const std::string& profile, std::uint64_t trials, double p_hat);

private:
    std::unordered_map<std::string, double> map_;
};

// One trial: grow from the root until the estimate drops below the stage
// threshold (reward 1), the qubit budget is exhausted, or no action is legal.
TrialRecord run_trial(const ScenarioConfig& cfg, const StageConfig& stage, const CodeLattice& root,
                      ClipNetwork& net, std::int64_t trial, std::uint64_t agent_seed,
                      EstimateCache* cache);

// Runs the agent ensemble and aggregates the learning curve. Agents run
// independently (optionally across threads) with seeds derived from
// cfg.seed; results are identical for any thread count.
ExperimentResult run_experiment(const ScenarioConfig& cfg,
                                const std::string* pretrained_snapshot = nullptr);

} // namespace qecforge

#include "qecforge/environment.hpp"

#include "qecforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace qecforge {

std::optional<double> EstimateCache::lookup(std::uint64_t digest, const std::string& profile,
                                            std::uint64_t trials) const {
    std::ostringstream key;
    key << std::hex << digest << '/' << profile << '/' << std::dec << trials;
    auto it = map_.find(key.str());
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void EstimateCache::store(std::uint64_t digest, const std::string& profile, std::uint64_t trials,
                          double p_hat) {
    std::ostringstream key;
    key << std::hex << digest << '/' << profile << '/' << std::dec << trials;
    map_.emplace(key.str(), p_hat);
}

namespace {

double estimate_for_step(const ScenarioConfig& cfg, const StageConfig& stage, const CodeLattice& lat,
                         const Percept& percept, std::uint64_t agent_seed, std::int64_t trial,
                         int step, EstimateCache* cache) {
    if (cache) {
        if (auto hit = cache->lookup(percept.digest, stage.noise.name, stage.estimator_trials))
            return *hit;
    }
    const ResolvedNoise table = resolve_profile(stage.noise, lat);
    const std::uint64_t est_seed = mix_seed(agent_seed, static_cast<std::uint64_t>(trial),
                                            static_cast<std::uint64_t>(step));
    const RateEstimate est =
        estimate_logical_rate(lat, table, stage.estimator_trials, est_seed, cfg.estimator);
    if (cache) cache->store(percept.digest, stage.noise.name, stage.estimator_trials, est.p_hat);
    return est.p_hat;
}

} // namespace

TrialRecord run_trial(const ScenarioConfig& cfg, const StageConfig& stage, const CodeLattice& root,
                      ClipNetwork& net, std::int64_t trial, std::uint64_t agent_seed,
                      EstimateCache* cache) {
    TrialRecord rec;
    rec.trial = trial;
    net.set_hyper(stage.hyper);

    CodeLattice lat = root;
    PhiloxStream policy_rng(agent_seed, /*domain=*/7, static_cast<std::uint64_t>(trial));
    int step = 0;
    while (true) {
        const Percept percept = lat.percept();
        const double p_l =
            estimate_for_step(cfg, stage, lat, percept, agent_seed, trial, step, cache);
        rec.final_p_l = p_l;
        if (p_l < stage.p_l_rew) {
            net.update(1.0);
            net.end_trial(true, trial);
            rec.rewarded = true;
            break;
        }
        if (rec.qubits_added >= cfg.qubit_budget) {
            net.update(0.0);
            net.end_trial(false, trial);
            break;
        }
        const std::vector<Action> actions = lat.enumerate_actions();
        if (actions.empty()) {
            net.update(0.0);
            net.end_trial(false, trial);
            rec.dead_end = true;
            break;
        }
        const int clip = net.perceive(percept, actions, trial);
        const int j = net.select_action(clip, policy_rng);
        rec.steps.push_back(StepTrace{percept.digest, actions[j], p_l});
        lat = lat.apply(actions[j]);
        rec.qubits_added++;
        net.update(0.0);
        ++step;
    }
    if (!rec.rewarded) rec.steps.clear();
    return rec;
}

ExperimentResult run_experiment(const ScenarioConfig& cfg, const std::string* pretrained_snapshot) {
    ExperimentResult result;
    result.agents.resize(cfg.agents);
    const CodeLattice root = CodeLattice::torus_grid(cfg.rows, cfg.cols);

    auto run_agent = [&](int a) {
        AgentRun& run = result.agents[a];
        run.agent_index = a;
        run.agent_seed = mix_seed(cfg.seed, 0x5eedull, static_cast<std::uint64_t>(a));
        ClipNetwork net =
            pretrained_snapshot
                ? [&] {
                      std::istringstream in(*pretrained_snapshot);
                      return ClipNetwork::load(in);
                  }()
                : ClipNetwork(cfg.stage1.hyper);
        EstimateCache cache;
        EstimateCache* cache_ptr = cfg.cache_estimates ? &cache : nullptr;

        run.trials.reserve(cfg.trials);
        for (std::int64_t t = 0; t < cfg.trials; ++t) {
            const StageConfig& stage =
                (cfg.stage2 && cfg.stage2_start >= 0 && t >= cfg.stage2_start) ? *cfg.stage2
                                                                               : cfg.stage1;
            TrialRecord rec = run_trial(cfg, stage, root, net, t, run.agent_seed, cache_ptr);
            if (rec.rewarded && (run.best_qubits < 0 || rec.qubits_added < run.best_qubits)) {
                run.best_qubits = rec.qubits_added;
                CodeLattice lat = root;
                for (const StepTrace& s : rec.steps) lat = lat.apply(s.action);
                run.best_lattice = std::move(lat);
            }
            run.trials.push_back(std::move(rec));
        }
        std::ostringstream snap;
        net.save(snap);
        run.final_network = snap.str();
    };

    const int threads = std::max(1, std::min(cfg.threads, cfg.agents));
    if (threads == 1) {
        for (int a = 0; a < cfg.agents; ++a) run_agent(a);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (int a = next.fetch_add(1); a < cfg.agents; a = next.fetch_add(1)) run_agent(a);
            });
        for (auto& th : pool) th.join();
    }

    result.curve.resize(cfg.trials);
    for (std::int64_t t = 0; t < cfg.trials; ++t) {
        CurvePoint& pt = result.curve[t];
        pt.trial = t;
        double sum = 0, sum2 = 0, pl = 0;
        int rewarded = 0;
        for (const AgentRun& run : result.agents) {
            const TrialRecord& rec = run.trials[t];
            const double q = rec.qubits_added;
            sum += q;
            sum2 += q * q;
            pl += rec.final_p_l;
            rewarded += rec.rewarded ? 1 : 0;
        }
        const double n = cfg.agents;
        pt.mean_qubits = sum / n;
        pt.std_qubits = std::sqrt(std::max(0.0, sum2 / n - pt.mean_qubits * pt.mean_qubits));
        pt.reward_rate = rewarded / n;
        pt.mean_final_pl = pl / n;
    }
    return result;
}

} // namespace qecforge

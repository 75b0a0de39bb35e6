#include "qecforge/decode.hpp"
#include "qecforge/errors.hpp"
#include "qecforge/estimate.hpp"
#include "qecforge/io.hpp"
#include "qecforge/kernels.hpp"
#include "qecforge/scenarios.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <thread>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qf = qecforge;
namespace fs = std::filesystem;

namespace {

int env_threads() {
    if (const char* v = std::getenv("QECFORGE_THREADS")) {
        const int n = std::atoi(v);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void finish_manifest(qf::RunManifest m, const fs::path& out_dir, const Timer& timer) {
    m.wall_time_s = timer.seconds();
    qf::write_manifest(m, out_dir / "manifest.json");
}

std::uint64_t digest_string(const std::string& s) { return qf::fnv1a64(s); }

int cmd_census(int depth, int rows, int cols, const std::string& out_dir,
               const std::vector<std::string>& argv) {
    if (depth < 0 || depth > 4)
        throw qf::SizeGuardError("census depth must be between 0 and 4 (counts grow ~50x per level)");
    Timer timer;
    const qf::CodeLattice root = qf::CodeLattice::torus_grid(rows, cols);
    const std::vector<std::uint64_t> counts = qf::census_counts(root, depth);
    for (std::size_t r = 0; r < counts.size(); ++r)
        std::cout << "C(" << r << ") = " << counts[r] << "\n";

    fs::create_directories(out_dir);
    {
        std::ofstream csv(fs::path(out_dir) / "census.csv");
        csv << "# qecforge census v1\ndepth,count\n";
        for (std::size_t r = 0; r < counts.size(); ++r) csv << r << ',' << counts[r] << '\n';
    }
    qf::RunManifest m;
    m.command = "census";
    m.args = argv;
    m.config_digest = digest_string("census/" + std::to_string(rows) + "x" + std::to_string(cols) +
                                    "/" + std::to_string(depth));
    m.outputs = {"census.csv"};
    finish_manifest(m, out_dir, timer);
    return 0;
}

int cmd_estimate(const std::string& lattice_path, const std::string& noise_spec, std::uint64_t trials,
                 std::uint64_t seed, bool exact, const std::string& pipeline, int threads) {
    const qf::CodeLattice lat = qf::load_lattice_file(lattice_path);
    const qf::NoiseProfile profile = qf::noise_from_spec(noise_spec);
    const qf::ResolvedNoise table = qf::resolve_profile(profile, lat);

    qf::EstimatorOptions opts;
    opts.threads = threads;
    if (pipeline == "unionfind") opts.pipeline = qf::NoisePipeline::pauli_union_find;
    else if (pipeline != "erasure") throw qf::ConfigError("pipeline must be erasure or unionfind");

    if (exact) {
        const double p = qf::exact_logical_rate(lat, table, opts);
        std::cout << "exact_p = " << p << "\n";
        return 0;
    }
    const qf::RateEstimate est = qf::estimate_logical_rate(lat, table, trials, seed, opts);
    std::cout << "p_hat = " << est.p_hat << " +- " << est.std_err << "  (trials " << est.trials
              << ", seed " << est.seed << ")\n";
    return 0;
}

int cmd_train(const std::string& scenario_spec, int agents, std::int64_t trials,
              std::int64_t estimator_trials, bool desk_scale, const std::string& pretrained,
              std::uint64_t seed, bool seed_set, bool cache, const std::string& out_dir, int threads,
              const std::vector<std::string>& argv) {
    qf::ScenarioConfig cfg = qf::scenario_from_spec(scenario_spec);
    if (desk_scale) qf::apply_desk_scale(cfg);
    if (agents == 0 || trials == 0) throw qf::ConfigError("agents and trials must be positive");
    if (agents > 0) cfg.agents = agents;
    if (trials > 0) cfg.trials = trials;
    if (estimator_trials > 0) {
        cfg.stage1.estimator_trials = static_cast<std::uint64_t>(estimator_trials);
        if (cfg.stage2) cfg.stage2->estimator_trials = static_cast<std::uint64_t>(estimator_trials);
    }
    if (seed_set) cfg.seed = seed;
    cfg.cache_estimates = cache;
    cfg.threads = threads;

    std::string snapshot;
    if (!pretrained.empty()) {
        std::ifstream in(pretrained);
        if (!in) throw qf::ConfigError("cannot read snapshot " + pretrained);
        std::ostringstream ss;
        ss << in.rdbuf();
        snapshot = ss.str();
    }

    Timer timer;
    const qf::ExperimentResult result =
        qf::run_experiment(cfg, snapshot.empty() ? nullptr : &snapshot);

    fs::create_directories(out_dir);
    std::vector<std::string> outputs;
    {
        std::ofstream csv(fs::path(out_dir) / "curve.csv");
        qf::write_curve_csv(result.curve, csv);
        outputs.push_back("curve.csv");
    }
    {
        std::ofstream csv(fs::path(out_dir) / "trials.csv");
        qf::write_trials_csv(result.agents, csv);
        outputs.push_back("trials.csv");
    }
    // Agents ranked by mean qubits over the last tenth of trials (budget
    // charged when unrewarded); best snapshots and terminal codes saved.
    std::vector<std::pair<double, int>> ranking;
    const std::int64_t window = std::max<std::int64_t>(1, cfg.trials / 10);
    for (const qf::AgentRun& run : result.agents) {
        double sum = 0;
        for (std::int64_t t = cfg.trials - window; t < cfg.trials; ++t)
            sum += run.trials[t].qubits_added;
        ranking.push_back({sum / static_cast<double>(window), run.agent_index});
    }
    std::sort(ranking.begin(), ranking.end());
    const int top = std::min<int>(3, ranking.size());
    for (int i = 0; i < top; ++i) {
        const qf::AgentRun& run = result.agents[ranking[i].second];
        const std::string snap_name = "best" + std::to_string(i) + "_network.txt";
        std::ofstream snap(fs::path(out_dir) / snap_name);
        snap << run.final_network;
        outputs.push_back(snap_name);
        if (run.best_lattice) {
            const std::string lat_name = "best" + std::to_string(i) + "_code.lat";
            qf::save_lattice_file(*run.best_lattice, fs::path(out_dir) / lat_name);
            outputs.push_back(lat_name);
        }
    }
    std::ostringstream cfg_dump;
    qf::save_scenario(cfg, cfg_dump);
    {
        std::ofstream scenario_out(fs::path(out_dir) / "scenario.txt");
        scenario_out << cfg_dump.str();
        outputs.push_back("scenario.txt");
    }

    qf::RunManifest m;
    m.command = "train";
    m.args = argv;
    m.seed = cfg.seed;
    m.config_digest = digest_string(cfg_dump.str());
    m.threads = threads;
    m.outputs = outputs;
    finish_manifest(m, out_dir, timer);

    const qf::CurvePoint& last = result.curve.back();
    std::cout << "trials " << cfg.trials << ", agents " << cfg.agents << ": final mean qubits "
              << last.mean_qubits << ", reward rate " << last.reward_rate << "\n";
    return 0;
}

int cmd_explore(double p_expl, int radius, const std::string& noise_spec, std::uint64_t trials,
                std::uint64_t seed, const std::string& out_dir, int threads,
                const std::vector<std::string>& argv) {
    if (!(p_expl > 0.0 && p_expl <= 1.0)) throw qf::ConfigError("p_expl must lie in (0, 1]");
    Timer timer;
    const qf::NoiseProfile profile = qf::noise_from_spec(noise_spec);
    qf::EstimatorOptions opts;
    opts.threads = threads;

    struct Node {
        qf::CodeLattice lat;
        std::int64_t parent;
        int depth;
        qf::Action action;
    };
    std::vector<Node> frontier;
    frontier.push_back({qf::CodeLattice::torus_grid(3, 3), -1, 0, {}});

    fs::create_directories(out_dir);
    std::ofstream csv(fs::path(out_dir) / "explore.csv");
    csv << "# qecforge explore v1\n";
    csv << "node_id,parent_id,depth,d,v,p1,p2,n_edges,p_hat,std_err\n";

    qf::PhiloxStream branch_rng(seed, /*domain=*/11);
    std::int64_t next_id = 0;
    std::size_t at = 0;
    while (at < frontier.size()) {
        const Node node = frontier[at]; // by value: frontier may reallocate
        const std::int64_t id = next_id++;
        const qf::ResolvedNoise table = qf::resolve_profile(profile, node.lat);
        const qf::RateEstimate est = qf::estimate_logical_rate(
            node.lat, table, trials, qf::mix_seed(seed, static_cast<std::uint64_t>(id)), opts);
        csv << id << ',' << node.parent << ',' << node.depth << ',';
        if (node.parent >= 0)
            csv << int(node.action.d) << ',' << node.action.v << ',' << node.action.p1 << ','
                << node.action.p2 << ',';
        else
            csv << ",,,,";
        csv << node.lat.edge_count() << ',' << est.p_hat << ',' << est.std_err << '\n';

        if (node.depth < radius) {
            for (const qf::Action& a : node.lat.enumerate_actions()) {
                // depth-1 children are always expanded, deeper ones with
                // probability p_expl each
                const bool take = node.depth == 0 || branch_rng.next_double() < p_expl;
                if (take) frontier.push_back({node.lat.apply(a), id, node.depth + 1, a});
            }
        }
        ++at;
    }
    std::cout << "explored " << next_id << " codes\n";

    qf::RunManifest m;
    m.command = "explore";
    m.args = argv;
    m.seed = seed;
    m.threads = threads;
    m.outputs = {"explore.csv"};
    finish_manifest(m, out_dir, timer);
    return 0;
}

int cmd_decode_bench(const std::vector<std::string>& lattice_files, int from_root_depth, double p,
                     std::uint64_t trials, std::uint64_t seed, const std::string& pipeline,
                     const std::string& sector_arg, const std::string& out_dir, int threads,
                     const std::vector<std::string>& argv) {
    Timer timer;
    std::vector<qf::CodeLattice> codes;
    for (const std::string& f : lattice_files) codes.push_back(qf::load_lattice_file(f));
    if (from_root_depth >= 0) {
        if (from_root_depth > 2) throw qf::SizeGuardError("--from-root-depth capped at 2");
        std::vector<qf::CodeLattice> level{qf::CodeLattice::torus_grid(3, 3)};
        codes.push_back(level[0]);
        for (int d = 0; d < from_root_depth; ++d) {
            std::vector<qf::CodeLattice> next_level;
            for (const qf::CodeLattice& lat : level)
                for (const qf::Action& a : lat.enumerate_actions()) next_level.push_back(lat.apply(a));
            for (const qf::CodeLattice& lat : next_level) codes.push_back(lat);
            level = std::move(next_level);
        }
    }
    if (codes.empty()) throw qf::ConfigError("no codes: pass lattice files or --from-root-depth");

    qf::EstimatorOptions opts;
    opts.threads = threads;
    if (pipeline == "unionfind") opts.pipeline = qf::NoisePipeline::pauli_union_find;
    else if (pipeline != "erasure") throw qf::ConfigError("pipeline must be erasure or unionfind");

    std::vector<qf::Sector> sectors;
    if (sector_arg == "z") sectors = {qf::Sector::Z};
    else if (sector_arg == "x") sectors = {qf::Sector::X};
    else if (sector_arg == "both") sectors = {qf::Sector::Z, qf::Sector::X};
    else throw qf::ConfigError("sector must be z, x or both");

    fs::create_directories(out_dir);
    std::ofstream csv(fs::path(out_dir) / "decode_bench.csv");
    csv << "# qecforge decode-bench v1\n";
    csv << "code_id,n_edges,sector,p,trials,failures,rate,stderr\n";
    for (std::size_t i = 0; i < codes.size(); ++i) {
        qf::NoiseProfile profile;
        profile.name = "bench";
        profile.base_pz = p; // Z errors; the X sector is probed via the dual
        profile.base_px = p;
        const qf::ResolvedNoise table = qf::resolve_profile(profile, codes[i]);
        for (qf::Sector s : sectors) {
            const qf::RateEstimate est = qf::estimate_sector_rate(
                codes[i], table, s, trials, qf::mix_seed(seed, i, s == qf::Sector::Z ? 0 : 1), opts);
            csv << i << ',' << codes[i].edge_count() << ',' << (s == qf::Sector::Z ? 'z' : 'x') << ','
                << p << ',' << trials << ','
                << static_cast<std::uint64_t>(std::llround(est.p_hat * trials)) << ',' << est.p_hat
                << ',' << est.std_err << '\n';
        }
    }
    std::cout << "benchmarked " << codes.size() << " codes\n";

    qf::RunManifest m;
    m.command = "decode-bench";
    m.args = argv;
    m.seed = seed;
    m.threads = threads;
    m.outputs = {"decode_bench.csv"};
    finish_manifest(m, out_dir, timer);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qecforge: adaptable toric-code memories, erasure decoding, and a "
                 "projective-simulation optimizer"};
    app.require_subcommand(1);
    const std::vector<std::string> raw_args(argv + 1, argv + argc);
    const int threads = env_threads();

    // census
    auto* census = app.add_subcommand("census", "count deformation sequences from the root");
    int census_depth = 3, census_rows = 3, census_cols = 3;
    std::string census_out = "census_out";
    census->add_option("--depth", census_depth, "levels to count (max 4)");
    census->add_option("--rows", census_rows);
    census->add_option("--cols", census_cols);
    census->add_option("--out", census_out, "output directory");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "logical error rate of one code");
    std::string est_lattice, est_noise = "iid_z:0.1", est_pipeline = "erasure";
    std::uint64_t est_trials = 100'000, est_seed = 1;
    bool est_exact = false;
    estimate->add_option("lattice", est_lattice, "lattice file")->required();
    estimate->add_option("--noise", est_noise, "noise profile name or spec file");
    estimate->add_option("--trials", est_trials);
    estimate->add_option("--seed", est_seed);
    estimate->add_flag("--exact", est_exact, "exhaustive oracle (codes up to 20 edges)");
    estimate->add_option("--pipeline", est_pipeline, "erasure | unionfind");

    // train
    auto* train = app.add_subcommand("train", "run a learning scenario");
    std::string train_scenario, train_pretrained, train_out = "train_out";
    int train_agents = -1;
    std::int64_t train_trials = -1, train_est_trials = -1;
    std::uint64_t train_seed = 0;
    bool train_desk = false, train_cache = false;
    train->add_option("scenario", train_scenario, "scenario name or file")->required();
    train->add_option("--agents", train_agents);
    train->add_option("--trials", train_trials);
    train->add_option("--estimator-trials", train_est_trials);
    train->add_flag("--desk-scale", train_desk, "workstation-sized preset");
    train->add_option("--pretrained", train_pretrained, "warm-start network snapshot");
    auto* seed_opt = train->add_option("--seed", train_seed);
    train->add_flag("--cache", train_cache, "reuse estimates for revisited codes");
    train->add_option("--out", train_out, "output directory");

    // explore
    auto* explore = app.add_subcommand("explore", "random-branch survey of the code space");
    double exp_p = 0.03;
    int exp_radius = 8;
    std::string exp_noise = "iid_z:0.15", exp_out = "explore_out";
    std::uint64_t exp_trials = 10'000, exp_seed = 1;
    explore->add_option("--p-expl", exp_p, "per-successor continuation probability");
    explore->add_option("--radius", exp_radius);
    explore->add_option("--noise", exp_noise);
    explore->add_option("--trials", exp_trials, "estimator trials per node");
    explore->add_option("--seed", exp_seed);
    explore->add_option("--out", exp_out);

    // decode-bench
    auto* bench = app.add_subcommand("decode-bench", "per-code decoder failure rates");
    std::vector<std::string> bench_files;
    int bench_depth = -1;
    double bench_p = 0.1;
    std::uint64_t bench_trials = 10'000, bench_seed = 1;
    std::string bench_pipeline = "erasure", bench_sector = "z", bench_out = "bench_out";
    bench->add_option("lattices", bench_files, "lattice files");
    bench->add_option("--from-root-depth", bench_depth, "also bench all descendants to this depth");
    bench->add_option("--p", bench_p);
    bench->add_option("--trials", bench_trials);
    bench->add_option("--seed", bench_seed);
    bench->add_option("--pipeline", bench_pipeline, "erasure | unionfind");
    bench->add_option("--sector", bench_sector, "z | x | both");
    bench->add_option("--out", bench_out);

    try {
        app.parse(argc, argv);
        if (*census) return cmd_census(census_depth, census_rows, census_cols, census_out, raw_args);
        if (*estimate)
            return cmd_estimate(est_lattice, est_noise, est_trials, est_seed, est_exact, est_pipeline,
                                threads);
        if (*train)
            return cmd_train(train_scenario, train_agents, train_trials, train_est_trials, train_desk,
                             train_pretrained, train_seed, !seed_opt->empty(), train_cache, train_out,
                             threads, raw_args);
        if (*explore)
            return cmd_explore(exp_p, exp_radius, exp_noise, exp_trials, exp_seed, exp_out, threads,
                               raw_args);
        if (*bench)
            return cmd_decode_bench(bench_files, bench_depth, bench_p, bench_trials, bench_seed,
                                    bench_pipeline, bench_sector, bench_out, threads, raw_args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const qecforge::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qecforge::SizeGuardError& e) {
        std::cerr << "size guard: " << e.what() << "\n";
        return 4;
    } catch (const qecforge::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

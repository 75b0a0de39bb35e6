#include "qecforge/scenarios.hpp"

#include "qecforge/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qecforge {

namespace {

NoiseProfile iid_z(double p) {
    NoiseProfile n;
    n.name = "iid_z:" + std::to_string(p).substr(0, 4);
    n.base_px = 0.0;
    n.base_pz = p;
    return n;
}

NoiseProfile iid_xz(double p) {
    NoiseProfile n;
    n.name = "iid_xz:" + std::to_string(p).substr(0, 4);
    n.base_px = p;
    n.base_pz = p;
    return n;
}

// Two adjacent flawed plaquettes (faces 4 and 5 of the 3x3 root): X errors
// certain on their shared qubit and raised by 0.5 around each.
NoiseProfile defect_pair() {
    NoiseProfile n;
    n.name = "defect_pair";
    n.base_px = 0.02;
    n.base_pz = 0.1;
    NoiseOverride a;
    a.target = NoiseOverride::Target::face;
    a.id1 = 4;
    a.add_px = 0.5;
    NoiseOverride b = a;
    b.id1 = 5;
    NoiseOverride c;
    c.target = NoiseOverride::Target::face_intersection;
    c.id1 = 4;
    c.id2 = 5;
    c.set_px = 1.0;
    n.overrides = {a, b, c};
    return n;
}

// One flawed plaquette on a dephasing-dominated channel.
NoiseProfile defect_single() {
    NoiseProfile n;
    n.name = "defect_single";
    n.base_px = 0.02;
    n.base_pz = 0.14;
    NoiseOverride a;
    a.target = NoiseOverride::Target::face;
    a.id1 = 4;
    a.add_px = 0.15;
    n.overrides = {a};
    return n;
}

NoiseProfile biased_xz() {
    NoiseProfile n;
    n.name = "biased_xz";
    n.base_px = 0.04;
    n.base_pz = 0.14;
    return n;
}

double parse_rate(const std::string& name, std::size_t colon) {
    const std::string arg = name.substr(colon + 1);
    try {
        const double p = std::stod(arg);
        if (p < 0.0 || p > 1.0) throw ConfigError("noise rate outside [0, 1]: " + arg);
        return p;
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad noise rate: " + arg);
    }
}

PsHyper hyper(double eta, double gamma, double delta) {
    PsHyper h;
    h.beta = 2.0;
    h.tau = 30;
    h.eta = eta;
    h.gamma = gamma;
    h.delta = delta;
    return h;
}

ScenarioConfig base_scenario(const std::string& name) {
    ScenarioConfig cfg;
    cfg.name = name;
    cfg.rows = cfg.cols = 3;
    cfg.qubit_budget = 50;
    cfg.agents = 60;
    cfg.trials = 10'000;
    cfg.seed = 1;
    return cfg;
}

} // namespace

NoiseProfile noise_profile_by_name(const std::string& name) {
    if (name == "zero") {
        NoiseProfile n;
        n.name = "zero";
        return n;
    }
    if (name.rfind("iid_z:", 0) == 0) return iid_z(parse_rate(name, 5));
    if (name.rfind("iid_xz:", 0) == 0) return iid_xz(parse_rate(name, 6));
    if (name == "defect_pair") return defect_pair();
    if (name == "defect_single") return defect_single();
    if (name == "biased_xz") return biased_xz();
    throw ConfigError("unknown noise profile: " + name);
}

std::vector<std::string> noise_profile_names() {
    return {"zero", "iid_z:<p>", "iid_xz:<p>", "defect_pair", "defect_single", "biased_xz"};
}

ScenarioConfig scenario_by_name(const std::string& name) {
    if (name == "figure4a") {
        ScenarioConfig cfg = base_scenario(name);
        cfg.stage1 = {iid_z(0.10), 0.001, 1'000'000, hyper(0.05, 0.01, 0.01)};
        return cfg;
    }
    if (name == "figure4b") {
        ScenarioConfig cfg = base_scenario(name);
        cfg.stage1 = {iid_xz(0.09), 0.001, 1'000'000, hyper(0.01, 0.01, 0.01)};
        return cfg;
    }
    if (name == "figure7") {
        ScenarioConfig cfg = base_scenario(name);
        cfg.stage1 = {defect_pair(), 0.001, 1'000'000, hyper(0.05, 0.0006, 0.001)};
        return cfg;
    }
    if (name == "figure8") {
        ScenarioConfig cfg = base_scenario(name);
        cfg.stage1 = {iid_z(0.10), 0.001, 1'000'000, hyper(0.05, 0.01, 0.01)};
        cfg.stage2 = StageConfig{iid_z(0.10), 0.00025, 4'000'000, hyper(0.05, 0.0005, 0.001)};
        cfg.stage2_start = 6'000;
        return cfg;
    }
    if (name == "figure10a") {
        ScenarioConfig cfg = base_scenario(name);
        cfg.trials = 6'000;
        cfg.stage1 = {iid_z(0.14), 0.001, 1'000'000, hyper(0.05, 0.0006, 0.001)};
        cfg.stage2 = StageConfig{iid_z(0.16), 0.001, 1'000'000, hyper(0.05, 0.0006, 0.001)};
        cfg.stage2_start = 4'000;
        return cfg;
    }
    if (name == "figure10a_cold") {
        ScenarioConfig cfg = base_scenario(name);
        cfg.trials = 6'000;
        cfg.agents = 40;
        cfg.stage1 = {iid_z(0.16), 0.001, 1'000'000, hyper(0.05, 0.0006, 0.001)};
        return cfg;
    }
    if (name == "figure10b") {
        ScenarioConfig cfg = base_scenario(name);
        cfg.trials = 6'500;
        cfg.stage1 = {iid_z(0.10), 0.001, 1'000'000, hyper(0.05, 0.01, 0.01)};
        cfg.stage2 = StageConfig{defect_single(), 0.001, 1'000'000, hyper(0.05, 0.0006, 0.001)};
        cfg.stage2_start = 6'000;
        return cfg;
    }
    if (name == "figure10b_alt") {
        ScenarioConfig cfg = scenario_by_name("figure10b");
        cfg.name = name;
        cfg.stage2->noise = biased_xz();
        return cfg;
    }
    if (name == "transfer_defect" || name == "transfer_biased") {
        // The post-switch phase alone; pair with --pretrained for the
        // transfer arm or run cold as the baseline.
        ScenarioConfig cfg = base_scenario(name);
        cfg.trials = 500;
        cfg.stage1 = {name == "transfer_defect" ? defect_single() : biased_xz(), 0.001, 1'000'000,
                      hyper(0.05, 0.0006, 0.001)};
        return cfg;
    }
    throw ConfigError("unknown scenario: " + name);
}

std::vector<std::string> scenario_names() {
    return {"figure4a",  "figure4b",       "figure7",         "figure8",
            "figure10a", "figure10a_cold", "figure10b",       "figure10b_alt",
            "transfer_defect", "transfer_biased"};
}

void apply_desk_scale(ScenarioConfig& cfg) {
    cfg.agents = std::min(cfg.agents, 10);
    cfg.stage1.estimator_trials = std::max<std::uint64_t>(cfg.stage1.estimator_trials / 10, 10'000);
    if (cfg.stage2) cfg.stage2->estimator_trials = std::max<std::uint64_t>(cfg.stage2->estimator_trials / 10, 10'000);

    const std::int64_t full = cfg.trials;
    std::int64_t desk = full;
    if (cfg.name == "figure10b" || cfg.name == "figure10b_alt") {
        desk = 2'500; // 2000 training trials plus the 500-trial second phase
        cfg.stage2_start = 2'000;
    } else if (full > 2'000) {
        desk = 2'000;
        if (cfg.stage2_start > 0)
            cfg.stage2_start = std::llround(static_cast<double>(cfg.stage2_start) * desk / full);
    }
    cfg.trials = desk;
}

} // namespace qecforge

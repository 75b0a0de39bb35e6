#include "qecforge/io.hpp"

#include "qecforge/errors.hpp"
#include "qecforge/scenarios.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qecforge {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void save_lattice(const CodeLattice& lat, std::ostream& out) {
    out << "torus-code v1\n";
    out << "darts " << lat.dart_count() << "\n";
    for (Dart d = 0; d < lat.dart_count(); ++d) {
        out << d << ' ' << lat.opposite(d) << ' ' << lat.next_around_vertex(d) << ' '
            << lat.vertex_of(d) << ' ' << lat.face_of(d) << ' ' << lat.edge_of(d) << '\n';
    }
    out << "initial_qubits " << lat.initial_qubits() << "\n";
}

CodeLattice load_lattice(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "torus-code v1")
        throw ConfigError("not a torus-code v1 lattice file");
    std::string tok;
    int n_darts = 0;
    in >> tok >> n_darts;
    if (tok != "darts" || n_darts <= 0) throw ConfigError("lattice file missing dart count");
    std::vector<Dart> opposite(n_darts), next(n_darts);
    std::vector<std::int32_t> vertex(n_darts), face(n_darts), edge(n_darts);
    for (int i = 0; i < n_darts; ++i) {
        int id = -1;
        in >> id;
        if (id != i) throw ConfigError("lattice file darts out of order");
        in >> opposite[i] >> next[i] >> vertex[i] >> face[i] >> edge[i];
    }
    int initial = 0;
    in >> tok >> initial;
    if (tok != "initial_qubits") throw ConfigError("lattice file missing initial_qubits");
    if (!in) throw ConfigError("truncated lattice file");
    CodeLattice lat = CodeLattice::from_raw(std::move(opposite), std::move(next), std::move(vertex),
                                            std::move(face), std::move(edge), initial);
    lat.validate();
    return lat;
}

void save_lattice_file(const CodeLattice& lat, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    save_lattice(lat, out);
}

CodeLattice load_lattice_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    return load_lattice(in);
}

void save_noise(const NoiseProfile& profile, std::ostream& out) {
    out << "noise v1\n";
    if (!profile.name.empty()) out << "name " << profile.name << "\n";
    out << "base_px " << fmt_double(profile.base_px) << "\n";
    out << "base_pz " << fmt_double(profile.base_pz) << "\n";
    for (const NoiseOverride& o : profile.overrides) {
        out << "override ";
        switch (o.target) {
        case NoiseOverride::Target::face: out << "face " << o.id1; break;
        case NoiseOverride::Target::vertex: out << "vertex " << o.id1; break;
        case NoiseOverride::Target::face_intersection:
            out << "intersection " << o.id1 << ' ' << o.id2;
            break;
        }
        if (o.add_px) out << " add_px " << fmt_double(*o.add_px);
        if (o.add_pz) out << " add_pz " << fmt_double(*o.add_pz);
        if (o.set_px) out << " set_px " << fmt_double(*o.set_px);
        if (o.set_pz) out << " set_pz " << fmt_double(*o.set_pz);
        out << "\n";
    }
}

NoiseProfile load_noise(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "noise v1") throw ConfigError("not a noise v1 spec");
    NoiseProfile p;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "name") {
            ls >> p.name;
        } else if (key == "base_px") {
            ls >> p.base_px;
        } else if (key == "base_pz") {
            ls >> p.base_pz;
        } else if (key == "override") {
            NoiseOverride o;
            std::string target;
            ls >> target;
            if (target == "face") {
                o.target = NoiseOverride::Target::face;
                ls >> o.id1;
            } else if (target == "vertex") {
                o.target = NoiseOverride::Target::vertex;
                ls >> o.id1;
            } else if (target == "intersection") {
                o.target = NoiseOverride::Target::face_intersection;
                ls >> o.id1 >> o.id2;
            } else {
                throw ConfigError("unknown override target: " + target);
            }
            std::string adj;
            while (ls >> adj) {
                double v = 0;
                if (!(ls >> v)) throw ConfigError("override adjustment missing value");
                if (adj == "add_px") o.add_px = v;
                else if (adj == "add_pz") o.add_pz = v;
                else if (adj == "set_px") o.set_px = v;
                else if (adj == "set_pz") o.set_pz = v;
                else throw ConfigError("unknown override adjustment: " + adj);
            }
            p.overrides.push_back(o);
        } else {
            throw ConfigError("unknown noise spec line: " + line);
        }
        if (!in && !ls) throw ConfigError("bad noise spec line: " + line);
    }
    return p;
}

NoiseProfile noise_from_spec(const std::string& name_or_path) {
    if (std::filesystem::exists(name_or_path)) {
        std::ifstream in(name_or_path);
        if (!in) throw ConfigError("cannot read " + name_or_path);
        NoiseProfile p = load_noise(in);
        if (p.name.empty()) p.name = name_or_path;
        return p;
    }
    return noise_profile_by_name(name_or_path);
}

namespace {

void save_stage(const char* tag, const StageConfig& s, std::ostream& out) {
    out << tag << " noise " << s.noise.name << " p_l_rew " << fmt_double(s.p_l_rew)
        << " estimator_trials " << s.estimator_trials << " eta " << fmt_double(s.hyper.eta)
        << " gamma " << fmt_double(s.hyper.gamma) << " delta " << fmt_double(s.hyper.delta)
        << " beta " << fmt_double(s.hyper.beta) << " tau " << s.hyper.tau << "\n";
}

StageConfig parse_stage(std::istringstream& ls) {
    StageConfig s;
    std::string key;
    while (ls >> key) {
        if (key == "noise") {
            std::string spec;
            ls >> spec;
            s.noise = noise_from_spec(spec);
        } else if (key == "p_l_rew") ls >> s.p_l_rew;
        else if (key == "estimator_trials") ls >> s.estimator_trials;
        else if (key == "eta") ls >> s.hyper.eta;
        else if (key == "gamma") ls >> s.hyper.gamma;
        else if (key == "delta") ls >> s.hyper.delta;
        else if (key == "beta") ls >> s.hyper.beta;
        else if (key == "tau") ls >> s.hyper.tau;
        else if (key == "start") continue; // handled by the caller
        else throw ConfigError("unknown stage field: " + key);
    }
    return s;
}

} // namespace

void save_scenario(const ScenarioConfig& cfg, std::ostream& out) {
    out << "scenario v1\n";
    out << "name " << cfg.name << "\n";
    out << "rows " << cfg.rows << "\n";
    out << "cols " << cfg.cols << "\n";
    out << "budget " << cfg.qubit_budget << "\n";
    out << "trials " << cfg.trials << "\n";
    out << "agents " << cfg.agents << "\n";
    out << "seed " << cfg.seed << "\n";
    save_stage("stage1", cfg.stage1, out);
    if (cfg.stage2) {
        out << "stage2_start " << cfg.stage2_start << "\n";
        save_stage("stage2", *cfg.stage2, out);
    }
}

ScenarioConfig load_scenario(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "scenario v1") throw ConfigError("not a scenario v1 file");
    ScenarioConfig cfg;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "name") ls >> cfg.name;
        else if (key == "rows") ls >> cfg.rows;
        else if (key == "cols") ls >> cfg.cols;
        else if (key == "budget") ls >> cfg.qubit_budget;
        else if (key == "trials") ls >> cfg.trials;
        else if (key == "agents") ls >> cfg.agents;
        else if (key == "seed") ls >> cfg.seed;
        else if (key == "stage1") cfg.stage1 = parse_stage(ls);
        else if (key == "stage2_start") ls >> cfg.stage2_start;
        else if (key == "stage2") cfg.stage2 = parse_stage(ls);
        else throw ConfigError("unknown scenario field: " + key);
    }
    if (cfg.stage2 && cfg.stage2_start < 0)
        throw ConfigError("scenario has stage2 but no stage2_start");
    return cfg;
}

ScenarioConfig scenario_from_spec(const std::string& name_or_path) {
    if (std::filesystem::exists(name_or_path)) {
        std::ifstream in(name_or_path);
        if (!in) throw ConfigError("cannot read " + name_or_path);
        return load_scenario(in);
    }
    return scenario_by_name(name_or_path);
}

void save_network_file(const ClipNetwork& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    net.save(out);
}

ClipNetwork load_network_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    return ClipNetwork::load(in);
}

void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& out) {
    out << "# qecforge curve v1\n";
    out << "trial_index,mean_qubits,std_qubits,reward_rate,mean_final_PL\n";
    for (const CurvePoint& pt : curve) {
        out << pt.trial << ',' << fmt_double(pt.mean_qubits) << ',' << fmt_double(pt.std_qubits)
            << ',' << fmt_double(pt.reward_rate) << ',' << fmt_double(pt.mean_final_pl) << '\n';
    }
}

void write_trials_csv(const std::vector<AgentRun>& agents, std::ostream& out) {
    out << "# qecforge trials v1\n";
    out << "agent,trial,qubits_added,rewarded,dead_end,final_PL\n";
    for (const AgentRun& run : agents)
        for (const TrialRecord& rec : run.trials)
            out << run.agent_index << ',' << rec.trial << ',' << rec.qubits_added << ','
                << (rec.rewarded ? 1 : 0) << ',' << (rec.dead_end ? 1 : 0) << ','
                << fmt_double(rec.final_p_l) << '\n';
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    nlohmann::json j;
    j["command"] = m.command;
    j["args"] = m.args;
    char digest[32];
    std::snprintf(digest, sizeof digest, "%016" PRIx64, m.config_digest);
    j["config_digest"] = digest;
    j["seed"] = m.seed;
    j["versions"] = {{"qecforge", kVersion},
                     {"lattice_format", "torus-code v1"},
                     {"noise_format", "noise v1"},
                     {"network_format", "clip-network v1"},
                     {"curve_csv", "v1"}};
    j["outputs"] = m.outputs;
    j["wall_time_s"] = m.wall_time_s;
    j["threads"] = m.threads;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

} // namespace qecforge

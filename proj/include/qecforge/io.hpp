#pragma once

#include "qecforge/agent.hpp"
#include "qecforge/environment.hpp"
#include "qecforge/lattice.hpp"
#include "qecforge/noise.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace qecforge {

inline constexpr const char* kVersion = "0.1.0";

// Line-oriented lattice snapshot ("torus-code v1"); round-trips bit-exactly.
void save_lattice(const CodeLattice& lat, std::ostream& out);
CodeLattice load_lattice(std::istream& in);
void save_lattice_file(const CodeLattice& lat, const std::filesystem::path& path);
CodeLattice load_lattice_file(const std::filesystem::path& path);

// Noise spec files ("noise v1"): base rates plus override lines.
void save_noise(const NoiseProfile& profile, std::ostream& out);
NoiseProfile load_noise(std::istream& in);

// Accepts either a built-in profile name (see scenarios) or a path to a
// noise spec file.
NoiseProfile noise_from_spec(const std::string& name_or_path);

// Scenario files ("scenario v1"); noise fields may name built-in profiles or
// point at noise spec files.
void save_scenario(const ScenarioConfig& cfg, std::ostream& out);
ScenarioConfig load_scenario(std::istream& in);

// Accepts a built-in scenario name or a path to a scenario file.
ScenarioConfig scenario_from_spec(const std::string& name_or_path);

void save_network_file(const ClipNetwork& net, const std::filesystem::path& path);
ClipNetwork load_network_file(const std::filesystem::path& path);

void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& out);
void write_trials_csv(const std::vector<AgentRun>& agents, std::ostream& out);

// Every command writes one of these next to its outputs; rerunning the
// recorded command line reproduces the outputs bit-exactly.
struct RunManifest {
    std::string command;
    std::vector<std::string> args;
    std::uint64_t config_digest = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    double wall_time_s = 0.0;
    int threads = 1;
};

void write_manifest(const RunManifest& m, const std::filesystem::path& path);

} // namespace qecforge

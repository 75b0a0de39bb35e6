#pragma once

#include "qecforge/edge_bits.hpp"
#include "qecforge/lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qecforge {

// One adjustment of the per-qubit error rates, addressed through the lattice:
// a face or vertex selects its incident edges, a face intersection selects
// the edges shared by two faces. Additive adjustments accumulate and clamp to
// [0, 1]; absolute ones are applied afterwards and win.
struct NoiseOverride {
    enum class Target : std::uint8_t { face, vertex, face_intersection };
    Target target = Target::face;
    int id1 = -1;
    int id2 = -1; // second face for intersections
    std::optional<double> add_px, add_pz;
    std::optional<double> set_px, set_pz;
};

// Per-qubit X/Z error probabilities described independently of a concrete
// lattice; selectors are resolved against one before sampling.
struct NoiseProfile {
    std::string name; // identifies the profile in manifests and caches
    double base_px = 0.0;
    double base_pz = 0.0;
    std::vector<NoiseOverride> overrides;
};

// Profile resolved against a lattice: one (p_X, p_Z) pair per edge id, plus
// the 2^32-scaled thresholds the samplers consume.
struct ResolvedNoise {
    std::vector<double> px, pz;
    std::vector<std::uint64_t> thr_x, thr_z;
    bool x_zero = true; // whole sector silent; lets estimators skip it
    bool z_zero = true;

    int n_qubits() const { return static_cast<int>(px.size()); }
};

// Applies base rates and overrides; throws ConfigError on unknown labels.
// The resolved table satisfies p_X, p_Z in [0, 1] and p_X + p_Z <= 1
// (p_Z yields when an X override saturates a qubit).
ResolvedNoise resolve_profile(const NoiseProfile& profile, const CodeLattice& lat);

// One erasure-channel sample: per sector, the erased qubits and the subset
// that actually carries an error (a fair coin per erased qubit). The X and Z
// sectors draw from independent streams.
struct ErasureSample {
    EdgeBits erased_x, erased_z;
    EdgeBits realized_x, realized_z;
};

ErasureSample sample_erasure(const ResolvedNoise& table, std::uint64_t seed, std::uint64_t trial);

} // namespace qecforge

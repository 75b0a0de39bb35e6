#include "qecforge/noise.hpp"

#include "qecforge/errors.hpp"
#include "qecforge/kernels.hpp"
#include "qecforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qecforge {

namespace {

std::vector<int> selector_edges(const NoiseOverride& o, const CodeLattice& lat) {
    std::vector<int> out;
    switch (o.target) {
    case NoiseOverride::Target::face: {
        if (o.id1 < 0 || o.id1 >= lat.face_count())
            throw ConfigError("noise override names unknown face " + std::to_string(o.id1));
        for (int e = 0; e < lat.edge_count(); ++e) {
            auto [f1, f2] = lat.edge_faces(e);
            if (f1 == o.id1 || f2 == o.id1) out.push_back(e);
        }
        break;
    }
    case NoiseOverride::Target::vertex: {
        if (o.id1 < 0 || o.id1 >= lat.vertex_count())
            throw ConfigError("noise override names unknown vertex " + std::to_string(o.id1));
        for (int e = 0; e < lat.edge_count(); ++e) {
            auto [u, v] = lat.edge_vertices(e);
            if (u == o.id1 || v == o.id1) out.push_back(e);
        }
        break;
    }
    case NoiseOverride::Target::face_intersection: {
        if (o.id1 < 0 || o.id1 >= lat.face_count() || o.id2 < 0 || o.id2 >= lat.face_count())
            throw ConfigError("noise override names unknown face pair " + std::to_string(o.id1) +
                              ", " + std::to_string(o.id2));
        for (int e = 0; e < lat.edge_count(); ++e) {
            auto [f1, f2] = lat.edge_faces(e);
            if ((f1 == o.id1 && f2 == o.id2) || (f1 == o.id2 && f2 == o.id1)) out.push_back(e);
        }
        break;
    }
    }
    return out;
}

std::uint64_t to_threshold(double p) {
    return static_cast<std::uint64_t>(std::llround(p * 4294967296.0));
}

} // namespace

ResolvedNoise resolve_profile(const NoiseProfile& profile, const CodeLattice& lat) {
    const int n = lat.edge_count();
    auto check01 = [](double p, const char* what) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(what) + " outside [0, 1]");
    };
    check01(profile.base_px, "base_px");
    check01(profile.base_pz, "base_pz");

    ResolvedNoise t;
    t.px.assign(n, profile.base_px);
    t.pz.assign(n, profile.base_pz);

    for (const NoiseOverride& o : profile.overrides) {
        const std::vector<int> edges = selector_edges(o, lat);
        for (int e : edges) {
            if (o.add_px) t.px[e] += *o.add_px;
            if (o.add_pz) t.pz[e] += *o.add_pz;
        }
    }
    for (int e = 0; e < n; ++e) {
        t.px[e] = std::clamp(t.px[e], 0.0, 1.0);
        t.pz[e] = std::clamp(t.pz[e], 0.0, 1.0);
    }
    for (const NoiseOverride& o : profile.overrides) {
        if (!o.set_px && !o.set_pz) continue;
        if (o.set_px) check01(*o.set_px, "set_px");
        if (o.set_pz) check01(*o.set_pz, "set_pz");
        for (int e : selector_edges(o, lat)) {
            if (o.set_px) t.px[e] = *o.set_px;
            if (o.set_pz) t.pz[e] = *o.set_pz;
        }
    }
    // p_X + p_Z <= 1 per qubit; the Z rate yields where X saturates.
    for (int e = 0; e < n; ++e) t.pz[e] = std::min(t.pz[e], 1.0 - t.px[e]);

    t.thr_x.resize(n);
    t.thr_z.resize(n);
    for (int e = 0; e < n; ++e) {
        t.thr_x[e] = to_threshold(t.px[e]);
        t.thr_z[e] = to_threshold(t.pz[e]);
        if (t.thr_x[e]) t.x_zero = false;
        if (t.thr_z[e]) t.z_zero = false;
    }
    return t;
}

ErasureSample sample_erasure(const ResolvedNoise& table, std::uint64_t seed, std::uint64_t trial) {
    const int n = table.n_qubits();
    const int n_blocks = (2 * n + 3) / 4;
    std::vector<std::uint32_t> words(4 * n_blocks);
    std::vector<std::uint64_t> er((n + 63) / 64), rl((n + 63) / 64);

    ErasureSample s{EdgeBits(n), EdgeBits(n), EdgeBits(n), EdgeBits(n)};
    auto fill_sector = [&](std::uint32_t domain, const std::vector<std::uint64_t>& thr, EdgeBits& erased,
                           EdgeBits& realized) {
        kernels::philox_fill(seed, domain, trial, 0, n_blocks, words.data());
        kernels::mask_pairs(words.data(), thr.data(), n, er.data(), rl.data());
        for (int k = 0; k < n; ++k) {
            if ((er[k >> 6] >> (k & 63)) & 1) erased.set(k);
            if ((rl[k >> 6] >> (k & 63)) & 1) realized.set(k);
        }
    };
    fill_sector(0, table.thr_z, s.erased_z, s.realized_z);
    fill_sector(1, table.thr_x, s.erased_x, s.realized_x);
    return s;
}

} // namespace qecforge

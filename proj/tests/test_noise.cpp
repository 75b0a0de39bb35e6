#include "qecforge/errors.hpp"
#include "qecforge/noise.hpp"
#include "qecforge/scenarios.hpp"

#include <doctest.h>

#include <cmath>

using namespace qecforge;

TEST_CASE("uniform dephasing profile resolves to the base rates") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    const ResolvedNoise t = resolve_profile(noise_profile_by_name("iid_z:0.1"), root);
    for (int k = 0; k < 18; ++k) {
        CHECK(t.px[k] == 0.0);
        CHECK(t.pz[k] == doctest::Approx(0.1));
    }
    CHECK(t.x_zero);
    CHECK(!t.z_zero);
}

TEST_CASE("empty override list means base rates everywhere") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    NoiseProfile p;
    p.base_px = 0.03;
    p.base_pz = 0.07;
    const ResolvedNoise t = resolve_profile(p, root);
    for (int k = 0; k < 18; ++k) {
        CHECK(t.px[k] == doctest::Approx(0.03));
        CHECK(t.pz[k] == doctest::Approx(0.07));
    }
}

TEST_CASE("flawed-plaquette-pair profile saturates the shared qubit") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    const ResolvedNoise t = resolve_profile(noise_profile_by_name("defect_pair"), root);

    // classify qubits against faces 4 and 5
    int shared = 0, single = 0, outside = 0;
    for (int k = 0; k < 18; ++k) {
        auto [f1, f2] = root.edge_faces(k);
        const bool in4 = f1 == 4 || f2 == 4;
        const bool in5 = f1 == 5 || f2 == 5;
        if (in4 && in5) {
            ++shared;
            CHECK(t.px[k] == 1.0); // absolute override, exactly one
            CHECK(t.pz[k] == 0.0); // p_X + p_Z <= 1 invariant
        } else if (in4 || in5) {
            ++single;
            CHECK(t.px[k] == doctest::Approx(0.52));
            CHECK(t.pz[k] == doctest::Approx(0.1));
        } else {
            ++outside;
            CHECK(t.px[k] == doctest::Approx(0.02));
            CHECK(t.pz[k] == doctest::Approx(0.1));
        }
        CHECK(t.px[k] + t.pz[k] <= 1.0 + 1e-15);
    }
    CHECK(shared == 1); // adjacent faces share exactly one qubit
    CHECK(single == 6);
    CHECK(outside == 11);
}

TEST_CASE("unknown selector labels are resolution errors") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    NoiseProfile p;
    NoiseOverride o;
    o.target = NoiseOverride::Target::face;
    o.id1 = 17; // only 9 faces
    o.add_px = 0.1;
    p.overrides = {o};
    CHECK_THROWS_AS(resolve_profile(p, root), ConfigError);
}

TEST_CASE("erasure sampling: degenerate rates and reproducibility") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    const ResolvedNoise zero = resolve_profile(noise_profile_by_name("zero"), root);
    for (std::uint64_t t = 0; t < 50; ++t) {
        const ErasureSample s = sample_erasure(zero, 7, t);
        CHECK(s.erased_x.empty());
        CHECK(s.erased_z.empty());
        CHECK(s.realized_x.empty());
        CHECK(s.realized_z.empty());
    }

    NoiseProfile hot;
    hot.base_pz = 0.0;
    NoiseOverride o;
    o.target = NoiseOverride::Target::vertex;
    o.id1 = 0;
    o.set_px = 1.0;
    hot.overrides = {o};
    const ResolvedNoise t1 = resolve_profile(hot, root);
    for (std::uint64_t t = 0; t < 50; ++t) {
        const ErasureSample s = sample_erasure(t1, 7, t);
        for (int k = 0; k < 18; ++k) {
            auto [u, v] = root.edge_vertices(k);
            if (u == 0 || v == 0) CHECK(s.erased_x.test(k));
        }
    }

    const ResolvedNoise mid = resolve_profile(noise_profile_by_name("iid_xz:0.09"), root);
    const ErasureSample a = sample_erasure(mid, 123, 5);
    const ErasureSample b = sample_erasure(mid, 123, 5);
    CHECK(a.erased_x == b.erased_x);
    CHECK(a.erased_z == b.erased_z);
    CHECK(a.realized_x == b.realized_x);
    CHECK(a.realized_z == b.realized_z);
    const ErasureSample c = sample_erasure(mid, 124, 5);
    CHECK((a.erased_x == c.erased_x && a.erased_z == c.erased_z) == false);
}

TEST_CASE("erased fraction matches the rate and realized is a fair sub-coin") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    const ResolvedNoise t = resolve_profile(noise_profile_by_name("iid_z:0.1"), root);
    const int trials = 100'000;
    std::int64_t erased = 0, realized = 0;
    for (int i = 0; i < trials; ++i) {
        const ErasureSample s = sample_erasure(t, 2024, static_cast<std::uint64_t>(i));
        erased += s.erased_z.count();
        realized += s.realized_z.count();
        for (int k = 0; k < 18; ++k)
            if (s.realized_z.test(k)) CHECK(s.erased_z.test(k));
    }
    const double n = 18.0 * trials;
    const double f_er = erased / n;
    const double sigma_er = std::sqrt(0.1 * 0.9 / n);
    CHECK(std::abs(f_er - 0.1) < 3 * sigma_er * 3); // loose 3-sigma-ish band
    const double f_half = static_cast<double>(realized) / static_cast<double>(erased);
    CHECK(std::abs(f_half - 0.5) < 0.01);
}

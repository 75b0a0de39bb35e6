#include "qecforge/estimate.hpp"

#include "qecforge/errors.hpp"
#include "qecforge/kernels.hpp"
#include "qecforge/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <thread>

namespace qecforge {

namespace {

// Everything one worker needs to run erasure or Pauli trials on one lattice.
struct TrialRunner {
    const ResolvedNoise& table;
    EstimatorOptions opts;
    std::uint64_t seed;
    SectorView view_z, view_x;
    DecodeScratch scratch;

    int n = 0;
    int mask_words = 0;
    std::vector<std::uint32_t> words;
    std::vector<std::uint64_t> erased_w, realized_w;
    std::vector<std::int32_t> erased, realized, corr_defects;
    Syndrome syn;

    TrialRunner(const CodeLattice& lat, const ResolvedNoise& tbl, const EstimatorOptions& o,
                std::uint64_t sd)
        : table(tbl), opts(o), seed(sd) {
        const LogicalReps reps = logical_representatives(lat);
        view_z = make_sector_view(lat, Sector::Z, reps);
        view_x = make_sector_view(lat, Sector::X, reps);
        n = lat.edge_count();
        mask_words = (n + 63) / 64;
        words.resize(4 * ((std::max(2 * n, n) + 3) / 4));
        erased_w.resize(mask_words);
        realized_w.resize(mask_words);
    }

    void collect(const std::uint64_t* bits, std::vector<std::int32_t>& out) {
        out.clear();
        for (int w = 0; w < mask_words; ++w) {
            std::uint64_t word = bits[w];
            while (word) {
                out.push_back(64 * w + std::countr_zero(word));
                word &= word - 1;
            }
        }
    }

    bool erasure_sector_fails(const SectorView& view, const std::vector<std::uint64_t>& thr,
                              std::uint32_t domain, std::uint64_t trial) {
        if (opts.counting == FailureCounting::erasure_ambiguity) {
            // no error coins needed: one draw per qubit (domains 4 and 5)
            const std::uint32_t n_blocks = static_cast<std::uint32_t>((n + 3) / 4);
            kernels::philox_fill(seed, domain + 4, trial, 0, n_blocks, words.data());
            kernels::mask_single(words.data(), thr.data(), n, erased_w.data());
            int count = 0;
            for (int w = 0; w < mask_words; ++w) count += std::popcount(erased_w[w]);
            if (count < 3) return false; // a cycle needs at least three edges
            collect(erased_w.data(), erased);
            return homology_rank(view, erased, scratch, /*early_exit=*/true) > 0;
        }

        const std::uint32_t n_blocks = static_cast<std::uint32_t>((2 * n + 3) / 4);
        kernels::philox_fill(seed, domain, trial, 0, n_blocks, words.data());
        kernels::mask_pairs(words.data(), thr.data(), n, erased_w.data(), realized_w.data());
        collect(erased_w.data(), erased);
        if (erased.empty()) return false;
        collect(realized_w.data(), realized);
        syn.defects.clear();
        {
            // odd-incidence endpoints of the realized error
            scratch.attach(view);
            scratch.begin_trial();
            for (int e : realized) {
                for (int v : {view.g.u[e], view.g.v[e]}) {
                    if (scratch.fresh_v(v)) {
                        scratch.defect[v] = 0;
                        scratch.touched.push_back(v);
                    }
                    scratch.defect[v] ^= 1;
                }
            }
            for (int v : scratch.touched)
                if (scratch.defect[v]) syn.defects.push_back(v);
            std::sort(syn.defects.begin(), syn.defects.end());
        }
        const Correction corr = peel_decode(view, erased, syn, scratch);
        if (opts.verify_corrections) verify(view, corr);
        std::uint8_t cls = 0;
        for (int e : realized) cls ^= view.sig[e];
        for (int e : corr.edges) cls ^= view.sig[e];
        return cls != 0;
    }

    void verify(const SectorView& view, const Correction& corr) {
        for (int e : corr.edges) {
            bool inside = std::find(erased.begin(), erased.end(), e) != erased.end();
            if (!inside) throw InvariantViolation("correction leaks outside the erasure");
        }
        Syndrome check = syndrome(view, corr.edges);
        if (check.defects != syn.defects)
            throw InvariantViolation("correction does not reproduce the syndrome");
    }

    bool pauli_sector_fails(const SectorView& view, std::uint64_t trial, bool x_sector) {
        const std::uint32_t n_blocks = static_cast<std::uint32_t>((n + 3) / 4);
        kernels::philox_fill(seed, 2, trial, 0, n_blocks, words.data());
        realized.clear();
        for (int k = 0; k < n; ++k) {
            const std::uint64_t w = words[k];
            const std::uint64_t tx = table.thr_x[k];
            const bool is_x = w < tx;
            const bool is_z = !is_x && w < tx + table.thr_z[k];
            if ((x_sector && is_x) || (!x_sector && is_z)) realized.push_back(k);
        }
        if (realized.empty()) return false;
        syn = syndrome(view, realized);
        const Correction corr = union_find_decode(view, syn, scratch);
        std::uint8_t cls = 0;
        for (int e : realized) cls ^= view.sig[e];
        for (int e : corr.edges) cls ^= view.sig[e];
        return cls != 0;
    }

    // Evaluates both sectors (unless the rule or a silent sector allows a
    // skip) and reports (fz, fx).
    std::pair<bool, bool> trial_fails(std::uint64_t t) {
        const bool erasure = opts.pipeline == NoisePipeline::erasure_peeling;
        bool fz = false, fx = false;
        if (!table.z_zero)
            fz = erasure ? erasure_sector_fails(view_z, table.thr_z, 0, t)
                         : pauli_sector_fails(view_z, t, false);
        const bool need_x = opts.rule != SectorRule::z_only &&
                            !(opts.rule == SectorRule::any_sector && fz);
        if (need_x && !table.x_zero)
            fx = erasure ? erasure_sector_fails(view_x, table.thr_x, 1, t)
                         : pauli_sector_fails(view_x, t, true);
        return {fz, fx};
    }

    bool sector_fails(Sector s, std::uint64_t t) {
        const SectorView& view = (s == Sector::Z) ? view_z : view_x;
        if (opts.pipeline == NoisePipeline::pauli_union_find)
            return pauli_sector_fails(view, t, s == Sector::X);
        const auto& thr = (s == Sector::Z) ? table.thr_z : table.thr_x;
        const bool zero = (s == Sector::Z) ? table.z_zero : table.x_zero;
        return zero ? false : erasure_sector_fails(view, thr, s == Sector::Z ? 0 : 1, t);
    }
};

RateEstimate run_trials(const CodeLattice& lat, const ResolvedNoise& table, std::uint64_t trials,
                        std::uint64_t seed, const EstimatorOptions& opts,
                        std::optional<Sector> only_sector) {
    const int threads = std::max(1, opts.threads);
    struct Tally {
        std::uint64_t z = 0, x = 0, any = 0;
    };
    std::vector<Tally> tallies(threads);

    auto work = [&](int w) {
        TrialRunner runner(lat, table, opts, seed);
        const std::uint64_t lo = trials * w / threads;
        const std::uint64_t hi = trials * (w + 1) / threads;
        Tally tl;
        for (std::uint64_t t = lo; t < hi; ++t) {
            if (only_sector) {
                tl.any += runner.sector_fails(*only_sector, t) ? 1 : 0;
            } else {
                const auto [fz, fx] = runner.trial_fails(t);
                tl.z += fz ? 1 : 0;
                tl.x += fx ? 1 : 0;
                tl.any += (fz || fx) ? 1 : 0;
            }
        }
        tallies[w] = tl;
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    Tally total;
    for (const Tally& tl : tallies) {
        total.z += tl.z;
        total.x += tl.x;
        total.any += tl.any;
    }
    std::uint64_t count = total.any;
    if (!only_sector) {
        switch (opts.rule) {
        case SectorRule::any_sector: count = total.any; break;
        case SectorRule::z_only: count = total.z; break;
        case SectorRule::max_sector: count = std::max(total.z, total.x); break;
        }
    }
    RateEstimate r;
    r.trials = trials;
    r.seed = seed;
    r.p_hat = trials ? static_cast<double>(count) / static_cast<double>(trials) : 0.0;
    r.std_err = trials ? std::sqrt(r.p_hat * (1.0 - r.p_hat) / static_cast<double>(trials)) : 0.0;
    return r;
}

} // namespace

RateEstimate estimate_logical_rate(const CodeLattice& lat, const ResolvedNoise& table,
                                   std::uint64_t trials, std::uint64_t seed,
                                   const EstimatorOptions& opts) {
    return run_trials(lat, table, trials, seed, opts, std::nullopt);
}

RateEstimate estimate_sector_rate(const CodeLattice& lat, const ResolvedNoise& table, Sector sector,
                                  std::uint64_t trials, std::uint64_t seed,
                                  const EstimatorOptions& opts) {
    return run_trials(lat, table, trials, seed, opts, sector);
}

double exact_sector_rate(const CodeLattice& lat, const ResolvedNoise& table, Sector sector,
                         FailureCounting counting) {
    const int E = lat.edge_count();
    if (E > 20) throw SizeGuardError("exact rate needs <= 20 edges, lattice has " + std::to_string(E));
    const SectorView view = make_sector_view(lat, sector, logical_representatives(lat));
    const std::vector<double>& p = (sector == Sector::Z) ? table.pz : table.px;
    DecodeScratch scratch;
    std::vector<std::int32_t> chosen;
    chosen.reserve(E);

    double acc = 0.0;
    auto rec = [&](auto&& self, int e, double prob) -> void {
        if (prob == 0.0) return;
        if (e == E) {
            const int k = homology_rank(view, chosen, scratch);
            if (k == 0) return;
            const double w =
                (counting == FailureCounting::erasure_ambiguity) ? 1.0 : 1.0 - std::ldexp(1.0, -k);
            acc += prob * w;
            return;
        }
        self(self, e + 1, prob * (1.0 - p[e]));
        chosen.push_back(e);
        self(self, e + 1, prob * p[e]);
        chosen.pop_back();
    };
    rec(rec, 0, 1.0);
    return acc;
}

double combine_sectors(double p_z, double p_x, SectorRule rule) {
    switch (rule) {
    case SectorRule::z_only: return p_z;
    case SectorRule::max_sector: return std::max(p_z, p_x);
    case SectorRule::any_sector: break;
    }
    return 1.0 - (1.0 - p_z) * (1.0 - p_x);
}

double exact_logical_rate(const CodeLattice& lat, const ResolvedNoise& table,
                          const EstimatorOptions& opts) {
    const double pz = exact_sector_rate(lat, table, Sector::Z, opts.counting);
    const double px = (opts.rule == SectorRule::z_only)
                          ? 0.0
                          : exact_sector_rate(lat, table, Sector::X, opts.counting);
    return combine_sectors(pz, px, opts.rule);
}

} // namespace qecforge

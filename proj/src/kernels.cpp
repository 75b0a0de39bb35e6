#include "qecforge/kernels.hpp"

#include "qecforge/rng.hpp"

namespace qecforge {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

} // namespace

PhiloxBlock philox4x32(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                       std::uint32_t k0, std::uint32_t k1) {
    std::uint32_t x0 = c0, x1 = c1, x2 = c2, x3 = c3;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * x0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * x2;
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        x0 = hi1 ^ x1 ^ k0;
        x1 = lo1;
        x2 = hi0 ^ x3 ^ k1;
        x3 = lo0;
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return PhiloxBlock{{x0, x1, x2, x3}};
}

namespace kernels {

void philox_fill_scalar(std::uint64_t key, std::uint32_t domain, std::uint64_t trial,
                        std::uint32_t block0, std::uint32_t n_blocks, std::uint32_t* out) {
    for (std::uint32_t b = 0; b < n_blocks; ++b) {
        const PhiloxBlock blk = philox_block(key, domain, trial, block0 + b);
        out[4 * b + 0] = blk.x[0];
        out[4 * b + 1] = blk.x[1];
        out[4 * b + 2] = blk.x[2];
        out[4 * b + 3] = blk.x[3];
    }
}

void mask_pairs_scalar(const std::uint32_t* words, const std::uint64_t* thresholds, int n,
                       std::uint64_t* erased, std::uint64_t* realized) {
    const int n_words = (n + 63) / 64;
    for (int w = 0; w < n_words; ++w) {
        erased[w] = 0;
        realized[w] = 0;
    }
    for (int k = 0; k < n; ++k) {
        const bool e = static_cast<std::uint64_t>(words[2 * k]) < thresholds[k];
        const bool r = e && (words[2 * k + 1] >> 31);
        erased[k >> 6] |= static_cast<std::uint64_t>(e) << (k & 63);
        realized[k >> 6] |= static_cast<std::uint64_t>(r) << (k & 63);
    }
}

void mask_single_scalar(const std::uint32_t* words, const std::uint64_t* thresholds, int n,
                        std::uint64_t* erased) {
    const int n_words = (n + 63) / 64;
    for (int w = 0; w < n_words; ++w) erased[w] = 0;
    for (int k = 0; k < n; ++k) {
        const bool e = static_cast<std::uint64_t>(words[k]) < thresholds[k];
        erased[k >> 6] |= static_cast<std::uint64_t>(e) << (k & 63);
    }
}

namespace {

bool have_avx2() {
#if defined(QECFORGE_HAVE_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

PhiloxFillFn pick_philox() {
#if defined(QECFORGE_HAVE_AVX2)
    if (have_avx2()) return philox_fill_avx2;
#endif
    return philox_fill_scalar;
}

MaskPairFn pick_mask() {
#if defined(QECFORGE_HAVE_AVX2)
    if (have_avx2()) return mask_pairs_avx2;
#endif
    return mask_pairs_scalar;
}

MaskFn pick_mask_single() {
#if defined(QECFORGE_HAVE_AVX2)
    if (have_avx2()) return mask_single_avx2;
#endif
    return mask_single_scalar;
}

} // namespace

const PhiloxFillFn philox_fill = pick_philox();
const MaskPairFn mask_pairs = pick_mask();
const MaskFn mask_single = pick_mask_single();

const char* active_kernel() { return have_avx2() ? "avx2" : "scalar"; }

} // namespace kernels

} // namespace qecforge

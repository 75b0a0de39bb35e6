#include "qecforge/kernels.hpp"

#include <immintrin.h>

// AVX2 variants. Eight Philox blocks run per iteration in struct-of-arrays
// form; outputs are bit-identical to the scalar kernels.

namespace qecforge::kernels {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

// 8-lane 32x32 multiply: returns low halves, writes high halves.
inline __m256i mul_lo_hi(__m256i a, __m256i m, __m256i& hi) {
    const __m256i pe = _mm256_mul_epu32(a, m);
    const __m256i po = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
    hi = _mm256_blend_epi32(_mm256_srli_epi64(pe, 32), po, 0b10101010);
    return _mm256_blend_epi32(pe, _mm256_slli_epi64(po, 32), 0b10101010);
}

} // namespace

void philox_fill_avx2(std::uint64_t key, std::uint32_t domain, std::uint64_t trial,
                      std::uint32_t block0, std::uint32_t n_blocks, std::uint32_t* out) {
    const __m256i m0 = _mm256_set1_epi32(static_cast<int>(kM0));
    const __m256i m1 = _mm256_set1_epi32(static_cast<int>(kM1));
    const __m256i c1v = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(trial)));
    const __m256i c2v = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(trial >> 32)));
    const __m256i c3v = _mm256_set1_epi32(static_cast<int>(domain));
    const std::uint32_t key0 = static_cast<std::uint32_t>(key);
    const std::uint32_t key1 = static_cast<std::uint32_t>(key >> 32);

    std::uint32_t b = 0;
    for (; b + 8 <= n_blocks; b += 8) {
        __m256i x0 = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(block0 + b)),
                                      _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7));
        __m256i x1 = c1v, x2 = c2v, x3 = c3v;
        __m256i k0 = _mm256_set1_epi32(static_cast<int>(key0));
        __m256i k1 = _mm256_set1_epi32(static_cast<int>(key1));
        const __m256i w0 = _mm256_set1_epi32(static_cast<int>(kW0));
        const __m256i w1 = _mm256_set1_epi32(static_cast<int>(kW1));
        for (int round = 0; round < 10; ++round) {
            __m256i hi0, hi1;
            const __m256i lo0 = mul_lo_hi(x0, m0, hi0);
            const __m256i lo1 = mul_lo_hi(x2, m1, hi1);
            x0 = _mm256_xor_si256(_mm256_xor_si256(hi1, x1), k0);
            x1 = lo1;
            x2 = _mm256_xor_si256(_mm256_xor_si256(hi0, x3), k1);
            x3 = lo0;
            k0 = _mm256_add_epi32(k0, w0);
            k1 = _mm256_add_epi32(k1, w1);
        }
        // 4x8 transpose back to block-major order
        const __m256i t0 = _mm256_unpacklo_epi32(x0, x1);
        const __m256i t1 = _mm256_unpackhi_epi32(x0, x1);
        const __m256i t2 = _mm256_unpacklo_epi32(x2, x3);
        const __m256i t3 = _mm256_unpackhi_epi32(x2, x3);
        const __m256i u0 = _mm256_unpacklo_epi64(t0, t2); // blocks 0, 4
        const __m256i u1 = _mm256_unpackhi_epi64(t0, t2); // blocks 1, 5
        const __m256i u2 = _mm256_unpacklo_epi64(t1, t3); // blocks 2, 6
        const __m256i u3 = _mm256_unpackhi_epi64(t1, t3); // blocks 3, 7
        __m256i* dst = reinterpret_cast<__m256i*>(out + 4 * b);
        _mm256_storeu_si256(dst + 0, _mm256_permute2x128_si256(u0, u1, 0x20));
        _mm256_storeu_si256(dst + 1, _mm256_permute2x128_si256(u2, u3, 0x20));
        _mm256_storeu_si256(dst + 2, _mm256_permute2x128_si256(u0, u1, 0x31));
        _mm256_storeu_si256(dst + 3, _mm256_permute2x128_si256(u2, u3, 0x31));
    }
    if (b < n_blocks) philox_fill_scalar(key, domain, trial, block0 + b, n_blocks - b, out + 4 * b);
}

void mask_pairs_avx2(const std::uint32_t* words, const std::uint64_t* thresholds, int n,
                     std::uint64_t* erased, std::uint64_t* realized) {
    const int n_words = (n + 63) / 64;
    for (int w = 0; w < n_words; ++w) {
        erased[w] = 0;
        realized[w] = 0;
    }
    const __m256i lo32 = _mm256_set1_epi64x(0xffffffffll);
    int k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256i lanes = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + 2 * k));
        const __m256i w0 = _mm256_and_si256(lanes, lo32);
        const __m256i thr = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(thresholds + k));
        const __m256i er = _mm256_cmpgt_epi64(thr, w0); // w0 < thr, both below 2^33
        const __m256i rl = _mm256_and_si256(er, lanes); // bit 63 carries the error coin
        const auto ebits = static_cast<std::uint64_t>(_mm256_movemask_pd(_mm256_castsi256_pd(er)));
        const auto rbits = static_cast<std::uint64_t>(_mm256_movemask_pd(_mm256_castsi256_pd(rl)));
        erased[k >> 6] |= ebits << (k & 63);
        realized[k >> 6] |= rbits << (k & 63);
    }
    for (; k < n; ++k) {
        const bool e = static_cast<std::uint64_t>(words[2 * k]) < thresholds[k];
        const bool r = e && (words[2 * k + 1] >> 31);
        erased[k >> 6] |= static_cast<std::uint64_t>(e) << (k & 63);
        realized[k >> 6] |= static_cast<std::uint64_t>(r) << (k & 63);
    }
}

void mask_single_avx2(const std::uint32_t* words, const std::uint64_t* thresholds, int n,
                      std::uint64_t* erased) {
    const int n_words = (n + 63) / 64;
    for (int w = 0; w < n_words; ++w) erased[w] = 0;
    int k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m128i w32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(words + k));
        const __m256i w64 = _mm256_cvtepu32_epi64(w32);
        const __m256i thr = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(thresholds + k));
        const __m256i er = _mm256_cmpgt_epi64(thr, w64);
        const auto ebits = static_cast<std::uint64_t>(_mm256_movemask_pd(_mm256_castsi256_pd(er)));
        erased[k >> 6] |= ebits << (k & 63);
    }
    for (; k < n; ++k) {
        const bool e = static_cast<std::uint64_t>(words[k]) < thresholds[k];
        erased[k >> 6] |= static_cast<std::uint64_t>(e) << (k & 63);
    }
}

} // namespace qecforge::kernels

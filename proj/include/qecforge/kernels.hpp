#pragma once

#include <cstdint>

namespace qecforge::kernels {

// Fills out[0 .. 4*n_blocks) with Philox4x32-10 output for counters
// (block0+i, trial_lo, trial_hi, domain) under (key_lo, key_hi). The scalar
// and AVX2 variants produce bit-identical streams; the active one is picked
// at load time from CPU features.
using PhiloxFillFn = void (*)(std::uint64_t key, std::uint32_t domain, std::uint64_t trial,
                              std::uint32_t block0, std::uint32_t n_blocks, std::uint32_t* out);

// Per qubit k the sampler consumes the word pair (words[2k], words[2k+1]):
// qubit erased iff words[2k] < threshold[k] (thresholds are p * 2^32 in
// [0, 2^32], so p = 1 always erases), and an erased qubit carries an actual
// error iff bit 31 of words[2k+1] is set. The two output masks are packed
// 64 qubits per word.
using MaskPairFn = void (*)(const std::uint32_t* words, const std::uint64_t* thresholds, int n,
                            std::uint64_t* erased, std::uint64_t* realized);

// Single-draw variant for samplers that need only the erasure mask: qubit k
// erased iff words[k] < thresholds[k].
using MaskFn = void (*)(const std::uint32_t* words, const std::uint64_t* thresholds, int n,
                        std::uint64_t* erased);

void philox_fill_scalar(std::uint64_t key, std::uint32_t domain, std::uint64_t trial,
                        std::uint32_t block0, std::uint32_t n_blocks, std::uint32_t* out);
void mask_pairs_scalar(const std::uint32_t* words, const std::uint64_t* thresholds, int n,
                       std::uint64_t* erased, std::uint64_t* realized);
void mask_single_scalar(const std::uint32_t* words, const std::uint64_t* thresholds, int n,
                        std::uint64_t* erased);

#if defined(QECFORGE_HAVE_AVX2)
void philox_fill_avx2(std::uint64_t key, std::uint32_t domain, std::uint64_t trial,
                      std::uint32_t block0, std::uint32_t n_blocks, std::uint32_t* out);
void mask_pairs_avx2(const std::uint32_t* words, const std::uint64_t* thresholds, int n,
                     std::uint64_t* erased, std::uint64_t* realized);
void mask_single_avx2(const std::uint32_t* words, const std::uint64_t* thresholds, int n,
                      std::uint64_t* erased);
#endif

extern const PhiloxFillFn philox_fill;
extern const MaskPairFn mask_pairs;
extern const MaskFn mask_single;

// "scalar" or "avx2"; what the runtime dispatch selected.
const char* active_kernel();

} // namespace qecforge::kernels

#pragma once

#include <cstdint>

namespace qecforge {

// Philox4x32-10 counter-based generator. Streams are addressed as
// (key, domain, trial, block): every Monte Carlo trial owns blocks
// {0, 1, ...} of its own counter lane, so estimates are independent of how
// trials are partitioned across workers.
struct PhiloxBlock {
    std::uint32_t x[4];
};

PhiloxBlock philox4x32(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                       std::uint32_t k0, std::uint32_t k1);

inline PhiloxBlock philox_block(std::uint64_t key, std::uint32_t domain, std::uint64_t trial,
                                std::uint32_t block) {
    return philox4x32(block, static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                      domain, static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32));
}

// Sequential view over one (key, domain, trial) lane for consumers that want
// a stream of words or doubles (agent policy sampling, shuffles).
class PhiloxStream {
public:
    PhiloxStream() = default;
    PhiloxStream(std::uint64_t key, std::uint32_t domain, std::uint64_t trial = 0)
        : key_(key), trial_(trial), domain_(domain) {}

    std::uint32_t next_u32() {
        if (have_ == 0) {
            buf_ = philox_block(key_, domain_, trial_, block_++);
            have_ = 4;
        }
        return buf_.x[4 - have_--];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t trial_ = 0;
    std::uint32_t domain_ = 0;
    std::uint32_t block_ = 0;
    PhiloxBlock buf_{};
    int have_ = 0;
};

// splitmix64; used to derive child seeds (per agent, per step) from one
// experiment seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return mix_seed(a ^ mix_seed(b)); }
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

} // namespace qecforge

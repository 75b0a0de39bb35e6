#include "qecforge/kernels.hpp"
#include "qecforge/rng.hpp"

#include <doctest.h>

#include <vector>

using namespace qecforge;

TEST_CASE("philox4x32-10 known answers") {
    // reference vectors of the Random123 distribution
    {
        const PhiloxBlock b = philox4x32(0, 0, 0, 0, 0, 0);
        CHECK(b.x[0] == 0x6627e8d5u);
        CHECK(b.x[1] == 0xe169c58du);
        CHECK(b.x[2] == 0xbc57ac4cu);
        CHECK(b.x[3] == 0x9b00dbd8u);
    }
    {
        const std::uint32_t m = 0xffffffffu;
        const PhiloxBlock b = philox4x32(m, m, m, m, m, m);
        CHECK(b.x[0] == 0x408f276du);
        CHECK(b.x[1] == 0x41c83b0eu);
        CHECK(b.x[2] == 0xa20bc7c6u);
        CHECK(b.x[3] == 0x6d5451fdu);
    }
    {
        const PhiloxBlock b =
            philox4x32(0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u, 0xa4093822u, 0x299f31d0u);
        CHECK(b.x[0] == 0xd16cfe09u);
        CHECK(b.x[1] == 0x94fdccebu);
        CHECK(b.x[2] == 0x5001e420u);
        CHECK(b.x[3] == 0x24126ea1u);
    }
    // frozen cross-checks computed with an independent implementation
    {
        const PhiloxBlock b = philox4x32(1, 2, 3, 4, 5, 6);
        CHECK(b.x[0] == 0xc0c839bcu);
        CHECK(b.x[1] == 0x889c87c5u);
        CHECK(b.x[2] == 0x61986739u);
        CHECK(b.x[3] == 0x2d4623d0u);
    }
    {
        const PhiloxBlock b = philox4x32(0xdeadbeefu, 0, 0, 0, 0x12345678u, 0x9abcdef0u);
        CHECK(b.x[0] == 0x151ae2dcu);
        CHECK(b.x[1] == 0x3b8f4f76u);
        CHECK(b.x[2] == 0x0a6917f5u);
        CHECK(b.x[3] == 0x26767d67u);
    }
}

#if defined(QECFORGE_HAVE_AVX2)
TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
    if (!__builtin_cpu_supports("avx2")) return;

    for (std::uint32_t n_blocks : {1u, 3u, 7u, 8u, 9u, 33u, 64u}) {
        std::vector<std::uint32_t> a(4 * n_blocks, 0), b(4 * n_blocks, 1);
        kernels::philox_fill_scalar(0x1234'5678'9abc'def0ull, 3, 777, 5, n_blocks, a.data());
        kernels::philox_fill_avx2(0x1234'5678'9abc'def0ull, 3, 777, 5, n_blocks, b.data());
        CHECK(a == b);
    }

    for (int n : {1, 4, 5, 63, 64, 65, 68}) {
        const auto n_blocks = static_cast<std::uint32_t>((2 * n + 3) / 4);
        std::vector<std::uint32_t> words(4 * n_blocks);
        kernels::philox_fill_scalar(9, 0, 42, 0, n_blocks, words.data());
        std::vector<std::uint64_t> thr(n);
        for (int k = 0; k < n; ++k)
            thr[k] = (k % 5 == 0) ? 0
                     : (k % 5 == 1) ? (std::uint64_t{1} << 32) // p = 1
                                    : (std::uint64_t{1} << 30) * (k % 5);
        const int n_words = (n + 63) / 64;
        std::vector<std::uint64_t> e1(n_words), r1(n_words), e2(n_words), r2(n_words);
        kernels::mask_pairs_scalar(words.data(), thr.data(), n, e1.data(), r1.data());
        kernels::mask_pairs_avx2(words.data(), thr.data(), n, e2.data(), r2.data());
        CHECK(e1 == e2);
        CHECK(r1 == r2);

        kernels::mask_single_scalar(words.data(), thr.data(), n, e1.data());
        kernels::mask_single_avx2(words.data(), thr.data(), n, e2.data());
        CHECK(e1 == e2);
    }
}
#endif

TEST_CASE("mask thresholds: never at 0, always at 2^32, coin only inside erasure") {
    const int n = 64;
    std::vector<std::uint32_t> words(4 * ((2 * n + 3) / 4));
    kernels::philox_fill(7, 1, 3, 0, (2 * n + 3) / 4, words.data());
    std::vector<std::uint64_t> thr(n, 0);
    std::vector<std::uint64_t> erased(1), realized(1);
    kernels::mask_pairs(words.data(), thr.data(), n, erased.data(), realized.data());
    CHECK(erased[0] == 0);
    CHECK(realized[0] == 0);

    std::fill(thr.begin(), thr.end(), std::uint64_t{1} << 32);
    kernels::mask_pairs(words.data(), thr.data(), n, erased.data(), realized.data());
    CHECK(erased[0] == ~std::uint64_t{0});
    CHECK((realized[0] & ~erased[0]) == 0);
}

TEST_CASE("philox stream doubles are uniform in [0, 1)") {
    PhiloxStream s(1, 0);
    double sum = 0;
    for (int i = 0; i < 10'000; ++i) {
        const double u = s.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(sum / 10'000 == doctest::Approx(0.5).epsilon(0.02));
}

#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace qecforge {

// GF(2) set of edge ids. Sized once for a fixed edge count; xor/intersection
// parity are the only operations the homology code needs.
class EdgeBits {
public:
    EdgeBits() = default;
    explicit EdgeBits(int n_edges) : n_(n_edges), w_((n_edges + 63) / 64, 0) {}

    int universe_size() const { return n_; }

    bool test(int e) const { return (w_[e >> 6] >> (e & 63)) & 1u; }
    void set(int e) { w_[e >> 6] |= std::uint64_t{1} << (e & 63); }
    void flip(int e) { w_[e >> 6] ^= std::uint64_t{1} << (e & 63); }

    EdgeBits& operator^=(const EdgeBits& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    friend EdgeBits operator^(EdgeBits a, const EdgeBits& b) { return a ^= b; }

    int count() const {
        int c = 0;
        for (auto w : w_) c += std::popcount(w);
        return c;
    }
    bool empty() const {
        for (auto w : w_)
            if (w) return false;
        return true;
    }

    // Parity of |a & b|; the mod-2 intersection pairing when b is a dual cycle.
    friend bool odd_overlap(const EdgeBits& a, const EdgeBits& b) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < a.w_.size(); ++i) acc ^= a.w_[i] & b.w_[i];
        return std::popcount(acc) & 1;
    }

    std::vector<int> to_list() const {
        std::vector<int> out;
        for (int e = 0; e < n_; ++e)
            if (test(e)) out.push_back(e);
        return out;
    }

    bool operator==(const EdgeBits&) const = default;

private:
    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

} // namespace qecforge

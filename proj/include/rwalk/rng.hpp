#pragma once

// Counter-based random streams.
//
// Every stream is addressed by (seed, stream_id). Draw number i of a stream
// is a pure function of (seed, stream_id, i), so a Monte Carlo replica gives
// the same numbers no matter which worker runs it or in which order.

#include <array>
#include <cmath>
#include <cstdint>

namespace rwalk {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter block(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/// A deterministic random stream owned by exactly one worker.
///
/// The 128-bit Philox counter holds (block index, stream_id); the key holds
/// the seed. Distinct stream ids therefore never share a counter value.
/// Blocks are generated eight at a time and consumed as 32-bit words.
class RandomStream {
public:
    static constexpr unsigned kBatch = 8;

    RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : seed_(seed), stream_id_(stream_id) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint32_t next_u32() noexcept {
        if (pos_ == kWords) refill();
        return words_[pos_++];
    }

    /// Low word first.
    std::uint64_t next_u64() noexcept {
        const std::uint64_t lo = next_u32();
        return lo | (std::uint64_t{next_u32()} << 32);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Unbiased uniform integer on [0, bound), bound > 0 (Lemire's method).
    /// Bounds up to 2^32 consume 32-bit words, larger ones 64-bit words.
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 0x100000000ull) return below32(bound);
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// True with probability p, resolved on a 2^-32 grid from one word.
    /// Exact for p in {0, 1} and for dyadic p with at most 32 bits.
    bool bernoulli(double p) noexcept {
        return static_cast<double>(next_u32()) * 0x1.0p-32 < p;
    }

    /// Fair sign from a single buffered bit (32 signs per word).
    int sign() noexcept {
        if (bits_left_ == 0) {
            bits_ = next_u32();
            bits_left_ = 32;
        }
        const int s = (bits_ & 1u) ? -1 : 1;
        bits_ >>= 1;
        --bits_left_;
        return s;
    }

    /// Standard normal (Marsaglia polar method, pairs cached).
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    static constexpr unsigned kWords = 4 * kBatch;

    std::uint64_t below32(std::uint64_t bound) noexcept {
        std::uint64_t m = std::uint64_t{next_u32()} * bound;
        auto low = static_cast<std::uint32_t>(m);
        if (low < bound) {
            const auto threshold = static_cast<std::uint32_t>((0x100000000ull - bound) % bound);
            while (low < threshold) {
                m = std::uint64_t{next_u32()} * bound;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return m >> 32;
    }

    // Same rounds as Philox4x32::block, laid out lane-wise so the compiler
    // can vectorize the 32x32->64 multiplies across blocks.
    void refill() noexcept {
        std::array<std::uint32_t, kBatch> c0{}, c1{}, c2{}, c3{};
        for (unsigned b = 0; b < kBatch; ++b) {
            const std::uint64_t idx = block_ + b;
            c0[b] = static_cast<std::uint32_t>(idx);
            c1[b] = static_cast<std::uint32_t>(idx >> 32);
            c2[b] = static_cast<std::uint32_t>(stream_id_);
            c3[b] = static_cast<std::uint32_t>(stream_id_ >> 32);
        }
        std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
        std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k0 += Philox4x32::kWeyl0;
                k1 += Philox4x32::kWeyl1;
            }
            for (unsigned b = 0; b < kBatch; ++b) {
                const std::uint64_t p0 = std::uint64_t{Philox4x32::kMul0} * c0[b];
                const std::uint64_t p1 = std::uint64_t{Philox4x32::kMul1} * c2[b];
                const auto n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1[b] ^ k0;
                const auto n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3[b] ^ k1;
                c1[b] = static_cast<std::uint32_t>(p1);
                c3[b] = static_cast<std::uint32_t>(p0);
                c0[b] = n0;
                c2[b] = n2;
            }
        }
        for (unsigned b = 0; b < kBatch; ++b) {
            words_[4 * b] = c0[b];
            words_[4 * b + 1] = c1[b];
            words_[4 * b + 2] = c2[b];
            words_[4 * b + 3] = c3[b];
        }
        block_ += kBatch;
        pos_ = 0;
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, kWords> words_{};
    unsigned pos_ = kWords;
    std::uint32_t bits_ = 0;
    unsigned bits_left_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

inline RandomStream rng_stream(std::uint64_t seed, std::uint64_t stream_id) noexcept {
    return RandomStream(seed, stream_id);
}

}  // namespace rwalk

#pragma once

#include <array>
#include <cstdint>

namespace ergoscope {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A draw is a
// pure function of (key, counter), so sample i of a run can be produced by
// any worker in any order.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter counter, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeylA;
                key[1] += kWeylB;
            }
            counter = single_round(counter, key);
        }
        return counter;
    }

private:
    static constexpr std::uint32_t kMulA = 0xD2511F53u;
    static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

    static Counter single_round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Stream identifiers keep the robot and ergonomic-model draws independent
/// under one user seed.
enum class StreamId : std::uint32_t {
    JointSamples = 1,
    EhemSamples = 2,
};

/// Deterministic uniform deviates addressed by (seed, stream, index).
/// Each index owns an unbounded sequence of doubles in [0, 1): the k-th
/// pair of 32-bit words of block k/2 forms one 53-bit mantissa.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, StreamId stream, std::uint64_t index) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          index_(index),
          stream_(static_cast<std::uint32_t>(stream)) {}

    /// Uniform double in [0, 1).
    double uniform() noexcept {
        if (cursor_ == 4) refill();
        const std::uint64_t hi = block_[cursor_];
        const std::uint64_t lo = block_[cursor_ + 1];
        cursor_ += 2;
        const std::uint64_t bits = ((hi << 32) | lo) >> 11;
        return static_cast<double>(bits) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi]; returns lo exactly when lo == hi.
    double uniform(double lo, double hi) noexcept {
        const double u = uniform();
        return lo == hi ? lo : lo + u * (hi - lo);
    }

private:
    void refill() noexcept {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index_),
                                      static_cast<std::uint32_t>(index_ >> 32), stream_,
                                      block_counter_++};
        block_ = Philox4x32::generate(ctr, key_);
        cursor_ = 0;
    }

    Philox4x32::Key key_;
    std::uint64_t index_;
    std::uint32_t stream_;
    std::uint32_t block_counter_ = 0;
    Philox4x32::Counter block_{};
    int cursor_ = 4;
};

}  // namespace ergoscope

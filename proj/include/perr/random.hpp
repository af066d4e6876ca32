#pragma once

#include <array>
#include <cstdint>

namespace perr {

/// SplitMix64 finalizer. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Probability stored as a 53-bit integer threshold so Bernoulli draws are
/// a single integer compare. p = 1 maps to 2^53 and always succeeds.
class BernoulliThreshold {
public:
    constexpr BernoulliThreshold() = default;
    explicit BernoulliThreshold(double p);

    constexpr std::uint64_t raw() const noexcept { return threshold_; }

private:
    std::uint64_t threshold_ = 0;
};

/// xoshiro256** generator. Deterministic, bit-stable across platforms and
/// standard libraries; never shared between threads.
class RandomStream {
public:
    using result_type = std::uint64_t;

    /// Expands `seed` into the 256-bit state with SplitMix64.
    explicit RandomStream(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool bernoulli(BernoulliThreshold p) noexcept { return ((*this)() >> 11) < p.raw(); }

    /// Uniform integer in [0, bound), bound > 0. Lemire's multiply-shift with
    /// rejection, so the result is exactly uniform.
    std::uint64_t below(std::uint64_t bound) noexcept;

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace perr

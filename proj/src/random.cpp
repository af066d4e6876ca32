#include "perr/random.hpp"

#include <cmath>

namespace perr {

BernoulliThreshold::BernoulliThreshold(double p) {
    constexpr double scale = 0x1.0p53;
    if (!(p > 0.0)) {
        threshold_ = 0;
    } else if (p >= 1.0) {
        threshold_ = std::uint64_t{1} << 53;
    } else {
        threshold_ = static_cast<std::uint64_t>(std::llround(p * scale));
    }
}

RandomStream::RandomStream(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& word : state_) {
        x += 0x9e3779b97f4a7c15ULL;
        word = mix64(x);
    }
}

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::uint64_t RandomStream::below(std::uint64_t bound) noexcept {
    u128 m = static_cast<u128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t floor = (0 - bound) % bound;
        while (low < floor) {
            m = static_cast<u128>((*this)()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace perr

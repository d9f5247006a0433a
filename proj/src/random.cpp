#include "rrgen/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rrgen {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

} // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
}

RngStream RngStream::derive(std::uint64_t key_a, std::uint64_t key_b) const {
    std::uint64_t s = seed_;
    std::uint64_t mix = splitmix64(s);
    mix ^= 0x2545f4914f6cdd1dULL * (key_a + 1);
    std::uint64_t t = mix;
    (void)splitmix64(t);
    t ^= 0x9e3779b97f4a7c15ULL * (key_b + 1);
    return RngStream(t);
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    ++position_;
    return result;
}

double RngStream::next_uniform() {
    // 53-bit mantissa; map to (0, 1] so log() is always safe.
    return 1.0 - static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gauss(double sigma) {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return sigma * radius * std::cos(2.0 * std::numbers::pi * u2);
}

Vector gauss_draw(RngStream& rng, Index n, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gauss_draw: sigma must be positive");
    Vector out(n);
    Index i = 0;
    while (i < n) {
        const double u1 = rng.next_uniform();
        const double u2 = rng.next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        out[i++] = sigma * radius * std::cos(2.0 * std::numbers::pi * u2);
        if (i < n) out[i++] = sigma * radius * std::sin(2.0 * std::numbers::pi * u2);
    }
    return out;
}

} // namespace rrgen

#pragma once

#include <cstdint>

#include "rrgen/types.hpp"

namespace rrgen {

/// Deterministic 64-bit generator (xoshiro256++ seeded through splitmix64).
/// The stream is a pure function of (seed, position): replaying the same
/// seed reproduces the same draws on every platform, independent of the
/// standard library in use.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    /// Independent substream for parallel work, keyed by up to two indices
    /// (e.g. sweep cell and trial). Distinct keys give uncorrelated streams.
    RngStream derive(std::uint64_t key_a, std::uint64_t key_b = 0) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t position() const { return position_; }

    /// Next raw 64-bit word; advances position by one.
    std::uint64_t next_u64();

    /// Uniform draw in (0, 1].
    double next_uniform();

    /// Single N(0, sigma^2) draw (consumes two uniforms).
    double next_gauss(double sigma = 1.0);

private:
    std::uint64_t seed_;
    std::uint64_t position_ = 0;
    std::uint64_t state_[4];
};

/// n i.i.d. N(0, sigma^2) draws as a column vector.
Vector gauss_draw(RngStream& rng, Index n, double sigma);

} // namespace rrgen

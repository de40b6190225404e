#pragma once
// Deterministic xoshiro256** stream seeded via splitmix64. Pure integer
// arithmetic, so sequences are bit-identical across platforms.

#include <cstdint>

#include "pgae/tensor.hpp"

namespace pgae {

class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t next_u64();
    double uniform();                          // [0, 1)
    double uniform(double lo, double hi);      // [lo, hi)
    std::uint64_t uniform_int(std::uint64_t n);  // unbiased, [0, n)

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::uint64_t s_[4];
};

// Glorot-style uniform init: entries in +/- sqrt(6 / (fan_in + fan_out)).
// Returned matrix has fan_out rows and fan_in columns.
Mat init_uniform(RngStream& rng, std::size_t fan_in, std::size_t fan_out);
Vec init_uniform_vec(RngStream& rng, std::size_t n, double bound);

}  // namespace pgae

#pragma once

#include <cstdint>
#include <random>

namespace arproc {

/// Reproducible uniform stream. Each (seed, stream) pair yields an
/// independent sequence (splitmix64 mixing of the stream id), so
/// replications can be distributed without coordination. In antithetic
/// mode every uniform u is replaced by 1-u.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream, bool antithetic = false);

    /// Uniform draw in the open interval (0,1).
    double uniform();

  private:
    std::mt19937_64 gen_;
    bool anti_;
};

}  // namespace arproc

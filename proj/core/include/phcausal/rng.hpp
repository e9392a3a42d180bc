#pragma once

#include <cstdint>
#include <random>

#include "phcausal/stats.hpp"

namespace phcausal {

/// Seeded 64-bit random stream. The engine is std::mt19937_64 seeded through
/// std::seed_seq from (seed, stream_id); both are fully specified by the C++
/// standard, so sequences are identical on every conforming platform.
/// A stream is a value: copy it to fork, move it between threads, but never
/// draw from one instance concurrently.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Uniform on the open interval (0, 1): (k + 0.5) / 2^53 for a 53-bit k.
double draw_uniform(RngStream& rng);

/// Normal variate by inversion of one uniform through normal_quantile (AS241).
/// sd == 0 returns mean exactly and still consumes one uniform.
double draw_normal(RngStream& rng, const GaussianSpec& spec);

int draw_bernoulli(RngStream& rng, double p);

/// Exponential(rate) by inversion; rate must be positive.
double draw_exponential(RngStream& rng, double rate);

}  // namespace phcausal

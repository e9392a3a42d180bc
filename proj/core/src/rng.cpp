#include "phcausal/rng.hpp"

#include <cmath>

#include "phcausal/error.hpp"

namespace phcausal {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double draw_uniform(RngStream& rng) {
  const std::uint64_t k = rng.next_u64() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double draw_normal(RngStream& rng, const GaussianSpec& spec) {
  if (!(spec.sd >= 0.0)) {
    throw InvalidArgument("draw_normal: sd must be nonnegative");
  }
  const double u = draw_uniform(rng);
  if (spec.sd == 0.0) {
    return spec.mean;
  }
  return spec.mean + spec.sd * normal_quantile(u);
}

int draw_bernoulli(RngStream& rng, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("draw_bernoulli: p must lie in [0, 1]");
  }
  return draw_uniform(rng) < p ? 1 : 0;
}

double draw_exponential(RngStream& rng, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidArgument("draw_exponential: rate must be positive and finite");
  }
  return -std::log1p(-draw_uniform(rng)) / rate;
}

}  // namespace phcausal

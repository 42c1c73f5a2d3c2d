#pragma once

#include <cstdint>
#include <random>

namespace mcure {

/// Derives a decorrelated child seed; stream(m, i) == Rng(derive_seed(m, i)).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id);

/// Seeded RNG with the variate transforms the samplers need. Distribution
/// algorithms are implemented here rather than taken from <random> so that a
/// given seed yields the same stream on every platform and toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from a master seed; used to give each chain
  /// and each replicate its own stream.
  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id);

  double uniform();  // open interval (0, 1)
  double normal();   // standard normal, Marsaglia polar method
  double normal(double mean, double sd) { return mean + sd * normal(); }
  double exponential(double rate) { return -std::log(uniform()) / rate; }
  bool bernoulli(double p) { return uniform() < p; }

  /// Marsaglia-Tsang; shape < 1 handled by the boost trick.
  double gamma(double shape, double rate);
  /// 1 / Gamma(shape, scale): mean scale / (shape - 1) for shape > 1.
  double inv_gamma(double shape, double scale) { return 1.0 / gamma(shape, scale); }
  /// Michael-Schucany-Haas transformation; mean mu, shape lambda.
  double inverse_gaussian(double mu, double lambda);
  double weibull(double shape, double scale);

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mcure

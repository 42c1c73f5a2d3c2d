#include "mcure/random.hpp"

#include <cmath>
#include <stdexcept>

namespace mcure {

namespace {

// splitmix64 finalizer, used only for seed derivation
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id) {
  return mix64(master_seed ^ mix64(stream_id + 1));
}

Rng Rng::stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return Rng(derive_seed(master_seed, stream_id));
}

double Rng::uniform() {
  // 53-bit mantissa in (0, 1); reject exact zeros so log() stays finite
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double Rng::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("gamma requires positive shape and rate");
  if (shape < 1.0) {
    const double u = uniform();
    return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double Rng::inverse_gaussian(double mu, double lambda) {
  if (!(mu > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("inverse_gaussian requires positive mu and lambda");
  double y = normal();
  y *= y;
  // The textbook root mu(1 + q - sqrt(q^2 + 2q)), q = mu y / (2 lambda),
  // cancels badly for large q; the reciprocal form is exact algebra.
  const double q = 0.5 * mu * y / lambda;
  const double w = mu / (1.0 + q + std::sqrt(q * (q + 2.0)));
  if (uniform() <= mu / (mu + w)) return w;
  return mu * mu / w;
}

double Rng::weibull(double shape, double scale) {
  return scale * std::pow(-std::log(uniform()), 1.0 / shape);
}

}  // namespace mcure

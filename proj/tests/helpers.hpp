// Test-side oracles and utilities, kept independent of the library's
// implementation paths.
#pragma once

#include "mcure/random.hpp"
#include "mcure/types.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace testutil {

// ---------------------------------------------------------------------------
// analytic CDFs

inline double normal_cdf(double x, double mu = 0.0, double sd = 1.0) {
  return 0.5 * std::erfc(-(x - mu) / (sd * std::sqrt(2.0)));
}

// regularized lower incomplete gamma P(a, x), series + continued fraction
inline double reg_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

inline double gamma_cdf(double x, double shape, double rate) {
  return reg_gamma_p(shape, rate * x);
}

inline double inv_gamma_cdf(double x, double shape, double scale) {
  if (x <= 0.0) return 0.0;
  return 1.0 - reg_gamma_p(shape, scale / x);
}

inline double inv_gaussian_cdf(double x, double mu, double lambda) {
  if (x <= 0.0) return 0.0;
  const double r = std::sqrt(lambda / x);
  return normal_cdf(r * (x / mu - 1.0)) +
         std::exp(2.0 * lambda / mu) * normal_cdf(-r * (x / mu + 1.0));
}

// ---------------------------------------------------------------------------
// one-sample Kolmogorov-Smirnov

template <typename Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - i / n));
    d = std::max(d, std::abs((i + 1) / n - f));
  }
  return d;
}

// asymptotic Kolmogorov distribution tail
inline double ks_pvalue(double d, std::size_t n) {
  const double t = (std::sqrt(static_cast<double>(n)) + 0.12 + 0.11 / std::sqrt(static_cast<double>(n))) * d;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k)
    sum += (k % 2 == 1 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * t * t);
  return std::clamp(sum, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// random small datasets with moderate hazards (keeps H0 e^{x'beta} order 1)

struct RandomDataset {
  mcure::SurvivalDataset data;
  mcure::TimePartition partition;
  mcure::CureParameters params;      // theta set
  mcure::ShrinkageState shrink;
  mcure::Hyperparameters hyper;
};

inline RandomDataset random_dataset(std::uint64_t seed, int n, int p1 = 2, int p2 = 2,
                                    int intervals = 2) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> norm(0.0, 1.0);

  RandomDataset r;
  r.data.times.resize(n);
  r.data.status.resize(n);
  r.data.x.resize(n, p2);
  r.data.z.resize(n, p1 + 1);
  for (int i = 0; i < n; ++i) {
    r.data.times[i] = 0.1 + 1.1 * unif(eng);
    r.data.status[i] = unif(eng) < 0.6 ? 1 : 0;
    r.data.z(i, 0) = 1.0;
    for (int j = 0; j < p1; ++j) r.data.z(i, j + 1) = norm(eng);
    for (int j = 0; j < p2; ++j) r.data.x(i, j) = norm(eng);
  }

  Eigen::VectorXd cuts(intervals + 1);
  cuts[0] = 0.0;
  const double top = r.data.times.maxCoeff() * 1.05;
  for (int j = 1; j <= intervals; ++j) cuts[j] = top * j / intervals;
  r.partition = mcure::TimePartition::from_cuts(cuts);

  r.params.b.resize(p1 + 1);
  r.params.beta.resize(p2);
  for (int j = 0; j <= p1; ++j) r.params.b[j] = 0.6 * (unif(eng) - 0.5);
  for (int j = 0; j < p2; ++j) r.params.beta[j] = 0.4 * (unif(eng) - 0.5);
  r.params.lambda.resize(intervals);
  for (int j = 0; j < intervals; ++j) r.params.lambda[j] = 0.2 + 0.5 * unif(eng);
  r.params.theta = 0.5 + 2.0 * unif(eng);

  r.shrink.tau_sq = Eigen::VectorXd::Ones(p1 + 1);
  r.shrink.tau_star_sq = Eigen::VectorXd::Ones(p2);
  for (int j = 0; j <= p1; ++j) r.shrink.tau_sq[j] = 0.3 + unif(eng);
  for (int j = 0; j < p2; ++j) r.shrink.tau_star_sq[j] = 0.3 + unif(eng);
  r.shrink.sigma_sq = 0.5 + unif(eng);
  r.shrink.sigma_star_sq = 0.5 + unif(eng);
  r.shrink.eta_sq = 0.5 + unif(eng);
  r.shrink.eta_star_sq = 0.5 + unif(eng);
  return r;
}

}  // namespace testutil

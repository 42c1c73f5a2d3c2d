#include "mcure/diagnostics.hpp"

#include "mcure/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mcure {

namespace {

double sample_variance(const VectorXd& v) {
  const double m = v.mean();
  return (v.array() - m).square().sum() / (static_cast<double>(v.size()) - 1.0);
}

}  // namespace

double psrf(const std::vector<VectorXd>& chains) {
  const auto m = static_cast<int>(chains.size());
  if (m < 2) throw std::invalid_argument("psrf needs at least two chains");
  const auto n = static_cast<int>(chains.front().size());
  if (n < 10) throw std::invalid_argument("psrf needs chains of length >= 10");
  for (const auto& c : chains)
    if (c.size() != n) throw std::invalid_argument("psrf needs equal-length chains");

  VectorXd means(m);
  double w = 0.0;
  for (int j = 0; j < m; ++j) {
    means[j] = chains[j].mean();
    w += sample_variance(chains[j]);
  }
  w /= m;
  const double grand = means.mean();
  const double b_over_n = (means.array() - grand).square().sum() / (m - 1.0);

  if (w == 0.0) return b_over_n == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double nn = n;
  // floored at 1: values below 1 are pure finite-sample noise, and identical
  // chains should diagnose as exactly converged
  return std::max(1.0, std::sqrt(((nn - 1.0) / nn * w + b_over_n) / w));
}

double psrf_split(const std::vector<VectorXd>& chains) {
  std::vector<VectorXd> halves;
  for (const auto& c : chains) {
    const auto h = static_cast<int>(c.size()) / 2;
    halves.push_back(c.head(h));
    halves.push_back(c.tail(h));
  }
  return psrf(halves);
}

std::pair<double, double> hpd_interval(const VectorXd& draws, double level) {
  const auto n = static_cast<int>(draws.size());
  if (n < 20) throw std::invalid_argument("hpd_interval needs at least 20 draws");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie in (0,1)");

  std::vector<double> s(draws.data(), draws.data() + n);
  std::sort(s.begin(), s.end());
  const int offset = std::min(n - 1, static_cast<int>(std::floor(level * n)));
  int best = 0;
  double best_width = std::numeric_limits<double>::infinity();
  for (int i = 0; i + offset < n; ++i) {
    const double width = s[i + offset] - s[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return {s[best], s[best + offset]};
}

ParameterSummary summarize_scalar(const std::string& name,
                                  const std::vector<VectorXd>& chains, double level) {
  if (chains.empty()) throw std::invalid_argument("no chains");
  VectorXd pooled(std::accumulate(chains.begin(), chains.end(), 0,
                                  [](int acc, const VectorXd& c) {
                                    return acc + static_cast<int>(c.size());
                                  }));
  int at = 0;
  for (const auto& c : chains) {
    pooled.segment(at, c.size()) = c;
    at += static_cast<int>(c.size());
  }

  ParameterSummary s;
  s.name = name;
  s.mean = pooled.mean();
  s.sd = pooled.size() > 1 ? std::sqrt(sample_variance(pooled)) : 0.0;
  if (pooled.size() >= 20) {
    std::tie(s.hpd_low, s.hpd_high) = hpd_interval(pooled, level);
  } else {
    s.hpd_low = s.hpd_high = s.mean;
  }
  s.psrf = chains.size() >= 2 && chains.front().size() >= 10
               ? psrf(chains)
               : std::numeric_limits<double>::quiet_NaN();
  return s;
}

std::vector<ParameterSummary> summarize(const PosteriorDraws& draws, double level) {
  std::vector<ParameterSummary> out;
  out.reserve(draws.names.size());
  for (int j = 0; j < draws.n_params(); ++j)
    out.push_back(summarize_scalar(draws.names[j], draws.per_chain(j), level));
  return out;
}

std::vector<VectorXd> uncured_rate_series(const PosteriorDraws& draws,
                                          const SurvivalDataset& data) {
  std::vector<VectorXd> series;
  series.reserve(draws.chains.size());
  for (const auto& chain : draws.chains) {
    VectorXd v(chain.params.rows());
    for (int r = 0; r < chain.params.rows(); ++r) {
      const VectorXd b = chain.params.row(r).segment(0, draws.n_b).transpose();
      double acc = 0.0;
      for (int i = 0; i < data.n(); ++i)
        acc += incidence_probability(data.z.row(i).transpose(), b);
      v[r] = acc / data.n();
    }
    series.push_back(std::move(v));
  }
  return series;
}

ParameterSummary uncured_rate_summary(const PosteriorDraws& draws, const SurvivalDataset& data,
                                      double level) {
  return summarize_scalar("pi_bar", uncured_rate_series(draws, data), level);
}

ParameterSummary cure_rate_summary(const PosteriorDraws& draws, const SurvivalDataset& data,
                                   double level) {
  auto series = uncured_rate_series(draws, data);
  for (auto& chain : series) chain = (1.0 - chain.array()).matrix();
  auto s = summarize_scalar("cure_rate", series, level);
  return s;
}

}  // namespace mcure

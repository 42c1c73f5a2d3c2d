#include "mcure/criteria.hpp"

#include "mcure/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mcure {

namespace detail {

double log_sum_exp(const VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

std::pair<double, double> gpd_fit(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const auto n = static_cast<int>(x.size());
  const double nn = n;
  if (n < 5 || !(x.back() > 0.0))
    return {-std::numeric_limits<double>::infinity(), 0.0};

  const int grid = 30 + static_cast<int>(std::floor(std::sqrt(nn)));
  const double xstar = x[static_cast<int>(std::floor(nn / 4.0 + 0.5)) - 1];
  const double xmax = x.back();

  // profile log-likelihood over the Zhang-Stephens grid of b = -xi/sigma
  std::vector<double> bs(grid), ll(grid);
  double ll_max = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid; ++j) {
    const double b = 1.0 / xmax +
                     (1.0 - std::sqrt(grid / (j + 0.5))) / (3.0 * (xstar > 0.0 ? xstar : xmax));
    double xi = 0.0;
    for (double v : x) xi += std::log1p(-b * v);
    xi /= nn;
    bs[j] = b;
    ll[j] = (b != 0.0 && xi != 0.0) ? nn * (std::log(-b / xi) - xi - 1.0)
                                    : -std::numeric_limits<double>::infinity();
    ll_max = std::max(ll_max, ll[j]);
  }
  if (!std::isfinite(ll_max)) return {-std::numeric_limits<double>::infinity(), 0.0};

  double wsum = 0.0, b_hat = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double w = std::exp(ll[j] - ll_max);
    wsum += w;
    b_hat += w * bs[j];
  }
  b_hat /= wsum;

  double xi = 0.0;
  for (double v : x) xi += std::log1p(-b_hat * v);
  xi /= nn;
  const double sigma = b_hat != 0.0 ? -xi / b_hat : std::accumulate(x.begin(), x.end(), 0.0) / nn;
  // weakly informative prior pull toward k = 0.5
  const double k = (nn * xi + 5.0) / (nn + 10.0);
  return {k, sigma};
}

double gpd_quantile(double p, double k, double sigma) {
  if (std::abs(k) < 1e-12) return -sigma * std::log1p(-p);
  return sigma * std::expm1(-k * std::log1p(-p)) / k;
}

}  // namespace detail

std::pair<double, double> dic(const PosteriorDraws& draws, const SurvivalDataset& data,
                              const ModelSpec& spec) {
  if (draws.total_draws() < 2) throw std::invalid_argument("dic needs at least 2 draws");
  const CureParameters nu_bar = draws.mean_parameters();
  const double dev_at_mean =
      -2.0 * log_likelihood(data, nu_bar, spec.partition, spec.family).total;
  const double dev_bar = -2.0 * draws.pooled_loglik().mean();
  const double p_d = dev_bar - dev_at_mean;
  return {dev_at_mean + 2.0 * p_d, p_d};
}

std::pair<double, VectorXd> lpml(const MatrixXd& per_obs_loglik) {
  const auto b = static_cast<int>(per_obs_loglik.rows());
  const auto n = static_cast<int>(per_obs_loglik.cols());
  if (b < 1) throw std::invalid_argument("lpml needs at least one draw");
  VectorXd log_cpo(n);
  double total = 0.0;
  const double log_b = std::log(static_cast<double>(b));
  for (int i = 0; i < n; ++i) {
    log_cpo[i] = log_b - detail::log_sum_exp(-per_obs_loglik.col(i));
    total += log_cpo[i];
  }
  return {total, log_cpo.array().exp().matrix()};
}

std::pair<double, VectorXd> psis_loo(const MatrixXd& per_obs_loglik) {
  const auto b = static_cast<int>(per_obs_loglik.rows());
  const auto n = static_cast<int>(per_obs_loglik.cols());
  if (b < 100) throw std::invalid_argument("psis_loo needs at least 100 draws");

  const int tail = static_cast<int>(
      std::ceil(std::min(0.2 * b, 3.0 * std::sqrt(static_cast<double>(b)))));
  VectorXd pareto_k(n);
  double elpd = 0.0;

  std::vector<int> idx(b);
  for (int i = 0; i < n; ++i) {
    VectorXd lw = -per_obs_loglik.col(i);
    lw.array() -= lw.maxCoeff();  // raw weights now in (0, 1]

    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int c) { return lw[a] < lw[c]; });

    const double cut_lw = lw[idx[b - tail - 1]];
    const double cut_w = std::exp(cut_lw);
    std::vector<double> exceed(tail);
    for (int z = 0; z < tail; ++z) exceed[z] = std::exp(lw[idx[b - tail + z]]) - cut_w;

    const auto [k, sigma] = detail::gpd_fit(exceed);
    pareto_k[i] = k;
    if (std::isfinite(k) && sigma > 0.0) {
      // replace the tail by expected GPD order statistics, capped at the
      // largest raw weight
      for (int z = 0; z < tail; ++z) {
        const double q = detail::gpd_quantile((z + 0.5) / tail, k, sigma);
        lw[idx[b - tail + z]] = std::min(std::log(cut_w + q), 0.0);
      }
    }
    const VectorXd num = lw + per_obs_loglik.col(i);
    elpd += detail::log_sum_exp(num) - detail::log_sum_exp(lw);
  }
  return {-2.0 * elpd, pareto_k};
}

std::pair<double, double> aic_bic(const PosteriorDraws& draws, const SurvivalDataset& data,
                                  const ModelSpec& spec) {
  const CureParameters nu_bar = draws.mean_parameters();
  const double dev =
      -2.0 * log_likelihood(data, nu_bar, spec.partition, spec.family).total;
  const double k = draws.n_likelihood_params();
  return {dev + 2.0 * k, dev + k * std::log(static_cast<double>(data.n()))};
}

CriteriaReport compute_criteria(const PosteriorDraws& draws, const SurvivalDataset& data,
                                const ModelSpec& spec) {
  CriteriaReport r;
  std::tie(r.dic, r.p_d) = dic(draws, data, spec);
  const MatrixXd per_obs = draws.pooled_per_obs_loglik();
  r.lpml = lpml(per_obs).first;
  std::tie(r.looic, r.pareto_k) = psis_loo(per_obs);
  std::tie(r.aic, r.bic) = aic_bic(draws, data, spec);
  return r;
}

}  // namespace mcure

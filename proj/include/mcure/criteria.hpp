#pragma once

#include "mcure/sampler.hpp"

namespace mcure {

struct CriteriaReport {
  double dic = 0.0;
  double p_d = 0.0;
  double lpml = 0.0;
  double looic = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  VectorXd pareto_k;  // one per observation, PSIS-LOO only
};

/// Deviance information criterion. Dev(nu) = -2 log L; DIC = Dev(nu_bar) +
/// 2 p_D with p_D = mean Dev - Dev(nu_bar), nu_bar the element-wise posterior
/// mean of the likelihood parameters.
std::pair<double, double> dic(const PosteriorDraws& draws, const SurvivalDataset& data,
                              const ModelSpec& spec);

/// Log pseudo-marginal likelihood. CPO_i is the harmonic mean of the per-draw
/// likelihood contributions, computed in log space.
std::pair<double, VectorXd> lpml(const MatrixXd& per_obs_loglik);

/// Pareto-smoothed importance-sampling LOO. Returns (LOOIC, pareto k per
/// observation). Requires at least 100 draws.
std::pair<double, VectorXd> psis_loo(const MatrixXd& per_obs_loglik);

/// Plug-in AIC/BIC at the posterior mean; k counts the sampled likelihood
/// parameters (b, beta, lambda[, theta]).
std::pair<double, double> aic_bic(const PosteriorDraws& draws, const SurvivalDataset& data,
                                  const ModelSpec& spec);

CriteriaReport compute_criteria(const PosteriorDraws& draws, const SurvivalDataset& data,
                                const ModelSpec& spec);

namespace detail {

/// Zhang-Stephens empirical-Bayes fit of a generalized Pareto distribution to
/// exceedances, with the weak prior pull toward k = 0.5 from the published
/// PSIS recipe. Returns (k, sigma).
std::pair<double, double> gpd_fit(std::vector<double> exceedances);

double gpd_quantile(double p, double k, double sigma);

double log_sum_exp(const VectorXd& v);

}  // namespace detail

}  // namespace mcure

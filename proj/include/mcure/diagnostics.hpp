#pragma once

#include "mcure/sampler.hpp"

namespace mcure {

/// Gelman-Rubin potential scale reduction factor,
/// sqrt(((n-1)/n W + B/n) / W), with the classic between/within variances.
/// Returns 1 for a constant parameter and +inf when the chains are constant
/// but disagree. Requires >= 2 chains of equal length >= 10.
double psrf(const std::vector<VectorXd>& chains);

/// Split-halves variant: each chain is halved before the classic computation.
double psrf_split(const std::vector<VectorXd>& chains);

/// Shortest interval covering floor(level * n) + 1 sorted draws
/// (the empirical HPD of Chen-Shao). Requires >= 20 draws.
std::pair<double, double> hpd_interval(const VectorXd& draws, double level = 0.95);

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double hpd_low = 0.0;
  double hpd_high = 0.0;
  double psrf = 1.0;  // NaN when only one chain was run
};

ParameterSummary summarize_scalar(const std::string& name,
                                  const std::vector<VectorXd>& chains, double level = 0.95);

/// One summary per parameter column of the fit.
std::vector<ParameterSummary> summarize(const PosteriorDraws& draws, double level = 0.95);

/// Subject-averaged uncured rate pi_bar = mean_i pi(z_i; b), one value per
/// draw, summarized like any scalar parameter.
ParameterSummary uncured_rate_summary(const PosteriorDraws& draws, const SurvivalDataset& data,
                                      double level = 0.95);

/// 1 - pi_bar, for cure-rate reporting.
ParameterSummary cure_rate_summary(const PosteriorDraws& draws, const SurvivalDataset& data,
                                   double level = 0.95);

/// Per-chain series of pi_bar, used by the summaries above.
std::vector<VectorXd> uncured_rate_series(const PosteriorDraws& draws,
                                          const SurvivalDataset& data);

}  // namespace mcure

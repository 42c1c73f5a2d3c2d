#pragma once

#include "mcure/types.hpp"

namespace mcure {

namespace detail {

// Linear predictors are capped at +/-700 before exponentiation; callers that
// care about clamping pass a counter.
constexpr double kLinPredCap = 700.0;
constexpr double kHazardExpCap = 1e300;

inline double clamp_lp(double w, long* clamped = nullptr) {
  if (w > kLinPredCap) {
    if (clamped) ++*clamped;
    return kLinPredCap;
  }
  if (w < -kLinPredCap) {
    if (clamped) ++*clamped;
    return -kLinPredCap;
  }
  return w;
}

// log(1 + e^w), stable over the whole real line
inline double softplus(double w) {
  const double aw = std::abs(w);
  return std::max(w, 0.0) + std::log1p(std::exp(-aw));
}

// log of the latency survival S(t | x): -A without frailty,
// -theta * log(1 + A/theta) with gamma frailty, where A = H0(t) e^{x'beta}.
inline double log_latency_survival_from_A(double A, const std::optional<double>& theta) {
  if (!theta) return -A;
  return -*theta * std::log1p(A / *theta);
}

}  // namespace detail

/// pi(z) = e^{z'b} / (1 + e^{z'b}), stable for |z'b| up to the cap.
double incidence_probability(const VectorXd& z_row, const VectorXd& b);

/// Constant hazard of the interval containing t.
double baseline_hazard_at(double t, const TimePartition& partition, const VectorXd& lambda);

/// H0(t) = lambda_j (t - s_j) + sum_{k<j} lambda_k (s_{k+1} - s_k); H0(0) = 0.
double baseline_cumhaz_at(double t, const TimePartition& partition, const VectorXd& lambda);

/// Survival of the uncured: exp(-H0 e^{x'beta}) or the gamma-frailty Laplace
/// form (1 + e^{x'beta} H0 / theta)^{-theta}.
double latency_survival(double t, const VectorXd& x_row, const VectorXd& beta,
                        const TimePartition& partition, const VectorXd& lambda,
                        const std::optional<double>& theta = std::nullopt);

double population_survival(double t, const VectorXd& x_row, const VectorXd& z_row,
                           const CureParameters& params, const TimePartition& partition);

double population_density(double t, const VectorXd& x_row, const VectorXd& z_row,
                          const CureParameters& params, const TimePartition& partition);

struct LogLikelihood {
  double total = 0.0;
  VectorXd per_obs;     // delta_i log f_pop(t_i) + (1 - delta_i) log S_pop(t_i)
  long clamped = 0;     // number of linear predictors hit by the +/-700 cap
};

/// Observed-data log-likelihood. Computed in log space throughout; finite for
/// any valid parameter values.
LogLikelihood log_likelihood(const SurvivalDataset& data, const CureParameters& params,
                             const TimePartition& partition, ModelFamily family);

}  // namespace mcure

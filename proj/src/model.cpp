#include "mcure/model.hpp"

#include <cmath>
#include <stdexcept>

namespace mcure {

using detail::clamp_lp;
using detail::log_latency_survival_from_A;
using detail::softplus;

double incidence_probability(const VectorXd& z_row, const VectorXd& b) {
  if (z_row.size() != b.size()) throw std::invalid_argument("z_row and b length mismatch");
  const double lp = clamp_lp(z_row.dot(b));
  // e^lp / (1 + e^lp) = exp(lp - softplus(lp))
  return std::exp(lp - softplus(lp));
}

double baseline_hazard_at(double t, const TimePartition& partition, const VectorXd& lambda) {
  if (lambda.size() != partition.intervals())
    throw std::invalid_argument("lambda length != interval count");
  return lambda[partition.interval_of(t)];
}

double baseline_cumhaz_at(double t, const TimePartition& partition, const VectorXd& lambda) {
  if (lambda.size() != partition.intervals())
    throw std::invalid_argument("lambda length != interval count");
  if (t == 0.0) return 0.0;
  const int j = partition.interval_of(t);
  double h = lambda[j] * (t - partition.cuts[j]);
  for (int k = 0; k < j; ++k) h += lambda[k] * (partition.cuts[k + 1] - partition.cuts[k]);
  return h;
}

double latency_survival(double t, const VectorXd& x_row, const VectorXd& beta,
                        const TimePartition& partition, const VectorXd& lambda,
                        const std::optional<double>& theta) {
  if (theta && !(*theta > 0.0)) throw std::invalid_argument("theta must be > 0");
  if (t == 0.0) return 1.0;
  const double xb = clamp_lp(x_row.dot(beta));
  const double A = std::min(baseline_cumhaz_at(t, partition, lambda) * std::exp(xb),
                            detail::kHazardExpCap);
  return std::exp(log_latency_survival_from_A(A, theta));
}

double population_survival(double t, const VectorXd& x_row, const VectorXd& z_row,
                           const CureParameters& params, const TimePartition& partition) {
  const double pi = incidence_probability(z_row, params.b);
  const double s = t == 0.0 ? 1.0
                            : latency_survival(t, x_row, params.beta, partition, params.lambda,
                                               params.theta);
  return 1.0 - pi + pi * s;
}

double population_density(double t, const VectorXd& x_row, const VectorXd& z_row,
                          const CureParameters& params, const TimePartition& partition) {
  const double pi = incidence_probability(z_row, params.b);
  const double xb = clamp_lp(x_row.dot(params.beta));
  const double h0 = baseline_hazard_at(t, partition, params.lambda);
  const double A = std::min(baseline_cumhaz_at(t, partition, params.lambda) * std::exp(xb),
                            detail::kHazardExpCap);
  double log_s_part;
  if (params.theta)
    log_s_part = -(*params.theta + 1.0) * std::log1p(A / *params.theta);
  else
    log_s_part = -A;
  return pi * h0 * std::exp(xb + log_s_part);
}

LogLikelihood log_likelihood(const SurvivalDataset& data, const CureParameters& params,
                             const TimePartition& partition, ModelFamily family) {
  params.validate(data, partition);
  if (partition.upper() < data.times.maxCoeff())
    throw std::invalid_argument("partition does not cover all observed times");
  const bool frailty = family == ModelFamily::CureFrailty;
  if (frailty && !params.theta)
    throw std::invalid_argument("frailty family requires theta");
  const std::optional<double> theta = frailty ? params.theta : std::nullopt;

  LogLikelihood out;
  out.per_obs.resize(data.n());
  for (int i = 0; i < data.n(); ++i) {
    const double zb = clamp_lp(data.z.row(i).dot(params.b), &out.clamped);
    const double xb = clamp_lp(data.x.row(i).dot(params.beta), &out.clamped);
    const double t = data.times[i];
    const int j = partition.interval_of(t);
    const double A = std::min(baseline_cumhaz_at(t, partition, params.lambda) * std::exp(xb),
                              detail::kHazardExpCap);
    double ll;
    if (data.status[i] == 1) {
      const double log_pi = zb - softplus(zb);
      const double dens_part = theta ? -(*theta + 1.0) * std::log1p(A / *theta) : -A;
      ll = log_pi + std::log(params.lambda[j]) + xb + dens_part;
    } else {
      // log S_pop = log(1 + e^{zb} S) - log(1 + e^{zb})
      ll = softplus(zb + log_latency_survival_from_A(A, theta)) - softplus(zb);
    }
    out.per_obs[i] = ll;
    out.total += ll;
  }
  return out;
}

}  // namespace mcure

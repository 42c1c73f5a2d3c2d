#include "mcure/prior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcure {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kCap = detail::kHazardExpCap;
constexpr double kLp = detail::kLinPredCap;

}  // namespace

double log_joint_posterior(const SurvivalDataset& data, const CureParameters& params,
                           const ShrinkageState& shrink, const Hyperparameters& hyper,
                           const TimePartition& partition, ModelFamily family,
                           PriorFamily prior) {
  hyper.validate();
  const bool frailty = family == ModelFamily::CureFrailty;
  if (frailty && !params.theta)
    throw std::invalid_argument("frailty family requires theta");

  if ((params.lambda.array() <= 0.0).any()) return kNegInf;
  if (frailty && !(*params.theta > 0.0)) return kNegInf;
  if (prior == PriorFamily::LassoHierarchy && !shrink.all_positive()) return kNegInf;

  double lp = log_likelihood(data, params, partition, family).total;

  lp += ((hyper.a - 1.0) * params.lambda.array().log() - hyper.b_rate * params.lambda.array())
            .sum();
  if (frailty)
    lp += (hyper.c - 1.0) * std::log(*params.theta) - hyper.d * *params.theta;

  if (prior == PriorFamily::LassoHierarchy) {
    const int m_b = static_cast<int>(params.b.size());
    const int m_beta = static_cast<int>(params.beta.size());
    // b | tau, sigma^2 and the tau / eta^2 / sigma^2 layers
    lp += -0.5 * (shrink.sigma_sq * shrink.tau_sq.array()).log().sum() -
          (params.b.array().square() / shrink.tau_sq.array()).sum() / (2.0 * shrink.sigma_sq);
    lp += m_b * std::log(shrink.eta_sq / 2.0) - 0.5 * shrink.eta_sq * shrink.tau_sq.sum();
    lp += (hyper.r1 - 1.0) * std::log(shrink.eta_sq) - hyper.delta1 * shrink.eta_sq;
    lp += -std::log(shrink.sigma_sq);
    // starred block for beta
    lp += -0.5 * (shrink.sigma_star_sq * shrink.tau_star_sq.array()).log().sum() -
          (params.beta.array().square() / shrink.tau_star_sq.array()).sum() /
              (2.0 * shrink.sigma_star_sq);
    lp += m_beta * std::log(shrink.eta_star_sq / 2.0) -
          0.5 * shrink.eta_star_sq * shrink.tau_star_sq.sum();
    lp += (hyper.r2 - 1.0) * std::log(shrink.eta_star_sq) - hyper.delta2 * shrink.eta_star_sq;
    lp += -std::log(shrink.sigma_star_sq);
  } else {
    lp += -params.b.squaredNorm() / (2.0 * hyper.sigma_b_sq);
    lp += -params.beta.squaredNorm() / (2.0 * hyper.sigma_beta_sq);
  }
  return lp;
}

double sample_inv_tau_sq(double coef, double sigma_sq, double eta_sq, Rng& rng) {
  if (!(sigma_sq > 0.0) || !(eta_sq > 0.0))
    throw std::invalid_argument("sample_inv_tau_sq requires positive sigma_sq and eta_sq");
  const double mag = std::abs(coef);
  const double mu = mag > 0.0 ? std::sqrt(eta_sq * sigma_sq) / mag : 1e12;
  return rng.inverse_gaussian(mu, eta_sq);
}

double sample_sigma_sq(const VectorXd& coefs, const VectorXd& tau_sq, Rng& rng) {
  if (coefs.size() != tau_sq.size())
    throw std::invalid_argument("coefs and tau_sq length mismatch");
  if ((tau_sq.array() <= 0.0).any())
    throw std::invalid_argument("tau_sq entries must be > 0");
  const double rate = 0.5 * (coefs.array().square() / tau_sq.array()).sum();
  if (!(rate > 0.0))
    throw std::domain_error("sigma^2 conditional degenerate: all coefficients zero");
  return rng.inv_gamma(0.5 * static_cast<double>(coefs.size()), rate);
}

double sample_eta_sq(const VectorXd& tau_sq, double r, double delta, Rng& rng) {
  if ((tau_sq.array() < 0.0).any())
    throw std::invalid_argument("tau_sq entries must be >= 0");
  return rng.gamma(static_cast<double>(tau_sq.size()) + r, delta + 0.5 * tau_sq.sum());
}

// ---------------------------------------------------------------------------
// ConditionalEvaluator

ConditionalEvaluator::ConditionalEvaluator(const SurvivalDataset& data, const ModelSpec& spec,
                                           CureParameters params, ShrinkageState shrink)
    : data_(data), spec_(spec), params_(std::move(params)), shrink_(std::move(shrink)) {
  data_.validate();
  spec_.partition.validate();
  spec_.hyper.validate();
  params_.validate(data_, spec_.partition);
  frailty_ = spec_.family == ModelFamily::CureFrailty;
  if (frailty_ && !params_.theta)
    throw std::invalid_argument("frailty family requires theta");
  if (spec_.partition.upper() < data_.times.maxCoeff())
    throw std::invalid_argument("partition does not cover all observed times");

  const int n = data_.n();
  const int J = spec_.partition.intervals();
  delta_ = data_.status.cast<double>().array();
  cens_ = 1.0 - delta_;
  exposure_.resize(n, J);
  event_count_ = VectorXd::Zero(J);
  for (int i = 0; i < n; ++i) {
    const double t = data_.times[i];
    for (int j = 0; j < J; ++j) {
      const double lo = spec_.partition.cuts[j];
      const double hi = spec_.partition.cuts[j + 1];
      exposure_(i, j) = std::max(0.0, std::min(t, hi) - lo);
    }
    if (data_.status[i] == 1) event_count_[spec_.partition.interval_of(t)] += 1.0;
  }
  tmp1_.resize(n);
  tmp2_.resize(n);
  tmp3_.resize(n);
  refresh();
}

void ConditionalEvaluator::refresh() {
  zb_ = (data_.z * params_.b).array();
  xb_ = (data_.x * params_.beta).array();
  zbc_ = zb_.min(kLp).max(-kLp);
  xbc_ = xb_.min(kLp).max(-kLp);
  exb_ = xbc_.exp();
  cumhaz_ = (exposure_ * params_.lambda).array();
  A_ = (cumhaz_ * exb_).min(kCap);
  log_s_.resize(data_.n());
  fill_log_latency(A_, log_s_);
}

void ConditionalEvaluator::fill_log_latency(const ArrayXd& A, ArrayXd& log_s) const {
  if (frailty_) {
    const double th = *params_.theta;
    log_s = -th * (A / th).log1p();
  } else {
    log_s = -A;
  }
}

double ConditionalEvaluator::dens_part_sum(const ArrayXd& A) const {
  if (frailty_) {
    const double th = *params_.theta;
    return -(th + 1.0) * (delta_ * (A / th).log1p()).sum();
  }
  return -(delta_ * A).sum();
}

double ConditionalEvaluator::cens_softplus_sum(const ArrayXd& w) const {
  return (cens_ * (w.max(0.0) + (-w.abs()).exp().log1p())).sum();
}

double ConditionalEvaluator::bpart_loglik(const ArrayXd& zb_clamped) const {
  const double sp_all = (zb_clamped.max(0.0) + (-zb_clamped.abs()).exp().log1p()).sum();
  return (delta_ * zb_clamped).sum() - sp_all + cens_softplus_sum(zb_clamped + log_s_);
}

double ConditionalEvaluator::coef_quad(const VectorXd& coefs, const VectorXd& tau_sq,
                                       double sigma_sq, double fixed_var, int k,
                                       double v) const {
  if (spec_.prior == PriorFamily::LassoHierarchy) {
    double s = (coefs.array().square() / tau_sq.array()).sum();
    s += (v * v - coefs[k] * coefs[k]) / tau_sq[k];
    return -0.5 * s / sigma_sq;
  }
  const double s = coefs.squaredNorm() + v * v - coefs[k] * coefs[k];
  return -0.5 * s / fixed_var;
}

double ConditionalEvaluator::log_cond_b(int k, double v) const {
  if (!std::isfinite(v)) return kNegInf;
  tmp1_ = (zb_ + data_.z.col(k).array() * (v - params_.b[k])).min(kLp).max(-kLp);
  return bpart_loglik(tmp1_) +
         coef_quad(params_.b, shrink_.tau_sq, shrink_.sigma_sq, spec_.hyper.sigma_b_sq, k, v);
}

double ConditionalEvaluator::log_cond_beta(int k, double v) const {
  if (!std::isfinite(v)) return kNegInf;
  tmp1_ = (xb_ + data_.x.col(k).array() * (v - params_.beta[k])).min(kLp).max(-kLp);
  tmp2_ = (cumhaz_ * tmp1_.exp()).min(kCap);
  double ll = (delta_ * tmp1_).sum() + dens_part_sum(tmp2_);
  fill_log_latency(tmp2_, tmp3_);
  ll += cens_softplus_sum(zbc_ + tmp3_);
  return ll + coef_quad(params_.beta, shrink_.tau_star_sq, shrink_.sigma_star_sq,
                        spec_.hyper.sigma_beta_sq, k, v);
}

double ConditionalEvaluator::log_cond_lambda(int k, double v) const {
  if (!(v > 0.0) || !std::isfinite(v)) return kNegInf;
  tmp1_ = cumhaz_ + exposure_.col(k).array() * (v - params_.lambda[k]);
  tmp2_ = (tmp1_ * exb_).min(kCap);
  double ll = dens_part_sum(tmp2_);
  for (int j = 0; j < event_count_.size(); ++j)
    ll += event_count_[j] * std::log(j == k ? v : params_.lambda[j]);
  fill_log_latency(tmp2_, tmp3_);
  ll += cens_softplus_sum(zbc_ + tmp3_);
  return ll + (spec_.hyper.a - 1.0) * std::log(v) - spec_.hyper.b_rate * v;
}

double ConditionalEvaluator::log_cond_theta(double v) const {
  if (!frailty_) throw std::logic_error("theta conditional requires the frailty family");
  if (!(v > 0.0) || !std::isfinite(v)) return kNegInf;
  tmp1_ = (A_ / v).log1p();
  double ll = -(v + 1.0) * (delta_ * tmp1_).sum();
  tmp2_ = zbc_ - v * tmp1_;
  ll += cens_softplus_sum(tmp2_);
  return ll + (spec_.hyper.c - 1.0) * std::log(v) - spec_.hyper.d * v;
}

void ConditionalEvaluator::set_b(int k, double v) {
  zb_ += data_.z.col(k).array() * (v - params_.b[k]);
  params_.b[k] = v;
  zbc_ = zb_.min(kLp).max(-kLp);
}

void ConditionalEvaluator::set_beta(int k, double v) {
  xb_ += data_.x.col(k).array() * (v - params_.beta[k]);
  params_.beta[k] = v;
  xbc_ = xb_.min(kLp).max(-kLp);
  exb_ = xbc_.exp();
  A_ = (cumhaz_ * exb_).min(kCap);
  fill_log_latency(A_, log_s_);
}

void ConditionalEvaluator::set_lambda(int k, double v) {
  cumhaz_ += exposure_.col(k).array() * (v - params_.lambda[k]);
  params_.lambda[k] = v;
  A_ = (cumhaz_ * exb_).min(kCap);
  fill_log_latency(A_, log_s_);
}

void ConditionalEvaluator::set_theta(double v) {
  params_.theta = v;
  fill_log_latency(A_, log_s_);
}

void ConditionalEvaluator::set_shrinkage(ShrinkageState shrink) {
  shrink_ = std::move(shrink);
}

// ---------------------------------------------------------------------------
// Free-function conditionals

namespace {

ConditionalEvaluator make_eval(const SurvivalDataset& data, const CureParameters& params,
                               const ShrinkageState& shrink, const Hyperparameters& hyper,
                               const TimePartition& partition, ModelFamily family,
                               PriorFamily prior) {
  ModelSpec spec{family, prior, partition, hyper};
  return ConditionalEvaluator(data, spec, params, shrink);
}

}  // namespace

double log_cond_b_k(int k, const SurvivalDataset& data, const CureParameters& params,
                    const ShrinkageState& shrink, const Hyperparameters& hyper,
                    const TimePartition& partition, ModelFamily family, PriorFamily prior) {
  return make_eval(data, params, shrink, hyper, partition, family, prior)
      .log_cond_b(k, params.b[k]);
}

double log_cond_beta_k(int k, const SurvivalDataset& data, const CureParameters& params,
                       const ShrinkageState& shrink, const Hyperparameters& hyper,
                       const TimePartition& partition, ModelFamily family, PriorFamily prior) {
  return make_eval(data, params, shrink, hyper, partition, family, prior)
      .log_cond_beta(k, params.beta[k]);
}

double log_cond_lambda_k(int k, const SurvivalDataset& data, const CureParameters& params,
                         const ShrinkageState& shrink, const Hyperparameters& hyper,
                         const TimePartition& partition, ModelFamily family, PriorFamily prior) {
  return make_eval(data, params, shrink, hyper, partition, family, prior)
      .log_cond_lambda(k, params.lambda[k]);
}

double log_cond_theta(const SurvivalDataset& data, const CureParameters& params,
                      const ShrinkageState& shrink, const Hyperparameters& hyper,
                      const TimePartition& partition, ModelFamily family, PriorFamily prior) {
  if (!params.theta) throw std::invalid_argument("theta is absent");
  return make_eval(data, params, shrink, hyper, partition, family, prior)
      .log_cond_theta(*params.theta);
}

}  // namespace mcure

#pragma once

#include "mcure/model.hpp"
#include "mcure/random.hpp"
#include "mcure/types.hpp"

namespace mcure {

/// Log of the unnormalized joint posterior. Likelihood plus every
/// state-dependent prior factor: the lasso hierarchy with improper 1/sigma^2
/// terms, or fixed-variance normal priors, plus the gamma terms for lambda
/// and (frailty) theta. Support violations yield -infinity.
double log_joint_posterior(const SurvivalDataset& data, const CureParameters& params,
                           const ShrinkageState& shrink, const Hyperparameters& hyper,
                           const TimePartition& partition, ModelFamily family,
                           PriorFamily prior);

/// Draw of the precision 1/tau_k^2 given a coefficient:
/// Inverse-Gaussian(sqrt(eta_sq sigma_sq) / |coef|, eta_sq). An exactly zero
/// coefficient falls back to mean 1e12 (the limiting tail).
double sample_inv_tau_sq(double coef, double sigma_sq, double eta_sq, Rng& rng);

/// sigma^2 | . ~ Inv-Gamma(m/2, sum coef_j^2 / (2 tau_j^2)). Throws if every
/// coefficient is exactly zero (degenerate conditional).
double sample_sigma_sq(const VectorXd& coefs, const VectorXd& tau_sq, Rng& rng);

/// eta^2 | . ~ Gamma(m + r, delta + sum tau_j^2 / 2).
double sample_eta_sq(const VectorXd& tau_sq, double r, double delta, Rng& rng);

/// Incremental evaluator for the Metropolis-within-Gibbs full conditionals.
/// Caches the linear predictors, cumulative hazards and latency survivals of
/// the current state so that each coordinate evaluation costs O(n).
///
/// One evaluator per chain; not safe for concurrent use.
class ConditionalEvaluator {
 public:
  ConditionalEvaluator(const SurvivalDataset& data, const ModelSpec& spec,
                       CureParameters params, ShrinkageState shrink);

  // Log unnormalized full conditionals, evaluated at trial value v with every
  // other coordinate held at the current state.
  double log_cond_b(int k, double v) const;
  double log_cond_beta(int k, double v) const;
  double log_cond_lambda(int k, double v) const;
  double log_cond_theta(double v) const;

  void set_b(int k, double v);
  void set_beta(int k, double v);
  void set_lambda(int k, double v);
  void set_theta(double v);
  void set_shrinkage(ShrinkageState shrink);

  /// Recompute all caches from the current state. Called on construction;
  /// chains call it periodically to shed accumulated round-off.
  void refresh();

  const CureParameters& params() const { return params_; }
  const ShrinkageState& shrinkage() const { return shrink_; }
  const ModelSpec& spec() const { return spec_; }
  const SurvivalDataset& data() const { return data_; }

 private:
  using ArrayXd = Eigen::ArrayXd;

  double bpart_loglik(const ArrayXd& zb_clamped) const;
  double dens_part_sum(const ArrayXd& A) const;          // delta-weighted density exponent
  void fill_log_latency(const ArrayXd& A, ArrayXd& log_s) const;
  double cens_softplus_sum(const ArrayXd& w) const;
  double coef_quad(const VectorXd& coefs, const VectorXd& tau_sq, double sigma_sq,
                   double fixed_var, int k, double v) const;

  const SurvivalDataset& data_;
  ModelSpec spec_;
  CureParameters params_;
  ShrinkageState shrink_;
  bool frailty_;

  ArrayXd delta_, cens_;       // status and its complement, as doubles
  MatrixXd exposure_;          // n x J time at risk within each interval
  VectorXd event_count_;       // events per interval
  ArrayXd zb_, xb_;            // unclamped linear predictors
  ArrayXd zbc_, xbc_;          // clamped copies
  ArrayXd exb_;                // exp(xbc)
  ArrayXd cumhaz_;             // H0(t_i)
  ArrayXd A_;                  // min(H0 exp(xb), cap)
  ArrayXd log_s_;              // log latency survival
  mutable ArrayXd tmp1_, tmp2_, tmp3_;
};

// The spec'd free-function views of the conditionals; each builds a fresh
// evaluator. Used for testing and one-off evaluation, not in the sweep.
double log_cond_b_k(int k, const SurvivalDataset& data, const CureParameters& params,
                    const ShrinkageState& shrink, const Hyperparameters& hyper,
                    const TimePartition& partition, ModelFamily family, PriorFamily prior);
double log_cond_beta_k(int k, const SurvivalDataset& data, const CureParameters& params,
                       const ShrinkageState& shrink, const Hyperparameters& hyper,
                       const TimePartition& partition, ModelFamily family, PriorFamily prior);
double log_cond_lambda_k(int k, const SurvivalDataset& data, const CureParameters& params,
                         const ShrinkageState& shrink, const Hyperparameters& hyper,
                         const TimePartition& partition, ModelFamily family, PriorFamily prior);
double log_cond_theta(const SurvivalDataset& data, const CureParameters& params,
                      const ShrinkageState& shrink, const Hyperparameters& hyper,
                      const TimePartition& partition, ModelFamily family, PriorFamily prior);

}  // namespace mcure

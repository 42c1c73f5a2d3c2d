#pragma once

#include "mcure/prior.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace mcure {

struct InitialState {
  CureParameters params;
  ShrinkageState shrink;
};

struct SamplerConfig {
  int n_chains = 3;
  int n_iterations = 15000;
  int burn_in = 2500;
  int thin = 25;
  std::uint64_t master_seed = 1;
  /// Absent: crude data-driven starting values with seeded per-chain jitter.
  std::optional<InitialState> init;

  int retained_per_chain() const { return (n_iterations - burn_in) / thin; }
  void validate() const;
};

enum class UpdateKind {
  B, Beta, Lambda, Theta, InvTauSq, InvTauStarSq, SigmaSq, SigmaStarSq, EtaSq, EtaStarSq
};

/// One event per parameter update, in sweep order; lets tests audit the exact
/// update schedule.
struct TraceEvent {
  int iteration;  // 1-based
  UpdateKind kind;
  int index;      // coordinate within the block, -1 for scalars
  double value;   // value after the update
  bool accepted;  // always true for Gibbs draws
};
using TraceHook = std::function<void(const TraceEvent&)>;

struct MhStep {
  double value;
  double log_target;
  bool accepted;
};

/// Random-walk Metropolis step, N(current, 1) proposal. The proposal is
/// symmetric so the acceptance ratio is the plain target ratio.
template <typename LogTarget>
MhStep mh_update_normal_rw(double current, double current_log_target, LogTarget&& log_target,
                           Rng& rng) {
  const double prop = current + rng.normal();
  const double prop_lt = log_target(prop);
  const double u = rng.uniform();
  if (std::log(u) < prop_lt - current_log_target) return {prop, prop_lt, true};
  return {current, current_log_target, false};
}

namespace detail {
inline double gamma_logpdf_rate1(double x, double shape) {
  return (shape - 1.0) * std::log(x) - x - std::lgamma(shape);
}
}  // namespace detail

/// Metropolis-Hastings step on the positive half-line with proposal
/// Gamma(shape = current, rate = 1), so the proposal mean equals the current
/// value. The asymmetric proposal densities enter the ratio explicitly.
template <typename LogTarget>
MhStep mh_update_gamma_rw(double current, double current_log_target, LogTarget&& log_target,
                          Rng& rng) {
  const double prop = rng.gamma(current, 1.0);
  if (!(prop > 0.0)) return {current, current_log_target, false};
  const double prop_lt = log_target(prop);
  const double log_ratio = prop_lt - current_log_target +
                           detail::gamma_logpdf_rate1(current, prop) -
                           detail::gamma_logpdf_rate1(prop, current);
  const double u = rng.uniform();
  if (std::log(u) < log_ratio) return {prop, prop_lt, true};
  return {current, current_log_target, false};
}

struct ChainDraws {
  MatrixXd params;          // retained x P, columns as named in PosteriorDraws
  VectorXd loglik;          // total log-likelihood per retained draw
  MatrixXd per_obs_loglik;  // retained x n
  VectorXd accept_count;    // per MH coordinate (b, beta, lambda[, theta])
  VectorXd proposal_count;
  long clamped = 0;         // capped linear predictors over retained evaluations
};

struct PosteriorDraws {
  std::vector<std::string> names;  // parameter column names
  int n_b = 0, n_beta = 0, n_lambda = 0;
  bool has_theta = false;
  ModelFamily family = ModelFamily::Cure;
  PriorFamily prior = PriorFamily::LassoHierarchy;
  std::vector<ChainDraws> chains;

  int n_params() const { return static_cast<int>(names.size()); }
  int n_likelihood_params() const { return n_b + n_beta + n_lambda + (has_theta ? 1 : 0); }
  int retained_per_chain() const;
  int total_draws() const;

  VectorXd pooled(int column) const;
  std::vector<VectorXd> per_chain(int column) const;
  MatrixXd pooled_params() const;
  MatrixXd pooled_per_obs_loglik() const;
  VectorXd pooled_loglik() const;

  /// Element-wise posterior mean of the likelihood parameters (b, beta,
  /// lambda[, theta]) across all chains.
  CureParameters mean_parameters() const;
  std::vector<std::string> mh_coordinate_names() const;
  VectorXd acceptance_rates() const;  // pooled over chains, per MH coordinate
};

std::vector<std::string> parameter_names(const SurvivalDataset& data, const ModelSpec& spec);

InitialState default_initial_state(const SurvivalDataset& data, const ModelSpec& spec,
                                   int chain_index, std::uint64_t master_seed);

/// One chain of the Metropolis-within-Gibbs sweep: b, beta, lambda, (theta),
/// then the conjugate shrinkage block. Deterministic given (master_seed,
/// chain_index).
ChainDraws run_chain(const SurvivalDataset& data, const ModelSpec& spec,
                     const SamplerConfig& config, int chain_index,
                     const TraceHook& trace = {});

/// All chains (optionally in parallel); the result does not depend on the
/// thread count.
PosteriorDraws run_fit(const SurvivalDataset& data, const ModelSpec& spec,
                       const SamplerConfig& config, int n_threads = 0);

}  // namespace mcure

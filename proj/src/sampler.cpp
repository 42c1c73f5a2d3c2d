#include "mcure/sampler.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace mcure {

void SamplerConfig::validate() const {
  if (n_chains < 1) throw std::invalid_argument("n_chains must be >= 1");
  if (n_iterations < 1) throw std::invalid_argument("n_iterations must be >= 1");
  if (burn_in < 0 || burn_in >= n_iterations)
    throw std::invalid_argument("burn_in must lie in [0, n_iterations)");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
  if (retained_per_chain() < 1)
    throw std::invalid_argument("retained draw count per chain must be >= 1");
}

std::vector<std::string> parameter_names(const SurvivalDataset& data, const ModelSpec& spec) {
  std::vector<std::string> names;
  const int nb = data.p1() + 1;
  const int nbeta = data.p2();
  const int J = spec.partition.intervals();
  for (int k = 0; k < nb; ++k) names.push_back("b" + std::to_string(k));
  for (int k = 0; k < nbeta; ++k) names.push_back("beta" + std::to_string(k + 1));
  for (int k = 0; k < J; ++k) names.push_back("lambda" + std::to_string(k + 1));
  if (spec.family == ModelFamily::CureFrailty) names.push_back("theta");
  if (spec.prior == PriorFamily::LassoHierarchy) {
    for (int k = 0; k < nb; ++k) names.push_back("tau_sq" + std::to_string(k));
    for (int k = 0; k < nbeta; ++k) names.push_back("tau_star_sq" + std::to_string(k + 1));
    names.push_back("sigma_sq");
    names.push_back("sigma_star_sq");
    names.push_back("eta_sq");
    names.push_back("eta_star_sq");
  }
  return names;
}

InitialState default_initial_state(const SurvivalDataset& data, const ModelSpec& spec,
                                   int chain_index, std::uint64_t master_seed) {
  const int nb = data.p1() + 1;
  const int nbeta = data.p2();
  const int J = spec.partition.intervals();

  // crude per-interval hazard: events / time at risk
  VectorXd lambda(J);
  double total_events = 0.0, total_exposure = 0.0;
  std::vector<double> ev(J, 0.0), ex(J, 0.0);
  for (int i = 0; i < data.n(); ++i) {
    const double t = data.times[i];
    for (int j = 0; j < J; ++j)
      ex[j] += std::max(0.0, std::min(t, spec.partition.cuts[j + 1]) - spec.partition.cuts[j]);
    if (data.status[i] == 1) ev[spec.partition.interval_of(t)] += 1.0;
    total_events += data.status[i];
    total_exposure += t;
  }
  const double global_rate =
      total_events > 0.0 ? total_events / total_exposure : 1.0 / data.times.mean();
  for (int j = 0; j < J; ++j)
    lambda[j] = (ev[j] > 0.0 && ex[j] > 0.0) ? ev[j] / ex[j] : global_rate;

  InitialState s;
  s.params.b = VectorXd::Zero(nb);
  s.params.beta = VectorXd::Zero(nbeta);
  s.params.lambda = lambda;
  if (spec.family == ModelFamily::CureFrailty) s.params.theta = 1.0;
  s.shrink = ShrinkageState::ones(nb, nbeta);

  // per-chain overdispersion: +-0.5 additive on coefficients, +-20%
  // multiplicative on the positive scale parameters
  Rng jitter = Rng::stream(master_seed, 1000003 + static_cast<std::uint64_t>(chain_index));
  for (int k = 0; k < nb; ++k) s.params.b[k] += jitter.uniform() - 0.5;
  for (int k = 0; k < nbeta; ++k) s.params.beta[k] += jitter.uniform() - 0.5;
  for (int j = 0; j < J; ++j) s.params.lambda[j] *= 1.0 + 0.4 * (jitter.uniform() - 0.5);
  if (s.params.theta) *s.params.theta *= 1.0 + 0.4 * (jitter.uniform() - 0.5);
  return s;
}

ChainDraws run_chain(const SurvivalDataset& data, const ModelSpec& spec,
                     const SamplerConfig& config, int chain_index, const TraceHook& trace) {
  config.validate();
  Rng rng = Rng::stream(config.master_seed, static_cast<std::uint64_t>(chain_index));
  const InitialState init = config.init
                                ? *config.init
                                : default_initial_state(data, spec, chain_index,
                                                        config.master_seed);

  const double init_lp = log_joint_posterior(data, init.params, init.shrink, spec.hyper,
                                             spec.partition, spec.family, spec.prior);
  if (!std::isfinite(init_lp))
    throw std::runtime_error("non-finite log-posterior at the initial state");

  ConditionalEvaluator eval(data, spec, init.params, init.shrink);

  const int nb = data.p1() + 1;
  const int nbeta = data.p2();
  const int J = spec.partition.intervals();
  const bool frailty = spec.family == ModelFamily::CureFrailty;
  const bool lasso = spec.prior == PriorFamily::LassoHierarchy;
  const int n_coord = nb + nbeta + J + (frailty ? 1 : 0);
  const int n_cols = static_cast<int>(parameter_names(data, spec).size());
  const int retained = config.retained_per_chain();

  ChainDraws out;
  out.params.resize(retained, n_cols);
  out.loglik.resize(retained);
  out.per_obs_loglik.resize(retained, data.n());
  out.accept_count = VectorXd::Zero(n_coord);
  out.proposal_count = VectorXd::Zero(n_coord);

  int row = 0;
  for (int g = 1; g <= config.n_iterations; ++g) {
    // Step 1: incidence coefficients
    for (int k = 0; k < nb; ++k) {
      const double cur = eval.params().b[k];
      const MhStep s = mh_update_normal_rw(
          cur, eval.log_cond_b(k, cur), [&](double v) { return eval.log_cond_b(k, v); }, rng);
      out.proposal_count[k] += 1.0;
      if (s.accepted) {
        out.accept_count[k] += 1.0;
        eval.set_b(k, s.value);
      }
      if (trace) trace({g, UpdateKind::B, k, s.value, s.accepted});
    }
    // Step 2: latency coefficients
    for (int k = 0; k < nbeta; ++k) {
      const double cur = eval.params().beta[k];
      const MhStep s = mh_update_normal_rw(
          cur, eval.log_cond_beta(k, cur), [&](double v) { return eval.log_cond_beta(k, v); },
          rng);
      out.proposal_count[nb + k] += 1.0;
      if (s.accepted) {
        out.accept_count[nb + k] += 1.0;
        eval.set_beta(k, s.value);
      }
      if (trace) trace({g, UpdateKind::Beta, k, s.value, s.accepted});
    }
    // Step 3: interval hazards
    for (int k = 0; k < J; ++k) {
      const double cur = eval.params().lambda[k];
      const MhStep s = mh_update_gamma_rw(
          cur, eval.log_cond_lambda(k, cur), [&](double v) { return eval.log_cond_lambda(k, v); },
          rng);
      out.proposal_count[nb + nbeta + k] += 1.0;
      if (s.accepted) {
        out.accept_count[nb + nbeta + k] += 1.0;
        eval.set_lambda(k, s.value);
      }
      if (trace) trace({g, UpdateKind::Lambda, k, s.value, s.accepted});
    }
    // frailty precision
    if (frailty) {
      const double cur = *eval.params().theta;
      const MhStep s = mh_update_gamma_rw(
          cur, eval.log_cond_theta(cur), [&](double v) { return eval.log_cond_theta(v); }, rng);
      out.proposal_count[n_coord - 1] += 1.0;
      if (s.accepted) {
        out.accept_count[n_coord - 1] += 1.0;
        eval.set_theta(s.value);
      }
      if (trace) trace({g, UpdateKind::Theta, -1, s.value, s.accepted});
    }
    // Steps 4-9: conjugate shrinkage block
    if (lasso) {
      ShrinkageState sh = eval.shrinkage();
      const VectorXd& b = eval.params().b;
      const VectorXd& beta = eval.params().beta;
      for (int k = 0; k < nb; ++k) {
        const double prec = sample_inv_tau_sq(b[k], sh.sigma_sq, sh.eta_sq, rng);
        sh.tau_sq[k] = 1.0 / prec;
        if (trace) trace({g, UpdateKind::InvTauSq, k, prec, true});
      }
      for (int k = 0; k < nbeta; ++k) {
        const double prec = sample_inv_tau_sq(beta[k], sh.sigma_star_sq, sh.eta_star_sq, rng);
        sh.tau_star_sq[k] = 1.0 / prec;
        if (trace) trace({g, UpdateKind::InvTauStarSq, k, prec, true});
      }
      if ((b.array() != 0.0).any()) sh.sigma_sq = sample_sigma_sq(b, sh.tau_sq, rng);
      if (trace) trace({g, UpdateKind::SigmaSq, -1, sh.sigma_sq, true});
      if ((beta.array() != 0.0).any())
        sh.sigma_star_sq = sample_sigma_sq(beta, sh.tau_star_sq, rng);
      if (trace) trace({g, UpdateKind::SigmaStarSq, -1, sh.sigma_star_sq, true});
      sh.eta_sq = sample_eta_sq(sh.tau_sq, spec.hyper.r1, spec.hyper.delta1, rng);
      if (trace) trace({g, UpdateKind::EtaSq, -1, sh.eta_sq, true});
      sh.eta_star_sq = sample_eta_sq(sh.tau_star_sq, spec.hyper.r2, spec.hyper.delta2, rng);
      if (trace) trace({g, UpdateKind::EtaStarSq, -1, sh.eta_star_sq, true});
      eval.set_shrinkage(std::move(sh));
    }

    if (g > config.burn_in && (g - config.burn_in) % config.thin == 0) {
      const CureParameters& p = eval.params();
      const ShrinkageState& sh = eval.shrinkage();
      int c = 0;
      for (int k = 0; k < nb; ++k) out.params(row, c++) = p.b[k];
      for (int k = 0; k < nbeta; ++k) out.params(row, c++) = p.beta[k];
      for (int k = 0; k < J; ++k) out.params(row, c++) = p.lambda[k];
      if (frailty) out.params(row, c++) = *p.theta;
      if (lasso) {
        for (int k = 0; k < nb; ++k) out.params(row, c++) = sh.tau_sq[k];
        for (int k = 0; k < nbeta; ++k) out.params(row, c++) = sh.tau_star_sq[k];
        out.params(row, c++) = sh.sigma_sq;
        out.params(row, c++) = sh.sigma_star_sq;
        out.params(row, c++) = sh.eta_sq;
        out.params(row, c++) = sh.eta_star_sq;
      }
      const LogLikelihood ll = log_likelihood(data, p, spec.partition, spec.family);
      out.loglik[row] = ll.total;
      out.per_obs_loglik.row(row) = ll.per_obs.transpose();
      out.clamped += ll.clamped;
      ++row;
    }
    if (g % 1000 == 0) eval.refresh();
  }
  return out;
}

PosteriorDraws run_fit(const SurvivalDataset& data, const ModelSpec& spec,
                       const SamplerConfig& config, int n_threads) {
  config.validate();
  data.validate();

  PosteriorDraws out;
  out.names = parameter_names(data, spec);
  out.n_b = data.p1() + 1;
  out.n_beta = data.p2();
  out.n_lambda = spec.partition.intervals();
  out.has_theta = spec.family == ModelFamily::CureFrailty;
  out.family = spec.family;
  out.prior = spec.prior;
  out.chains.resize(config.n_chains);

  if (n_threads <= 0)
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, config.n_chains));

  if (n_threads == 1) {
    for (int c = 0; c < config.n_chains; ++c)
      out.chains[c] = run_chain(data, spec, config, c);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
      for (;;) {
        const int c = next.fetch_add(1);
        if (c >= config.n_chains) return;
        try {
          out.chains[c] = run_chain(data, spec, config, c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }
  return out;
}

// ---------------------------------------------------------------------------
// PosteriorDraws accessors

int PosteriorDraws::retained_per_chain() const {
  return chains.empty() ? 0 : static_cast<int>(chains.front().params.rows());
}

int PosteriorDraws::total_draws() const {
  int total = 0;
  for (const auto& c : chains) total += static_cast<int>(c.params.rows());
  return total;
}

VectorXd PosteriorDraws::pooled(int column) const {
  VectorXd v(total_draws());
  int at = 0;
  for (const auto& c : chains) {
    v.segment(at, c.params.rows()) = c.params.col(column);
    at += static_cast<int>(c.params.rows());
  }
  return v;
}

std::vector<VectorXd> PosteriorDraws::per_chain(int column) const {
  std::vector<VectorXd> v;
  v.reserve(chains.size());
  for (const auto& c : chains) v.push_back(c.params.col(column));
  return v;
}

MatrixXd PosteriorDraws::pooled_params() const {
  MatrixXd m(total_draws(), n_params());
  int at = 0;
  for (const auto& c : chains) {
    m.middleRows(at, c.params.rows()) = c.params;
    at += static_cast<int>(c.params.rows());
  }
  return m;
}

MatrixXd PosteriorDraws::pooled_per_obs_loglik() const {
  if (chains.empty()) return {};
  MatrixXd m(total_draws(), chains.front().per_obs_loglik.cols());
  int at = 0;
  for (const auto& c : chains) {
    m.middleRows(at, c.per_obs_loglik.rows()) = c.per_obs_loglik;
    at += static_cast<int>(c.per_obs_loglik.rows());
  }
  return m;
}

VectorXd PosteriorDraws::pooled_loglik() const {
  VectorXd v(total_draws());
  int at = 0;
  for (const auto& c : chains) {
    v.segment(at, c.loglik.size()) = c.loglik;
    at += static_cast<int>(c.loglik.size());
  }
  return v;
}

CureParameters PosteriorDraws::mean_parameters() const {
  const MatrixXd pooled = pooled_params();
  const VectorXd mean = pooled.colwise().mean();
  CureParameters p;
  p.b = mean.segment(0, n_b);
  p.beta = mean.segment(n_b, n_beta);
  p.lambda = mean.segment(n_b + n_beta, n_lambda);
  if (has_theta) p.theta = mean[n_b + n_beta + n_lambda];
  return p;
}

std::vector<std::string> PosteriorDraws::mh_coordinate_names() const {
  return {names.begin(), names.begin() + n_likelihood_params()};
}

VectorXd PosteriorDraws::acceptance_rates() const {
  if (chains.empty()) return {};
  VectorXd acc = VectorXd::Zero(chains.front().accept_count.size());
  VectorXd prop = VectorXd::Zero(acc.size());
  for (const auto& c : chains) {
    acc += c.accept_count;
    prop += c.proposal_count;
  }
  return (acc.array() / prop.array().max(1.0)).matrix();
}

}  // namespace mcure

#include "mcure/datagen.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mcure {

void ScenarioSpec::validate() const {
  if (n < 1) throw std::invalid_argument("scenario n must be >= 1");
  if (b_true.size() != p1() + 1)
    throw std::invalid_argument("b_true length must be p1 + 1");
  if (beta_true.size() != p2())
    throw std::invalid_argument("beta_true length must match the x generators");
  for (const auto& g : z_gens)
    if (g.kind == CovariateGen::Kind::Bernoulli && !(g.p > 0.0 && g.p < 1.0))
      throw std::invalid_argument("Bernoulli probability must lie in (0,1)");
  for (const auto& g : x_gens)
    if (g.kind == CovariateGen::Kind::Bernoulli && !(g.p > 0.0 && g.p < 1.0))
      throw std::invalid_argument("Bernoulli probability must lie in (0,1)");
  if (!weibull_latency) {
    if (lambda_true.size() < 1 || lambda_true.size() != cut_points.size())
      throw std::invalid_argument("lambda_true and cut_points lengths disagree");
    if (cut_points[0] != 0.0) throw std::invalid_argument("first cut point must be 0");
    for (int j = 0; j + 1 < cut_points.size(); ++j)
      if (!(cut_points[j] < cut_points[j + 1]))
        throw std::invalid_argument("cut points must be strictly increasing");
    if ((lambda_true.array() <= 0.0).any())
      throw std::invalid_argument("lambda_true must be positive");
  } else {
    if (!(weibull_shape > 0.0) || !(weibull_scale > 0.0))
      throw std::invalid_argument("weibull parameters must be positive");
  }
  if (!(censoring_rate > 0.0)) throw std::invalid_argument("censoring rate must be positive");
}

ScenarioSpec scenario(int id, int n) {
  ScenarioSpec s;
  s.id = id;
  s.n = n;
  const auto bern = CovariateGen::bernoulli;
  const auto norm = CovariateGen::std_normal;
  switch (id) {
    case 1:
      s.b_true = (VectorXd(3) << 0.4, 0.5, 0.1).finished();
      s.beta_true = (VectorXd(2) << 1.0, 0.2).finished();
      s.z_gens = {bern(0.5), norm()};
      s.shared_covariates = true;
      s.lambda_true = VectorXd::Ones(1);
      s.cut_points = VectorXd::Zero(1);
      s.censoring_rate = 0.064512;
      break;
    case 2:
      s.b_true = (VectorXd(4) << 0.25, -1.0, 1.5, 0.5).finished();
      s.beta_true = (VectorXd(3) << -1.0, 0.5, 2.0).finished();
      s.z_gens = {bern(0.6), norm(), norm()};
      s.x_gens = {bern(0.5), norm(), norm()};
      s.lambda_true = (VectorXd(3) << 0.2, 0.15, 0.3).finished();
      s.cut_points = (VectorXd(3) << 0.0, 1.0, 2.0).finished();
      s.censoring_rate = 0.093612;
      break;
    case 3:
      s.b_true = (VectorXd(4) << -0.5, 1.0, 1.5, -2.0).finished();
      s.beta_true = (VectorXd(4) << 1.5, -0.30, 0.7, 1.0).finished();
      s.z_gens = {bern(0.3), bern(0.6), norm()};
      s.x_gens = {bern(0.5), bern(0.25), bern(0.65), norm()};
      s.lambda_true = (VectorXd(4) << 0.15, 0.30, 0.50, 1.0).finished();
      s.cut_points = (VectorXd(4) << 0.0, 1.0, 2.0, 3.0).finished();
      s.censoring_rate = 0.079578;
      break;
    case 4:
      s.b_true = (VectorXd(5) << 0.3, -1.0, 0.5, 1.0, 0.25).finished();
      s.beta_true = (VectorXd(4) << -0.5, 1.5, 0.6, -0.8).finished();
      s.z_gens = {bern(0.8), bern(0.3), bern(0.4), norm()};
      s.shared_covariates = true;
      s.weibull_latency = true;
      s.weibull_shape = 1.5;
      s.weibull_scale = 1.0;
      s.censoring_rate = 0.51246;
      break;
    default:
      throw std::invalid_argument("unknown scenario id " + std::to_string(id));
  }
  s.validate();
  return s;
}

double pe_sample_time(double u, double rate_multiplier, const VectorXd& cut_points,
                      const VectorXd& lambda) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("u must lie in (0,1)");
  if (!(rate_multiplier > 0.0)) throw std::invalid_argument("rate multiplier must be positive");
  const double target = -std::log(u) / rate_multiplier;
  const auto J = static_cast<int>(lambda.size());
  double cum = 0.0;
  for (int j = 0; j < J; ++j) {
    if (j + 1 == J) return cut_points[j] + (target - cum) / lambda[j];
    const double seg = lambda[j] * (cut_points[j + 1] - cut_points[j]);
    if (target <= cum + seg) return cut_points[j] + (target - cum) / lambda[j];
    cum += seg;
  }
  throw std::logic_error("unreachable");
}

GeneratedData generate_dataset(const ScenarioSpec& spec, Rng& rng) {
  spec.validate();
  const int n = spec.n;
  const int p1 = spec.p1();
  const int p2 = spec.p2();

  GeneratedData out;
  out.data.times.resize(n);
  out.data.status.resize(n);
  out.data.z.resize(n, p1 + 1);
  out.data.x.resize(n, p2);
  out.cured.assign(n, 0);

  auto draw = [&](const CovariateGen& g) {
    return g.kind == CovariateGen::Kind::Bernoulli ? (rng.bernoulli(g.p) ? 1.0 : 0.0)
                                                   : rng.normal();
  };

  int events = 0;
  for (int i = 0; i < n; ++i) {
    out.data.z(i, 0) = 1.0;
    for (int j = 0; j < p1; ++j) out.data.z(i, j + 1) = draw(spec.z_gens[j]);
    if (spec.shared_covariates) {
      out.data.x.row(i) = out.data.z.row(i).tail(p1);
    } else {
      for (int j = 0; j < p2; ++j) out.data.x(i, j) = draw(spec.x_gens[j]);
    }

    const double pi = incidence_probability(out.data.z.row(i).transpose(), spec.b_true);
    const bool susceptible = rng.bernoulli(pi);
    double event_time = std::numeric_limits<double>::infinity();
    if (susceptible) {
      const double mult = std::exp(out.data.x.row(i).dot(spec.beta_true));
      const double u = rng.uniform();
      if (spec.weibull_latency)
        event_time = spec.weibull_scale * std::pow(-std::log(u) / mult, 1.0 / spec.weibull_shape);
      else
        event_time = pe_sample_time(u, mult, spec.cut_points, spec.lambda_true);
    } else {
      out.cured[i] = 1;
    }
    const double censor_time = rng.exponential(spec.censoring_rate);
    if (event_time <= censor_time) {
      out.data.times[i] = event_time;
      out.data.status[i] = 1;
      ++events;
    } else {
      out.data.times[i] = censor_time;
      out.data.status[i] = 0;
    }
  }
  if (events == 0) throw std::runtime_error("censoring mechanism produced zero observed events");
  out.data.validate();
  return out;
}

double calibrate_censoring_rate(ScenarioSpec spec, double target_censoring, int n_mc,
                                std::uint64_t seed) {
  if (!(target_censoring > 0.0 && target_censoring < 1.0))
    throw std::invalid_argument("target censoring must lie in (0,1)");
  spec.n = n_mc;
  auto censor_frac = [&](double rate) {
    ScenarioSpec s = spec;
    s.censoring_rate = rate;
    Rng rng(seed);  // common random numbers: the fraction is monotone in rate
    const GeneratedData g = generate_dataset(s, rng);
    return 1.0 - g.data.status.cast<double>().mean();
  };
  double lo = 1e-8, hi = 1.0;
  while (censor_frac(hi) < target_censoring && hi < 1e6) hi *= 4.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (censor_frac(mid) < target_censoring)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double mae(double true_value, const VectorXd& estimates) {
  if (estimates.size() < 1) throw std::invalid_argument("mae needs at least one estimate");
  return (estimates.array() - true_value).abs().mean();
}

StudyResult run_study(const ScenarioSpec& sc, const StudyConfig& cfg) {
  sc.validate();
  if (sc.weibull_latency && cfg.fit_intervals < 1)
    throw std::invalid_argument("weibull scenarios need an explicit fit interval count");

  const int nb = static_cast<int>(sc.b_true.size());
  const int nbeta = static_cast<int>(sc.beta_true.size());
  const int fit_J = cfg.fit_intervals > 0 ? cfg.fit_intervals
                                          : static_cast<int>(sc.lambda_true.size());
  const bool frailty = cfg.family == ModelFamily::CureFrailty;
  const bool lambda_has_truth = !sc.weibull_latency && cfg.fit_intervals == 0;

  std::vector<std::string> names;
  for (int k = 0; k < nb; ++k) names.push_back("b" + std::to_string(k));
  for (int k = 0; k < nbeta; ++k) names.push_back("beta" + std::to_string(k + 1));
  for (int k = 0; k < fit_J; ++k) names.push_back("lambda" + std::to_string(k + 1));
  if (frailty) names.push_back("theta");
  names.push_back("pi_bar");
  const auto q_count = static_cast<int>(names.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  StudyResult res;
  res.rep_means = MatrixXd::Constant(cfg.replicates, q_count, nan);
  res.rep_sds = MatrixXd::Constant(cfg.replicates, q_count, nan);
  res.rep_psrf = MatrixXd::Constant(cfg.replicates, q_count, nan);
  VectorXd pi_truth = VectorXd::Constant(cfg.replicates, nan);
  std::vector<std::uint8_t> failed(cfg.replicates, 0);
  VectorXd rep_dic = VectorXd::Constant(cfg.replicates, nan);
  VectorXd rep_lpml = VectorXd::Constant(cfg.replicates, nan);
  VectorXd rep_looic = VectorXd::Constant(cfg.replicates, nan);
  VectorXd rep_aic = VectorXd::Constant(cfg.replicates, nan);
  VectorXd rep_bic = VectorXd::Constant(cfg.replicates, nan);

  auto one_replicate = [&](int r) {
    Rng data_rng = Rng::stream(cfg.seed, 2 * static_cast<std::uint64_t>(r));
    const GeneratedData gen = generate_dataset(sc, data_rng);

    TimePartition part;
    if (lambda_has_truth) {
      VectorXd cuts(sc.cut_points.size() + 1);
      cuts.head(sc.cut_points.size()) = sc.cut_points;
      cuts[sc.cut_points.size()] = 1.001 * gen.data.times.maxCoeff();
      part = TimePartition::from_cuts(cuts);
    } else {
      part = TimePartition::from_data(gen.data, fit_J);
    }

    ModelSpec mspec{cfg.family, cfg.prior, part, Hyperparameters{}};
    SamplerConfig scfg = cfg.sampler;
    scfg.master_seed = derive_seed(cfg.seed, 1000000 + static_cast<std::uint64_t>(r));
    const PosteriorDraws draws =
        cfg.fitter ? cfg.fitter(gen.data, mspec, scfg)
                   : run_fit(gen.data, mspec, scfg, 1);

    const auto summaries = summarize(draws);
    const int lik = draws.n_likelihood_params();
    for (int q = 0; q < lik; ++q) {
      res.rep_means(r, q) = summaries[q].mean;
      res.rep_sds(r, q) = summaries[q].sd;
      res.rep_psrf(r, q) = summaries[q].psrf;
    }
    const ParameterSummary pi = uncured_rate_summary(draws, gen.data);
    res.rep_means(r, q_count - 1) = pi.mean;
    res.rep_sds(r, q_count - 1) = pi.sd;
    res.rep_psrf(r, q_count - 1) = pi.psrf;

    double acc = 0.0;
    for (int i = 0; i < gen.data.n(); ++i)
      acc += incidence_probability(gen.data.z.row(i).transpose(), sc.b_true);
    pi_truth[r] = acc / gen.data.n();

    if (cfg.with_criteria) {
      const CriteriaReport cr = compute_criteria(draws, gen.data, mspec);
      rep_dic[r] = cr.dic;
      rep_lpml[r] = cr.lpml;
      rep_looic[r] = cr.looic;
      rep_aic[r] = cr.aic;
      rep_bic[r] = cr.bic;
    }
  };

  int n_threads = cfg.n_threads > 0 ? cfg.n_threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, cfg.replicates));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= cfg.replicates) return;
      try {
        one_replicate(r);
      } catch (...) {
        failed[r] = 1;
      }
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (int r = 0; r < cfg.replicates; ++r) {
    if (failed[r])
      res.failed_replicates.push_back(r);
    else
      ++res.replicates_done;
  }

  auto column_ok = [&](int q, auto&& fn) {
    for (int r = 0; r < cfg.replicates; ++r)
      if (!failed[r]) fn(r, q);
  };
  for (int q = 0; q < q_count; ++q) {
    ParameterStudyRow row;
    row.name = names[q];
    if (q < nb)
      row.truth = sc.b_true[q];
    else if (q < nb + nbeta)
      row.truth = sc.beta_true[q - nb];
    else if (q < nb + nbeta + fit_J)
      row.truth = lambda_has_truth ? sc.lambda_true[q - nb - nbeta] : nan;
    else if (frailty && q == nb + nbeta + fit_J)
      row.truth = nan;
    else
      row.truth = nan;  // pi_bar handled below

    double mae_acc = 0.0, mean_acc = 0.0, sd_acc = 0.0;
    int ok = 0, psrf_ok = 0, psrf_n = 0;
    const bool is_pi = q == q_count - 1;
    column_ok(q, [&](int r, int qq) {
      const double truth = is_pi ? pi_truth[r] : row.truth;
      if (std::isfinite(truth)) mae_acc += std::abs(truth - res.rep_means(r, qq));
      mean_acc += res.rep_means(r, qq);
      sd_acc += res.rep_sds(r, qq);
      if (std::isfinite(res.rep_psrf(r, qq))) {
        ++psrf_n;
        if (res.rep_psrf(r, qq) < 1.1) ++psrf_ok;
      }
      ++ok;
    });
    if (is_pi) {
      double t = 0.0;
      int tn = 0;
      for (int r = 0; r < cfg.replicates; ++r)
        if (!failed[r] && std::isfinite(pi_truth[r])) {
          t += pi_truth[r];
          ++tn;
        }
      row.truth = tn > 0 ? t / tn : nan;
    }
    row.mae = ok > 0 && std::isfinite(is_pi ? 0.0 : row.truth) ? mae_acc / ok : nan;
    row.avg_posterior_mean = ok > 0 ? mean_acc / ok : nan;
    row.avg_posterior_sd = ok > 0 ? sd_acc / ok : nan;
    row.frac_psrf_below_1_1 = psrf_n > 0 ? static_cast<double>(psrf_ok) / psrf_n : nan;
    res.rows.push_back(row);
  }

  if (cfg.with_criteria && res.replicates_done > 0) {
    auto avg = [&](const VectorXd& v) {
      double s = 0.0;
      int c = 0;
      for (int r = 0; r < cfg.replicates; ++r)
        if (!failed[r] && std::isfinite(v[r])) {
          s += v[r];
          ++c;
        }
      return c > 0 ? s / c : nan;
    };
    res.avg_dic = avg(rep_dic);
    res.avg_lpml = avg(rep_lpml);
    res.avg_looic = avg(rep_looic);
    res.avg_aic = avg(rep_aic);
    res.avg_bic = avg(rep_bic);
  }
  return res;
}

}  // namespace mcure

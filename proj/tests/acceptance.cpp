// Acceptance suite: one pass/fail line per criterion. Exit status is the
// number of failed criteria. Data-dependent checks are skipped (not failed)
// when the corresponding files are absent.
//
//   mcure_acceptance [--criterion N] [--threads T]
//
// The E1690 check looks for $MCURE_E1690 or data/e1690.csv; the overnight
// colon sweep additionally requires MCURE_RUN_OVERNIGHT=1 and $MCURE_COLON.

#include "mcure/datagen.hpp"
#include "mcure/io.hpp"

#include "helpers.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <random>
#include <vector>

using namespace mcure;

namespace {

int g_threads = 0;

struct Outcome {
  bool ran = false;
  bool passed = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  o.ran = true;
  if (!ok) {
    o.passed = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

// --------------------------------------------------------------- criterion 1
Outcome criterion1() {
  Outcome o;
  o.ran = true;
  std::mt19937_64 eng(111);
  std::normal_distribution<double> norm(0.0, 0.7);
  std::uniform_real_distribution<double> unif(0.5, 1.5);

  for (const auto family : {ModelFamily::Cure, ModelFamily::CureFrailty}) {
    int pairs_b = 0, pairs_beta = 0, pairs_lambda = 0, pairs_theta = 0;
    double worst = 0.0;
    int state = 0;
    while (pairs_b < 100 || pairs_beta < 100 || pairs_lambda < 100 ||
           (family == ModelFamily::CureFrailty && pairs_theta < 100)) {
      auto r = testutil::random_dataset(1000 + state++, 50);
      CureParameters base = r.params;
      if (family == ModelFamily::Cure) base.theta.reset();
      ModelSpec spec{family, PriorFamily::LassoHierarchy, r.partition, r.hyper};
      ConditionalEvaluator eval(r.data, spec, base, r.shrink);
      auto joint = [&](const CureParameters& p) {
        return log_joint_posterior(r.data, p, r.shrink, r.hyper, r.partition, family,
                                   PriorFamily::LassoHierarchy);
      };
      for (int it = 0; it < 5; ++it) {
        {
          const int k = it % base.b.size();
          const double v1 = base.b[k] + norm(eng), v2 = base.b[k] + norm(eng);
          CureParameters p1 = base, p2 = base;
          p1.b[k] = v1;
          p2.b[k] = v2;
          worst = std::max(worst, std::abs((eval.log_cond_b(k, v1) - eval.log_cond_b(k, v2)) -
                                           (joint(p1) - joint(p2))));
          ++pairs_b;
        }
        {
          const int k = it % base.beta.size();
          const double v1 = base.beta[k] + norm(eng), v2 = base.beta[k] + norm(eng);
          CureParameters p1 = base, p2 = base;
          p1.beta[k] = v1;
          p2.beta[k] = v2;
          worst = std::max(worst,
                           std::abs((eval.log_cond_beta(k, v1) - eval.log_cond_beta(k, v2)) -
                                    (joint(p1) - joint(p2))));
          ++pairs_beta;
        }
        {
          const int k = it % base.lambda.size();
          const double v1 = base.lambda[k] * unif(eng), v2 = base.lambda[k] * unif(eng);
          CureParameters p1 = base, p2 = base;
          p1.lambda[k] = v1;
          p2.lambda[k] = v2;
          worst = std::max(worst,
                           std::abs((eval.log_cond_lambda(k, v1) - eval.log_cond_lambda(k, v2)) -
                                    (joint(p1) - joint(p2))));
          ++pairs_lambda;
        }
        if (family == ModelFamily::CureFrailty) {
          const double v1 = *base.theta * unif(eng), v2 = *base.theta * unif(eng);
          CureParameters p1 = base, p2 = base;
          p1.theta = v1;
          p2.theta = v2;
          worst = std::max(worst, std::abs((eval.log_cond_theta(v1) - eval.log_cond_theta(v2)) -
                                           (joint(p1) - joint(p2))));
          ++pairs_theta;
        }
      }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s worst |dcond - djoint| = %.2e",
                  to_string(family).c_str(), worst);
    const bool ok = worst < 1e-8;
    note(o, ok, buf);
    if (ok) o.detail += (o.detail.empty() ? "" : "; ") + std::string(buf);
  }
  return o;
}

// --------------------------------------------------------------- criterion 2
Outcome criterion2() {
  Outcome o;
  o.ran = true;
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    auto r = testutil::random_dataset(2000 + rep, 50);
    const double plain = log_likelihood(r.data, r.params, r.partition, ModelFamily::Cure).total;
    CureParameters q = r.params;
    q.theta = 1e6;
    const double frail =
        log_likelihood(r.data, q, r.partition, ModelFamily::CureFrailty).total;
    worst = std::max(worst, std::abs(frail - plain));
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "worst |loglik gap| = %.2e over 50 datasets", worst);
  note(o, worst < 1e-3, buf);
  if (o.passed) o.detail = buf;
  return o;
}

// ---------------------------------------------------------- criteria 3 and 4
struct StudyOutcome {
  Outcome c3;
  Outcome c4;
};

StudyOutcome criterion3_and_4() {
  StudyOutcome out;
  const auto sc = scenario(1, 1000);
  StudyConfig cfg;
  cfg.replicates = 100;
  cfg.sampler.n_chains = 3;
  cfg.sampler.n_iterations = 15000;
  cfg.sampler.burn_in = 2500;
  cfg.sampler.thin = 25;
  cfg.seed = 20250810;
  cfg.n_threads = g_threads;
  const auto res = run_study(sc, cfg);

  const char* names[7] = {"b0", "b1", "b2", "beta1", "beta2", "lambda1", "pi_bar"};
  const double table_mean[7] = {0.40900, 0.46298, 0.09167, 0.93954,
                                0.18595, 1.01291, 0.65181};
  const double table_sd[7] = {0.10171, 0.14127, 0.06743, 0.10417,
                              0.03935, 0.10571, 0.01694};

  out.c3.ran = true;
  for (int q = 0; q < 7; ++q) {
    const auto& row = res.rows[q];
    const double mean_tol = q == 6 ? 0.02 : 0.05;
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%s mean %.5f (table %.5f, tol %.2f)", names[q],
                  row.avg_posterior_mean, table_mean[q], mean_tol);
    note(out.c3, std::abs(row.avg_posterior_mean - table_mean[q]) <= mean_tol, buf);
    const double rel = row.avg_posterior_sd / table_sd[q] - 1.0;
    std::snprintf(buf, sizeof(buf), "%s sd %.5f (table %.5f, rel %+.0f%%)", names[q],
                  row.avg_posterior_sd, table_sd[q], 100.0 * rel);
    note(out.c3, std::abs(rel) <= 0.30, buf);
  }
  {
    char buf[120];
    std::snprintf(buf, sizeof(buf), "replicates done %d/100, failed %zu",
                  res.replicates_done, res.failed_replicates.size());
    note(out.c3, res.replicates_done == 100, buf);
  }

  // criterion 4 reuses the same fits
  out.c4.ran = true;
  int all_ok = 0, counted = 0;
  for (int r = 0; r < cfg.replicates; ++r) {
    if (!std::isfinite(res.rep_psrf(r, 0))) continue;
    ++counted;
    bool ok = true;
    for (int q = 0; q < res.rep_psrf.cols(); ++q)
      if (!(res.rep_psrf(r, q) < 1.1)) ok = false;
    all_ok += ok;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "PSRF < 1.1 for every parameter in %d/%d replicates (need >= 95%%)", all_ok,
                counted);
  note(out.c4, counted > 0 && all_ok >= 0.95 * counted, buf);
  if (out.c4.passed) out.c4.detail = buf;
  return out;
}

// --------------------------------------------------------------- criterion 5
struct BatchMoments {
  double mean, mean_se, var, var_se;
};

BatchMoments batch_moments(const std::vector<double>& x) {
  const int batches = 100;
  const int len = static_cast<int>(x.size()) / batches;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());

  std::vector<double> bm(batches, 0.0), bv(batches, 0.0);
  for (int b = 0; b < batches; ++b) {
    for (int i = 0; i < len; ++i) {
      const double v = x[b * len + i];
      bm[b] += v;
      bv[b] += (v - mean) * (v - mean);
    }
    bm[b] /= len;
    bv[b] /= len;
  }
  auto se = [&](const std::vector<double>& b) {
    double m = 0.0;
    for (double v : b) m += v;
    m /= batches;
    double s = 0.0;
    for (double v : b) s += (v - m) * (v - m);
    return std::sqrt(s / (batches - 1.0) / batches);
  };
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  return {mean, se(bm), var, se(bv)};
}

Outcome criterion5() {
  Outcome o;
  o.ran = true;
  const int n = 100000;

  {  // normal random walk against N(0,1)
    Rng rng(501);
    auto target = [](double v) { return -0.5 * v * v; };
    std::vector<double> x(n);
    double cur = 0.0, lt = target(cur);
    for (int i = 0; i < n; ++i) {
      const MhStep s = mh_update_normal_rw(cur, lt, target, rng);
      cur = s.value;
      lt = s.log_target;
      x[i] = cur;
    }
    const auto m = batch_moments(x);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "normal kernel: mean %.4f (3se %.4f), var %.4f (3se %.4f)",
                  m.mean, 3 * m.mean_se, m.var, 3 * m.var_se);
    note(o, std::abs(m.mean) < 3 * m.mean_se && std::abs(m.var - 1.0) < 3 * m.var_se, buf);
    if (o.passed) o.detail = buf;
  }
  {  // gamma kernel against Gamma(3,2): mean 1.5, variance 0.75
    Rng rng(502);
    auto target = [](double v) {
      return v > 0.0 ? 2.0 * std::log(v) - 2.0 * v
                     : -std::numeric_limits<double>::infinity();
    };
    std::vector<double> x(n);
    double cur = 1.0, lt = target(cur);
    for (int i = 0; i < n; ++i) {
      const MhStep s = mh_update_gamma_rw(cur, lt, target, rng);
      cur = s.value;
      lt = s.log_target;
      x[i] = cur;
    }
    const auto m = batch_moments(x);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "gamma kernel: mean %.4f (3se %.4f), var %.4f (3se %.4f)",
                  m.mean, 3 * m.mean_se, m.var, 3 * m.var_se);
    note(o, std::abs(m.mean - 1.5) < 3 * m.mean_se && std::abs(m.var - 0.75) < 3 * m.var_se,
         buf);
  }
  return o;
}

// --------------------------------------------------------------- criterion 6
Outcome criterion6() {
  Outcome o;
  o.ran = true;
  const int n = 10000;
  {
    Rng rng(601);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.inverse_gaussian(2.0, 4.0);
    const double p = testutil::ks_pvalue(
        testutil::ks_statistic(v,
                               [](double x) { return testutil::inv_gaussian_cdf(x, 2.0, 4.0); }),
        n);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "inverse-gaussian KS p = %.3f", p);
    note(o, p > 0.01, buf);
    if (o.passed) o.detail = buf;
  }
  {
    Rng rng(602);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.inv_gamma(3.0, 2.0);
    const double p = testutil::ks_pvalue(
        testutil::ks_statistic(v, [](double x) { return testutil::inv_gamma_cdf(x, 3.0, 2.0); }),
        n);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "inverse-gamma KS p = %.3f", p);
    note(o, p > 0.01, buf);
  }
  {
    Rng rng(603);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.gamma(5.0, 2.0);
    const double p = testutil::ks_pvalue(
        testutil::ks_statistic(v, [](double x) { return testutil::gamma_cdf(x, 5.0, 2.0); }), n);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "gamma KS p = %.3f", p);
    note(o, p > 0.01, buf);
  }
  return o;
}

// --------------------------------------------------------------- criterion 7
Outcome criterion7() {
  Outcome o;
  o.ran = true;

  auto r = testutil::random_dataset(700, 40);
  const int nb = static_cast<int>(r.params.b.size());
  const int nbeta = static_cast<int>(r.params.beta.size());
  const int nl = static_cast<int>(r.params.lambda.size());
  PosteriorDraws draws;
  draws.n_b = nb;
  draws.n_beta = nbeta;
  draws.n_lambda = nl;
  for (int q = 0; q < nb + nbeta + nl; ++q) draws.names.push_back("p");
  ChainDraws c;
  const int B = 150;
  c.params.resize(B, nb + nbeta + nl);
  c.loglik.resize(B);
  c.per_obs_loglik.resize(B, r.data.n());
  const auto ll = log_likelihood(r.data, r.params, r.partition, ModelFamily::Cure);
  for (int i = 0; i < B; ++i) {
    int at = 0;
    for (int j = 0; j < nb; ++j) c.params(i, at++) = r.params.b[j];
    for (int j = 0; j < nbeta; ++j) c.params(i, at++) = r.params.beta[j];
    for (int j = 0; j < nl; ++j) c.params(i, at++) = r.params.lambda[j];
    c.loglik[i] = ll.total;
    c.per_obs_loglik.row(i) = ll.per_obs.transpose();
  }
  draws.chains = {c};
  const ModelSpec spec{ModelFamily::Cure, PriorFamily::LassoHierarchy, r.partition, r.hyper};

  const auto [dic_v, p_d] = dic(draws, r.data, spec);
  note(o, std::abs(p_d) < 1e-10, "p_D not 0 for identical draws");
  note(o, std::abs(dic_v - (-2.0 * ll.total)) < 1e-10, "DIC != Dev at identical draws");

  const auto [lpml_v, cpo] = lpml(draws.pooled_per_obs_loglik());
  double worst_cpo = 0.0;
  for (int i = 0; i < r.data.n(); ++i)
    worst_cpo = std::max(worst_cpo, std::abs(std::log(cpo[i]) - ll.per_obs[i]));
  note(o, worst_cpo < 1e-12, "CPO_i != L_i for identical draws");
  (void)lpml_v;

  const auto loo = psis_loo(draws.pooled_per_obs_loglik());
  note(o, std::abs(loo.first - (-2.0 * ll.total)) < 1e-10, "LOOIC != -2 sum l_i");

  // DIC identity on spread-out draws
  std::mt19937_64 eng(701);
  std::normal_distribution<double> norm(0.0, 0.1);
  ChainDraws c2 = c;
  for (int i = 0; i < B; ++i) {
    CureParameters p = r.params;
    for (int j = 0; j < nb; ++j) p.b[j] += norm(eng);
    int at = 0;
    for (int j = 0; j < nb; ++j) c2.params(i, at++) = p.b[j];
    const auto l2 = log_likelihood(r.data, p, r.partition, ModelFamily::Cure);
    c2.loglik[i] = l2.total;
    c2.per_obs_loglik.row(i) = l2.per_obs.transpose();
  }
  PosteriorDraws draws2 = draws;
  draws2.chains = {c2};
  const auto [dic2, pd2] = dic(draws2, r.data, spec);
  (void)pd2;
  const double dev_bar = -2.0 * draws2.pooled_loglik().mean();
  const double dev_at_mean =
      -2.0 *
      log_likelihood(r.data, draws2.mean_parameters(), r.partition, ModelFamily::Cure).total;
  note(o, std::abs(dic2 - (2.0 * dev_bar - dev_at_mean)) < 1e-10,
       "DIC identity 2*DevBar - Dev(nuBar) violated");
  if (o.passed) o.detail = "degeneracies exact, DIC identity holds to 1e-10";
  return o;
}

// --------------------------------------------------------------- criterion 8
Outcome criterion8() {
  Outcome o;
  o.ran = true;

  {  // KM three-point example against the hand-computed product-limit curve
    VectorXd t(3);
    t << 1.0, 2.0, 3.0;
    VectorXi d(3);
    d << 1, 0, 1;
    const auto curve = kaplan_meier(t, d);
    const bool ok = curve.at(1.0) == 2.0 / 3.0 && curve.at(2.0) == 2.0 / 3.0 &&
                    curve.at(2.999) == 2.0 / 3.0 && curve.at(3.0) == 0.0;
    note(o, ok, "KM three-point curve mismatch");
    if (ok) o.detail = "KM exact";
  }
  {  // PE inverse-transform round trip
    Rng rng(801);
    const VectorXd cuts = (VectorXd(3) << 0.0, 0.8, 2.1).finished();
    const VectorXd lambda = (VectorXd(3) << 0.3, 0.6, 0.25).finished();
    auto cumhaz = [&](double t) {
      double h = 0.0;
      for (int j = 0; j < lambda.size(); ++j) {
        const double hi =
            j + 1 < cuts.size() ? cuts[j + 1] : std::numeric_limits<double>::infinity();
        h += lambda[j] * std::max(0.0, std::min(t, hi) - cuts[j]);
      }
      return h;
    };
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double u = rng.uniform();
      const double mult = std::exp(0.6 * rng.normal());
      const double t = pe_sample_time(u, mult, cuts, lambda);
      worst = std::max(worst, std::abs(cumhaz(t) * mult + std::log(u)));
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "PE round-trip worst error %.2e", worst);
    note(o, worst < 1e-10, buf);
    o.detail += std::string("; ") + buf;
  }
  {  // HPD shortest window by exhaustive scan
    std::mt19937_64 eng(802);
    std::lognormal_distribution<double> logn(0.0, 0.7);
    bool ok = true;
    for (int n : {25, 60, 137, 200}) {
      for (double level : {0.5, 0.9, 0.95}) {
        VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = logn(eng);
        const auto [lo, hi] = hpd_interval(v, level);
        std::vector<double> s(v.data(), v.data() + n);
        std::sort(s.begin(), s.end());
        const int offset = std::min(n - 1, static_cast<int>(std::floor(level * n)));
        double best = std::numeric_limits<double>::infinity();
        int best_i = 0;
        for (int i = 0; i + offset < n; ++i)
          if (s[i + offset] - s[i] < best) {
            best = s[i + offset] - s[i];
            best_i = i;
          }
        if (lo != s[best_i] || hi != s[best_i + offset]) ok = false;
      }
    }
    note(o, ok, "HPD shortest-window mismatch with exhaustive scan");
  }
  return o;
}

// --------------------------------------------------------------- criterion 9
Outcome criterion9() {
  Outcome o;
  const char* env = std::getenv("MCURE_E1690");
  std::string path = env ? env : "data/e1690.csv";
  if (!std::filesystem::exists(path)) {
    o.ran = false;
    o.detail = "E1690 data not found (set MCURE_E1690 or place data/e1690.csv)";
    return o;
  }
  o.ran = true;

  ColumnMapping mapping;
  mapping.time = "time";
  mapping.status = "status";
  mapping.x_cols = {"trt", "age", "sex"};
  mapping.z_cols = {"trt", "age", "sex"};
  const auto data = ingest_csv(path, mapping, nullptr);

  SamplerConfig cfg;
  cfg.n_chains = 5;
  cfg.n_iterations = 60000;
  cfg.burn_in = 10000;
  cfg.thin = 50;
  cfg.master_seed = 900;

  double best_dic = 1e300, best_lpml = -1e300;
  int best_dic_j = 0, best_lpml_j = 0;
  double dic_j1 = 0.0, lpml_j1 = 0.0;
  for (int J = 1; J <= 4; ++J) {
    const auto partition = TimePartition::from_data(data, J);
    ModelSpec spec{ModelFamily::Cure, PriorFamily::LassoHierarchy, partition,
                   Hyperparameters{}};
    const auto draws = run_fit(data, spec, cfg, g_threads);
    const auto cr = compute_criteria(draws, data, spec);
    if (J == 1) {
      dic_j1 = cr.dic;
      lpml_j1 = cr.lpml;
    }
    if (cr.dic < best_dic) {
      best_dic = cr.dic;
      best_dic_j = J;
    }
    if (cr.lpml > best_lpml) {
      best_lpml = cr.lpml;
      best_lpml_j = J;
    }
  }
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "J=1: DIC %.3f (target 1037.50 +-3), LPML %.3f (target -518.79 +-2); best "
                "DIC at J=%d, best LPML at J=%d",
                dic_j1, lpml_j1, best_dic_j, best_lpml_j);
  note(o, std::abs(dic_j1 - 1037.50) <= 3.0 && std::abs(lpml_j1 - (-518.79)) <= 2.0 &&
              best_dic_j == 1 && best_lpml_j == 1,
       buf);
  if (o.passed) o.detail = buf;

  const char* colon = std::getenv("MCURE_COLON");
  const char* overnight = std::getenv("MCURE_RUN_OVERNIGHT");
  if (colon && overnight && std::string(overnight) == "1" &&
      std::filesystem::exists(colon)) {
    ColumnMapping cm;
    cm.time = "time";
    cm.status = "status";
    cm.x_cols = {"surg", "node4", "age60", "sex"};
    cm.z_cols = {"rx", "extent", "surg", "node4"};
    cm.time_divisor = 365.25;
    cm.min_time = 30.0;
    const auto cdata = ingest_csv(colon, cm, nullptr);
    const auto partition = TimePartition::from_data(cdata, 7);
    ModelSpec spec{ModelFamily::CureFrailty, PriorFamily::LassoHierarchy, partition,
                   Hyperparameters{}};
    const auto draws = run_fit(cdata, spec, cfg, g_threads);
    const auto cr = compute_criteria(draws, cdata, spec);
    std::snprintf(buf, sizeof(buf), "colon J=7 frailty DIC %.3f (target 2321.25 +-5)", cr.dic);
    note(o, std::abs(cr.dic - 2321.25) <= 5.0, buf);
  } else {
    o.detail += "; colon sweep skipped (set MCURE_COLON and MCURE_RUN_OVERNIGHT=1)";
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) only = std::atoi(argv[++i]);
    if (!std::strcmp(argv[i], "--threads") && i + 1 < argc) g_threads = std::atoi(argv[++i]);
  }

  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o) {
    const char* tag = !o.ran ? "SKIP" : o.passed ? "PASS" : "FAIL";
    std::printf("[%s] criterion %d: %s%s%s\n", tag, id, name, o.detail.empty() ? "" : " -- ",
                o.detail.c_str());
    std::fflush(stdout);
    if (o.ran && !o.passed) ++failures;
  };

  auto timed = [&](int id, const char* name, auto&& fn) {
    if (only != 0 && only != id) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = fn();
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[64];
    std::snprintf(buf, sizeof(buf), " [%.1fs]", dt);
    o.detail += buf;
    report(id, name, o);
  };

  timed(1, "conditional/joint consistency", criterion1);
  timed(2, "frailty limit", criterion2);
  if (only == 0 || only == 3 || only == 4) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto both = criterion3_and_4();
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[64];
    std::snprintf(buf, sizeof(buf), " [%.1fs]", dt);
    Outcome c3 = both.c3;
    c3.detail += buf;
    if (only == 0 || only == 3) report(3, "scenario 1 desk-scale replication", c3);
    if (only == 0 || only == 4) report(4, "convergence (PSRF)", both.c4);
  }
  timed(5, "known-target kernel checks", criterion5);
  timed(6, "conjugate-sampler KS tests", criterion6);
  timed(7, "criteria identities", criterion7);
  timed(8, "oracle equivalences", criterion8);
  timed(9, "E1690 / colon replication (data-dependent)", criterion9);

  std::printf("%s: %d criterion failure(s)\n",
              failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", failures);
  return failures;
}

#include "mcure/prior.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mcure;

namespace {

double joint_at(const testutil::RandomDataset& r, const CureParameters& p, ModelFamily family,
                PriorFamily prior) {
  return log_joint_posterior(r.data, p, r.shrink, r.hyper, r.partition, family, prior);
}

}  // namespace

TEST_CASE("conditional differences match joint differences") {
  std::mt19937_64 eng(2024);
  std::normal_distribution<double> norm(0.0, 0.7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (const auto family : {ModelFamily::Cure, ModelFamily::CureFrailty}) {
    for (const auto prior : {PriorFamily::LassoHierarchy, PriorFamily::Normal}) {
      for (int rep = 0; rep < 5; ++rep) {
        auto r = testutil::random_dataset(900 + rep, 40);
        CureParameters base = r.params;
        if (family == ModelFamily::Cure) base.theta.reset();
        ModelSpec spec{family, prior, r.partition, r.hyper};
        ConditionalEvaluator eval(r.data, spec, base, r.shrink);

        auto check_pair = [&](auto&& cond, auto&& with_value, double v1, double v2) {
          const double d_cond = cond(v1) - cond(v2);
          CureParameters p1 = with_value(v1);
          CureParameters p2 = with_value(v2);
          const double d_joint = joint_at(r, p1, family, prior) - joint_at(r, p2, family, prior);
          CHECK(std::abs(d_cond - d_joint) < 1e-8);
        };

        for (int it = 0; it < 5; ++it) {
          for (int k = 0; k < base.b.size(); ++k)
            check_pair([&](double v) { return eval.log_cond_b(k, v); },
                       [&](double v) {
                         CureParameters p = base;
                         p.b[k] = v;
                         return p;
                       },
                       base.b[k] + norm(eng), base.b[k] + norm(eng));
          for (int k = 0; k < base.beta.size(); ++k)
            check_pair([&](double v) { return eval.log_cond_beta(k, v); },
                       [&](double v) {
                         CureParameters p = base;
                         p.beta[k] = v;
                         return p;
                       },
                       base.beta[k] + norm(eng), base.beta[k] + norm(eng));
          for (int k = 0; k < base.lambda.size(); ++k)
            check_pair([&](double v) { return eval.log_cond_lambda(k, v); },
                       [&](double v) {
                         CureParameters p = base;
                         p.lambda[k] = v;
                         return p;
                       },
                       base.lambda[k] * (0.5 + unif(eng)), base.lambda[k] * (0.5 + unif(eng)));
          if (family == ModelFamily::CureFrailty)
            check_pair([&](double v) { return eval.log_cond_theta(v); },
                       [&](double v) {
                         CureParameters p = base;
                         p.theta = v;
                         return p;
                       },
                       *base.theta * (0.5 + unif(eng)), *base.theta * (0.5 + unif(eng)));
        }
      }
    }
  }
}

TEST_CASE("support violations are rejectable, not fatal") {
  auto r = testutil::random_dataset(77, 30);
  ModelSpec spec{ModelFamily::CureFrailty, PriorFamily::LassoHierarchy, r.partition, r.hyper};
  ConditionalEvaluator eval(r.data, spec, r.params, r.shrink);

  CHECK(eval.log_cond_lambda(0, 0.0) == -std::numeric_limits<double>::infinity());
  CHECK(eval.log_cond_lambda(0, -1.0) == -std::numeric_limits<double>::infinity());
  CHECK(eval.log_cond_theta(0.0) == -std::numeric_limits<double>::infinity());
  CHECK(eval.log_cond_theta(-2.0) == -std::numeric_limits<double>::infinity());
  CHECK(std::isfinite(eval.log_cond_theta(1e8)));

  CureParameters bad = r.params;
  bad.lambda[0] = -0.1;
  CHECK(log_joint_posterior(r.data, bad, r.shrink, r.hyper, r.partition,
                            ModelFamily::CureFrailty, PriorFamily::LassoHierarchy) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("joint difference expands to likelihood plus normal kernel") {
  auto r = testutil::random_dataset(78, 35);
  CureParameters p1 = r.params;
  CureParameters p2 = r.params;
  p1.b[1] = 0.8;
  p2.b[1] = -0.4;
  const double d_joint = joint_at(r, p1, ModelFamily::CureFrailty, PriorFamily::LassoHierarchy) -
                         joint_at(r, p2, ModelFamily::CureFrailty, PriorFamily::LassoHierarchy);
  const double d_lik =
      log_likelihood(r.data, p1, r.partition, ModelFamily::CureFrailty).total -
      log_likelihood(r.data, p2, r.partition, ModelFamily::CureFrailty).total;
  const double d_quad = -(p1.b[1] * p1.b[1] - p2.b[1] * p2.b[1]) /
                        (2.0 * r.shrink.sigma_sq * r.shrink.tau_sq[1]);
  CHECK(d_joint == doctest::Approx(d_lik + d_quad).epsilon(1e-10));
}

TEST_CASE("lambda conditional with no exposure reduces to the gamma kernel") {
  // nothing at risk beyond the first interval: the likelihood drops out of
  // the second hazard's conditional
  SurvivalDataset d;
  const int n = 12;
  d.times.resize(n);
  d.status.resize(n);
  d.x.resize(n, 1);
  d.z.resize(n, 2);
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> unif(0.05, 0.9);
  for (int i = 0; i < n; ++i) {
    d.times[i] = unif(eng);
    d.status[i] = i % 2;
    d.z(i, 0) = 1.0;
    d.z(i, 1) = unif(eng);
    d.x(i, 0) = unif(eng);
  }
  const auto part = TimePartition::from_cuts((VectorXd(3) << 0.0, 1.0, 2.0).finished());
  CureParameters params;
  params.b = VectorXd::Zero(2);
  params.beta = VectorXd::Zero(1);
  params.lambda = (VectorXd(2) << 0.5, 0.7).finished();
  Hyperparameters hyper;
  ModelSpec spec{ModelFamily::Cure, PriorFamily::LassoHierarchy, part, hyper};
  ConditionalEvaluator eval(d, spec, params, ShrinkageState::ones(2, 1));

  const double v1 = 0.3, v2 = 1.9;
  const double d_cond = eval.log_cond_lambda(1, v1) - eval.log_cond_lambda(1, v2);
  const double d_kernel = (hyper.a - 1.0) * (std::log(v1) - std::log(v2)) -
                          hyper.b_rate * (v1 - v2);
  CHECK(d_cond == doctest::Approx(d_kernel).epsilon(1e-12));
}

TEST_CASE("inverse-gaussian precision draw for tau") {
  SUBCASE("monte carlo mean, mu = eta sigma / |coef| = 2") {
    Rng rng(301);
    const int n = 100000;
    double sum = 0.0;
    // eta^2 = 4, sigma^2 = 4, coef = 2 -> mu = 2, shape = 4, variance mu^3/shape = 2
    for (int i = 0; i < n; ++i) sum += sample_inv_tau_sq(2.0, 4.0, 4.0, rng);
    CHECK(std::abs(sum / n - 2.0) < 3.0 * std::sqrt(2.0 / n));
  }
  SUBCASE("large coefficient concentrates the precision near zero") {
    Rng rng(302);
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) sum += sample_inv_tau_sq(2000.0, 1.0, 1.0, rng);
    CHECK(sum / 10000 < 0.01);
  }
  SUBCASE("strictly positive, zero coefficient falls back to the huge-mean tail") {
    Rng rng(303);
    for (int i = 0; i < 2000; ++i) CHECK(sample_inv_tau_sq(0.0, 1.0, 1.0, rng) > 0.0);
  }
  SUBCASE("KS against the analytic inverse-gaussian") {
    Rng rng(304);
    std::vector<double> v(10000);
    for (auto& x : v) x = sample_inv_tau_sq(1.5, 2.0, 3.0, rng);
    const double mu = std::sqrt(3.0 * 2.0) / 1.5;
    const double d = testutil::ks_statistic(
        v, [&](double x) { return testutil::inv_gaussian_cdf(x, mu, 3.0); });
    CHECK(testutil::ks_pvalue(d, v.size()) > 0.01);
  }
}

TEST_CASE("conjugate sigma^2 and eta^2 draws") {
  VectorXd coefs = (VectorXd(4) << 0.5, -1.2, 0.8, 0.1).finished();
  VectorXd tau = (VectorXd(4) << 0.7, 1.1, 0.4, 2.0).finished();

  SUBCASE("sigma^2 ~ Inv-Gamma(m/2, sum c^2/(2 tau^2)), via KS") {
    Rng rng(305);
    const double rate = 0.5 * (coefs.array().square() / tau.array()).sum();
    std::vector<double> v(10000);
    for (auto& x : v) x = sample_sigma_sq(coefs, tau, rng);
    const double d = testutil::ks_statistic(
        v, [&](double x) { return testutil::inv_gamma_cdf(x, 2.0, rate); });
    CHECK(testutil::ks_pvalue(d, v.size()) > 0.01);
  }
  SUBCASE("eta^2 ~ Gamma(m + r, delta + sum tau^2/2), via KS") {
    Rng rng(306);
    std::vector<double> v(10000);
    for (auto& x : v) x = sample_eta_sq(tau, 1.0, 0.1, rng);
    const double rate = 0.1 + 0.5 * tau.sum();
    const double d = testutil::ks_statistic(
        v, [&](double x) { return testutil::gamma_cdf(x, 5.0, rate); });
    CHECK(testutil::ks_pvalue(d, v.size()) > 0.01);
  }
  SUBCASE("zero tau vector reduces eta^2 to Gamma(p + r, delta)") {
    Rng rng(307);
    VectorXd tau0 = VectorXd::Zero(3);
    std::vector<double> v(10000);
    for (auto& x : v) x = sample_eta_sq(tau0, 1.0, 0.1, rng);
    const double d = testutil::ks_statistic(
        v, [&](double x) { return testutil::gamma_cdf(x, 4.0, 0.1); });
    CHECK(testutil::ks_pvalue(d, v.size()) > 0.01);
  }
  SUBCASE("all-zero coefficients are rejected") {
    Rng rng(308);
    CHECK_THROWS(sample_sigma_sq(VectorXd::Zero(3), VectorXd::Ones(3), rng));
  }
}

TEST_CASE("tau precision conditional matches the joint with the change of variables") {
  // density of u = 1/tau_k^2 implied by the joint: pi_u(u) = pi(tau^2 = 1/u) / u^2
  auto r = testutil::random_dataset(79, 30);
  const int k = 1;
  auto joint_tau = [&](double tau_sq_k) {
    ShrinkageState s = r.shrink;
    s.tau_sq[k] = tau_sq_k;
    return log_joint_posterior(r.data, r.params, s, r.hyper, r.partition,
                               ModelFamily::CureFrailty, PriorFamily::LassoHierarchy);
  };
  const double eta_sq = r.shrink.eta_sq;
  const double mu = std::sqrt(eta_sq * r.shrink.sigma_sq) / std::abs(r.params.b[k]);
  auto log_ig = [&](double u) {
    return -eta_sq * (u - mu) * (u - mu) / (2.0 * mu * mu * u) - 1.5 * std::log(u);
  };
  std::mt19937_64 eng(6);
  std::uniform_real_distribution<double> unif(0.2, 3.0);
  for (int it = 0; it < 50; ++it) {
    const double u1 = unif(eng), u2 = unif(eng);
    const double lhs = log_ig(u1) - log_ig(u2);
    const double rhs = (joint_tau(1.0 / u1) - 2.0 * std::log(u1)) -
                       (joint_tau(1.0 / u2) - 2.0 * std::log(u2));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

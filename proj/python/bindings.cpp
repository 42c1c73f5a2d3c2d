// Python bindings for the main operations: dataset construction, model
// fitting, survival curves, diagnostics and model-comparison criteria.

#include "mcure/datagen.hpp"
#include "mcure/diagnostics.hpp"
#include "mcure/io.hpp"
#include "mcure/survcurves.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mcure;

namespace {

SurvivalDataset make_dataset(const VectorXd& times, const VectorXi& status, const MatrixXd& x,
                             const MatrixXd& z_covariates) {
  SurvivalDataset d;
  d.times = times;
  d.status = status;
  d.x = x;
  d.z.resize(times.size(), z_covariates.cols() + 1);
  d.z.col(0).setOnes();
  d.z.rightCols(z_covariates.cols()) = z_covariates;
  d.validate();
  return d;
}

ModelSpec make_spec(const SurvivalDataset& data, const std::string& model,
                    const std::string& prior, int intervals,
                    const std::optional<VectorXd>& cuts, const Hyperparameters& hyper) {
  ModelSpec spec;
  spec.family = model_family_from_string(model);
  spec.prior = prior_family_from_string(prior);
  spec.partition = cuts ? TimePartition::from_cuts(*cuts)
                        : TimePartition::from_data(data, intervals);
  spec.hyper = hyper;
  return spec;
}

py::dict summary_dict(const ParameterSummary& s) {
  py::dict d;
  d["name"] = s.name;
  d["mean"] = s.mean;
  d["sd"] = s.sd;
  d["hpd_low"] = s.hpd_low;
  d["hpd_high"] = s.hpd_high;
  d["psrf"] = s.psrf;
  return d;
}

py::dict fit_impl(const VectorXd& times, const VectorXi& status, const MatrixXd& x,
                  const MatrixXd& z_covariates, const std::string& model,
                  const std::string& prior, int intervals, std::optional<VectorXd> cuts,
                  int chains, int iterations, int burnin, int thin, std::uint64_t seed,
                  int threads) {
  const auto data = make_dataset(times, status, x, z_covariates);
  const auto spec = make_spec(data, model, prior, intervals, cuts, Hyperparameters{});

  SamplerConfig cfg;
  cfg.n_chains = chains;
  cfg.n_iterations = iterations;
  cfg.burn_in = burnin;
  cfg.thin = thin;
  cfg.master_seed = seed;

  const auto draws = run_fit(data, spec, cfg, threads);
  const auto report = build_fit_report(draws, data, spec);

  py::dict out;
  out["names"] = draws.names;
  out["draws"] = draws.pooled_params();
  out["loglik"] = draws.pooled_loglik();
  out["chains"] = chains;
  out["retained_per_chain"] = draws.retained_per_chain();
  py::list params;
  for (const auto& p : report.parameters) params.append(summary_dict(p));
  out["parameters"] = params;
  out["uncured_rate"] = summary_dict(report.uncured_rate);
  out["cure_rate"] = summary_dict(report.cure_rate);
  py::dict crit;
  crit["dic"] = report.criteria.dic;
  crit["p_d"] = report.criteria.p_d;
  crit["lpml"] = report.criteria.lpml;
  crit["looic"] = report.criteria.looic;
  crit["aic"] = report.criteria.aic;
  crit["bic"] = report.criteria.bic;
  out["criteria"] = crit;
  out["acceptance_rates"] = report.acceptance_rates;
  out["cut_points"] = spec.partition.cuts;
  return out;
}

py::dict generate_impl(int scenario_id, int n, std::uint64_t seed) {
  const auto sc = scenario(scenario_id, n);
  Rng rng(seed);
  const auto g = generate_dataset(sc, rng);
  py::dict out;
  out["times"] = g.data.times;
  out["status"] = g.data.status;
  out["x"] = g.data.x;
  out["z"] = g.data.z;
  out["cured"] = g.cured;
  out["b_true"] = sc.b_true;
  out["beta_true"] = sc.beta_true;
  return out;
}

}  // namespace

PYBIND11_MODULE(_mcure, m) {
  m.doc() = "Bayesian semiparametric mixture cure models";

  m.def("log_likelihood",
        [](const VectorXd& times, const VectorXi& status, const MatrixXd& x,
           const MatrixXd& z_covariates, const VectorXd& b, const VectorXd& beta,
           const VectorXd& lambda, const VectorXd& cuts, std::optional<double> theta) {
          const auto data = make_dataset(times, status, x, z_covariates);
          CureParameters p{b, beta, lambda, theta};
          const auto ll = log_likelihood(data, p, TimePartition::from_cuts(cuts),
                                         theta ? ModelFamily::CureFrailty : ModelFamily::Cure);
          return py::make_tuple(ll.total, ll.per_obs);
        },
        py::arg("times"), py::arg("status"), py::arg("x"), py::arg("z_covariates"),
        py::arg("b"), py::arg("beta"), py::arg("lambda"), py::arg("cut_points"),
        py::arg("theta") = std::nullopt,
        "Observed-data log-likelihood and per-observation contributions.");

  m.def("incidence_probability", &incidence_probability, py::arg("z_row"), py::arg("b"));

  m.def("population_survival",
        [](double t, const VectorXd& x_row, const VectorXd& z_row, const VectorXd& b,
           const VectorXd& beta, const VectorXd& lambda, const VectorXd& cuts,
           std::optional<double> theta) {
          CureParameters p{b, beta, lambda, theta};
          return population_survival(t, x_row, z_row, p, TimePartition::from_cuts(cuts));
        },
        py::arg("t"), py::arg("x_row"), py::arg("z_row"), py::arg("b"), py::arg("beta"),
        py::arg("lambda"), py::arg("cut_points"), py::arg("theta") = std::nullopt);

  m.def("fit", &fit_impl, py::arg("times"), py::arg("status"), py::arg("x"),
        py::arg("z_covariates"), py::arg("model") = "smcm", py::arg("prior") = "lasso",
        py::arg("intervals") = 1, py::arg("cut_points") = std::nullopt, py::arg("chains") = 3,
        py::arg("iterations") = 15000, py::arg("burnin") = 2500, py::arg("thin") = 25,
        py::arg("seed") = 1, py::arg("threads") = 0,
        "Metropolis-within-Gibbs fit; returns pooled draws, summaries and criteria.");

  m.def("kaplan_meier",
        [](const VectorXd& times, const VectorXi& status) {
          const auto c = kaplan_meier(times, status);
          return py::make_tuple(c.times, c.values);
        },
        py::arg("times"), py::arg("status"),
        "Product-limit estimate: (jump_times, survival_values).");

  m.def("hpd_interval",
        [](const VectorXd& draws, double level) {
          const auto [lo, hi] = hpd_interval(draws, level);
          return py::make_tuple(lo, hi);
        },
        py::arg("draws"), py::arg("level") = 0.95);

  m.def("psrf", [](const std::vector<VectorXd>& chains) { return psrf(chains); },
        py::arg("chains"));

  m.def("lpml",
        [](const MatrixXd& per_obs_loglik) {
          const auto [v, cpo] = lpml(per_obs_loglik);
          return py::make_tuple(v, cpo);
        },
        py::arg("per_obs_loglik"));

  m.def("psis_loo",
        [](const MatrixXd& per_obs_loglik) {
          const auto [v, k] = psis_loo(per_obs_loglik);
          return py::make_tuple(v, k);
        },
        py::arg("per_obs_loglik"));

  m.def("generate_scenario", &generate_impl, py::arg("scenario"), py::arg("n"),
        py::arg("seed") = 1, "Draw one simulation-study dataset.");

  m.def("pe_sample_time", &pe_sample_time, py::arg("u"), py::arg("rate_multiplier"),
        py::arg("cut_points"), py::arg("lambda"));
}

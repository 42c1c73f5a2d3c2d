// mcure command line: fit / compare / simulate / km subcommands over the
// mixture cure model library. Every run writes a manifest with the resolved
// options and seed so results can be replayed bit-exactly.

#include "mcure/io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct DataOptions {
  std::string path;
  std::string time_col = "time";
  std::string status_col = "status";
  std::vector<std::string> x_cols;
  std::vector<std::string> z_cols;
  std::string strata_col;
  double time_divisor = 1.0;
  double min_time = 0.0;
};

void add_data_options(CLI::App* cmd, DataOptions& d, bool covariates) {
  cmd->add_option("--data", d.path, "input CSV file")->required();
  cmd->add_option("--time-col", d.time_col, "time column name");
  cmd->add_option("--status-col", d.status_col, "status column name (1 event, 0 censored)");
  if (covariates) {
    cmd->add_option("--x-cols", d.x_cols, "latency covariate columns")->delimiter(',');
    cmd->add_option("--z-cols", d.z_cols,
                    "incidence covariate columns (default: same as --x-cols)")
        ->delimiter(',');
  }
  cmd->add_option("--strata-col", d.strata_col, "column defining curve strata");
  cmd->add_option("--time-divisor", d.time_divisor,
                  "divide times by this factor (e.g. 365.25 for days to years)");
  cmd->add_option("--min-time", d.min_time,
                  "drop rows with raw time below this threshold (native units)");
}

struct SamplerOptions {
  int chains = 5;
  int iterations = 60000;
  int burnin = 10000;
  int thin = 50;
  std::uint64_t seed = 1;
  int threads = 0;
};

void add_sampler_options(CLI::App* cmd, SamplerOptions& s) {
  cmd->add_option("--chains", s.chains, "number of MCMC chains");
  cmd->add_option("--iterations", s.iterations, "iterations per chain");
  cmd->add_option("--burnin", s.burnin, "burn-in iterations");
  cmd->add_option("--thin", s.thin, "thinning stride");
  cmd->add_option("--seed", s.seed, "master seed");
  cmd->add_option("--threads", s.threads, "worker threads (0 = all cores)");
}

struct ModelOptions {
  std::string model = "smcm";
  std::string prior = "lasso";
  mcure::Hyperparameters hyper;
};

void add_model_options(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("--model", m.model, "model family: smcm or smcfm")
      ->check(CLI::IsMember({"smcm", "smcfm"}));
  cmd->add_option("--prior", m.prior, "prior family: lasso or normal")
      ->check(CLI::IsMember({"lasso", "normal"}));
  cmd->add_option("--hyper-a", m.hyper.a, "gamma shape for each lambda_j");
  cmd->add_option("--hyper-b-rate", m.hyper.b_rate, "gamma rate for each lambda_j");
  cmd->add_option("--hyper-r1", m.hyper.r1, "gamma shape for eta^2");
  cmd->add_option("--hyper-delta1", m.hyper.delta1, "gamma rate for eta^2");
  cmd->add_option("--hyper-r2", m.hyper.r2, "gamma shape for eta*^2");
  cmd->add_option("--hyper-delta2", m.hyper.delta2, "gamma rate for eta*^2");
  cmd->add_option("--hyper-c", m.hyper.c, "gamma shape for theta");
  cmd->add_option("--hyper-d", m.hyper.d, "gamma rate for theta");
  cmd->add_option("--sigma-b-sq", m.hyper.sigma_b_sq, "normal prior variance for b");
  cmd->add_option("--sigma-beta-sq", m.hyper.sigma_beta_sq, "normal prior variance for beta");
}

mcure::SamplerConfig to_sampler_config(const SamplerOptions& s) {
  mcure::SamplerConfig cfg;
  cfg.n_chains = s.chains;
  cfg.n_iterations = s.iterations;
  cfg.burn_in = s.burnin;
  cfg.thin = s.thin;
  cfg.master_seed = s.seed;
  cfg.validate();
  return cfg;
}

json data_options_json(const DataOptions& d) {
  return {{"data", d.path},
          {"time_col", d.time_col},
          {"status_col", d.status_col},
          {"x_cols", d.x_cols},
          {"z_cols", d.z_cols},
          {"strata_col", d.strata_col},
          {"time_divisor", d.time_divisor},
          {"min_time", d.min_time}};
}

json sampler_options_json(const SamplerOptions& s) {
  return {{"chains", s.chains}, {"iterations", s.iterations}, {"burnin", s.burnin},
          {"thin", s.thin},     {"seed", s.seed},             {"threads", s.threads}};
}

json model_options_json(const ModelOptions& m, const mcure::TimePartition* partition) {
  json j{{"model", m.model},
         {"prior", m.prior},
         {"hyper",
          {{"a", m.hyper.a},
           {"b_rate", m.hyper.b_rate},
           {"r1", m.hyper.r1},
           {"delta1", m.hyper.delta1},
           {"r2", m.hyper.r2},
           {"delta2", m.hyper.delta2},
           {"c", m.hyper.c},
           {"d", m.hyper.d},
           {"sigma_b_sq", m.hyper.sigma_b_sq},
           {"sigma_beta_sq", m.hyper.sigma_beta_sq}}}};
  if (partition) {
    std::vector<double> cuts(partition->cuts.data(), partition->cuts.data() + partition->cuts.size());
    j["cut_points"] = cuts;
  }
  return j;
}

void write_manifest(const fs::path& dir, const std::string& command, const json& options) {
  json manifest{{"tool", "mcure"}, {"command", command}, {"options", options}};
  mcure::atomic_write_text((dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

mcure::SurvivalDataset load_dataset(const DataOptions& d, std::vector<std::string>* strata,
                                    mcure::IngestReport* report) {
  mcure::ColumnMapping mapping;
  mapping.time = d.time_col;
  mapping.status = d.status_col;
  mapping.x_cols = d.x_cols;
  mapping.z_cols = d.z_cols.empty() ? d.x_cols : d.z_cols;
  mapping.strata_col = d.strata_col;
  mapping.time_divisor = d.time_divisor;
  mapping.min_time = d.min_time;
  mcure::IngestReport local;
  mcure::IngestReport& rep = report ? *report : local;
  auto data = mcure::ingest_csv(d.path, mapping, &rep);
  if (strata) *strata = rep.strata;
  if (!rep.dropped_missing.empty())
    std::cerr << "note: dropped " << rep.dropped_missing.size()
              << " rows with missing values\n";
  if (!rep.dropped_below_min.empty())
    std::cerr << "note: dropped " << rep.dropped_below_min.size()
              << " rows below the time threshold\n";
  return data;
}

mcure::TimePartition build_partition(const mcure::SurvivalDataset& data, int intervals,
                                     const std::vector<double>& cuts) {
  if (!cuts.empty()) {
    Eigen::Map<const Eigen::VectorXd> v(cuts.data(), cuts.size());
    auto p = mcure::TimePartition::from_cuts(v);
    if (p.upper() < data.times.maxCoeff())
      throw std::invalid_argument("explicit cut points do not cover the largest time");
    return p;
  }
  return mcure::TimePartition::from_data(data, intervals);
}

std::vector<mcure::CurveRow> make_curves(const mcure::PosteriorDraws& draws,
                                         const mcure::SurvivalDataset& data,
                                         const mcure::TimePartition& partition,
                                         const std::vector<std::string>& strata) {
  const int points = 101;
  const double top = data.times.maxCoeff();
  Eigen::VectorXd grid(points);
  for (int g = 0; g < points; ++g) grid[g] = top * g / (points - 1);

  std::vector<mcure::CurveRow> rows;
  auto emit = [&](const std::string& label, const std::vector<int>& subset,
                  const mcure::StepCurve& km) {
    const auto band = mcure::posterior_survival_curve(draws, data, partition, grid, 0.95, subset);
    for (int g = 0; g < points; ++g)
      rows.push_back({label, grid[g], km.at(grid[g]), band.mean[g], band.lower[g],
                      band.upper[g]});
  };

  emit("all", {}, mcure::kaplan_meier(data.times, data.status));
  if (!strata.empty()) {
    std::map<std::string, std::vector<int>> groups;
    for (int i = 0; i < data.n(); ++i) groups[strata[i]].push_back(i);
    for (const auto& [label, subset] : groups) {
      Eigen::VectorXd t(subset.size());
      Eigen::VectorXi s(subset.size());
      for (std::size_t k = 0; k < subset.size(); ++k) {
        t[k] = data.times[subset[k]];
        s[k] = data.status[subset[k]];
      }
      emit(label, subset, mcure::kaplan_meier(t, s));
    }
  }
  return rows;
}

int run_fit_command(const DataOptions& data_opt, const ModelOptions& model_opt,
                    const SamplerOptions& sampler_opt, int intervals,
                    const std::vector<double>& cuts, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::string> strata;
  const auto data = load_dataset(data_opt, &strata, nullptr);
  const auto partition = build_partition(data, intervals, cuts);

  mcure::ModelSpec spec{mcure::model_family_from_string(model_opt.model),
                        mcure::prior_family_from_string(model_opt.prior), partition,
                        model_opt.hyper};
  const auto config = to_sampler_config(sampler_opt);
  const auto draws = mcure::run_fit(data, spec, config, sampler_opt.threads);
  const auto report = mcure::build_fit_report(draws, data, spec);

  json settings{{"command", "fit"},
                {"data", data_options_json(data_opt)},
                {"model", model_options_json(model_opt, &partition)},
                {"sampler", sampler_options_json(sampler_opt)},
                {"n", data.n()}};
  const fs::path dir(out_dir);
  mcure::write_draws_csv((dir / "draws.csv").string(), draws);
  mcure::atomic_write_text((dir / "summary.json").string(),
                           mcure::fit_report_to_json(report, settings).dump(2) + "\n");
  mcure::write_curves_csv((dir / "curves.csv").string(),
                          make_curves(draws, data, partition, strata));
  write_manifest(dir, "fit", settings);
  std::cout << "fit complete: " << out_dir << "\n";
  return 0;
}

int run_compare_command(const DataOptions& data_opt, const ModelOptions& model_opt,
                        const SamplerOptions& sampler_opt, std::vector<int> intervals_list,
                        std::vector<std::string> models, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const auto data = load_dataset(data_opt, nullptr, nullptr);
  if (models.empty()) models = {model_opt.model};
  if (intervals_list.empty()) intervals_list = {1};

  struct Row {
    std::string model;
    int intervals;
    bool ok = false;
    mcure::CriteriaReport criteria;
  };
  std::vector<Row> rows;
  for (const auto& model : models) {
    for (int J : intervals_list) {
      Row row{model, J};
      try {
        const auto partition = mcure::TimePartition::from_data(data, J);
        mcure::ModelSpec spec{mcure::model_family_from_string(model),
                              mcure::prior_family_from_string(model_opt.prior), partition,
                              model_opt.hyper};
        const auto draws = mcure::run_fit(data, spec, to_sampler_config(sampler_opt),
                                          sampler_opt.threads);
        row.criteria = mcure::compute_criteria(draws, data, spec);
        row.ok = true;
      } catch (const std::exception& e) {
        std::cerr << "warning: " << model << " J=" << J << " failed: " << e.what() << "\n";
      }
      rows.push_back(row);
    }
  }

  auto best_index = [&](auto&& value, bool minimize) {
    int best = -1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].ok) continue;
      if (best < 0 || (minimize ? value(rows[i]) < value(rows[best])
                                : value(rows[i]) > value(rows[best])))
        best = static_cast<int>(i);
    }
    return best;
  };
  const int best_bic = best_index([](const Row& r) { return r.criteria.bic; }, true);
  const int best_dic = best_index([](const Row& r) { return r.criteria.dic; }, true);
  const int best_lpml = best_index([](const Row& r) { return r.criteria.lpml; }, false);
  const int best_looic = best_index([](const Row& r) { return r.criteria.looic; }, true);

  std::ostringstream out;
  out << "model,prior,J,bic,dic,lpml,looic,aic,best_bic,best_dic,best_lpml,best_looic\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << r.model << "," << model_opt.prior << "," << r.intervals << ",";
    if (r.ok) {
      out << mcure::format_double(r.criteria.bic) << "," << mcure::format_double(r.criteria.dic)
          << "," << mcure::format_double(r.criteria.lpml) << ","
          << mcure::format_double(r.criteria.looic) << ","
          << mcure::format_double(r.criteria.aic);
    } else {
      out << "NA,NA,NA,NA,NA";
    }
    out << "," << (static_cast<int>(i) == best_bic ? 1 : 0) << ","
        << (static_cast<int>(i) == best_dic ? 1 : 0) << ","
        << (static_cast<int>(i) == best_lpml ? 1 : 0) << ","
        << (static_cast<int>(i) == best_looic ? 1 : 0) << "\n";
  }
  const fs::path dir(out_dir);
  mcure::atomic_write_text((dir / "comparison.csv").string(), out.str());

  json settings{{"command", "compare"},
                {"data", data_options_json(data_opt)},
                {"model", model_options_json(model_opt, nullptr)},
                {"models", models},
                {"intervals", intervals_list},
                {"sampler", sampler_options_json(sampler_opt)}};
  write_manifest(dir, "compare", settings);
  std::cout << "comparison complete: " << out_dir << "\n";
  return 0;
}

int run_simulate_command(int scenario_id, int n, int reps, const ModelOptions& model_opt,
                         const SamplerOptions& sampler_opt, std::vector<int> intervals_list,
                         bool with_criteria, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const auto sc = mcure::scenario(scenario_id, n);

  mcure::StudyConfig cfg;
  cfg.replicates = reps;
  cfg.sampler = to_sampler_config(sampler_opt);
  cfg.family = mcure::model_family_from_string(model_opt.model);
  cfg.prior = mcure::prior_family_from_string(model_opt.prior);
  cfg.with_criteria = with_criteria;
  cfg.seed = sampler_opt.seed;
  cfg.n_threads = sampler_opt.threads;

  const fs::path dir(out_dir);
  std::ostringstream study, criteria;
  study << "scenario,method,parameter,truth,mae,avg_post_mean,avg_post_sd,frac_psrf_lt_1.1\n";
  criteria << "scenario,method,J,avg_aic,avg_bic,avg_dic,avg_lpml,avg_looic,failed\n";

  std::vector<int> runs = intervals_list.empty() ? std::vector<int>{0} : intervals_list;
  for (int J : runs) {
    cfg.fit_intervals = J;
    if (sc.weibull_latency && J == 0)
      throw std::invalid_argument("scenario 4 needs --intervals-list (Weibull truth)");
    const auto result = mcure::run_study(sc, cfg);
    const std::string method = model_opt.model + "(" + model_opt.prior + ")" +
                               (J > 0 ? ",J=" + std::to_string(J) : "");
    for (const auto& row : result.rows) {
      study << "S" << scenario_id << "," << method << "," << row.name << ","
            << mcure::format_double(row.truth) << "," << mcure::format_double(row.mae) << ","
            << mcure::format_double(row.avg_posterior_mean) << ","
            << mcure::format_double(row.avg_posterior_sd) << ","
            << mcure::format_double(row.frac_psrf_below_1_1) << "\n";
    }
    if (with_criteria) {
      criteria << "S" << scenario_id << "," << method << "," << J << ","
               << mcure::format_double(result.avg_aic) << ","
               << mcure::format_double(result.avg_bic) << ","
               << mcure::format_double(result.avg_dic) << ","
               << mcure::format_double(result.avg_lpml) << ","
               << mcure::format_double(result.avg_looic) << ","
               << result.failed_replicates.size() << "\n";
    }
    if (!result.failed_replicates.empty())
      std::cerr << "warning: " << result.failed_replicates.size() << " replicates failed\n";
  }
  mcure::atomic_write_text((dir / "study.csv").string(), study.str());
  if (with_criteria)
    mcure::atomic_write_text((dir / "criteria.csv").string(), criteria.str());

  json settings{{"command", "simulate"}, {"scenario", scenario_id},
                {"n", n},                {"reps", reps},
                {"intervals", runs},     {"model", model_options_json(model_opt, nullptr)},
                {"sampler", sampler_options_json(sampler_opt)},
                {"criteria", with_criteria}};
  write_manifest(dir, "simulate", settings);
  std::cout << "study complete: " << out_dir << "\n";
  return 0;
}

int run_km_command(const DataOptions& data_opt, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<std::string> strata;
  const auto data = load_dataset(data_opt, &strata, nullptr);

  std::ostringstream out;
  out << "stratum,t,survival\n";
  auto emit = [&](const std::string& label, const mcure::StepCurve& curve) {
    for (int i = 0; i < curve.times.size(); ++i)
      out << label << "," << mcure::format_double(curve.times[i]) << ","
          << mcure::format_double(curve.values[i]) << "\n";
  };
  emit("all", mcure::kaplan_meier(data.times, data.status));
  if (!strata.empty())
    for (const auto& [label, curve] : mcure::kaplan_meier_strata(data.times, data.status, strata))
      emit(label, curve);

  const fs::path dir(out_dir);
  mcure::atomic_write_text((dir / "km.csv").string(), out.str());
  json settings{{"command", "km"}, {"data", data_options_json(data_opt)}};
  write_manifest(dir, "km", settings);
  std::cout << "km complete: " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian semiparametric mixture cure models"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat TOML config file; command-line flags win");

  DataOptions data_opt;
  ModelOptions model_opt;
  SamplerOptions fit_sampler;  // real-data schedule
  SamplerOptions sim_sampler;  // simulation schedule
  sim_sampler.chains = 3;
  sim_sampler.iterations = 15000;
  sim_sampler.burnin = 2500;
  sim_sampler.thin = 25;
  int intervals = 1;
  std::vector<double> cuts;
  std::vector<int> intervals_list;
  std::vector<std::string> models;
  std::string out_dir = "mcure-out";
  int scenario_id = 1, sim_n = 300, reps = 10;
  bool with_criteria = false;

  auto* fit = app.add_subcommand("fit", "fit a mixture cure model to a CSV dataset");
  add_data_options(fit, data_opt, true);
  add_model_options(fit, model_opt);
  add_sampler_options(fit, fit_sampler);
  fit->add_option("--intervals", intervals, "piecewise-exponential interval count");
  fit->add_option("--cuts", cuts, "explicit cut points s_1=0,...,s_{J+1}")->delimiter(',');
  fit->add_option("--out", out_dir, "output directory");

  auto* compare = app.add_subcommand("compare", "fit a grid of models and tabulate criteria");
  add_data_options(compare, data_opt, true);
  add_model_options(compare, model_opt);
  add_sampler_options(compare, fit_sampler);
  compare->add_option("--intervals-list", intervals_list, "interval counts to sweep")
      ->delimiter(',');
  compare->add_option("--models", models, "families to fit (smcm,smcfm)")->delimiter(',');
  compare->add_option("--out", out_dir, "output directory");

  auto* simulate = app.add_subcommand("simulate", "run a simulation study scenario");
  simulate->add_option("--scenario", scenario_id, "scenario id 1-4")->required();
  simulate->add_option("--n", sim_n, "sample size per replicate");
  simulate->add_option("--reps", reps, "number of replicates");
  add_model_options(simulate, model_opt);
  add_sampler_options(simulate, sim_sampler);
  simulate->add_option("--intervals-list", intervals_list,
                       "fit interval counts (J sweep; required for scenario 4)")
      ->delimiter(',');
  simulate->add_flag("--criteria", with_criteria, "also average model-comparison criteria");
  simulate->add_option("--out", out_dir, "output directory");

  auto* km = app.add_subcommand("km", "Kaplan-Meier curves from a CSV dataset");
  add_data_options(km, data_opt, false);
  km->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit)
      return run_fit_command(data_opt, model_opt, fit_sampler, intervals, cuts, out_dir);
    if (*compare)
      return run_compare_command(data_opt, model_opt, fit_sampler, intervals_list, models,
                                 out_dir);
    if (*simulate)
      return run_simulate_command(scenario_id, sim_n, reps, model_opt, sim_sampler,
                                  intervals_list, with_criteria, out_dir);
    if (*km) return run_km_command(data_opt, out_dir);
  } catch (const std::exception& e) {
    json err{{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}

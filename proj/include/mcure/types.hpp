#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace mcure {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

enum class ModelFamily { Cure, CureFrailty };
enum class PriorFamily { LassoHierarchy, Normal };

std::string to_string(ModelFamily f);
std::string to_string(PriorFamily f);
ModelFamily model_family_from_string(const std::string& s);
PriorFamily prior_family_from_string(const std::string& s);

/// Right-censored survival data with separate incidence (z) and latency (x)
/// covariates. The z matrix carries the intercept as its first column.
struct SurvivalDataset {
  VectorXd times;    // strictly positive, same unit throughout
  VectorXi status;   // 1 = event observed, 0 = right-censored
  MatrixXd x;        // n x p2
  MatrixXd z;        // n x (p1 + 1), first column all ones
  std::vector<std::string> x_names;  // optional labels
  std::vector<std::string> z_names;  // optional labels (excluding intercept)

  int n() const { return static_cast<int>(times.size()); }
  int p2() const { return static_cast<int>(x.cols()); }
  int p1() const { return static_cast<int>(z.cols()) - 1; }

  void validate() const;  // throws std::invalid_argument on any broken invariant
};

/// Partition 0 = s_1 < s_2 < ... < s_{J+1} of the time axis into J intervals
/// (s_j, s_{j+1}]; the hazard is constant within each interval.
struct TimePartition {
  VectorXd cuts;  // length J + 1

  int intervals() const { return static_cast<int>(cuts.size()) - 1; }
  double upper() const { return cuts[cuts.size() - 1]; }
  void validate() const;
  bool covers(double t) const { return t > 0.0 && t <= upper(); }

  /// Index of the interval containing t, left-open right-closed: a time equal
  /// to a cut point belongs to the lower interval. Throws if t is outside
  /// (0, s_{J+1}].
  int interval_of(double t) const;

  static TimePartition from_cuts(VectorXd cuts);
  /// Interior cut points at the j/J empirical quantiles of the uncensored
  /// event times; s_{J+1} = 1.001 * max(times).
  static TimePartition from_data(const SurvivalDataset& data, int intervals);
};

/// Likelihood parameters of either model family. theta is the gamma-frailty
/// precision; absent means the non-frailty model.
struct CureParameters {
  VectorXd b;       // p1 + 1 incidence coefficients, b[0] = intercept
  VectorXd beta;    // p2 latency coefficients
  VectorXd lambda;  // J interval hazards, all > 0
  std::optional<double> theta;

  void validate(const SurvivalDataset& data, const TimePartition& partition) const;
};

struct Hyperparameters {
  double a = 0.1, b_rate = 0.1;    // gamma shape/rate for each lambda_j
  double r1 = 1.0, delta1 = 0.1;   // gamma shape/rate for eta^2
  double r2 = 1.0, delta2 = 0.1;   // gamma shape/rate for eta*^2
  double c = 0.01, d = 0.01;       // gamma shape/rate for theta
  double sigma_b_sq = 100.0;       // normal-prior family only
  double sigma_beta_sq = 100.0;

  void validate() const;
};

/// Latent scale variables of the lasso hierarchy.
struct ShrinkageState {
  VectorXd tau_sq;       // p1 + 1
  VectorXd tau_star_sq;  // p2
  double sigma_sq = 1.0;
  double sigma_star_sq = 1.0;
  double eta_sq = 1.0;
  double eta_star_sq = 1.0;

  static ShrinkageState ones(int n_b, int n_beta);
  bool all_positive() const;
};

struct ModelSpec {
  ModelFamily family = ModelFamily::Cure;
  PriorFamily prior = PriorFamily::LassoHierarchy;
  TimePartition partition;
  Hyperparameters hyper;
};

}  // namespace mcure

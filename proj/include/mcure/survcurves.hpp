#pragma once

#include "mcure/sampler.hpp"

namespace mcure {

/// Right-continuous step function starting at 1; jump times are the distinct
/// event times.
struct StepCurve {
  VectorXd times;   // increasing
  VectorXd values;  // value on [times[i], times[i+1])

  double at(double t) const;
  void validate() const;  // nonincreasing values within [0,1]
};

/// Product-limit estimator S(t) = prod_{t_k <= t} (1 - d_k / n_k) over the
/// distinct event times, n_k the number at risk.
StepCurve kaplan_meier(const VectorXd& times, const VectorXi& status);

/// One curve per stratum label, ordered alphabetically.
std::vector<std::pair<std::string, StepCurve>> kaplan_meier_strata(
    const VectorXd& times, const VectorXi& status, const std::vector<std::string>& strata);

struct SurvivalBand {
  VectorXd grid;
  VectorXd mean;
  VectorXd lower;
  VectorXd upper;
};

/// Pointwise posterior mean and HPD band of the subject-averaged population
/// survival curve. subset selects the subjects to average over (a stratum);
/// empty means all.
SurvivalBand posterior_survival_curve(const PosteriorDraws& draws, const SurvivalDataset& data,
                                      const TimePartition& partition, const VectorXd& grid,
                                      double level = 0.95, const std::vector<int>& subset = {});

/// Same, for a fixed covariate profile instead of the subject average.
SurvivalBand posterior_survival_curve_profile(const PosteriorDraws& draws,
                                              const VectorXd& x_row, const VectorXd& z_row,
                                              const TimePartition& partition,
                                              const VectorXd& grid, double level = 0.95);

}  // namespace mcure

#include "mcure/survcurves.hpp"

#include "mcure/diagnostics.hpp"
#include "mcure/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mcure {

double StepCurve::at(double t) const {
  if (times.size() == 0 || t < times[0]) return 1.0;
  const double* begin = times.data();
  const double* end = times.data() + times.size();
  const auto idx = std::upper_bound(begin, end, t) - begin;  // first jump > t
  return values[idx - 1];
}

void StepCurve::validate() const {
  if (times.size() != values.size()) throw std::invalid_argument("step curve size mismatch");
  for (int i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0 || values[i] > 1.0)
      throw std::invalid_argument("step curve values must lie in [0,1]");
    if (i > 0 && values[i] > values[i - 1])
      throw std::invalid_argument("step curve must be nonincreasing");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("step curve jump times must increase");
  }
}

StepCurve kaplan_meier(const VectorXd& times, const VectorXi& status) {
  const auto n = static_cast<int>(times.size());
  if (n < 1) throw std::invalid_argument("kaplan_meier: empty input");
  if (status.size() != n) throw std::invalid_argument("kaplan_meier: size mismatch");

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return times[a] < times[b]; });

  std::vector<double> jump_times;
  std::vector<double> surv;
  double s = 1.0;
  int at_risk = n;
  int i = 0;
  while (i < n) {
    const double t = times[order[i]];
    int d = 0, removed = 0;
    while (i < n && times[order[i]] == t) {
      d += status[order[i]];
      ++removed;
      ++i;
    }
    if (d > 0) {
      s *= 1.0 - static_cast<double>(d) / at_risk;
      jump_times.push_back(t);
      surv.push_back(s);
    }
    at_risk -= removed;
  }

  StepCurve curve;
  curve.times = Eigen::Map<VectorXd>(jump_times.data(), jump_times.size());
  curve.values = Eigen::Map<VectorXd>(surv.data(), surv.size());
  return curve;
}

std::vector<std::pair<std::string, StepCurve>> kaplan_meier_strata(
    const VectorXd& times, const VectorXi& status, const std::vector<std::string>& strata) {
  if (static_cast<int>(strata.size()) != times.size())
    throw std::invalid_argument("strata size mismatch");
  std::map<std::string, std::vector<int>> groups;
  for (int i = 0; i < times.size(); ++i) groups[strata[i]].push_back(i);

  std::vector<std::pair<std::string, StepCurve>> out;
  for (const auto& [label, idx] : groups) {
    VectorXd t(idx.size());
    VectorXi d(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      t[k] = times[idx[k]];
      d[k] = status[idx[k]];
    }
    out.emplace_back(label, kaplan_meier(t, d));
  }
  return out;
}

namespace {

SurvivalBand band_from_values(const VectorXd& grid, const MatrixXd& values, double level) {
  SurvivalBand band;
  band.grid = grid;
  band.mean = values.colwise().mean();
  band.lower.resize(grid.size());
  band.upper.resize(grid.size());
  const auto draws = static_cast<int>(values.rows());
  for (int g = 0; g < grid.size(); ++g) {
    if (draws >= 20) {
      std::tie(band.lower[g], band.upper[g]) = hpd_interval(values.col(g), level);
    } else {
      band.lower[g] = values.col(g).minCoeff();
      band.upper[g] = values.col(g).maxCoeff();
    }
  }
  return band;
}

}  // namespace

SurvivalBand posterior_survival_curve(const PosteriorDraws& draws, const SurvivalDataset& data,
                                      const TimePartition& partition, const VectorXd& grid,
                                      double level, const std::vector<int>& subset) {
  for (int g = 0; g < grid.size(); ++g)
    if (grid[g] < 0.0 || grid[g] > partition.upper())
      throw std::out_of_range("grid point outside the partition");

  std::vector<int> subjects = subset;
  if (subjects.empty())
    for (int i = 0; i < data.n(); ++i) subjects.push_back(i);
  const auto ns = static_cast<double>(subjects.size());

  const MatrixXd pooled = draws.pooled_params();
  const auto B = static_cast<int>(pooled.rows());
  MatrixXd values(B, grid.size());

  Eigen::ArrayXd pi(subjects.size()), mult(subjects.size());
  for (int r = 0; r < B; ++r) {
    const VectorXd b = pooled.row(r).segment(0, draws.n_b).transpose();
    const VectorXd beta = pooled.row(r).segment(draws.n_b, draws.n_beta).transpose();
    const VectorXd lambda =
        pooled.row(r).segment(draws.n_b + draws.n_beta, draws.n_lambda).transpose();
    const std::optional<double> theta =
        draws.has_theta
            ? std::optional<double>(pooled(r, draws.n_b + draws.n_beta + draws.n_lambda))
            : std::nullopt;
    for (std::size_t s = 0; s < subjects.size(); ++s) {
      const int i = subjects[s];
      pi[s] = incidence_probability(data.z.row(i).transpose(), b);
      mult[s] = std::exp(detail::clamp_lp(data.x.row(i).dot(beta)));
    }
    for (int g = 0; g < grid.size(); ++g) {
      const double H = grid[g] == 0.0 ? 0.0 : baseline_cumhaz_at(grid[g], partition, lambda);
      const Eigen::ArrayXd A = (H * mult).min(detail::kHazardExpCap);
      Eigen::ArrayXd latency;
      if (theta)
        latency = (-(*theta) * (A / *theta).log1p()).exp();
      else
        latency = (-A).exp();
      values(r, g) = ((1.0 - pi) + pi * latency).sum() / ns;
    }
  }
  return band_from_values(grid, values, level);
}

SurvivalBand posterior_survival_curve_profile(const PosteriorDraws& draws,
                                              const VectorXd& x_row, const VectorXd& z_row,
                                              const TimePartition& partition,
                                              const VectorXd& grid, double level) {
  for (int g = 0; g < grid.size(); ++g)
    if (grid[g] < 0.0 || grid[g] > partition.upper())
      throw std::out_of_range("grid point outside the partition");

  const MatrixXd pooled = draws.pooled_params();
  const auto B = static_cast<int>(pooled.rows());
  MatrixXd values(B, grid.size());
  for (int r = 0; r < B; ++r) {
    CureParameters p;
    p.b = pooled.row(r).segment(0, draws.n_b).transpose();
    p.beta = pooled.row(r).segment(draws.n_b, draws.n_beta).transpose();
    p.lambda = pooled.row(r).segment(draws.n_b + draws.n_beta, draws.n_lambda).transpose();
    if (draws.has_theta) p.theta = pooled(r, draws.n_b + draws.n_beta + draws.n_lambda);
    for (int g = 0; g < grid.size(); ++g)
      values(r, g) =
          grid[g] == 0.0 ? 1.0 : population_survival(grid[g], x_row, z_row, p, partition);
  }
  return band_from_values(grid, values, level);
}

}  // namespace mcure

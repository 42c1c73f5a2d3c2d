#include "mcure/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcure {

std::string to_string(ModelFamily f) {
  return f == ModelFamily::Cure ? "smcm" : "smcfm";
}

std::string to_string(PriorFamily f) {
  return f == PriorFamily::LassoHierarchy ? "lasso" : "normal";
}

ModelFamily model_family_from_string(const std::string& s) {
  if (s == "smcm" || s == "cure") return ModelFamily::Cure;
  if (s == "smcfm" || s == "cure-frailty") return ModelFamily::CureFrailty;
  throw std::invalid_argument("unknown model family: " + s);
}

PriorFamily prior_family_from_string(const std::string& s) {
  if (s == "lasso") return PriorFamily::LassoHierarchy;
  if (s == "normal") return PriorFamily::Normal;
  throw std::invalid_argument("unknown prior family: " + s);
}

void SurvivalDataset::validate() const {
  const int nn = n();
  if (nn < 1) throw std::invalid_argument("dataset is empty");
  if (status.size() != nn || x.rows() != nn || z.rows() != nn)
    throw std::invalid_argument("times, status, x, z row counts disagree");
  if (z.cols() < 1) throw std::invalid_argument("z must carry an intercept column");
  for (int i = 0; i < nn; ++i) {
    if (!(times[i] > 0.0) || !std::isfinite(times[i]))
      throw std::invalid_argument("nonpositive or non-finite time at row " + std::to_string(i));
    if (status[i] != 0 && status[i] != 1)
      throw std::invalid_argument("status not in {0,1} at row " + std::to_string(i));
    if (z(i, 0) != 1.0)
      throw std::invalid_argument("z intercept column is not 1 at row " + std::to_string(i));
  }
  if (!x.allFinite() || !z.allFinite())
    throw std::invalid_argument("non-finite covariate values");
}

void TimePartition::validate() const {
  if (cuts.size() < 2) throw std::invalid_argument("partition needs at least one interval");
  if (cuts[0] != 0.0) throw std::invalid_argument("partition must start at 0");
  for (int j = 0; j + 1 < cuts.size(); ++j)
    if (!(cuts[j] < cuts[j + 1]))
      throw std::invalid_argument("partition cut points must be strictly increasing");
}

int TimePartition::interval_of(double t) const {
  if (!covers(t)) throw std::out_of_range("time outside partition range");
  const double* begin = cuts.data() + 1;
  const double* end = cuts.data() + cuts.size();
  // first cut point >= t among s_2..s_{J+1}; equality lands in the lower interval
  return static_cast<int>(std::lower_bound(begin, end, t) - begin);
}

TimePartition TimePartition::from_cuts(VectorXd cuts) {
  TimePartition p{std::move(cuts)};
  p.validate();
  return p;
}

TimePartition TimePartition::from_data(const SurvivalDataset& data, int intervals) {
  if (intervals < 1) throw std::invalid_argument("interval count must be >= 1");
  std::vector<double> events;
  for (int i = 0; i < data.n(); ++i)
    if (data.status[i] == 1) events.push_back(data.times[i]);
  std::sort(events.begin(), events.end());
  const double top = 1.001 * data.times.maxCoeff();

  VectorXd cuts(intervals + 1);
  cuts[0] = 0.0;
  cuts[intervals] = top;
  for (int j = 1; j < intervals; ++j) {
    if (events.empty()) throw std::invalid_argument("no events to place interior cut points");
    const double q = static_cast<double>(j) / intervals;
    const double pos = q * (static_cast<double>(events.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, events.size() - 1);
    cuts[j] = events[lo] + (pos - std::floor(pos)) * (events[hi] - events[lo]);
  }
  TimePartition p{std::move(cuts)};
  p.validate();  // rejects duplicated quantiles (too few distinct event times)
  return p;
}

void CureParameters::validate(const SurvivalDataset& data, const TimePartition& partition) const {
  if (b.size() != data.p1() + 1) throw std::invalid_argument("b length != p1 + 1");
  if (beta.size() != data.p2()) throw std::invalid_argument("beta length != p2");
  if (lambda.size() != partition.intervals())
    throw std::invalid_argument("lambda length != interval count");
  if ((lambda.array() <= 0.0).any()) throw std::invalid_argument("lambda entries must be > 0");
  if (theta && !(*theta > 0.0)) throw std::invalid_argument("theta must be > 0");
}

void Hyperparameters::validate() const {
  for (double v : {a, b_rate, r1, delta1, r2, delta2, c, d, sigma_b_sq, sigma_beta_sq})
    if (!(v > 0.0)) throw std::invalid_argument("hyperparameters must be strictly positive");
}

ShrinkageState ShrinkageState::ones(int n_b, int n_beta) {
  ShrinkageState s;
  s.tau_sq = VectorXd::Ones(n_b);
  s.tau_star_sq = VectorXd::Ones(n_beta);
  return s;
}

bool ShrinkageState::all_positive() const {
  return (tau_sq.array() > 0.0).all() && (tau_star_sq.array() > 0.0).all() &&
         sigma_sq > 0.0 && sigma_star_sq > 0.0 && eta_sq > 0.0 && eta_star_sq > 0.0;
}

}  // namespace mcure

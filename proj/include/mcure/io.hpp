#pragma once

#include "mcure/criteria.hpp"
#include "mcure/datagen.hpp"
#include "mcure/diagnostics.hpp"
#include "mcure/survcurves.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace mcure {

struct ColumnMapping {
  std::string time;
  std::string status;
  std::vector<std::string> x_cols;
  std::vector<std::string> z_cols;
  std::string strata_col;  // optional; raw labels reported per kept row
  /// Explicit unit conversion, applied as time / divisor (never implicit).
  double time_divisor = 1.0;
  /// Rows with raw time strictly below this are dropped (native units).
  double min_time = 0.0;
};

struct IngestReport {
  std::vector<int> dropped_missing;    // 1-based data row numbers
  std::vector<int> dropped_below_min;
  std::vector<std::string> strata;     // aligned with the kept rows
};

/// Reads a header CSV into a validated dataset. Categorical covariate columns
/// are expanded to dummies with the alphabetically first level as reference;
/// rows with missing mapped values are dropped and reported.
SurvivalDataset ingest_csv(const std::string& path, const ColumnMapping& mapping,
                           IngestReport* report = nullptr);

struct FitReport {
  std::vector<ParameterSummary> parameters;
  ParameterSummary uncured_rate;
  ParameterSummary cure_rate;
  CriteriaReport criteria;
  std::vector<std::string> acceptance_names;
  VectorXd acceptance_rates;
  long clamped = 0;
};

FitReport build_fit_report(const PosteriorDraws& draws, const SurvivalDataset& data,
                           const ModelSpec& spec);

nlohmann::json fit_report_to_json(const FitReport& report, const nlohmann::json& settings);

/// write-temp-then-rename
void atomic_write_text(const std::string& path, const std::string& content);

void write_draws_csv(const std::string& path, const PosteriorDraws& draws);

struct CurveRow {
  std::string stratum;
  double t;
  double km;
  double post_mean;
  double hpd_low;
  double hpd_high;
};
void write_curves_csv(const std::string& path, const std::vector<CurveRow>& rows);

void write_study_csv(const std::string& path, const std::string& scenario_label,
                     const std::string& method_label, const StudyResult& result);

std::string format_double(double v);  // shortest exact round-trip text

}  // namespace mcure

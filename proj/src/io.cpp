#include "mcure/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mcure {

namespace {

bool is_missing(const std::string& s) {
  return s.empty() || s == "NA" || s == "NaN" || s == "nan";
}

bool parse_double(const std::string& s, double* out) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) return false;
  *out = v;
  return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw std::invalid_argument("column not found in CSV: " + name);
    return static_cast<int>(it - header.begin());
  }
};

RawTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  RawTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  t.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    fields.resize(t.header.size());
    t.rows.push_back(std::move(fields));
  }
  return t;
}

// Expanded covariate block: numeric columns pass through, categorical ones
// become dummies against the alphabetically first level.
struct ExpandedBlock {
  MatrixXd values;
  std::vector<std::string> names;
};

ExpandedBlock expand_columns(const RawTable& table, const std::vector<std::string>& cols,
                             const std::vector<int>& keep) {
  ExpandedBlock out;
  std::vector<VectorXd> expanded;
  for (const auto& col : cols) {
    const int c = table.column(col);
    bool numeric = true;
    for (int r : keep) {
      const auto& cell = table.rows[r][c];
      double v;
      if (!is_missing(cell) && !parse_double(cell, &v)) {
        numeric = false;
        break;
      }
    }
    if (numeric) {
      VectorXd v(keep.size());
      for (std::size_t k = 0; k < keep.size(); ++k)
        parse_double(table.rows[keep[k]][c], &v[k]);
      expanded.push_back(std::move(v));
      out.names.push_back(col);
    } else {
      std::set<std::string> levels;
      for (int r : keep) levels.insert(table.rows[r][c]);
      if (levels.size() < 2)
        throw std::invalid_argument("categorical column " + col + " has a single level");
      auto it = levels.begin();
      ++it;  // first level alphabetically is the reference
      for (; it != levels.end(); ++it) {
        VectorXd v(keep.size());
        for (std::size_t k = 0; k < keep.size(); ++k)
          v[k] = table.rows[keep[k]][c] == *it ? 1.0 : 0.0;
        expanded.push_back(std::move(v));
        out.names.push_back(col + "=" + *it);
      }
    }
  }
  out.values.resize(keep.size(), expanded.size());
  for (std::size_t j = 0; j < expanded.size(); ++j) out.values.col(j) = expanded[j];
  return out;
}

}  // namespace

SurvivalDataset ingest_csv(const std::string& path, const ColumnMapping& mapping,
                           IngestReport* report) {
  const RawTable table = read_table(path);
  const int tc = table.column(mapping.time);
  const int sc = table.column(mapping.status);
  std::vector<int> mapped_cols{tc, sc};
  for (const auto& c : mapping.x_cols) mapped_cols.push_back(table.column(c));
  for (const auto& c : mapping.z_cols) mapped_cols.push_back(table.column(c));

  IngestReport local;
  IngestReport& rep = report ? *report : local;

  std::vector<int> keep;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    bool missing = false;
    for (int c : mapped_cols)
      if (is_missing(table.rows[r][c])) {
        missing = true;
        break;
      }
    if (missing) {
      rep.dropped_missing.push_back(static_cast<int>(r) + 1);
      continue;
    }
    if (mapping.min_time > 0.0) {
      double t;
      if (parse_double(table.rows[r][tc], &t) && t < mapping.min_time) {
        rep.dropped_below_min.push_back(static_cast<int>(r) + 1);
        continue;
      }
    }
    keep.push_back(static_cast<int>(r));
  }
  if (keep.empty()) throw std::invalid_argument("no usable rows in " + path);

  SurvivalDataset data;
  data.times.resize(keep.size());
  data.status.resize(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const int r = keep[k];
    double t;
    if (!parse_double(table.rows[r][tc], &t))
      throw std::invalid_argument("malformed time at data row " + std::to_string(r + 1));
    t /= mapping.time_divisor;
    if (!(t > 0.0))
      throw std::invalid_argument("nonpositive time at data row " + std::to_string(r + 1));
    double s;
    if (!parse_double(table.rows[r][sc], &s) || (s != 0.0 && s != 1.0))
      throw std::invalid_argument("nonbinary status at data row " + std::to_string(r + 1));
    data.times[k] = t;
    data.status[k] = static_cast<int>(s);
  }

  if (!mapping.strata_col.empty()) {
    const int col = table.column(mapping.strata_col);
    for (int r : keep) rep.strata.push_back(table.rows[r][col]);
  }

  ExpandedBlock xb = expand_columns(table, mapping.x_cols, keep);
  ExpandedBlock zb = expand_columns(table, mapping.z_cols, keep);
  data.x = xb.values;
  data.x_names = xb.names;
  data.z.resize(keep.size(), zb.values.cols() + 1);
  data.z.col(0).setOnes();
  data.z.rightCols(zb.values.cols()) = zb.values;
  data.z_names = zb.names;
  data.validate();
  return data;
}

FitReport build_fit_report(const PosteriorDraws& draws, const SurvivalDataset& data,
                           const ModelSpec& spec) {
  FitReport r;
  r.parameters = summarize(draws);
  r.uncured_rate = uncured_rate_summary(draws, data);
  r.cure_rate = cure_rate_summary(draws, data);
  r.criteria = compute_criteria(draws, data, spec);
  r.acceptance_names = draws.mh_coordinate_names();
  r.acceptance_rates = draws.acceptance_rates();
  for (const auto& c : draws.chains) r.clamped += c.clamped;
  return r;
}

namespace {

nlohmann::json summary_to_json(const ParameterSummary& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["mean"] = s.mean;
  j["sd"] = s.sd;
  j["hpd_low"] = s.hpd_low;
  j["hpd_high"] = s.hpd_high;
  if (std::isfinite(s.psrf))
    j["psrf"] = s.psrf;
  else
    j["psrf"] = nullptr;
  return j;
}

}  // namespace

nlohmann::json fit_report_to_json(const FitReport& report, const nlohmann::json& settings) {
  nlohmann::json j;
  j["settings"] = settings;
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : report.parameters) params.push_back(summary_to_json(p));
  j["parameters"] = params;
  j["uncured_rate"] = summary_to_json(report.uncured_rate);
  j["cure_rate"] = summary_to_json(report.cure_rate);
  j["criteria"] = {{"dic", report.criteria.dic},     {"p_d", report.criteria.p_d},
                   {"lpml", report.criteria.lpml},   {"looic", report.criteria.looic},
                   {"aic", report.criteria.aic},     {"bic", report.criteria.bic}};
  nlohmann::json acc = nlohmann::json::object();
  for (std::size_t i = 0; i < report.acceptance_names.size(); ++i)
    acc[report.acceptance_names[i]] = report.acceptance_rates[static_cast<int>(i)];
  j["acceptance_rates"] = acc;
  j["clamped_evaluations"] = report.clamped;
  return j;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

void write_draws_csv(const std::string& path, const PosteriorDraws& draws) {
  std::ostringstream out;
  out << "chain,iteration";
  for (const auto& n : draws.names) out << "," << n;
  out << "\n";
  for (std::size_t c = 0; c < draws.chains.size(); ++c) {
    const auto& m = draws.chains[c].params;
    for (int r = 0; r < m.rows(); ++r) {
      out << (c + 1) << "," << (r + 1);
      for (int j = 0; j < m.cols(); ++j) out << "," << format_double(m(r, j));
      out << "\n";
    }
  }
  atomic_write_text(path, out.str());
}

void write_curves_csv(const std::string& path, const std::vector<CurveRow>& rows) {
  std::ostringstream out;
  out << "stratum,t,km,post_mean,hpd_low,hpd_high\n";
  for (const auto& r : rows) {
    out << r.stratum << "," << format_double(r.t) << "," << format_double(r.km) << ","
        << format_double(r.post_mean) << "," << format_double(r.hpd_low) << ","
        << format_double(r.hpd_high) << "\n";
  }
  atomic_write_text(path, out.str());
}

void write_study_csv(const std::string& path, const std::string& scenario_label,
                     const std::string& method_label, const StudyResult& result) {
  std::ostringstream out;
  out << "scenario,method,parameter,truth,mae,avg_post_mean,avg_post_sd,frac_psrf_lt_1.1\n";
  for (const auto& row : result.rows) {
    out << scenario_label << "," << method_label << "," << row.name << ","
        << format_double(row.truth) << "," << format_double(row.mae) << ","
        << format_double(row.avg_posterior_mean) << "," << format_double(row.avg_posterior_sd)
        << "," << format_double(row.frac_psrf_below_1_1) << "\n";
  }
  atomic_write_text(path, out.str());
}

}  // namespace mcure

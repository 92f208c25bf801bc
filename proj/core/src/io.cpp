#include "midas/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>

#include "midas/errors.hpp"
#include "midas/lag_weights.hpp"

namespace midas {

std::string format_double(double value, int significant_digits) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, significant_digits);
  if (res.ec != std::errc()) return "nan";
  return std::string(buf, res.ptr);
}

namespace {

// RFC 4180: quote only when the field contains a comma, quote or newline.
std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps \n on every platform
  if (!out) throw CsvError("io", "cannot open '" + path + "' for writing");
  return out;
}

void write_metric_fields(std::ostream& out, const MetricsRow& row) {
  out << format_double(row.nmedb) << ',' << format_double(row.trmedsem) << ','
      << format_double(row.medb_theta) << ',' << format_double(row.medb_sigma2)
      << ',' << format_double(row.clamp_rate) << ','
      << format_double(row.failure_rate);
}

}  // namespace

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
  if (rows.empty()) throw CsvError("io", "write_metrics_csv: no rows");
  std::ofstream out = open_out(path);
  out << "T,jmax,theta,sigma_u2,sigma_v2,estimator,NMedB,trMedSEM,medB_theta,"
         "medB_sigma2,clamp_rate,failure_rate,reps,seed\n";
  for (const MetricsRow& row : rows) {
    const Scenario& sc = row.scenario;
    out << sc.T << ',' << sc.jmax << ',' << format_double(sc.theta2) << ','
        << format_double(sc.sigma_u2) << ',' << format_double(sc.sigma_v2) << ','
        << estimator_tag(row.estimator) << ',';
    write_metric_fields(out, row);
    out << ',' << sc.reps << ',' << sc.master_seed << '\n';
  }
  if (!out) throw CsvError("io", "write failed for '" + path + "'");
}

void write_figdata_csv(const std::vector<MetricsRow>& rows,
                       const std::string& out_dir) {
  if (rows.empty()) throw CsvError("io", "write_figdata_csv: no rows");

  struct Slice {
    const char* file;
    const char* lead;  // the axis column
  };
  const Slice slices[] = {{"/figdata_vs_T.csv", "T"},
                          {"/figdata_vs_jmax.csv", "jmax"}};

  for (const Slice& slice : slices) {
    const bool by_t = std::string(slice.lead) == "T";
    // Group key: everything except the running axis; rows stay in metric-table
    // order inside each group.
    std::map<std::string, std::vector<const MetricsRow*>> groups;
    for (const MetricsRow& row : rows) {
      const Scenario& sc = row.scenario;
      std::ostringstream key;
      if (by_t) key << sc.jmax;
      else key << sc.T;
      key << ',' << format_double(sc.theta2) << ',' << format_double(sc.sigma_u2)
          << ',' << format_double(sc.sigma_v2) << ',' << estimator_tag(row.estimator);
      groups[key.str()].push_back(&row);
    }

    std::ofstream out = open_out(out_dir + slice.file);
    out << (by_t ? "jmax" : "T")
        << ",theta,sigma_u2,sigma_v2,estimator," << slice.lead
        << ",NMedB,trMedSEM,medB_theta,medB_sigma2\n";
    for (const auto& [key, members] : groups) {
      for (const MetricsRow* row : members) {
        out << key << ',' << (by_t ? row->scenario.T : row->scenario.jmax) << ',';
        out << format_double(row->nmedb) << ',' << format_double(row->trmedsem)
            << ',' << format_double(row->medb_theta) << ','
            << format_double(row->medb_sigma2) << '\n';
      }
    }
    if (!out) throw CsvError("io", "write failed for '" + out_dir + slice.file + "'");
  }
}

void write_diagnostics_csv(
    const std::vector<GradientLimitReport>& gradients,
    const std::vector<PlimReport>& plims,
    const std::vector<std::pair<std::string, CoverageReport>>& coverages,
    const std::string& path) {
  std::ofstream out = open_out(path);
  out << "check,component,empirical,predicted,mc_se,pass\n";
  auto emit = [&](const std::string& check, const ComponentCheck& c) {
    out << csv_field(check) << ',' << csv_field(c.label) << ','
        << format_double(c.empirical) << ',' << format_double(c.predicted) << ','
        << format_double(c.mc_se) << ',' << (c.pass ? "true" : "false") << '\n';
  };
  for (std::size_t i = 0; i < gradients.size(); ++i) {
    const std::string name = "naive_gradient_limit[" + std::to_string(i) + "]";
    for (const ComponentCheck& c : gradients[i].components) emit(name, c);
  }
  for (std::size_t i = 0; i < plims.size(); ++i) {
    for (const PlimCheck& check : plims[i].checks) {
      const std::string name =
          "plim_" + check.name + "[" + std::to_string(i) + "]";
      for (const ComponentCheck& c : check.components) emit(name, c);
    }
  }
  for (const auto& [name, report] : coverages) {
    for (std::size_t k = 0; k < report.labels.size(); ++k) {
      out << csv_field("coverage_" + name) << ',' << csv_field(report.labels[k])
          << ',' << format_double(report.coverage[k]) << ",0.95,," << '\n';
    }
  }
  if (!out) throw CsvError("io", "write failed for '" + path + "'");
}

namespace {

struct CsvTable {
  std::vector<std::vector<std::string>> rows;  // excluding header
  std::vector<std::string> header;
  std::vector<long> line_numbers;
};

CsvTable read_csv(const std::string& path, std::size_t expect_cols) {
  std::ifstream in(path);
  if (!in) throw CsvError("io", "cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream fs(line);
    while (std::getline(fs, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (line_no == 1) {
      table.header = fields;
      if (fields.size() != expect_cols) {
        throw CsvError("parse",
                       path + ": expected " + std::to_string(expect_cols) +
                           " header columns, found " + std::to_string(fields.size()),
                       line_no);
      }
      continue;
    }
    if (fields.size() != expect_cols) {
      throw CsvError("missing-value",
                     path + " line " + std::to_string(line_no) +
                         ": expected " + std::to_string(expect_cols) + " fields",
                     line_no);
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  return table;
}

double parse_value(const std::string& path, const std::string& text, long line) {
  if (text.empty()) {
    throw CsvError("missing-value",
                   path + " line " + std::to_string(line) + ": empty value", line);
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw CsvError("parse",
                   path + " line " + std::to_string(line) + ": bad number '" +
                       text + "'",
                   line);
  }
}

long parse_id(const std::string& path, const std::string& text, long line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw CsvError("parse",
                   path + " line " + std::to_string(line) + ": bad id '" + text + "'",
                   line);
  }
}

}  // namespace

MixedSeries read_mixed_csv(const std::string& low_path, const std::string& high_path) {
  const CsvTable low = read_csv(low_path, 2);
  const CsvTable high = read_csv(high_path, 3);
  if (low.rows.empty()) throw CsvError("parse", low_path + ": no data rows");
  if (high.rows.empty()) throw CsvError("parse", high_path + ": no data rows");

  const long t = static_cast<long>(low.rows.size());
  std::vector<long> periods(t);
  Eigen::VectorXd y(t);
  for (long i = 0; i < t; ++i) {
    periods[i] = parse_id(low_path, low.rows[i][0], low.line_numbers[i]);
    y[i] = parse_value(low_path, low.rows[i][1], low.line_numbers[i]);
  }

  // Infer m from the first period's block, then demand the same shape from
  // every period and the same period sequence as the low-frequency file.
  long m = 0;
  while (m < static_cast<long>(high.rows.size())) {
    const long pid = parse_id(high_path, high.rows[m][0], high.line_numbers[m]);
    if (pid != periods[0]) break;
    ++m;
  }
  if (m < 1) {
    throw CsvError("ragged-subperiods",
                   high_path + ": first period does not match " + low_path,
                   high.line_numbers.empty() ? -1 : high.line_numbers[0]);
  }
  if (static_cast<long>(high.rows.size()) != m * t) {
    throw CsvError("ragged-subperiods",
                   high_path + ": expected " + std::to_string(m * t) +
                       " rows for m = " + std::to_string(m) + ", found " +
                       std::to_string(high.rows.size()));
  }

  Eigen::VectorXd x(m * t);
  for (long i = 0; i < t; ++i) {
    for (long s = 0; s < m; ++s) {
      const long r = i * m + s;
      const long line = high.line_numbers[r];
      const long pid = parse_id(high_path, high.rows[r][0], line);
      const long sub = parse_id(high_path, high.rows[r][1], line);
      if (pid != periods[i] || sub != s + 1) {
        throw CsvError("ragged-subperiods",
                       high_path + " line " + std::to_string(line) +
                           ": expected period " + std::to_string(periods[i]) +
                           " subperiod " + std::to_string(s + 1),
                       line);
      }
      x[r] = parse_value(high_path, high.rows[r][2], line);
    }
  }
  return MixedSeries{std::move(y), std::move(x), static_cast<int>(m)};
}

void write_mixed_csv(const MixedSeries& series, const std::string& low_path,
                     const std::string& high_path) {
  std::ofstream low = open_out(low_path);
  low << "period,value\n";
  for (Eigen::Index i = 0; i < series.y_obs.size(); ++i) {
    low << (i + 1) << ',' << format_double(series.y_obs[i], 17) << '\n';
  }
  std::ofstream high = open_out(high_path);
  high << "period,subperiod,value\n";
  for (Eigen::Index i = 0; i < series.y_obs.size(); ++i) {
    for (int s = 0; s < series.m; ++s) {
      high << (i + 1) << ',' << (s + 1) << ','
           << format_double(series.x_obs[i * series.m + s], 17) << '\n';
    }
  }
  if (!low || !high) throw CsvError("io", "write failed for series CSVs");
}

void print_fit_report(std::ostream& os, const FitResult& corrected,
                      const FitResult& naive, const DesignSet& ds,
                      const MeVariances& me) {
  const int p = ds.p;
  std::vector<std::string> names;
  names.push_back("a");
  for (int j = 1; j <= p; ++j) names.push_back("rho" + std::to_string(j));
  names.push_back("b");

  os << "corrected-score fit (sigma_u2 = " << format_double(me.sigma_u2)
     << ", sigma_v2 = " << format_double(me.sigma_v2) << ", rows = " << ds.rows()
     << ", dropped = " << ds.dropped_rows << ")\n";
  auto se_of = [](const FitResult& fit, int k) -> std::string {
    if (!fit.covariance) return "n/a";
    return format_double(std::sqrt((*fit.covariance)(k, k)));
  };
  for (int k = 0; k < p + 2; ++k) {
    os << "  " << names[k] << " = " << format_double(corrected.beta_hat[k])
       << "  (se " << se_of(corrected, k) << ")\n";
  }
  os << "  theta = " << format_double(corrected.theta_hat) << "  (se "
     << se_of(corrected, p + 2) << ")\n";
  os << "  sigma_eps2 = " << format_double(corrected.sigma_eps2_hat) << "  (se "
     << se_of(corrected, p + 3) << ")"
     << (corrected.clamped_variance ? "  [floored]" : "") << "\n";

  os << "lag weights at theta_hat:\n";
  const LagWeights w = beta_weights(corrected.theta_hat, ds.jmax);
  for (int j = 0; j < ds.jmax; ++j) {
    os << "  c(" << j << ") = " << format_double(w.weights[j]) << "\n";
  }

  os << "naive fit (measurement error ignored):\n";
  for (int k = 0; k < p + 2; ++k) {
    os << "  " << names[k] << " = " << format_double(naive.beta_hat[k]) << "\n";
  }
  os << "  theta = " << format_double(naive.theta_hat) << "\n";
  os << "  sigma_eps2 = " << format_double(naive.sigma_eps2_hat) << "\n";
}

}  // namespace midas

#include "sdpd/csv_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdpd/errors.hpp"

namespace sdpd {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return in;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    std::string field = line.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    // Trim surrounding blanks (and a trailing carriage return).
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back())))
      field.pop_back();
    std::string::size_type b = 0;
    while (b < field.size() && std::isspace(static_cast<unsigned char>(field[b])))
      ++b;
    fields.push_back(field.substr(b));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_double(const std::string& field, double& value) {
  if (field == "nan" || field == "NaN" || field == "NAN") {
    value = std::numeric_limits<double>::quiet_NaN();
    return true;
  }
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  return res.ec == std::errc() && res.ptr == end;
}

// Numeric grid, '#' comment lines skipped, blank lines ignored.
std::vector<std::vector<double>> read_grid(const std::string& path,
                                           std::string* header_line) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first_content = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> fields = split_fields(line);
    std::vector<double> row;
    row.reserve(fields.size());
    bool numeric = true;
    for (const std::string& f : fields) {
      double v;
      if (!parse_double(f, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first_content && header_line) {
        *header_line = line;
        first_content = false;
        continue;
      }
      throw DataError("'" + path + "': non-numeric row '" + line + "'");
    }
    first_content = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd grid_to_matrix(const std::vector<std::vector<double>>& rows,
                               const std::string& path) {
  if (rows.empty()) throw DataError("'" + path + "': no data rows");
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw DataError("'" + path + "': row " + std::to_string(r + 1) +
                      " has " + std::to_string(rows[r].size()) +
                      " fields, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
    }
  }
  return m;
}

void write_rows(std::ofstream& out, const Eigen::MatrixXd& m, int precision) {
  out << std::setprecision(precision);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

std::string format_value(double v, int precision) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

Normalization detect_normalization(const Eigen::MatrixXd& m) {
  constexpr double tol = 1e-9;
  bool l1 = true, l2 = true;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (std::abs(m.row(i).norm() - 1.0) > tol) l2 = false;
    if (std::abs(m.row(i).lpNorm<1>() - 1.0) > tol) l1 = false;
  }
  if (l2) return Normalization::l2_row;
  if (l1) return Normalization::l1_row;
  return Normalization::none;
}

}  // namespace

std::string to_string(LocationFlag f) {
  switch (f) {
    case LocationFlag::ok:
      return "ok";
    case LocationFlag::unidentified:
      return "unidentified";
    case LocationFlag::no_real_root:
      return "no_real_root";
    case LocationFlag::degenerate_variance:
      return "degenerate_variance";
  }
  return "unknown";
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      int precision) {
  std::ofstream out = open_out(path);
  write_rows(out, m, precision);
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  return grid_to_matrix(read_grid(path, nullptr), path);
}

void write_weights_csv(const std::string& path, const SpatialWeightMatrix& w) {
  write_matrix_csv(path, w.entries);
}

SpatialWeightMatrix read_weights_csv(const std::string& path) {
  Eigen::MatrixXd m = read_matrix_csv(path);
  if (m.rows() != m.cols()) {
    throw DataError("'" + path + "': weight matrix must be square, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (std::abs(m(i, i)) > 1e-12) {
      throw DataError("'" + path + "': diagonal entry " +
                      std::to_string(i + 1) + " must be zero");
    }
  }
  SpatialWeightMatrix w{std::move(m), Normalization::none};
  w.normalization = detect_normalization(w.entries);
  validate_spatial_weights(w);
  return w;
}

void write_panel_csv(const std::string& path, const PanelSeries& y,
                     bool header) {
  std::ofstream out = open_out(path);
  if (header) {
    for (Eigen::Index j = 0; j < y.p(); ++j) {
      if (j) out << ',';
      out << "loc_" << (j + 1);
    }
    out << '\n';
  }
  write_rows(out, y.values, 17);
}

PanelSeries read_panel_csv(const std::string& path) {
  std::string header;
  const auto rows = read_grid(path, &header);
  PanelSeries y{grid_to_matrix(rows, path)};
  if (!y.values.allFinite()) {
    throw DataError("'" + path + "': panel contains non-finite values");
  }
  return y;
}

void write_transition_csv(const std::string& path, const TransitionMatrix& a) {
  std::ofstream out = open_out(path);
  out << "# provenance: " << to_string(a.provenance) << '\n';
  write_rows(out, a.entries, 17);
}

TransitionMatrix read_transition_csv(const std::string& path) {
  // Provenance comments are informational; a reloaded matrix is tagged as-is.
  std::ifstream in = open_in(path);
  std::string line;
  TransitionProvenance prov = TransitionProvenance::true_model;
  while (std::getline(in, line)) {
    if (line.rfind("# provenance: ", 0) == 0) {
      const std::string tag = line.substr(14);
      if (tag == "sdpd_known_w") prov = TransitionProvenance::sdpd_known_w;
      if (tag == "sdpd_estimated_w")
        prov = TransitionProvenance::sdpd_estimated_w;
      if (tag == "var_yule_walker")
        prov = TransitionProvenance::var_yule_walker;
      break;
    }
    if (!line.empty() && line[0] != '#') break;
  }
  return TransitionMatrix{read_matrix_csv(path), prov};
}

void write_result_csv(const std::string& path, const EstimationResult& r) {
  std::ofstream out = open_out(path);
  out << "i,lambda0_hat,lambda1_hat,root1,root2,res1,res2,flag\n";
  for (Eigen::Index i = 0; i < r.p(); ++i) {
    const LocationDiagnostics& d = r.locations[i];
    out << (i + 1) << ',' << format_value(r.lambda0_hat(i), 17) << ','
        << format_value(r.lambda1_hat(i), 17) << ','
        << format_value(d.root1, 17) << ',' << format_value(d.root2, 17)
        << ',' << format_value(d.residual1, 17) << ','
        << format_value(d.residual2, 17) << ',' << to_string(d.flag) << '\n';
  }
}

void write_result_json(const std::string& path, const EstimationResult& r) {
  nlohmann::json j;
  j["p"] = r.p();
  j["n_degenerate"] = r.n_degenerate();
  j["lambda0_hat"] = std::vector<double>(
      r.lambda0_hat.data(), r.lambda0_hat.data() + r.lambda0_hat.size());
  j["lambda1_hat"] = std::vector<double>(
      r.lambda1_hat.data(), r.lambda1_hat.data() + r.lambda1_hat.size());
  nlohmann::json locs = nlohmann::json::array();
  for (Eigen::Index i = 0; i < r.p(); ++i) {
    const LocationDiagnostics& d = r.locations[i];
    nlohmann::json loc;
    loc["i"] = i + 1;
    loc["flag"] = to_string(d.flag);
    loc["lambda0"] = r.lambda0_hat(i);
    loc["lambda1"] = r.lambda1_hat(i);
    loc["roots"] = {d.root1, d.root2};
    loc["residual_sq"] = {d.residual1, d.residual2};
    loc["discriminant"] = d.discriminant;
    loc["vertex"] = d.vertex;
    loc["selected_root"] = d.selected;
    locs.push_back(std::move(loc));
  }
  j["locations"] = std::move(locs);
  std::ofstream out = open_out(path);
  // NaN serializes as null, matching the CSV's "nan" markers.
  out << j.dump(2) << '\n';
}

void write_profile_csv(const std::string& path, const CorrelationProfile& prof,
                       Eigen::Index location) {
  std::ofstream out = open_out(path);
  out << "# location: " << (location + 1) << '\n';
  out << "# stationary_points:";
  for (double s : prof.stationary_points) out << ' ' << format_value(s, 17);
  out << '\n';
  out << "# selected: " << format_value(prof.selected_lambda0, 17) << ' '
      << format_value(prof.selected_lambda1, 17) << " ("
      << to_string(prof.flag) << ")\n";
  out << "lambda0,lambda1\n";
  out << std::setprecision(17);
  for (const ProfilePoint& pt : prof.points) {
    out << pt.lambda0 << ',' << format_value(pt.lambda1, 17) << '\n';
  }
}

void write_covariances_csv(const std::string& path,
                           const LagCovariancePair& cov) {
  std::ofstream out = open_out(path);
  out << "# source: "
      << (cov.source == CovSource::sample ? "sample" : "population") << '\n';
  out << "# sigma0\n";
  write_rows(out, cov.sigma0, 17);
  out << "# sigma1\n";
  write_rows(out, cov.sigma1, 17);
}

void write_summary_csv(const std::string& path, const McSummary& s) {
  std::ofstream out = open_out(path);
  out << "metric,mean,sd,median,n_ok,n_fail\n";
  for (const McMetricSummary& m : s.metrics) {
    out << m.name << ',' << format_value(m.mean, 6) << ','
        << format_value(m.sd, 6) << ',' << format_value(m.median, 6) << ','
        << m.n_ok << ',' << m.n_fail << '\n';
  }
  out << "wall_seconds," << format_value(s.wall_seconds, 6) << ",,,,\n";
}

void write_raw_csv(const std::string& path, const McSummary& s) {
  std::ofstream out = open_out(path);
  out << "rep,seed";
  for (const std::string& name : s.metric_names) out << ',' << name;
  out << ",degenerate_known_w,degenerate_estimated_w,notes\n";
  for (const McReplication& r : s.raw) {
    out << r.rep << ',' << r.seed;
    for (const std::string& name : s.metric_names) {
      const auto it = r.values.find(name);
      out << ','
          << format_value(
                 it == r.values.end()
                     ? std::numeric_limits<double>::quiet_NaN()
                     : it->second,
                 17);
    }
    out << ',' << r.degenerate_known_w << ',' << r.degenerate_estimated_w
        << ',' << r.notes << '\n';
  }
}

}  // namespace sdpd

#pragma once

/**
 * @file report.hpp
 * @brief The structured analysis report: assembly, serialization, parsing
 *        and the flat CSV export of the mutual information matrix.
 *
 * Reports are JSON documents with a fixed key order. Every floating-point
 * value is rounded to 12 significant digits before it is stored, so equal
 * inputs give byte-identical files.
 */

#include <Eigen/Dense>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "orbent/configurations.hpp"
#include "orbent/entropy.hpp"
#include "orbent/error.hpp"
#include "orbent/fiedler.hpp"

namespace orbent {

using ojson = nlohmann::ordered_json;

inline constexpr int kReportFormatVersion = 1;

/// Value printed with 12 significant digits; negative zero prints as 0.
inline std::string format_number(double x) {
  if (x == 0.0) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// @p x rounded to 12 significant digits.
inline double round_significant(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

/// Default orbital labels "1".."n".
inline std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(std::to_string(i));
  return out;
}

struct EntropyReport {
  // Input and run parameters.
  std::string input;
  int n_orb = 0;
  int n_elec = 0;
  int ms2 = 0;
  int isym = 1;
  bool symmetry_filter = false;
  std::size_t dimension = 0;
  int n_roots = 1;
  int root = 0;
  double tolerance = 1e-8;
  double weight_cutoff = 0.01;
  Thresholds thresholds;

  // Solver outcome.
  bool converged = false;
  int iterations = 0;
  std::vector<double> energies;
  std::vector<double> residual_norms;
  int degeneracy = 1;  // roots within the degeneracy window of the analyzed one
  double s_squared = 0.0;

  // Entanglement analysis of the selected root.
  std::vector<std::string> labels;
  Eigen::VectorXd s;
  Eigen::MatrixXd s2;
  Eigen::MatrixXd mi;
  Classification classification;
  FiedlerOrdering fiedler;
  std::vector<ConfigurationEntry> configurations;
};

inline constexpr double kDegeneracyWindow = 1e-6;

namespace detail {

inline ojson number_array(const Eigen::VectorXd& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(round_significant(v(i)));
  return out;
}

inline ojson number_array(const std::vector<double>& v) {
  ojson out = ojson::array();
  for (double x : v) out.push_back(round_significant(x));
  return out;
}

inline ojson number_matrix(const Eigen::MatrixXd& m) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(number_array(Eigen::VectorXd(m.row(i).transpose())));
  return out;
}

}  // namespace detail

/// Number of roots lying within kDegeneracyWindow of root @p root.
inline int count_degenerate(const std::vector<double>& energies, int root) {
  int count = 0;
  for (double e : energies)
    if (std::abs(e - energies[static_cast<std::size_t>(root)]) <= kDegeneracyWindow) ++count;
  return count;
}

inline ojson to_json(const EntropyReport& r) {
  ojson doc;
  doc["format"] = "orbent-report";
  doc["version"] = kReportFormatVersion;
  doc["status"] = r.converged ? "ok" : "not_converged";

  ojson meta;
  meta["input"] = r.input;
  meta["n_orb"] = r.n_orb;
  meta["n_elec"] = r.n_elec;
  meta["ms2"] = r.ms2;
  meta["isym"] = r.isym;
  meta["symmetry_filter"] = r.symmetry_filter;
  meta["dimension"] = r.dimension;
  meta["n_roots"] = r.n_roots;
  meta["root"] = r.root;
  meta["tolerance"] = round_significant(r.tolerance);
  meta["converged"] = r.converged;
  meta["iterations"] = r.iterations;
  meta["energies"] = detail::number_array(r.energies);
  meta["residual_norms"] = detail::number_array(r.residual_norms);
  meta["energy"] = r.energies.empty() ? 0.0 : round_significant(r.energies[static_cast<std::size_t>(r.root)]);
  meta["degeneracy"] = r.degeneracy;
  meta["degenerate"] = r.degeneracy > 1;
  meta["degeneracy_window"] = kDegeneracyWindow;
  meta["s_squared"] = round_significant(r.s_squared);
  meta["log_base"] = "e";
  meta["units"] = "nats";
  meta["mutual_information"] = "s_i + s_j - s_ij";
  meta["mutual_information_prefactor"] = 1;
  meta["local_state_order"] = "0,a,b,2";
  meta["fiedler_degenerate"] = r.fiedler.degenerate;
  meta["weight_cutoff"] = round_significant(r.weight_cutoff);
  meta["thresholds"] = {{"I_large", r.thresholds.mi_large},
                        {"I_moderate", r.thresholds.mi_moderate},
                        {"I_small", r.thresholds.mi_small},
                        {"s_large", r.thresholds.entropy_large},
                        {"s_moderate", r.thresholds.entropy_moderate}};
  doc["metadata"] = meta;

  doc["labels"] = r.labels;
  doc["s"] = detail::number_array(r.s);
  doc["S2"] = detail::number_matrix(r.s2);
  doc["I"] = detail::number_matrix(r.mi);

  ojson class_s = ojson::array();
  for (auto c : r.classification.orbitals) class_s.push_back(to_string(c));
  doc["class_s"] = class_s;
  ojson class_i = ojson::array();
  const int n = r.n_orb;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      class_i.push_back({{"i", i + 1}, {"j", j + 1}, {"class", to_string(r.classification.pair(i, j, n))}});
  doc["class_I"] = class_i;
  ojson hints = ojson::array();
  for (const auto& h : r.classification.hints)
    hints.push_back({{"i", h.i + 1}, {"j", h.j + 1}, {"regime", h.regime}});
  doc["regime_hints"] = hints;

  ojson order = ojson::array();
  for (int k : r.fiedler.order) order.push_back(k + 1);
  doc["fiedler_order"] = order;

  ojson configs = ojson::array();
  for (const auto& c : r.configurations)
    configs.push_back({{"occupation", c.occupation},
                       {"coefficient", round_significant(c.coefficient)},
                       {"weight", round_significant(c.weight)}});
  doc["leading_configurations"] = configs;
  return doc;
}

inline std::string render_report(const EntropyReport& r) { return to_json(r).dump(2) + "\n"; }

/// Parts of a report needed to compare two analyses.
struct ReportSummary {
  std::string status;
  std::vector<std::string> labels;
  Eigen::VectorXd s;
  Eigen::MatrixXd s2;
  Eigen::MatrixXd mi;
  std::vector<std::string> class_s;
  std::vector<std::vector<std::string>> class_i;  // n × n, empty on the diagonal
};

/**
 * @brief Read back a report document.
 * @throws FormatError when the text is not a well-formed report.
 */
inline ReportSummary parse_report(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "orbent-report")
      throw FormatError("document is not an orbent report");
    ReportSummary out;
    out.status = doc.at("status").get<std::string>();
    out.labels = doc.at("labels").get<std::vector<std::string>>();
    const auto n = static_cast<Eigen::Index>(out.labels.size());
    const auto s = doc.at("s").get<std::vector<double>>();
    const auto s2 = doc.at("S2").get<std::vector<std::vector<double>>>();
    const auto mi = doc.at("I").get<std::vector<std::vector<double>>>();
    out.class_s = doc.at("class_s").get<std::vector<std::string>>();
    if (static_cast<Eigen::Index>(s.size()) != n || static_cast<Eigen::Index>(s2.size()) != n ||
        static_cast<Eigen::Index>(mi.size()) != n || static_cast<Eigen::Index>(out.class_s.size()) != n)
      throw FormatError("report arrays disagree with the label count");
    out.s = Eigen::Map<const Eigen::VectorXd>(s.data(), n);
    out.s2.resize(n, n);
    out.mi.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (static_cast<Eigen::Index>(s2[static_cast<std::size_t>(i)].size()) != n ||
          static_cast<Eigen::Index>(mi[static_cast<std::size_t>(i)].size()) != n)
        throw FormatError("report matrix rows have the wrong length");
      for (Eigen::Index j = 0; j < n; ++j) {
        out.s2(i, j) = s2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        out.mi(i, j) = mi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
    out.class_i.assign(static_cast<std::size_t>(n), std::vector<std::string>(static_cast<std::size_t>(n)));
    for (const auto& entry : doc.at("class_I")) {
      const int i = entry.at("i").get<int>() - 1, j = entry.at("j").get<int>() - 1;
      if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw FormatError("class_I index out of range");
      const auto c = entry.at("class").get<std::string>();
      out.class_i[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c;
      out.class_i[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = c;
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
}

/// The mutual information matrix as comma-separated rows.
inline std::string render_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_number(m(i, j));
    }
    out += '\n';
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path);
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("error while writing " + path);
}

}  // namespace orbent

#pragma once

/**
 * @file pipeline.hpp
 * @brief End-to-end drivers behind the command-line tool: integrals → CI
 *        root → entanglement report and artifacts, and report comparison.
 *
 * Both drivers return a process exit code and write diagnostics to the given
 * stream; they never throw for bad input.
 */

#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "orbent/configurations.hpp"
#include "orbent/diff.hpp"
#include "orbent/entropy.hpp"
#include "orbent/error.hpp"
#include "orbent/fiedler.hpp"
#include "orbent/heatmap.hpp"
#include "orbent/integrals.hpp"
#include "orbent/report.hpp"
#include "orbent/solver.hpp"
#include "orbent/spin.hpp"

namespace orbent {

enum ExitCode : int {
  kExitOk = 0,
  kExitParseError = 2,
  kExitNotConverged = 3,
  kExitIoError = 4,
};

inline constexpr const char* kReportFile = "report.txt";
inline constexpr const char* kCsvFile = "mutual_information.csv";
inline constexpr const char* kHeatmapFile = "heatmap.svg";
inline constexpr const char* kDiffFile = "diff.txt";

struct RunConfig {
  std::string input;
  std::optional<int> n_roots;  // default: 3, capped at the basis dimension
  int root = 0;
  double tolerance = 1e-8;
  int max_iterations = 200;
  bool use_symmetry = false;  // restrict the basis to the ISYM irrep
  std::optional<std::string> labels_path;
  std::vector<std::string> labels;  // used when no label file is given
  std::string out_dir = ".";
  bool write_report = true;
  bool write_csv = true;
  bool write_svg = true;
  double weight_cutoff = 0.01;
  Thresholds thresholds;
  std::vector<std::string> heatmap_subset;  // labels to draw; empty draws all
};

inline constexpr int kDefaultRoots = 3;

/// One label per line; trailing blank lines are ignored.
inline std::vector<std::string> parse_labels(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(detail::trim(line));
  while (!out.empty() && out.back().empty()) out.pop_back();
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (out[k].empty()) throw FormatError("label line " + std::to_string(k + 1) + " is empty");
    for (std::size_t m = 0; m < k; ++m)
      if (out[m] == out[k]) throw FormatError("duplicate orbital label '" + out[k] + "'");
  }
  return out;
}

namespace detail {

inline void validate(const RunConfig& c) {
  if (c.n_roots && *c.n_roots < 1) throw FormatError("--roots must be at least 1");
  if (c.root < 0) throw FormatError("--root must be non-negative");
  if (!(c.tolerance > 0.0)) throw FormatError("--tol must be positive");
  if (c.max_iterations < 1) throw FormatError("--max-iter must be at least 1");
  if (!(c.weight_cutoff > 0.0 && c.weight_cutoff <= 1.0)) throw FormatError("--cutoff must lie in (0, 1]");
  if (c.n_roots && c.root >= *c.n_roots) throw FormatError("--root must be smaller than --roots");
}

}  // namespace detail

/**
 * @brief Solve for the lowest CI roots of an FCIDUMP, analyze one root and
 *        write report.txt, mutual_information.csv and heatmap.svg.
 *
 * Exit codes: 0 success; 2 malformed input or options; 3 Davidson did not
 * converge (only report.txt is written, with status "not_converged");
 * 4 file-system failure (nothing is written when the input cannot be read).
 *
 * @param report_out Receives the assembled report when non-null.
 */
inline int run_analysis(const RunConfig& config, std::ostream& err, EntropyReport* report_out = nullptr) {
  namespace fs = std::filesystem;
  try {
    detail::validate(config);
    const std::string text = read_text_file(config.input);
    const IntegralSet ints = parse_fcidump(text);
    const int n = ints.n_orb();

    std::vector<std::string> labels = config.labels;
    if (config.labels_path) labels = parse_labels(read_text_file(*config.labels_path));
    if (labels.empty()) labels = default_labels(n);
    if (static_cast<int>(labels.size()) != n)
      throw FormatError("label count " + std::to_string(labels.size()) + " differs from NORB " +
                        std::to_string(n));

    std::vector<int> subset;
    for (const auto& name : config.heatmap_subset) {
      const auto it = std::find(labels.begin(), labels.end(), name);
      if (it == labels.end()) throw FormatError("heatmap subset names unknown orbital '" + name + "'");
      subset.push_back(static_cast<int>(it - labels.begin()));
    }

    auto basis = config.use_symmetry
                     ? std::make_shared<const DeterminantBasis>(n, ints.n_alpha(), ints.n_beta(), ints.orbsym(),
                                                                ints.isym())
                     : std::make_shared<const DeterminantBasis>(n, ints.n_alpha(), ints.n_beta());
    if (basis->size() == 0) throw FormatError("no determinants of the requested symmetry");
    const int dim = static_cast<int>(std::min<std::size_t>(basis->size(), 1 << 30));
    const int n_roots = std::min(config.n_roots.value_or(kDefaultRoots), dim);
    if (config.root >= n_roots)
      throw FormatError("--root " + std::to_string(config.root) + " exceeds the " + std::to_string(n_roots) +
                        " available roots");

    DavidsonOptions opts;
    opts.tolerance = config.tolerance;
    opts.max_iterations = config.max_iterations;
    const Hamiltonian ham(ints, basis);
    const SpectrumResult spectrum = solve_lowest(ham, n_roots, opts);
    const CIVector& psi = spectrum.vectors[static_cast<std::size_t>(config.root)];

    EntropyReport r;
    r.input = config.input;
    r.n_orb = n;
    r.n_elec = ints.n_elec();
    r.ms2 = ints.ms2();
    r.isym = ints.isym();
    r.symmetry_filter = config.use_symmetry;
    r.dimension = basis->size();
    r.n_roots = n_roots;
    r.root = config.root;
    r.tolerance = config.tolerance;
    r.weight_cutoff = config.weight_cutoff;
    r.thresholds = config.thresholds;
    r.converged = spectrum.converged;
    r.iterations = spectrum.iterations;
    r.energies = spectrum.eigenvalues;
    r.residual_norms = spectrum.residual_norms;
    r.degeneracy = count_degenerate(r.energies, r.root);
    r.s_squared = s_squared(psi);
    r.labels = labels;
    const auto entropies = orbital_entropies(psi);
    r.s = entropies.s;
    r.s2 = entropies.s2;
    r.mi = entropies.mi;
    r.classification = classify(r.s, r.mi, r.thresholds);
    r.fiedler = fiedler_order(r.mi);
    r.configurations = leading_configurations(psi, r.weight_cutoff);
    if (report_out) *report_out = r;

    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + config.out_dir + ": " + ec.message());
    const fs::path dir(config.out_dir);

    if (!r.converged) {
      write_text_file((dir / kReportFile).string(), render_report(r));
      err << "error: Davidson did not converge in " << r.iterations << " iterations; partial report written to "
          << (dir / kReportFile).string() << "\n";
      return kExitNotConverged;
    }

    // The CSV and heatmap are rendered from the same rounded values the
    // report stores, so they can be regenerated from it exactly.
    Eigen::MatrixXd rounded = r.mi.unaryExpr([](double x) { return round_significant(x); });
    if (config.write_report) write_text_file((dir / kReportFile).string(), render_report(r));
    if (config.write_csv) write_text_file((dir / kCsvFile).string(), render_csv(rounded));
    if (config.write_svg) {
      if (subset.empty()) {
        export_heatmap(rounded, labels, (dir / kHeatmapFile).string());
      } else {
        const auto m = static_cast<Eigen::Index>(subset.size());
        Eigen::MatrixXd sub(m, m);
        std::vector<std::string> sub_labels;
        for (Eigen::Index a = 0; a < m; ++a) {
          sub_labels.push_back(labels[static_cast<std::size_t>(subset[static_cast<std::size_t>(a)])]);
          for (Eigen::Index b = 0; b < m; ++b)
            sub(a, b) = rounded(subset[static_cast<std::size_t>(a)], subset[static_cast<std::size_t>(b)]);
        }
        export_heatmap(sub, sub_labels, (dir / kHeatmapFile).string());
      }
    }
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
}

struct DiffConfig {
  std::string report_a;
  std::string report_b;
  std::optional<std::string> map_path;  // default: match orbitals by label
  std::string out_dir = ".";
};

/**
 * @brief Compare two reports and write diff.txt.
 *
 * Exit codes as for run_analysis: 2 for malformed reports or map files,
 * 4 for file-system failures.
 */
inline int run_diff(const DiffConfig& config, std::ostream& err, ReportDiff* diff_out = nullptr) {
  namespace fs = std::filesystem;
  try {
    const auto a = parse_report(read_text_file(config.report_a));
    const auto b = parse_report(read_text_file(config.report_b));
    const OrbitalMap map = config.map_path ? parse_orbital_map(read_text_file(*config.map_path), a.labels, b.labels)
                                           : match_by_label(a.labels, b.labels);
    const auto d = diff_reports(a, b, map);
    if (diff_out) *diff_out = d;
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + config.out_dir + ": " + ec.message());
    write_text_file((fs::path(config.out_dir) / kDiffFile).string(), render_diff(d));
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
}

}  // namespace orbent

// orbent — orbital entanglement analysis of small CI problems.
//
//   orbent analyze <fcidump> [--roots N] [--root K] [--tol X] [--sym]
//                  [--labels file] [--cutoff W] [--out dir] [--no-svg]
//   orbent diff <reportA> <reportB> [--map file] [--out dir]

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "orbent/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Orbital entanglement analysis of full-CI ground states"};
  app.require_subcommand(1);

  orbent::RunConfig run;
  std::string labels_path;
  int n_roots = 0;
  auto* analyze = app.add_subcommand("analyze", "Solve an FCIDUMP and write the entanglement report");
  analyze->add_option("fcidump", run.input, "Integral file")->required();
  analyze->add_option("--roots", n_roots, "Number of lowest roots to solve for (default 3, capped at the dimension)");
  analyze->add_option("--root", run.root, "Root to analyze, 0 = lowest")->capture_default_str();
  analyze->add_option("--tol", run.tolerance, "Davidson residual tolerance")->capture_default_str();
  analyze->add_option("--max-iter", run.max_iterations, "Davidson iteration limit")->capture_default_str();
  analyze->add_flag("--sym", run.use_symmetry, "Restrict the basis to the ISYM irrep of the file");
  analyze->add_option("--labels", labels_path, "Orbital label file, one label per line");
  analyze->add_option("--cutoff", run.weight_cutoff, "Weight cutoff for the leading configurations")
      ->capture_default_str();
  analyze->add_option("--out", run.out_dir, "Output directory")->capture_default_str();
  bool no_svg = false;
  analyze->add_flag("--no-svg", no_svg, "Skip the heatmap");
  analyze->add_option("--heatmap-subset", run.heatmap_subset, "Draw only these labelled orbitals in the heatmap")
      ->delimiter(',');
  analyze->add_option("--i-large", run.thresholds.mi_large, "Lower edge of the large I bin")->capture_default_str();
  analyze->add_option("--i-moderate", run.thresholds.mi_moderate, "Lower edge of the moderate I bin")
      ->capture_default_str();
  analyze->add_option("--i-small", run.thresholds.mi_small, "Lower edge of the small I bin")->capture_default_str();
  analyze->add_option("--s-large", run.thresholds.entropy_large, "s above this is large")->capture_default_str();
  analyze->add_option("--s-moderate", run.thresholds.entropy_moderate, "s from this up is moderate")
      ->capture_default_str();

  orbent::DiffConfig diff;
  std::string map_path;
  auto* compare = app.add_subcommand("diff", "Compare two reports");
  compare->add_option("reportA", diff.report_a, "Reference report")->required();
  compare->add_option("reportB", diff.report_b, "Report to compare against A")->required();
  compare->add_option("--map", map_path, "Orbital map file, lines 'labelA = labelB'");
  compare->add_option("--out", diff.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return orbent::kExitParseError;
  }

  namespace fs = std::filesystem;
  if (*analyze) {
    if (analyze->count("--roots")) run.n_roots = n_roots;
    if (!labels_path.empty()) run.labels_path = labels_path;
    run.write_svg = !no_svg;
    orbent::EntropyReport report;
    const int code = orbent::run_analysis(run, std::cerr, &report);
    if (code == orbent::kExitOk) {
      std::cout << "E(root " << report.root << ") = " << orbent::format_number(report.energies[report.root])
                << "  dimension " << report.dimension << "  <S^2> = " << orbent::format_number(report.s_squared)
                << "\n"
                << "wrote " << (fs::path(run.out_dir) / orbent::kReportFile).string() << "\n";
    }
    return code;
  }
  if (!map_path.empty()) diff.map_path = map_path;
  orbent::ReportDiff result;
  const int code = orbent::run_diff(diff, std::cerr, &result);
  if (code == orbent::kExitOk)
    std::cout << result.orbitals.size() << " mapped orbitals, " << result.pairs.size() << " pairs\n"
              << "wrote " << (fs::path(diff.out_dir) / orbent::kDiffFile).string() << "\n";
  return code;
}

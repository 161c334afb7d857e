// Command-line front end: dist, sweep, index and abinitio subcommands.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pentapod/pentapod.hpp"

namespace {

using namespace pentapod;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitNoMinimizer = 3;

struct Common {
  std::uint64_t seed = SolveConfig{}.seed;
  int starts = SolveConfig{}.multistart_count;
  int cross_starts = PipelineConfig{}.cross_check_starts;
  unsigned threads = 0;
  bool no_cross_check = false;
  bool verbose = false;
  std::string abinitio_dir = AbInitioStore::default_directory();
  std::string cases;
  std::string planar = "auto";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Random seed (fixed seed gives identical output)");
  cmd->add_option("--starts", c.starts, "Multistart seeds for the cases solved by local search")->check(CLI::PositiveNumber);
  cmd->add_option("--cross-starts", c.cross_starts, "Multistart seeds for the homotopy cross-check")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)");
  cmd->add_flag("--no-cross-check", c.no_cross_check, "Skip the multistart cross-check of homotopy cases");
  cmd->add_option("--abinitio-dir", c.abinitio_dir, "Directory of precomputed ab-initio data");
  cmd->add_option("--cases", c.cases, "Comma-separated case list, e.g. 0,1,3b (default: all)");
  cmd->add_option("--planar", c.planar, "Planar formulation: auto, on or off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  cmd->add_flag("-v,--verbose", c.verbose, "Print solver diagnostics to stderr");
}

std::vector<CaseId> parse_cases(const std::string& list) {
  if (list.empty()) return {kAllCases.begin(), kAllCases.end()};
  std::vector<CaseId> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto c = parse_case(item);
    if (!c) throw DesignFileError("unknown case \"" + item + "\"");
    if (std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(*c);
  }
  // Report in exclusion-chain order regardless of the order given.
  std::sort(out.begin(), out.end(), [](CaseId a, CaseId b) { return index_of(a) < index_of(b); });
  return out;
}

PipelineConfig pipeline_config(const Common& c) {
  PipelineConfig cfg;
  cfg.solve.seed = c.seed;
  cfg.solve.multistart_count = c.starts;
  cfg.solve.threads = c.threads;
  cfg.cross_check = !c.no_cross_check;
  cfg.cross_check_starts = c.cross_starts;
  cfg.cases = parse_cases(c.cases);
  cfg.planar = *parse_planar_mode(c.planar);
  if (c.verbose) cfg.log = [](std::string_view msg) { std::cerr << msg << '\n'; };
  return cfg;
}

std::string text_report(const GlobalResult& r) {
  std::ostringstream out;
  out << "architecture singularity distance D = " << format_number(r.distance) << '\n';
  out << "winning case: " << (r.winner ? std::string(to_string(*r.winner)) : std::string("none")) << '\n';
  out << "formulation: " << (r.planar ? "planar" : "spatial") << ", rescale factor "
      << format_number(r.rescale_factor) << "\n\n";
  out << "case\tD\tcombination\n";
  for (const auto& c : r.cases) {
    out << to_string(c.id) << '\t' << (c.found ? format_number(c.distance) : std::string("no finite minimizer found"));
    for (const auto& b : c.best_combinations) out << '\t' << to_string(b);
    out << '\n';
  }
  out << '\n' << coordinate_table(r);
  return out.str();
}

int run_dist(const std::string& file, const Common& common, bool rescale, const std::string& format,
             const std::string& out_path) {
  const DesignFile df = read_design_file(file);
  PipelineConfig cfg = pipeline_config(common);
  cfg.rescale = rescale;
  AbInitioStore store(common.abinitio_dir, cfg.solve);
  GlobalResult r = architecture_distance(df.design, cfg, store);
  if (df.vertex && r.planar) {
    r.conic_index = conic_index(std::span<const Point3, 5>(r.solved.base), *df.vertex * r.rescale_factor);
  }
  std::string text;
  if (format == "table") {
    text = text_report(r);
  } else {
    text = export_results(r, *parse_export_format(format));
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream(out_path) << text;
  }
  for (const auto& c : r.cases) {
    if (!c.found) {
      std::cerr << "case " << to_string(c.id) << ": no finite minimizer found\n";
    }
  }
  return r.missing_case() ? kExitNoMinimizer : kExitOk;
}

int run_sweep(const std::string& file, const Common& common, SweepConfig sc, const std::string& format,
              const std::string& out_path) {
  if (sc.n < 2 || !(sc.t_min < sc.t_max)) {
    std::cerr << "sweep: need n >= 2 and tmin < tmax\n";
    return kExitSchema;
  }
  const DesignFile df = read_design_file(file);
  if (df.vertex) sc.line.vertex = *df.vertex;
  const PipelineConfig cfg = pipeline_config(common);
  AbInitioStore store(common.abinitio_dir, cfg.solve);
  const auto rows = sweep(df.design, sc, cfg, store, [&](const SweepRow& row) {
    if (common.verbose) {
      std::cerr << "t = " << format_number(row.t) << "  D = " << format_number(row.result.distance) << '\n';
    }
  });
  const std::string text = export_results(rows, *parse_export_format(format));
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream(out_path) << text;
  }
  for (const auto& row : rows) {
    if (row.result.missing_case()) return kExitNoMinimizer;
  }
  return kExitOk;
}

int run_index(const std::string& file) {
  const DesignFile df = read_design_file(file);
  if (!df.vertex) {
    std::cerr << "index: design file has no pencil vertex \"B\"\n";
    return kExitSchema;
  }
  if (!df.design.planar() || std::abs(df.vertex->z()) >= kPlanarTolerance) {
    std::cerr << "index: conic index requires a planar base and vertex\n";
    return kExitSchema;
  }
  std::cout << format_number(conic_index(std::span<const Point3, 5>(df.design.base), *df.vertex)) << '\n';
  return kExitOk;
}

int run_abinitio(const std::string& name, const std::string& planar, const Common& common,
                 const std::string& out_path) {
  const auto c = parse_case(name);
  if (!c) {
    std::cerr << "abinitio: unknown case \"" << name << "\"\n";
    return kExitSchema;
  }
  SolveConfig cfg;
  cfg.seed = common.seed;
  cfg.threads = common.threads;
  const auto data = ab_initio(*c, planar == "on", cfg, [&](std::uint64_t done, std::uint64_t total) {
    if (common.verbose) std::cerr << "\rpaths " << done << " / " << total << std::flush;
  });
  if (common.verbose) {
    std::cerr << "\nvalid finite solutions: " << data.solutions.solutions.size() << " (" << data.solutions.backend
              << ", " << data.solutions.path_failures << " failed, " << data.solutions.at_infinity
              << " at infinity)\n";
  }
  if (out_path.empty()) {
    write_ab_initio(std::cout, data);
  } else {
    std::ofstream out(out_path);
    write_ab_initio(out, data);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Architecture singularity distance of linear pentapods"};
  app.require_subcommand(1);

  Common common;
  std::string file, format = "json", out_path;
  bool rescale = false;

  auto* dist = app.add_subcommand("dist", "Distance to the closest architecturally singular design");
  dist->add_option("design", file, "Design file (JSON)")->required();
  dist->add_flag("--rescale", rescale, "Scale the design so that the larger enclosing radius is 1");
  dist->add_option("--out", format, "Output format: json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  dist->add_option("-o,--output", out_path, "Write to this file instead of stdout");
  add_common(dist, common);

  SweepConfig sc;
  std::string sweep_format = "csv";
  bool no_rescale = false;
  auto* sw = app.add_subcommand("sweep", "Distance along the line of the moving base anchor M5");
  sw->add_option("design", file, "Template design file (JSON); B overrides the line vertex")->required();
  sw->add_option("--tmin", sc.t_min, "Start of the t interval");
  sw->add_option("--tmax", sc.t_max, "End of the t interval");
  sw->add_option("--n", sc.n, "Number of equidistant samples");
  sw->add_flag("--no-rescale", no_rescale, "Solve the sampled designs without rescaling");
  sw->add_option("--out", sweep_format, "Output format: csv or json")->check(CLI::IsMember({"csv", "json"}));
  sw->add_option("-o,--output", out_path, "Write to this file instead of stdout");
  add_common(sw, common);

  auto* idx = app.add_subcommand("index", "Conic index of a planar design with pencil vertex B");
  idx->add_option("design", file, "Design file (JSON) with \"B\"")->required();

  std::string case_name, ab_planar = "on";
  auto* ab = app.add_subcommand("abinitio", "Generic complex start solutions for a homotopy case");
  ab->add_option("case", case_name, "Case name, e.g. 3b")->required();
  ab->add_option("--planar", ab_planar, "Planar formulation: on or off")->check(CLI::IsMember({"on", "off"}));
  ab->add_option("--seed", common.seed, "Random seed");
  ab->add_option("--threads", common.threads, "Worker threads (0 = hardware concurrency)");
  ab->add_option("-o,--output", out_path, "Write to this file instead of stdout");
  ab->add_flag("-v,--verbose", common.verbose, "Report progress on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSchema;
  }

  try {
    if (*dist) return run_dist(file, common, rescale, format, out_path);
    if (*sw) {
      sc.rescale = !no_rescale;
      return run_sweep(file, common, sc, sweep_format, out_path);
    }
    if (*idx) return run_index(file);
    if (*ab) return run_abinitio(case_name, ab_planar, common, out_path);
  } catch (const DesignFileError& e) {
    std::cerr << e.what() << '\n';
    return kExitSchema;
  } catch (const GeometryError& e) {
    std::cerr << e.what() << '\n';
    return kExitSchema;
  }
  return kExitOk;
}

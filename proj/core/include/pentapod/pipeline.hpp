#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pentapod/cases.hpp"
#include "pentapod/geometry.hpp"
#include "pentapod/solvers.hpp"

namespace pentapod {

/// Which polynomial formulation is used: planar (no z unknowns) or spatial.
enum class PlanarMode { Auto, On, Off };

std::string_view to_string(PlanarMode m);
std::optional<PlanarMode> parse_planar_mode(std::string_view s);

struct PipelineConfig {
  SolveConfig solve;
  PlanarMode planar = PlanarMode::Auto;
  /// Scale the input so that max(rho1, rho2) = 1 before solving; reported
  /// distances are then in the rescaled unit.
  bool rescale = false;
  std::vector<CaseId> cases{kAllCases.begin(), kAllCases.end()};
  /// Run multistart next to the homotopy for the cases that have both.
  bool cross_check = true;
  /// Seeds used by the cross-check (the main multistart uses solve.multistart_count).
  int cross_check_starts = 64;
  /// Diagnostics sink (disagreements between backends, path statistics).
  std::function<void(std::string_view)> log;
};

/// Combinations whose distance is within this of the case minimum are ties.
inline constexpr double kTieTolerance = 1e-9;

struct CombinationResult {
  Combination combination{};
  bool found = false;
  double distance = std::numeric_limits<double>::infinity();
  SingularDesign singular;
  std::string backend;
  std::size_t stationary_points = 0;
  /// Infinity norm of the KKT residual at the minimizer (0 for closed forms).
  double kkt_residual = 0.0;
  /// Backend disagreement or failure message, empty when clean.
  std::string note;
};

struct CaseResult {
  CaseId id{};
  bool found = false;
  double distance = std::numeric_limits<double>::infinity();
  SingularDesign minimizer;
  /// Every combination attaining the minimum up to kTieTolerance.
  std::vector<Combination> best_combinations;
  std::vector<CombinationResult> combinations;
  std::vector<std::string> notes;
};

struct GlobalResult {
  PentapodDesign input;
  /// Design the cases were solved on (input times rescale_factor).
  PentapodDesign solved;
  double rescale_factor = 1.0;
  bool planar = false;
  std::vector<CaseResult> cases;
  std::optional<CaseId> winner;
  double distance = std::numeric_limits<double>::infinity();
  std::optional<double> conic_index;

  const CaseResult* find(CaseId c) const;
  /// True when some requested case produced no finite minimizer.
  bool missing_case() const;
};

/// Ab-initio start data per case and formulation, read from a directory of
/// precomputed files when present and computed (then cached in memory)
/// otherwise. Safe to share between threads.
class AbInitioStore {
 public:
  explicit AbInitioStore(std::string directory = default_directory(), SolveConfig cfg = {});

  const AbInitioData& get(CaseId c, bool planar);
  /// File name used inside the directory, e.g. "c3b_planar.txt".
  static std::string file_name(CaseId c, bool planar);
  static std::string default_directory();

 private:
  std::string directory_;
  SolveConfig cfg_;
  std::mutex mutex_;
  std::map<std::pair<int, bool>, std::unique_ptr<AbInitioData>> cache_;
};

/// Cases solved by parameter homotopy from ab-initio data.
bool uses_homotopy(CaseId c);

/// Minimum of one case over all its combinations on `design`.
CaseResult min_over_case(const PentapodDesign& design, CaseId c, bool planar, const PipelineConfig& cfg,
                         AbInitioStore& store);

/// Minimum over the requested cases.
GlobalResult architecture_distance(const PentapodDesign& design, const PipelineConfig& cfg, AbInitioStore& store);
GlobalResult architecture_distance(const PentapodDesign& design, const PipelineConfig& cfg = {});

struct SweepConfig {
  double t_min = -2.0 * std::numbers::sqrt2;
  double t_max = 2.0 * std::numbers::sqrt2;
  int n = 45;
  SweepLine line;
  /// Rescale every sampled design before solving.
  bool rescale = true;
};

struct SweepRow {
  double t = 0.0;
  Point3 m5 = Point3::Zero();
  GlobalResult result;
  double conic_index = 0.0;
};

/// Design of the sweep at parameter t: `base_template` with M5 moved along the line.
PentapodDesign sweep_design(const PentapodDesign& base_template, double t, const SweepLine& line = {});

/// Evaluates n equidistant samples of t in [t_min, t_max].
std::vector<SweepRow> sweep(const PentapodDesign& base_template, const SweepConfig& sweep_cfg,
                            const PipelineConfig& cfg, AbInitioStore& store,
                            const std::function<void(const SweepRow&)>& on_row = {});

// Export ----------------------------------------------------------------------------

enum class ExportFormat { Json, Csv };
std::optional<ExportFormat> parse_export_format(std::string_view s);

std::string export_results(const GlobalResult& result, ExportFormat format);
std::string export_results(const std::vector<SweepRow>& rows, ExportFormat format);

/// Coordinate table of the closest design of each case: one row per case with
/// the primed base and platform coordinates, "--" where an anchor is unchanged.
std::string coordinate_table(const GlobalResult& result);

/// Numbers with 10 significant digits.
std::string format_number(double v);

// Design files --------------------------------------------------------------------------

/// Schema or syntax error in a design file; the message carries line and column.
class DesignFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DesignFile {
  PentapodDesign design;
  std::optional<Point3> vertex;  // pencil vertex B
};

DesignFile parse_design(std::string_view text);
DesignFile read_design_file(const std::string& path);
/// Design file text for `d` (round-trips through parse_design).
std::string write_design(const PentapodDesign& d, const std::optional<Point3>& vertex = std::nullopt);

}  // namespace pentapod

#include "pentapod/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pentapod/parallel.hpp"

#ifndef PENTAPOD_DEFAULT_DATA_DIR
#define PENTAPOD_DEFAULT_DATA_DIR "data"
#endif

namespace pentapod {

std::string_view to_string(PlanarMode m) {
  switch (m) {
    case PlanarMode::Auto: return "auto";
    case PlanarMode::On: return "on";
    case PlanarMode::Off: return "off";
  }
  return "auto";
}

std::optional<PlanarMode> parse_planar_mode(std::string_view s) {
  if (s == "auto") return PlanarMode::Auto;
  if (s == "on") return PlanarMode::On;
  if (s == "off") return PlanarMode::Off;
  return std::nullopt;
}

const CaseResult* GlobalResult::find(CaseId c) const {
  for (const auto& r : cases) {
    if (r.id == c) return &r;
  }
  return nullptr;
}

bool GlobalResult::missing_case() const {
  return std::any_of(cases.begin(), cases.end(), [](const CaseResult& r) { return !r.found; });
}

// ---------------------------------------------------------------------------
// Ab-initio store

AbInitioStore::AbInitioStore(std::string directory, SolveConfig cfg)
    : directory_(std::move(directory)), cfg_(cfg) {}

std::string AbInitioStore::file_name(CaseId c, bool planar) {
  return "c" + std::string(to_string(c)) + (planar ? "_planar.txt" : "_spatial.txt");
}

std::string AbInitioStore::default_directory() {
  if (const char* env = std::getenv("PENTAPOD_DATA_DIR"); env && *env) return std::string(env) + "/abinitio";
  return std::string(PENTAPOD_DEFAULT_DATA_DIR) + "/abinitio";
}

const AbInitioData& AbInitioStore::get(CaseId c, bool planar) {
  std::lock_guard lock(mutex_);
  auto& slot = cache_[{index_of(c), planar}];
  if (slot) return *slot;
  const std::filesystem::path path = std::filesystem::path(directory_) / file_name(c, planar);
  if (std::ifstream in(path); in) {
    auto data = std::make_unique<AbInitioData>(read_ab_initio(in));
    if (data->id == c && data->planar == planar) {
      slot = std::move(data);
      return *slot;
    }
  }
  slot = std::make_unique<AbInitioData>(ab_initio(c, planar, cfg_));
  return *slot;
}

// ---------------------------------------------------------------------------
// Per-case solving

bool uses_homotopy(CaseId c) {
  return c == CaseId::C3a || c == CaseId::C5a || c == CaseId::C3b || c == CaseId::C7;
}

namespace {

CombinationResult from_solutions(const CaseProblem& problem, const SolutionSet& set) {
  CombinationResult r;
  r.combination = problem.combination();
  r.backend = set.backend;
  r.stationary_points = set.solutions.size();
  if (set.solutions.empty()) return r;
  const Solution& best = set.solutions.front();
  const Eigen::VectorXd x = best.point.real();
  r.found = true;
  r.distance = std::sqrt(std::max(best.objective, 0.0));
  r.singular = problem.embed(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  r.kkt_residual = best.residual;
  return r;
}

std::string describe(double a, double b) {
  std::ostringstream s;
  s << "homotopy " << format_number(a) << " vs multistart " << format_number(b);
  return s.str();
}

CombinationResult solve_combination(const PentapodDesign& design, CaseId c, const Combination& comb, bool planar,
                                     const PipelineConfig& cfg, AbInitioStore& store) {
  SolveConfig solve = cfg.solve;
  solve.threads = 1;  // parallelism lives at the combination level

  if (has_closed_form(c)) {
    const ClosedForm cf = closed_form_minimizer(c, design, comb);
    CombinationResult r;
    r.combination = comb;
    r.backend = "closed-form";
    r.stationary_points = 1;
    r.singular = cf.singular;
    if (c == CaseId::C0 || validity_filter(cf.singular)) {
      r.found = true;
      r.distance = cf.distance;
    } else {
      r.stationary_points = 0;
      r.note = "closed-form minimizer belongs to an earlier case";
    }
    return r;
  }

  const CaseProblem problem(c, comb, design, planar);
  if (!uses_homotopy(c)) return from_solutions(problem, multistart_minimize(problem, solve));

  CombinationResult r = from_solutions(problem, parameter_homotopy(problem, store.get(c, planar), solve));
  if (!cfg.cross_check) return r;
  SolveConfig ms = solve;
  ms.multistart_count = cfg.cross_check_starts;
  const CombinationResult check = from_solutions(problem, multistart_minimize(problem, ms));
  if (r.found && check.found && std::abs(r.distance - check.distance) > 1e-6) {
    r.note = describe(r.distance, check.distance);
  } else if (!r.found && check.found) {
    r.note = "homotopy found no real minimizer; multistart did";
  }
  if (check.found && (!r.found || check.distance < r.distance)) {
    const std::string note = r.note;
    r = check;
    r.note = note;
  }
  return r;
}

CaseResult assemble(CaseId c, std::vector<CombinationResult> combos) {
  CaseResult out;
  out.id = c;
  for (const auto& r : combos) {
    if (r.found && r.distance < out.distance) {
      out.found = true;
      out.distance = r.distance;
      out.minimizer = r.singular;
    }
    if (!r.note.empty()) out.notes.push_back(to_string(r.combination) + ": " + r.note);
  }
  if (out.found) {
    for (const auto& r : combos) {
      if (r.found && r.distance <= out.distance + kTieTolerance) out.best_combinations.push_back(r.combination);
    }
  } else {
    out.notes.emplace_back("no finite minimizer found");
  }
  out.combinations = std::move(combos);
  return out;
}

bool resolve_planar(const PentapodDesign& d, PlanarMode mode) {
  switch (mode) {
    case PlanarMode::On:
      if (!d.planar()) throw GeometryError("planar formulation requested for a non-planar design");
      return true;
    case PlanarMode::Off: return false;
    case PlanarMode::Auto: break;
  }
  return d.planar();
}

}  // namespace

CaseResult min_over_case(const PentapodDesign& design, CaseId c, bool planar, const PipelineConfig& cfg,
                         AbInitioStore& store) {
  const auto combos = enumerate_combinations(c);
  std::vector<CombinationResult> results(combos.size());
  parallel_for(combos.size(), cfg.solve.threads,
               [&](std::size_t i) { results[i] = solve_combination(design, c, combos[i], planar, cfg, store); });
  CaseResult out = assemble(c, std::move(results));
  if (cfg.log) {
    for (const auto& n : out.notes) cfg.log("case " + std::string(to_string(c)) + " " + n);
  }
  return out;
}

GlobalResult architecture_distance(const PentapodDesign& design, const PipelineConfig& cfg, AbInitioStore& store) {
  if (!design.finite()) throw GeometryError("design has non-finite coordinates");
  GlobalResult out;
  out.input = design;
  out.solved = design;
  if (cfg.rescale) {
    const Rescaled r = rescale(design);
    out.solved = r.design;
    out.rescale_factor = r.factor;
  }
  out.planar = resolve_planar(out.solved, cfg.planar);

  // One task per (case, combination); results are reduced in a fixed order.
  struct Task {
    CaseId c;
    Combination comb;
  };
  std::vector<Task> tasks;
  std::vector<std::size_t> first;
  for (CaseId c : cfg.cases) {
    first.push_back(tasks.size());
    for (const auto& comb : enumerate_combinations(c)) tasks.push_back({c, comb});
  }
  first.push_back(tasks.size());
  std::vector<CombinationResult> results(tasks.size());
  parallel_for(tasks.size(), cfg.solve.threads, [&](std::size_t i) {
    results[i] = solve_combination(out.solved, tasks[i].c, tasks[i].comb, out.planar, cfg, store);
  });

  for (std::size_t k = 0; k < cfg.cases.size(); ++k) {
    std::vector<CombinationResult> part(std::make_move_iterator(results.begin() + static_cast<std::ptrdiff_t>(first[k])),
                                        std::make_move_iterator(results.begin() + static_cast<std::ptrdiff_t>(first[k + 1])));
    CaseResult cr = assemble(cfg.cases[k], std::move(part));
    if (cfg.log) {
      for (const auto& n : cr.notes) cfg.log("case " + std::string(to_string(cr.id)) + " " + n);
    }
    if (cr.found && cr.distance < out.distance) {
      out.distance = cr.distance;
      out.winner = cr.id;
    }
    out.cases.push_back(std::move(cr));
  }
  return out;
}

GlobalResult architecture_distance(const PentapodDesign& design, const PipelineConfig& cfg) {
  AbInitioStore store(AbInitioStore::default_directory(), cfg.solve);
  return architecture_distance(design, cfg, store);
}

// ---------------------------------------------------------------------------
// Sweep

PentapodDesign sweep_design(const PentapodDesign& base_template, double t, const SweepLine& line) {
  PentapodDesign d = base_template;
  d.base[4] = sweep_point(t, line);
  return d;
}

std::vector<SweepRow> sweep(const PentapodDesign& base_template, const SweepConfig& sweep_cfg,
                            const PipelineConfig& cfg, AbInitioStore& store,
                            const std::function<void(const SweepRow&)>& on_row) {
  if (sweep_cfg.n < 2) throw std::invalid_argument("sweep needs at least two samples");
  if (!(sweep_cfg.t_min < sweep_cfg.t_max)) throw std::invalid_argument("sweep range must satisfy t_min < t_max");
  PipelineConfig local = cfg;
  local.rescale = sweep_cfg.rescale;
  std::vector<SweepRow> rows;
  for (int j = 0; j < sweep_cfg.n; ++j) {
    SweepRow row;
    // Both endpoints are hit exactly.
    row.t = j == sweep_cfg.n - 1
                ? sweep_cfg.t_max
                : sweep_cfg.t_min + (sweep_cfg.t_max - sweep_cfg.t_min) * j / (sweep_cfg.n - 1);
    const PentapodDesign d = sweep_design(base_template, row.t, sweep_cfg.line);
    row.m5 = d.base[4];
    row.result = architecture_distance(d, local, store);
    const Point3 vertex = sweep_cfg.line.vertex * row.result.rescale_factor;
    row.conic_index = conic_index(std::span<const Point3, 5>(row.result.solved.base), vertex);
    row.result.conic_index = row.conic_index;
    if (on_row) on_row(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pentapod

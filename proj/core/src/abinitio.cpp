#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "pentapod/parallel.hpp"
#include "pentapod/solvers.hpp"

namespace pentapod {

using cd = std::complex<double>;

namespace {

// Paths above this count are not tracked directly for spatial templates.
constexpr std::uint64_t kMaxDirectPaths = 60000;
constexpr double kComplexValidityTol = 1e-6;

cd random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, u(rng));
}

std::vector<cd> to_std(const VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

ComplexSystem bind_params(const RealSystem& parametric, const VectorXcd& params) {
  const auto p = to_std(params);
  return parametric.instantiate<cd>(std::span<const cd>(p));
}

bool nonsingular(const CompiledSystem<cd>& sys, const VectorXcd& x) {
  VectorXcd f;
  MatrixXcd j;
  sys.evaluate(x, f, j, static_cast<std::size_t>(x.size()));
  const Eigen::JacobiSVD<MatrixXcd> svd(j);
  const auto& s = svd.singularValues();
  return s[s.size() - 1] > 1e-10 * s[0];
}

bool close(const VectorXcd& a, const VectorXcd& b, double radius) {
  return (a - b).norm() <= radius * (1.0 + a.norm());
}

// Maps a planar unknown vector or data vector to the spatial layout by
// inserting zero z-coordinates after every (x, y) pair of anchors.
VectorXcd insert_z(const VectorXcd& v, std::size_t anchor_count) {
  std::vector<cd> out;
  Eigen::Index i = 0;
  for (std::size_t a = 0; a < anchor_count; ++a) {
    out.push_back(v[i++]);
    out.push_back(v[i++]);
    out.push_back(0.0);
  }
  for (; i < v.size(); ++i) out.push_back(v[i]);
  return Eigen::Map<VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

VectorXcd planar_data_to_spatial(const VectorXcd& p) {
  std::vector<cd> out;
  for (Eigen::Index j = 0; j < 5; ++j) {
    out.push_back(p[3 * j]);
    out.push_back(p[3 * j + 1]);
    out.push_back(0.0);
    out.push_back(p[3 * j + 2]);
  }
  return Eigen::Map<VectorXcd>(out.data(), 20);
}

std::size_t anchor_count(const CaseTemplate& t) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.free_count(); ++i) {
    if (t.variables[i].front() == 'x') ++n;
  }
  return n;
}

}  // namespace

VectorXcd generic_parameters(const CaseTemplate& t, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  VectorXcd p(static_cast<Eigen::Index>(t.data_count()));
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = cd(g(rng), g(rng));
  return p;
}

void complex_design(const CaseTemplate& t, const VectorXcd& unknowns, const VectorXcd& params,
                    std::array<Eigen::Vector3cd, 5>& base, std::array<cd, 5>& platform) {
  const auto u = to_std(unknowns);
  const auto p = to_std(params);
  template_design<cd>(t, u, p, base, platform);
}

SolutionSet finite_valid(const CaseTemplate& t, const VectorXcd& params, const std::vector<PathResult>& paths,
                         const SolveConfig& cfg) {
  const RealSystem& parametric = case_kkt(t.id, t.planar);
  const auto target = bind_params(parametric, params).compile();
  SolutionSet out;
  out.paths = paths.size();
  for (const auto& p : paths) {
    if (p.status == PathStatus::AtInfinity) {
      ++out.at_infinity;
      continue;
    }
    if (p.status == PathStatus::Failed) {
      ++out.path_failures;
      continue;
    }
    SolveConfig polish_cfg = cfg;
    polish_cfg.newton_tolerance = 1e-11;
    const auto pol = newton_polish(target, p.endpoint, polish_cfg);
    if (!pol.converged || !nonsingular(target, pol.point)) continue;
    if (std::any_of(out.solutions.begin(), out.solutions.end(),
                    [&](const Solution& s) { return close(s.point, pol.point, 1e-6); })) {
      continue;
    }
    std::array<Eigen::Vector3cd, 5> base;
    std::array<cd, 5> platform;
    complex_design(t, pol.point, params, base, platform);
    if (!validity_filter(t.id, base, platform, kComplexValidityTol)) continue;
    Solution s;
    s.point = pol.point;
    s.residual = pol.residual;
    s.kind = pol.point.imag().cwiseAbs().maxCoeff() < cfg.real_threshold ? RootKind::Real : RootKind::Complex;
    out.solutions.push_back(std::move(s));
  }
  return out;
}

AbInitioData ab_initio(CaseId c, bool planar, const SolveConfig& cfg,
                       const std::function<void(std::uint64_t, std::uint64_t)>& progress) {
  const CaseTemplate& t = case_template(c, planar);
  const RealSystem& parametric = case_kkt(t.id, t.planar);
  std::mt19937_64 rng(task_seed(cfg.seed, 0xab1 + static_cast<std::uint64_t>(index_of(c))));

  AbInitioData out;
  out.id = c;
  out.planar = planar;
  out.parameters = generic_parameters(t, rng());

  const ComplexSystem target = scale_coefficients(bind_params(parametric, out.parameters));
  const TotalDegreeHomotopy direct(target, random_unit(rng));

  if (planar || direct.path_count() <= kMaxDirectPaths) {
    const std::uint64_t n = direct.path_count();
    std::vector<PathResult> kept;
    std::mutex m;
    std::atomic<std::uint64_t> done{0};
    std::size_t failures = 0, infinite = 0;
    parallel_for(static_cast<std::size_t>(n), cfg.threads, [&](std::size_t k) {
      PathResult r = track_path(direct, direct.start_point(k), cfg);
      {
        std::lock_guard lock(m);
        if (r.status == PathStatus::Success) {
          kept.push_back(std::move(r));
        } else if (r.status == PathStatus::AtInfinity) {
          ++infinite;
        } else {
          ++failures;
        }
      }
      const auto finished = ++done;
      if (progress && (finished % 1000 == 0 || finished == n)) progress(finished, n);
    });
    // Completion order varies between runs; sort endpoints for determinism.
    std::sort(kept.begin(), kept.end(), [](const PathResult& a, const PathResult& b) {
      for (Eigen::Index i = 0; i < a.endpoint.size(); ++i) {
        if (a.endpoint[i].real() != b.endpoint[i].real()) return a.endpoint[i].real() < b.endpoint[i].real();
        if (a.endpoint[i].imag() != b.endpoint[i].imag()) return a.endpoint[i].imag() < b.endpoint[i].imag();
      }
      return false;
    });
    out.solutions = finite_valid(t, out.parameters, kept, cfg);
    out.solutions.backend = "total-degree";
    out.solutions.paths = n;
    out.solutions.path_failures = failures;
    out.solutions.at_infinity = infinite;
    return out;
  }

  // Planar solutions lifted out of the plane by a parameter homotopy.
  const AbInitioData flat = ab_initio(c, true, cfg, progress);
  const std::size_t anchors = anchor_count(t);
  const VectorXcd p_start = planar_data_to_spatial(flat.parameters);
  const ParameterHomotopy lift(parametric, p_start, out.parameters);
  std::vector<VectorXcd> starts;
  for (const auto& s : flat.solutions.solutions) starts.push_back(insert_z(s.point, anchors));
  const auto paths = track_paths(lift, starts, cfg);
  out.solutions = finite_valid(t, out.parameters, paths, cfg);
  out.solutions.backend = "planar-lift";
  return out;
}

SolutionSet parameter_homotopy(const CaseProblem& problem, const AbInitioData& start, const SolveConfig& cfg) {
  if (start.id != problem.id() || start.planar != problem.planar()) {
    throw std::invalid_argument("ab-initio data belong to a different case or planarity mode");
  }
  if (start.solutions.solutions.empty()) throw std::invalid_argument("parameter homotopy needs start solutions");
  const RealSystem& parametric = problem.parametric_kkt();
  VectorXcd target(static_cast<Eigen::Index>(problem.data().size()));
  for (std::size_t i = 0; i < problem.data().size(); ++i) target[static_cast<Eigen::Index>(i)] = problem.data()[i];
  const ParameterHomotopy h(parametric, start.parameters, target);
  const auto kkt = problem.kkt().compile();

  SolutionSet out;
  out.backend = "parameter-homotopy";
  std::vector<PathResult> paths(start.solutions.solutions.size());
  std::atomic<std::size_t> retries{0};
  parallel_for(paths.size(), cfg.threads, [&](std::size_t i) {
    const VectorXcd& x0 = start.solutions.solutions[i].point;
    paths[i] = track_path(h, x0, cfg);
    if (paths[i].status == PathStatus::Failed) {
      SolveConfig tight = cfg;
      tight.tracking_tolerance = cfg.tracking_tolerance * 1e-3;
      paths[i] = track_path(h, x0, tight);
      ++retries;
    }
  });
  out.paths = paths.size();
  out.retries = retries;

  for (const auto& p : paths) {
    if (p.status == PathStatus::AtInfinity) {
      ++out.at_infinity;
      continue;
    }
    if (p.status == PathStatus::Failed) {
      ++out.path_failures;
      continue;
    }
    if (p.endpoint.imag().cwiseAbs().maxCoeff() >= cfg.real_threshold * (1.0 + p.endpoint.norm())) continue;
    const auto pol = newton_polish(kkt, Eigen::VectorXd(p.endpoint.real()), cfg);
    if (!pol.converged) continue;
    const auto s = problem.embed(std::span<const double>(pol.point.data(), static_cast<std::size_t>(pol.point.size())));
    if (!validity_filter(s)) continue;
    if (std::any_of(out.solutions.begin(), out.solutions.end(), [&](const Solution& q) {
          return close(q.point, pol.point.cast<cd>(), cfg.dedup_radius);
        })) {
      continue;
    }
    Solution sol;
    sol.point = pol.point.cast<cd>();
    sol.residual = pol.residual;
    sol.kind = RootKind::Real;
    sol.objective = problem.objective(std::span<const double>(pol.point.data(), static_cast<std::size_t>(pol.point.size())));
    out.solutions.push_back(std::move(sol));
  }
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const Solution& a, const Solution& b) { return a.objective < b.objective; });
  return out;
}

}  // namespace pentapod

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "local_models.hpp"
#include "pentapod/parallel.hpp"
#include "pentapod/solvers.hpp"

namespace pentapod {

void estimate_multipliers(const CaseProblem& problem, Eigen::VectorXd& unknowns) {
  const auto& t = problem.tmpl();
  const auto n = static_cast<Eigen::Index>(t.unknown_count);
  const auto free = static_cast<Eigen::Index>(t.free_count());
  unknowns.conservativeResize(n);
  if (t.multiplier_count == 0) return;
  unknowns.tail(n - free).setZero();
  // The Lagrangian is linear in the multipliers: the stationarity rows are
  // grad f + J_c^T mu, and the multiplier columns of the Jacobian hold J_c^T.
  Eigen::VectorXd f;
  Eigen::MatrixXd j;
  problem.kkt().compile().evaluate(unknowns, f, j, static_cast<std::size_t>(n));
  const Eigen::MatrixXd jc = j.topRightCorner(free, n - free);
  unknowns.tail(n - free) = jc.colPivHouseholderQr().solve(-f.head(free));
}

namespace {

PentapodDesign perturbed(const PentapodDesign& center, double sigma, bool planar, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, sigma);
  PentapodDesign d = center;
  for (std::size_t i = 0; i < 5; ++i) {
    for (int c = 0; c < (planar ? 2 : 3); ++c) d.base[i][c] += g(rng);
    d.platform[i] += g(rng);
  }
  return d;
}

struct Candidate {
  Eigen::VectorXd point;
  SingularDesign singular;
  double objective = 0.0;
  double residual = 0.0;
};

}  // namespace

SolutionSet multistart_minimize(const CaseProblem& problem, const SolveConfig& cfg) {
  const auto model = detail::make_local_model(problem);
  const auto kkt = problem.kkt().compile();
  const PentapodDesign& input = problem.design();
  const double diameter = std::max(input.diameter(), 1e-12);
  const std::size_t free = problem.tmpl().free_count();
  const bool planar = problem.planar();
  const auto count = static_cast<std::size_t>(std::max(cfg.multistart_count, 1));

  std::vector<std::optional<Candidate>> found(count);
  parallel_for(count, cfg.threads, [&](std::size_t k) {
    std::mt19937_64 rng(task_seed(cfg.seed, k));
    PentapodDesign start;
    switch (k == 0 ? 4 : k % 4) {
      case 4: start = input; break;
      case 1: start = perturbed(input, 0.01 * diameter, planar, rng); break;
      case 2: start = perturbed(input, 0.1 * diameter, planar, rng); break;
      case 3: start = perturbed(input, 0.5 * diameter, planar, rng); break;
      default: start = detail::random_design(input, diameter, planar, rng); break;
    }
    const auto x0 = model->seed(start);
    if (!x0 || !x0->allFinite()) return;
    const Eigen::VectorXd x = detail::levenberg_marquardt(*model, *x0);
    const auto u = model->unknowns(x);
    if (!u) return;
    Eigen::VectorXd point = Eigen::Map<const Eigen::VectorXd>(u->data(), static_cast<Eigen::Index>(free));
    if (!point.allFinite()) return;
    estimate_multipliers(problem, point);
    const auto pol = newton_polish(kkt, point, cfg);
    if (!pol.converged || !pol.point.allFinite()) return;
    const std::span<const double> p(pol.point.data(), static_cast<std::size_t>(pol.point.size()));
    Candidate c;
    c.point = pol.point;
    c.singular = problem.embed(p);
    if (!validity_filter(c.singular)) return;
    c.objective = problem.objective(p);
    c.residual = pol.residual;
    found[k] = std::move(c);
  });

  std::vector<Candidate> kept;
  for (auto& c : found) {
    if (!c) continue;
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const Candidate& q) {
      return distance(q.singular.design, c->singular.design) <= cfg.dedup_radius * (1.0 + diameter);
    });
    if (!duplicate) kept.push_back(std::move(*c));
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) { return a.objective < b.objective; });

  SolutionSet out;
  out.backend = "multistart";
  out.paths = count;
  for (auto& c : kept) {
    Solution s;
    s.point = c.point.cast<std::complex<double>>();
    s.residual = c.residual;
    s.kind = RootKind::Real;
    s.objective = c.objective;
    out.solutions.push_back(std::move(s));
  }
  return out;
}

}  // namespace pentapod

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "local_models.hpp"
#include "pentapod/solvers.hpp"

namespace pentapod {

namespace {

// Removes the constrained parameters from the free unknowns and restores them
// from the side conditions, which are affine in the removed parameters.
class Reduced {
 public:
  explicit Reduced(const CaseProblem& p) : problem_(p) {
    const auto& names = p.tmpl().variables;
    const std::size_t free = p.tmpl().free_count();
    auto index = [&](const char* n) {
      return static_cast<std::size_t>(std::find(names.begin(), names.begin() + free, n) - names.begin());
    };
    if (p.id() == CaseId::C3b || p.id() == CaseId::C8) {
      lam_ = index("lam");
      del_ = index("del");
      Lam_ = index("Lam");
      Del_ = index("Del");
      removed_ = {del_};
    } else if (p.id() == CaseId::C9) {
      for (const char* n : {"Psi1", "Ups1", "Psi2", "Ups2", "lam", "del", "gam"}) c9_.push_back(index(n));
      removed_ = {c9_[1], c9_[3]};
    }
    for (std::size_t i = 0; i < free; ++i) {
      if (std::find(removed_.begin(), removed_.end(), i) == removed_.end()) kept_.push_back(i);
    }
  }

  int size() const { return static_cast<int>(kept_.size()); }

  Eigen::VectorXd reduce(const std::vector<double>& u) const {
    Eigen::VectorXd z(size());
    for (std::size_t i = 0; i < kept_.size(); ++i) z[static_cast<Eigen::Index>(i)] = u[kept_[i]];
    return z;
  }

  std::vector<double> complete(const Eigen::VectorXd& z) const {
    std::vector<double> u(problem_.unknown_count(), 0.0);
    for (std::size_t i = 0; i < kept_.size(); ++i) u[kept_[i]] = z[static_cast<Eigen::Index>(i)];
    if (!removed_.empty() && c9_.empty()) {
      const double Lam = u[Lam_], Del = u[Del_], lam = u[lam_];
      const double a = lam * (Lam - Del) + Lam * Del - Lam;
      const double b = lam * (Del - Lam * Del);
      u[del_] = -b / a;
    } else if (!c9_.empty()) {
      auto s = [&](double y1, double y2) {
        return case9_conditions(u[c9_[0]], y1, u[c9_[2]], y2, u[c9_[4]], u[c9_[5]], u[c9_[6]]);
      };
      const auto s0 = s(0.0, 0.0), s1 = s(1.0, 0.0), s2 = s(0.0, 1.0);
      Eigen::Matrix2d m;
      m << s1[0] - s0[0], s2[0] - s0[0], s1[1] - s0[1], s2[1] - s0[1];
      const Eigen::Vector2d y = m.fullPivLu().solve(Eigen::Vector2d(-s0[0], -s0[1]));
      u[c9_[1]] = y[0];
      u[c9_[3]] = y[1];
    }
    return u;
  }

  void residual(const Eigen::VectorXd& z, Eigen::VectorXd& f) const {
    const auto u = complete(z);
    std::array<Eigen::Vector3d, 5> base;
    std::array<double, 5> platform;
    template_design<double>(problem_.tmpl(), u, problem_.data(), base, platform);
    const auto& d = problem_.data();
    const std::size_t coords = problem_.tmpl().coords();
    const double w = std::sqrt(0.1);
    f.resize(static_cast<Eigen::Index>(5 * (coords + 1)));
    Eigen::Index k = 0;
    for (std::size_t j = 0; j < 5; ++j) {
      for (std::size_t c = 0; c < coords; ++c) f[k++] = w * (base[j][static_cast<Eigen::Index>(c)] - d[j * (coords + 1) + c]);
      f[k++] = w * (platform[j] - d[j * (coords + 1) + coords]);
    }
  }

 private:
  const CaseProblem& problem_;
  std::vector<std::size_t> kept_, removed_, c9_;
  std::size_t lam_ = 0, del_ = 0, Lam_ = 0, Del_ = 0;
};

}  // namespace

OracleResult brute_force_oracle(const CaseProblem& problem, std::size_t sample_count, const SolveConfig& cfg) {
  const Reduced reduced(problem);
  const PentapodDesign& input = problem.design();
  const double diameter = std::max(input.diameter(), 1e-12);
  std::mt19937_64 rng(task_seed(cfg.seed, 0x0ac1e));

  auto score = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd f;
    reduced.residual(z, f);
    const double v = f.squaredNorm();
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::pair<double, Eigen::VectorXd>> samples;
  samples.reserve(sample_count);
  for (std::size_t i = 0; i < sample_count; ++i) {
    const PentapodDesign d = detail::random_design(input, 2.0 * diameter, problem.planar(), rng);
    const auto u = problem.lift(d);
    if (!u) continue;
    Eigen::VectorXd z = reduced.reduce(*u);
    const double v = score(z);
    if (std::isfinite(v)) samples.emplace_back(v, std::move(z));
  }

  OracleResult out;
  out.samples = samples.size();
  if (samples.empty()) return out;
  const std::size_t keep = std::max<std::size_t>(1, samples.size() / 100);
  std::partial_sort(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(keep), samples.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });

  const detail::ResidualFn f = [&](const Eigen::VectorXd& z, Eigen::VectorXd& r) { reduced.residual(z, r); };
  const int values = static_cast<int>(5 * (problem.tmpl().coords() + 1));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < keep; ++i) {
    const Eigen::VectorXd z = detail::levenberg_marquardt(f, values, samples[i].second);
    const double v = score(z);
    if (!(v < best)) continue;
    const auto u = reduced.complete(z);
    // Limits of valid designs are kept: the bound holds on the closure.
    best = v;
    out.singular = problem.embed(std::span<const double>(u));
  }
  out.distance = std::sqrt(best);
  return out;
}

}  // namespace pentapod

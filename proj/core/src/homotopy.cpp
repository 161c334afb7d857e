#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "pentapod/parallel.hpp"
#include "pentapod/solvers.hpp"

namespace pentapod {

using cd = std::complex<double>;

LinearHomotopy::LinearHomotopy(const ComplexSystem& start, const ComplexSystem& target, cd gamma)
    : n_(target.unknown_count), start_(start.compile()), target_(target.compile()), gamma_(gamma) {
  if (start.unknown_count != n_ || start.equations.size() != n_ || target.equations.size() != n_ ||
      start.parameter_count() != 0 || target.parameter_count() != 0) {
    throw std::invalid_argument("linear homotopy needs two square systems over the same unknowns");
  }
}

void LinearHomotopy::evaluate(const VectorXcd& x, double t, VectorXcd& h, MatrixXcd& hx, VectorXcd& ht) const {
  VectorXcd g, f;
  MatrixXcd jg, jf;
  start_.evaluate(x, g, jg, n_);
  target_.evaluate(x, f, jf, n_);
  h = t * gamma_ * g + (1.0 - t) * f;
  hx = t * gamma_ * jg + (1.0 - t) * jf;
  ht = gamma_ * g - f;
}

TotalDegreeHomotopy::TotalDegreeHomotopy(const ComplexSystem& target, cd gamma)
    : n_(target.unknown_count), target_(target.compile()), gamma_(gamma) {
  if (target.equations.size() != n_ || target.parameter_count() != 0) {
    throw std::invalid_argument("total-degree homotopy needs a square system in its unknowns");
  }
  for (const auto& eq : target.equations) {
    const int d = eq.total_degree();
    if (d < 1) throw std::invalid_argument("total-degree homotopy: constant equation");
    degrees_.push_back(d);
  }
}

std::uint64_t TotalDegreeHomotopy::path_count() const {
  std::uint64_t n = 1;
  for (int d : degrees_) n *= static_cast<std::uint64_t>(d);
  return n;
}

VectorXcd TotalDegreeHomotopy::start_point(std::uint64_t k) const {
  VectorXcd x(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    const auto d = static_cast<std::uint64_t>(degrees_[i]);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k % d) / static_cast<double>(d);
    x[static_cast<Eigen::Index>(i)] = std::polar(1.0, angle);
    k /= d;
  }
  return x;
}

void TotalDegreeHomotopy::evaluate(const VectorXcd& x, double t, VectorXcd& h, MatrixXcd& hx, VectorXcd& ht) const {
  VectorXcd f;
  MatrixXcd jf;
  target_.evaluate(x, f, jf, n_);
  const auto n = static_cast<Eigen::Index>(n_);
  VectorXcd g(n), dg(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int d = degrees_[static_cast<std::size_t>(i)];
    const cd p = std::pow(x[i], d - 1);
    g[i] = p * x[i] - 1.0;
    dg[i] = static_cast<double>(d) * p;
  }
  h = t * gamma_ * g + (1.0 - t) * f;
  hx = (1.0 - t) * jf;
  hx.diagonal() += t * gamma_ * dg;
  ht = gamma_ * g - f;
}

ParameterHomotopy::ParameterHomotopy(const RealSystem& parametric, VectorXcd p_start, VectorXcd p_target)
    : n_(parametric.unknown_count),
      system_(parametric.compile()),
      p_start_(std::move(p_start)),
      p_target_(std::move(p_target)) {
  const auto m = static_cast<Eigen::Index>(parametric.parameter_count());
  if (p_start_.size() != m || p_target_.size() != m) throw std::invalid_argument("parameter vector length mismatch");
  if (parametric.equations.size() != n_) throw std::invalid_argument("parameter homotopy needs a square system");
  std::vector<cd> pt(p_target_.data(), p_target_.data() + p_target_.size());
  target_ = parametric.instantiate<cd>(std::span<const cd>(pt)).compile();
}

void ParameterHomotopy::evaluate(const VectorXcd& x, double t, VectorXcd& h, MatrixXcd& hx, VectorXcd& ht) const {
  const auto n = static_cast<Eigen::Index>(n_);
  const auto m = p_start_.size();
  VectorXcd all(n + m);
  all.head(n) = x;
  all.tail(m) = t * p_start_ + (1.0 - t) * p_target_;
  MatrixXcd j;
  system_.evaluate(all, h, j, static_cast<std::size_t>(n + m));
  hx = j.leftCols(n);
  ht = j.rightCols(m) * (p_start_ - p_target_);
}

namespace {

bool tangent(const Homotopy& h, const VectorXcd& x, double t, VectorXcd& v) {
  VectorXcd hv, ht;
  MatrixXcd hx;
  h.evaluate(x, t, hv, hx, ht);
  const Eigen::PartialPivLU<MatrixXcd> lu(hx);
  v = lu.solve(-ht);
  return v.allFinite();
}

// Newton corrector at fixed t. Succeeds when the last update is below the
// relative tolerance within `iterations` steps.
bool correct(const Homotopy& h, VectorXcd& x, double t, double tol, int iterations) {
  VectorXcd hv, ht;
  MatrixXcd hx;
  double previous = std::numeric_limits<double>::infinity();
  for (int i = 0; i < iterations; ++i) {
    h.evaluate(x, t, hv, hx, ht);
    const Eigen::PartialPivLU<MatrixXcd> lu(hx);
    const VectorXcd dx = lu.solve(-hv);
    if (!dx.allFinite()) return false;
    const double step = dx.norm();
    const double scale = 1.0 + x.norm();
    // A diverging corrector means the predictor left the basin.
    if (i > 0 && step > 0.5 * previous && step > tol * scale) return false;
    x += dx;
    if (step <= tol * scale) return true;
    previous = step;
  }
  return false;
}

}  // namespace

PathResult track_path(const Homotopy& h, const VectorXcd& start, const SolveConfig& cfg) {
  PathResult out;
  VectorXcd x = start;
  double t = 1.0;
  double dt = 0.01;
  int streak = 0;
  const double tol = cfg.tracking_tolerance;
  VectorXcd k1, k2, k3, k4;

  while (t > 0.0) {
    if (out.steps >= cfg.max_steps) {
      out.status = PathStatus::Failed;
      out.endpoint = x;
      out.t_reached = t;
      return out;
    }
    ++out.steps;
    // Never step across the endgame boundary in one go.
    double step = std::min(dt, t);
    if (t > cfg.endgame_start && t - step < cfg.endgame_start && t - cfg.endgame_start > cfg.min_step) {
      step = t - cfg.endgame_start;
    }
    const double tn = (t - step < 1e-15) ? 0.0 : t - step;
    const double hstep = -(t - tn);
    bool ok = tangent(h, x, t, k1) && tangent(h, x + 0.5 * hstep * k1, t + 0.5 * hstep, k2) &&
              tangent(h, x + 0.5 * hstep * k2, t + 0.5 * hstep, k3) && tangent(h, x + hstep * k3, tn, k4);
    VectorXcd xn;
    if (ok) {
      xn = x + (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      ok = xn.allFinite() && correct(h, xn, tn, tol, 3);
    }
    if (ok) {
      x = xn;
      t = tn;
      if (++streak >= 3) {
        dt = std::min(dt * 2.0, 0.05);
        streak = 0;
      }
      if (x.cwiseAbs().maxCoeff() > cfg.infinity_threshold) {
        out.status = PathStatus::AtInfinity;
        out.endpoint = x;
        out.t_reached = t;
        return out;
      }
    } else {
      streak = 0;
      dt *= 0.5;
      if (dt < cfg.min_step) {
        out.status = PathStatus::Failed;
        out.endpoint = x;
        out.t_reached = t;
        return out;
      }
    }
  }

  SolveConfig polish_cfg = cfg;
  polish_cfg.max_newton_steps = 10;
  const auto p = newton_polish(h.target(), x, polish_cfg);
  out.endpoint = p.point.allFinite() ? p.point : x;
  out.residual = p.residual;
  out.t_reached = 0.0;
  out.status = out.endpoint.cwiseAbs().maxCoeff() > cfg.infinity_threshold ? PathStatus::AtInfinity
                                                                            : PathStatus::Success;
  return out;
}

std::vector<PathResult> track_paths(const Homotopy& h, const std::vector<VectorXcd>& starts, const SolveConfig& cfg) {
  std::vector<PathResult> out(starts.size());
  parallel_for(starts.size(), cfg.threads, [&](std::size_t i) { out[i] = track_path(h, starts[i], cfg); });
  return out;
}

}  // namespace pentapod

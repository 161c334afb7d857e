#include <cmath>

#include <Eigen/Dense>

#include "pentapod/solvers.hpp"

namespace pentapod {

std::string_view to_string(RootKind k) {
  switch (k) {
    case RootKind::Real: return "real";
    case RootKind::Complex: return "complex";
    case RootKind::AtInfinity: return "at-infinity";
    case RootKind::Failed: return "failed";
  }
  return "failed";
}

std::uint64_t task_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

template <class Coeff, class T>
PolishResult<T> polish(const CompiledSystem<Coeff>& sys, const VectorX<T>& start, const SolveConfig& cfg) {
  const std::size_t n = static_cast<std::size_t>(start.size());
  if (sys.equations() != n || sys.variables() != n) {
    throw std::invalid_argument("newton_polish requires a square system in its unknowns");
  }
  PolishResult<T> out;
  out.point = start;
  VectorX<T> f, trial_f;
  MatrixX<T> jac;
  sys.evaluate(out.point, f, jac, n);
  double norm = f.template lpNorm<Eigen::Infinity>();
  for (int it = 0; it < cfg.max_newton_steps; ++it) {
    if (!std::isfinite(norm)) break;
    if (norm < cfg.newton_tolerance) {
      out.converged = true;
      break;
    }
    const Eigen::ColPivHouseholderQR<MatrixX<T>> qr(jac);
    const VectorX<T> step = qr.solve(-f);
    if (!step.allFinite()) break;
    // Backtracking on the residual norm keeps far starts from diverging.
    double alpha = 1.0;
    bool accepted = false;
    VectorX<T> trial;
    while (alpha > 1e-6) {
      trial = out.point + T(alpha) * step;
      sys.evaluate(trial, trial_f);
      const double tn = trial_f.template lpNorm<Eigen::Infinity>();
      if (std::isfinite(tn) && tn < (1.0 - 1e-4 * alpha) * norm) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++out.iterations;
    if (!accepted) {
      // Stagnation at roundoff level still counts when the step is negligible.
      if (norm < 1e3 * cfg.newton_tolerance && step.norm() < 1e-14 * (1.0 + out.point.norm())) out.converged = true;
      break;
    }
    out.point = trial;
    sys.evaluate(out.point, f, jac, n);
    norm = f.template lpNorm<Eigen::Infinity>();
  }
  out.residual = norm;
  if (!out.converged && norm < cfg.newton_tolerance) out.converged = true;
  return out;
}

}  // namespace

PolishResult<double> newton_polish(const CompiledSystem<double>& sys, const Eigen::VectorXd& start,
                                   const SolveConfig& cfg) {
  return polish<double, double>(sys, start, cfg);
}

PolishResult<std::complex<double>> newton_polish(const CompiledSystem<std::complex<double>>& sys,
                                                 const VectorXcd& start, const SolveConfig& cfg) {
  return polish<std::complex<double>, std::complex<double>>(sys, start, cfg);
}

PolishResult<double> newton_polish(const RealSystem& sys, const Eigen::VectorXd& start, const SolveConfig& cfg) {
  if (sys.parameter_count() != 0) throw std::invalid_argument("newton_polish requires bound parameters");
  return polish<double, double>(sys.compile(), start, cfg);
}

PolishResult<std::complex<double>> newton_polish(const ComplexSystem& sys, const VectorXcd& start,
                                                 const SolveConfig& cfg) {
  if (sys.parameter_count() != 0) throw std::invalid_argument("newton_polish requires bound parameters");
  return polish<std::complex<double>, std::complex<double>>(sys.compile(), start, cfg);
}

}  // namespace pentapod

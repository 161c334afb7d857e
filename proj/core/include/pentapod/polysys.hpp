#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pentapod/polynomial.hpp"

namespace pentapod {

template <class T>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using MatrixX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// Flattened polynomial system for repeated evaluation of values and
/// Jacobians. Columns of the Jacobian follow the variable order; only the
/// first `jac_cols` columns are produced.
template <class Coeff>
class CompiledSystem {
 public:
  CompiledSystem() = default;
  CompiledSystem(const std::vector<Polynomial<Coeff>>& equations, std::size_t nvars) : nvars_(nvars) {
    eq_begin_.push_back(0);
    for (const auto& eq : equations) {
      if (eq.nvars() != nvars) throw std::invalid_argument("equation variable count mismatch");
      for (const auto& [e, c] : eq.terms()) {
        Term t{c, static_cast<std::uint32_t>(factors_.size()), 0};
        for (std::size_t v = 0; v < nvars; ++v) {
          if (e[v] == 0) continue;
          factors_.push_back({static_cast<std::uint32_t>(v), e[v]});
          max_exp_ = std::max<int>(max_exp_, e[v]);
          ++t.count;
        }
        terms_.push_back(t);
      }
      eq_begin_.push_back(static_cast<std::uint32_t>(terms_.size()));
    }
  }

  std::size_t equations() const { return eq_begin_.empty() ? 0 : eq_begin_.size() - 1; }
  std::size_t variables() const { return nvars_; }

  template <class T>
  void evaluate(const VectorX<T>& x, VectorX<T>& f) const {
    evaluate_impl<T>(x, f, nullptr, 0);
  }

  template <class T>
  void evaluate(const VectorX<T>& x, VectorX<T>& f, MatrixX<T>& jac, std::size_t jac_cols) const {
    evaluate_impl(x, f, &jac, jac_cols);
  }

 private:
  struct Factor {
    std::uint32_t var;
    std::uint8_t exp;
  };
  struct Term {
    Coeff coeff;
    std::uint32_t first;
    std::uint32_t count;
  };

  template <class T>
  void evaluate_impl(const VectorX<T>& x, VectorX<T>& f, MatrixX<T>* jac, std::size_t jac_cols) const {
    if (static_cast<std::size_t>(x.size()) != nvars_) {
      throw std::invalid_argument("dimension mismatch in system evaluation");
    }
    const std::size_t neq = equations();
    const int stride = max_exp_ + 1;
    // powers[v * stride + k] = x_v^k
    thread_local std::vector<T> powers;
    powers.assign(nvars_ * stride, T(1));
    for (std::size_t v = 0; v < nvars_; ++v) {
      for (int k = 1; k < stride; ++k) powers[v * stride + k] = powers[v * stride + k - 1] * x[v];
    }
    f.setZero(static_cast<Eigen::Index>(neq));
    if (jac) jac->setZero(static_cast<Eigen::Index>(neq), static_cast<Eigen::Index>(jac_cols));

    T prefix[16];
    T vals[16];
    for (std::size_t q = 0; q < neq; ++q) {
      T acc(0);
      for (std::uint32_t ti = eq_begin_[q]; ti < eq_begin_[q + 1]; ++ti) {
        const Term& t = terms_[ti];
        const T c = T(t.coeff);
        if (t.count == 0) {
          acc += c;
          continue;
        }
        const Factor* fac = factors_.data() + t.first;
        T prod(1);
        for (std::uint32_t k = 0; k < t.count; ++k) {
          prefix[k] = prod;
          vals[k] = powers[fac[k].var * stride + fac[k].exp];
          prod *= vals[k];
        }
        acc += c * prod;
        if (!jac) continue;
        T suffix(1);
        for (std::uint32_t kk = t.count; kk-- > 0;) {
          const std::uint32_t v = fac[kk].var;
          if (v < jac_cols) {
            const T d = T(static_cast<double>(fac[kk].exp)) * powers[v * stride + fac[kk].exp - 1];
            (*jac)(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(v)) += c * prefix[kk] * d * suffix;
          }
          suffix *= vals[kk];
        }
      }
      f[static_cast<Eigen::Index>(q)] = acc;
    }
  }

  std::size_t nvars_ = 0;
  int max_exp_ = 0;
  std::vector<Factor> factors_;
  std::vector<Term> terms_;
  std::vector<std::uint32_t> eq_begin_;
};

/// A polynomial system. Variables [0, unknown_count) are unknowns; any
/// trailing variables are data parameters that are bound before solving.
template <class Scalar>
struct PolySystem {
  std::vector<std::string> variables;
  std::size_t unknown_count = 0;
  std::vector<Polynomial<Scalar>> equations;
  /// Per-equation divisors applied by scale_coefficients (empty if unscaled).
  std::vector<double> scaling;

  std::size_t parameter_count() const { return variables.size() - unknown_count; }
  bool square() const { return equations.size() == unknown_count; }

  /// Binds the data parameters and returns a system in the unknowns only.
  template <class T>
  PolySystem<T> instantiate(std::span<const T> params) const {
    if (params.size() != parameter_count()) throw std::invalid_argument("parameter count mismatch");
    PolySystem<T> out;
    out.variables.assign(variables.begin(), variables.begin() + static_cast<std::ptrdiff_t>(unknown_count));
    out.unknown_count = unknown_count;
    out.scaling = scaling;
    for (const auto& eq : equations) out.equations.push_back(eq.template bind_tail<T>(unknown_count, params));
    return out;
  }

  CompiledSystem<Scalar> compile() const { return CompiledSystem<Scalar>(equations, variables.size()); }
};

using RealSystem = PolySystem<double>;
using ComplexSystem = PolySystem<std::complex<double>>;

/// Square system of partial derivatives of `lagrangian` with respect to the
/// first `unknown_count` variables.
RealSystem gradient_system(const RealPolynomial& lagrangian, std::vector<std::string> variables,
                           std::size_t unknown_count);

/// Divides each equation by its largest coefficient magnitude. Throws on an
/// identically zero equation.
template <class Scalar>
PolySystem<Scalar> scale_coefficients(const PolySystem<Scalar>& sys) {
  PolySystem<Scalar> out = sys;
  out.scaling.assign(sys.equations.size(), 1.0);
  for (std::size_t i = 0; i < out.equations.size(); ++i) {
    const double m = out.equations[i].max_coefficient();
    if (!(m > 0.0)) throw std::invalid_argument("cannot scale an identically zero equation");
    out.equations[i] *= Scalar(1.0 / m);
    out.scaling[i] = (sys.scaling.empty() ? 1.0 : sys.scaling[i]) * m;
  }
  return out;
}

template <class Scalar, class T>
VectorX<T> evaluate(const PolySystem<Scalar>& sys, const VectorX<T>& point) {
  if (static_cast<std::size_t>(point.size()) != sys.variables.size()) {
    throw std::invalid_argument("dimension mismatch: point has " + std::to_string(point.size()) +
                                " entries, system has " + std::to_string(sys.variables.size()) +
                                " variables");
  }
  VectorX<T> f;
  sys.compile().evaluate(point, f);
  return f;
}

/// Jacobian with respect to the unknowns.
template <class Scalar, class T>
MatrixX<T> jacobian(const PolySystem<Scalar>& sys, const VectorX<T>& point) {
  if (static_cast<std::size_t>(point.size()) != sys.variables.size()) {
    throw std::invalid_argument("dimension mismatch in jacobian");
  }
  VectorX<T> f;
  MatrixX<T> j;
  sys.compile().evaluate(point, f, j, sys.unknown_count);
  return j;
}

/// Plain-text dump: one equation per line, monomials written as
/// coefficient*var^exp products.
std::string dump(const RealSystem& sys);
std::string dump(const ComplexSystem& sys);

}  // namespace pentapod

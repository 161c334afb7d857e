#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace pentapod {

using Exponents = std::vector<std::uint8_t>;

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

/// Sparse multivariate polynomial. Terms are keyed by exponent vectors with one
/// slot per variable of the owning system; zero coefficients are never stored.
template <class Scalar>
class Polynomial {
 public:
  using Terms = std::map<Exponents, Scalar>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, Scalar c) {
    Polynomial p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw std::out_of_range("polynomial variable index");
    Polynomial p(nvars);
    Exponents e(nvars, 0);
    e[index] = 1;
    p.add_term(std::move(e), Scalar(1));
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Exponents e, Scalar c) {
    if (e.size() != nvars_) throw std::invalid_argument("exponent vector length mismatch");
    if (c == Scalar(0)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, sum(e, nullptr));
    return d;
  }

  /// Degree counting only variables whose mask entry is true.
  int total_degree(const std::vector<bool>& mask) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, sum(e, &mask));
    return d;
  }

  int degree_in(std::size_t var) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
    return d;
  }

  double max_coefficient() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, magnitude(c));
    return m;
  }

  Polynomial derivative(std::size_t var) const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents de = e;
      --de[var];
      out.add_term(std::move(de), c * Scalar(e[var]));
    }
    return out;
  }

  template <class T>
  T evaluate(std::span<const T> x) const {
    if (x.size() != nvars_) throw std::invalid_argument("dimension mismatch in polynomial evaluation");
    T sum(0);
    for (const auto& [e, c] : terms_) {
      T term = T(c);
      for (std::size_t i = 0; i < nvars_; ++i) {
        for (int k = 0; k < e[i]; ++k) term *= x[i];
      }
      sum += term;
    }
    return sum;
  }

  /// Substitutes values for the trailing variables [keep, nvars) and returns a
  /// polynomial in the first `keep` variables.
  template <class T>
  Polynomial<T> bind_tail(std::size_t keep, std::span<const T> values) const {
    if (keep + values.size() != nvars_) throw std::invalid_argument("dimension mismatch in bind_tail");
    Polynomial<T> out(keep);
    for (const auto& [e, c] : terms_) {
      T coeff = T(c);
      for (std::size_t i = keep; i < nvars_; ++i) {
        for (int k = 0; k < e[i]; ++k) coeff *= values[i - keep];
      }
      out.add_term(Exponents(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(keep)), coeff);
    }
    return out;
  }

  /// Re-indexes variables: variable i of this polynomial becomes variable
  /// map[i] of a polynomial with `nvars` variables.
  Polynomial remap(std::size_t nvars, const std::vector<std::size_t>& map) const {
    Polynomial out(nvars);
    for (const auto& [e, c] : terms_) {
      Exponents ne(nvars, 0);
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (e[i]) ne[map[i]] = static_cast<std::uint8_t>(ne[map[i]] + e[i]);
      }
      out.add_term(std::move(ne), c);
    }
    return out;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(Scalar s) {
    if (s == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Scalar(-1); }
  friend Polynomial operator*(Polynomial a, Scalar s) { return a *= s; }
  friend Polynomial operator*(Scalar s, Polynomial a) { return a *= s; }
  friend Polynomial operator+(Polynomial a, Scalar s) {
    a.add_term(Exponents(a.nvars_, 0), s);
    return a;
  }
  friend Polynomial operator-(Polynomial a, Scalar s) {
    a.add_term(Exponents(a.nvars_, 0), -s);
    return a;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check(b);
    Polynomial out(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.nvars_);
        for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
        out.add_term(std::move(e), ca * cb);
      }
    }
    return out;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  static int sum(const Exponents& e, const std::vector<bool>* mask) {
    int s = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!mask || (*mask)[i]) s += e[i];
    }
    return s;
  }
  void check(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("polynomials over different variable sets");
  }

  std::size_t nvars_ = 0;
  Terms terms_;
};

using RealPolynomial = Polynomial<double>;
using ComplexPolynomial = Polynomial<std::complex<double>>;

/// Determinant of a square matrix of polynomials by cofactor expansion.
template <class Scalar>
Polynomial<Scalar> determinant(const std::vector<std::vector<Polynomial<Scalar>>>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("empty determinant");
  const std::size_t nv = m[0][0].nvars();
  if (n == 1) return m[0][0];
  Polynomial<Scalar> det(nv);
  for (std::size_t col = 0; col < n; ++col) {
    if (m[0][col].is_zero()) continue;
    std::vector<std::vector<Polynomial<Scalar>>> minor;
    minor.reserve(n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Polynomial<Scalar>> row;
      row.reserve(n - 1);
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) row.push_back(m[r][c]);
      }
      minor.push_back(std::move(row));
    }
    const Scalar sign = (col % 2 == 0) ? Scalar(1) : Scalar(-1);
    det += sign * (m[0][col] * determinant(minor));
  }
  return det;
}

}  // namespace pentapod

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "pentapod/cases.hpp"

namespace pentapod {

namespace {

template <class T>
class Incidence {
 public:
  using V = Eigen::Matrix<T, 3, 1>;

  Incidence(const std::array<V, 5>& base, const std::array<T, 5>& platform, double tol)
      : M_(base), r_(platform), tol_(tol) {
    double d = 0.0;
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        d = std::max(d, (M_[i] - M_[j]).norm());
        d = std::max(d, std::abs(r_[i] - r_[j]));
      }
    }
    eps_ = tol_ * std::max(d, 1e-300);
  }

  bool same_base(int a, int b) const { return (M_[a] - M_[b]).norm() <= eps_; }
  bool same_platform(int a, int b) const { return std::abs(r_[a] - r_[b]) <= eps_; }

  // All listed base points lie on one line (within eps of the line through
  // the two farthest of them).
  bool collinear(std::initializer_list<int> legs) const {
    int a = -1, b = -1;
    if (!span_pair(legs, a, b)) return true;
    const V d = M_[b] - M_[a];
    const double n = d.norm();
    for (int k : legs) {
      if ((d.cross(V(M_[k] - M_[a]))).norm() > eps_ * n) return false;
    }
    return true;
  }

  bool coplanar(std::initializer_list<int> legs) const {
    Eigen::Matrix<T, 3, Eigen::Dynamic> m(3, static_cast<Eigen::Index>(legs.size()));
    const int first = *legs.begin();
    Eigen::Index c = 0;
    for (int k : legs) m.col(c++) = M_[k] - M_[first];
    Eigen::JacobiSVD<decltype(m)> svd(m);
    return svd.singularValues()[2] <= eps_;
  }

  // Projective correspondence between points on the base line, given in
  // homogeneous parameters (t : w), and platform coordinates.
  bool projective(const std::array<std::array<T, 2>, 4>& line, const std::array<T, 4>& r) const {
    Eigen::Matrix<T, 4, 4> m;
    for (int i = 0; i < 4; ++i) {
      const T t = line[i][0], w = line[i][1];
      m.row(i) << t * r[i], w * r[i], t, w;
      const double n = m.row(i).norm();
      if (n > 0) m.row(i) /= n;
    }
    return std::abs(m.determinant()) <= tol_ * 1e3;
  }

  // Cross-ratio condition for four collinear base points (legs in template order).
  bool four_point_projective(std::array<int, 4> legs) const {
    int a = -1, b = -1;
    if (!span_pair({legs[0], legs[1], legs[2], legs[3]}, a, b)) return true;
    const V d = M_[b] - M_[a];
    const T n = d.dot(d);
    std::array<std::array<T, 2>, 4> line;
    std::array<T, 4> r;
    for (int i = 0; i < 4; ++i) {
      line[i] = {d.dot(V(M_[legs[i]] - M_[a])) / n, T(1)};
      r[i] = r_[legs[i]];
    }
    return projective(line, r);
  }

  bool case8(const Combination& c) const {
    if (!collinear({c[0], c[1], c[2]}) || !same_platform(c[3], c[4])) return false;
    int a = -1, b = -1;
    if (!span_pair({c[0], c[1], c[2]}, a, b)) return true;
    if (same_base(c[3], c[4])) return true;
    const V d1 = M_[b] - M_[a];
    const V d2 = M_[c[4]] - M_[c[3]];
    Eigen::Matrix<T, 3, 3> k;
    k.col(0) = M_[a] - M_[c[3]];
    k.col(1) = d1;
    k.col(2) = -d2;
    Eigen::JacobiSVD<Eigen::Matrix<T, 3, 3>> svd(k, Eigen::ComputeFullV);
    const Eigen::Vector3d s = svd.singularValues();
    if (s[2] > tol_ * 1e3 * s[0]) return false;  // skew lines
    const Eigen::Matrix<T, 3, 1> v = svd.matrixV().col(2);
    const T n = d1.dot(d1);
    std::array<std::array<T, 2>, 4> line;
    std::array<T, 4> r;
    line[0] = {v[1], v[0]};
    r[0] = r_[c[3]];
    for (int i = 0; i < 3; ++i) {
      line[i + 1] = {d1.dot(V(M_[c[i]] - M_[a])) / n, T(1)};
      r[i + 1] = r_[c[i]];
    }
    return projective(line, r);
  }

  bool case9() const {
    if (!coplanar({0, 1, 2, 3, 4})) return false;
    // Any frame of three non-collinear base points with distinct platform
    // coordinates on the first two describes the design.
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        for (int k = 0; k < 5; ++k) {
          if (i == j || j == k || i == k || same_platform(i, j) || collinear({i, j, k})) continue;
          return case9_frame(i, j, k);
        }
      }
    }
    return true;  // no generic frame: the design is degenerate
  }

  bool satisfies(CaseId id, const Combination& c) const {
    switch (id) {
      case CaseId::C0: return same_base(c[0], c[1]) && same_platform(c[0], c[1]);
      case CaseId::C1: return same_base(c[0], c[1]) && same_base(c[0], c[2]);
      case CaseId::C2:
        return same_platform(c[0], c[1]) && same_platform(c[0], c[2]) && collinear({c[0], c[1], c[2]});
      case CaseId::C3a:
        return same_platform(c[0], c[1]) && same_base(c[2], c[3]) && collinear({c[0], c[1], c[2]});
      case CaseId::C3b:
        return collinear({c[0], c[1], c[2], c[3]}) && four_point_projective({c[0], c[1], c[2], c[3]});
      case CaseId::C4:
        return same_platform(c[0], c[1]) && same_platform(c[0], c[2]) && same_platform(c[0], c[3]);
      case CaseId::C5a: return same_base(c[0], c[1]) && collinear({c[0], c[2], c[3], c[4]});
      case CaseId::C5b: return collinear({0, 1, 2, 3, 4});
      case CaseId::C6:
        return same_platform(c[0], c[1]) && same_platform(c[0], c[2]) && same_base(c[3], c[4]);
      case CaseId::C7:
        return same_platform(c[0], c[1]) && same_platform(c[3], c[4]) && collinear({c[0], c[1], c[2]}) &&
               collinear({c[2], c[3], c[4]});
      case CaseId::C8: return case8(c);
      case CaseId::C9: return case9();
    }
    return false;
  }

  bool any(CaseId id) const {
    for (const auto& c : enumerate_combinations(id)) {
      if (satisfies(id, c)) return true;
    }
    return false;
  }

  bool generic_case9() const {
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        if (same_platform(i, j)) return false;
        for (int k = j + 1; k < 5; ++k) {
          if (collinear({i, j, k})) return false;
        }
      }
    }
    return true;
  }

 private:
  bool span_pair(std::initializer_list<int> legs, int& a, int& b) const {
    double best = -1.0;
    for (int i : legs) {
      for (int j : legs) {
        const double d = (M_[i] - M_[j]).norm();
        if (i < j && d > best) {
          best = d;
          a = i;
          b = j;
        }
      }
    }
    return best > eps_;
  }

  bool case9_frame(int i, int j, int k) const {
    Eigen::Matrix<T, 3, 2> frame;
    frame.col(0) = M_[j] - M_[i];
    frame.col(1) = M_[k] - M_[i];
    const Eigen::Matrix<T, 2, 2> gram = frame.adjoint() * frame;
    const auto solve = [&](int l) -> Eigen::Matrix<T, 2, 1> {
      return gram.inverse() * (frame.adjoint() * V(M_[l] - M_[i]));
    };
    std::array<int, 2> rest{};
    int n = 0;
    for (int l = 0; l < 5; ++l) {
      if (l != i && l != j && l != k) rest[static_cast<std::size_t>(n++)] = l;
    }
    const auto c4 = solve(rest[0]), c5 = solve(rest[1]);
    const T dr = r_[j] - r_[i];
    const T lam = (r_[k] - r_[i]) / dr, del = (r_[rest[0]] - r_[i]) / dr, gam = (r_[rest[1]] - r_[i]) / dr;
    const T one(1), zero(0);
    Eigen::Matrix<T, 5, 5> a, b;
    a << one, zero, zero, zero, zero, one, one, zero, one, one, one, zero, one, zero, lam, one, c4[0], c4[1],
        c4[0] * del, del, one, c5[0], c5[1], c5[0] * gam, gam;
    b << one, zero, zero, zero, zero, one, one, zero, one, zero, one, zero, one, zero, lam, one, c4[0], c4[1],
        c4[0] * del, c4[1] * del, one, c5[0], c5[1], c5[0] * gam, c5[1] * gam;
    for (auto* m : {&a, &b}) {
      double bound = 1.0;
      for (int row = 0; row < 5; ++row) bound *= m->row(row).norm();
      if (std::abs(m->determinant()) > tol_ * 1e3 * bound) return false;
    }
    return true;
  }

  const std::array<V, 5>& M_;
  const std::array<T, 5>& r_;
  double tol_;
  double eps_;
};

bool valid_impl(CaseId c, const auto& inc) {
  for (CaseId earlier : kAllCases) {
    if (earlier == c) break;
    if (inc.any(earlier)) return false;
  }
  if (c == CaseId::C9 && !inc.generic_case9()) return false;
  return true;
}

}  // namespace

bool has_case_structure(CaseId c, const PentapodDesign& d, double tol) {
  return Incidence<double>(d.base, d.platform, tol).any(c);
}

bool has_case_structure(CaseId c, const std::array<Eigen::Vector3cd, 5>& base,
                        const std::array<std::complex<double>, 5>& platform, double tol) {
  return Incidence<std::complex<double>>(base, platform, tol).any(c);
}

bool satisfies_case(CaseId c, const PentapodDesign& d, const Combination& comb, double tol) {
  return Incidence<double>(d.base, d.platform, tol).satisfies(c, comb);
}

bool validity_filter(const SingularDesign& s, double tol) {
  return valid_impl(s.id, Incidence<double>(s.design.base, s.design.platform, tol));
}

bool validity_filter(CaseId c, const std::array<Eigen::Vector3cd, 5>& base,
                     const std::array<std::complex<double>, 5>& platform, double tol) {
  return valid_impl(c, Incidence<std::complex<double>>(base, platform, tol));
}

}  // namespace pentapod

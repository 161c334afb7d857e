#include <map>
#include <mutex>
#include <numeric>

#include <Eigen/Dense>

#include "pentapod/cases.hpp"

namespace pentapod {

namespace {

using P = RealPolynomial;
using V3 = std::array<P, 3>;

V3 operator+(const V3& a, const V3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
V3 operator-(const V3& a, const V3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
V3 operator*(const P& s, const V3& a) { return {s * a[0], s * a[1], s * a[2]}; }

// Point on the line through a and b at affine parameter t.
V3 along(const V3& a, const V3& b, const P& t) { return a + t * (b - a); }
P along(const P& a, const P& b, const P& t) { return a + t * (b - a); }

struct Layout {
  std::vector<std::string> anchors;      // anchor labels; each yields x, y, (z)
  std::vector<std::string> scalars;      // platform coordinates and shape parameters
  std::vector<std::string> multipliers;  // Lagrange multipliers
};

class Builder {
 public:
  Builder(const Layout& layout, bool planar) : planar_(planar) {
    for (const auto& a : layout.anchors) {
      add("x" + a);
      add("y" + a);
      if (!planar) add("z" + a);
    }
    for (const auto& s : layout.scalars) add(s);
    for (const auto& m : layout.multipliers) add(m);
    unknowns_ = names_.size();
    multipliers_ = layout.multipliers.size();
    for (int j = 1; j <= 5; ++j) {
      const std::string k = std::to_string(j);
      add("X" + k);
      add("Y" + k);
      if (!planar) add("Z" + k);
      add("R" + k);
    }
  }

  std::size_t size() const { return names_.size(); }
  P var(const std::string& n) const { return P::variable(size(), index_.at(n)); }
  P k(double c) const { return P::constant(size(), c); }
  V3 anchor(const std::string& a) const {
    return {var("x" + a), var("y" + a), planar_ ? P(size()) : var("z" + a)};
  }
  V3 data_base(int j) const {
    const std::string s = std::to_string(j + 1);
    return {var("X" + s), var("Y" + s), planar_ ? P(size()) : var("Z" + s)};
  }
  P data_r(int j) const { return var("R" + std::to_string(j + 1)); }

  CaseTemplate start(CaseId id) const {
    CaseTemplate t;
    t.id = id;
    t.planar = planar_;
    t.variables = names_;
    t.unknown_count = unknowns_;
    t.multiplier_count = multipliers_;
    for (int j = 0; j < 5; ++j) {
      t.base[j] = data_base(j);
      t.platform[j] = data_r(j);
    }
    return t;
  }

 private:
  void add(const std::string& n) {
    index_[n] = names_.size();
    names_.push_back(n);
  }
  bool planar_;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
  std::size_t unknowns_ = 0;
  std::size_t multipliers_ = 0;
};

P side_condition_poly(const P& Lam, const P& Del, const P& lam, const P& del) {
  return lam * del * (Lam - Del) + lam * (Del - Lam * Del) + del * (Lam * Del - Lam);
}

// S1, S2 as polynomials in the given parameter polynomials, expanded from the
// determinant definitions.
std::array<P, 2> case9_polys(const Builder& b, const P& Psi1, const P& Ups1, const P& Psi2, const P& Ups2,
                             const P& lam, const P& del, const P& gam) {
  const P one = b.k(1.0), zero = b.k(0.0);
  std::vector<std::vector<P>> m1{{one, zero, zero, zero, zero},
                                 {one, one, zero, one, one},
                                 {one, zero, one, zero, lam},
                                 {one, Psi1, Ups1, Psi1 * del, del},
                                 {one, Psi2, Ups2, Psi2 * gam, gam}};
  std::vector<std::vector<P>> m2{{one, zero, zero, zero, zero},
                                 {one, one, zero, one, zero},
                                 {one, zero, one, zero, lam},
                                 {one, Psi1, Ups1, Psi1 * del, Ups1 * del},
                                 {one, Psi2, Ups2, Psi2 * gam, Ups2 * gam}};
  return {determinant(m1), determinant(m2)};
}

Layout layout_of(CaseId id) {
  switch (id) {
    case CaseId::C0: return {{"1"}, {"r1"}, {}};
    case CaseId::C1: return {{"1"}, {}, {}};
    case CaseId::C2:
    case CaseId::C3a: return {{"1", "2"}, {"r1", "Lam"}, {}};
    case CaseId::C3b: return {{"1", "2"}, {"r1", "r2", "Lam", "Del", "lam", "del"}, {"mu"}};
    case CaseId::C4: return {{}, {"r1"}, {}};
    case CaseId::C5a: return {{"1", "3"}, {"Gam", "Phi"}, {}};
    case CaseId::C5b: return {{"1", "2"}, {"Lam", "Del", "Phi"}, {}};
    case CaseId::C6: return {{"4"}, {"r1"}, {}};
    case CaseId::C7: return {{"2", "3", "4"}, {"r1", "r4", "Gam", "Phi"}, {}};
    case CaseId::C8: return {{"1", "4", "5"}, {"r1", "r4", "Gam", "Lam", "Del", "lam", "del"}, {"mu"}};
    case CaseId::C9:
      return {{"1", "2", "3"}, {"r1", "r2", "Psi1", "Ups1", "Psi2", "Ups2", "lam", "del", "gam"}, {"mu1", "mu2"}};
  }
  throw std::logic_error("unknown case");
}

CaseTemplate build(CaseId id, bool planar) {
  const Builder b(layout_of(id), planar);
  CaseTemplate t = b.start(id);
  auto v = [&](const char* n) { return b.var(n); };
  auto A = [&](const char* n) { return b.anchor(n); };

  switch (id) {
    case CaseId::C0:
      t.base[0] = t.base[1] = A("1");
      t.platform[0] = t.platform[1] = v("r1");
      break;
    case CaseId::C1:
      t.base[0] = t.base[1] = t.base[2] = A("1");
      break;
    case CaseId::C2:
      t.base[0] = A("1");
      t.base[1] = A("2");
      t.base[2] = along(A("1"), A("2"), v("Lam"));
      t.platform[0] = t.platform[1] = t.platform[2] = v("r1");
      break;
    case CaseId::C3a:
      t.base[0] = A("1");
      t.base[1] = A("2");
      t.base[2] = t.base[3] = along(A("1"), A("2"), v("Lam"));
      t.platform[0] = t.platform[1] = v("r1");
      break;
    case CaseId::C3b:
      t.base[0] = A("1");
      t.base[1] = A("2");
      t.base[2] = along(A("1"), A("2"), v("Lam"));
      t.base[3] = along(A("1"), A("2"), v("Del"));
      t.platform[0] = v("r1");
      t.platform[1] = v("r2");
      t.platform[2] = along(v("r1"), v("r2"), v("lam"));
      t.platform[3] = along(v("r1"), v("r2"), v("del"));
      t.constraints.push_back(side_condition_poly(v("Lam"), v("Del"), v("lam"), v("del")));
      break;
    case CaseId::C4:
      t.platform[0] = t.platform[1] = t.platform[2] = t.platform[3] = v("r1");
      break;
    case CaseId::C5a:
      t.base[0] = t.base[1] = A("1");
      t.base[2] = A("3");
      t.base[3] = along(A("1"), A("3"), v("Gam"));
      t.base[4] = along(A("1"), A("3"), v("Phi"));
      break;
    case CaseId::C5b:
      t.base[0] = A("1");
      t.base[1] = A("2");
      t.base[2] = along(A("1"), A("2"), v("Lam"));
      t.base[3] = along(A("1"), A("2"), v("Del"));
      t.base[4] = along(A("1"), A("2"), v("Phi"));
      break;
    case CaseId::C6:
      t.platform[0] = t.platform[1] = t.platform[2] = v("r1");
      t.base[3] = t.base[4] = A("4");
      break;
    case CaseId::C7:
      t.base[0] = along(A("3"), A("2"), v("Gam"));
      t.base[1] = A("2");
      t.base[2] = A("3");
      t.base[3] = A("4");
      t.base[4] = along(A("3"), A("4"), v("Phi"));
      t.platform[0] = t.platform[1] = v("r1");
      t.platform[3] = t.platform[4] = v("r4");
      break;
    case CaseId::C8: {
      const V3 x = along(A("4"), A("5"), v("Gam"));
      t.base[0] = A("1");
      t.base[1] = along(x, A("1"), v("Lam"));
      t.base[2] = along(x, A("1"), v("Del"));
      t.base[3] = A("4");
      t.base[4] = A("5");
      t.platform[0] = v("r1");
      t.platform[1] = along(v("r4"), v("r1"), v("lam"));
      t.platform[2] = along(v("r4"), v("r1"), v("del"));
      t.platform[3] = t.platform[4] = v("r4");
      t.constraints.push_back(side_condition_poly(v("Lam"), v("Del"), v("lam"), v("del")));
      break;
    }
    case CaseId::C9: {
      const V3 m1 = A("1"), m2 = A("2"), m3 = A("3");
      t.base[0] = m1;
      t.base[1] = m2;
      t.base[2] = m3;
      t.base[3] = m1 + v("Psi1") * (m2 - m1) + v("Ups1") * (m3 - m1);
      t.base[4] = m1 + v("Psi2") * (m2 - m1) + v("Ups2") * (m3 - m1);
      t.platform[0] = v("r1");
      t.platform[1] = v("r2");
      t.platform[2] = along(v("r1"), v("r2"), v("lam"));
      t.platform[3] = along(v("r1"), v("r2"), v("del"));
      t.platform[4] = along(v("r1"), v("r2"), v("gam"));
      const auto s = case9_polys(b, v("Psi1"), v("Ups1"), v("Psi2"), v("Ups2"), v("lam"), v("del"), v("gam"));
      t.constraints.assign(s.begin(), s.end());
      break;
    }
  }

  P obj(b.size());
  for (int j = 0; j < 5; ++j) {
    const V3 d = t.base[j] - b.data_base(j);
    for (const auto& c : d) obj += c * c;
    const P dr = t.platform[j] - b.data_r(j);
    obj += dr * dr;
  }
  t.objective = obj * 0.1;
  t.lagrangian = t.objective;
  for (std::size_t i = 0; i < t.constraints.size(); ++i) {
    t.lagrangian += P::variable(b.size(), t.free_count() + i) * t.constraints[i];
  }
  return t;
}

// Seven-variable copies of S1 and S2 for direct evaluation.
const std::array<P, 2>& case9_standalone() {
  static const std::array<P, 2> polys = [] {
    const Builder b(Layout{{}, {"Psi1", "Ups1", "Psi2", "Ups2", "lam", "del", "gam"}, {}}, true);
    auto s = case9_polys(b, b.var("Psi1"), b.var("Ups1"), b.var("Psi2"), b.var("Ups2"), b.var("lam"),
                         b.var("del"), b.var("gam"));
    // keep only the seven leading variables
    std::vector<double> zeros(b.size() - 7, 0.0);
    return std::array<P, 2>{s[0].bind_tail<double>(7, zeros), s[1].bind_tail<double>(7, zeros)};
  }();
  return polys;
}

}  // namespace

int CaseTemplate::degree() const {
  std::vector<bool> mask(variables.size(), false);
  for (std::size_t i = 0; i < unknown_count; ++i) mask[i] = true;
  return lagrangian.total_degree(mask);
}

std::array<double, 2> case9_conditions(double Psi1, double Ups1, double Psi2, double Ups2, double lam, double del,
                                       double gam) {
  const std::array<double, 7> x{Psi1, Ups1, Psi2, Ups2, lam, del, gam};
  const auto& s = case9_standalone();
  return {s[0].evaluate<double>(x), s[1].evaluate<double>(x)};
}

const CaseTemplate& case_template(CaseId c, bool planar) {
  static std::array<std::array<CaseTemplate, 2>, 12> cache;
  static std::once_flag once;
  std::call_once(once, [] {
    for (CaseId id : kAllCases) {
      for (int p = 0; p < 2; ++p) cache[static_cast<std::size_t>(index_of(id))][p] = build(id, p == 1);
    }
  });
  return cache[static_cast<std::size_t>(index_of(c))][planar ? 1 : 0];
}

const RealSystem& case_kkt(CaseId c, bool planar) {
  static std::array<std::array<RealSystem, 2>, 12> cache;
  static std::once_flag once;
  std::call_once(once, [] {
    for (CaseId id : kAllCases) {
      for (int p = 0; p < 2; ++p) {
        const auto& t = case_template(id, p == 1);
        cache[static_cast<std::size_t>(index_of(id))][p] = gradient_system(t.lagrangian, t.variables, t.unknown_count);
      }
    }
  });
  return cache[static_cast<std::size_t>(index_of(c))][planar ? 1 : 0];
}

std::vector<double> template_data(const PentapodDesign& design, const Combination& comb, bool planar) {
  return template_data<double>(design.base, design.platform, comb, planar);
}

// ---------------------------------------------------------------------------
// CaseProblem

CaseProblem::CaseProblem(CaseId id, Combination comb, PentapodDesign design, bool planar)
    : id_(id), comb_(comb), design_(std::move(design)), planar_(planar), tmpl_(&case_template(id, planar)) {
  data_ = template_data(design_, comb_, planar_);
}

const std::vector<std::string>& CaseProblem::unknown_names() const { return tmpl_->variables; }

double CaseProblem::objective(std::span<const double> unknowns) const {
  std::vector<double> x(tmpl_->unknown_count, 0.0);
  std::copy_n(unknowns.begin(), std::min(unknowns.size(), x.size()), x.begin());
  x.insert(x.end(), data_.begin(), data_.end());
  return tmpl_->objective.evaluate<double>(x);
}

std::vector<double> CaseProblem::constraint_values(std::span<const double> unknowns) const {
  std::vector<double> x(tmpl_->unknown_count, 0.0);
  std::copy_n(unknowns.begin(), std::min(unknowns.size(), x.size()), x.begin());
  x.insert(x.end(), data_.begin(), data_.end());
  std::vector<double> out;
  for (const auto& c : tmpl_->constraints) out.push_back(c.evaluate<double>(x));
  return out;
}

const RealSystem& CaseProblem::parametric_kkt() const { return case_kkt(id_, planar_); }

const RealSystem& CaseProblem::kkt() const {
  if (!kkt_) {
    const_cast<CaseProblem*>(this)->kkt_ =
        std::make_shared<RealSystem>(parametric_kkt().instantiate<double>(std::span<const double>(data_)));
  }
  return *kkt_;
}

SingularDesign CaseProblem::embed(std::span<const double> unknowns) const {
  if (unknowns.size() != tmpl_->unknown_count && unknowns.size() != tmpl_->free_count()) {
    throw std::invalid_argument("parameter vector length does not match case " + std::string(to_string(id_)));
  }
  std::vector<double> u(unknowns.begin(), unknowns.end());
  u.resize(tmpl_->unknown_count, 0.0);
  std::array<Eigen::Vector3d, 5> base;
  std::array<double, 5> platform;
  template_design<double>(*tmpl_, u, data_, base, platform);

  SingularDesign s;
  s.id = id_;
  s.combination = comb_;
  s.design = design_;
  for (int j = 0; j < 5; ++j) {
    const auto leg = static_cast<std::size_t>(comb_[static_cast<std::size_t>(j)]);
    s.design.base[leg] = base[static_cast<std::size_t>(j)];
    if (planar_) s.design.base[leg].z() = design_.base[leg].z();
    s.design.platform[leg] = platform[static_cast<std::size_t>(j)];
  }
  for (std::size_t i = 0; i < tmpl_->free_count(); ++i) s.parameters.emplace_back(tmpl_->variables[i], u[i]);
  return s;
}

namespace {

// Affine parameter of p on the line a + t (b - a); nullopt when a = b.
std::optional<double> param_on(const Point3& a, const Point3& b, const Point3& p) {
  const Point3 d = b - a;
  const double n = d.squaredNorm();
  if (!(n > 1e-300)) return std::nullopt;
  return d.dot(p - a) / n;
}

std::optional<double> param_on(double a, double b, double p) {
  if (a == b) return std::nullopt;
  return (p - a) / (b - a);
}

}  // namespace

std::optional<std::vector<double>> CaseProblem::lift(const PentapodDesign& singular) const {
  std::array<Point3, 5> M;
  std::array<double, 5> r;
  for (int j = 0; j < 5; ++j) {
    const auto leg = static_cast<std::size_t>(comb_[static_cast<std::size_t>(j)]);
    M[static_cast<std::size_t>(j)] = singular.base[leg];
    r[static_cast<std::size_t>(j)] = singular.platform[leg];
  }
  std::vector<double> u;
  auto anchor = [&](int j) {
    u.push_back(M[j].x());
    u.push_back(M[j].y());
    if (!planar_) u.push_back(M[j].z());
  };
  bool ok = true;
  auto push = [&](std::optional<double> v) {
    ok = ok && v.has_value();
    u.push_back(v.value_or(0.0));
  };

  switch (id_) {
    case CaseId::C0:
      anchor(0);
      u.push_back(r[0]);
      break;
    case CaseId::C1:
      anchor(0);
      break;
    case CaseId::C2:
    case CaseId::C3a:
      anchor(0);
      anchor(1);
      u.push_back(r[0]);
      push(param_on(M[0], M[1], M[2]));
      break;
    case CaseId::C3b:
      anchor(0);
      anchor(1);
      u.push_back(r[0]);
      u.push_back(r[1]);
      push(param_on(M[0], M[1], M[2]));
      push(param_on(M[0], M[1], M[3]));
      push(param_on(r[0], r[1], r[2]));
      push(param_on(r[0], r[1], r[3]));
      break;
    case CaseId::C4:
      u.push_back(r[0]);
      break;
    case CaseId::C5a:
      anchor(0);
      anchor(2);
      push(param_on(M[0], M[2], M[3]));
      push(param_on(M[0], M[2], M[4]));
      break;
    case CaseId::C5b:
      anchor(0);
      anchor(1);
      push(param_on(M[0], M[1], M[2]));
      push(param_on(M[0], M[1], M[3]));
      push(param_on(M[0], M[1], M[4]));
      break;
    case CaseId::C6:
      anchor(3);
      u.push_back(r[0]);
      break;
    case CaseId::C7:
      anchor(1);
      anchor(2);
      anchor(3);
      u.push_back(r[0]);
      u.push_back(r[3]);
      push(param_on(M[2], M[1], M[0]));
      push(param_on(M[2], M[3], M[4]));
      break;
    case CaseId::C8: {
      anchor(0);
      anchor(3);
      anchor(4);
      u.push_back(r[0]);
      u.push_back(r[3]);
      // X = M4 + Gam (M5 - M4) is the point of the pair's line closest to the
      // triple's line (they meet for a singular design).
      const Point3 d1 = M[1] - M[0], d2 = M[4] - M[3];
      Eigen::Matrix2d g;
      g << d1.dot(d1), -d1.dot(d2), -d1.dot(d2), d2.dot(d2);
      const Eigen::Vector2d rhs(d1.dot(M[3] - M[0]), -d2.dot(M[3] - M[0]));
      const Eigen::FullPivLU<Eigen::Matrix2d> lu(g);
      std::optional<double> gam;
      if (lu.isInvertible()) gam = lu.solve(rhs)[1];
      push(gam);
      const Point3 x = M[3] + gam.value_or(0.0) * d2;
      push(param_on(x, M[0], M[1]));
      push(param_on(x, M[0], M[2]));
      push(param_on(r[3], r[0], r[1]));
      push(param_on(r[3], r[0], r[2]));
      break;
    }
    case CaseId::C9: {
      anchor(0);
      anchor(1);
      anchor(2);
      u.push_back(r[0]);
      u.push_back(r[1]);
      Eigen::Matrix<double, 3, 2> frame;
      frame.col(0) = M[1] - M[0];
      frame.col(1) = M[2] - M[0];
      const Eigen::Matrix2d gram = frame.transpose() * frame;
      const Eigen::FullPivLU<Eigen::Matrix2d> lu(gram);
      for (int j : {3, 4}) {
        if (!lu.isInvertible()) {
          push(std::nullopt);
          push(std::nullopt);
          continue;
        }
        const Eigen::Vector2d c = lu.solve(frame.transpose() * (M[j] - M[0]));
        u.push_back(c[0]);
        u.push_back(c[1]);
      }
      push(param_on(r[0], r[1], r[2]));
      push(param_on(r[0], r[1], r[3]));
      push(param_on(r[0], r[1], r[4]));
      break;
    }
  }
  if (!ok) return std::nullopt;
  u.resize(tmpl_->unknown_count, 0.0);
  return u;
}

}  // namespace pentapod

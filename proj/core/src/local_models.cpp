#include "local_models.hpp"

#include <cmath>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

namespace pentapod::detail {

namespace {

const double kScale = std::sqrt(0.1);

struct Functor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const ResidualFn* f = nullptr;
  int n = 0;
  int m = 0;

  int inputs() const { return n; }
  int values() const { return m; }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
    out.resize(m);
    (*f)(x, out);
    // LM cannot recover from non-finite values; a large penalty steers it back.
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      if (!std::isfinite(out[i])) out[i] = 1e6;
    }
    return 0;
  }
};

// Point of a rational curve: dehomogenized A * (1, s, ..., s^deg).
Eigen::Vector3d curve_point(const Eigen::MatrixXd& a, double s, int coords) {
  Eigen::VectorXd v(a.cols());
  double p = 1.0;
  for (Eigen::Index k = 0; k < v.size(); ++k, p *= s) v[k] = p;
  const Eigen::VectorXd h = a * v;
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (int c = 0; c < coords; ++c) out[c] = h[c] / h[coords];
  return out;
}

// Direct linear fit of a rational curve through points at given parameters.
Eigen::MatrixXd fit_curve(const std::vector<Eigen::Vector3d>& pts, const std::vector<double>& s, int degree,
                          int coords) {
  const int cols = degree + 1;
  const int rows_per = coords;
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pts.size()) * rows_per, (coords + 1) * cols);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double p = 1.0;
    for (int k = 0; k < cols; ++k, p *= s[i]) {
      for (int c = 0; c < coords; ++c) {
        const auto row = static_cast<Eigen::Index>(i) * rows_per + c;
        sys(row, c * cols + k) = p;
        sys(row, coords * cols + k) = -pts[i][c] * p;
      }
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys, Eigen::ComputeFullV);
  const Eigen::VectorXd v = svd.matrixV().col(svd.matrixV().cols() - 1);
  Eigen::MatrixXd a(coords + 1, cols);
  for (int r = 0; r <= coords; ++r) a.row(r) = v.segment(r * cols, cols).transpose();
  return a;
}

Eigen::MatrixXd unpack(const Eigen::VectorXd& x, Eigen::Index offset, int rows, int cols) {
  Eigen::MatrixXd a(rows, cols);
  for (int r = 0; r < rows; ++r) a.row(r) = x.segment(offset + r * cols, cols).transpose();
  return a;
}

void pack(const Eigen::MatrixXd& a, Eigen::VectorXd& x, Eigen::Index offset) {
  for (Eigen::Index r = 0; r < a.rows(); ++r) x.segment(offset + r * a.cols(), a.cols()) = a.row(r).transpose();
}

// Template unknowns themselves; used for every case without side conditions.
class TemplateModel final : public LocalModel {
 public:
  using LocalModel::LocalModel;
  int inputs() const override { return static_cast<int>(problem_.tmpl().free_count()); }

  TemplateDesign design(const Eigen::VectorXd& x) const override {
    std::vector<double> u(x.data(), x.data() + x.size());
    u.resize(problem_.unknown_count(), 0.0);
    TemplateDesign t;
    template_design<double>(problem_.tmpl(), u, problem_.data(), t.base, t.platform);
    return t;
  }

  std::optional<Eigen::VectorXd> seed(const PentapodDesign& d) const override {
    const auto u = problem_.lift(d);
    if (!u) return std::nullopt;
    return Eigen::Map<const Eigen::VectorXd>(u->data(), inputs()).eval();
  }

  std::optional<std::vector<double>> unknowns(const Eigen::VectorXd& x) const override {
    return std::vector<double>(x.data(), x.data() + x.size());
  }
};

// Four legs in projective correspondence between a base line and the
// platform line: M'_j is the image of r'_j under a projective map.
class LineProjectiveModel final : public LocalModel {
 public:
  using LocalModel::LocalModel;
  int inputs() const override { return 2 * (coords_ + 1) + 4; }

  TemplateDesign design(const Eigen::VectorXd& x) const override {
    const Eigen::MatrixXd a = unpack(x, 0, coords_ + 1, 2);
    const Eigen::Index off = 2 * (coords_ + 1);
    TemplateDesign t;
    for (int j = 0; j < 4; ++j) {
      t.platform[j] = x[off + j];
      t.base[j] = curve_point(a, t.platform[j], coords_);
    }
    t.base[4] = data_base(4);
    t.platform[4] = data_platform(4);
    return t;
  }

  std::optional<Eigen::VectorXd> seed(const PentapodDesign& d) const override {
    std::vector<Eigen::Vector3d> pts;
    std::vector<double> s;
    for (int j = 0; j < 4; ++j) {
      const auto leg = static_cast<std::size_t>(problem_.combination()[static_cast<std::size_t>(j)]);
      pts.push_back(d.base[leg]);
      s.push_back(d.platform[leg]);
    }
    Eigen::VectorXd x(inputs());
    pack(fit_curve(pts, s, 1, coords_), x, 0);
    for (int j = 0; j < 4; ++j) x[2 * (coords_ + 1) + j] = s[static_cast<std::size_t>(j)];
    return x;
  }
};

// A projective triple whose base line meets the line of a pair sharing one
// platform coordinate; the meeting point corresponds to that coordinate.
class MeetingLinesModel final : public LocalModel {
 public:
  using LocalModel::LocalModel;
  int inputs() const override { return 2 * (coords_ + 1) + 3 + 1 + coords_ + 1; }

  TemplateDesign design(const Eigen::VectorXd& x) const override {
    const Eigen::MatrixXd a = unpack(x, 0, coords_ + 1, 2);
    Eigen::Index off = 2 * (coords_ + 1);
    TemplateDesign t;
    for (int j = 0; j < 3; ++j) {
      t.platform[j] = x[off + j];
      t.base[j] = curve_point(a, t.platform[j], coords_);
    }
    off += 3;
    const double r4 = x[off++];
    const Eigen::Vector3d meet = curve_point(a, r4, coords_);
    Eigen::Vector3d m4 = Eigen::Vector3d::Zero();
    for (int c = 0; c < coords_; ++c) m4[c] = x[off++];
    const double s = x[off];
    t.base[3] = m4;
    t.base[4] = meet + s * (m4 - meet);
    t.platform[3] = t.platform[4] = r4;
    return t;
  }

  std::optional<Eigen::VectorXd> seed(const PentapodDesign& d) const override {
    const auto& comb = problem_.combination();
    std::vector<Eigen::Vector3d> pts;
    std::vector<double> s;
    for (int j = 0; j < 3; ++j) {
      pts.push_back(d.base[static_cast<std::size_t>(comb[static_cast<std::size_t>(j)])]);
      s.push_back(d.platform[static_cast<std::size_t>(comb[static_cast<std::size_t>(j)])]);
    }
    const auto p4 = static_cast<std::size_t>(comb[3]), p5 = static_cast<std::size_t>(comb[4]);
    const double r4 = 0.5 * (d.platform[p4] + d.platform[p5]);
    const Eigen::MatrixXd a = fit_curve(pts, s, 1, coords_);
    const Eigen::Vector3d meet = curve_point(a, r4, coords_);
    Eigen::Vector3d m4 = d.base[p4], m5 = d.base[p5];
    if (coords_ == 2) m4.z() = m5.z() = 0.0;
    const Eigen::Vector3d dir = m4 - meet;
    const double nn = dir.squaredNorm();
    const double along = nn > 0.0 ? dir.dot(m5 - meet) / nn : 1.0;

    Eigen::VectorXd x(inputs());
    pack(a, x, 0);
    Eigen::Index off = 2 * (coords_ + 1);
    for (int j = 0; j < 3; ++j) x[off++] = s[static_cast<std::size_t>(j)];
    x[off++] = r4;
    for (int c = 0; c < coords_; ++c) x[off++] = m4[c];
    x[off] = along;
    return x;
  }
};

// All five legs on a conic parametrized by the platform coordinate.
class ConicModel final : public LocalModel {
 public:
  using LocalModel::LocalModel;
  int inputs() const override { return 3 * (coords_ + 1) + 5; }

  TemplateDesign design(const Eigen::VectorXd& x) const override {
    const Eigen::MatrixXd a = unpack(x, 0, coords_ + 1, 3);
    const Eigen::Index off = 3 * (coords_ + 1);
    TemplateDesign t;
    for (int j = 0; j < 5; ++j) {
      t.platform[j] = x[off + j];
      t.base[j] = curve_point(a, t.platform[j], coords_);
    }
    return t;
  }

  std::optional<Eigen::VectorXd> seed(const PentapodDesign& d) const override {
    std::vector<Eigen::Vector3d> pts;
    std::vector<double> s;
    for (int j = 0; j < 5; ++j) {
      const auto leg = static_cast<std::size_t>(problem_.combination()[static_cast<std::size_t>(j)]);
      pts.push_back(d.base[leg]);
      s.push_back(d.platform[leg]);
    }
    Eigen::VectorXd x(inputs());
    pack(fit_curve(pts, s, 2, coords_), x, 0);
    for (int j = 0; j < 5; ++j) x[3 * (coords_ + 1) + j] = s[static_cast<std::size_t>(j)];
    return x;
  }
};

}  // namespace

LocalModel::LocalModel(const CaseProblem& problem) : problem_(problem), coords_(problem.planar() ? 2 : 3) {}

Eigen::Vector3d LocalModel::data_base(int j) const {
  const auto& d = problem_.data();
  const auto stride = static_cast<std::size_t>(coords_ + 1);
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  for (int c = 0; c < coords_; ++c) p[c] = d[static_cast<std::size_t>(j) * stride + static_cast<std::size_t>(c)];
  return p;
}

double LocalModel::data_platform(int j) const {
  const auto stride = static_cast<std::size_t>(coords_ + 1);
  return problem_.data()[static_cast<std::size_t>(j) * stride + static_cast<std::size_t>(coords_)];
}

PentapodDesign LocalModel::to_input(const TemplateDesign& t) const {
  PentapodDesign out = problem_.design();
  for (int j = 0; j < 5; ++j) {
    const auto leg = static_cast<std::size_t>(problem_.combination()[static_cast<std::size_t>(j)]);
    out.base[leg].head(coords_) = t.base[static_cast<std::size_t>(j)].head(coords_);
    out.platform[leg] = t.platform[static_cast<std::size_t>(j)];
  }
  return out;
}

std::optional<std::vector<double>> LocalModel::unknowns(const Eigen::VectorXd& x) const {
  const auto u = problem_.lift(to_input(design(x)));
  if (!u) return std::nullopt;
  return std::vector<double>(u->begin(), u->begin() + static_cast<std::ptrdiff_t>(problem_.tmpl().free_count()));
}

void LocalModel::residual(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
  const TemplateDesign t = design(x);
  f.resize(values());
  Eigen::Index k = 0;
  for (int j = 0; j < 5; ++j) {
    const Eigen::Vector3d d = data_base(j);
    for (int c = 0; c < coords_; ++c) f[k++] = kScale * (t.base[static_cast<std::size_t>(j)][c] - d[c]);
    f[k++] = kScale * (t.platform[static_cast<std::size_t>(j)] - data_platform(j));
  }
}

std::unique_ptr<LocalModel> make_local_model(const CaseProblem& problem) {
  switch (problem.id()) {
    case CaseId::C3b: return std::make_unique<LineProjectiveModel>(problem);
    case CaseId::C8: return std::make_unique<MeetingLinesModel>(problem);
    case CaseId::C9: return std::make_unique<ConicModel>(problem);
    default: return std::make_unique<TemplateModel>(problem);
  }
}

PentapodDesign random_design(const PentapodDesign& center, double half_width, bool planar, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  Point3 mean = Point3::Zero();
  double rmean = 0.0;
  for (int i = 0; i < 5; ++i) {
    mean += center.base[static_cast<std::size_t>(i)] / 5.0;
    rmean += center.platform[static_cast<std::size_t>(i)] / 5.0;
  }
  PentapodDesign d = center;
  for (std::size_t i = 0; i < 5; ++i) {
    for (int c = 0; c < (planar ? 2 : 3); ++c) d.base[i][c] = mean[c] + u(rng);
    d.platform[i] = rmean + u(rng);
  }
  return d;
}

Eigen::VectorXd levenberg_marquardt(const ResidualFn& f, int values, Eigen::VectorXd x, int max_evaluations) {
  Functor functor;
  functor.f = &f;
  functor.n = static_cast<int>(x.size());
  functor.m = values;
  Eigen::NumericalDiff<Functor, Eigen::Central> diff(functor);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Functor, Eigen::Central>> lm(diff);
  lm.parameters.xtol = 1e-15;
  lm.parameters.ftol = 1e-15;
  lm.parameters.maxfev = max_evaluations;
  lm.minimize(x);
  return x;
}

Eigen::VectorXd levenberg_marquardt(const LocalModel& model, Eigen::VectorXd x, int max_evaluations) {
  const ResidualFn f = [&model](const Eigen::VectorXd& v, Eigen::VectorXd& out) { model.residual(v, out); };
  return levenberg_marquardt(f, model.values(), std::move(x), max_evaluations);
}

}  // namespace pentapod::detail

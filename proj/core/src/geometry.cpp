#include "pentapod/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace pentapod {

bool PentapodDesign::operator==(const PentapodDesign& other) const {
  for (int i = 0; i < 5; ++i) {
    if (base[i] != other.base[i] || platform[i] != other.platform[i]) return false;
  }
  return true;
}

bool PentapodDesign::finite() const {
  for (int i = 0; i < 5; ++i) {
    if (!base[i].allFinite() || !std::isfinite(platform[i])) return false;
  }
  return true;
}

bool PentapodDesign::planar(double tol) const {
  return std::all_of(base.begin(), base.end(),
                     [tol](const Point3& p) { return std::abs(p.z()) < tol; });
}

PentapodDesign PentapodDesign::permuted(const std::array<int, 5>& legs) const {
  PentapodDesign out;
  for (int j = 0; j < 5; ++j) {
    out.base[j] = base[legs[j]];
    out.platform[j] = platform[legs[j]];
  }
  return out;
}

PentapodDesign PentapodDesign::scaled(double s) const {
  PentapodDesign out = *this;
  for (int i = 0; i < 5; ++i) {
    out.base[i] *= s;
    out.platform[i] *= s;
  }
  return out;
}

double PentapodDesign::diameter() const {
  double d = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) {
      d = std::max(d, (base[i] - base[j]).norm());
      d = std::max(d, std::abs(platform[i] - platform[j]));
    }
  }
  return d;
}

double distance_sq(const PentapodDesign& a, const PentapodDesign& b) {
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    sum += (a.base[i] - b.base[i]).squaredNorm();
    const double dr = a.platform[i] - b.platform[i];
    sum += dr * dr;
  }
  return sum / 10.0;
}

double distance(const PentapodDesign& a, const PentapodDesign& b) {
  return std::sqrt(distance_sq(a, b));
}

IsotropicPoint to_isotropic(double x, double y) {
  return {{x, y}, {x, -y}};
}

std::array<std::complex<double>, 2> from_isotropic_complex(const IsotropicPoint& q) {
  const std::complex<double> two_i{0.0, 2.0};
  return {(q.p + q.pbar) / 2.0, (q.p - q.pbar) / two_i};
}

std::array<double, 2> from_isotropic(const IsotropicPoint& q) {
  const auto xy = from_isotropic_complex(q);
  return {xy[0].real(), xy[1].real()};
}

IsotropicDesign to_isotropic(const PentapodDesign& d, double tol) {
  if (!d.planar(tol)) throw GeometryError("isotropic form requires planar base");
  IsotropicDesign out;
  for (int i = 0; i < 5; ++i) {
    out.base[i] = to_isotropic(d.base[i].x(), d.base[i].y());
    out.platform[i] = d.platform[i];
  }
  return out;
}

std::complex<double> distance_sq_isotropic(const IsotropicDesign& a, const IsotropicDesign& b) {
  std::complex<double> sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    sum += (a.base[i].p - b.base[i].p) * (a.base[i].pbar - b.base[i].pbar);
    const double dr = a.platform[i] - b.platform[i];
    sum += dr * dr;
  }
  return sum / 10.0;
}

double platform_radius(std::span<const PlatformCoord> platform) {
  if (platform.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(platform.begin(), platform.end());
  return (*hi - *lo) / 2.0;
}

Rescaled rescale(const PentapodDesign& design) {
  const Ball ball = min_enclosing_ball(design.base);
  const double rho2 = platform_radius(design.platform);
  const double rho = std::max(ball.radius, rho2);
  if (!(rho > 0.0)) throw GeometryError("degenerate design, scale undefined");
  Rescaled out;
  out.factor = 1.0 / rho;
  out.design = design.scaled(out.factor);
  out.base_radius = ball.radius;
  out.platform_radius = rho2;
  return out;
}

RegressionLine tls_line(std::span<const Point3> points, std::span<const double> weights) {
  if (points.size() < 2) throw GeometryError("regression line needs at least two points");
  if (!weights.empty() && weights.size() != points.size()) {
    throw GeometryError("regression weights must match point count");
  }
  auto weight = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };

  double total = 0.0;
  Point3 centroid = Point3::Zero();
  for (std::size_t i = 0; i < points.size(); ++i) {
    centroid += weight(i) * points[i];
    total += weight(i);
  }
  centroid /= total;

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point3 d = points[i] - centroid;
    scatter += weight(i) * d * d.transpose();
  }
  const double trace = scatter.trace();
  if (trace <= 1e-300) throw GeometryError("regression line undefined: all points coincide");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  RegressionLine line;
  line.anchor = centroid;
  line.direction = eig.eigenvectors().col(2).normalized();
  for (int k = 0; k < 3; ++k) {
    if (std::abs(line.direction[k]) > 1e-14) {
      if (line.direction[k] < 0) line.direction = -line.direction;
      break;
    }
  }
  line.residual = std::max(0.0, trace - eig.eigenvalues()[2]);
  line.pedal_points.reserve(points.size());
  for (const auto& p : points) {
    line.pedal_points.push_back(centroid + line.direction * line.direction.dot(p - centroid));
  }
  return line;
}

double conic_index(std::span<const Point3, 5> base, const Point3& vertex) {
  for (const auto& p : base) {
    if (std::abs(p.z()) >= kPlanarTolerance) throw GeometryError("conic index requires a planar base");
  }
  if (std::abs(vertex.z()) >= kPlanarTolerance) throw GeometryError("conic index requires a planar vertex");
  Eigen::Matrix<double, 6, 6> m;
  auto fill = [&m](int row, const Point3& p) {
    const double x = p.x(), y = p.y();
    m.row(row) << x * x, x * y, y * y, x, y, 1.0;
  };
  fill(0, vertex);
  for (int i = 0; i < 5; ++i) fill(i + 1, base[i]);
  return m.determinant();
}

Point3 sweep_point(double t, const SweepLine& line) {
  const Point3 d = line.vertex - line.initial;
  const double n = d.norm();
  if (!(n > 0.0)) throw GeometryError("sweep line undefined: vertex equals initial point");
  return line.vertex + t * d / n;
}

bool certify_uncertainty(std::span<const double, 10> radii, double distance) {
  return std::all_of(radii.begin(), radii.end(), [distance](double r) { return r < distance; });
}

}  // namespace pentapod

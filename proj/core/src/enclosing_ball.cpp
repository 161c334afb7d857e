#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pentapod/geometry.hpp"

namespace pentapod {

bool Ball::contains(const Point3& p, double tol) const {
  return (p - center).norm() <= radius + tol;
}

namespace {

// Ball with all given points on its boundary and center in their affine hull.
std::optional<Ball> circumball(const std::vector<Point3>& pts) {
  if (pts.empty()) return std::nullopt;
  const Point3& a = pts.front();
  if (pts.size() == 1) return Ball{a, 0.0};
  const int k = static_cast<int>(pts.size()) - 1;
  Eigen::MatrixXd edges(3, k);
  for (int i = 0; i < k; ++i) edges.col(i) = pts[i + 1] - a;
  const Eigen::MatrixXd gram = edges.transpose() * edges;
  Eigen::VectorXd rhs(k);
  for (int i = 0; i < k; ++i) rhs[i] = 0.5 * edges.col(i).squaredNorm();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) return std::nullopt;
  const Point3 center = a + edges * lu.solve(rhs);
  double radius = 0.0;
  for (const auto& p : pts) radius = std::max(radius, (p - center).norm());
  return Ball{center, radius};
}

double containment_tolerance(std::span<const Point3> pts) {
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  return 1e-12 * std::max(1.0, scale);
}

bool contains_all(const Ball& b, std::span<const Point3> pts, double tol) {
  return std::all_of(pts.begin(), pts.end(), [&](const Point3& p) { return b.contains(p, tol); });
}

Ball welzl(std::vector<Point3>& pts, std::size_t n, std::vector<Point3>& boundary, double tol) {
  if (n == 0 || boundary.size() == 4) {
    if (boundary.empty()) return Ball{Point3::Zero(), -1.0};
    if (auto b = circumball(boundary)) return *b;
    return Ball{Point3::Zero(), -1.0};
  }
  const Point3 p = pts[n - 1];
  Ball b = welzl(pts, n - 1, boundary, tol);
  if (b.radius >= 0.0 && b.contains(p, tol)) return b;
  boundary.push_back(p);
  b = welzl(pts, n - 1, boundary, tol);
  boundary.pop_back();
  return b;
}

Ball exhaustive(std::span<const Point3> pts, double tol) {
  const int n = static_cast<int>(pts.size());
  Ball best{Point3::Zero(), std::numeric_limits<double>::infinity()};
  for (int mask = 1; mask < (1 << n); ++mask) {
    if (std::popcount(static_cast<unsigned>(mask)) > 4) continue;
    std::vector<Point3> support;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) support.push_back(pts[i]);
    }
    auto b = circumball(support);
    if (b && b->radius < best.radius && contains_all(*b, pts, tol)) best = *b;
  }
  return best;
}

}  // namespace

Ball min_enclosing_ball(std::span<const Point3> points) {
  if (points.empty()) throw GeometryError("enclosing ball of an empty point set");
  const double tol = containment_tolerance(points);

  std::vector<Point3> pts(points.begin(), points.end());
  std::mt19937 rng(0x5eed);
  std::shuffle(pts.begin(), pts.end(), rng);
  std::vector<Point3> boundary;
  Ball b = welzl(pts, pts.size(), boundary, tol);
  if (b.radius >= 0.0 && contains_all(b, points, tol)) return b;
  // Degenerate support sets (collinear/coplanar ties) can defeat the recursion.
  if (points.size() <= 5) return exhaustive(points, tol);
  throw GeometryError("enclosing ball computation failed");
}

}  // namespace pentapod

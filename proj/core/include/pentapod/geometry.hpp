#pragma once

#include <array>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pentapod {

/// Base anchor point in the fixed frame.
using Point3 = Eigen::Vector3d;

/// Platform anchors are collinear, so each one is a single coordinate along
/// the platform line.
using PlatformCoord = double;

/// Thrown for invalid geometric input (non-planar data where a planar base is
/// required, empty point sets, degenerate scales).
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Planarity threshold on |z| used by auto-detection.
inline constexpr double kPlanarTolerance = 1e-9;

struct PentapodDesign {
  std::array<Point3, 5> base{Point3::Zero(), Point3::Zero(), Point3::Zero(),
                             Point3::Zero(), Point3::Zero()};
  std::array<PlatformCoord, 5> platform{};

  bool operator==(const PentapodDesign& other) const;

  /// True when every coordinate is finite.
  bool finite() const;
  /// True when every base z-coordinate is below `tol` in magnitude.
  bool planar(double tol = kPlanarTolerance) const;
  /// Returns the design with legs reordered: result leg j = this leg legs[j].
  PentapodDesign permuted(const std::array<int, 5>& legs) const;
  /// Uniformly scaled copy (both frames about their origins).
  PentapodDesign scaled(double s) const;
  /// Largest pairwise distance among base anchors and among platform anchors.
  double diameter() const;
};

/// Squared architecture-singularity metric between two designs:
/// (1/10) * sum_i (|M'_i - M_i|^2 + (r'_i - r_i)^2).
double distance_sq(const PentapodDesign& a, const PentapodDesign& b);
double distance(const PentapodDesign& a, const PentapodDesign& b);

// Isotropic coordinates ------------------------------------------------------

struct IsotropicPoint {
  std::complex<double> p;
  std::complex<double> pbar;
};

IsotropicPoint to_isotropic(double x, double y);
std::array<double, 2> from_isotropic(const IsotropicPoint& q);
/// Complex-valued inverse used when p and pbar are independent unknowns.
std::array<std::complex<double>, 2> from_isotropic_complex(const IsotropicPoint& q);

struct IsotropicDesign {
  std::array<IsotropicPoint, 5> base;
  std::array<PlatformCoord, 5> platform{};
};

/// Throws GeometryError("isotropic form requires planar base") for non-planar input.
IsotropicDesign to_isotropic(const PentapodDesign& d, double tol = kPlanarTolerance);

/// (1/10) sum_i [(p_i - p'_i)(pbar_i - pbar'_i) + (r_i - r'_i)^2]. Real-valued
/// (zero imaginary part) whenever both designs came from real coordinates.
std::complex<double> distance_sq_isotropic(const IsotropicDesign& a, const IsotropicDesign& b);

// Enclosing balls --------------------------------------------------------------

struct Ball {
  Point3 center = Point3::Zero();
  double radius = 0.0;

  bool contains(const Point3& p, double tol) const;
};

/// Smallest ball containing all points (1 to 5 points). Throws on empty input.
Ball min_enclosing_ball(std::span<const Point3> points);

/// Half the spread of the platform coordinates (a 0-sphere on the line).
double platform_radius(std::span<const PlatformCoord> platform);

struct Rescaled {
  PentapodDesign design;
  /// Multiplicative factor applied to every coordinate, 1 / max(rho1, rho2).
  double factor = 1.0;
  double base_radius = 0.0;
  double platform_radius = 0.0;
};

/// Scales the design so that max(rho1, rho2) = 1.
Rescaled rescale(const PentapodDesign& design);

// Regression line --------------------------------------------------------------

struct RegressionLine {
  Point3 anchor = Point3::Zero();  // centroid of the input points
  Point3 direction = Point3::UnitX();
  std::vector<Point3> pedal_points;
  double residual = 0.0;  // sum of squared orthogonal distances
};

/// Weighted total-least-squares line. Weights default to 1. Throws when all
/// points coincide.
RegressionLine tls_line(std::span<const Point3> points, std::span<const double> weights = {});

// Conic index and sweep ---------------------------------------------------------

/// 6x6 determinant with rows (x^2, xy, y^2, x, y, 1) for B and the five base
/// anchors; vanishes iff the six points lie on a common conic.
double conic_index(std::span<const Point3, 5> base, const Point3& vertex);

struct SweepLine {
  Point3 vertex{1.0, 1.0, 0.0};
  Point3 initial{-1.0, -1.0, 0.0};
};

/// vertex + t * (vertex - initial) / |vertex - initial|.
Point3 sweep_point(double t, const SweepLine& line = {});

/// True iff every uncertainty radius is strictly below the distance D.
bool certify_uncertainty(std::span<const double, 10> radii, double distance);

}  // namespace pentapod

#pragma once

// Designs and small helpers shared by the unit and acceptance suites.

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "pentapod/pentapod.hpp"

namespace fixtures {

using pentapod::PentapodDesign;
using pentapod::Point3;

/// Non-planar reference design with rational base coordinates.
inline PentapodDesign spatial_example() {
  PentapodDesign d;
  d.base = {Point3(0, 0, 0), Point3(14.0 / 33, 0, 0), Point3(8.0 / 33, 4.0 / 33, 0),
            Point3(7.0 / 33, 29.0 / 33, 32.0 / 33), Point3(0.5, -0.25, 2.0 / 3)};
  d.platform = {0.0, 0.4, 1.0, 1.3, 1.8};
  return d;
}

/// Planar template whose fifth base anchor moves along the sweep line.
inline PentapodDesign planar_template() {
  PentapodDesign d;
  d.base = {Point3(0, 2, 0), Point3(-1.5, 2.25, 0), Point3(-3, 1, 0), Point3(-1, 0, 0), Point3(-1, -1, 0)};
  d.platform = {0.0, 1.0, 2.0, 3.0, 4.0};
  return d;
}

inline PentapodDesign planar_at(double t) { return pentapod::sweep_design(planar_template(), t, {}); }

/// Sweep parameter at which the planar family becomes singular.
inline double singular_t() { return -28.0 * std::numbers::sqrt2 / 31.0; }

inline constexpr double kReferenceT = 0.383206;

/// Five-point case-9 minimizer of the spatial example, given to ten digits.
inline PentapodDesign reference_case9() {
  PentapodDesign d;
  d.base = {Point3(0.2298889247, 0.0071714756, -0.0109452093), Point3(0.2257849117, 0.0201911288, -0.0108456958),
            Point3(0.2114583372, 0.0933776496, 0.0221428966), Point3(0.2166543290, 0.8807826507, 0.9680554467),
            Point3(0.4950013702, -0.2515229039, 0.6679561979)};
  d.platform = {0.0016583117, 0.3964556801, 1.0026262356, 1.2997972749, 1.7994624976};
  return d;
}

inline PentapodDesign random_design(std::mt19937_64& rng, bool planar, double half_width = 1.0) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  PentapodDesign d;
  for (auto& p : d.base) p = Point3(u(rng), u(rng), planar ? 0.0 : u(rng));
  for (auto& r : d.platform) r = u(rng);
  return d;
}

inline std::string data_dir() { return PENTAPOD_TEST_DATA_DIR; }
inline std::string abinitio_dir() { return data_dir() + "/abinitio"; }

}  // namespace fixtures

#pragma once

// Constraint-free parametrizations of each case used for local descent.
// Every model maps its own parameter vector to a case design in template
// order and converts a converged parameter vector back to case unknowns.

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pentapod/cases.hpp"

namespace pentapod::detail {

struct TemplateDesign {
  std::array<Eigen::Vector3d, 5> base;
  std::array<double, 5> platform{};
};

class LocalModel {
 public:
  explicit LocalModel(const CaseProblem& problem);
  virtual ~LocalModel() = default;

  virtual int inputs() const = 0;
  /// Case design in template order for parameters x.
  virtual TemplateDesign design(const Eigen::VectorXd& x) const = 0;
  /// Starting parameters fitted to an arbitrary design (input leg order).
  virtual std::optional<Eigen::VectorXd> seed(const PentapodDesign& d) const = 0;
  /// Free case unknowns for parameters x.
  virtual std::optional<std::vector<double>> unknowns(const Eigen::VectorXd& x) const;

  int values() const { return 5 * (coords_ + 1); }
  /// Scaled differences to the input data, so that |f|^2 is the squared distance.
  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& f) const;

 protected:
  /// Input design positions in template order.
  Eigen::Vector3d data_base(int j) const;
  double data_platform(int j) const;
  /// Writes a template-order design back into input leg order.
  PentapodDesign to_input(const TemplateDesign& t) const;

  const CaseProblem& problem_;
  int coords_;
};

std::unique_ptr<LocalModel> make_local_model(const CaseProblem& problem);

/// Uniform random design in a box of the given half-width around the
/// centroids of `center`. Planar designs keep their z-coordinates.
PentapodDesign random_design(const PentapodDesign& center, double half_width, bool planar, std::mt19937_64& rng);

/// Levenberg-Marquardt with central differences; returns the final parameters.
Eigen::VectorXd levenberg_marquardt(const LocalModel& model, Eigen::VectorXd x, int max_evaluations = 4000);

/// Generic least-squares driver over a plain residual callback.
using ResidualFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;
Eigen::VectorXd levenberg_marquardt(const ResidualFn& f, int values, Eigen::VectorXd x, int max_evaluations = 4000);

}  // namespace pentapod::detail

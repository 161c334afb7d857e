#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pentapod/cases.hpp"
#include "pentapod/polysys.hpp"

namespace pentapod {

using VectorXcd = Eigen::VectorXcd;
using MatrixXcd = Eigen::MatrixXcd;

struct SolveConfig {
  double newton_tolerance = 1e-12;
  int max_newton_steps = 50;
  double real_threshold = 1e-8;
  double dedup_radius = 1e-8;
  int multistart_count = 512;
  std::uint64_t seed = 0x5eed;
  double min_step = 1e-30;
  int max_steps = 60000;
  double endgame_start = 0.005;
  double infinity_threshold = 1e8;
  /// Relative corrector tolerance during path tracking.
  double tracking_tolerance = 1e-8;
  /// Worker threads; 0 selects the hardware concurrency.
  unsigned threads = 0;
};

enum class RootKind { Real, Complex, AtInfinity, Failed };
std::string_view to_string(RootKind k);

struct Solution {
  VectorXcd point;
  double residual = 0.0;
  RootKind kind = RootKind::Failed;
  /// Squared distance for real solutions of a case problem, NaN otherwise.
  double objective = std::numeric_limits<double>::quiet_NaN();
};

struct SolutionSet {
  std::vector<Solution> solutions;
  std::string backend;
  std::size_t paths = 0;
  std::size_t path_failures = 0;
  std::size_t at_infinity = 0;
  std::size_t retries = 0;
};

/// Deterministic per-task seed derived from a run seed.
std::uint64_t task_seed(std::uint64_t seed, std::uint64_t index);

// Newton -------------------------------------------------------------------------

template <class T>
struct PolishResult {
  VectorX<T> point;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton iteration on a square system in its unknowns (all data
/// parameters must already be bound). Never throws on divergence; reports
/// converged = false ("polish failed").
PolishResult<double> newton_polish(const RealSystem& sys, const Eigen::VectorXd& start, const SolveConfig& cfg = {});
PolishResult<std::complex<double>> newton_polish(const ComplexSystem& sys, const VectorXcd& start,
                                                 const SolveConfig& cfg = {});
PolishResult<std::complex<double>> newton_polish(const CompiledSystem<std::complex<double>>& sys,
                                                 const VectorXcd& start, const SolveConfig& cfg = {});
PolishResult<double> newton_polish(const CompiledSystem<double>& sys, const Eigen::VectorXd& start,
                                   const SolveConfig& cfg = {});

// Homotopies -------------------------------------------------------------------------

/// H(x, t) with t running from 1 (start) to 0 (target).
class Homotopy {
 public:
  virtual ~Homotopy() = default;
  virtual std::size_t dim() const = 0;
  virtual void evaluate(const VectorXcd& x, double t, VectorXcd& h, MatrixXcd& hx, VectorXcd& ht) const = 0;
  /// Target system at t = 0, used for the final polish.
  virtual const CompiledSystem<std::complex<double>>& target() const = 0;
};

/// t * gamma * G + (1 - t) * F for two systems over the same unknowns.
class LinearHomotopy final : public Homotopy {
 public:
  LinearHomotopy(const ComplexSystem& start, const ComplexSystem& target, std::complex<double> gamma);
  std::size_t dim() const override { return n_; }
  void evaluate(const VectorXcd& x, double t, VectorXcd& h, MatrixXcd& hx, VectorXcd& ht) const override;
  const CompiledSystem<std::complex<double>>& target() const override { return target_; }

 private:
  std::size_t n_;
  CompiledSystem<std::complex<double>> start_, target_;
  std::complex<double> gamma_;
};

/// Total-degree homotopy: start system x_i^{d_i} - 1 with the gamma trick.
class TotalDegreeHomotopy final : public Homotopy {
 public:
  TotalDegreeHomotopy(const ComplexSystem& target, std::complex<double> gamma);
  std::size_t dim() const override { return n_; }
  void evaluate(const VectorXcd& x, double t, VectorXcd& h, MatrixXcd& hx, VectorXcd& ht) const override;
  const CompiledSystem<std::complex<double>>& target() const override { return target_; }
  /// Number of start solutions (product of degrees).
  std::uint64_t path_count() const;
  /// The k-th start solution (mixed-radix enumeration of roots of unity).
  VectorXcd start_point(std::uint64_t k) const;
  const std::vector<int>& degrees() const { return degrees_; }

 private:
  std::size_t n_;
  std::vector<int> degrees_;
  CompiledSystem<std::complex<double>> target_;
  std::complex<double> gamma_;
};

/// Deforms the data parameters of a parametric system along
/// p(t) = t * p_start + (1 - t) * p_target.
class ParameterHomotopy final : public Homotopy {
 public:
  ParameterHomotopy(const RealSystem& parametric, VectorXcd p_start, VectorXcd p_target);
  std::size_t dim() const override { return n_; }
  void evaluate(const VectorXcd& x, double t, VectorXcd& h, MatrixXcd& hx, VectorXcd& ht) const override;
  const CompiledSystem<std::complex<double>>& target() const override { return target_; }

 private:
  std::size_t n_;
  CompiledSystem<double> system_;
  CompiledSystem<std::complex<double>> target_;
  VectorXcd p_start_, p_target_;
};

enum class PathStatus { Success, AtInfinity, Failed };

struct PathResult {
  VectorXcd endpoint;
  PathStatus status = PathStatus::Failed;
  int steps = 0;
  double t_reached = 1.0;
  double residual = 0.0;
};

/// Adaptive RK4 predictor with Newton corrector from t = 1 to t = 0.
PathResult track_path(const Homotopy& h, const VectorXcd& start, const SolveConfig& cfg = {});

/// Tracks every start point in parallel; result order follows the input order.
std::vector<PathResult> track_paths(const Homotopy& h, const std::vector<VectorXcd>& starts,
                                    const SolveConfig& cfg = {});

// Ab-initio and parameter homotopy ----------------------------------------------------------

/// Generic complex instance with its valid finite KKT solutions.
struct AbInitioData {
  CaseId id{};
  bool planar = false;
  VectorXcd parameters;  // generic complex data vector
  SolutionSet solutions;
};

/// Random generic complex data vector for a template.
VectorXcd generic_parameters(const CaseTemplate& t, std::uint64_t seed);

/// Embeds complex unknowns into complex anchors (template order).
void complex_design(const CaseTemplate& t, const VectorXcd& unknowns, const VectorXcd& params,
                    std::array<Eigen::Vector3cd, 5>& base, std::array<std::complex<double>, 5>& platform);

/// Solves the KKT system of `c` on a random generic complex instance. Planar
/// templates and small spatial ones use a total-degree homotopy; large
/// spatial ones are reached from the planar solutions by a parameter homotopy
/// that lifts the data out of the plane. `progress` (optional) receives the
/// number of finished paths.
AbInitioData ab_initio(CaseId c, bool planar, const SolveConfig& cfg = {},
                       const std::function<void(std::uint64_t, std::uint64_t)>& progress = {});

/// Filters finite endpoints of the KKT system of `t` at `params`: polish,
/// dedup, and drop designs covered by earlier cases (complex tolerance 1e-6).
SolutionSet finite_valid(const CaseTemplate& t, const VectorXcd& params, const std::vector<PathResult>& paths,
                         const SolveConfig& cfg);

/// Tracks ab-initio solutions to the real problem, retrying failed paths with
/// tightened tolerances. Returns real, valid stationary points sorted by
/// objective.
SolutionSet parameter_homotopy(const CaseProblem& problem, const AbInitioData& start, const SolveConfig& cfg = {});

// Local solving ------------------------------------------------------------------------------

/// Least-squares multipliers for a point satisfying the constraints.
void estimate_multipliers(const CaseProblem& problem, Eigen::VectorXd& unknowns);

/// Stationary point search from many seeds (lifted input design, perturbed
/// copies at three scales, uniform random points), each refined by
/// Levenberg-Marquardt descent on a constraint-free model of the case and
/// polished on the KKT system. Returns real valid solutions sorted by
/// objective.
SolutionSet multistart_minimize(const CaseProblem& problem, const SolveConfig& cfg = {});

struct OracleResult {
  SingularDesign singular;
  double distance = std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
};

/// Independent upper bound: samples random designs in a box around the input
/// (half-width twice the design diameter), forces them into the case by
/// projection and elimination of the constrained parameter, and polishes the
/// best one percent with finite-difference Levenberg-Marquardt.
OracleResult brute_force_oracle(const CaseProblem& problem, std::size_t sample_count, const SolveConfig& cfg = {});

// Serialization ------------------------------------------------------------------------------

/// Line format: "<case> <combination> <D> <n> <re_1> <im_1> ... <re_n> <im_n> <residual>",
/// with '#' comment lines. Ab-initio files carry the generic parameters in a
/// "# parameters" header.
void write_solutions(std::ostream& out, CaseId c, const Combination& comb, const SolutionSet& set);
void write_ab_initio(std::ostream& out, const AbInitioData& data);
AbInitioData read_ab_initio(std::istream& in);

}  // namespace pentapod

#pragma once

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pentapod/geometry.hpp"
#include "pentapod/polynomial.hpp"
#include "pentapod/polysys.hpp"

namespace pentapod {

/// The twelve classes of architecturally singular linear pentapods, in the
/// order used for the exclusion chain (a case excludes all earlier ones).
enum class CaseId { C0, C1, C2, C3a, C3b, C4, C5a, C5b, C6, C7, C8, C9 };

inline constexpr std::array<CaseId, 12> kAllCases{CaseId::C0,  CaseId::C1,  CaseId::C2, CaseId::C3a,
                                                  CaseId::C3b, CaseId::C4,  CaseId::C5a, CaseId::C5b,
                                                  CaseId::C6,  CaseId::C7,  CaseId::C8, CaseId::C9};

inline constexpr int index_of(CaseId c) { return static_cast<int>(c); }

/// "0", "1", "2", "3a", ... as shown in result tables.
std::string_view to_string(CaseId c);
/// Accepts "3a", "c3a" and "C3a".
std::optional<CaseId> parse_case(std::string_view s);

/// Maps template positions to input legs: template leg j is input leg
/// combination[j] (zero-based).
using Combination = std::array<int, 5>;

/// One-based rendering such as "(1,2,5,3,4)".
std::string to_string(const Combination& c);

struct CaseTraits {
  int combinations;
  int unknowns_planar;
  int unknowns_spatial;
  int table_degree;        // degree column of the summary table
  int finite_solutions;    // generic valid root count, -1 when not certified
  int multipliers;
  bool closed_form;
};

const CaseTraits& traits(CaseId c);

/// Canonical combination set; symmetric template positions are sorted.
std::vector<Combination> enumerate_combinations(CaseId c);

// Side conditions --------------------------------------------------------------

/// lam*del*(Lam - Del) + lam*(Del - Lam*Del) + del*(Lam*Del - Lam).
double side_condition_S(double Lam, double Del, double lam, double del);

/// Cross-ratio (a, b; c, d) = (c - a)(d - b) / ((c - b)(d - a)).
double cross_ratio(double a, double b, double c, double d);

/// The two determinant conditions of the conic-type case, expanded once.
std::array<double, 2> case9_conditions(double Psi1, double Ups1, double Psi2, double Ups2, double lam,
                                       double del, double gam);

/// The literal 5x5 matrices whose determinants are S1 and S2.
std::array<Eigen::Matrix<double, 5, 5>, 2> case9_matrices(double Psi1, double Ups1, double Psi2, double Ups2,
                                                          double lam, double del, double gam);

// Case templates ------------------------------------------------------------------

/// Polynomial description of one case. Variables are the unknowns (anchor
/// coordinates, then scalar parameters, then multipliers) followed by the data
/// parameters: for each template position j the input coordinates x, y, (z), r.
struct CaseTemplate {
  CaseId id{};
  bool planar = false;
  std::vector<std::string> variables;
  std::size_t unknown_count = 0;     // including multipliers
  std::size_t multiplier_count = 0;
  std::array<std::array<RealPolynomial, 3>, 5> base;
  std::array<RealPolynomial, 5> platform;
  std::vector<RealPolynomial> constraints;
  RealPolynomial objective;   // squared distance
  RealPolynomial lagrangian;  // objective + sum of multiplier * constraint

  std::size_t free_count() const { return unknown_count - multiplier_count; }
  std::size_t data_count() const { return variables.size() - unknown_count; }
  std::size_t coords() const { return planar ? 2 : 3; }
  int degree() const;  // total degree of the Lagrangian in the unknowns
};

/// Cached immutable template.
const CaseTemplate& case_template(CaseId c, bool planar);
/// Cached gradient system of the template's Lagrangian, data parameters kept
/// as trailing variables.
const RealSystem& case_kkt(CaseId c, bool planar);

/// Data vector of a template for `design` under `comb`.
template <class T>
std::vector<T> template_data(const std::array<Eigen::Matrix<T, 3, 1>, 5>& base, const std::array<T, 5>& platform,
                             const Combination& comb, bool planar) {
  std::vector<T> out;
  out.reserve(planar ? 15 : 20);
  for (int j = 0; j < 5; ++j) {
    const int leg = comb[j];
    out.push_back(base[leg].x());
    out.push_back(base[leg].y());
    if (!planar) out.push_back(base[leg].z());
    out.push_back(platform[leg]);
  }
  return out;
}

std::vector<double> template_data(const PentapodDesign& design, const Combination& comb, bool planar);

/// Candidate architecturally singular design.
struct SingularDesign {
  CaseId id{};
  Combination combination{};
  PentapodDesign design;  // in input leg order
  /// Free parameters by name, in the template's unknown order.
  std::vector<std::pair<std::string, double>> parameters;
};

/// A case and combination bound to an input design.
class CaseProblem {
 public:
  CaseProblem(CaseId id, Combination comb, PentapodDesign design, bool planar);

  CaseId id() const { return id_; }
  const Combination& combination() const { return comb_; }
  const PentapodDesign& design() const { return design_; }
  bool planar() const { return planar_; }
  const CaseTemplate& tmpl() const { return *tmpl_; }
  const std::vector<double>& data() const { return data_; }
  std::size_t unknown_count() const { return tmpl_->unknown_count; }
  const std::vector<std::string>& unknown_names() const;

  /// Squared distance at the given free unknowns (multipliers ignored).
  double objective(std::span<const double> unknowns) const;
  /// KKT system in the unknowns with the data bound.
  const RealSystem& kkt() const;
  /// Parametric KKT system (data parameters kept as trailing variables).
  const RealSystem& parametric_kkt() const;
  /// Constraint values at the given unknowns.
  std::vector<double> constraint_values(std::span<const double> unknowns) const;

  /// Builds the singular design for a full unknown vector.
  SingularDesign embed(std::span<const double> unknowns) const;
  /// Inverse of embed for a design already of this case: recovers the free
  /// unknowns (multipliers set to 0). Returns nullopt when a parameter is
  /// undefined (for instance two anchors that must span a line coincide).
  std::optional<std::vector<double>> lift(const PentapodDesign& singular) const;

 private:
  CaseId id_;
  Combination comb_;
  PentapodDesign design_;
  bool planar_;
  const CaseTemplate* tmpl_;
  std::vector<double> data_;
  std::shared_ptr<RealSystem> kkt_;
};

/// Writes the case design for `unknowns` (any scalar type) in template order.
template <class T>
void template_design(const CaseTemplate& t, std::span<const T> unknowns, std::span<const T> data,
                     std::array<Eigen::Matrix<T, 3, 1>, 5>& base, std::array<T, 5>& platform) {
  std::vector<T> all(unknowns.begin(), unknowns.end());
  all.insert(all.end(), data.begin(), data.end());
  const std::span<const T> x(all);
  for (int j = 0; j < 5; ++j) {
    for (int c = 0; c < 3; ++c) base[j][c] = t.base[j][c].evaluate(x);
    platform[j] = t.platform[j].evaluate(x);
  }
}

// Closed forms --------------------------------------------------------------------

bool has_closed_form(CaseId c);

struct ClosedForm {
  SingularDesign singular;
  double distance = 0.0;  // D, not squared
};

/// Geometric minimizer for C0, C1, C2, C4, C5b and C6 (centroids, midpoints,
/// pedal points on a regression line). Throws for other cases.
ClosedForm closed_form_minimizer(CaseId c, const PentapodDesign& design, const Combination& comb);

// Incidences and validity -------------------------------------------------------

/// True when `d` carries the defining incidences of case `c` under some
/// combination. Coordinates are compared with `tol` relative to the design
/// scale. Works for real and complex designs.
bool has_case_structure(CaseId c, const PentapodDesign& d, double tol = 1e-9);
bool has_case_structure(CaseId c, const std::array<Eigen::Vector3cd, 5>& base,
                        const std::array<std::complex<double>, 5>& platform, double tol);

/// True when `d` carries case `c` incidences under the given combination.
bool satisfies_case(CaseId c, const PentapodDesign& d, const Combination& comb, double tol = 1e-9);

/// False when the design also belongs to an earlier case in the exclusion
/// chain, or violates the intrinsic genericity of its own case.
bool validity_filter(const SingularDesign& s, double tol = 1e-9);
bool validity_filter(CaseId c, const std::array<Eigen::Vector3cd, 5>& base,
                     const std::array<std::complex<double>, 5>& platform, double tol);

}  // namespace pentapod

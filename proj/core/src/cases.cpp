#include "pentapod/cases.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace pentapod {

std::string_view to_string(CaseId c) {
  static constexpr std::array<std::string_view, 12> names{"0",  "1",  "2",  "3a", "3b", "4",
                                                         "5a", "5b", "6",  "7",  "8",  "9"};
  return names[static_cast<std::size_t>(index_of(c))];
}

std::optional<CaseId> parse_case(std::string_view s) {
  if (!s.empty() && (s.front() == 'c' || s.front() == 'C')) s.remove_prefix(1);
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  for (CaseId c : kAllCases) {
    if (to_string(c) == lower) return c;
  }
  return std::nullopt;
}

std::string to_string(const Combination& c) {
  std::string out = "(";
  for (int j = 0; j < 5; ++j) {
    if (j) out += ',';
    out += std::to_string(c[j] + 1);
  }
  return out + ")";
}

const CaseTraits& traits(CaseId c) {
  // combinations, unknowns planar/spatial, degree, generic roots, multipliers, closed form
  static const std::array<CaseTraits, 12> table{{
      {10, 3, 4, 2, 1, 0, true},
      {10, 2, 3, 2, 1, 0, true},
      {10, 6, 8, 4, 2, 0, true},
      {30, 6, 8, 4, 2, 0, false},
      {5, 11, 13, 4, 88, 1, false},
      {5, 1, 1, 2, 1, 0, true},
      {10, 6, 8, 4, 2, 0, false},
      {1, 7, 9, 4, 2, 0, true},
      {10, 3, 4, 4, 1, 0, true},
      {15, 10, 13, 5, 12, 0, false},
      {10, 14, 17, 6, -1, 1, false},
      {1, 17, 20, 5, -1, 2, false},
  }};
  return table[static_cast<std::size_t>(index_of(c))];
}

bool has_closed_form(CaseId c) { return traits(c).closed_form; }

namespace {

using Legs = std::vector<int>;

Legs complement(const Legs& used) {
  Legs out;
  for (int i = 0; i < 5; ++i) {
    if (std::find(used.begin(), used.end(), i) == used.end()) out.push_back(i);
  }
  return out;
}

void subsets(int k, int start, Legs& cur, std::vector<Legs>& out, const Legs& pool) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = static_cast<std::size_t>(start); i < pool.size(); ++i) {
    cur.push_back(pool[i]);
    subsets(k, static_cast<int>(i) + 1, cur, out, pool);
    cur.pop_back();
  }
}

std::vector<Legs> choose(const Legs& pool, int k) {
  std::vector<Legs> out;
  Legs cur;
  subsets(k, 0, cur, out, pool);
  return out;
}

Combination make(std::initializer_list<Legs> parts) {
  Combination c{};
  int j = 0;
  for (const auto& part : parts) {
    for (int leg : part) c[static_cast<std::size_t>(j++)] = leg;
  }
  if (j != 5) throw std::logic_error("combination does not cover five legs");
  return c;
}

}  // namespace

std::vector<Combination> enumerate_combinations(CaseId c) {
  const Legs all{0, 1, 2, 3, 4};
  std::vector<Combination> out;
  switch (c) {
    case CaseId::C0:
    case CaseId::C5a:
      for (const auto& pair : choose(all, 2)) out.push_back(make({pair, complement(pair)}));
      break;
    case CaseId::C1:
    case CaseId::C2:
    case CaseId::C6:
    case CaseId::C8:
      for (const auto& triple : choose(all, 3)) out.push_back(make({triple, complement(triple)}));
      break;
    case CaseId::C3a:
      for (const auto& plat : choose(all, 2)) {
        const Legs rest = complement(plat);
        for (const auto& base : choose(rest, 2)) {
          Legs used = plat;
          used.insert(used.end(), base.begin(), base.end());
          out.push_back(make({plat, base, complement(used)}));
        }
      }
      break;
    case CaseId::C3b:
      for (int omit = 0; omit < 5; ++omit) out.push_back(make({complement({omit}), {omit}}));
      break;
    case CaseId::C4:
      for (const auto& quad : choose(all, 4)) out.push_back(make({quad, complement(quad)}));
      break;
    case CaseId::C5b:
    case CaseId::C9:
      out.push_back({0, 1, 2, 3, 4});
      break;
    case CaseId::C7:
      for (int shared = 0; shared < 5; ++shared) {
        const Legs rest = complement({shared});
        // rest[0] is paired with each of the other three legs in turn
        for (int k = 1; k < 4; ++k) {
          Legs first{rest[0], rest[static_cast<std::size_t>(k)]};
          Legs second;
          for (int i = 1; i < 4; ++i) {
            if (i != k) second.push_back(rest[static_cast<std::size_t>(i)]);
          }
          out.push_back(make({first, {shared}, second}));
        }
      }
      break;
  }
  return out;
}

double side_condition_S(double Lam, double Del, double lam, double del) {
  return lam * del * (Lam - Del) + lam * (Del - Lam * Del) + del * (Lam * Del - Lam);
}

double cross_ratio(double a, double b, double c, double d) { return (c - a) * (d - b) / ((c - b) * (d - a)); }

std::array<Eigen::Matrix<double, 5, 5>, 2> case9_matrices(double Psi1, double Ups1, double Psi2, double Ups2,
                                                          double lam, double del, double gam) {
  Eigen::Matrix<double, 5, 5> a, b;
  a << 1, 0, 0, 0, 0,
       1, 1, 0, 1, 1,
       1, 0, 1, 0, lam,
       1, Psi1, Ups1, Psi1 * del, del,
       1, Psi2, Ups2, Psi2 * gam, gam;
  b << 1, 0, 0, 0, 0,
       1, 1, 0, 1, 0,
       1, 0, 1, 0, lam,
       1, Psi1, Ups1, Psi1 * del, Ups1 * del,
       1, Psi2, Ups2, Psi2 * gam, Ups2 * gam;
  return {a, b};
}

// ---------------------------------------------------------------------------
// Closed forms

namespace {

Point3 mean_of(const PentapodDesign& d, std::initializer_list<int> legs) {
  Point3 s = Point3::Zero();
  for (int l : legs) s += d.base[static_cast<std::size_t>(l)];
  return s / static_cast<double>(legs.size());
}

double platform_mean(const PentapodDesign& d, std::initializer_list<int> legs) {
  double s = 0.0;
  for (int l : legs) s += d.platform[static_cast<std::size_t>(l)];
  return s / static_cast<double>(legs.size());
}

// Pedal points of the given legs on their regression line; coincident inputs
// are already collinear and stay where they are.
void project_to_line(PentapodDesign& out, const PentapodDesign& in, const std::vector<int>& legs) {
  std::vector<Point3> pts;
  for (int l : legs) pts.push_back(in.base[static_cast<std::size_t>(l)]);
  RegressionLine line;
  try {
    line = tls_line(pts);
  } catch (const GeometryError&) {
    return;
  }
  for (std::size_t i = 0; i < legs.size(); ++i) out.base[static_cast<std::size_t>(legs[i])] = line.pedal_points[i];
}

}  // namespace

ClosedForm closed_form_minimizer(CaseId c, const PentapodDesign& design, const Combination& comb) {
  PentapodDesign out = design;
  const int a = comb[0], b = comb[1], e = comb[2], f = comb[3], g = comb[4];
  auto base = [&](int leg) -> Point3& { return out.base[static_cast<std::size_t>(leg)]; };
  auto plat = [&](int leg) -> double& { return out.platform[static_cast<std::size_t>(leg)]; };

  switch (c) {
    case CaseId::C0: {
      const Point3 m = mean_of(design, {a, b});
      const double r = platform_mean(design, {a, b});
      base(a) = base(b) = m;
      plat(a) = plat(b) = r;
      break;
    }
    case CaseId::C1: {
      const Point3 m = mean_of(design, {a, b, e});
      base(a) = base(b) = base(e) = m;
      break;
    }
    case CaseId::C2: {
      const double r = platform_mean(design, {a, b, e});
      plat(a) = plat(b) = plat(e) = r;
      project_to_line(out, design, {a, b, e});
      break;
    }
    case CaseId::C4: {
      const double r = platform_mean(design, {a, b, e, f});
      plat(a) = plat(b) = plat(e) = plat(f) = r;
      break;
    }
    case CaseId::C5b:
      project_to_line(out, design, {a, b, e, f, g});
      break;
    case CaseId::C6: {
      const double r = platform_mean(design, {a, b, e});
      plat(a) = plat(b) = plat(e) = r;
      const Point3 m = mean_of(design, {f, g});
      base(f) = base(g) = m;
      break;
    }
    default:
      throw std::invalid_argument("case " + std::string(to_string(c)) + " has no closed-form minimizer");
  }

  ClosedForm result;
  result.singular.id = c;
  result.singular.combination = comb;
  result.singular.design = out;
  result.distance = distance(design, out);
  const bool planar = design.planar();
  const CaseProblem problem(c, comb, design, planar);
  if (auto u = problem.lift(out)) {
    const auto& names = problem.unknown_names();
    for (std::size_t i = 0; i < problem.tmpl().free_count(); ++i) result.singular.parameters.emplace_back(names[i], (*u)[i]);
  }
  return result;
}

}  // namespace pentapod

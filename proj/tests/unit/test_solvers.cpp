#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pentapod/solvers.hpp"

using namespace pentapod;
using doctest::Approx;

namespace {

AbInitioData load(CaseId c, bool planar) {
  std::ifstream in(fixtures::abinitio_dir() + "/" + AbInitioStore::file_name(c, planar));
  REQUIRE(in.good());
  return read_ab_initio(in);
}

double best_distance(const SolutionSet& s) {
  REQUIRE_FALSE(s.solutions.empty());
  return std::sqrt(s.solutions.front().objective);
}

ComplexSystem univariate(std::complex<double> c) {
  ComplexSystem s;
  s.variables = {"x"};
  s.unknown_count = 1;
  ComplexPolynomial p(1);
  p.add_term({2}, 1.0);
  p.add_term({0}, -c);
  s.equations.push_back(p);
  return s;
}

}  // namespace

TEST_SUITE("solvers") {
  TEST_CASE("task seeds are deterministic and distinct") {
    CHECK(task_seed(1, 2) == task_seed(1, 2));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(task_seed(42, i));
    CHECK(seen.size() == 1000);
    CHECK(task_seed(1, 0) != task_seed(2, 0));
  }

  TEST_CASE("Newton solves the linear platform system immediately") {
    const CaseProblem p(CaseId::C4, Combination{1, 2, 3, 4, 0}, fixtures::spatial_example(), false);
    Eigen::VectorXd start(1);
    start << -37.0;
    const auto r = newton_polish(p.kkt(), start);
    CHECK(r.converged);
    CHECK(r.point[0] == Approx(1.125).epsilon(1e-14));
    CHECK(r.iterations <= 2);
  }

  TEST_CASE("Newton reports failure from a hopeless start without throwing") {
    const CaseProblem p(CaseId::C3b, Combination{0, 1, 2, 3, 4}, fixtures::spatial_example(), false);
    const Eigen::VectorXd start = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(p.unknown_count()), 1e9);
    PolishResult<double> r;
    CHECK_NOTHROW(r = newton_polish(p.kkt(), start));
    CHECK_FALSE(r.converged);
  }

  TEST_CASE("Newton recovers a perturbed stationary point of the projective-line case") {
    const CaseProblem p(CaseId::C3b, Combination{0, 1, 2, 3, 4}, fixtures::spatial_example(), false);
    SolveConfig cfg;
    cfg.multistart_count = 16;
    cfg.threads = 1;
    const auto set = multistart_minimize(p, cfg);
    REQUIRE_FALSE(set.solutions.empty());
    const Eigen::VectorXd x = set.solutions.front().point.real();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e-3, 1e-3);
    Eigen::VectorXd start = x;
    for (auto& v : start) v += u(rng);
    const auto r = newton_polish(p.kkt(), start);
    CHECK(r.converged);
    CHECK(r.residual < 1e-12);
    CHECK((r.point - x).norm() < 1e-8);
  }

  TEST_CASE("multiplier estimate restores stationarity") {
    const CaseProblem p(CaseId::C3b, Combination{0, 1, 2, 3, 4}, fixtures::spatial_example(), false);
    SolveConfig cfg;
    cfg.multistart_count = 16;
    cfg.threads = 1;
    const auto set = multistart_minimize(p, cfg);
    REQUIRE_FALSE(set.solutions.empty());
    Eigen::VectorXd x = set.solutions.front().point.real();
    x[x.size() - 1] = 0.0;
    estimate_multipliers(p, x);
    CHECK(pentapod::evaluate(p.kkt(), x).norm() < 1e-8);
  }

  TEST_CASE("tracking a constant homotopy returns the start point") {
    const auto sys = univariate({2.0, 0.0});
    const LinearHomotopy h(sys, sys, std::polar(1.0, 0.7));
    VectorXcd start(1);
    start << std::sqrt(2.0);
    const auto r = track_path(h, start);
    CHECK(r.status == PathStatus::Success);
    CHECK(std::abs(r.endpoint[0] - start[0]) < 1e-12);
  }

  TEST_CASE("tracking x^2 - c to x^2 - 1 ends at plus and minus one") {
    const std::complex<double> c(4.0, 1.0);
    const LinearHomotopy h(univariate(c), univariate(1.0), std::polar(1.0, 2.1));
    std::vector<VectorXcd> starts(2, VectorXcd(1));
    starts[0] << std::sqrt(c);
    starts[1] << -std::sqrt(c);
    const auto ends = track_paths(h, starts);
    REQUIRE(ends.size() == 2);
    std::vector<double> re;
    for (const auto& e : ends) {
      CHECK(e.status == PathStatus::Success);
      CHECK(std::abs(e.endpoint[0].imag()) < 1e-10);
      re.push_back(e.endpoint[0].real());
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == Approx(-1.0).epsilon(1e-10));
    CHECK(re[1] == Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("total-degree start system") {
    ComplexSystem s;
    s.variables = {"x", "y"};
    s.unknown_count = 2;
    const auto x = ComplexPolynomial::variable(2, 0), y = ComplexPolynomial::variable(2, 1);
    s.equations = {x * x * y - 1.0, x + y * y};
    const TotalDegreeHomotopy h(s, {0.6, 0.8});
    CHECK(h.path_count() == 6);
    CHECK(h.degrees() == std::vector<int>{3, 2});
    std::set<std::pair<long, long>> starts;
    for (std::uint64_t k = 0; k < h.path_count(); ++k) {
      const auto p = h.start_point(k);
      CHECK(std::abs(std::pow(p[0], 3) - 1.0) < 1e-12);
      CHECK(std::abs(std::pow(p[1], 2) - 1.0) < 1e-12);
      starts.insert({std::lround(1e6 * std::arg(p[0])), std::lround(1e6 * std::arg(p[1]))});
    }
    CHECK(starts.size() == 6);
  }

  TEST_CASE("generic root counts of the collinear cases in the plane") {
    SolveConfig cfg;
    cfg.seed = 2024;
    CHECK(ab_initio(CaseId::C2, true, cfg).solutions.solutions.size() == 2);
    CHECK(ab_initio(CaseId::C5a, true, cfg).solutions.solutions.size() == 2);
  }

  TEST_CASE("parameter homotopy with identical endpoints keeps the start solutions") {
    const auto data = load(CaseId::C3a, true);
    REQUIRE(data.solutions.solutions.size() == 2);
    const ParameterHomotopy h(case_kkt(CaseId::C3a, true), data.parameters, data.parameters);
    for (const auto& s : data.solutions.solutions) {
      const auto r = track_path(h, s.point);
      CHECK(r.status == PathStatus::Success);
      CHECK((r.endpoint - s.point).norm() < 1e-8 * (1 + s.point.norm()));
    }
  }

  TEST_CASE("ab-initio data survives a write and read") {
    const auto data = load(CaseId::C3a, true);
    std::ostringstream out;
    write_ab_initio(out, data);
    std::istringstream in(out.str());
    const auto back = read_ab_initio(in);
    CHECK(back.id == data.id);
    CHECK(back.planar == data.planar);
    CHECK((back.parameters - data.parameters).norm() == 0.0);
    REQUIRE(back.solutions.solutions.size() == data.solutions.solutions.size());
    for (std::size_t i = 0; i < back.solutions.solutions.size(); ++i) {
      CHECK((back.solutions.solutions[i].point - data.solutions.solutions[i].point).norm() == 0.0);
    }
    std::istringstream bad("# ab-initio case 3a planar\n# parameters 2 1 0\n");
    CHECK_THROWS(read_ab_initio(bad));
  }

  TEST_CASE("solution lines carry case, combination, distance and coordinates") {
    SolutionSet set;
    set.backend = "multistart";
    Solution s;
    s.point = VectorXcd::Constant(2, {0.5, 0.0});
    s.objective = 0.25;
    s.residual = 1e-14;
    set.solutions.push_back(s);
    std::ostringstream out;
    write_solutions(out, CaseId::C3b, Combination{0, 1, 4, 2, 3}, set);
    std::istringstream in(out.str());
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    CHECK(header.rfind("# backend multistart", 0) == 0);
    CHECK(line.rfind("3b (1,2,5,3,4) 0.5 2 0.5 0 0.5 0 ", 0) == 0);
  }

  TEST_CASE("parameter homotopy reaches the reference minima on the spatial example") {
    const auto d = fixtures::spatial_example();
    SolveConfig cfg;
    cfg.threads = 1;
    {
      const CaseProblem p(CaseId::C3a, Combination{2, 3, 0, 1, 4}, d, false);
      CHECK(best_distance(parameter_homotopy(p, load(CaseId::C3a, false), cfg)) ==
            Approx(0.1188328328).epsilon(1e-4));
    }
    {
      const auto start = ab_initio(CaseId::C2, false, cfg);
      const CaseProblem p(CaseId::C2, Combination{1, 2, 3, 0, 4}, d, false);
      const auto set = parameter_homotopy(p, start, cfg);
      CHECK(best_distance(set) == Approx(0.2095878942).epsilon(1e-4));
      for (const auto& s : set.solutions) CHECK(s.residual < 1e-8);
    }
  }

  TEST_CASE("multistart on closed-form cases") {
    const auto d = fixtures::spatial_example();
    SolveConfig cfg;
    cfg.multistart_count = 16;
    cfg.threads = 1;
    const CaseProblem c4(CaseId::C4, Combination{1, 2, 3, 4, 0}, d, false);
    const auto s4 = multistart_minimize(c4, cfg);
    REQUIRE(s4.solutions.size() == 1);
    CHECK(s4.solutions.front().point[0].real() == Approx(1.125).epsilon(1e-12));
    for (const auto& comb : enumerate_combinations(CaseId::C0)) {
      const CaseProblem p(CaseId::C0, comb, d, false);
      CHECK(best_distance(multistart_minimize(p, cfg)) ==
            Approx(closed_form_minimizer(CaseId::C0, d, comb).distance).epsilon(1e-10));
    }
  }

  TEST_CASE("multistart is deterministic for a fixed seed") {
    const CaseProblem p(CaseId::C8, enumerate_combinations(CaseId::C8)[3], fixtures::spatial_example(), false);
    SolveConfig cfg;
    cfg.multistart_count = 12;
    cfg.threads = 2;
    const auto a = multistart_minimize(p, cfg);
    const auto b = multistart_minimize(p, cfg);
    cfg.threads = 1;
    const auto c = multistart_minimize(p, cfg);
    cfg.threads = 3;
    const auto e = multistart_minimize(p, cfg);
    for (const auto* other : {&b, &c, &e}) {
      REQUIRE(a.solutions.size() == other->solutions.size());
      for (std::size_t i = 0; i < a.solutions.size(); ++i) {
        CHECK(a.solutions[i].objective == other->solutions[i].objective);
        CHECK((a.solutions[i].point - other->solutions[i].point).norm() == 0.0);
      }
    }
  }

  TEST_CASE("oracle upper bounds") {
    const auto d = fixtures::spatial_example();
    SolveConfig cfg;
    cfg.threads = 1;
    cfg.multistart_count = 32;

    const Combination c0{0, 1, 2, 3, 4};
    const auto o0 = brute_force_oracle(CaseProblem(CaseId::C0, c0, d, false), 2000, cfg);
    CHECK(o0.distance == Approx(closed_form_minimizer(CaseId::C0, d, c0).distance).epsilon(1e-8));

    double c6 = std::numeric_limits<double>::infinity();
    for (const auto& comb : enumerate_combinations(CaseId::C6)) {
      c6 = std::min(c6, brute_force_oracle(CaseProblem(CaseId::C6, comb, d, false), 1000, cfg).distance);
    }
    CHECK(c6 == Approx(oracles::centroid_midpoint_minimum(d)).epsilon(1e-7));

    const CaseProblem p(CaseId::C3b, Combination{0, 1, 2, 3, 4}, d, false);
    const auto oracle = brute_force_oracle(p, 20000, cfg);
    const double local = best_distance(multistart_minimize(p, cfg));
    CHECK(oracle.samples == 20000);
    // The oracle's designs are feasible, so it bounds the minimum from above;
    // a local value below it would mean an infeasible point was reported.
    CHECK(local >= oracle.distance - 1e-9);
    CHECK(local <= oracle.distance + 1e-9);
    CHECK(std::abs(distance(d, oracle.singular.design) - oracle.distance) < 1e-12);
  }
}

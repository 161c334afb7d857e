#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "pentapod/solvers.hpp"

namespace pentapod {

namespace {

void write_line(std::ostream& out, CaseId c, const std::string& comb, const Solution& s) {
  out << to_string(c) << ' ' << comb << ' ';
  if (std::isnan(s.objective)) {
    out << "nan";
  } else {
    out << std::sqrt(s.objective);
  }
  out << ' ' << s.point.size();
  for (Eigen::Index i = 0; i < s.point.size(); ++i) out << ' ' << s.point[i].real() << ' ' << s.point[i].imag();
  out << ' ' << s.residual << '\n';
}

[[noreturn]] void malformed(const std::string& what) { throw std::runtime_error("malformed solution file: " + what); }

}  // namespace

void write_solutions(std::ostream& out, CaseId c, const Combination& comb, const SolutionSet& set) {
  const auto flags = out.flags();
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "# backend " << set.backend << " paths " << set.paths << " failures " << set.path_failures
      << " infinity " << set.at_infinity << " retries " << set.retries << '\n';
  for (const auto& s : set.solutions) write_line(out, c, to_string(comb), s);
  out.precision(precision);
  out.flags(flags);
}

void write_ab_initio(std::ostream& out, const AbInitioData& data) {
  const auto flags = out.flags();
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "# ab-initio case " << to_string(data.id) << ' ' << (data.planar ? "planar" : "spatial") << '\n';
  out << "# parameters " << data.parameters.size();
  for (Eigen::Index i = 0; i < data.parameters.size(); ++i) {
    out << ' ' << data.parameters[i].real() << ' ' << data.parameters[i].imag();
  }
  out << '\n';
  write_solutions(out, data.id, Combination{0, 1, 2, 3, 4}, data.solutions);
  out.precision(precision);
  out.flags(flags);
}

AbInitioData read_ab_initio(std::istream& in) {
  AbInitioData data;
  bool have_case = false, have_params = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "ab-initio") {
        std::string word, name, mode;
        ls >> word >> name >> mode;
        const auto c = parse_case(name);
        if (!c || (mode != "planar" && mode != "spatial")) malformed("bad case header");
        data.id = *c;
        data.planar = mode == "planar";
        have_case = true;
      } else if (key == "parameters") {
        std::size_t n = 0;
        if (!(ls >> n)) malformed("bad parameter count");
        data.parameters.resize(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
          double re = 0.0, im = 0.0;
          if (!(ls >> re >> im)) malformed("truncated parameters");
          data.parameters[static_cast<Eigen::Index>(i)] = {re, im};
        }
        have_params = true;
      } else if (key == "backend") {
        std::string word;
        ls >> data.solutions.backend;
        while (ls >> word) {
          std::size_t v = 0;
          ls >> v;
          if (word == "paths") data.solutions.paths = v;
          if (word == "failures") data.solutions.path_failures = v;
          if (word == "infinity") data.solutions.at_infinity = v;
          if (word == "retries") data.solutions.retries = v;
        }
      }
      continue;
    }
    std::string name, comb, dist;
    std::size_t n = 0;
    if (!(ls >> name >> comb >> dist >> n)) malformed("bad solution line");
    Solution s;
    s.point.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      double re = 0.0, im = 0.0;
      if (!(ls >> re >> im)) malformed("truncated solution");
      s.point[static_cast<Eigen::Index>(i)] = {re, im};
    }
    if (!(ls >> s.residual)) malformed("missing residual");
    s.kind = s.point.imag().cwiseAbs().maxCoeff() < 1e-8 ? RootKind::Real : RootKind::Complex;
    data.solutions.solutions.push_back(std::move(s));
  }
  if (!have_case || !have_params) malformed("missing header");
  const auto& t = case_template(data.id, data.planar);
  if (static_cast<std::size_t>(data.parameters.size()) != t.data_count()) malformed("parameter count mismatch");
  for (const auto& s : data.solutions.solutions) {
    if (static_cast<std::size_t>(s.point.size()) != t.unknown_count) malformed("unknown count mismatch");
  }
  return data;
}

}  // namespace pentapod

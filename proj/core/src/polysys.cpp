#include "pentapod/polysys.hpp"

#include <cstdio>
#include <sstream>

namespace pentapod {

RealSystem gradient_system(const RealPolynomial& lagrangian, std::vector<std::string> variables,
                           std::size_t unknown_count) {
  if (variables.size() != lagrangian.nvars()) throw std::invalid_argument("variable list does not match polynomial");
  if (unknown_count > variables.size()) throw std::invalid_argument("unknown count exceeds variable count");
  RealSystem sys;
  sys.variables = std::move(variables);
  sys.unknown_count = unknown_count;
  sys.equations.reserve(unknown_count);
  for (std::size_t u = 0; u < unknown_count; ++u) sys.equations.push_back(lagrangian.derivative(u));
  return sys;
}

namespace {

std::string format_coeff(double c) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  return buf;
}

std::string format_coeff(const std::complex<double>& c) {
  char buf[90];
  std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", c.real(), c.imag());
  return buf;
}

template <class Scalar>
std::string dump_impl(const PolySystem<Scalar>& sys) {
  std::ostringstream out;
  out << "variables";
  for (const auto& v : sys.variables) out << ' ' << v;
  out << "\nunknowns " << sys.unknown_count << '\n';
  for (const auto& eq : sys.equations) {
    bool first = true;
    for (const auto& [e, c] : eq.terms()) {
      if (!first) out << " + ";
      first = false;
      out << format_coeff(c);
      for (std::size_t v = 0; v < e.size(); ++v) {
        if (e[v] == 0) continue;
        out << '*' << sys.variables[v];
        if (e[v] > 1) out << '^' << static_cast<int>(e[v]);
      }
    }
    if (first) out << '0';
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::string dump(const RealSystem& sys) { return dump_impl(sys); }
std::string dump(const ComplexSystem& sys) { return dump_impl(sys); }

}  // namespace pentapod

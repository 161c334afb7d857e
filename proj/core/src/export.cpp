#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "pentapod/pipeline.hpp"

namespace pentapod {

using json = nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

std::optional<ExportFormat> parse_export_format(std::string_view s) {
  if (s == "json") return ExportFormat::Json;
  if (s == "csv") return ExportFormat::Csv;
  return std::nullopt;
}

namespace {

// JSON numbers carry the same 10 significant digits as the text output.
json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

json one_based(const Combination& c) {
  json a = json::array();
  for (int leg : c) a.push_back(leg + 1);
  return a;
}

json design_json(const PentapodDesign& d, bool planar) {
  json base = json::array();
  for (const auto& p : d.base) {
    json q = json::array({number(p.x()), number(p.y())});
    if (!planar) q.push_back(number(p.z()));
    base.push_back(q);
  }
  json platform = json::array();
  for (double r : d.platform) platform.push_back(number(r));
  return {{"base", base}, {"platform", platform}};
}

json singular_json(const SingularDesign& s, bool planar) {
  json j = design_json(s.design, planar);
  j["case"] = std::string(to_string(s.id));
  j["combination"] = one_based(s.combination);
  json params = json::object();
  for (const auto& [name, value] : s.parameters) params[name] = number(value);
  j["parameters"] = params;
  return j;
}

json case_json(const CaseResult& c, bool planar) {
  json j;
  j["case"] = std::string(to_string(c.id));
  j["found"] = c.found;
  j["distance"] = number(c.distance);
  json best = json::array();
  for (const auto& b : c.best_combinations) best.push_back(one_based(b));
  j["best_combinations"] = best;
  j["minimizer"] = c.found ? singular_json(c.minimizer, planar) : json(nullptr);
  json combos = json::array();
  for (const auto& r : c.combinations) {
    combos.push_back({{"combination", one_based(r.combination)},
                      {"found", r.found},
                      {"distance", number(r.distance)},
                      {"backend", r.backend},
                      {"stationary_points", r.stationary_points},
                      {"kkt_residual", number(r.kkt_residual)}});
  }
  j["combinations"] = combos;
  j["notes"] = c.notes;
  return j;
}

std::string case_label(const std::optional<CaseId>& c) { return c ? std::string(to_string(*c)) : std::string("none"); }

}  // namespace

std::string export_results(const GlobalResult& result, ExportFormat format) {
  if (format == ExportFormat::Json) {
    json j;
    j["schema"] = 1;
    j["planar"] = result.planar;
    j["rescale_factor"] = number(result.rescale_factor);
    j["distance"] = number(result.distance);
    j["winner"] = result.winner ? json(std::string(to_string(*result.winner))) : json(nullptr);
    j["conic_index"] = result.conic_index ? number(*result.conic_index) : json(nullptr);
    j["input"] = design_json(result.input, false);
    const CaseResult* w = result.winner ? result.find(*result.winner) : nullptr;
    j["closest"] = w ? singular_json(w->minimizer, false) : json(nullptr);
    json cases = json::array();
    for (const auto& c : result.cases) cases.push_back(case_json(c, false));
    j["cases"] = cases;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "case,found,D,combination,backend,kkt_residual,winner\n";
  for (const auto& c : result.cases) {
    std::string backend;
    double residual = 0.0;
    for (const auto& r : c.combinations) {
      if (!c.best_combinations.empty() && r.combination == c.best_combinations.front()) {
        backend = r.backend;
        residual = r.kkt_residual;
      }
    }
    out << to_string(c.id) << ',' << (c.found ? 1 : 0) << ',' << format_number(c.distance) << ','
        << (c.best_combinations.empty() ? std::string("") : '"' + to_string(c.best_combinations.front()) + '"') << ','
        << backend << ',' << format_number(residual) << ',' << (result.winner == c.id ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string export_results(const std::vector<SweepRow>& rows, ExportFormat format) {
  if (format == ExportFormat::Json) {
    json j;
    j["schema"] = 1;
    json list = json::array();
    for (const auto& row : rows) {
      json per_case = json::object();
      for (CaseId c : kAllCases) {
        const CaseResult* r = row.result.find(c);
        per_case[std::string(to_string(c))] = r ? number(r->distance) : json(nullptr);
      }
      list.push_back({{"t", number(row.t)},
                      {"m5", json::array({number(row.m5.x()), number(row.m5.y()), number(row.m5.z())})},
                      {"D_global", number(row.result.distance)},
                      {"case_winner", case_label(row.result.winner)},
                      {"D", per_case},
                      {"conic_index", number(row.conic_index)}});
    }
    j["rows"] = list;
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "t,D_global,case_winner";
  for (CaseId c : kAllCases) out << ",D_c" << to_string(c);
  out << ",conic_index\n";
  for (const auto& row : rows) {
    out << format_number(row.t) << ',' << format_number(row.result.distance) << ',' << case_label(row.result.winner);
    for (CaseId c : kAllCases) {
      const CaseResult* r = row.result.find(c);
      out << ',' << (r ? format_number(r->distance) : std::string("nan"));
    }
    out << ',' << format_number(row.conic_index) << '\n';
  }
  return out.str();
}

std::string coordinate_table(const GlobalResult& result) {
  const PentapodDesign& in = result.solved;
  const double scale = std::max(in.diameter(), 1.0);
  auto same = [&](double a, double b) { return std::abs(a - b) <= 1e-9 * scale; };
  auto point = [&](const Point3& p) {
    std::string s = "(" + format_number(p.x()) + ", " + format_number(p.y());
    if (!result.planar) s += ", " + format_number(p.z());
    return s + ")";
  };

  std::ostringstream out;
  out << "base coordinates (-- marks M'_i = M_i)\n";
  out << "case\tcombination\tM'_1\tM'_2\tM'_3\tM'_4\tM'_5\n";
  for (const auto& c : result.cases) {
    out << to_string(c.id) << '\t';
    if (!c.found) {
      out << "no finite minimizer found\n";
      continue;
    }
    out << to_string(c.minimizer.combination);
    for (std::size_t i = 0; i < 5; ++i) {
      const Point3& p = c.minimizer.design.base[i];
      const bool unchanged = same(p.x(), in.base[i].x()) && same(p.y(), in.base[i].y()) && same(p.z(), in.base[i].z());
      out << '\t' << (unchanged ? std::string("--") : point(p));
    }
    out << '\n';
  }
  out << "\nplatform coordinates (-- marks r'_i = r_i)\n";
  out << "case\tcombination\tr'_1\tr'_2\tr'_3\tr'_4\tr'_5\n";
  for (const auto& c : result.cases) {
    out << to_string(c.id) << '\t';
    if (!c.found) {
      out << "no finite minimizer found\n";
      continue;
    }
    out << to_string(c.minimizer.combination);
    for (std::size_t i = 0; i < 5; ++i) {
      const double r = c.minimizer.design.platform[i];
      out << '\t' << (same(r, in.platform[i]) ? std::string("--") : format_number(r));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace pentapod

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pentapod/pipeline.hpp"

namespace pentapod {

namespace {

using json = nlohmann::json;

// Line and column (both one-based) of a byte offset.
std::string where(std::string_view text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

[[noreturn]] void schema(const std::string& what) { throw DesignFileError("design file: " + what); }

double finite_number(const json& v, const std::string& field) {
  if (!v.is_number()) schema(field + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema(field + " must be finite");
  return x;
}

Point3 triple(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 3) schema(field + " must be an array of 3 numbers");
  return {finite_number(v[0], field + "[0]"), finite_number(v[1], field + "[1]"), finite_number(v[2], field + "[2]")};
}

}  // namespace

DesignFile parse_design(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // The parser reports the byte just past the offending token.
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw DesignFileError("design file: malformed JSON at " + where(text, offset));
  }
  if (!doc.is_object()) schema("top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "base" && key != "platform" && key != "B") schema("unknown field \"" + key + "\"");
  }
  if (!doc.contains("base")) schema("missing \"base\"");
  if (!doc.contains("platform")) schema("missing \"platform\"");
  const json& base = doc["base"];
  const json& platform = doc["platform"];
  if (!base.is_array() || base.size() != 5) schema("\"base\" must hold exactly 5 points");
  if (!platform.is_array() || platform.size() != 5) schema("\"platform\" must hold exactly 5 numbers");

  DesignFile out;
  for (std::size_t i = 0; i < 5; ++i) {
    out.design.base[i] = triple(base[i], "base[" + std::to_string(i) + "]");
    out.design.platform[i] = finite_number(platform[i], "platform[" + std::to_string(i) + "]");
  }
  if (doc.contains("B")) out.vertex = triple(doc["B"], "B");
  return out;
}

DesignFile read_design_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DesignFileError("design file: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_design(buf.str());
}

std::string write_design(const PentapodDesign& d, const std::optional<Point3>& vertex) {
  nlohmann::ordered_json j;
  j["base"] = nlohmann::ordered_json::array();
  for (const auto& p : d.base) j["base"].push_back({p.x(), p.y(), p.z()});
  j["platform"] = d.platform;
  if (vertex) j["B"] = {vertex->x(), vertex->y(), vertex->z()};
  return j.dump(2) + "\n";
}

}  // namespace pentapod

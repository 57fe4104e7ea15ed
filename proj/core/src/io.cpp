#include "hypdc/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "hypdc/errors.hpp"

namespace hypdc {

namespace {

using nlohmann::json;

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("invalid JSON: {}", e.what()));
  }
}

const json& member(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(fmt::format("missing field \"{}\"", key));
  return obj.at(key);
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw ParseError(fmt::format("{} must be a number", what));
  return v.get<double>();
}

int integer(const json& v, const char* what) {
  if (!v.is_number_integer()) throw ParseError(fmt::format("{} must be an integer", what));
  return v.get<int>();
}

FactorField parse_factor_object(const json& obj, const Triangulation& t) {
  if (!obj.is_object()) throw ParseError("\"factors\" must be an object keyed by vertex id");
  FactorField u = FactorField::zeros(t.id_bound());
  std::set<VertexId> seen;
  for (const auto& [key, value] : obj.items()) {
    VertexId v = -1;
    try {
      std::size_t used = 0;
      v = std::stoi(key, &used);
      if (used != key.size()) v = -1;
    } catch (const std::exception&) {
      v = -1;
    }
    if (!t.has_vertex(v)) throw ParseError(fmt::format("factor for unknown vertex \"{}\"", key));
    u[v] = number(value, "factor");
    seen.insert(v);
  }
  if (seen.size() != t.vertices().size()) throw ParseError("factors must cover every vertex");
  return u;
}

void append_factor_object(std::string& out, const Triangulation& t, const FactorField& u) {
  out += "{";
  bool first = true;
  for (VertexId v : t.vertices()) {
    out += fmt::format("{}\"{}\": {}", first ? "" : ", ", v, format_double(u[v]));
    first = false;
  }
  out += "}";
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt::format("{:.17g}", v);
}

MeshFile parse_mesh_json(std::string_view text) {
  const json doc = parse_document(text);
  const json& vertices = member(doc, "vertices");
  const json& faces = member(doc, "faces");
  if (!vertices.is_array() || !faces.is_array()) throw ParseError("\"vertices\" and \"faces\" must be arrays");

  std::vector<VertexId> ids;
  std::vector<std::pair<VertexId, Vec2>> coords;
  for (const json& v : vertices) {
    const VertexId id = integer(member(v, "id"), "vertex id");
    if (id < 0) throw ParseError("vertex ids must be nonnegative");
    const Vec2 z{number(member(v, "x"), "x"), number(member(v, "y"), "y")};
    if (!DiskPoint::contains(z)) throw ParseError(fmt::format("vertex {} lies outside the unit disk", id));
    if (v.contains("boundary") && !v.at("boundary").is_boolean()) throw ParseError("\"boundary\" must be a boolean");
    ids.push_back(id);
    coords.emplace_back(id, z);
  }
  if (std::set<VertexId>(ids.begin(), ids.end()).size() != ids.size()) throw ParseError("duplicate vertex id");

  std::vector<Face> face_list;
  for (const json& f : faces) {
    if (!f.is_array() || f.size() != 3) throw ParseError("faces must be arrays of three vertex ids");
    face_list.push_back({integer(f[0], "face vertex"), integer(f[1], "face vertex"), integer(f[2], "face vertex")});
  }

  MeshFile out;
  try {
    out.mesh = Triangulation(ids, std::move(face_list));
  } catch (const TopologyError& e) {
    throw ParseError(fmt::format("invalid mesh: {}", e.what()));
  }
  std::vector<DiskPoint> positions(out.mesh.id_bound());
  for (const auto& [id, z] : coords) positions[id] = DiskPoint(z);
  out.map = GeodesicMap(std::move(positions));
  if (doc.contains("factors")) out.factors = parse_factor_object(doc.at("factors"), out.mesh);
  return out;
}

std::string write_mesh_json(const Triangulation& t, const GeodesicMap& phi, const FactorField* factors) {
  std::string out = "{\n  \"vertices\": [";
  bool first = true;
  for (VertexId v : t.vertices()) {
    out += fmt::format("{}\n    {{\"id\": {}, \"x\": {}, \"y\": {}, \"boundary\": {}}}", first ? "" : ",", v,
                       format_double(phi[v].x()), format_double(phi[v].y()),
                       t.is_boundary_vertex(v) ? "true" : "false");
    first = false;
  }
  out += "\n  ],\n  \"faces\": [";
  first = true;
  for (const Face& f : t.faces()) {
    out += fmt::format("{}\n    [{}, {}, {}]", first ? "" : ",", f[0], f[1], f[2]);
    first = false;
  }
  out += "\n  ]";
  if (factors) {
    out += ",\n  \"factors\": ";
    append_factor_object(out, t, *factors);
  }
  out += "\n}\n";
  return out;
}

FactorField parse_factors_json(std::string_view text, const Triangulation& t) {
  return parse_factor_object(member(parse_document(text), "factors"), t);
}

std::string write_factors_json(const Triangulation& t, const FactorField& u) {
  std::string out = "{\"factors\": ";
  append_factor_object(out, t, u);
  out += "}\n";
  return out;
}

LengthField parse_lengths_json(std::string_view text, const Triangulation& t) {
  const json doc = parse_document(text);
  const json& list = member(doc, "lengths");
  if (!list.is_array()) throw ParseError("\"lengths\" must be an array");
  LengthField l{std::vector<double>(t.edges().size(), std::nan(""))};
  for (const json& item : list) {
    const auto e = t.find_edge(integer(member(item, "i"), "i"), integer(member(item, "j"), "j"));
    if (!e) throw ParseError("length given for an edge not in the mesh");
    const json& v = member(item, "l");
    l.values[*e] = v.is_null() ? std::numeric_limits<double>::infinity() : number(v, "l");
  }
  for (double v : l.values) {
    if (std::isnan(v)) throw ParseError("lengths must cover every edge");
  }
  return l;
}

std::string write_lengths_json(const Triangulation& t, const LengthField& l) {
  std::string out = "{\"lengths\": [";
  for (std::size_t e = 0; e < t.edges().size(); ++e) {
    out += fmt::format("{}\n  {{\"i\": {}, \"j\": {}, \"l\": {}}}", e == 0 ? "" : ",", t.edges()[e].i,
                       t.edges()[e].j, format_double(l.values[e]));
  }
  out += "\n]}\n";
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << contents;
}

}  // namespace hypdc

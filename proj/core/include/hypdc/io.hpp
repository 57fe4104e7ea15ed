#pragma once

// JSON file formats. Floats are written with 17 significant digits so a
// parse/serialize round trip reproduces the file byte for byte.
//
//   mesh:    {"vertices": [{"id", "x", "y", "boundary"}...], "faces": [[i, j, k]...],
//             "factors": {"<id>": u}}            ("factors" optional)
//   factors: {"factors": {"<id>": u}}
//   lengths: {"lengths": [{"i", "j", "l"}...]}   (infinite lengths as null)

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "hypdc/conformal.hpp"
#include "hypdc/mesh.hpp"

namespace hypdc {

struct MeshFile {
  Triangulation mesh;
  GeodesicMap map;
  std::optional<FactorField> factors;
};

// "%.17g"; non-finite values become null.
std::string format_double(double v);

// All readers throw ParseError on malformed input.
MeshFile parse_mesh_json(std::string_view text);
std::string write_mesh_json(const Triangulation& t, const GeodesicMap& phi, const FactorField* factors = nullptr);

FactorField parse_factors_json(std::string_view text, const Triangulation& t);
std::string write_factors_json(const Triangulation& t, const FactorField& u);

LengthField parse_lengths_json(std::string_view text, const Triangulation& t);
std::string write_lengths_json(const Triangulation& t, const LengthField& l);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace hypdc

#pragma once

#include <string>

#include "hypdc/mesh.hpp"

namespace hypdc {

struct RenderOptions {
  // Overlay the straight Euclidean chords, dashed.
  bool companion = false;
};

// 1000x1000 SVG 1.1 drawing: the unit circle, every edge as a geodesic arc
// (straight along diameters), optional companion chords. Negatively oriented
// faces are filled red instead of failing. Output is a pure function of input.
std::string render_svg(const Triangulation& t, const GeodesicMap& phi, const RenderOptions& options = {});

}  // namespace hypdc

#include "hypdc/svg.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "hypdc/errors.hpp"

namespace hypdc {

namespace {

constexpr double kCenter = 500.0;
constexpr double kScale = 480.0;
constexpr double kStraightTolerance = 1e-9;

double sx(Vec2 z) { return kCenter + kScale * z.real(); }
double sy(Vec2 z) { return kCenter - kScale * z.imag(); }

std::string geodesic_path(Vec2 p, Vec2 q) {
  const std::string move = fmt::format("M {:.4f} {:.4f}", sx(p), sy(p));
  const double gap = std::abs(q - p);
  // Distance from the origin to the line pq.
  if (gap == 0.0 || std::abs(cross(p, q)) <= kStraightTolerance * gap) {
    return fmt::format("{} L {:.4f} {:.4f}", move, sx(q), sy(q));
  }
  // The orthogonal circle also passes through the inverse of the point farther
  // from the origin.
  const Vec2 far = std::abs(p) >= std::abs(q) ? p : q;
  const EuclideanCircle c = circumcircle(p, q, far / std::norm(far));
  // Screen y points down, so a counterclockwise arc is drawn with sweep 1.
  const int sweep = cross(p - c.center, q - c.center) > 0.0 ? 1 : 0;
  const double r = kScale * c.radius;
  return fmt::format("{} A {:.4f} {:.4f} 0 0 {} {:.4f} {:.4f}", move, r, r, sweep, sx(q), sy(q));
}

}  // namespace

std::string render_svg(const Triangulation& t, const GeodesicMap& phi, const RenderOptions& options) {
  require_covers(t, phi);
  std::set<int> flipped;
  try {
    const EmbeddingReport report = check_embedding(t, phi);
    flipped.insert(report.flipped_faces.begin(), report.flipped_faces.end());
  } catch (const Error&) {
    // Degenerate input: draw it anyway, nothing to highlight per face.
  }

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out +=
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" "
      "viewBox=\"0 0 1000 1000\">\n";
  out += "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
  out += fmt::format(
      "<circle class=\"unit\" cx=\"{:.4f}\" cy=\"{:.4f}\" r=\"{:.4f}\" fill=\"none\" stroke=\"#888888\" "
      "stroke-width=\"1\"/>\n",
      kCenter, kCenter, kScale);

  for (int f : flipped) {
    const Face& face = t.faces()[f];
    out += fmt::format(
        "<polygon class=\"flipped\" points=\"{:.4f},{:.4f} {:.4f},{:.4f} {:.4f},{:.4f}\" fill=\"#e03030\" "
        "fill-opacity=\"0.5\" stroke=\"none\"/>\n",
        sx(phi[face[0]].z()), sy(phi[face[0]].z()), sx(phi[face[1]].z()), sy(phi[face[1]].z()),
        sx(phi[face[2]].z()), sy(phi[face[2]].z()));
  }

  out += "<g fill=\"none\" stroke=\"#1f3a93\" stroke-width=\"0.8\">\n";
  for (const Edge& e : t.edges()) {
    out += fmt::format("<path class=\"edge\" d=\"{}\"/>\n", geodesic_path(phi[e.i].z(), phi[e.j].z()));
  }
  out += "</g>\n";

  if (options.companion) {
    out += "<g fill=\"none\" stroke=\"#d35400\" stroke-width=\"0.6\" stroke-dasharray=\"4 3\">\n";
    for (const Edge& e : t.edges()) {
      const Vec2 p = phi[e.i].z(), q = phi[e.j].z();
      out += fmt::format("<path class=\"chord\" d=\"M {:.4f} {:.4f} L {:.4f} {:.4f}\"/>\n", sx(p), sy(p), sx(q),
                         sy(q));
    }
    out += "</g>\n";
  }

  out += "<g fill=\"#000000\">\n";
  for (VertexId v : t.vertices()) {
    out += fmt::format("<circle class=\"vertex\" cx=\"{:.4f}\" cy=\"{:.4f}\" r=\"1.5\"/>\n", sx(phi[v].z()),
                       sy(phi[v].z()));
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace hypdc

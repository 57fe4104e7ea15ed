#include "hypdc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "hypdc/errors.hpp"

namespace hypdc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int vertex_slot(const Face& f, VertexId v) {
  for (int k = 0; k < 3; ++k) {
    if (f[k] == v) return k;
  }
  return -1;
}

}  // namespace

namespace {

void require_unique(std::vector<VertexId> ids) {
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw TopologyError("duplicate vertex id");
}

}  // namespace

Triangulation::Triangulation(std::vector<Face> faces) {
  std::vector<VertexId> vertices;
  for (const Face& f : faces) vertices.insert(vertices.end(), f.begin(), f.end());
  build(std::move(vertices), {}, std::move(faces));
}

Triangulation::Triangulation(std::vector<VertexId> vertices, std::vector<Face> faces) {
  require_unique(vertices);
  build(std::move(vertices), {}, std::move(faces));
}

Triangulation::Triangulation(std::vector<VertexId> vertices, std::vector<Edge> edges, std::vector<Face> faces) {
  require_unique(vertices);
  // Explicit edge sets must already contain every face edge.
  std::set<Edge> given(edges.begin(), edges.end());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      if (!given.count(Edge::make(faces[f][k], faces[f][(k + 1) % 3]))) {
        throw TopologyError(fmt::format("face {} uses an edge missing from the edge set", f));
      }
    }
  }
  build(std::move(vertices), std::move(edges), std::move(faces));
}

void Triangulation::build(std::vector<VertexId> vertices, std::vector<Edge> edges, std::vector<Face> faces) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  if (!vertices.empty() && vertices.front() < 0) throw TopologyError("negative vertex id");
  const int bound = vertices.empty() ? 0 : vertices.back() + 1;
  member_.assign(bound, 0);
  for (VertexId v : vertices) member_[v] = 1;

  std::set<std::pair<VertexId, VertexId>> halfedges;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Face& face = faces[f];
    for (int k = 0; k < 3; ++k) {
      if (face[k] < 0 || face[k] >= bound || !member_[face[k]]) {
        throw TopologyError(fmt::format("face {} references unknown vertex {}", f, face[k]));
      }
    }
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
      throw TopologyError(fmt::format("face {} repeats a vertex", f));
    }
    for (int k = 0; k < 3; ++k) {
      if (!halfedges.emplace(face[k], face[(k + 1) % 3]).second) {
        throw TopologyError(fmt::format("face {} breaks consistent orientation on edge ({}, {})", f, face[k],
                                        face[(k + 1) % 3]));
      }
      edges.push_back(Edge::make(face[k], face[(k + 1) % 3]));
    }
  }
  for (const Edge& e : edges) {
    if (e.i == e.j) throw TopologyError("edge repeats a vertex");
    if (e.i > e.j) throw TopologyError("edges must be stored as sorted pairs");
    if (e.j >= bound || !member_[e.i] || !member_[e.j]) {
      throw TopologyError(fmt::format("edge ({}, {}) references an unknown vertex", e.i, e.j));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  vertices_ = std::move(vertices);
  edges_ = std::move(edges);
  faces_ = std::move(faces);

  edge_faces_.assign(edges_.size(), {-1, -1});
  edge_face_count_.assign(edges_.size(), 0);
  vertex_faces_.assign(bound, {});
  vertex_edges_.assign(bound, {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    vertex_edges_[edges_[e].i].push_back(static_cast<int>(e));
    vertex_edges_[edges_[e].j].push_back(static_cast<int>(e));
  }
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      vertex_faces_[faces_[f][k]].push_back(static_cast<int>(f));
      const int e = edge_index(faces_[f][k], faces_[f][(k + 1) % 3]);
      if (edge_face_count_[e] == 2) {
        throw TopologyError(fmt::format("edge ({}, {}) is shared by more than two faces", edges_[e].i, edges_[e].j));
      }
      edge_faces_[e][edge_face_count_[e]++] = static_cast<int>(f);
    }
  }
}

bool Triangulation::has_vertex(VertexId v) const { return v >= 0 && v < id_bound() && member_[v]; }

std::optional<int> Triangulation::find_edge(VertexId a, VertexId b) const {
  const Edge key = Edge::make(a, b);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<int>(it - edges_.begin());
}

int Triangulation::edge_index(VertexId a, VertexId b) const {
  const auto e = find_edge(a, b);
  if (!e) throw TopologyError(fmt::format("no edge ({}, {})", a, b));
  return *e;
}

std::span<const int> Triangulation::edge_faces(int e) const {
  return std::span<const int>(edge_faces_[e].data(), edge_face_count_[e]);
}

const std::vector<int>& Triangulation::vertex_faces(VertexId v) const {
  if (!has_vertex(v)) throw TopologyError(fmt::format("unknown vertex {}", v));
  return vertex_faces_[v];
}

std::vector<VertexId> Triangulation::neighbors(VertexId v) const {
  if (!has_vertex(v)) throw TopologyError(fmt::format("unknown vertex {}", v));
  std::vector<VertexId> out;
  for (int e : vertex_edges_[v]) out.push_back(edges_[e].i == v ? edges_[e].j : edges_[e].i);
  std::sort(out.begin(), out.end());
  return out;
}

bool Triangulation::is_boundary_vertex(VertexId v) const {
  if (!has_vertex(v)) throw TopologyError(fmt::format("unknown vertex {}", v));
  if (vertex_faces_[v].empty()) return true;
  return std::any_of(vertex_edges_[v].begin(), vertex_edges_[v].end(),
                     [this](int e) { return is_boundary_edge(e); });
}

std::vector<VertexId> Triangulation::interior_vertices() const {
  std::vector<VertexId> out;
  for (VertexId v : vertices_) {
    if (!is_boundary_vertex(v)) out.push_back(v);
  }
  return out;
}

std::vector<VertexId> Triangulation::boundary_vertices() const {
  std::vector<VertexId> out;
  for (VertexId v : vertices_) {
    if (is_boundary_vertex(v)) out.push_back(v);
  }
  return out;
}

std::vector<VertexId> Triangulation::ordered_link(VertexId v) const {
  const auto& incident = vertex_faces(v);
  if (incident.empty()) return {};
  std::map<VertexId, VertexId> next;
  std::set<VertexId> has_prev;
  for (int f : incident) {
    const int k = vertex_slot(faces_[f], v);
    const VertexId a = faces_[f][(k + 1) % 3];
    const VertexId b = faces_[f][(k + 2) % 3];
    next[a] = b;
    has_prev.insert(b);
  }
  VertexId start = faces_[incident.front()][(vertex_slot(faces_[incident.front()], v) + 1) % 3];
  const bool closed = !is_boundary_vertex(v);
  if (!closed) {
    int starts = 0;
    for (const auto& [a, b] : next) {
      if (!has_prev.count(a)) {
        start = a;
        ++starts;
      }
    }
    if (starts != 1) throw TopologyError(fmt::format("vertex {} has a disconnected link", v));
  }
  std::vector<VertexId> link{start};
  VertexId cur = start;
  while (true) {
    const auto it = next.find(cur);
    if (it == next.end()) break;
    cur = it->second;
    if (cur == start) break;
    link.push_back(cur);
    if (link.size() > incident.size() + 1) throw TopologyError(fmt::format("vertex {} has a malformed link", v));
  }
  const std::size_t expected = closed ? incident.size() : incident.size() + 1;
  if (link.size() != expected) throw TopologyError(fmt::format("vertex {} has a disconnected link", v));
  return link;
}

VertexId Triangulation::opposite(int f, VertexId a, VertexId b) const {
  for (VertexId v : faces_[f]) {
    if (v != a && v != b) return v;
  }
  throw TopologyError(fmt::format("face {} is degenerate", f));
}

GeodesicMap GeodesicMap::transformed(const MobiusMap& m) const {
  std::vector<DiskPoint> out;
  out.reserve(positions_.size());
  for (const DiskPoint& p : positions_) out.push_back(m(p));
  return GeodesicMap(std::move(out));
}

std::vector<Vec2> GeodesicMap::planar() const {
  std::vector<Vec2> out;
  out.reserve(positions_.size());
  for (const DiskPoint& p : positions_) out.push_back(p.z());
  return out;
}

double LengthField::max_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

HypTriangle face_triangle(const Triangulation& t, const LengthField& l, int f) {
  const Face& face = t.faces()[f];
  const double a = l.at(t, face[1], face[2]);
  const double b = l.at(t, face[0], face[2]);
  const double c = l.at(t, face[0], face[1]);
  try {
    return HypTriangle(a, b, c);
  } catch (const TriangleInequalityError& e) {
    throw TriangleInequalityError(fmt::format("face {}: {}", f, e.what()), f, e.side());
  }
}

std::vector<int> triangle_inequality_violations(const Triangulation& t, const LengthField& l) {
  std::vector<int> bad;
  for (int f = 0; f < static_cast<int>(t.faces().size()); ++f) {
    try {
      face_triangle(t, l, f);
    } catch (const TriangleInequalityError&) {
      bad.push_back(f);
    }
  }
  return bad;
}

void require_covers(const Triangulation& t, const GeodesicMap& phi) {
  if (phi.size() < t.id_bound()) {
    throw TopologyError(fmt::format("geodesic map has {} positions but the mesh needs {}", phi.size(), t.id_bound()));
  }
}

LengthField induced_lengths(const Triangulation& t, const GeodesicMap& phi) {
  require_covers(t, phi);
  LengthField l;
  l.values.reserve(t.edges().size());
  for (const Edge& e : t.edges()) {
    const double d = hyp_distance(phi[e.i], phi[e.j]);
    if (!(d > 0.0)) throw DegenerateError(fmt::format("edge ({}, {}) has coincident endpoints", e.i, e.j));
    l.values.push_back(d);
  }
  for (int f = 0; f < static_cast<int>(t.faces().size()); ++f) face_triangle(t, l, f);
  return l;
}

Triangulation one_ring(const Triangulation& t, VertexId v) {
  if (!t.has_vertex(v)) throw TopologyError(fmt::format("unknown vertex {}", v));
  const auto& incident = t.vertex_faces(v);
  if (incident.empty()) throw TopologyError(fmt::format("vertex {} lies on no face", v));
  std::vector<Face> faces;
  for (int f : incident) faces.push_back(t.faces()[f]);
  return Triangulation(std::move(faces));
}

DelaunayReport is_delaunay(const Triangulation& t, const GeodesicMap& phi) {
  require_covers(t, phi);
  DelaunayReport report;
  for (int e = 0; e < static_cast<int>(t.edges().size()); ++e) {
    const auto faces = t.edge_faces(e);
    if (faces.size() != 2) continue;
    ++report.interior_edges;
    const Edge& edge = t.edges()[e];
    bool violated = false;
    bool cocircular = false;
    for (int side = 0; side < 2; ++side) {
      const Face& face = t.faces()[faces[side]];
      const VertexId far = t.opposite(faces[1 - side], edge.i, edge.j);
      const auto where = in_circumdisk(phi[face[0]], phi[face[1]], phi[face[2]], phi[far]);
      violated |= where == CirclePosition::inside;
      cocircular |= where == CirclePosition::on;
    }
    if (violated) {
      report.violations.push_back(edge);
    } else if (cocircular) {
      ++report.cocircular;
    }
  }
  return report;
}

double min_inner_angle(const Triangulation& t, const LengthField& l) {
  double m = std::numbers::pi;
  for (int f = 0; f < static_cast<int>(t.faces().size()); ++f) {
    const auto angles = triangle_angles(face_triangle(t, l, f));
    m = std::min({m, angles[0], angles[1], angles[2]});
  }
  return m;
}

double min_inner_angle(const Triangulation& t, const GeodesicMap& phi) {
  return min_inner_angle(t, induced_lengths(t, phi));
}

namespace {

// True when arcs [s1, s1 + w1] and [s2, s2 + w2] on the circle share interior.
bool arcs_overlap(double s1, double w1, double s2, double w2, double tol) {
  const double d = std::fmod(std::fmod(s2 - s1, kTwoPi) + kTwoPi, kTwoPi);
  return d < w1 - tol || kTwoPi - d < w2 - tol;
}

struct Sector {
  double start;
  double width;
};

bool sectors_disjoint(const std::vector<Sector>& sectors) {
  for (std::size_t a = 0; a < sectors.size(); ++a) {
    for (std::size_t b = a + 1; b < sectors.size(); ++b) {
      if (arcs_overlap(sectors[a].start, sectors[a].width, sectors[b].start, sectors[b].width, kAngleSumTolerance)) {
        return false;
      }
    }
  }
  return true;
}

bool triangles_overlap(const std::array<Vec2, 3>& s, const std::array<Vec2, 3>& t) {
  double scale = 0.0;
  for (int k = 0; k < 3; ++k) {
    scale = std::max({scale, std::abs(s[(k + 1) % 3] - s[k]), std::abs(t[(k + 1) % 3] - t[k])});
  }
  const double tol = 1e-9 * scale;
  auto separated_by = [&](const std::array<Vec2, 3>& owner) {
    for (int k = 0; k < 3; ++k) {
      const Vec2 d = owner[(k + 1) % 3] - owner[k];
      const Vec2 n = Vec2{-d.imag(), d.real()} / std::abs(d);
      double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
      for (int m = 0; m < 3; ++m) {
        const double p1 = n.real() * s[m].real() + n.imag() * s[m].imag();
        const double p2 = n.real() * t[m].real() + n.imag() * t[m].imag();
        lo1 = std::min(lo1, p1);
        hi1 = std::max(hi1, p1);
        lo2 = std::min(lo2, p2);
        hi2 = std::max(hi2, p2);
      }
      if (hi1 <= lo2 + tol || hi2 <= lo1 + tol) return true;
    }
    return false;
  };
  return !separated_by(s) && !separated_by(t);
}

}  // namespace

std::optional<std::array<int, 2>> find_face_overlap(const Triangulation& t, std::span<const Vec2> positions) {
  const auto& faces = t.faces();
  auto tri = [&](int f) {
    return std::array<Vec2, 3>{positions[faces[f][0]], positions[faces[f][1]], positions[faces[f][2]]};
  };
  for (int a = 0; a < static_cast<int>(faces.size()); ++a) {
    for (int b = a + 1; b < static_cast<int>(faces.size()); ++b) {
      if (triangles_overlap(tri(a), tri(b))) return std::array<int, 2>{a, b};
    }
  }
  return std::nullopt;
}

EmbeddingReport check_embedding(const Triangulation& t, const GeodesicMap& phi) {
  require_covers(t, phi);
  // Coincident vertices are allowed here; they make their faces degenerate.
  LengthField l;
  for (const Edge& e : t.edges()) l.values.push_back(hyp_distance(phi[e.i], phi[e.j]));
  const auto& faces = t.faces();
  EmbeddingReport report;

  std::vector<int> orientation(faces.size());
  std::vector<std::array<double, 3>> angles(faces.size());
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    orientation[f] = hyperbolic_orientation(phi[faces[f][0]], phi[faces[f][1]], phi[faces[f][2]]);
    if (orientation[f] <= 0) report.flipped_faces.push_back(f);
    try {
      angles[f] = triangle_angles(face_triangle(t, l, f));
    } catch (const TriangleInequalityError&) {
      // Collapsed face: the limit angles are pi opposite the longest side, 0 elsewhere.
      if (orientation[f] > 0) report.flipped_faces.push_back(f);
      orientation[f] = 0;
      std::array<double, 3> sides;
      for (int k = 0; k < 3; ++k) sides[k] = l.at(t, faces[f][(k + 1) % 3], faces[f][(k + 2) % 3]);
      angles[f] = {0.0, 0.0, 0.0};
      angles[f][std::max_element(sides.begin(), sides.end()) - sides.begin()] = std::numbers::pi;
    }
  }

  struct Failure {
    VertexId v;
    double winding_defect;
    int flipped;
    std::string reason;
  };
  std::vector<Failure> failures;

  for (VertexId v : t.vertices()) {
    const auto& incident = t.vertex_faces(v);
    if (incident.empty()) continue;
    const bool interior = !t.is_boundary_vertex(v);
    const MobiusMap centered = MobiusMap::to_origin(phi[v]);
    double unsigned_sum = 0.0;
    double signed_sum = 0.0;
    int flipped = 0;
    std::vector<Sector> sectors;
    for (int f : incident) {
      const int k = vertex_slot(faces[f], v);
      const double angle = angles[f][k];
      unsigned_sum += angle;
      signed_sum += orientation[f] > 0 ? angle : -angle;
      if (orientation[f] <= 0) {
        ++flipped;
        continue;
      }
      const Vec2 a = centered.apply(phi[faces[f][(k + 1) % 3]].z());
      sectors.push_back({std::arg(a), angle});
    }
    std::string reason;
    double winding_defect = 0.0;
    if (flipped > 0) reason = fmt::format("{} incident face(s) negatively oriented", flipped);
    if (interior) {
      winding_defect = std::abs(signed_sum - kTwoPi);
      if (std::abs(unsigned_sum - kTwoPi) > kAngleSumTolerance && reason.empty()) {
        reason = fmt::format("angle sum {} differs from 2pi", unsigned_sum);
      }
    } else if (unsigned_sum > kTwoPi + kAngleSumTolerance && reason.empty()) {
      reason = fmt::format("boundary angle sum {} exceeds 2pi", unsigned_sum);
    }
    if (reason.empty() && !sectors_disjoint(sectors)) reason = "1-ring faces overlap";
    if (!reason.empty()) {
      failures.push_back({v, winding_defect > kAngleSumTolerance ? winding_defect : 0.0, flipped, reason});
    }
  }

  if (!failures.empty()) {
    // An interior vertex that no longer winds once around its link is the root
    // cause; otherwise blame the vertex touching the most flipped faces.
    const auto worst = std::min_element(failures.begin(), failures.end(), [](const Failure& a, const Failure& b) {
      if (a.winding_defect != b.winding_defect) return a.winding_defect > b.winding_defect;
      if (a.flipped != b.flipped) return a.flipped > b.flipped;
      return a.v < b.v;
    });
    report.embedded = false;
    report.witness = worst->v;
    report.reason = worst->reason;
    return report;
  }

  if (static_cast<int>(faces.size()) < kGlobalOverlapFaceLimit) {
    const auto planar = phi.planar();
    if (const auto pair = find_face_overlap(t, planar)) {
      report.embedded = false;
      const Face& fa = faces[(*pair)[0]];
      report.witness = *std::min_element(fa.begin(), fa.end());
      report.reason = fmt::format("faces {} and {} overlap", (*pair)[0], (*pair)[1]);
    }
  }
  return report;
}

Patch gen_regular_patch(int rings, double edge) {
  if (rings < 1) throw std::invalid_argument("gen_regular_patch: rings must be at least 1");
  if (!(edge > 0.0 && edge <= 0.5)) throw std::invalid_argument("gen_regular_patch: edge must lie in (0, 0.5]");

  const Vec2 omega = std::polar(1.0, std::numbers::pi / 3.0);
  auto hex_norm = [](int q, int r) { return std::max({std::abs(q), std::abs(r), std::abs(q + r)}); };

  struct Site {
    int q, r, ring;
    double angle;
  };
  std::vector<Site> sites;
  for (int q = -rings; q <= rings; ++q) {
    for (int r = -rings; r <= rings; ++r) {
      const int n = hex_norm(q, r);
      if (n > rings) continue;
      const Vec2 p = static_cast<double>(q) + static_cast<double>(r) * omega;
      double angle = n == 0 ? 0.0 : std::atan2(p.imag(), p.real());
      if (angle < -1e-12) angle += 2.0 * std::numbers::pi;
      sites.push_back({q, r, n, angle});
    }
  }
  std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    if (a.ring != b.ring) return a.ring < b.ring;
    return a.angle < b.angle;
  });

  std::map<std::pair<int, int>, VertexId> id;
  std::vector<DiskPoint> positions;
  for (const Site& s : sites) {
    id[{s.q, s.r}] = static_cast<VertexId>(positions.size());
    const Vec2 tangent = edge * (static_cast<double>(s.q) + static_cast<double>(s.r) * omega);
    const double d = std::abs(tangent);
    positions.push_back(d == 0.0 ? DiskPoint() : DiskPoint(std::tanh(0.5 * d) * tangent / d));
  }

  std::vector<Face> faces;
  auto lookup = [&](int q, int r) -> std::optional<VertexId> {
    const auto it = id.find({q, r});
    if (it == id.end()) return std::nullopt;
    return it->second;
  };
  // Rhombus spanned by 1 and omega at (q, r), split into two counterclockwise
  // triangles. The anchor itself may lie outside the patch.
  for (int q = -rings - 1; q <= rings; ++q) {
    for (int r = -rings - 1; r <= rings; ++r) {
      const auto a = lookup(q, r);
      const auto b = lookup(q + 1, r);
      const auto c = lookup(q, r + 1);
      const auto d = lookup(q + 1, r + 1);
      if (a && b && c) faces.push_back({*a, *b, *c});
      if (b && d && c) faces.push_back({*b, *d, *c});
    }
  }

  Patch patch{Triangulation(std::move(faces)), GeodesicMap(std::move(positions))};
  const LengthField l = induced_lengths(patch.mesh, patch.map);
  for (double v : l.values) {
    if (v < 0.9 * edge || v > 1.1 * edge) {
      throw std::invalid_argument(
          fmt::format("gen_regular_patch: {} rings of edge {} distort an edge to {} (beyond 10%)", rings, edge, v));
    }
  }
  return patch;
}

Triangulation extract_short_edge_subcomplex(const Triangulation& t, std::span<const Vec2> positions,
                                            double threshold) {
  std::vector<char> short_edge(t.edges().size(), 0);
  std::vector<Edge> edges;
  std::vector<VertexId> vertices;
  for (std::size_t e = 0; e < t.edges().size(); ++e) {
    const Edge& edge = t.edges()[e];
    if (distance_or_infinity(positions[edge.i], positions[edge.j]) <= threshold) {
      short_edge[e] = 1;
      edges.push_back(edge);
      vertices.push_back(edge.i);
      vertices.push_back(edge.j);
    }
  }
  std::vector<Face> faces;
  for (const Face& f : t.faces()) {
    bool keep = true;
    for (int k = 0; k < 3; ++k) keep = keep && short_edge[t.edge_index(f[k], f[(k + 1) % 3])];
    if (keep) faces.push_back(f);
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  return Triangulation(std::move(vertices), std::move(edges), std::move(faces));
}

bool CompanionReport::all_rings_embedded() const {
  return std::all_of(ring_embedded.begin(), ring_embedded.end(), [](const RingFlag& r) { return r.embedded; });
}

bool CompanionReport::all_orientations_agree() const {
  return std::all_of(orientation_agrees.begin(), orientation_agrees.end(), [](bool b) { return b; });
}

EuclideanCompanion build_euclidean_companion(const Triangulation& t, const GeodesicMap& psi) {
  const LengthField l = induced_lengths(t, psi);
  for (double v : l.values) {
    if (v > 1.0) throw std::invalid_argument("build_euclidean_companion: induced lengths must not exceed 1");
  }
  EuclideanCompanion out;
  out.positions = psi.planar();
  CompanionReport& rep = out.report;
  const auto& faces = t.faces();
  const std::size_t nf = faces.size();
  rep.face_min_euclidean_angle.resize(nf);
  rep.face_min_hyperbolic_angle.resize(nf);
  rep.orientation_agrees.resize(nf);
  rep.min_euclidean_angle = std::numbers::pi;
  rep.min_hyperbolic_angle = std::numbers::pi;
  rep.min_perturbation_slack = std::numeric_limits<double>::infinity();

  std::vector<std::array<double, 3>> euc(nf);
  std::vector<int> euc_orientation(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const Face& face = faces[f];
    const Vec2 p = out.positions[face[0]], q = out.positions[face[1]], r = out.positions[face[2]];
    const double area2 = orient2d(p, q, r);
    const double scale = std::max({std::norm(q - p), std::norm(r - q), std::norm(p - r)});
    if (!(std::abs(area2) > 1e-14 * scale)) {
      throw DegenerateError(fmt::format("companion face {} is degenerate", f));
    }
    euc_orientation[f] = area2 > 0.0 ? 1 : -1;
    euc[f] = euclidean_angles(p, q, r);
    const auto hyp = triangle_angles(face_triangle(t, l, f));
    rep.face_min_euclidean_angle[f] = std::min({euc[f][0], euc[f][1], euc[f][2]});
    rep.face_min_hyperbolic_angle[f] = std::min({hyp[0], hyp[1], hyp[2]});
    rep.min_euclidean_angle = std::min(rep.min_euclidean_angle, rep.face_min_euclidean_angle[f]);
    rep.min_hyperbolic_angle = std::min(rep.min_hyperbolic_angle, rep.face_min_hyperbolic_angle[f]);
    rep.orientation_agrees[f] =
        euc_orientation[f] == hyperbolic_orientation(psi[face[0]], psi[face[1]], psi[face[2]]);
    for (int k = 0; k < 3; ++k) {
      const double bound =
          2.0 * (l.at(t, face[k], face[(k + 1) % 3]) + l.at(t, face[k], face[(k + 2) % 3]));
      const double perturbation = std::abs(euc[f][k] - hyp[k]);
      rep.max_corner_perturbation = std::max(rep.max_corner_perturbation, perturbation);
      rep.min_perturbation_slack = std::min(rep.min_perturbation_slack, bound - perturbation);
    }
  }

  for (VertexId v : t.vertices()) {
    const auto& incident = t.vertex_faces(v);
    if (incident.empty()) continue;
    double sum = 0.0;
    bool ok = true;
    std::vector<Sector> sectors;
    for (int f : incident) {
      const int k = vertex_slot(faces[f], v);
      sum += euc[f][k];
      if (euc_orientation[f] <= 0) {
        ok = false;
        continue;
      }
      const Vec2 a = out.positions[faces[f][(k + 1) % 3]] - out.positions[v];
      sectors.push_back({std::arg(a), euc[f][k]});
    }
    if (t.is_boundary_vertex(v)) {
      ok = ok && sum <= kTwoPi + kAngleSumTolerance;
    } else {
      ok = ok && std::abs(sum - kTwoPi) <= kAngleSumTolerance;
    }
    ok = ok && sectors_disjoint(sectors);
    rep.ring_embedded.push_back({v, ok});
  }
  return out;
}

GeodesicMap layout_fan(const Triangulation& ring, const LengthField& l, VertexId center) {
  const auto link = ring.ordered_link(center);
  std::vector<DiskPoint> positions(ring.id_bound());
  if (link.empty()) return GeodesicMap(std::move(positions));
  auto face_of = [&](VertexId a, VertexId b) {
    for (int f : ring.vertex_faces(center)) {
      const Face& face = ring.faces()[f];
      const int k = vertex_slot(face, center);
      if (face[(k + 1) % 3] == a && face[(k + 2) % 3] == b) return f;
    }
    throw TopologyError(fmt::format("no face ({}, {}, {})", center, a, b));
  };
  double theta = 0.0;
  positions[link[0]] = DiskPoint(std::tanh(0.5 * l.at(ring, center, link[0])), 0.0);
  for (std::size_t n = 1; n < link.size(); ++n) {
    const int f = face_of(link[n - 1], link[n]);
    theta += triangle_angles(face_triangle(ring, l, f))[vertex_slot(ring.faces()[f], center)];
    positions[link[n]] = DiskPoint(std::polar(std::tanh(0.5 * l.at(ring, center, link[n])), theta));
  }
  return GeodesicMap(std::move(positions));
}

}  // namespace hypdc

#pragma once

// Finite simplicial complexes with geodesic vertex maps into the Poincare disk.

#include <array>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypdc/disk.hpp"

namespace hypdc {

using VertexId = int;
using Face = std::array<VertexId, 3>;

// Unordered edge stored as the sorted pair (i < j).
struct Edge {
  VertexId i = 0;
  VertexId j = 0;

  static Edge make(VertexId a, VertexId b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// A finite simplicial complex (V, E, F). Vertex ids are nonnegative integers;
// they are dense from 0 for generated meshes but subcomplexes keep the ids of
// their parent. Faces are counterclockwise and consistently oriented; every face
// edge is in E and every edge lies on at most two faces. Edges with no face are
// allowed so that edge-defined subcomplexes can be represented.
class Triangulation {
 public:
  Triangulation() = default;
  // Vertices are the face vertices; edges are the face edges.
  explicit Triangulation(std::vector<Face> faces);
  Triangulation(std::vector<VertexId> vertices, std::vector<Face> faces);
  Triangulation(std::vector<VertexId> vertices, std::vector<Edge> edges, std::vector<Face> faces);

  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Face>& faces() const { return faces_; }

  // One past the largest vertex id; per-vertex arrays are sized by this.
  int id_bound() const { return static_cast<int>(vertex_faces_.size()); }
  bool has_vertex(VertexId v) const;

  std::optional<int> find_edge(VertexId a, VertexId b) const;
  // Throws TopologyError when the edge is missing.
  int edge_index(VertexId a, VertexId b) const;

  // Faces incident to edge e (zero, one or two of them).
  std::span<const int> edge_faces(int e) const;
  const std::vector<int>& vertex_faces(VertexId v) const;
  std::vector<VertexId> neighbors(VertexId v) const;

  bool is_boundary_edge(int e) const { return edge_face_count_[e] < 2; }
  // A vertex is interior iff it has faces and all its edges have two faces.
  bool is_boundary_vertex(VertexId v) const;
  std::vector<VertexId> interior_vertices() const;
  std::vector<VertexId> boundary_vertices() const;

  // Link of v ordered counterclockwise. For interior vertices the cycle is
  // returned without repeating its first vertex.
  std::vector<VertexId> ordered_link(VertexId v) const;

  // The vertex of face f not on edge (a, b).
  VertexId opposite(int f, VertexId a, VertexId b) const;

  bool empty() const { return vertices_.empty(); }

 private:
  void build(std::vector<VertexId> vertices, std::vector<Edge> edges, std::vector<Face> faces);

  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 2>> edge_faces_;
  std::vector<int> edge_face_count_;
  std::vector<std::vector<int>> vertex_faces_;
  std::vector<char> member_;
  std::vector<std::vector<int>> vertex_edges_;
};

// Vertex positions in the disk, indexed by vertex id.
class GeodesicMap {
 public:
  GeodesicMap() = default;
  explicit GeodesicMap(std::vector<DiskPoint> positions) : positions_(std::move(positions)) {}

  const DiskPoint& operator[](VertexId v) const { return positions_[v]; }
  DiskPoint& operator[](VertexId v) { return positions_[v]; }
  int size() const { return static_cast<int>(positions_.size()); }
  const std::vector<DiskPoint>& positions() const { return positions_; }

  // Post-composition with a disk automorphism.
  GeodesicMap transformed(const MobiusMap& m) const;
  std::vector<Vec2> planar() const;

 private:
  std::vector<DiskPoint> positions_;
};

// Per-edge lengths, indexed by the edge index of the owning triangulation.
struct LengthField {
  std::vector<double> values;

  double at(const Triangulation& t, VertexId a, VertexId b) const { return values[t.edge_index(a, b)]; }
  // Sup norm |l|_inf.
  double max_norm() const;
};

// Side lengths of face f ordered so that side k is opposite the face's k-th
// vertex. Throws TriangleInequalityError carrying the face index.
HypTriangle face_triangle(const Triangulation& t, const LengthField& l, int f);

// Indices of faces whose lengths break a strict triangle inequality.
std::vector<int> triangle_inequality_violations(const Triangulation& t, const LengthField& l);

// Throws TopologyError unless every vertex of t has a position.
void require_covers(const Triangulation& t, const GeodesicMap& phi);

LengthField induced_lengths(const Triangulation& t, const GeodesicMap& phi);

// All faces containing v. Throws TopologyError if v is unknown or has no face.
Triangulation one_ring(const Triangulation& t, VertexId v);

struct DelaunayReport {
  std::vector<Edge> violations;
  // Interior edges where the opposite vertex lies on the circumcircle.
  int cocircular = 0;
  int interior_edges = 0;

  bool delaunay() const { return violations.empty(); }
};

DelaunayReport is_delaunay(const Triangulation& t, const GeodesicMap& phi);

double min_inner_angle(const Triangulation& t, const LengthField& l);
double min_inner_angle(const Triangulation& t, const GeodesicMap& phi);

struct EmbeddingReport {
  bool embedded = true;
  std::optional<VertexId> witness;
  std::string reason;
  std::vector<int> flipped_faces;
};

// Local embedding check: positive orientation of every face, angle sums around
// each vertex, pairwise interior-disjointness of each 1-ring's faces. Complexes
// with fewer than kGlobalOverlapFaceLimit faces also get a global pairwise
// face-overlap test.
EmbeddingReport check_embedding(const Triangulation& t, const GeodesicMap& phi);

inline constexpr int kGlobalOverlapFaceLimit = 200;
inline constexpr double kAngleSumTolerance = 1e-9;

// First pair of faces whose straight-chord triangles overlap in their interiors.
std::optional<std::array<int, 2>> find_face_overlap(const Triangulation& t, std::span<const Vec2> positions);

struct Patch {
  Triangulation mesh;
  GeodesicMap map;
};

// Hexagonal lattice ball of `rings` rings around a vertex at the origin. The
// Euclidean lattice of spacing `edge` in the tangent plane at 0 is pushed to the
// disk by the exponential map r = tanh(d / 2). Throws std::invalid_argument when
// rings < 1, edge is outside (0, 0.5], or the lattice is too large for every
// edge to stay within 10% of `edge`.
Patch gen_regular_patch(int rings, double edge);

// The subcomplex T0 = (V0, E0, F0) of edges with hyperbolic length at most
// `threshold`. Positions outside the disk make their edges infinitely long.
Triangulation extract_short_edge_subcomplex(const Triangulation& t, std::span<const Vec2> positions,
                                            double threshold);

struct RingFlag {
  VertexId vertex;
  bool embedded;
};

struct CompanionReport {
  std::vector<double> face_min_euclidean_angle;
  std::vector<double> face_min_hyperbolic_angle;
  std::vector<bool> orientation_agrees;
  std::vector<RingFlag> ring_embedded;
  double min_euclidean_angle = 0.0;
  double min_hyperbolic_angle = 0.0;
  // max over corners of |Euclidean angle - hyperbolic angle|
  double max_corner_perturbation = 0.0;
  // min over corners of 2 (l1 + l2) - |Euclidean angle - hyperbolic angle|
  double min_perturbation_slack = 0.0;

  bool all_rings_embedded() const;
  bool all_orientations_agree() const;
};

struct EuclideanCompanion {
  std::vector<Vec2> positions;
  CompanionReport report;
};

// Straight-chord companion of a geodesic map with the same vertex positions.
// Requires every induced length to be at most 1 (std::invalid_argument).
EuclideanCompanion build_euclidean_companion(const Triangulation& t, const GeodesicMap& psi);

// Lays out the 1-ring of `center` from lengths alone: center at the origin, the
// first link vertex on the positive real axis, the rest placed by accumulating
// angles counterclockwise. Positions of vertices outside the ring are left at 0.
GeodesicMap layout_fan(const Triangulation& ring, const LengthField& l, VertexId center);

}  // namespace hypdc

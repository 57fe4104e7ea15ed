#pragma once

// Discrete conformal factors on geodesic triangulations: the hyperbolic change
// sinh(l'/2) = e^{(u_i + u_j)/2} sinh(l/2), its Euclidean chord counterpart, the
// conversion between the two factor fields, and a Newton solver that flattens
// a length field by a conformal change with pinned boundary values.

#include <map>
#include <vector>

#include "hypdc/disk.hpp"
#include "hypdc/mesh.hpp"

namespace hypdc {

// Per-vertex log-factors indexed by vertex id.
struct FactorField {
  std::vector<double> values;

  static FactorField zeros(int size) { return FactorField{std::vector<double>(size, 0.0)}; }
  double operator[](VertexId v) const { return values[v]; }
  double& operator[](VertexId v) { return values[v]; }
  double max_norm(const Triangulation& t) const;
};

// Angle defect 2 pi - sum of inner angles at each interior vertex.
struct CurvatureField {
  std::vector<VertexId> vertices;
  std::vector<double> values;

  double at(VertexId v) const;
  double max_abs() const;
};

// l' = u *_h l, edge by edge. Realizability of l' is not enforced; use
// triangle_inequality_violations on the result.
LengthField hyp_change(const Triangulation& t, const LengthField& l, const FactorField& u);

// Euclidean chords scaled by e^{(u_i + u_j)/2}.
LengthField euc_change(const Triangulation& t, const LengthField& chords, const FactorField& u);

// u^h_i = u_i + log((1 - |z_i|^2) / (1 - |z'_i|^2)) for every id of `u`.
FactorField convert_factor(const FactorField& u, const GeodesicMap& old_pos, const GeodesicMap& new_pos);
// Inverse of convert_factor: recovers the chord factor u from u^h.
FactorField convert_factor_inverse(const FactorField& uh, const GeodesicMap& old_pos, const GeodesicMap& new_pos);

// Positions e^b psi(i) with the factor field that realizes the induced lengths
// as a hyperbolic conformal change of those of psi.
struct ScaledEmbedding {
  std::vector<Vec2> positions;
  // Vertices whose scaled position left the disk; their factor is NaN.
  std::vector<bool> outside_disk;
  FactorField factors;

  // Induced lengths with d = +infinity on edges touching an outside vertex.
  LengthField lengths(const Triangulation& t) const;
  bool any_outside() const;
};

ScaledEmbedding scale_embedding(const Triangulation& t, const GeodesicMap& psi, double b);

// e^{u_i} recovered from a single face:
//   (sinh(l'_ij/2)/sinh(l_ij/2)) (sinh(l'_ik/2)/sinh(l_ik/2)) / (sinh(l'_jk/2)/sinh(l_jk/2)).
double factor_from_triangle(double l_ij, double l_ik, double l_jk, double lp_ij, double lp_ik, double lp_jk);
double factor_from_triangle(const Triangulation& t, const LengthField& l, const LengthField& lp, int face,
                            VertexId corner);

CurvatureField curvature(const Triangulation& t, const LengthField& l);

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 100;
  double fd_step = 1e-6;
  int max_halvings = 30;
};

struct IterationRecord {
  int iteration = 0;
  double residual = 0.0;
  double step = 0.0;
  int halvings = 0;
};

struct SolveResult {
  FactorField factors;
  int iterations = 0;
  double residual = 0.0;
  std::vector<IterationRecord> log;
};

using PinnedValues = std::map<VertexId, double>;

// Damped Newton iteration for K(u *_h l) = 0 at every unpinned vertex. The
// Jacobian is taken by central differences. Throws NonConvergenceError after
// max_iterations (or when the line search stalls on feasible steps) and
// InfeasibleStepError when no halving keeps every face realizable.
SolveResult yamabe_solve(const Triangulation& t, const LengthField& l, const PinnedValues& pinned,
                         const FactorField& init, const SolverOptions& options = {});

// Boundary vertices pinned to `value`.
PinnedValues pin_boundary(const Triangulation& t, double value);

}  // namespace hypdc

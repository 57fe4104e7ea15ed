#include "hypdc/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "hypdc/errors.hpp"

namespace hypdc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double log_conformal_ratio(const DiskPoint& from, const DiskPoint& to) {
  return std::log(from.conformal_denominator() / to.conformal_denominator());
}

}  // namespace

double FactorField::max_norm(const Triangulation& t) const {
  double m = 0.0;
  for (VertexId v : t.vertices()) m = std::max(m, std::abs(values[v]));
  return m;
}

double CurvatureField::at(VertexId v) const {
  const auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || *it != v) throw TopologyError(fmt::format("no curvature at vertex {}", v));
  return values[it - vertices.begin()];
}

double CurvatureField::max_abs() const {
  double m = 0.0;
  for (double k : values) m = std::max(m, std::abs(k));
  return m;
}

LengthField hyp_change(const Triangulation& t, const LengthField& l, const FactorField& u) {
  LengthField out;
  out.values.reserve(l.values.size());
  for (std::size_t e = 0; e < t.edges().size(); ++e) {
    const Edge& edge = t.edges()[e];
    const double scale = std::exp(0.5 * (u[edge.i] + u[edge.j]));
    out.values.push_back(2.0 * std::asinh(scale * std::sinh(0.5 * l.values[e])));
  }
  return out;
}

LengthField euc_change(const Triangulation& t, const LengthField& chords, const FactorField& u) {
  LengthField out;
  out.values.reserve(chords.values.size());
  for (std::size_t e = 0; e < t.edges().size(); ++e) {
    const Edge& edge = t.edges()[e];
    out.values.push_back(std::exp(0.5 * (u[edge.i] + u[edge.j])) * chords.values[e]);
  }
  return out;
}

FactorField convert_factor(const FactorField& u, const GeodesicMap& old_pos, const GeodesicMap& new_pos) {
  FactorField out = u;
  for (std::size_t v = 0; v < u.values.size(); ++v) {
    const auto id = static_cast<VertexId>(v);
    out[id] = u[id] + log_conformal_ratio(old_pos[id], new_pos[id]);
  }
  return out;
}

FactorField convert_factor_inverse(const FactorField& uh, const GeodesicMap& old_pos, const GeodesicMap& new_pos) {
  FactorField out = uh;
  for (std::size_t v = 0; v < uh.values.size(); ++v) {
    const auto id = static_cast<VertexId>(v);
    out[id] = uh[id] - log_conformal_ratio(old_pos[id], new_pos[id]);
  }
  return out;
}

LengthField ScaledEmbedding::lengths(const Triangulation& t) const {
  LengthField l;
  l.values.reserve(t.edges().size());
  for (const Edge& e : t.edges()) l.values.push_back(distance_or_infinity(positions[e.i], positions[e.j]));
  return l;
}

bool ScaledEmbedding::any_outside() const {
  return std::any_of(outside_disk.begin(), outside_disk.end(), [](bool b) { return b; });
}

ScaledEmbedding scale_embedding(const Triangulation& t, const GeodesicMap& psi, double b) {
  require_covers(t, psi);
  ScaledEmbedding out;
  const double factor = std::exp(b);
  const int n = psi.size();
  out.positions.resize(n);
  out.outside_disk.assign(n, false);
  out.factors = FactorField::zeros(n);
  for (int v = 0; v < n; ++v) {
    out.positions[v] = factor * psi[v].z();
    if (!DiskPoint::contains(out.positions[v])) {
      out.outside_disk[v] = true;
      out.factors[v] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    out.factors[v] = b + log_conformal_ratio(psi[v], DiskPoint(out.positions[v]));
  }
  return out;
}

double factor_from_triangle(double l_ij, double l_ik, double l_jk, double lp_ij, double lp_ik, double lp_jk) {
  const double r_ij = std::sinh(0.5 * lp_ij) / std::sinh(0.5 * l_ij);
  const double r_ik = std::sinh(0.5 * lp_ik) / std::sinh(0.5 * l_ik);
  const double r_jk = std::sinh(0.5 * lp_jk) / std::sinh(0.5 * l_jk);
  return r_ij * r_ik / r_jk;
}

double factor_from_triangle(const Triangulation& t, const LengthField& l, const LengthField& lp, int face,
                            VertexId corner) {
  const Face& f = t.faces()[face];
  int k = 0;
  while (k < 3 && f[k] != corner) ++k;
  if (k == 3) throw TopologyError(fmt::format("vertex {} is not a corner of face {}", corner, face));
  const VertexId j = f[(k + 1) % 3];
  const VertexId m = f[(k + 2) % 3];
  const int e_ij = t.edge_index(corner, j), e_ik = t.edge_index(corner, m), e_jk = t.edge_index(j, m);
  return factor_from_triangle(l.values[e_ij], l.values[e_ik], l.values[e_jk], lp.values[e_ij], lp.values[e_ik],
                              lp.values[e_jk]);
}

CurvatureField curvature(const Triangulation& t, const LengthField& l) {
  std::vector<double> angle_sum(t.id_bound(), 0.0);
  for (int f = 0; f < static_cast<int>(t.faces().size()); ++f) {
    const auto angles = triangle_angles(face_triangle(t, l, f));
    for (int k = 0; k < 3; ++k) angle_sum[t.faces()[f][k]] += angles[k];
  }
  CurvatureField k;
  k.vertices = t.interior_vertices();
  for (VertexId v : k.vertices) k.values.push_back(kTwoPi - angle_sum[v]);
  return k;
}

PinnedValues pin_boundary(const Triangulation& t, double value) {
  PinnedValues pinned;
  for (VertexId v : t.boundary_vertices()) pinned[v] = value;
  return pinned;
}

namespace {

// Curvature at the free vertices, or nullopt when some face is not realizable.
std::optional<Eigen::VectorXd> free_curvature(const Triangulation& t, const LengthField& l, const FactorField& u,
                                              const std::vector<VertexId>& free) {
  const LengthField lp = hyp_change(t, l, u);
  if (!triangle_inequality_violations(t, lp).empty()) return std::nullopt;
  const CurvatureField k = curvature(t, lp);
  Eigen::VectorXd out(free.size());
  for (std::size_t n = 0; n < free.size(); ++n) out[n] = k.at(free[n]);
  return out;
}

}  // namespace

SolveResult yamabe_solve(const Triangulation& t, const LengthField& l, const PinnedValues& pinned,
                         const FactorField& init, const SolverOptions& options) {
  if (static_cast<int>(init.values.size()) < t.id_bound()) {
    throw std::invalid_argument("yamabe_solve: initial factors do not cover the mesh");
  }
  for (VertexId v : t.boundary_vertices()) {
    if (!pinned.count(v)) throw std::invalid_argument(fmt::format("yamabe_solve: boundary vertex {} is not pinned", v));
  }
  for (const auto& [v, value] : pinned) {
    if (!t.has_vertex(v)) throw std::invalid_argument(fmt::format("yamabe_solve: pinned vertex {} unknown", v));
    if (init[v] != value) {
      throw std::invalid_argument(fmt::format("yamabe_solve: init disagrees with pinned value at vertex {}", v));
    }
  }
  std::vector<VertexId> free;
  for (VertexId v : t.vertices()) {
    if (!pinned.count(v)) free.push_back(v);
  }

  SolveResult result;
  result.factors = init;
  FactorField& u = result.factors;
  auto k = free_curvature(t, l, u, free);
  if (!k) throw InfeasibleStepError("yamabe_solve: initial factors break a triangle inequality", 0.0);
  double residual = free.empty() ? 0.0 : k->lpNorm<Eigen::Infinity>();
  result.log.push_back({0, residual, 0.0, 0});

  const int n = static_cast<int>(free.size());
  Eigen::MatrixXd jacobian(n, n);
  for (int iter = 1; residual > options.tolerance; ++iter) {
    if (iter > options.max_iterations) {
      throw NonConvergenceError(
          fmt::format("yamabe_solve: no convergence in {} iterations (residual {:.3e})", options.max_iterations,
                      residual),
          residual, options.max_iterations);
    }
    for (int c = 0; c < n; ++c) {
      const VertexId v = free[c];
      const double saved = u[v];
      u[v] = saved + options.fd_step;
      const auto plus = free_curvature(t, l, u, free);
      u[v] = saved - options.fd_step;
      const auto minus = free_curvature(t, l, u, free);
      u[v] = saved;
      if (!plus || !minus) throw InfeasibleStepError("yamabe_solve: finite-difference probe left the realizable cone", residual);
      jacobian.col(c) = (*plus - *minus) / (2.0 * options.fd_step);
    }
    const Eigen::VectorXd direction = jacobian.partialPivLu().solve(-*k);

    double step = 1.0;
    bool any_feasible = false;
    bool accepted = false;
    int halvings = 0;
    FactorField trial = u;
    for (; halvings <= options.max_halvings; ++halvings, step *= 0.5) {
      for (int c = 0; c < n; ++c) trial[free[c]] = u[free[c]] + step * direction[c];
      auto k_trial = free_curvature(t, l, trial, free);
      if (!k_trial) continue;
      any_feasible = true;
      const double r = k_trial->lpNorm<Eigen::Infinity>();
      if (r < residual) {
        u = trial;
        k = std::move(k_trial);
        residual = r;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!any_feasible) {
        throw InfeasibleStepError(
            fmt::format("yamabe_solve: every damped step breaks a triangle inequality (residual {:.3e})", residual),
            residual);
      }
      throw NonConvergenceError(fmt::format("yamabe_solve: line search stalled at residual {:.3e}", residual),
                                residual, iter);
    }
    result.iterations = iter;
    result.log.push_back({iter, residual, step, halvings});
  }
  result.residual = residual;
  return result;
}

}  // namespace hypdc

#include "hypdc/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "hypdc/conformal.hpp"
#include "hypdc/errors.hpp"

namespace hypdc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLemmaTolerance = 1e-12;
constexpr double kConversionTolerance = 1e-10;
constexpr int kMaxRedraws = 1000;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double snap(double margin, double tol) { return std::abs(margin) <= tol ? 0.0 : margin; }

nlohmann::json point_json(Vec2 z) { return nlohmann::json::array({z.real(), z.imag()}); }

struct SampleOutcome {
  double margin = 0.0;
  std::int64_t redraws = 0;
};

// Evaluates sample(index, witness*) for every index and reduces in index order.
template <class SampleFn>
AuditReport run_suite(const std::string& name, const SampleConfig& cfg, SampleFn sample) {
  if (cfg.count < 1) throw std::invalid_argument("sample count must be at least 1");
  const std::int64_t count = cfg.count;
  std::vector<SampleOutcome> outcomes(count);
  unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, count));
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::int64_t n = w; n < count; n += threads) outcomes[n] = sample(n, nullptr);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  AuditReport report;
  report.suite = name;
  report.samples = count;
  report.seed = cfg.seed;
  std::int64_t worst = 0;
  for (std::int64_t n = 0; n < count; ++n) {
    if (outcomes[n].margin < 0.0) ++report.violations;
    if (outcomes[n].margin < outcomes[worst].margin) worst = n;
    report.resampled += outcomes[n].redraws;
  }
  report.worst_margin = outcomes[worst].margin;
  nlohmann::json witness;
  sample(worst, &witness);
  witness["index"] = worst;
  report.witness = std::move(witness);
  return report;
}

}  // namespace

nlohmann::json to_json(const AuditReport& r) {
  nlohmann::json j;
  j["suite"] = r.suite;
  j["samples"] = r.samples;
  j["violations"] = r.violations;
  j["worst_margin"] = r.worst_margin;
  j["witness"] = r.witness;
  j["seed"] = r.seed;
  if (r.resampled != 0) j["resampled"] = r.resampled;
  return j;
}

SampleRng::SampleRng(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix64(s);
  std::uint64_t t = index ^ 0x6a09e667f3bcc909ULL;
  state_ = a ^ splitmix64(t);
}

std::uint64_t SampleRng::next() { return splitmix64(state_); }

double SampleRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int SampleRng::integer(int lo, int hi) {
  return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
}

Vec2 SampleRng::in_disk(double radius) {
  const double r = radius * std::sqrt(uniform());
  return std::polar(r, kTwoPi * uniform());
}

double normalized_margin(double lhs, double rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  return (rhs - lhs) / scale;
}

// ---------------------------------------------------------------------------
// Elementary chain

std::array<double, 5> elementary_chain_margins(double x) {
  const double s = std::sin(x);
  const double sh = std::sinh(x);
  const double em1 = std::expm1(x);
  return {normalized_margin(0.5 * x, s), normalized_margin(s, x), normalized_margin(x, sh),
          normalized_margin(sh, em1), normalized_margin(em1, 2.0 * x)};
}

AuditReport check_elementary_chain(const SampleConfig& cfg) {
  return run_suite("chain", cfg, [&](std::int64_t n, nlohmann::json* witness) {
    SampleRng rng(cfg.seed, n);
    // Both endpoints of [0, 1] are always audited.
    const double x = n == 0 ? 0.0 : n == 1 ? 1.0 : rng.uniform();
    const auto m = elementary_chain_margins(x);
    double worst = std::numeric_limits<double>::infinity();
    for (double v : m) worst = std::min(worst, snap(v, kLemmaTolerance));
    if (witness) *witness = {{"x", x}, {"margins", m}};
    return SampleOutcome{worst, 0};
  });
}

// ---------------------------------------------------------------------------
// Compare-distance lemma

CompareDistanceMargins compare_distance_margins(Vec2 z1, Vec2 z2) {
  if (std::abs(z1) > std::abs(z2)) std::swap(z1, z2);
  const DiskPoint p(z1), q(z2);
  const double d = hyp_distance(p, q);
  const double ratio = std::abs(z2 - z1) / (1.0 - std::abs(z2));
  return {d, normalized_margin(ratio, 2.0 * d), normalized_margin(0.5 * d, ratio)};
}

AuditReport check_compare_distance(const SampleConfig& cfg) {
  return run_suite("distance", cfg, [&](std::int64_t n, nlohmann::json* witness) {
    SampleRng rng(cfg.seed, n);
    const Vec2 z1 = rng.in_disk(cfg.disk_radius);
    const Vec2 z2 = rng.in_disk(cfg.disk_radius);
    const auto m = compare_distance_margins(z1, z2);
    const bool near_applies = m.distance <= 1.0;
    double worst = snap(m.far, kLemmaTolerance);
    if (near_applies) worst = std::min(worst, snap(m.near, kLemmaTolerance));
    if (witness) {
      *witness = {{"z1", point_json(z1)}, {"z2", point_json(z2)}, {"distance", m.distance}, {"margin_b", m.far}};
      (*witness)["margin_a"] = near_applies ? nlohmann::json(m.near) : nlohmann::json(nullptr);
    }
    return SampleOutcome{worst, 0};
  });
}

// ---------------------------------------------------------------------------
// Angle lemma

double angle_lemma_margin(const DiskPoint& p, const DiskPoint& q) {
  const double d = hyp_distance(p, q);
  return normalized_margin(chord_vs_geodesic_angle(p, q), 2.0 * d);
}

AuditReport check_angle_lemma(const SampleConfig& cfg) {
  return run_suite("angle", cfg, [&](std::int64_t n, nlohmann::json* witness) {
    SampleRng rng(cfg.seed, n);
    const DiskPoint p(rng.in_disk(cfg.disk_radius));
    // Distance in (0, 1), kept off 1 so rounding cannot leave the lemma's range.
    const double t = (1.0 - rng.uniform()) * (1.0 - 1e-9);
    const DiskPoint q = geodesic_point(p, kTwoPi * rng.uniform(), t);
    const double m = snap(angle_lemma_margin(p, q), kLemmaTolerance);
    if (witness) {
      *witness = {{"p", point_json(p.z())},
                  {"q", point_json(q.z())},
                  {"distance", hyp_distance(p, q)},
                  {"angle", chord_vs_geodesic_angle(p, q)}};
    }
    return SampleOutcome{m, 0};
  });
}

// ---------------------------------------------------------------------------
// Local maximum principle

namespace {

Triangulation fan_faces(int degree) {
  std::vector<Face> faces;
  for (int k = 1; k <= degree; ++k) faces.push_back({0, k, k % degree + 1});
  return Triangulation(std::move(faces));
}

}  // namespace

RingTrial regular_ring(int degree, double spoke) {
  std::vector<DiskPoint> pos{DiskPoint()};
  for (int k = 0; k < degree; ++k) pos.emplace_back(std::polar(std::tanh(0.5 * spoke), kTwoPi * k / degree));
  return {fan_faces(degree), GeodesicMap(std::move(pos)), 0};
}

std::optional<RingTrial> random_delaunay_ring(SampleRng& rng, int degree, double max_edge) {
  std::vector<double> weights(degree);
  double total = 0.0;
  for (double& w : weights) total += (w = 1.0 + 0.4 * rng.uniform());
  const double start = kTwoPi * rng.uniform();
  std::vector<DiskPoint> local{DiskPoint()};
  double theta = start;
  for (int k = 0; k < degree; ++k) {
    const double spoke = max_edge * rng.uniform(0.4, 0.75);
    local.emplace_back(std::polar(std::tanh(0.5 * spoke), theta));
    theta += kTwoPi * weights[k] / total;
  }
  const MobiusMap move = MobiusMap(DiskPoint(rng.in_disk(0.5)), kTwoPi * rng.uniform()).inverse();
  RingTrial trial{fan_faces(degree), GeodesicMap(std::move(local)).transformed(move), 0};

  const LengthField l = induced_lengths(trial.ring, trial.map);
  if (l.max_norm() > max_edge) return std::nullopt;
  if (!check_embedding(trial.ring, trial.map).embedded) return std::nullopt;
  if (!is_delaunay(trial.ring, trial.map).delaunay()) return std::nullopt;
  return trial;
}

RealizabilityOutcome ring_realizability(const RingTrial& trial, const std::vector<double>& u) {
  RealizabilityOutcome out;
  const LengthField l = induced_lengths(trial.ring, trial.map);
  const LengthField lp = hyp_change(trial.ring, l, FactorField{u});
  out.triangle_inequalities = triangle_inequality_violations(trial.ring, lp).empty();
  if (!out.triangle_inequalities) return out;
  out.curvature = curvature(trial.ring, lp).at(trial.center);
  if (std::abs(out.curvature) >= kFlatTolerance) return out;
  out.delaunay = is_delaunay(trial.ring, layout_fan(trial.ring, lp, trial.center)).delaunay();
  out.realizable = out.delaunay;
  return out;
}

AuditReport falsify_max_principle(const SampleConfig& cfg) {
  return run_suite("maxprinciple", cfg, [&](std::int64_t n, nlohmann::json* witness) {
    SampleRng rng(cfg.seed, n);
    std::optional<RingTrial> trial;
    std::int64_t redraws = 0;
    int degree = 0;
    for (; !trial; ++redraws) {
      if (redraws > kMaxRedraws) throw Error("falsify_max_principle: could not draw a Delaunay 1-ring");
      degree = rng.integer(5, 8);
      trial = random_delaunay_ring(rng, degree, cfg.ring_max_edge);
    }
    --redraws;
    std::vector<double> u(degree + 1);
    double min_neighbor = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= degree; ++k) {
      u[k] = rng.uniform(-cfg.ring_factor_bound, cfg.ring_factor_bound);
      min_neighbor = std::min(min_neighbor, u[k]);
    }
    u[0] = std::min(min_neighbor, 0.0) - cfg.ring_factor_bound * (1.0 - rng.uniform());
    const auto outcome = ring_realizability(*trial, u);
    double margin = 1.0;
    if (outcome.triangle_inequalities) {
      margin = std::abs(outcome.curvature) - kFlatTolerance;
      if (margin < 0.0 && !outcome.delaunay) margin = 0.0;
    }
    if (witness) {
      nlohmann::json pos = nlohmann::json::array();
      for (const DiskPoint& p : trial->map.positions()) pos.push_back(point_json(p.z()));
      *witness = {{"positions", pos},
                  {"factors", u},
                  {"curvature", outcome.curvature},
                  {"triangle_inequalities", outcome.triangle_inequalities},
                  {"delaunay", outcome.delaunay}};
    }
    return SampleOutcome{margin, redraws};
  });
}

// ---------------------------------------------------------------------------
// Factor conversion

AuditReport check_conversion(const SampleConfig& cfg) {
  return run_suite("conversion", cfg, [&](std::int64_t n, nlohmann::json* witness) {
    SampleRng rng(cfg.seed, n);
    const double radius = cfg.disk_radius;
    const double bound = cfg.factor_bound;
    std::int64_t redraws = 0;

    // Forward: chord relation by construction, hyperbolic relation audited.
    Vec2 z1, z2, w1, w2;
    double u1 = 0.0, u2 = 0.0;
    for (;; ++redraws) {
      if (redraws > kMaxRedraws) throw Error("check_conversion: could not place a forward instance");
      z1 = rng.in_disk(radius);
      z2 = rng.in_disk(radius);
      u1 = rng.uniform(-bound, bound);
      u2 = rng.uniform(-bound, bound);
      w1 = rng.in_disk(radius);
      w2 = w1 + std::polar(std::exp(0.5 * (u1 + u2)) * std::abs(z2 - z1), kTwoPi * rng.uniform());
      if (std::abs(w2) < radius && z1 != z2) break;
    }
    const GeodesicMap old_f({DiskPoint(z1), DiskPoint(z2)});
    const GeodesicMap new_f({DiskPoint(w1), DiskPoint(w2)});
    const FactorField uh = convert_factor(FactorField{{u1, u2}}, old_f, new_f);
    const double lhs_f = std::sinh(0.5 * hyp_distance(new_f[0], new_f[1]));
    const double rhs_f = std::exp(0.5 * (uh[0] + uh[1])) * std::sinh(0.5 * hyp_distance(old_f[0], old_f[1]));
    const double forward = std::abs(lhs_f - rhs_f) / std::max(std::abs(lhs_f), std::abs(rhs_f));

    // Reverse: hyperbolic relation by construction, chord relation audited.
    Vec2 y1, y2, x1, x2;
    double h1 = 0.0, h2 = 0.0;
    for (;; ++redraws) {
      if (redraws > 2 * kMaxRedraws) throw Error("check_conversion: could not place a reverse instance");
      y1 = rng.in_disk(radius);
      y2 = rng.in_disk(radius);
      h1 = rng.uniform(-bound, bound);
      h2 = rng.uniform(-bound, bound);
      x1 = rng.in_disk(radius);
      if (y1 == y2) continue;
      const double d = hyp_distance(DiskPoint(y1), DiskPoint(y2));
      const double target = 2.0 * std::asinh(std::exp(0.5 * (h1 + h2)) * std::sinh(0.5 * d));
      x2 = geodesic_point(DiskPoint(x1), kTwoPi * rng.uniform(), target).z();
      if (std::abs(x2) < radius) break;
    }
    const GeodesicMap old_r({DiskPoint(y1), DiskPoint(y2)});
    const GeodesicMap new_r({DiskPoint(x1), DiskPoint(x2)});
    const FactorField u = convert_factor_inverse(FactorField{{h1, h2}}, old_r, new_r);
    const double lhs_r = std::abs(x1 - x2);
    const double rhs_r = std::exp(0.5 * (u[0] + u[1])) * std::abs(y1 - y2);
    const double reverse = std::abs(lhs_r - rhs_r) / std::max(lhs_r, rhs_r);

    const double margin = kConversionTolerance - std::max(forward, reverse);
    if (witness) {
      *witness = {{"forward", {{"z", {point_json(z1), point_json(z2)}},
                               {"z_prime", {point_json(w1), point_json(w2)}},
                               {"u", {u1, u2}},
                               {"residual", forward}}},
                  {"reverse", {{"z", {point_json(y1), point_json(y2)}},
                               {"z_prime", {point_json(x1), point_json(x2)}},
                               {"u_h", {h1, h2}},
                               {"residual", reverse}}}};
    }
    return SampleOutcome{margin, redraws};
  });
}

// ---------------------------------------------------------------------------
// Closing contradiction chain

ChainInstance construct_chain_instance(double lp_ij, double lp_ik, double lp_jk, double l_ij, double l_ik,
                                       double l_jk, Vec2 center, double rotation) {
  // Vertex order (i, j, k): side a = jk, b = ik, c = ij.
  const auto local = layout_triangle(HypTriangle(lp_jk, lp_ik, lp_ij));
  const MobiusMap place = MobiusMap(DiskPoint(center), -rotation).inverse();
  return {place(local[0]), place(local[1]), place(local[2]), l_ij, l_ik, l_jk};
}

ChainAudit audit_contradiction_chain(double eps, const ChainInstance& in) {
  if (!(eps > 0.0 && eps <= 1.0)) throw HypothesisError("epsilon", "epsilon must lie in (0, 1]");
  const double lp_ij = hyp_distance(in.zi, in.zj);
  const double lp_ik = hyp_distance(in.zi, in.zk);
  const double lp_jk = hyp_distance(in.zj, in.zk);
  if (!(lp_ij <= eps / 16.0)) {
    throw HypothesisError("short_edge", fmt::format("l'_ij = {} exceeds eps/16 = {}", lp_ij, eps / 16.0));
  }
  if (!(lp_ik >= eps / 16.0)) {
    throw HypothesisError("long_edge", fmt::format("l'_ik = {} is below eps/16 = {}", lp_ik, eps / 16.0));
  }
  std::array<double, 3> angles;
  try {
    angles = triangle_angles(HypTriangle(in.l_jk, in.l_ik, in.l_ij));
  } catch (const TriangleInequalityError& e) {
    throw HypothesisError("original_triangle", e.what());
  }
  if (*std::min_element(angles.begin(), angles.end()) < eps) {
    throw HypothesisError("original_angles", "an original inner angle is below eps");
  }
  const double length_bound = eps * eps * eps / 8192.0;
  if (std::max({in.l_ij, in.l_ik, in.l_jk}) > length_bound) {
    throw HypothesisError("small_lengths", fmt::format("|l|_inf exceeds eps^3/8192 = {}", length_bound));
  }
  const auto euc = euclidean_angles(in.zi.z(), in.zj.z(), in.zk.z());
  if (*std::min_element(euc.begin(), euc.end()) < 0.5 * eps) {
    throw HypothesisError("companion_angles", "a Euclidean angle of the z'' triangle is below eps/2");
  }

  const double rj = 1.0 - in.zj.abs();
  const double chord_ij = std::abs(in.zj.z() - in.zi.z());
  const double chord_jk = std::abs(in.zk.z() - in.zj.z());
  const double ratio_ij = chord_ij / rj;
  const double ratio_jk = chord_jk / rj;
  const double sine_bound = eps / (8.0 * std::sin(0.5 * eps));
  const double compare = 4.0 * chord_jk / rj;
  const double sine_law = 4.0 * chord_ij / (rj * std::sin(0.5 * eps));

  const double product = factor_from_triangle(in.l_ij, in.l_ik, in.l_jk, lp_ij, lp_ik, lp_jk);
  const double q1 = 0.125 * (lp_ik / in.l_ij) * (lp_ij / lp_jk) * (std::sinh(in.l_jk) / std::sinh(in.l_ik));
  const double q2 = 0.125 * ((eps / 16.0) / in.l_ij) * (eps / 32.0) * std::sin(eps);
  const double q3 = eps * eps * eps / (8192.0 * in.l_ij);

  ChainAudit audit;
  auto step = [&](const char* name, double lhs, double rhs) {
    audit.steps.emplace_back(name, snap(normalized_margin(lhs, rhs), kChainTolerance));
  };
  step("s1_chord_ratio", ratio_ij, eps / 8.0);
  step("s2_sine_law", ratio_jk, sine_bound);
  step("s2_relaxation", sine_bound, 0.5);
  step("s3_boundary_gap", 0.5 * rj, 1.0 - in.zk.abs());
  step("s4_compare_distance", lp_jk, compare);
  step("s4_sine_law", compare, sine_law);
  step("s4_sine_relaxation", sine_law, (16.0 / eps) * ratio_ij);
  step("s4_short_edge", (16.0 / eps) * ratio_ij, (32.0 / eps) * lp_ij);
  step("s4_bound_two", (32.0 / eps) * lp_ij, 2.0);
  step("s4_long_edge_bound_two", lp_ik, 2.0);
  step("s5_sinh_bounds", q1, product);
  step("s5_hypotheses", q2, q1);
  step("s5_sine_relaxation", q3, q2);
  step("s5_final", 1.0, q3);

  AuditReport& r = audit.report;
  r.suite = "s3chain";
  r.samples = 1;
  r.worst_margin = std::numeric_limits<double>::infinity();
  nlohmann::json margins;
  for (const auto& [name, m] : audit.steps) {
    if (m < 0.0) ++r.violations;
    r.worst_margin = std::min(r.worst_margin, m);
    margins[name] = m;
  }
  r.witness = {{"epsilon", eps},
               {"z", {point_json(in.zi.z()), point_json(in.zj.z()), point_json(in.zk.z())}},
               {"l", {in.l_ij, in.l_ik, in.l_jk}},
               {"l_prime", {lp_ij, lp_ik, lp_jk}},
               {"exp_u_i", product},
               {"steps", margins}};
  return audit;
}

AuditReport check_contradiction_chain(const SampleConfig& cfg, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw HypothesisError("epsilon", "epsilon must lie in (0, 1]");
  return run_suite("s3chain", cfg, [&](std::int64_t n, nlohmann::json* witness) {
    SampleRng rng(cfg.seed, n);
    const double unit = eps / 16.0;
    const double bound = eps * eps * eps / 8192.0;
    for (std::int64_t redraws = 0; redraws <= kMaxRedraws; ++redraws) {
      const double lp_ij = unit * rng.uniform(0.7, 1.0);
      const double lp_ik = unit * rng.uniform(1.0, 1.3);
      const double lp_jk = lp_ik * rng.uniform(0.85, 1.15);
      double l_ij = bound * rng.uniform(0.5, 1.0);
      double l_ik = l_ij * rng.uniform(0.97, 1.03);
      double l_jk = l_ij * rng.uniform(0.97, 1.03);
      const double shrink = std::min(1.0, bound / std::max({l_ij, l_ik, l_jk}));
      l_ij *= shrink;
      l_ik *= shrink;
      l_jk *= shrink;
      const Vec2 center = rng.in_disk(0.9);
      const double rotation = kTwoPi * rng.uniform();
      try {
        const ChainInstance inst = construct_chain_instance(lp_ij, lp_ik, lp_jk, l_ij, l_ik, l_jk, center, rotation);
        ChainAudit audit = audit_contradiction_chain(eps, inst);
        if (witness) *witness = std::move(audit.report.witness);
        return SampleOutcome{audit.report.worst_margin, redraws};
      } catch (const HypothesisError&) {
      } catch (const TriangleInequalityError&) {
      }
    }
    throw Error("check_contradiction_chain: could not draw a compliant instance");
  });
}

}  // namespace hypdc

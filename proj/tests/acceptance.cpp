// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hypdc/conformal.hpp"
#include "hypdc/errors.hpp"
#include "hypdc/mesh.hpp"
#include "hypdc/svg.hpp"
#include "hypdc/verifier.hpp"
#include "oracles.hpp"

using namespace hypdc;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

SampleConfig config(std::int64_t count, std::uint64_t seed) {
  SampleConfig cfg;
  cfg.count = count;
  cfg.seed = seed;
  return cfg;
}

std::string summary(const AuditReport& r) {
  return fmt::format("{} samples, {} violations, worst margin {:.3e}", r.samples, r.violations, r.worst_margin);
}

Outcome elementary_chain() {
  const AuditReport r = check_elementary_chain(config(100000, 42));
  return {r.violations == 0 && r.samples == 100000, summary(r)};
}

Outcome compare_distance() {
  const AuditReport r = check_compare_distance(config(100000, 7));
  return {r.violations == 0, summary(r)};
}

Outcome angle_lemma() {
  const AuditReport r = check_angle_lemma(config(100000, 3));
  // The lemma is strict: every sample must keep a positive margin.
  return {r.violations == 0 && r.worst_margin > 0.0, summary(r)};
}

Outcome conversion() {
  const AuditReport r = check_conversion(config(10000, 5));
  return {r.violations == 0, summary(r) + fmt::format(", worst residual {:.3e}", 1e-10 - r.worst_margin)};
}

Outcome scaling_corollary() {
  double worst = 0.0;
  int patches = 0;
  for (std::uint64_t n = 0; n < 100; ++n) {
    SampleRng rng(2024, n);
    const int rings = 1 + static_cast<int>(n % 3);
    const Patch p = gen_regular_patch(rings, rng.uniform(0.02, 0.2));
    const GeodesicMap psi = p.map.transformed(MobiusMap(DiskPoint(rng.in_disk(0.8)), rng.uniform(0.0, 6.3)));
    const double b = rng.uniform(-0.01, 0.01);
    const ScaledEmbedding s = scale_embedding(p.mesh, psi, b);
    if (s.any_outside()) continue;
    const LengthField direct = s.lengths(p.mesh);
    const LengthField via = hyp_change(p.mesh, induced_lengths(p.mesh, psi), s.factors);
    for (std::size_t e = 0; e < direct.values.size(); ++e) {
      worst = std::max(worst, std::abs(direct.values[e] - via.values[e]));
    }
    ++patches;
  }
  return {patches == 100 && worst <= 1e-10, fmt::format("{} patches, max edge residual {:.3e}", patches, worst)};
}

Outcome delaunay_oracle() {
  int agree = 0, disagree = 0, random_cases = 0, cocircular_on = 0, cocircular = 0;
  auto classify = [](int sign) {
    return sign > 0 ? CirclePosition::inside : sign < 0 ? CirclePosition::outside : CirclePosition::on;
  };
  for (std::uint64_t n = 0; random_cases < 10000; ++n) {
    SampleRng rng(6, n);
    const Vec2 p = rng.in_disk(0.95), q = rng.in_disk(0.95), r = rng.in_disk(0.95), s = rng.in_disk(0.95);
    const double longest = std::max({std::norm(q - p), std::norm(r - q), std::norm(p - r)});
    if (std::abs(orient2d(p, q, r)) <= 1e-14 * longest) continue;
    ++random_cases;
    const CirclePosition got = in_circumdisk(DiskPoint(p), DiskPoint(q), DiskPoint(r), DiskPoint(s));
    (got == classify(oracle::incircle_extended(p, q, r, s, kCocircularTolerance)) ? agree : disagree)++;
  }
  for (std::uint64_t n = 0; cocircular < 100; ++n) {
    SampleRng rng(66, n);
    const Vec2 center = rng.in_disk(0.4);
    const double radius = rng.uniform(0.05, 0.45);
    const double base = rng.uniform(0.0, 2.0 * std::numbers::pi);
    std::array<Vec2, 4> z;
    for (int k = 0; k < 4; ++k) z[k] = center + std::polar(radius, base + 0.5 * std::numbers::pi * (k + 0.8 * rng.uniform()));
    ++cocircular;
    const CirclePosition got = in_circumdisk(DiskPoint(z[0]), DiskPoint(z[1]), DiskPoint(z[2]), DiskPoint(z[3]));
    const CirclePosition want = classify(oracle::incircle_extended(z[0], z[1], z[2], z[3], kCocircularTolerance));
    (got == want ? agree : disagree)++;
    if (got == CirclePosition::on) ++cocircular_on;
  }
  return {disagree == 0 && cocircular_on == 100,
          fmt::format("{} random + {} cocircular quadruples, {} disagreements, {} cocircular classified on",
                      random_cases, cocircular, disagree, cocircular_on)};
}

Outcome rigidity() {
  const Patch p = gen_regular_patch(3, 0.02);
  const LengthField l = induced_lengths(p.mesh, p.map);
  const PinnedValues pinned = pin_boundary(p.mesh, 0.0);
  int converged = 0, bad = 0;
  double worst_factor = 0.0, worst_residual = 0.0;
  for (std::uint64_t n = 0; n < 100; ++n) {
    SampleRng rng(77, n);
    FactorField init = FactorField::zeros(p.mesh.id_bound());
    for (VertexId v : p.mesh.interior_vertices()) init[v] = rng.uniform(-0.1, 0.1);
    try {
      const SolveResult r = yamabe_solve(p.mesh, l, pinned, init);
      ++converged;
      const double norm = r.factors.max_norm(p.mesh);
      const double residual = curvature(p.mesh, hyp_change(p.mesh, l, r.factors)).max_abs();
      worst_factor = std::max(worst_factor, norm);
      worst_residual = std::max(worst_residual, residual);
      if (norm > 1e-8 || residual > 1e-10) ++bad;
    } catch (const NonConvergenceError&) {
    } catch (const InfeasibleStepError&) {
    }
  }
  return {converged >= 95 && bad == 0,
          fmt::format("{}/100 converged, max |u| {:.3e}, max residual {:.3e}", converged, worst_factor,
                      worst_residual)};
}

Outcome max_principle() {
  const AuditReport r = falsify_max_principle(config(10000, 11));
  return {r.violations == 0, summary(r) + fmt::format(", {} redrawn rings", r.resampled)};
}

Outcome contradiction_chain() {
  std::int64_t samples = 0, violations = 0;
  double worst = 1.0;
  for (double eps : {0.1, 0.5, 1.0}) {
    const AuditReport r = check_contradiction_chain(config(1000, 9), eps);
    samples += r.samples;
    violations += r.violations;
    worst = std::min(worst, r.worst_margin);
  }
  const double eps = 0.5;
  const double edge = eps * eps * eps / 8192.0;
  const ChainAudit boundary = audit_contradiction_chain(
      eps, construct_chain_instance(eps / 32, eps / 8, eps / 8, edge, edge, edge, Vec2(0.0, 0.0), 0.0));
  violations += boundary.report.violations;
  double final_margin = -1.0;
  for (const auto& [name, m] : boundary.steps) {
    if (name == "s5_final") final_margin = m;
  }
  return {violations == 0 && worst >= 0.0 && final_margin == 0.0,
          fmt::format("{} instances over eps in {{0.1, 0.5, 1.0}}, {} violations, worst margin {:.3e}; "
                      "equality case final margin {}",
                      samples + 1, violations, std::min(worst, boundary.report.worst_margin), final_margin)};
}

Outcome determinism() {
  std::vector<std::pair<std::function<AuditReport(unsigned)>, const char*>> suites{
      {[](unsigned t) { auto c = config(5000, 1); c.threads = t; return check_elementary_chain(c); }, "chain"},
      {[](unsigned t) { auto c = config(5000, 1); c.threads = t; return check_compare_distance(c); }, "distance"},
      {[](unsigned t) { auto c = config(5000, 1); c.threads = t; return check_angle_lemma(c); }, "angle"},
      {[](unsigned t) { auto c = config(1000, 1); c.threads = t; return falsify_max_principle(c); }, "maxprinciple"},
      {[](unsigned t) { auto c = config(2000, 1); c.threads = t; return check_conversion(c); }, "conversion"},
      {[](unsigned t) { auto c = config(500, 1); c.threads = t; return check_contradiction_chain(c, 0.5); },
       "s3chain"},
  };
  std::vector<std::string> differing;
  for (const auto& [suite, name] : suites) {
    const std::string a = to_json(suite(0)).dump(), b = to_json(suite(0)).dump(), c = to_json(suite(1)).dump();
    if (a != b || a != c) differing.push_back(name);
  }
  const Patch p = gen_regular_patch(3, 0.1);
  const GeodesicMap moved = p.map.transformed(MobiusMap(DiskPoint(0.4, 0.3), 1.0));
  RenderOptions opts;
  opts.companion = true;
  const bool render_same = render_svg(p.mesh, moved, opts) == render_svg(p.mesh, moved, opts);
  return {differing.empty() && render_same,
          fmt::format("6 suites rerun (same seed, 1 and all threads): {} differ; render identical: {}",
                      differing.size(), render_same)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "elementary inequality chain", 1.0, elementary_chain},
      {2, "compare-distance lemma", 5.0, compare_distance},
      {3, "angle lemma", 5.0, angle_lemma},
      {4, "factor conversion biconditional", 5.0, conversion},
      {5, "scaling corollary", 10.0, scaling_corollary},
      {6, "Delaunay predicate vs extended precision", 5.0, delaunay_oracle},
      {7, "rigidity surrogate", 60.0, rigidity},
      {8, "max-principle falsification", 60.0, max_principle},
      {9, "contradiction-chain audit", 1.0, contradiction_chain},
      {10, "determinism", 60.0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, fmt::format("threw: {}", e.what())};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.ok && seconds < c.limit_seconds;
    if (!pass) ++failures;
    std::printf("%s %2d %s: %s [%.3f s, limit %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                seconds, c.limit_seconds);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

#pragma once

// Sampling audits of the inequalities behind hyperbolic discrete conformal
// rigidity. Every suite is deterministic in (count, seed): sample n draws from
// its own generator seeded by (seed, n), so the thread count never changes a
// report.
//
// Margins are normalized so that a nonnegative margin means the audited
// inequality holds. A margin within the suite tolerance of zero is reported as
// exactly zero, so violations == 0 iff worst_margin >= 0.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypdc/disk.hpp"
#include "hypdc/mesh.hpp"

namespace hypdc {

struct SampleConfig {
  std::int64_t count = 1000;
  std::uint64_t seed = 0;
  // Positions are drawn uniformly from the disk of this Euclidean radius.
  double disk_radius = 0.95;
  // Conversion factors are drawn from [-factor_bound, factor_bound].
  double factor_bound = 0.5;
  // Max-principle trials: neighbor factors in [-ring_factor_bound, ring_factor_bound].
  double ring_factor_bound = 0.1;
  // Max-principle trials: spoke lengths are at most this.
  double ring_max_edge = 0.1;
  // Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct AuditReport {
  std::string suite;
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  double worst_margin = 0.0;
  nlohmann::json witness;  // null when no sample ran
  std::uint64_t seed = 0;
  // Trials that had to be redrawn because construction failed.
  std::int64_t resampled = 0;

  bool passed() const { return violations == 0; }
};

nlohmann::json to_json(const AuditReport& report);

// Per-sample generator with a portable uniform mapping.
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi);  // inclusive bounds
  // Uniform by area in the disk of the given radius.
  Vec2 in_disk(double radius);

 private:
  std::uint64_t state_;
};

// Normalized margin (rhs - lhs) / max(|lhs|, |rhs|) of lhs <= rhs; 0 when both vanish.
double normalized_margin(double lhs, double rhs);

// x/2 <= sin x <= x <= sinh x <= e^x - 1 <= 2x, one normalized margin per link.
std::array<double, 5> elementary_chain_margins(double x);
AuditReport check_elementary_chain(const SampleConfig& cfg);

struct CompareDistanceMargins {
  double distance = 0.0;
  // Part (a), which the lemma asserts only for distance <= 1.
  double near = 0.0;
  // Part (b).
  double far = 0.0;
};

// Relabels so that |z1| <= |z2| before evaluating both parts.
CompareDistanceMargins compare_distance_margins(Vec2 z1, Vec2 z2);
AuditReport check_compare_distance(const SampleConfig& cfg);

// (2d - angle) / (2d) for distinct p, q.
double angle_lemma_margin(const DiskPoint& p, const DiskPoint& q);
AuditReport check_angle_lemma(const SampleConfig& cfg);

struct RingTrial {
  Triangulation ring;
  GeodesicMap map;
  VertexId center = 0;
};

struct RealizabilityOutcome {
  bool triangle_inequalities = false;
  double curvature = 0.0;
  bool delaunay = false;
  bool realizable = false;
};

// Tolerance on the center curvature for a changed 1-ring to count as flat.
inline constexpr double kFlatTolerance = 1e-9;

// Changes the ring's lengths by u and tests whether the result can be laid out
// as an embedded Delaunay 1-ring (flat at the center, Delaunay spokes).
RealizabilityOutcome ring_realizability(const RingTrial& trial, const std::vector<double>& u);

// Random embedded Delaunay 1-ring of the given degree with spokes at most
// max_edge, or nullopt when the draw fails the checks.
std::optional<RingTrial> random_delaunay_ring(SampleRng& rng, int degree, double max_edge);

// Regular n-gon 1-ring with spokes of the given length, centered at the origin.
RingTrial regular_ring(int degree, double spoke);

AuditReport falsify_max_principle(const SampleConfig& trials);

AuditReport check_conversion(const SampleConfig& cfg);

// Triangle data for the closing argument: positions z'' of i, j, k (the changed
// lengths l' are induced by them) and the original lengths l.
struct ChainInstance {
  DiskPoint zi, zj, zk;
  double l_ij = 0.0, l_ik = 0.0, l_jk = 0.0;
};

struct ChainAudit {
  std::vector<std::pair<std::string, double>> steps;
  AuditReport report;
};

inline constexpr double kChainTolerance = 1e-10;

// Throws HypothesisError naming the first unmet hypothesis.
ChainAudit audit_contradiction_chain(double epsilon, const ChainInstance& instance);

// Lays out a triangle with changed lengths (lp_ij, lp_ik, lp_jk), moves i to
// `center` with the given rotation, and attaches the original lengths.
ChainInstance construct_chain_instance(double lp_ij, double lp_ik, double lp_jk, double l_ij, double l_ik,
                                       double l_jk, Vec2 center, double rotation);

// Audits `count` random compliant instances at this epsilon.
AuditReport check_contradiction_chain(const SampleConfig& cfg, double epsilon);

}  // namespace hypdc

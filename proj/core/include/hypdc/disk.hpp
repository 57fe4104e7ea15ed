#pragma once

// Poincare disk geometry. Points live in the open unit disk with metric
// 4|dz|^2 / (1 - |z|^2)^2; every routine here is a closed-form evaluation.

#include <array>
#include <complex>

namespace hypdc {

// Planar point with no disk constraint (Euclidean companion maps, scaled
// positions that may have left the disk).
using Vec2 = std::complex<double>;

double cross(Vec2 a, Vec2 b);

// Twice the signed Euclidean area of (a, b, c); positive when counterclockwise.
double orient2d(Vec2 a, Vec2 b, Vec2 c);

class DiskPoint {
 public:
  DiskPoint() = default;
  // Throws OutsideDiskError unless x^2 + y^2 < 1.
  DiskPoint(double x, double y);
  explicit DiskPoint(Vec2 z);

  static bool contains(Vec2 z);

  double x() const { return z_.real(); }
  double y() const { return z_.imag(); }
  Vec2 z() const { return z_; }
  double abs() const { return std::abs(z_); }
  // 1 - |z|^2 evaluated as (1 - |z|)(1 + |z|).
  double conformal_denominator() const;

  friend bool operator==(const DiskPoint& a, const DiskPoint& b) { return a.z_ == b.z_; }

 private:
  Vec2 z_{0.0, 0.0};
};

// d(p, q) = arccosh(1 + 2|p-q|^2 / ((1-|p|^2)(1-|q|^2))), evaluated through the
// equivalent 2 asinh(|p-q| / sqrt((1-|p|^2)(1-|q|^2))) which keeps full precision
// for short edges.
double hyp_distance(const DiskPoint& p, const DiskPoint& q);

// Hyperbolic distance for raw planar points; +infinity if either lies outside D.
double distance_or_infinity(Vec2 p, Vec2 q);

// Disk automorphism z -> e^{i rotation} (z - center) / (1 - conj(center) z).
class MobiusMap {
 public:
  MobiusMap() = default;
  MobiusMap(DiskPoint center, double rotation) : center_(center), rotation_(rotation) {}

  // The automorphism sending p to the origin with no extra rotation.
  static MobiusMap to_origin(const DiskPoint& p) { return MobiusMap(p, 0.0); }

  DiskPoint operator()(const DiskPoint& p) const;
  // Applies the formula to an arbitrary planar point (no pole check).
  Vec2 apply(Vec2 z) const;
  MobiusMap inverse() const;

  const DiskPoint& center() const { return center_; }
  double rotation() const { return rotation_; }

 private:
  DiskPoint center_;
  double rotation_ = 0.0;
};

// Point at hyperbolic distance `distance` from `from`, leaving it in the
// Euclidean direction `direction` (radians) measured in the tangent plane.
DiskPoint geodesic_point(const DiskPoint& from, double direction, double distance);

// Side lengths of a hyperbolic triangle. Side k is opposite vertex k.
class HypTriangle {
 public:
  // Throws TriangleInequalityError naming the offending side.
  HypTriangle(double a, double b, double c);

  double a() const { return sides_[0]; }
  double b() const { return sides_[1]; }
  double c() const { return sides_[2]; }
  const std::array<double, 3>& sides() const { return sides_; }

 private:
  std::array<double, 3> sides_;
};

// Inner angles; angle k sits at the vertex opposite side k. Uses the half-angle
// form of the hyperbolic law of cosines.
std::array<double, 3> triangle_angles(const HypTriangle& t);

// Vertex 0 at the origin, vertex 1 on the positive real axis, vertex 2 in the
// upper half plane.
std::array<DiskPoint, 3> layout_triangle(const HypTriangle& t);

// Angle at p between the hyperbolic geodesic arc pq and the Euclidean segment pq.
// Exactly zero when the geodesic is a diameter. Throws DegenerateError if p == q.
double chord_vs_geodesic_angle(const DiskPoint& p, const DiskPoint& q);

struct EuclideanCircle {
  Vec2 center;
  double radius = 0.0;
};

// Throws DegenerateError on (Euclidean) collinear input.
EuclideanCircle circumcircle(Vec2 p, Vec2 q, Vec2 r);
EuclideanCircle circumcircle(const DiskPoint& p, const DiskPoint& q, const DiskPoint& r);

enum class CirclePosition { inside, on, outside };

const char* to_string(CirclePosition c);

// Relative tolerance for the "on" classification, scaled by the squared
// longest side of the triangle.
inline constexpr double kCocircularTolerance = 1e-12;

// (R^2 - |s - O|^2) / L^2 for the circumcircle (O, R) of p, q, r and longest
// Euclidean side L. Orientation-independent; positive means s is inside.
double incircle_normalized(Vec2 p, Vec2 q, Vec2 r, Vec2 s);

// Classifies s against the open circumdisk of p, q, r.
CirclePosition in_circumdisk(const DiskPoint& p, const DiskPoint& q, const DiskPoint& r,
                             const DiskPoint& s);

// Inner angles of the straight Euclidean triangle; angle k at vertex k.
std::array<double, 3> euclidean_angles(Vec2 p, Vec2 q, Vec2 r);

// +1 / -1 orientation of the geodesic triangle pqr, computed after sending p to
// the origin (where the sides through p are straight).
int hyperbolic_orientation(const DiskPoint& p, const DiskPoint& q, const DiskPoint& r);

}  // namespace hypdc

#include "hypdc/disk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "hypdc/errors.hpp"

namespace hypdc {

double cross(Vec2 a, Vec2 b) { return a.real() * b.imag() - a.imag() * b.real(); }

double orient2d(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

DiskPoint::DiskPoint(double x, double y) : DiskPoint(Vec2{x, y}) {}

DiskPoint::DiskPoint(Vec2 z) : z_(z) {
  if (!contains(z)) {
    throw OutsideDiskError(fmt::format("point ({}, {}) is not inside the unit disk", z.real(), z.imag()));
  }
}

bool DiskPoint::contains(Vec2 z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag()) && std::norm(z) < 1.0;
}

double DiskPoint::conformal_denominator() const {
  const double r = abs();
  return (1.0 - r) * (1.0 + r);
}

double hyp_distance(const DiskPoint& p, const DiskPoint& q) {
  const double chord = std::abs(p.z() - q.z());
  if (chord == 0.0) return 0.0;
  return 2.0 * std::asinh(chord / std::sqrt(p.conformal_denominator() * q.conformal_denominator()));
}

double distance_or_infinity(Vec2 p, Vec2 q) {
  if (!DiskPoint::contains(p) || !DiskPoint::contains(q)) {
    return std::numeric_limits<double>::infinity();
  }
  return hyp_distance(DiskPoint(p), DiskPoint(q));
}

Vec2 MobiusMap::apply(Vec2 z) const {
  const Vec2 a = center_.z();
  return std::polar(1.0, rotation_) * (z - a) / (1.0 - std::conj(a) * z);
}

DiskPoint MobiusMap::operator()(const DiskPoint& p) const {
  Vec2 w = apply(p.z());
  // Rounding can push images of points within an ulp of the circle outward.
  const double r2 = std::norm(w);
  if (r2 >= 1.0) w /= std::sqrt(r2) * (1.0 + std::numeric_limits<double>::epsilon());
  return DiskPoint(w);
}

MobiusMap MobiusMap::inverse() const {
  return MobiusMap(DiskPoint(-std::polar(1.0, rotation_) * center_.z()), -rotation_);
}

DiskPoint geodesic_point(const DiskPoint& from, double direction, double distance) {
  const DiskPoint local(std::polar(std::tanh(0.5 * distance), direction));
  return MobiusMap::to_origin(from).inverse()(local);
}

HypTriangle::HypTriangle(double a, double b, double c) : sides_{a, b, c} {
  for (int k = 0; k < 3; ++k) {
    const double s = sides_[k];
    const double others = sides_[(k + 1) % 3] + sides_[(k + 2) % 3];
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw TriangleInequalityError(fmt::format("side {} = {} is not a positive length", k, s), -1, k);
    }
    if (!(s < others)) {
      throw TriangleInequalityError(
          fmt::format("side {} = {} violates the triangle inequality (other sides sum to {})", k, s, others), -1,
          k);
    }
  }
}

std::array<double, 3> triangle_angles(const HypTriangle& t) {
  const auto& l = t.sides();
  const double s = 0.5 * (l[0] + l[1] + l[2]);
  const double sinh_s = std::sinh(s);
  std::array<double, 3> excess;
  for (int k = 0; k < 3; ++k) excess[k] = std::sinh(s - l[k]);
  std::array<double, 3> angles;
  for (int k = 0; k < 3; ++k) {
    const double num = excess[(k + 1) % 3] * excess[(k + 2) % 3];
    const double den = sinh_s * excess[k];
    angles[k] = 2.0 * std::atan(std::sqrt(num / den));
  }
  return angles;
}

std::array<DiskPoint, 3> layout_triangle(const HypTriangle& t) {
  const auto angles = triangle_angles(t);
  // Sides touching vertex 0 are c (to vertex 1) and b (to vertex 2).
  return {DiskPoint(), DiskPoint(std::tanh(0.5 * t.c()), 0.0),
          DiskPoint(std::polar(std::tanh(0.5 * t.b()), angles[0]))};
}

double chord_vs_geodesic_angle(const DiskPoint& p, const DiskPoint& q) {
  const Vec2 zp = p.z();
  const Vec2 zq = q.z();
  const double chord = std::abs(zq - zp);
  if (chord == 0.0) throw DegenerateError("chord_vs_geodesic_angle: coincident points");

  // The geodesic is a diameter exactly when p, q and the origin are collinear.
  const double det = cross(zp, zq);
  if (std::abs(det) <= 1e-15 * std::abs(zp) * std::abs(zq)) return 0.0;

  // Center c of the circle orthogonal to |z| = 1 through p and q:
  // |c - z|^2 = |c|^2 - 1 gives 2 Re(conj(z) c) = 1 + |z|^2 for z = p, q.
  const double hp = 0.5 * (1.0 + std::norm(zp));
  const double hq = 0.5 * (1.0 + std::norm(zq));
  const Vec2 center{(hp * zq.imag() - hq * zp.imag()) / det, (hq * zp.real() - hp * zq.real()) / det};
  const double radius = std::abs(center - zp);
  // Half the central angle subtended by the chord.
  return std::asin(std::min(1.0, chord / (2.0 * radius)));
}

EuclideanCircle circumcircle(Vec2 p, Vec2 q, Vec2 r) {
  const Vec2 b = q - p;
  const Vec2 c = r - p;
  const double d = 2.0 * cross(b, c);
  const double scale = std::max({std::norm(b), std::norm(c), std::norm(r - q)});
  if (!(std::abs(d) > 1e-14 * scale)) throw DegenerateError("circumcircle: collinear points");
  const double nb = std::norm(b);
  const double nc = std::norm(c);
  const Vec2 offset{(c.imag() * nb - b.imag() * nc) / d, (b.real() * nc - c.real() * nb) / d};
  return {p + offset, std::abs(offset)};
}

EuclideanCircle circumcircle(const DiskPoint& p, const DiskPoint& q, const DiskPoint& r) {
  return circumcircle(p.z(), q.z(), r.z());
}

const char* to_string(CirclePosition c) {
  switch (c) {
    case CirclePosition::inside:
      return "inside";
    case CirclePosition::on:
      return "on";
    case CirclePosition::outside:
      return "outside";
  }
  return "?";
}

double incircle_normalized(Vec2 p, Vec2 q, Vec2 r, Vec2 s) {
  const double orient = orient2d(p, q, r);
  const double longest = std::max({std::norm(q - p), std::norm(r - q), std::norm(p - r)});
  if (!(std::abs(orient) > 1e-14 * longest)) throw DegenerateError("in_circumdisk: degenerate triangle");
  const Vec2 a = p - s;
  const Vec2 b = q - s;
  const Vec2 c = r - s;
  const double det = std::norm(a) * cross(b, c) - std::norm(b) * cross(a, c) + std::norm(c) * cross(a, b);
  return det / (orient * longest);
}

CirclePosition in_circumdisk(const DiskPoint& p, const DiskPoint& q, const DiskPoint& r, const DiskPoint& s) {
  const double v = incircle_normalized(p.z(), q.z(), r.z(), s.z());
  if (std::abs(v) <= kCocircularTolerance) return CirclePosition::on;
  return v > 0.0 ? CirclePosition::inside : CirclePosition::outside;
}

std::array<double, 3> euclidean_angles(Vec2 p, Vec2 q, Vec2 r) {
  const std::array<Vec2, 3> v{p, q, r};
  std::array<double, 3> angles;
  for (int k = 0; k < 3; ++k) {
    const Vec2 u = v[(k + 1) % 3] - v[k];
    const Vec2 w = v[(k + 2) % 3] - v[k];
    angles[k] = std::abs(std::atan2(cross(u, w), u.real() * w.real() + u.imag() * w.imag()));
  }
  return angles;
}

int hyperbolic_orientation(const DiskPoint& p, const DiskPoint& q, const DiskPoint& r) {
  const MobiusMap m = MobiusMap::to_origin(p);
  const double c = cross(m.apply(q.z()), m.apply(r.z()));
  if (c == 0.0) return 0;
  return c > 0.0 ? 1 : -1;
}

}  // namespace hypdc

#pragma once

// Small geometric kernels shared by the mesh builders.

#include <cmath>

#include "swe/mesh.hpp"

namespace swe::geom {

/// Signed area of the planar triangle (a, b, c) projected on the xy-plane.
inline double signed_area_2d(const Vec3 &a, const Vec3 &b, const Vec3 &c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

/// Circumcenter of a planar triangle.
inline Vec3 circumcenter_2d(const Vec3 &a, const Vec3 &b, const Vec3 &c) {
  const double bx = b.x() - a.x(), by = b.y() - a.y();
  const double cx = c.x() - a.x(), cy = c.y() - a.y();
  const double d = 2.0 * (bx * cy - by * cx);
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  return {a.x() + (cy * b2 - by * c2) / d, a.y() + (bx * c2 - cx * b2) / d, 0.0};
}

/// Signed area of the spherical triangle (a, b, c) on the unit sphere
/// (Van Oosterom & Strackee); positive when counterclockwise seen from outside.
inline double spherical_area(const Vec3 &a, const Vec3 &b, const Vec3 &c) {
  const double triple = a.dot(b.cross(c));
  const double denom = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(triple, denom);
}

/// Great-circle angle between unit vectors.
inline double arc(const Vec3 &a, const Vec3 &b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

/// Circumcenter of a spherical triangle, as a unit vector on the same side as
/// the counterclockwise face normal.
inline Vec3 spherical_circumcenter(const Vec3 &a, const Vec3 &b, const Vec3 &c) {
  return (b - a).cross(c - a).normalized();
}

/// Wrap x into [0, period).
inline double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

} // namespace swe::geom

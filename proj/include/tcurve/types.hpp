#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace tcurve {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

/// Point in geodesic polar coordinates. Planar curves use raw Vec2 (x, y) instead.
struct ChartPoint {
  double r = 0.0;
  double phi = 0.0;
};

// Errors are grouped by how the CLI reports them: bad input, failed numerics,
// or a refinement that did not settle.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class ComputationError : public std::runtime_error {
 public:
  explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Arc exited the chart's validity interval; `exit_s` is the arc length reached.
class TruncatedArcError : public ComputationError {
 public:
  TruncatedArcError(const std::string& what, double s) : ComputationError(what), exit_s(s) {}
  double exit_s = 0.0;
};

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Reduce an angle to (-pi, pi]; a tie at +-pi maps to +pi.
inline double wrap_angle(double x) {
  double y = std::fmod(x + M_PI, 2.0 * M_PI);
  if (y <= 0.0) y += 2.0 * M_PI;
  return y - M_PI;
}

/// Oriented angle from `from` to `to` in an oriented orthonormal frame.
inline double oriented_angle(const Vec2& from, const Vec2& to) {
  return std::atan2(cross2(from, to), from.dot(to));
}

/// Geodesic distance of two unit vectors on the Gauss sphere (stable near 0 and pi).
inline double sphere_angle(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

/// arccos of a clamped inner product; safe for nearly identical unit vectors.
inline double clamped_acos(double dot) { return std::acos(std::min(1.0, std::max(-1.0, dot))); }

}  // namespace tcurve

/*
 * Copyright 2026 The GVF Path Following Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

/**
 * @file vec2.hpp
 * @brief Planar vector and 2x2 matrix types used throughout the guidance code.
 *
 * Both types are plain aggregates of doubles. Positions are in meters and
 * velocities in meters per second, in a fixed navigation frame with x to the
 * east and y to the north.
 */

#include <cmath>
#include <numbers>
#include <ostream>

namespace gvf {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2() = default;
  constexpr Vec2(double x_in, double y_in) : x(x_in), y(y_in) {}

  constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
  constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  friend constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

  constexpr Vec2& operator+=(const Vec2& r) {
    x += r.x;
    y += r.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& r) {
    x -= r.x;
    y -= r.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  constexpr bool operator==(const Vec2&) const = default;

  constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }

  /// z-component of the 3D cross product (this, 0) x (r, 0).
  constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }

  double norm() const { return std::hypot(x, y); }
  constexpr double squared_norm() const { return x * x + y * y; }

  /// Unit vector in the same direction. Requires norm() > 0.
  Vec2 normalized() const {
    const double n = norm();
    return {x / n, y / n};
  }

  bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline std::ostream& operator<<(std::ostream& os, const Vec2& v) {
  return os << "(" << v.x << ", " << v.y << ")";
}

/// Unit heading vector m(psi) = (cos psi, sin psi).
inline Vec2 heading(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Row-major 2x2 matrix.
struct Mat2 {
  double xx{0.0};
  double xy{0.0};
  double yx{0.0};
  double yy{0.0};

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {}; }
  static constexpr Mat2 from_columns(const Vec2& c0, const Vec2& c1) {
    return {c0.x, c1.x, c0.y, c1.y};
  }

  constexpr Vec2 operator*(const Vec2& v) const {
    return {xx * v.x + xy * v.y, yx * v.x + yy * v.y};
  }
  constexpr Mat2 operator*(const Mat2& m) const {
    return {xx * m.xx + xy * m.yx, xx * m.xy + xy * m.yy,
            yx * m.xx + yy * m.yx, yx * m.xy + yy * m.yy};
  }
  constexpr Mat2 operator+(const Mat2& m) const {
    return {xx + m.xx, xy + m.xy, yx + m.yx, yy + m.yy};
  }
  constexpr Mat2 operator-(const Mat2& m) const {
    return {xx - m.xx, xy - m.xy, yx - m.yx, yy - m.yy};
  }
  constexpr Mat2 operator*(double s) const {
    return {xx * s, xy * s, yx * s, yy * s};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& m) { return m * s; }

  constexpr bool operator==(const Mat2&) const = default;

  constexpr Mat2 transposed() const { return {xx, yx, xy, yy}; }

  double frobenius_norm() const {
    return std::sqrt(xx * xx + xy * xy + yx * yx + yy * yy);
  }

  /// |xy - yx| relative to the matrix magnitude; 0 for the zero matrix.
  double asymmetry() const {
    const double scale = frobenius_norm();
    return scale > 0.0 ? std::abs(xy - yx) / scale : 0.0;
  }

  bool is_finite() const {
    return std::isfinite(xx) && std::isfinite(xy) && std::isfinite(yx) &&
           std::isfinite(yy);
  }
};

/// The fixed rotation taking a curve normal to its tangent, E = [[0, 1], [-1, 0]].
inline constexpr Mat2 kRotateCw{0.0, 1.0, -1.0, 0.0};

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, kTwoPi);
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  return wrapped;
}

inline constexpr double deg_to_rad(double deg) {
  return deg * std::numbers::pi / 180.0;
}
inline constexpr double rad_to_deg(double rad) {
  return rad * 180.0 / std::numbers::pi;
}

}  // namespace gvf

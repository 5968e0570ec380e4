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

// Test-only oracles and fixtures. Nothing here calls into the code paths it
// is used to check, except where noted.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "gvf/cli/scenario.hpp"
#include "gvf/curve.hpp"
#include "gvf/guidance.hpp"
#include "gvf/sim.hpp"
#include "gvf/vec2.hpp"

namespace gvf::testing {

inline const std::filesystem::path kSourceDir{GVF_SOURCE_DIR};
inline const std::filesystem::path kScenarioDir = kSourceDir / "scenarios";
inline const std::filesystem::path kFixtureDir = kSourceDir / "tests" / "fixtures";

/// Flight-test ellipse: a = 50 m, b = 75 m, alpha = -15 deg, centered at 0.
inline EllipseParams flight_ellipse() { return {{0.0, 0.0}, 50.0, 75.0, deg_to_rad(-15.0)}; }

/// Point on the phi = 3 level set of the flight ellipse, on its a semi-axis.
inline Vec2 flight_ellipse_start() {
  return 100.0 * EllipseCurve(flight_ellipse()).a_axis();
}

/// Closed-form solution of p' = s m(psi) + w, psi' = u for constant u != 0
/// and constant w, valid for any t (including negative).
struct ArcSolution {
  Vec2 p;
  double yaw;
};
inline ArcSolution exact_arc(Vec2 p0, double yaw0, double u, double s, Vec2 w, double t) {
  const double yaw = yaw0 + u * t;
  const Vec2 p = p0 + (s / u) * Vec2{std::sin(yaw) - std::sin(yaw0), std::cos(yaw0) - std::cos(yaw)} +
                 w * t;
  return {p, yaw};
}

/// Course angle of the field at p, from atan2 of the raw field vector.
template <PlanarCurve C>
double field_course(const C& curve, Vec2 p, const guidance::Gains& g, guidance::Direction d) {
  const Vec2 f = guidance::field(curve, p, g, d).value;
  return std::atan2(f.y, f.x);
}

/// Smallest signed difference a - b of two angles.
inline double angle_diff(double a, double b) { return wrap_angle(a - b); }

/// Integrates the unit-speed field flow p' = v * pd^(p) with RK4. Independent
/// of the course-rate formula.
template <PlanarCurve C>
Vec2 flow(const C& curve, Vec2 p, double v, double t, int steps, const guidance::Gains& g,
          guidance::Direction d) {
  const double h = t / steps;
  auto f = [&](Vec2 q) { return v * guidance::field(curve, q, g, d).value.normalized(); };
  for (int i = 0; i < steps; ++i) {
    const Vec2 k1 = f(p);
    const Vec2 k2 = f(p + 0.5 * h * k1);
    const Vec2 k3 = f(p + 0.5 * h * k2);
    const Vec2 k4 = f(p + h * k3);
    p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return p;
}

/// Ellipse whose gradient (and therefore Hessian) is scaled by a constant factor.
inline cli::CurveSpec corrupted_ellipse(cli::ConfigReader& r, double factor) {
  EllipseParams p;
  p.center = {r.get_or("ellipse_center_x_m", 0.0), r.get_or("ellipse_center_y_m", 0.0)};
  p.a = r.get<double>("ellipse_a_m");
  p.b = r.get<double>("ellipse_b_m");
  p.alpha = deg_to_rad(r.get_or("ellipse_alpha_deg", 0.0));
  const EllipseCurve e(p);
  ImplicitCurve curve(
      "corrupted_ellipse", [e](Vec2 q) { return e.phi(q); },
      [e, factor](Vec2 q) { return factor * e.grad(q); },
      [e, factor](Vec2 q) { return factor * e.hessian(q); }, r.get_or("c_star", 6.0),
      e.gradient_scale());
  return {curve, p.center, 0.05};
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gvf_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace gvf::testing

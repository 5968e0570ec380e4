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
 * @file curve.hpp
 * @brief Implicit planar curves phi(p) = 0 and their validation.
 *
 * A desired path is the zero level set of a C2 function phi. The guidance
 * code needs phi, its gradient and its Hessian. Any type exposing those three
 * members models PlanarCurve; ImplicitCurve type-erases one so curves can be
 * chosen at runtime or supplied by users as three callables.
 *
 * The level error e(p) = phi(p) is signed and is in general not a Euclidean
 * distance.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gvf/vec2.hpp"

namespace gvf {

template <typename C>
concept PlanarCurve = requires(const C& c, Vec2 p) {
  { c.phi(p) } -> std::convertible_to<double>;
  { c.grad(p) } -> std::convertible_to<Vec2>;
  { c.hessian(p) } -> std::convertible_to<Mat2>;
};

/// Typical on-path gradient magnitude, used to scale degeneracy thresholds.
template <PlanarCurve C>
double gradient_scale_of(const C& curve) {
  if constexpr (requires { { curve.gradient_scale() } -> std::convertible_to<double>; }) {
    return curve.gradient_scale();
  } else {
    return 1.0;
  }
}

// ---------------------------------------------------------------------------
// Shipped curves.

/// phi(p) = n . (p - point) with n the left normal of the direction angle.
/// Units of phi are meters.
class LineCurve {
 public:
  LineCurve(Vec2 point, double direction_angle)
      : point_(point), normal_{-std::sin(direction_angle), std::cos(direction_angle)} {}

  double phi(Vec2 p) const { return normal_.dot(p - point_); }
  Vec2 grad(Vec2) const { return normal_; }
  Mat2 hessian(Vec2) const { return Mat2::zero(); }
  double gradient_scale() const { return 1.0; }

 private:
  Vec2 point_;
  Vec2 normal_;
};

/// phi(p) = |p - center|^2 - r^2 (units of m^2).
class CircleCurve {
 public:
  CircleCurve(Vec2 center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
  }

  double phi(Vec2 p) const { return (p - center_).squared_norm() - radius_ * radius_; }
  Vec2 grad(Vec2 p) const { return 2.0 * (p - center_); }
  Mat2 hessian(Vec2) const { return 2.0 * Mat2::identity(); }
  double gradient_scale() const { return 2.0 * radius_; }

  Vec2 center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Vec2 center_;
  double radius_;
};

struct EllipseParams {
  Vec2 center{};
  double a{1.0};      ///< semi-axis along the rotated x axis, meters
  double b{1.0};      ///< semi-axis along the rotated y axis, meters
  double alpha{0.0};  ///< rotation w.r.t. the navigation x axis, radians
};

/// Rotated ellipse
///   phi(p) = (( dx cos a - dy sin a) / a)^2 + ((dx sin a + dy cos a) / b)^2 - 1
/// with (dx, dy) = p - h. Dimensionless; phi(h) = -1 and grad vanishes only at h.
class EllipseCurve {
 public:
  explicit EllipseCurve(const EllipseParams& params) : params_(params) {
    if (!(params.a > 0.0) || !(params.b > 0.0)) {
      throw std::invalid_argument("ellipse semi-axes must be positive");
    }
    const double c = std::cos(params.alpha);
    const double s = std::sin(params.alpha);
    // phi = d^T Q d - 1 with Q = R^T diag(1/a^2, 1/b^2) R,
    // R = [[c, -s], [s, c]].
    const double ia2 = 1.0 / (params.a * params.a);
    const double ib2 = 1.0 / (params.b * params.b);
    q_xx_ = c * c * ia2 + s * s * ib2;
    q_yy_ = s * s * ia2 + c * c * ib2;
    q_xy_ = (ib2 - ia2) * c * s;
  }

  double phi(Vec2 p) const {
    const Vec2 d = p - params_.center;
    const double c = std::cos(params_.alpha);
    const double s = std::sin(params_.alpha);
    const double u = (d.x * c - d.y * s) / params_.a;
    const double v = (d.x * s + d.y * c) / params_.b;
    return u * u + v * v - 1.0;
  }
  Vec2 grad(Vec2 p) const {
    const Vec2 d = p - params_.center;
    return {2.0 * (q_xx_ * d.x + q_xy_ * d.y), 2.0 * (q_xy_ * d.x + q_yy_ * d.y)};
  }
  Mat2 hessian(Vec2) const { return {2.0 * q_xx_, 2.0 * q_xy_, 2.0 * q_xy_, 2.0 * q_yy_}; }
  double gradient_scale() const { return 2.0 / std::max(params_.a, params_.b); }

  const EllipseParams& params() const { return params_; }

  /// Unit vector along the b semi-axis.
  Vec2 b_axis() const { return {std::sin(params_.alpha), std::cos(params_.alpha)}; }
  /// Unit vector along the a semi-axis.
  Vec2 a_axis() const { return {std::cos(params_.alpha), -std::sin(params_.alpha)}; }

 private:
  EllipseParams params_;
  double q_xx_{};
  double q_xy_{};
  double q_yy_{};
};

// ---------------------------------------------------------------------------
// Type-erased curve.

/// A curve given by three callables plus its regularity bound c*, i.e. the
/// band |phi| <= c* over which grad phi is required not to vanish.
class ImplicitCurve {
 public:
  using PhiFn = std::function<double(Vec2)>;
  using GradFn = std::function<Vec2(Vec2)>;
  using HessianFn = std::function<Mat2(Vec2)>;

  ImplicitCurve(std::string name, PhiFn phi, GradFn grad, HessianFn hessian, double c_star,
                double gradient_scale = 1.0)
      : name_(std::move(name)),
        phi_(std::move(phi)),
        grad_(std::move(grad)),
        hessian_(std::move(hessian)),
        c_star_(c_star),
        gradient_scale_(gradient_scale) {
    if (!phi_ || !grad_ || !hessian_) {
      throw std::invalid_argument("implicit curve requires phi, grad and hessian callables");
    }
    if (!(c_star > 0.0)) throw std::invalid_argument("c_star must be positive");
    if (!(gradient_scale > 0.0)) throw std::invalid_argument("gradient_scale must be positive");
  }

  template <PlanarCurve C>
  static ImplicitCurve from(std::string name, C curve, double c_star) {
    const double scale = gradient_scale_of(curve);
    auto shared = std::make_shared<const C>(std::move(curve));
    return ImplicitCurve(
        std::move(name), [shared](Vec2 p) { return shared->phi(p); },
        [shared](Vec2 p) { return shared->grad(p); },
        [shared](Vec2 p) { return shared->hessian(p); }, c_star, scale);
  }

  double phi(Vec2 p) const { return phi_(p); }
  Vec2 grad(Vec2 p) const { return grad_(p); }
  Mat2 hessian(Vec2 p) const { return hessian_(p); }

  const std::string& name() const { return name_; }
  double c_star() const { return c_star_; }
  double gradient_scale() const { return gradient_scale_; }

  /// Known critical points (grad phi = 0), e.g. an ellipse center. Used to
  /// mask sampling and reports; never required for correctness.
  const std::vector<Vec2>& critical_points() const { return critical_points_; }
  ImplicitCurve& with_critical_point(Vec2 p) {
    critical_points_.push_back(p);
    return *this;
  }

 private:
  std::string name_;
  PhiFn phi_;
  GradFn grad_;
  HessianFn hessian_;
  double c_star_;
  double gradient_scale_;
  std::vector<Vec2> critical_points_;
};

static_assert(PlanarCurve<ImplicitCurve>);
static_assert(PlanarCurve<EllipseCurve>);

/// phi(p) = 0 along the line through `point` with heading `direction_angle`.
inline ImplicitCurve make_line(Vec2 point, double direction_angle,
                               double c_star = std::numeric_limits<double>::max()) {
  return ImplicitCurve::from("line", LineCurve(point, direction_angle), c_star);
}

inline ImplicitCurve make_circle(Vec2 center, double radius, double c_star) {
  return ImplicitCurve::from("circle", CircleCurve(center, radius), c_star)
      .with_critical_point(center);
}

/// Circle with the largest regular band, c* just under r^2.
inline ImplicitCurve make_circle(Vec2 center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
  return make_circle(center, radius, 0.999 * radius * radius);
}

inline ImplicitCurve make_ellipse(const EllipseParams& params, double c_star = 6.0) {
  return ImplicitCurve::from("ellipse", EllipseCurve(params), c_star)
      .with_critical_point(params.center);
}

// ---------------------------------------------------------------------------
// Basic evaluations.

/// Signed level error e(p) = phi(p).
template <PlanarCurve C>
double eval_error(const C& curve, Vec2 p) {
  return curve.phi(p);
}

/// n(p) = grad phi(p). May be the zero vector at critical points.
template <PlanarCurve C>
Vec2 normal(const C& curve, Vec2 p) {
  return curve.grad(p);
}

/// tau = E n = (n_y, -n_x).
inline Vec2 tangent_of_normal(Vec2 n) { return kRotateCw * n; }

template <PlanarCurve C>
Vec2 tangent(const C& curve, Vec2 p) {
  return tangent_of_normal(curve.grad(p));
}

// ---------------------------------------------------------------------------
// Validation.

struct Box {
  Vec2 min{};
  Vec2 max{};

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  bool valid() const { return max.x > min.x && max.y > min.y; }
  static Box centered(Vec2 center, double side) {
    const Vec2 half{side / 2.0, side / 2.0};
    return {center - half, center + half};
  }
};

/// Uniform probe points in a box, reproducible for a given seed.
inline std::vector<Vec2> sample_probes(const Box& box, std::size_t count, std::uint64_t seed) {
  if (!box.valid()) throw std::invalid_argument("sampling box must have positive extent");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.min.x, box.max.x);
  std::uniform_real_distribution<double> uy(box.min.y, box.max.y);
  std::vector<Vec2> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = ux(rng);
    points.push_back({x, uy(rng)});
  }
  return points;
}

struct ValidationReport {
  double max_grad_rel_error{0.0};
  double max_hessian_rel_error{0.0};
  Vec2 worst_grad_point{};
  Vec2 worst_hessian_point{};
  double max_hessian_asymmetry{0.0};
  std::size_t probes_checked{0};
  std::vector<Vec2> non_finite_points;

  bool passes(double tolerance) const {
    return non_finite_points.empty() && max_grad_rel_error < tolerance &&
           max_hessian_rel_error < tolerance && max_hessian_asymmetry < 1e-12;
  }
};

/// Compares the analytic gradient and Hessian against central differences of
/// phi and grad respectively. Relative errors are measured against the
/// finite-difference reference: |analytic - fd| / max(|fd|, floor).
template <PlanarCurve C>
ValidationReport fd_validate(const C& curve, std::span<const Vec2> probes, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const double floor = 1e-12 * gradient_scale_of(curve);
  const Vec2 ex{h, 0.0};
  const Vec2 ey{0.0, h};

  ValidationReport report;
  for (const Vec2& p : probes) {
    if (!p.is_finite()) throw std::invalid_argument("probe points must be finite");
    const double fxp = curve.phi(p + ex);
    const double fxm = curve.phi(p - ex);
    const double fyp = curve.phi(p + ey);
    const double fym = curve.phi(p - ey);
    const Vec2 g = curve.grad(p);
    const Mat2 hess = curve.hessian(p);
    const Vec2 gxp = curve.grad(p + ex);
    const Vec2 gxm = curve.grad(p - ex);
    const Vec2 gyp = curve.grad(p + ey);
    const Vec2 gym = curve.grad(p - ey);

    const bool finite = std::isfinite(fxp) && std::isfinite(fxm) && std::isfinite(fyp) &&
                        std::isfinite(fym) && g.is_finite() && hess.is_finite() &&
                        gxp.is_finite() && gxm.is_finite() && gyp.is_finite() &&
                        gym.is_finite();
    if (!finite) {
      report.non_finite_points.push_back(p);
      continue;
    }

    const Vec2 g_fd{(fxp - fxm) / (2.0 * h), (fyp - fym) / (2.0 * h)};
    const Mat2 h_fd = Mat2::from_columns((gxp - gxm) / (2.0 * h), (gyp - gym) / (2.0 * h));

    const double g_err = (g - g_fd).norm() / std::max(g_fd.norm(), floor);
    const double h_err = (hess - h_fd).frobenius_norm() / std::max(h_fd.frobenius_norm(), floor);
    if (g_err > report.max_grad_rel_error) {
      report.max_grad_rel_error = g_err;
      report.worst_grad_point = p;
    }
    if (h_err > report.max_hessian_rel_error) {
      report.max_hessian_rel_error = h_err;
      report.worst_hessian_point = p;
    }
    report.max_hessian_asymmetry = std::max(report.max_hessian_asymmetry, hess.asymmetry());
    ++report.probes_checked;
  }
  return report;
}

struct RegularityReport {
  double band{0.0};
  double min_grad_norm{std::numeric_limits<double>::infinity()};
  Vec2 argmin{};
  std::size_t samples_in_band{0};
  std::size_t draws{0};
  bool regular{false};
};

/// Rejection-samples the band |phi| <= band inside `box` and records the
/// smallest gradient norm seen. Points within `exclusion_radius` of a known
/// critical point of an ImplicitCurve are rejected, which lets a band that
/// contains e.g. an ellipse center be checked on the remaining region.
/// The band is regular when the minimum exceeds 1e-9 times the gradient scale.
template <PlanarCurve C>
RegularityReport check_regularity(const C& curve, double band, const Box& box,
                                  std::size_t samples, std::uint64_t seed,
                                  double exclusion_radius = 0.0) {
  if (!(band >= 0.0)) throw std::invalid_argument("band must be non-negative");
  if (!box.valid()) throw std::invalid_argument("sampling box must have positive extent");
  if (samples == 0) throw std::invalid_argument("regularity check needs at least one sample");

  std::vector<Vec2> excluded;
  if constexpr (std::same_as<C, ImplicitCurve>) excluded = curve.critical_points();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.min.x, box.max.x);
  std::uniform_real_distribution<double> uy(box.min.y, box.max.y);

  RegularityReport report;
  report.band = band;
  const std::size_t max_draws = samples * 1000;
  while (report.samples_in_band < samples && report.draws < max_draws) {
    ++report.draws;
    const double x = ux(rng);
    const Vec2 p{x, uy(rng)};
    if (std::abs(curve.phi(p)) > band) continue;
    const bool near_critical = std::any_of(excluded.begin(), excluded.end(), [&](Vec2 c) {
      return (p - c).norm() < exclusion_radius;
    });
    if (near_critical) continue;
    ++report.samples_in_band;
    const double g = curve.grad(p).norm();
    if (g < report.min_grad_norm) {
      report.min_grad_norm = g;
      report.argmin = p;
    }
  }
  report.regular = report.samples_in_band > 0 &&
                   report.min_grad_norm > 1e-9 * gradient_scale_of(curve);
  return report;
}

}  // namespace gvf

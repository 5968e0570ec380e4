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
 * @file guidance.hpp
 * @brief Guiding vector field and the yaw-rate law that tracks it.
 *
 * Vehicle model: p' = s m(psi) + w, psi' = u, with constant airspeed s and a
 * wind w satisfying |w| < s.
 *
 * The field is  pd(p) = (dir E) n - k_e e n,  n = grad phi, e = phi.
 * Its unit direction is the desired course. Following it requires the course
 * rate chi_d' obtained by differentiating pd along the actual motion:
 *
 *   pd'' = (dir E - k_e e I) H p' - k_e (n . p') n
 *   chi_d' = (pd x pd'') / |pd|^2
 *
 * The control law
 *
 *   u = |p'| / (s cos beta) * (chi_d' + k_d (p^ x pd^))
 *
 * makes V2 = 1 - p^ . pd^ decay as dV2/dt = -k_d (p^ x pd^)^2.
 * Here x is the planar cross product, so p^ x pd^ = p^T E pd^.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>

#include "gvf/curve.hpp"
#include "gvf/errors.hpp"
#include "gvf/vec2.hpp"

namespace gvf {

/// Position and yaw of the vehicle in the navigation frame. Yaw in (-pi, pi].
struct VehicleState {
  Vec2 p{};
  double yaw{0.0};
};

namespace guidance {

inline constexpr double kGravity = 9.80665;
inline constexpr double kSpeedEpsilon = 1e-6;
/// Commands saturate once |cos beta| drops below cos(80 deg).
inline const double kCosBetaEpsilon = std::cos(deg_to_rad(80.0));
/// Field degenerate below this multiple of the curve's gradient scale.
inline constexpr double kFieldEpsilonScale = 1e-9;

/// Traversal direction. kForward uses E as is; kReverse substitutes -E.
enum class Direction : int { kForward = 1, kReverse = -1 };

inline double sign_of(Direction d) { return static_cast<int>(d) > 0 ? 1.0 : -1.0; }

struct Gains {
  double k_e{1.0};  ///< field aggressiveness
  double k_d{1.0};  ///< convergence rate to the field

  void validate() const {
    if (!(k_e > 0.0) || !(k_d > 0.0)) {
      throw std::invalid_argument("gains k_e and k_d must be positive");
    }
  }
};

struct FieldSample {
  Vec2 value{};   ///< pd(p), not normalized
  Vec2 normal{};  ///< n(p)
  double error{0.0};
  bool degenerate{false};
};

template <PlanarCurve C>
double field_epsilon(const C& curve) {
  return kFieldEpsilonScale * gradient_scale_of(curve);
}

/// pd(p) = (dir E) n - k_e e n. Flags the sample degenerate when |pd| falls
/// under field_epsilon; a degenerate value must not be normalized.
template <PlanarCurve C>
FieldSample field(const C& curve, Vec2 p, const Gains& gains, Direction direction) {
  FieldSample out;
  out.normal = curve.grad(p);
  out.error = curve.phi(p);
  out.value = sign_of(direction) * (kRotateCw * out.normal) - gains.k_e * out.error * out.normal;
  out.degenerate = !(out.value.norm() >= field_epsilon(curve));
  return out;
}

/// Time derivative of pd along a motion with ground velocity p_dot.
template <PlanarCurve C>
Vec2 field_rate(const C& curve, Vec2 p, Vec2 p_dot, const FieldSample& f, const Gains& gains,
                Direction direction) {
  const Mat2 m = sign_of(direction) * kRotateCw - gains.k_e * f.error * Mat2::identity();
  return m * (curve.hessian(p) * p_dot) - gains.k_e * f.normal.dot(p_dot) * f.normal;
}

namespace detail {
inline double course_rate_from(const FieldSample& f, Vec2 field_dot) {
  return f.value.cross(field_dot) / f.value.squared_norm();
}
}  // namespace detail

/// Course rate chi_d' that keeps p^ = pd^ invariant. Depends on p and p_dot only.
/// Throws DegenerateFieldError at critical points and ZeroSpeedError when
/// |p_dot| < kSpeedEpsilon.
template <PlanarCurve C>
double desired_course_rate(const C& curve, Vec2 p, Vec2 p_dot, const Gains& gains,
                           Direction direction) {
  if (p_dot.norm() < kSpeedEpsilon) throw ZeroSpeedError("ground speed too small for course rate");
  const FieldSample f = field(curve, p, gains, direction);
  if (f.degenerate) throw DegenerateFieldError("guidance field vanishes at query point");
  return detail::course_rate_from(f, field_rate(curve, p, p_dot, f, gains, direction));
}

/// Angle between ground velocity and body axis, beta = acos(p^ . m(psi)) in [0, pi].
inline double sideslip(Vec2 p_dot, double yaw) {
  const double speed = p_dot.norm();
  if (speed < kSpeedEpsilon) throw ZeroSpeedError("ground speed too small for sideslip");
  return std::acos(std::clamp(p_dot.dot(heading(yaw)) / speed, -1.0, 1.0));
}

// ---------------------------------------------------------------------------
// Coordinated turn: psi' = g tan(bank) cos(theta) / s.

inline void check_turn_args(double s, double theta) {
  if (!(s > 0.0)) throw std::invalid_argument("airspeed must be positive");
  if (!(std::abs(theta) < std::numbers::pi / 2.0)) {
    throw std::invalid_argument("pitch must lie in (-pi/2, pi/2)");
  }
}

inline double yaw_rate_from_bank(double bank, double s, double theta = 0.0) {
  check_turn_args(s, theta);
  if (!(std::abs(bank) < std::numbers::pi / 2.0)) {
    throw std::invalid_argument("bank angle must lie in (-pi/2, pi/2)");
  }
  return kGravity * std::tan(bank) * std::cos(theta) / s;
}

inline double bank_from_yaw_rate(double yaw_rate, double s, double theta = 0.0) {
  check_turn_args(s, theta);
  return std::atan(yaw_rate * s / (kGravity * std::cos(theta)));
}

// ---------------------------------------------------------------------------
// Control law.

struct ControlOptions {
  double theta{0.0};                ///< pitch used by the bank conversion
  std::optional<double> bank_limit; ///< when set, |u| is clamped to its yaw-rate equivalent
};

struct GuidanceCommand {
  double yaw_rate{0.0};       ///< u after saturation
  double yaw_rate_raw{0.0};   ///< u before saturation
  double desired_course_rate{0.0};
  Vec2 field{};
  double alignment_error{0.0};  ///< p^ x pd^, in [-1, 1]
  double level_error{0.0};
  double sideslip{0.0};
  double bank_cmd{0.0};      ///< coordinated-turn bank for yaw_rate
  double bank_cmd_raw{0.0};  ///< coordinated-turn bank for yaw_rate_raw
  bool clamped{false};
  bool sideslip_singular{false};
};

template <PlanarCurve C>
GuidanceCommand control(const C& curve, const VehicleState& state, Vec2 p_dot, double s,
                        const Gains& gains, Direction direction,
                        const ControlOptions& options = {}) {
  if (!(s > 0.0)) throw std::invalid_argument("airspeed must be positive");
  const double speed = p_dot.norm();
  if (speed < kSpeedEpsilon) throw ZeroSpeedError("ground speed too small for control");

  const FieldSample f = field(curve, state.p, gains, direction);
  if (f.degenerate) throw DegenerateFieldError("guidance field vanishes at vehicle position");

  GuidanceCommand cmd;
  cmd.field = f.value;
  cmd.level_error = f.error;
  cmd.desired_course_rate =
      detail::course_rate_from(f, field_rate(curve, state.p, p_dot, f, gains, direction));

  const Vec2 v_hat = p_dot / speed;
  const Vec2 f_hat = f.value.normalized();
  cmd.alignment_error = std::clamp(v_hat.cross(f_hat), -1.0, 1.0);

  double cos_beta = std::clamp(v_hat.dot(heading(state.yaw)), -1.0, 1.0);
  cmd.sideslip = std::acos(cos_beta);
  if (std::abs(cos_beta) < kCosBetaEpsilon) {
    cmd.sideslip_singular = true;
    cos_beta = std::copysign(kCosBetaEpsilon, cos_beta);
  }

  cmd.yaw_rate_raw = speed / (s * cos_beta) *
                     (cmd.desired_course_rate + gains.k_d * cmd.alignment_error);
  cmd.yaw_rate = cmd.yaw_rate_raw;
  if (options.bank_limit) {
    const double limit = yaw_rate_from_bank(*options.bank_limit, s, options.theta);
    cmd.yaw_rate = std::clamp(cmd.yaw_rate_raw, -limit, limit);
  }
  // A singular sideslip always reports as saturated.
  cmd.clamped = cmd.sideslip_singular || cmd.yaw_rate != cmd.yaw_rate_raw;
  cmd.bank_cmd = bank_from_yaw_rate(cmd.yaw_rate, s, options.theta);
  cmd.bank_cmd_raw = bank_from_yaw_rate(cmd.yaw_rate_raw, s, options.theta);
  return cmd;
}

// ---------------------------------------------------------------------------
// Offline tuning check against a bank limit.

struct TuneOptions {
  double band{0.0};                 ///< outer level bound: sample phi <= band
  std::optional<double> inner_band; ///< inner bound: sample phi >= -inner_band (default band)
  double airspeed{0.0};
  double wind_max{0.0};
  double theta{0.0};
  double bank_limit{deg_to_rad(45.0)};
  std::size_t samples{20000};
  Box box{};
  std::uint64_t seed{1};
  Direction direction{Direction::kForward};
};

struct TuningReport {
  double max_required_bank{0.0};  ///< aligned flight, worst-case ground speed
  Vec2 worst_point{};
  double worst_ground_speed{0.0};
  /// Same bound with the alignment term at its extreme |p^ x pd^| = 1.
  double max_required_bank_conservative{0.0};
  std::size_t samples_used{0};
  std::size_t degenerate_skipped{0};
  bool satisfied{false};
};

/// Samples the level band -inner_band <= phi <= band and bounds the bank the
/// law would need while aligned with the field (the steady-state demand),
/// using the worst ground speed s + w_max and the worst sideslip
/// cos beta >= sqrt(1 - (w_max / s)^2). satisfied iff that bound stays within
/// bank_limit. The conservative bound with |p^ x pd^| = 1 is reported as well.
template <PlanarCurve C>
TuningReport tune_check(const C& curve, const Gains& gains, const TuneOptions& opt) {
  gains.validate();
  const double inner = opt.inner_band.value_or(opt.band);
  if (!(opt.band >= 0.0) || !(inner >= 0.0)) throw std::invalid_argument("band must be non-negative");
  if constexpr (requires { curve.c_star(); }) {
    if (opt.band > curve.c_star() || inner > curve.c_star()) {
      throw std::invalid_argument("tuning band exceeds the curve's regularity bound c*");
    }
  }
  if (!(opt.airspeed > 0.0)) throw std::invalid_argument("airspeed must be positive");
  if (!(opt.wind_max >= 0.0) || !(opt.wind_max < opt.airspeed)) {
    throw std::invalid_argument("wind bound must satisfy 0 <= w_max < airspeed");
  }
  if (opt.samples == 0) throw std::invalid_argument("tuning check needs at least one sample");
  if (!opt.box.valid()) throw std::invalid_argument("sampling box must have positive extent");

  const double speed = opt.airspeed + opt.wind_max;
  const double ratio = opt.wind_max / opt.airspeed;
  const double cos_beta_min = std::sqrt(1.0 - ratio * ratio);
  const double gain = speed / (opt.airspeed * cos_beta_min);

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> ux(opt.box.min.x, opt.box.max.x);
  std::uniform_real_distribution<double> uy(opt.box.min.y, opt.box.max.y);

  TuningReport report;
  report.worst_ground_speed = speed;
  double worst_rate = 0.0;
  double worst_rate_conservative = 0.0;
  const std::size_t max_draws = opt.samples * 1000;
  std::size_t draws = 0;
  while (report.samples_used < opt.samples && draws < max_draws) {
    ++draws;
    const double x = ux(rng);
    const Vec2 p{x, uy(rng)};
    const double e = curve.phi(p);
    if (e > opt.band || e < -inner) continue;
    const FieldSample f = field(curve, p, gains, opt.direction);
    if (f.degenerate) {
      ++report.degenerate_skipped;
      continue;
    }
    ++report.samples_used;
    const Vec2 p_dot = speed * f.value.normalized();
    const double chi_rate = std::abs(
        detail::course_rate_from(f, field_rate(curve, p, p_dot, f, gains, opt.direction)));
    const double u = gain * chi_rate;
    if (u > worst_rate) {
      worst_rate = u;
      report.worst_point = p;
    }
    worst_rate_conservative = std::max(worst_rate_conservative, gain * (chi_rate + gains.k_d));
  }
  if (report.samples_used == 0) throw std::invalid_argument("tuning band contains no sample points");

  report.max_required_bank = bank_from_yaw_rate(worst_rate, opt.airspeed, opt.theta);
  report.max_required_bank_conservative =
      bank_from_yaw_rate(worst_rate_conservative, opt.airspeed, opt.theta);
  report.satisfied = report.max_required_bank <= opt.bank_limit;
  return report;
}

}  // namespace guidance
}  // namespace gvf

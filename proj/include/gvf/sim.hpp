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
 * @file sim.hpp
 * @brief Closed-loop kinematic simulation of the unicycle-with-wind model.
 *
 * The plant integrates p' = s m(psi) + w(t), psi' = u with classical RK4 at a
 * fixed step dt. The guidance law runs at its own rate and its yaw-rate
 * command is held constant between updates. Roll dynamics are not modelled;
 * the bank command is logged as the coordinated-turn equivalent of u.
 */

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gvf/curve.hpp"
#include "gvf/errors.hpp"
#include "gvf/guidance.hpp"
#include "gvf/vec2.hpp"

namespace gvf::sim {

using guidance::Direction;
using guidance::Gains;

class WindModel {
 public:
  enum class Kind { kConstant, kSinusoidalGust };

  WindModel() = default;

  static WindModel constant(Vec2 w) {
    WindModel m;
    m.base_ = w;
    return m;
  }

  /// base + amplitude * sin(2 pi t / period) along `gust_direction` (unit
  /// vector; defaults to the base direction, or +x for zero base wind).
  static WindModel sinusoidal_gust(Vec2 base, double amplitude, double period,
                                   std::optional<Vec2> gust_direction = std::nullopt) {
    if (!(amplitude >= 0.0)) throw std::invalid_argument("gust amplitude must be non-negative");
    if (!(period > 0.0)) throw std::invalid_argument("gust period must be positive");
    WindModel m;
    m.kind_ = Kind::kSinusoidalGust;
    m.base_ = base;
    m.amplitude_ = amplitude;
    m.period_ = period;
    if (gust_direction) {
      if (!(gust_direction->norm() > 0.0)) throw std::invalid_argument("gust direction must be nonzero");
      m.gust_direction_ = gust_direction->normalized();
    } else if (base.norm() > 0.0) {
      m.gust_direction_ = base.normalized();
    }
    return m;
  }

  Vec2 at(double t) const {
    if (kind_ == Kind::kConstant) return base_;
    return base_ + amplitude_ * std::sin(2.0 * std::numbers::pi * t / period_) * gust_direction_;
  }

  /// Upper bound on |w(t)| over all t.
  double sup_norm() const { return base_.norm() + amplitude_; }

  Kind kind() const { return kind_; }
  Vec2 base() const { return base_; }
  double amplitude() const { return amplitude_; }
  double period() const { return period_; }
  Vec2 gust_direction() const { return gust_direction_; }

 private:
  Kind kind_{Kind::kConstant};
  Vec2 base_{};
  double amplitude_{0.0};
  double period_{1.0};
  Vec2 gust_direction_{1.0, 0.0};
};

/// p' = s m(psi) + w(t).
inline Vec2 ground_velocity(const VehicleState& state, double s, const WindModel& wind, double t) {
  return s * heading(state.yaw) + wind.at(t);
}

/// One RK4 step of the plant with u held over [t, t + dt]. Yaw is rewrapped.
inline VehicleState step(const VehicleState& state, double u, double s, const WindModel& wind,
                         double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!state.p.is_finite() || !std::isfinite(state.yaw) || !std::isfinite(u) ||
      !std::isfinite(s) || !std::isfinite(t)) {
    throw std::invalid_argument("non-finite simulation input");
  }
  auto velocity = [&](double yaw, double time) { return s * heading(yaw) + wind.at(time); };

  const double half = 0.5 * dt;
  const Vec2 k1 = velocity(state.yaw, t);
  const Vec2 k2 = velocity(state.yaw + half * u, t + half);
  const Vec2 k3 = velocity(state.yaw + half * u, t + half);
  const Vec2 k4 = velocity(state.yaw + dt * u, t + dt);

  VehicleState next;
  next.p = state.p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  next.yaw = wrap_angle(state.yaw + dt * u);
  return next;
}

struct SimConfig {
  ImplicitCurve curve;
  Direction direction{Direction::kForward};
  Gains gains{};
  double airspeed{11.0};
  WindModel wind{};
  VehicleState initial{};
  double theta{0.0};
  std::optional<double> bank_limit{};
  double dt{1.0 / 600.0};
  double duration{120.0};
  double controller_rate_hz{60.0};
  /// Reject configurations where sup |w| >= airspeed.
  bool assert_wind_bound{true};

  void validate() const {
    gains.validate();
    if (!(airspeed > 0.0)) throw std::invalid_argument("airspeed must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("integration step dt must be positive");
    if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
    if (!(controller_rate_hz > 0.0)) throw std::invalid_argument("controller rate must be positive");
    if (!(std::abs(theta) < std::numbers::pi / 2.0)) throw std::invalid_argument("pitch must lie in (-90, 90) deg");
    if (bank_limit && !(*bank_limit > 0.0 && *bank_limit < std::numbers::pi / 2.0)) {
      throw std::invalid_argument("bank limit must lie in (0, 90) deg");
    }
    if (!initial.p.is_finite() || !std::isfinite(initial.yaw)) {
      throw std::invalid_argument("initial state must be finite");
    }
    if (assert_wind_bound && !(wind.sup_norm() < airspeed)) {
      throw std::invalid_argument(
          "airspeed-exceeds-wind assumption violated: sup|w| = " + std::to_string(wind.sup_norm()) +
          " m/s is not below airspeed " + std::to_string(airspeed) + " m/s");
    }
  }
};

struct TrajectorySample {
  double t{0.0};
  Vec2 p{};
  double yaw{0.0};
  Vec2 velocity{};
  double error{0.0};
  double v1{0.0};
  double v2{0.0};
  double u_raw{0.0};      ///< applied (held) command before saturation
  double u_clamped{0.0};  ///< applied (held) command
  double chi_dot_d{0.0};
  double beta{0.0};
  double bank_cmd{0.0};      ///< coordinated-turn bank of u_clamped
  double bank_cmd_raw{0.0};  ///< coordinated-turn bank of u_raw
  double align_err{0.0};
  bool controller_update{false};
  bool clamped{false};
};

struct LogMeta {
  double dt{0.0};
  double k_d{0.0};
  double airspeed{0.0};
  double theta{0.0};
  std::optional<double> bank_limit{};
  double controller_rate_hz{0.0};
};

struct TrajectoryLog {
  LogMeta meta{};
  std::vector<TrajectorySample> samples;
};

enum class RunStatus { kCompleted, kSingularity };

struct RunResult {
  TrajectoryLog log;
  RunStatus status{RunStatus::kCompleted};
  std::string reason;

  bool completed() const { return status == RunStatus::kCompleted; }
};

/// Simulates the full horizon. The guidance law is re-evaluated at
/// controller_rate_hz (first at t = 0) and held in between. Each integration
/// step is logged; diagnostics (e, V2, chi_d', beta, alignment) are evaluated
/// at the logged state while u columns show the command being applied.
/// Reaching a critical point of the field ends the run with a partial log.
inline RunResult run(const SimConfig& config) {
  config.validate();

  RunResult result;
  TrajectoryLog& log = result.log;
  log.meta = {config.dt, config.gains.k_d, config.airspeed, config.theta, config.bank_limit,
              config.controller_rate_hz};

  const auto steps = static_cast<std::size_t>(std::llround(config.duration / config.dt));
  log.samples.reserve(steps + 1);

  const guidance::ControlOptions options{config.theta, config.bank_limit};
  const double update_period = 1.0 / config.controller_rate_hz;
  const double slack = 1e-9 * config.dt;

  VehicleState state = config.initial;
  state.yaw = wrap_angle(state.yaw);
  std::size_t updates = 0;
  double held_raw = 0.0;
  double held = 0.0;
  bool held_clamped = false;

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    const Vec2 v = ground_velocity(state, config.airspeed, config.wind, t);

    guidance::GuidanceCommand cmd;
    try {
      cmd = guidance::control(config.curve, state, v, config.airspeed, config.gains,
                              config.direction, options);
    } catch (const GuidanceError& err) {
      result.status = RunStatus::kSingularity;
      result.reason = std::string(err.what()) + " at t=" + std::to_string(t);
      return result;
    }

    TrajectorySample sample;
    sample.t = t;
    if (t + slack >= static_cast<double>(updates) * update_period) {
      held_raw = cmd.yaw_rate_raw;
      held = cmd.yaw_rate;
      held_clamped = cmd.clamped;
      sample.controller_update = true;
      while (static_cast<double>(updates) * update_period <= t + slack) ++updates;
    }

    const Vec2 f_hat = cmd.field.normalized();
    sample.p = state.p;
    sample.yaw = state.yaw;
    sample.velocity = v;
    sample.error = cmd.level_error;
    sample.v1 = 0.5 * cmd.level_error * cmd.level_error;
    sample.v2 = 1.0 - v.normalized().dot(f_hat);
    sample.u_raw = held_raw;
    sample.u_clamped = held;
    sample.chi_dot_d = cmd.desired_course_rate;
    sample.beta = cmd.sideslip;
    sample.bank_cmd = guidance::bank_from_yaw_rate(held, config.airspeed, config.theta);
    sample.bank_cmd_raw = guidance::bank_from_yaw_rate(held_raw, config.airspeed, config.theta);
    sample.align_err = cmd.alignment_error;
    sample.clamped = held_clamped;
    log.samples.push_back(sample);

    if (k == steps) break;
    state = step(state, held, config.airspeed, config.wind, t, config.dt);
  }
  return result;
}

struct FieldNode {
  Vec2 p{};
  Vec2 direction{};  ///< unit field direction; zero when degenerate
  bool degenerate{false};
};

/// Regular grid of normalized field directions; node (i, j) at index j * nx + i.
struct FieldGrid {
  std::size_t nx{0};
  std::size_t ny{0};
  std::vector<FieldNode> nodes;

  const FieldNode& at(std::size_t i, std::size_t j) const { return nodes.at(j * nx + i); }
};

template <PlanarCurve C>
FieldGrid sample_field_grid(const C& curve, const Box& box, std::size_t nx, std::size_t ny,
                            const Gains& gains, Direction direction) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("field grid needs at least 2 nodes per axis");
  if (!box.valid()) throw std::invalid_argument("field grid box must have positive extent");
  FieldGrid grid{nx, ny, {}};
  grid.nodes.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    const double y = box.min.y + box.height() * static_cast<double>(j) / static_cast<double>(ny - 1);
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = box.min.x + box.width() * static_cast<double>(i) / static_cast<double>(nx - 1);
      const Vec2 p{x, y};
      const guidance::FieldSample f = guidance::field(curve, p, gains, direction);
      FieldNode node{p, {}, f.degenerate};
      if (!f.degenerate) node.direction = f.value.normalized();
      grid.nodes.push_back(node);
    }
  }
  return grid;
}

}  // namespace gvf::sim

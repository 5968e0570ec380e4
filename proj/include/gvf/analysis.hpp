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

// Lyapunov and convergence diagnostics over trajectory logs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gvf/sim.hpp"
#include "gvf/vec2.hpp"

namespace gvf::analysis {

/// V1 = e^2 / 2.
inline double lyapunov_v1(double e) { return 0.5 * e * e; }

inline void require_unit(Vec2 v, const char* what) {
  if (!(std::abs(v.norm() - 1.0) <= 1e-9)) {
    throw std::invalid_argument(std::string(what) + " must be a unit vector");
  }
}

/// V2 = 1 - p^ . pd^, in [0, 2].
inline double lyapunov_v2(Vec2 p_hat, Vec2 p_d_hat) {
  require_unit(p_hat, "p_hat");
  require_unit(p_d_hat, "p_d_hat");
  return std::clamp(1.0 - p_hat.dot(p_d_hat), 0.0, 2.0);
}

/// dV2/dt under the exact control law: -k_d (p^ x pd^)^2.
inline double v2_rate_closed_form(Vec2 p_hat, Vec2 p_d_hat, double k_d) {
  require_unit(p_hat, "p_hat");
  require_unit(p_d_hat, "p_d_hat");
  const double s = p_hat.cross(p_d_hat);
  return -k_d * s * s;
}

struct AnalysisOptions {
  /// Allowed V2 growth rate between consecutive unclamped samples.
  double v2_increase_rate_tolerance{1e-4};
  /// Bank limit for exceedance counting; falls back to the log's limit, then 45 deg.
  std::optional<double> bank_limit{};
};

struct ConvergenceReport {
  double tolerance{0.0};
  bool settled{false};
  double settle_time{std::numeric_limits<double>::quiet_NaN()};
  double steady_state_error{std::numeric_limits<double>::quiet_NaN()};
  double final_error{0.0};
  double max_bank{0.0};          ///< max |raw bank|
  double max_applied_bank{0.0};  ///< max |bank after saturation|
  double bank_limit{0.0};
  std::size_t bank_exceedance_count{0};
  std::size_t v2_violations{0};
  double max_v2_increase_rate{-std::numeric_limits<double>::infinity()};
  /// Central-difference dV2/dt vs closed form; includes the command-hold error.
  double max_v2_rate_mismatch{0.0};
  std::size_t v2_rate_samples{0};
  /// One-sided dV2/dt at controller updates, where the applied command equals
  /// the control law, vs closed form.
  double max_v2_rate_mismatch_at_updates{0.0};
  std::size_t v2_rate_update_samples{0};
  double min_ground_speed{std::numeric_limits<double>::infinity()};
  std::size_t samples{0};
};

/// Numerical dV2/dt at sample i: central difference inside the log,
/// second-order one-sided differences at the two ends.
inline double v2_rate_numeric(const sim::TrajectoryLog& log, std::size_t i) {
  const auto& s = log.samples;
  const std::size_t n = s.size();
  if (n < 3) throw std::invalid_argument("need at least 3 samples for dV2/dt");
  if (i == 0) {
    const double h = s[1].t - s[0].t;
    return (-3.0 * s[0].v2 + 4.0 * s[1].v2 - s[2].v2) / (2.0 * h);
  }
  if (i == n - 1) {
    const double h = s[n - 1].t - s[n - 2].t;
    return (3.0 * s[n - 1].v2 - 4.0 * s[n - 2].v2 + s[n - 3].v2) / (2.0 * h);
  }
  return (s[i + 1].v2 - s[i - 1].v2) / (s[i + 1].t - s[i - 1].t);
}

inline ConvergenceReport analyze(const sim::TrajectoryLog& log, double tolerance,
                                 const AnalysisOptions& options = {}) {
  const auto& s = log.samples;
  if (s.size() < 3) throw std::invalid_argument("trajectory log must contain at least 3 samples");
  if (!(tolerance > 0.0)) throw std::invalid_argument("settle tolerance must be positive");

  ConvergenceReport r;
  r.tolerance = tolerance;
  r.samples = s.size();
  r.bank_limit = options.bank_limit.value_or(log.meta.bank_limit.value_or(deg_to_rad(45.0)));
  r.final_error = s.back().error;

  // Settling: first index after the last sample that violates the tolerance.
  std::size_t settle_index = 0;
  for (std::size_t i = s.size(); i-- > 0;) {
    if (!(std::abs(s[i].error) < tolerance)) {
      settle_index = i + 1;
      break;
    }
  }
  if (settle_index < s.size()) {
    r.settled = true;
    r.settle_time = s[settle_index].t;
    double worst = 0.0;
    for (std::size_t i = settle_index; i < s.size(); ++i) worst = std::max(worst, std::abs(s[i].error));
    r.steady_state_error = worst;
  }

  for (std::size_t i = 0; i < s.size(); ++i) {
    r.max_bank = std::max(r.max_bank, std::abs(s[i].bank_cmd_raw));
    r.max_applied_bank = std::max(r.max_applied_bank, std::abs(s[i].bank_cmd));
    if (std::abs(s[i].bank_cmd_raw) > r.bank_limit) ++r.bank_exceedance_count;
    r.min_ground_speed = std::min(r.min_ground_speed, s[i].velocity.norm());
  }

  // The command applied over [t_i, t_{i+1}] is the one recorded at sample i.
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i].clamped) continue;
    const double rate = (s[i + 1].v2 - s[i].v2) / (s[i + 1].t - s[i].t);
    r.max_v2_increase_rate = std::max(r.max_v2_increase_rate, rate);
    if (rate > options.v2_increase_rate_tolerance) ++r.v2_violations;
  }

  const double k_d = log.meta.k_d;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool unclamped_around = !s[i].clamped && (i == 0 || !s[i - 1].clamped) &&
                                  (i + 1 == s.size() || !s[i + 1].clamped);
    if (!unclamped_around) continue;
    const double closed = -k_d * s[i].align_err * s[i].align_err;
    r.max_v2_rate_mismatch = std::max(r.max_v2_rate_mismatch, std::abs(v2_rate_numeric(log, i) - closed));
    ++r.v2_rate_samples;
  }

  // dV2/dt jumps at every controller update, so the derivative there is taken
  // from the right, inside the hold segment that starts at the update.
  for (std::size_t i = 0; i + 2 < s.size(); ++i) {
    if (!s[i].controller_update || s[i].clamped) continue;
    if (s[i + 1].controller_update || s[i + 2].controller_update) continue;
    const double h = s[i + 1].t - s[i].t;
    const double forward = (-3.0 * s[i].v2 + 4.0 * s[i + 1].v2 - s[i + 2].v2) / (2.0 * h);
    const double closed = -k_d * s[i].align_err * s[i].align_err;
    r.max_v2_rate_mismatch_at_updates =
        std::max(r.max_v2_rate_mismatch_at_updates, std::abs(forward - closed));
    ++r.v2_rate_update_samples;
  }
  return r;
}

namespace detail {
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace detail

/// key=value lines, one per field. Angles in degrees.
inline std::string to_key_value(const ConvergenceReport& r) {
  using detail::fmt17;
  std::ostringstream os;
  os << "samples=" << r.samples << "\n"
     << "settle_tolerance=" << fmt17(r.tolerance) << "\n"
     << "settled=" << (r.settled ? "true" : "false") << "\n"
     << "settle_time_s=" << fmt17(r.settle_time) << "\n"
     << "steady_state_error=" << fmt17(r.steady_state_error) << "\n"
     << "final_error=" << fmt17(r.final_error) << "\n"
     << "max_bank_deg=" << fmt17(rad_to_deg(r.max_bank)) << "\n"
     << "max_applied_bank_deg=" << fmt17(rad_to_deg(r.max_applied_bank)) << "\n"
     << "bank_limit_deg=" << fmt17(rad_to_deg(r.bank_limit)) << "\n"
     << "bank_exceedance_count=" << r.bank_exceedance_count << "\n"
     << "v2_violations=" << r.v2_violations << "\n"
     << "max_v2_increase_rate=" << fmt17(r.max_v2_increase_rate) << "\n"
     << "max_v2_rate_mismatch=" << fmt17(r.max_v2_rate_mismatch) << "\n"
     << "v2_rate_samples=" << r.v2_rate_samples << "\n"
     << "max_v2_rate_mismatch_at_updates=" << fmt17(r.max_v2_rate_mismatch_at_updates) << "\n"
     << "v2_rate_update_samples=" << r.v2_rate_update_samples << "\n"
     << "min_ground_speed_mps=" << fmt17(r.min_ground_speed) << "\n";
  return os.str();
}

inline std::string csv_header() {
  return "scenario,samples,settled,settle_time_s,steady_state_error,final_error,max_bank_deg,"
         "bank_exceedance_count,v2_violations,max_v2_rate_mismatch,max_v2_rate_mismatch_at_updates,"
         "min_ground_speed_mps";
}

inline std::string csv_row(const std::string& scenario, const ConvergenceReport& r) {
  using detail::fmt17;
  std::ostringstream os;
  os << scenario << "," << r.samples << "," << (r.settled ? 1 : 0) << "," << fmt17(r.settle_time)
     << "," << fmt17(r.steady_state_error) << "," << fmt17(r.final_error) << ","
     << fmt17(rad_to_deg(r.max_bank)) << "," << r.bank_exceedance_count << "," << r.v2_violations
     << "," << fmt17(r.max_v2_rate_mismatch) << "," << fmt17(r.max_v2_rate_mismatch_at_updates)
     << "," << fmt17(r.min_ground_speed);
  return os.str();
}

}  // namespace gvf::analysis

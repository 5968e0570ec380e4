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
 * @file scenario.hpp
 * @brief Scenario files: flat YAML maps with units in the key names.
 *
 * Angles are given in degrees in files and converted to radians on load.
 * Unknown keys are rejected so typos do not silently fall back to defaults.
 *
 * Example:
 *
 *     name: paper_ellipse_wind
 *     curve: ellipse
 *     ellipse_a_m: 50
 *     ellipse_b_m: 75
 *     ellipse_alpha_deg: -15
 *     k_e: 0.4
 *     k_d: 1
 *     airspeed_mps: 11
 *     wind_x_mps: -5
 */

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gvf/curve.hpp"
#include "gvf/guidance.hpp"
#include "gvf/sim.hpp"

namespace gvf::cli {

/// File unreadable, not YAML, wrong types, missing or unknown keys.
class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed file whose values violate a model precondition.
class ConfigValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Typed access to a flat YAML map that remembers which keys were read.
class ConfigReader {
 public:
  explicit ConfigReader(YAML::Node root) : root_(std::move(root)) {
    if (!root_.IsMap()) throw ConfigParseError("scenario file must be a flat key: value map");
    for (const auto& kv : root_) {
      const auto key = kv.first.as<std::string>();
      if (!kv.second.IsScalar()) throw ConfigParseError("key '" + key + "' must hold a scalar value");
      keys_.insert(key);
    }
  }

  bool has(const std::string& key) const { return keys_.contains(key); }

  template <typename T>
  T get(const std::string& key) {
    if (!has(key)) throw ConfigParseError("missing required key '" + key + "'");
    return convert<T>(key);
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) {
    return has(key) ? convert<T>(key) : fallback;
  }

  template <typename T>
  std::optional<T> get_optional(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return convert<T>(key);
  }

  /// Throws when any key present in the file was never read.
  void reject_unused() const {
    for (const auto& key : keys_) {
      if (!used_.contains(key)) throw ConfigParseError("unknown key '" + key + "'");
    }
  }

 private:
  template <typename T>
  T convert(const std::string& key) {
    used_.insert(key);
    try {
      return root_[key].as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigParseError("key '" + key + "' has a value of the wrong type");
    }
  }

  YAML::Node root_;
  std::set<std::string> keys_;
  std::set<std::string> used_;
};

/// A curve resolved from a scenario, with the point used to center default
/// sampling boxes and its default settle tolerance.
struct CurveSpec {
  ImplicitCurve curve;
  Vec2 anchor{};
  double default_settle_tolerance{1.0};
};

using CurveFactory = std::function<CurveSpec(ConfigReader&)>;

/// Maps `curve:` names to factories. The built-in line, circle and ellipse are
/// pre-registered; user curves register three callables via a factory.
class CurveRegistry {
 public:
  CurveRegistry() {
    add("line", [](ConfigReader& r) {
      const Vec2 point{r.get_or("line_point_x_m", 0.0), r.get_or("line_point_y_m", 0.0)};
      const double angle = deg_to_rad(r.get_or("line_angle_deg", 0.0));
      auto curve = make_line(point, angle);
      if (auto c = r.get_optional<double>("c_star")) {
        curve = ImplicitCurve::from("line", LineCurve(point, angle), *c);
      }
      return CurveSpec{curve, point, 1.0};
    });
    add("circle", [](ConfigReader& r) {
      const Vec2 center{r.get_or("circle_center_x_m", 0.0), r.get_or("circle_center_y_m", 0.0)};
      const double radius = r.get<double>("circle_radius_m");
      if (!(radius > 0.0)) throw ConfigValidationError("circle_radius_m must be positive");
      auto c_star = r.get_optional<double>("c_star");
      return CurveSpec{c_star ? make_circle(center, radius, *c_star) : make_circle(center, radius),
                       center, 1.0};
    });
    add("ellipse", [](ConfigReader& r) {
      EllipseParams p;
      p.center = {r.get_or("ellipse_center_x_m", 0.0), r.get_or("ellipse_center_y_m", 0.0)};
      p.a = r.get<double>("ellipse_a_m");
      p.b = r.get<double>("ellipse_b_m");
      p.alpha = deg_to_rad(r.get_or("ellipse_alpha_deg", 0.0));
      if (!(p.a > 0.0) || !(p.b > 0.0)) {
        throw ConfigValidationError("ellipse semi-axes must be positive");
      }
      return CurveSpec{make_ellipse(p, r.get_or("c_star", 6.0)), p.center, 0.05};
    });
  }

  void add(const std::string& name, CurveFactory factory) { factories_[name] = std::move(factory); }

  CurveSpec build(const std::string& name, ConfigReader& reader) const {
    const auto it = factories_.find(name);
    if (it == factories_.end()) throw ConfigParseError("unknown curve '" + name + "'");
    try {
      return it->second(reader);
    } catch (const std::invalid_argument& err) {
      throw ConfigValidationError(err.what());
    }
  }

 private:
  std::map<std::string, CurveFactory> factories_;
};

struct ValidationSettings {
  double box_size{400.0};
  std::size_t probes{1000};
  double step{1e-5};
  std::size_t regularity_samples{2000};
  double exclusion_radius{1.0};
  std::uint64_t seed{7};
};

struct TuneSettings {
  std::optional<double> band;        ///< defaults to the curve's c*
  std::optional<double> inner_band;  ///< defaults to band
  double wind_max{0.0};
  double box_size{600.0};
  std::size_t samples{20000};
  std::uint64_t seed{11};
};

struct FieldSettings {
  std::optional<Box> box;  ///< defaults to a 400 m box around the anchor
  std::size_t nx{41};
  std::size_t ny{41};
};

struct Scenario {
  std::string name;
  sim::SimConfig sim;
  Vec2 anchor{};
  double settle_tolerance{1.0};
  ValidationSettings validation{};
  TuneSettings tune{};
  FieldSettings field{};
};

inline Scenario parse_scenario(const YAML::Node& root, const CurveRegistry& registry) {
  ConfigReader r(root);

  const auto name = r.get<std::string>("name");
  if (name.empty() || name.find_first_of("/\\") != std::string::npos) {
    throw ConfigValidationError("scenario name must be non-empty and contain no path separators");
  }
  auto spec = registry.build(r.get<std::string>("curve"), r);

  sim::SimConfig cfg{spec.curve};
  const int direction = r.get_or("direction", 1);
  if (direction != 1 && direction != -1) throw ConfigValidationError("direction must be 1 or -1");
  cfg.direction = direction > 0 ? guidance::Direction::kForward : guidance::Direction::kReverse;
  cfg.gains = {r.get<double>("k_e"), r.get<double>("k_d")};
  cfg.airspeed = r.get<double>("airspeed_mps");

  const Vec2 base_wind{r.get_or("wind_x_mps", 0.0), r.get_or("wind_y_mps", 0.0)};
  const auto wind_kind = r.get_or<std::string>("wind_kind", "constant");
  try {
    if (wind_kind == "constant") {
      cfg.wind = sim::WindModel::constant(base_wind);
    } else if (wind_kind == "sinusoidal_gust") {
      std::optional<Vec2> dir;
      if (auto deg = r.get_optional<double>("gust_direction_deg")) dir = heading(deg_to_rad(*deg));
      cfg.wind = sim::WindModel::sinusoidal_gust(base_wind, r.get<double>("gust_amplitude_mps"),
                                                 r.get<double>("gust_period_s"), dir);
    } else {
      throw ConfigParseError("wind_kind must be 'constant' or 'sinusoidal_gust'");
    }
  } catch (const std::invalid_argument& err) {
    throw ConfigValidationError(err.what());
  }

  cfg.initial = {{r.get<double>("initial_x_m"), r.get<double>("initial_y_m")},
                 deg_to_rad(r.get<double>("initial_yaw_deg"))};
  cfg.theta = deg_to_rad(r.get_or("pitch_deg", 0.0));
  if (const auto limit = r.get_or<std::string>("bank_limit_deg", "45"); limit != "none") {
    try {
      cfg.bank_limit = deg_to_rad(std::stod(limit));
    } catch (const std::exception&) {
      throw ConfigParseError("bank_limit_deg must be a number or 'none'");
    }
  }
  cfg.dt = 1.0 / r.get_or("integration_rate_hz", 600.0);
  cfg.controller_rate_hz = r.get_or("controller_rate_hz", 60.0);
  cfg.duration = r.get_or("duration_s", 120.0);
  cfg.assert_wind_bound = r.get_or("assert_wind_bound", true);

  Scenario s{name, cfg, spec.anchor, r.get_or("settle_tolerance", spec.default_settle_tolerance)};

  auto& v = s.validation;
  v.box_size = r.get_or("validate_box_size_m", v.box_size);
  v.probes = r.get_or("validate_probes", v.probes);
  v.step = r.get_or("validate_step_m", v.step);
  v.regularity_samples = r.get_or("regularity_samples", v.regularity_samples);
  v.exclusion_radius = r.get_or("regularity_exclusion_radius_m", v.exclusion_radius);

  auto& t = s.tune;
  t.band = r.get_optional<double>("tune_band");
  t.inner_band = r.get_optional<double>("tune_band_inner");
  t.wind_max = r.get_or("tune_wind_max_mps", t.wind_max);
  t.box_size = r.get_or("tune_box_size_m", t.box_size);
  t.samples = r.get_or("tune_samples", t.samples);

  auto& f = s.field;
  if (r.has("field_xmin_m") || r.has("field_xmax_m") || r.has("field_ymin_m") || r.has("field_ymax_m")) {
    f.box = Box{{r.get<double>("field_xmin_m"), r.get<double>("field_ymin_m")},
                {r.get<double>("field_xmax_m"), r.get<double>("field_ymax_m")}};
  }
  f.nx = f.ny = r.get_or("field_resolution", f.nx);

  r.reject_unused();

  try {
    s.sim.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigValidationError(err.what());
  }
  if (!(s.settle_tolerance > 0.0)) throw ConfigValidationError("settle_tolerance must be positive");
  if (!(v.box_size > 0.0) || v.probes == 0 || !(v.step > 0.0) || v.regularity_samples == 0) {
    throw ConfigValidationError("validation settings must be positive");
  }
  if (f.box && !f.box->valid()) throw ConfigValidationError("field box must have positive extent");
  if (f.nx < 2) throw ConfigValidationError("field_resolution must be at least 2");
  return s;
}

inline Scenario load_scenario(const std::filesystem::path& path, const CurveRegistry& registry) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw ConfigParseError("cannot read scenario file " + path.string());
  } catch (const YAML::Exception& err) {
    throw ConfigParseError("malformed scenario file " + path.string() + ": " + err.what());
  }
  return parse_scenario(root, registry);
}

}  // namespace gvf::cli

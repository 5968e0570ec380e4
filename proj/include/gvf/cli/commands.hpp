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
 * @file commands.hpp
 * @brief The run / field / validate / tune subcommands.
 *
 * Each command returns a process exit code (see ExitCode). Scenario files are
 * parsed and validated before anything is written, so a rejected config never
 * leaves partial output behind.
 */

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "gvf/analysis.hpp"
#include "gvf/cli/scenario.hpp"
#include "gvf/curve.hpp"
#include "gvf/guidance.hpp"
#include "gvf/sim.hpp"

namespace gvf::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigParse = 2,
  kConfigInvalid = 3,
  kSingularity = 4,
  kCheckFailed = 5,
  kIoError = 6,
};

inline constexpr const char* kOutputRootEnv = "GVF_OUTPUT_ROOT";
inline constexpr const char* kTrajectoryHeader =
    "t,px,py,psi,vx,vy,e,V1,V2,u_raw,u_clamped,chi_dot_d,beta,phi_cmd,align_err";
inline constexpr const char* kFieldHeader = "x,y,ux,uy,degenerate";
inline constexpr double kDerivativeTolerance = 1e-6;

/// Output root: explicit flag, else $GVF_OUTPUT_ROOT, else ./gvf_out.
inline std::filesystem::path resolve_output_root(const std::optional<std::filesystem::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kOutputRootEnv); env != nullptr && *env != '\0') return env;
  return "gvf_out";
}

struct CommandIo {
  std::ostream& out;
  std::ostream& err;
  const CurveRegistry& registry;
};

namespace detail {

using analysis::detail::fmt17;

/// Loads a scenario, translating failures into exit codes.
inline std::optional<Scenario> load(const CommandIo& io, const std::filesystem::path& path,
                                    int& code) {
  try {
    return load_scenario(path, io.registry);
  } catch (const ConfigParseError& err) {
    io.err << "config parse error: " << err.what() << "\n";
    code = kConfigParse;
  } catch (const ConfigValidationError& err) {
    io.err << "config validation error: " << err.what() << "\n";
    code = kConfigInvalid;
  }
  return std::nullopt;
}

inline std::string trajectory_csv(const sim::TrajectoryLog& log) {
  std::string out = std::string(kTrajectoryHeader) + "\n";
  out.reserve(log.samples.size() * 15 * 24);
  for (const auto& s : log.samples) {
    const double cols[] = {s.t,  s.p.x,  s.p.y,     s.yaw,       s.velocity.x,
                           s.velocity.y, s.error, s.v1,   s.v2,        s.u_raw,
                           s.u_clamped,  s.chi_dot_d, s.beta, s.bank_cmd, s.align_err};
    bool first = true;
    for (double c : cols) {
      if (!first) out += ',';
      out += fmt17(c);
      first = false;
    }
    out += '\n';
  }
  return out;
}

inline std::string field_csv(const sim::FieldGrid& grid) {
  std::string out = std::string(kFieldHeader) + "\n";
  for (const auto& n : grid.nodes) {
    out += fmt17(n.p.x) + "," + fmt17(n.p.y) + "," + fmt17(n.direction.x) + "," +
           fmt17(n.direction.y) + "," + (n.degenerate ? "1" : "0") + "\n";
  }
  return out;
}

inline bool write_file(const std::filesystem::path& path, const std::string& content,
                       std::ostream& err) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
  f.close();
  if (!f) {
    err << "cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

struct RunOutput {
  std::string trajectory;
  std::string report;
  std::string report_csv;
  bool completed{false};
  std::string reason;
};

inline RunOutput simulate(const Scenario& scenario) {
  RunOutput out;
  const sim::RunResult result = sim::run(scenario.sim);
  out.completed = result.completed();
  out.reason = result.reason;
  out.trajectory = trajectory_csv(result.log);

  std::ostringstream report;
  report << "scenario=" << scenario.name << "\n"
         << "status=" << (out.completed ? "completed" : "singularity") << "\n";
  if (!out.completed) report << "reason=" << out.reason << "\n";
  if (result.log.samples.size() >= 3) {
    const auto conv = analysis::analyze(result.log, scenario.settle_tolerance);
    report << analysis::to_key_value(conv);
    out.report_csv = analysis::csv_header() + "\n" + analysis::csv_row(scenario.name, conv) + "\n";
  }
  out.report = report.str();
  return out;
}

inline Box default_box(const Scenario& s, double side) { return Box::centered(s.anchor, side); }

}  // namespace detail

/// Simulates each scenario and writes <out>/<name>/{trajectory.csv,report.txt,report.csv}.
/// All configs are loaded and validated first; scenarios then run concurrently.
inline int cmd_run(const CommandIo& io, std::span<const std::filesystem::path> configs,
                   const std::filesystem::path& out_dir) {
  if (configs.empty()) {
    io.err << "run: at least one --config is required\n";
    return kUsage;
  }
  std::vector<Scenario> scenarios;
  for (const auto& path : configs) {
    int code = kOk;
    auto s = detail::load(io, path, code);
    if (!s) return code;
    scenarios.push_back(std::move(*s));
  }

  std::vector<std::future<detail::RunOutput>> jobs;
  jobs.reserve(scenarios.size());
  for (const auto& s : scenarios) {
    jobs.push_back(std::async(std::launch::async, [&s] { return detail::simulate(s); }));
  }

  int code = kOk;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const detail::RunOutput out = jobs[i].get();
    const auto dir = out_dir / scenarios[i].name;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      io.err << "cannot create " << dir.string() << ": " << ec.message() << "\n";
      return kIoError;
    }
    bool ok = detail::write_file(dir / "trajectory.csv", out.trajectory, io.err) &&
              detail::write_file(dir / "report.txt", out.report, io.err);
    if (!out.report_csv.empty()) ok = ok && detail::write_file(dir / "report.csv", out.report_csv, io.err);
    if (!ok) return kIoError;
    io.out << out.report;
    if (!out.completed) {
      io.err << scenarios[i].name << ": run stopped at a field singularity: " << out.reason << "\n";
      code = kSingularity;
    }
  }
  return code;
}

/// Writes the normalized field on a grid as CSV: x,y,ux,uy,degenerate.
inline int cmd_field(const CommandIo& io, const std::filesystem::path& config,
                     std::optional<Box> bbox, std::optional<std::size_t> resolution,
                     const std::filesystem::path& output) {
  int code = kOk;
  auto s = detail::load(io, config, code);
  if (!s) return code;
  const Box box = bbox ? *bbox : s->field.box.value_or(detail::default_box(*s, 400.0));
  const std::size_t n = resolution.value_or(s->field.nx);
  if (!box.valid() || n < 2) {
    io.err << "field: bbox must have positive extent and resolution must be >= 2\n";
    return kUsage;
  }
  const auto grid = sim::sample_field_grid(s->sim.curve, box, n, n, s->sim.gains, s->sim.direction);
  if (output.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(output.parent_path(), ec);
  }
  if (!detail::write_file(output, detail::field_csv(grid), io.err)) return kIoError;
  std::size_t masked = 0;
  for (const auto& node : grid.nodes) masked += node.degenerate ? 1 : 0;
  io.out << "nodes=" << grid.nodes.size() << "\nmasked=" << masked << "\n";
  return kOk;
}

/// Checks derivatives against central differences and the c* band for
/// vanishing gradients.
inline int cmd_validate(const CommandIo& io, const std::filesystem::path& config) {
  int code = kOk;
  auto s = detail::load(io, config, code);
  if (!s) return code;
  const auto& v = s->validation;
  const auto& curve = s->sim.curve;
  const Box box = detail::default_box(*s, v.box_size);

  const auto probes = sample_probes(box, v.probes, v.seed);
  const auto fd = fd_validate(curve, probes, v.step);
  const double band = std::min(curve.c_star(), 1e12);
  const auto reg = check_regularity(curve, band, box, v.regularity_samples, v.seed + 1,
                                    v.exclusion_radius);

  const bool derivatives_ok = fd.passes(kDerivativeTolerance);
  using detail::fmt17;
  io.out << "scenario=" << s->name << "\n"
         << "curve=" << curve.name() << "\n"
         << "probes=" << fd.probes_checked << "\n"
         << "non_finite_points=" << fd.non_finite_points.size() << "\n"
         << "max_grad_rel_error=" << fmt17(fd.max_grad_rel_error) << "\n"
         << "max_hessian_rel_error=" << fmt17(fd.max_hessian_rel_error) << "\n"
         << "max_hessian_asymmetry=" << fmt17(fd.max_hessian_asymmetry) << "\n"
         << "derivatives_ok=" << (derivatives_ok ? "true" : "false") << "\n"
         << "regularity_band=" << fmt17(reg.band) << "\n"
         << "regularity_samples=" << reg.samples_in_band << "\n"
         << "min_grad_norm=" << fmt17(reg.min_grad_norm) << "\n"
         << "regular=" << (reg.regular ? "true" : "false") << "\n";
  if (!derivatives_ok) io.err << s->name << ": analytic derivatives disagree with finite differences\n";
  if (!reg.regular) io.err << s->name << ": gradient vanishes inside the regularity band\n";
  return derivatives_ok && reg.regular ? kOk : kCheckFailed;
}

struct TuneOverrides {
  std::optional<double> bank_limit_deg;
  std::optional<double> band;
  std::optional<double> band_inner;
  std::optional<double> wind_max;
};

/// Offline check that the aligned-flight bank demand stays within the limit
/// over a level band, under the worst expected wind.
inline int cmd_tune(const CommandIo& io, const std::filesystem::path& config,
                    const TuneOverrides& overrides) {
  int code = kOk;
  auto s = detail::load(io, config, code);
  if (!s) return code;
  const auto& curve = s->sim.curve;

  guidance::TuneOptions opt;
  opt.band = overrides.band.value_or(s->tune.band.value_or(curve.c_star()));
  opt.inner_band = overrides.band_inner ? overrides.band_inner : s->tune.inner_band;
  opt.airspeed = s->sim.airspeed;
  opt.wind_max = overrides.wind_max.value_or(s->tune.wind_max);
  opt.theta = s->sim.theta;
  opt.bank_limit = overrides.bank_limit_deg
                       ? deg_to_rad(*overrides.bank_limit_deg)
                       : s->sim.bank_limit.value_or(deg_to_rad(45.0));
  opt.samples = s->tune.samples;
  opt.box = detail::default_box(*s, s->tune.box_size);
  opt.seed = s->tune.seed;
  opt.direction = s->sim.direction;

  guidance::TuningReport rep;
  try {
    rep = guidance::tune_check(curve, s->sim.gains, opt);
  } catch (const std::invalid_argument& err) {
    io.err << "tune: " << err.what() << "\n";
    return kConfigInvalid;
  }
  using detail::fmt17;
  io.out << "scenario=" << s->name << "\n"
         << "band=" << fmt17(opt.band) << "\n"
         << "band_inner=" << fmt17(opt.inner_band.value_or(opt.band)) << "\n"
         << "wind_max_mps=" << fmt17(opt.wind_max) << "\n"
         << "bank_limit_deg=" << fmt17(rad_to_deg(opt.bank_limit)) << "\n"
         << "max_required_bank_deg=" << fmt17(rad_to_deg(rep.max_required_bank)) << "\n"
         << "max_required_bank_conservative_deg="
         << fmt17(rad_to_deg(rep.max_required_bank_conservative)) << "\n"
         << "worst_point_x_m=" << fmt17(rep.worst_point.x) << "\n"
         << "worst_point_y_m=" << fmt17(rep.worst_point.y) << "\n"
         << "worst_ground_speed_mps=" << fmt17(rep.worst_ground_speed) << "\n"
         << "samples_used=" << rep.samples_used << "\n"
         << "degenerate_skipped=" << rep.degenerate_skipped << "\n"
         << "satisfied=" << (rep.satisfied ? "true" : "false") << "\n";
  return rep.satisfied ? kOk : kCheckFailed;
}

}  // namespace gvf::cli

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

// gvf: batch front-end for guiding-vector-field path following scenarios.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gvf/cli/commands.hpp"

namespace {

template <typename T>
std::optional<T> flag_value(const CLI::Option* opt, const T& value) {
  return opt->count() > 0 ? std::optional<T>(value) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  using namespace gvf::cli;

  CLI::App app{"Guiding vector field path following: simulate, validate and tune scenarios"};
  app.require_subcommand(1);

  std::vector<std::string> run_configs;
  std::string run_out;
  auto* run = app.add_subcommand("run", "simulate scenarios and write trajectory CSV + report");
  run->add_option("--config", run_configs, "scenario file (repeatable)")->required();
  auto* run_out_opt = run->add_option("--out", run_out, "output root (default $GVF_OUTPUT_ROOT or ./gvf_out)");

  std::string field_config;
  std::string field_out;
  std::vector<double> bbox;
  std::size_t resolution = 0;
  auto* field = app.add_subcommand("field", "export the normalized guidance field on a grid");
  field->add_option("--config", field_config, "scenario file")->required();
  auto* field_out_opt = field->add_option("--out", field_out, "CSV path (default <output root>/<name>_field.csv)");
  auto* bbox_opt = field->add_option("--bbox", bbox, "xmin,xmax,ymin,ymax in meters")
                       ->expected(4)
                       ->delimiter(',');
  auto* res_opt = field->add_option("--resolution", resolution, "nodes per axis")->check(CLI::Range(2, 100000));

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "check derivatives and regularity of the scenario curve");
  validate->add_option("--config", validate_config, "scenario file")->required();

  std::string tune_config;
  double bank_limit_deg = 45.0;
  double band = 0.0;
  double band_inner = 0.0;
  double wind_max = 0.0;
  auto* tune = app.add_subcommand("tune", "check the gains against the bank limit over a level band");
  tune->add_option("--config", tune_config, "scenario file")->required();
  auto* bank_opt = tune->add_option("--bank-limit-deg", bank_limit_deg, "bank limit in degrees");
  auto* band_opt = tune->add_option("--band", band, "outer level band c (phi <= c)");
  auto* inner_opt = tune->add_option("--band-inner", band_inner, "inner level band (phi >= -c_inner)");
  auto* wind_opt = tune->add_option("--wind-max", wind_max, "worst expected wind speed in m/s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const CurveRegistry registry;
  const CommandIo io{std::cout, std::cerr, registry};

  if (*run) {
    std::vector<fs::path> paths(run_configs.begin(), run_configs.end());
    const auto root = resolve_output_root(flag_value<fs::path>(run_out_opt, run_out));
    return cmd_run(io, paths, root);
  }
  if (*field) {
    std::optional<gvf::Box> box;
    if (bbox_opt->count() > 0) box = gvf::Box{{bbox[0], bbox[2]}, {bbox[1], bbox[3]}};
    fs::path out;
    if (field_out_opt->count() > 0) {
      out = field_out;
    } else {
      out = resolve_output_root(std::nullopt) / (fs::path(field_config).stem().string() + "_field.csv");
    }
    return cmd_field(io, field_config, box, flag_value(res_opt, resolution), out);
  }
  if (*validate) return cmd_validate(io, validate_config);
  if (*tune) {
    TuneOverrides o{flag_value(bank_opt, bank_limit_deg), flag_value(band_opt, band),
                    flag_value(inner_opt, band_inner), flag_value(wind_opt, wind_max)};
    return cmd_tune(io, tune_config, o);
  }
  return kUsage;
}

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

// Tracks a user-supplied sinusoidal path y = A sin(k x) given only as
// phi, grad phi and its Hessian.

#include <cmath>
#include <iostream>

#include "gvf/analysis.hpp"
#include "gvf/curve.hpp"
#include "gvf/sim.hpp"

int main() {
  using namespace gvf;
  constexpr double kAmplitude = 30.0;
  constexpr double kWavenumber = 2.0 * 3.141592653589793 / 400.0;

  // phi = y - A sin(k x) is regular everywhere since d phi / dy = 1.
  ImplicitCurve wave(
      "sinusoid", [](Vec2 p) { return p.y - kAmplitude * std::sin(kWavenumber * p.x); },
      [](Vec2 p) { return Vec2{-kAmplitude * kWavenumber * std::cos(kWavenumber * p.x), 1.0}; },
      [](Vec2 p) {
        return Mat2{kAmplitude * kWavenumber * kWavenumber * std::sin(kWavenumber * p.x), 0.0, 0.0,
                    0.0};
      },
      /*c_star=*/1e9);

  const auto probes = sample_probes(Box::centered({0.0, 0.0}, 400.0), 1000, 3);
  const auto fd = fd_validate(wave, probes, 1e-5);
  std::cout << "max_grad_rel_error=" << fd.max_grad_rel_error
            << " max_hessian_rel_error=" << fd.max_hessian_rel_error << "\n";

  sim::SimConfig config{wave};
  config.gains = {0.05, 1.0};
  config.airspeed = 11.0;
  config.wind = sim::WindModel::constant({0.0, -4.0});
  config.initial = {{-300.0, 80.0}, 0.0};
  config.bank_limit = deg_to_rad(45.0);
  config.duration = 90.0;

  const auto result = sim::run(config);
  if (!result.completed()) {
    std::cerr << "run stopped: " << result.reason << "\n";
    return 1;
  }
  std::cout << analysis::to_key_value(analysis::analyze(result.log, 1.0));
  return 0;
}

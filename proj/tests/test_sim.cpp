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

#include "gvf/sim.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gtest/gtest.h"
#include "support.hpp"

namespace gvf::sim {
namespace {

constexpr double kS = 11.0;

SimConfig EllipseConfig(Vec2 wind) {
  SimConfig c{make_ellipse(testing::flight_ellipse())};
  c.gains = {0.4, 1.0};
  c.airspeed = kS;
  c.wind = WindModel::constant(wind);
  c.initial = {testing::flight_ellipse_start(), std::numbers::pi / 2.0};
  c.bank_limit = deg_to_rad(45.0);
  return c;
}

TEST(GroundVelocityTest, Examples) {
  EXPECT_EQ(ground_velocity({{}, 0.0}, kS, WindModel{}, 0.0), (Vec2{kS, 0.0}));
  EXPECT_EQ(ground_velocity({{}, 0.0}, kS, WindModel::constant({-kS / 2.0, 0.0}), 0.0),
            (Vec2{kS / 2.0, 0.0}));
  const Vec2 v = ground_velocity({{}, std::numbers::pi}, kS, WindModel::constant({5.0, 0.0}), 0.0);
  EXPECT_NEAR(v.x, -6.0, 1e-14);
  EXPECT_NEAR(v.y, 0.0, 1e-14);
}

TEST(WindModelTest, GustProfile) {
  const auto w = WindModel::sinusoidal_gust({-5.0, 0.0}, 3.0, 20.0);
  EXPECT_EQ(w.at(0.0), (Vec2{-5.0, 0.0}));
  EXPECT_NEAR(w.at(5.0).x, -8.0, 1e-14);
  EXPECT_NEAR(w.at(15.0).x, -2.0, 1e-14);
  EXPECT_DOUBLE_EQ(w.sup_norm(), 8.0);
  const auto cross = WindModel::sinusoidal_gust({}, 2.0, 10.0, Vec2{0.0, 3.0});
  EXPECT_NEAR(cross.at(2.5).y, 2.0, 1e-14);
  EXPECT_THROW(WindModel::sinusoidal_gust({}, -1.0, 10.0), std::invalid_argument);
  EXPECT_THROW(WindModel::sinusoidal_gust({}, 1.0, 0.0), std::invalid_argument);
}

TEST(StepTest, StraightFlightIsExact) {
  const auto next = step({{0.0, 0.0}, 0.0}, 0.0, kS, WindModel{}, 0.0, 1.0);
  EXPECT_EQ(next.p, (Vec2{kS, 0.0}));
  EXPECT_EQ(next.yaw, 0.0);
}

TEST(StepTest, ArcLocalErrorIsFifthOrder) {
  const VehicleState s0{{3.0, -2.0}, 0.7};
  const double u = 1.0;
  double prev = 0.0;
  for (double dt : {0.2, 0.1, 0.05}) {
    const auto next = step(s0, u, kS, WindModel{}, 0.0, dt);
    const auto exact = testing::exact_arc(s0.p, s0.yaw, u, kS, {}, dt);
    const double err = (next.p - exact.p).norm();
    EXPECT_NEAR(next.yaw, exact.yaw, 1e-15);
    if (prev > 0.0) EXPECT_NEAR(std::log2(prev / err), 5.0, 0.1);
    prev = err;
  }
}

TEST(StepTest, ConstantWindSuperposes) {
  const VehicleState s0{{10.0, 20.0}, -1.1};
  const Vec2 w{-5.0, 2.0};
  const auto calm = step(s0, 0.3, kS, WindModel{}, 0.0, 0.05);
  const auto windy = step(s0, 0.3, kS, WindModel::constant(w), 0.0, 0.05);
  EXPECT_NEAR((windy.p - (calm.p + 0.05 * w)).norm(), 0.0, 1e-13);
  EXPECT_EQ(windy.yaw, calm.yaw);
}

TEST(StepTest, MatchesArcWithWindOverManySteps) {
  VehicleState s{{0.0, 0.0}, 0.0};
  const Vec2 w{-5.0, 0.0};
  const double u = 0.5;
  const double dt = 1.0 / 600.0;
  for (int k = 0; k < 600; ++k) s = step(s, u, kS, WindModel::constant(w), k * dt, dt);
  const auto exact = testing::exact_arc({0.0, 0.0}, 0.0, u, kS, w, 1.0);
  EXPECT_LT((s.p - exact.p).norm(), 1e-10);
}

TEST(StepTest, YawIsWrapped) {
  const auto next = step({{}, std::numbers::pi - 0.01}, 1.0, kS, WindModel{}, 0.0, 0.1);
  EXPECT_NEAR(next.yaw, -std::numbers::pi + 0.09, 1e-12);
}

TEST(StepTest, Rejections) {
  EXPECT_THROW(step({{}, 0.0}, 0.0, kS, WindModel{}, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(step({{}, 0.0}, std::numeric_limits<double>::quiet_NaN(), kS, WindModel{}, 0.0, 0.1),
               std::invalid_argument);
  EXPECT_THROW(step({{std::numeric_limits<double>::infinity(), 0.0}, 0.0}, 0.0, kS, WindModel{}, 0.0, 0.1),
               std::invalid_argument);
}

TEST(SimConfigTest, RejectsWindAtOrAboveAirspeed) {
  auto c = EllipseConfig({-11.0, 0.0});
  try {
    c.validate();
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& err) {
    EXPECT_NE(std::string(err.what()).find("airspeed-exceeds-wind"), std::string::npos);
  }
  c.assert_wind_bound = false;
  EXPECT_NO_THROW(c.validate());
  auto g = EllipseConfig({});
  g.wind = WindModel::sinusoidal_gust({-5.0, 0.0}, 6.0, 10.0);
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(SimConfigTest, RejectsBadParameters) {
  auto c = EllipseConfig({});
  c.gains.k_e = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = EllipseConfig({});
  c.dt = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = EllipseConfig({});
  c.bank_limit = deg_to_rad(90.0);
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(RunTest, LineFromHundredMetersConverges) {
  SimConfig c{make_line({0.0, 0.0}, 0.0)};
  c.gains = {0.05, 1.0};
  c.initial = {{0.0, -100.0}, std::numbers::pi / 2.0};
  c.bank_limit = deg_to_rad(45.0);
  const auto r = run(c);
  ASSERT_TRUE(r.completed());
  const auto& s = r.log.samples;
  EXPECT_LT(std::abs(s.back().error), 0.05);
  // Once aligned with the field, |e| never grows.
  std::size_t aligned = 0;
  while (aligned < s.size() && s[aligned].v2 > 1e-6) ++aligned;
  ASSERT_LT(aligned, s.size());
  for (std::size_t i = aligned + 1; i < s.size(); ++i) {
    EXPECT_LE(std::abs(s[i].error), std::abs(s[i - 1].error) + 1e-9) << "t=" << s[i].t;
  }
}

TEST(RunTest, OnPathStartStaysOnPath) {
  auto c = EllipseConfig({});
  const EllipseCurve e(testing::flight_ellipse());
  const Vec2 p = 50.0 * e.a_axis();
  const Vec2 t = tangent(e, p).normalized();
  c.initial = {p, std::atan2(t.y, t.x)};
  const auto r = run(c);
  ASSERT_TRUE(r.completed());
  double worst = 0.0;
  for (const auto& s : r.log.samples) worst = std::max(worst, std::abs(s.error));
  EXPECT_LT(worst, 1e-3);
}

TEST(RunTest, FlightEllipseWithWindConverges) {
  const auto r = run(EllipseConfig({-5.0, 0.0}));
  ASSERT_TRUE(r.completed());
  const auto& s = r.log.samples;
  EXPECT_NEAR(s.front().error, 3.0, 1e-12);
  for (std::size_t i = s.size() - 600 * 30; i < s.size(); ++i) EXPECT_LT(std::abs(s[i].error), 0.05);
}

TEST(RunTest, GustsWithinAirspeedKeepErrorBounded) {
  auto c = EllipseConfig({});
  c.wind = WindModel::sinusoidal_gust({-5.0, 0.0}, 3.0, 17.0);
  const auto r = run(c);
  ASSERT_TRUE(r.completed());
  const auto& s = r.log.samples;
  double min_speed = std::numeric_limits<double>::infinity();
  for (const auto& x : s) min_speed = std::min(min_speed, x.velocity.norm());
  EXPECT_GE(min_speed, kS - c.wind.sup_norm() - 1e-12);
  // The law ignores dw/dt, so gusts leave a residual band around the path.
  double late = 0.0;
  for (const auto& x : s) {
    if (x.t > 60.0) late = std::max(late, std::abs(x.error));
  }
  EXPECT_LT(late, 0.25);
  EXPECT_GT(late, 0.01);
}

TEST(RunTest, CenterStartReportsSingularity) {
  auto c = EllipseConfig({});
  c.initial = {{0.0, 0.0}, 0.0};
  const auto r = run(c);
  EXPECT_EQ(r.status, RunStatus::kSingularity);
  EXPECT_NE(r.reason.find("vanishes"), std::string::npos);
  EXPECT_TRUE(r.log.samples.empty());
}

TEST(RunTest, LogIsOrderedAndFinite) {
  auto c = EllipseConfig({-5.0, 0.0});
  c.duration = 10.0;
  const auto r = run(c);
  const auto& s = r.log.samples;
  ASSERT_EQ(s.size(), 6001u);
  EXPECT_EQ(s.front().t, 0.0);
  EXPECT_NEAR(s.back().t, 10.0, 1e-12);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) EXPECT_GT(s[i].t, s[i - 1].t);
    for (double v : {s[i].p.x, s[i].p.y, s[i].yaw, s[i].error, s[i].v1, s[i].v2, s[i].u_raw,
                     s[i].u_clamped, s[i].chi_dot_d, s[i].beta, s[i].bank_cmd, s[i].align_err}) {
      EXPECT_TRUE(std::isfinite(v));
    }
    EXPECT_GT(s[i].yaw, -std::numbers::pi);
    EXPECT_LE(s[i].yaw, std::numbers::pi);
    EXPECT_NEAR(s[i].v1, 0.5 * s[i].error * s[i].error, 1e-15 * std::max(1.0, s[i].v1));
  }
  EXPECT_DOUBLE_EQ(r.log.meta.k_d, 1.0);
}

TEST(RunTest, CommandIsHeldBetweenUpdates) {
  auto c = EllipseConfig({-5.0, 0.0});
  c.duration = 2.0;
  const auto s = run(c).log.samples;
  std::size_t updates = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].controller_update) {
      ++updates;
      EXPECT_EQ(i % 10, 0u) << i;
    } else {
      EXPECT_EQ(s[i].u_clamped, s[i - 1].u_clamped);
      EXPECT_EQ(s[i].u_raw, s[i - 1].u_raw);
    }
    EXPECT_LE(std::abs(s[i].bank_cmd), deg_to_rad(45.0) + 1e-12);
  }
  EXPECT_EQ(updates, 121u);
}

TEST(RunTest, ControllerAtIntegrationRateUpdatesEveryStep) {
  auto c = EllipseConfig({});
  c.duration = 1.0;
  c.controller_rate_hz = 600.0;
  for (const auto& s : run(c).log.samples) EXPECT_TRUE(s.controller_update);
}

TEST(RunTest, HalvingStepChangesTrajectoryLittle) {
  auto a = EllipseConfig({-5.0, 0.0});
  a.duration = 20.0;
  auto b = a;
  b.dt = a.dt / 2.0;
  const auto ra = run(a).log.samples;
  const auto rb = run(b).log.samples;
  ASSERT_EQ(rb.size(), 2 * (ra.size() - 1) + 1);
  EXPECT_LT((ra.back().p - rb.back().p).norm(), 1e-6);
}

// ---------------------------------------------------------------------------
// Field grid.

TEST(FieldGridTest, OnPathNodeIsUnitTangent) {
  // phi = y sampled on a grid containing y = 0 as a row.
  const auto curve = make_line({0.0, 0.0}, 0.0);
  const auto g = sample_field_grid(curve, Box{{-10.0, -10.0}, {10.0, 10.0}}, 5, 5, {1.0, 1.0},
                                   Direction::kForward);
  const auto& node = g.at(1, 2);
  EXPECT_EQ(node.p, (Vec2{-5.0, 0.0}));
  EXPECT_NEAR(node.direction.x, 1.0, 1e-15);
  EXPECT_NEAR(node.direction.y, 0.0, 1e-15);
}

TEST(FieldGridTest, EllipseCenterIsMaskedAndOthersAreUnit) {
  const auto g = sample_field_grid(make_ellipse(testing::flight_ellipse()),
                                   Box::centered({0.0, 0.0}, 400.0), 41, 41, {0.4, 1.0},
                                   Direction::kForward);
  ASSERT_EQ(g.nodes.size(), 41u * 41u);
  std::size_t masked = 0;
  for (const auto& n : g.nodes) {
    if (n.degenerate) {
      ++masked;
      EXPECT_EQ(n.direction, (Vec2{0.0, 0.0}));
    } else {
      EXPECT_NEAR(n.direction.norm(), 1.0, 1e-12);
    }
  }
  EXPECT_EQ(masked, 1u);
  EXPECT_TRUE(g.at(20, 20).degenerate);
  EXPECT_EQ(g.at(20, 20).p, (Vec2{0.0, 0.0}));
}

TEST(FieldGridTest, Rejections) {
  const auto curve = make_line({0.0, 0.0}, 0.0);
  EXPECT_THROW(sample_field_grid(curve, Box::centered({}, 1.0), 1, 5, {1.0, 1.0}, Direction::kForward),
               std::invalid_argument);
  EXPECT_THROW(sample_field_grid(curve, Box{}, 5, 5, {1.0, 1.0}, Direction::kForward),
               std::invalid_argument);
}

}  // namespace
}  // namespace gvf::sim

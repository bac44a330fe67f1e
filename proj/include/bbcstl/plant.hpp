// Copyright 2026 The bbcstl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "bbcstl/error.hpp"
#include "bbcstl/trace.hpp"

namespace bbcstl {

/// Constants of the automatic-transmission surrogate.
struct PlantParams {
  std::array<double, 4> traction{6.0, 5.0, 4.5, 5.0};      // alpha, per gear
  double braking = 8.0;                                     // beta
  double drag = 0.01;                                       // gamma
  std::array<double, 4> ratio{120.0, 80.0, 55.0, 40.0};    // R, per gear
  double upshift_rpm = 4500.0;
  double downshift_rpm = 1000.0;
  int shift_cooldown = 2;
  int substeps = 10;
  double max_throttle = 100.0;
  double max_brake = 325.0;
};

/// Plant state; rotation is derived as velocity * ratio[gear - 1].
struct AtState {
  double velocity = 0.0;
  int gear = 1;
  int cooldown = 0;

  friend bool operator==(const AtState&, const AtState&) = default;
};

/// One control step (one time unit) of the surrogate. Returns the output
/// valuation (velocity, rotation, gear) after the step.
inline Valuation at_step(AtState& s, double throttle, double brake, const PlantParams& p = {}) {
  if (!(throttle >= 0.0 && throttle <= p.max_throttle)) {
    throw AdapterError("throttle " + std::to_string(throttle) + " out of range");
  }
  if (!(brake >= 0.0 && brake <= p.max_brake)) {
    throw AdapterError("brake " + std::to_string(brake) + " out of range");
  }
  const double h = 1.0 / p.substeps;
  const double alpha = p.traction[static_cast<std::size_t>(s.gear - 1)];
  for (int i = 0; i < p.substeps; ++i) {
    const double dv = alpha * (throttle / p.max_throttle) - p.braking * (brake / p.max_brake) - p.drag * s.velocity;
    s.velocity += h * dv;
    if (s.velocity < 0.0) s.velocity = 0.0;
  }
  const double rpm = s.velocity * p.ratio[static_cast<std::size_t>(s.gear - 1)];
  if (s.cooldown == 0 && rpm >= p.upshift_rpm && s.gear < 4) {
    ++s.gear;
    s.cooldown = p.shift_cooldown;
  } else if (s.cooldown == 0 && rpm <= p.downshift_rpm && s.gear > 1) {
    --s.gear;
    s.cooldown = p.shift_cooldown;
  } else if (s.cooldown > 0) {
    --s.cooldown;
  }
  return {s.velocity, s.velocity * p.ratio[static_cast<std::size_t>(s.gear - 1)],
          static_cast<double>(s.gear)};
}

}  // namespace bbcstl

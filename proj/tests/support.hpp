#pragma once

#include <random>
#include <vector>

#include "dimred/geometry.hpp"

namespace dimred::testing {

// Random smooth profile, positive on [-4, 4] with margin.
inline RadiusProfile random_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  switch (static_cast<int>(in(0.0, 4.0))) {
    case 0: return RadiusProfile::tanh_step(in(1.5, 3.0), in(-1.0, 1.0), in(0.5, 2.0), in(-1.0, 1.0));
    case 1: return RadiusProfile::gaussian_bump(in(1.0, 2.0), in(-0.5, 0.8), in(0.7, 2.0), in(-1.0, 1.0));
    case 2: return RadiusProfile::exp_ramp(in(1.0, 2.0), in(0.05, 0.3), in(0.3, 0.8) * (u(rng) < 0.5 ? -1 : 1),
                                           in(-1.0, 1.0));
    default: return RadiusProfile::cosh_well(in(0.5, 1.5), in(0.1, 0.4), in(0.2, 0.6), in(-1.0, 1.0));
  }
}

inline Geometry random_geometry(int d, std::mt19937_64& rng) {
  std::vector<RadiusProfile> p;
  for (int a = 0; a < d - 1; ++a) p.push_back(random_profile(rng));
  return Geometry(d, std::move(p));
}

inline Geometry flat(int d) { return Geometry(d, std::vector<RadiusProfile>(d - 1, RadiusProfile::constant(1.0))); }

// 2 + tanh z, the junction used throughout the examples.
inline RadiusProfile junction() { return RadiusProfile::tanh_step(2.0, 1.0, 1.0, 0.0); }

}  // namespace dimred::testing

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "weierbox/curve.hpp"

namespace weierbox::testing {

inline constexpr std::uint64_t kSeed = 20240611;

// Star-shaped polygon around the origin: sorted parameters, radii in
// [r_min, r_max] at evenly spread angles. Always a simple closed loop.
inline PeriodicCurve random_star(std::mt19937_64& rng, int vertices, double r_min = 0.5, double r_max = 1.5) {
  std::uniform_real_distribution<double> radius(r_min, r_max), jitter(-0.3, 0.3), unit(0.0, 1.0);
  std::vector<double> s(static_cast<std::size_t>(vertices));
  for (auto& v : s) v = unit(rng);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::vector<PolylineVertex> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double th = kTwoPi * (static_cast<double>(i) + 0.5 + jitter(rng)) / static_cast<double>(s.size());
    const double r = radius(rng);
    out.push_back({s[i], {r * std::cos(th), r * std::sin(th)}});
  }
  return PeriodicCurve::polyline(std::move(out));
}

// Polyline with arbitrary (possibly self-crossing) vertices in a box.
inline PeriodicCurve random_scribble(std::mt19937_64& rng, int vertices) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<PolylineVertex> out;
  for (int i = 0; i < vertices; ++i)
    out.push_back({static_cast<double>(i) / vertices, {coord(rng), coord(rng)}});
  return PeriodicCurve::polyline(std::move(out));
}

}  // namespace weierbox::testing

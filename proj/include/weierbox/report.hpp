#pragma once

#include <json.hpp>
#include <limits>

#include "weierbox/cover.hpp"
#include "weierbox/curve.hpp"
#include "weierbox/dims.hpp"
#include "weierbox/inclusion.hpp"
#include "weierbox/series.hpp"

namespace weierbox {

using Json = nlohmann::ordered_json;

Json to_json(Point2 p);
Json to_json(const CurveConstants& c);
Json to_json(const ThresholdConstants& t);
Json to_json(const BoxCountResult& r);
Json to_json(const DimensionEstimate& d);
Json to_json(const InclusionReport& r);
Json to_json(const SamplingPolicy& p);

/// {L, delta, epsilon, z0, connected, c0, c1, c2, c}; the c fields are null
/// when the complement is connected.
Json constants_report(const CurveConstants& c);

/// Worst-case summary of a batch of residual checks.
struct ResidualSummary {
  double max_residual{0.0};
  /// Bound plus slack at the level where the worst excess occurred.
  double bound{0.0};
  bool pass{true};
  std::uint64_t checks{0};
  std::uint64_t violations{0};
  /// Largest residual.norm() - (bound + slack) seen.
  double worst_excess{-std::numeric_limits<double>::infinity()};

  void add(const Residual& r);
};

Json to_json(const ResidualSummary& s);

}  // namespace weierbox

#pragma once

#include <optional>
#include <span>
#include <string>

#include "weierbox/cover.hpp"

namespace weierbox {

enum class Regime {
  kSubCritical,    ///< b lambda^2 < 1
  kSuperCritical,  ///< b lambda^2 >= 1
};

std::string to_string(Regime r);

struct TheoreticalDimension {
  Regime regime{Regime::kSuperCritical};
  double dimension{0.0};
};

/// log b / log(1/lambda) when b lambda^2 < 1, otherwise 3 + 2 log_b lambda.
/// Throws std::invalid_argument unless b >= 2 and 0 < lambda < 1.
TheoreticalDimension theoretical_dimension(int b, double lambda);

/// Roots of the threshold equations
///   c0 = (L / eps) (2 + 1 / (c0 - 1)),   c1 = (L / eps) (4 + 1 / (c1 - 1)),
/// with c2 = max(c1, 2 L / delta) and c = max(2 c0, c1). Each residual is
/// |c - rhs(c)| of its defining equation.
struct ThresholdConstants {
  double c0{0.0};
  double c1{0.0};
  double c2{0.0};
  double c{0.0};
  double c0_residual{0.0};
  double c1_residual{0.0};
  double c2_residual{0.0};
  double c_residual{0.0};
};

/// Throws HypothesisError when epsilon == 0 (connected complement) and
/// std::invalid_argument for non-positive L or delta.
ThresholdConstants solve_threshold_constants(double L, double delta, double epsilon);

struct DimensionEstimate {
  double slope{0.0};
  double intercept{0.0};
  double residual_rms{0.0};
  int n_min{0};
  int n_max{0};
  /// Filled when lambda is supplied.
  std::optional<TheoreticalDimension> theoretical;
};

/// Least-squares line through (n, log_b count). Needs at least two results
/// with distinct n, one common b and positive counts.
DimensionEstimate fit_box_dimension(std::span<const BoxCountResult> results,
                                    std::optional<double> lambda = std::nullopt);

}  // namespace weierbox

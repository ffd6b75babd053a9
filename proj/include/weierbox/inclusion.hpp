#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weierbox/curve.hpp"
#include "weierbox/series.hpp"

namespace weierbox {

enum class InclusionKind {
  kCoveringPlain,
  kCoveringEll,
  kDiscInImagePlain,
  kDiscInImageEll,
};

std::string to_string(InclusionKind kind);

struct InclusionReport {
  InclusionKind kind{InclusionKind::kCoveringPlain};
  /// Label such as "covering-ell(0.25)" or "disc-in-image-plain(1,13)".
  std::string variant;
  std::uint64_t points_checked{0};
  double max_defect{0.0};
  double tolerance{0.0};
  bool passed{false};
  double gap_observed{0.0};
  /// Radius by which the left-hand discs were shrunk.
  double margin{0.0};
  std::optional<double> beta;
  std::optional<int> n;
  std::optional<std::int64_t> k;
  /// Hypothesis inequality that was checked, with both sides evaluated.
  std::string hypothesis;
};

/// Covering inclusion: g^ + B(0, eps lambda) inside the union over s of
/// (g(s) + lambda phi^), with g = phi (plain) or g = ell_beta (ell).
struct CoveringMode {
  bool ell{false};
  double beta{0.0};
  int b{2};

  static CoveringMode plain() { return {}; }
  static CoveringMode ell_mode(double beta, int b) { return {true, beta, b}; }
};

struct CoveringSampling {
  /// Curve samples for the left-hand set.
  std::size_t lhs_curve{256};
  std::size_t rings{8};
  std::size_t angles{32};
  /// (s, t) product grid for the right-hand union.
  std::size_t rhs_s{1024};
  std::size_t rhs_t{1024};
  /// Disc shrink; defaults to the tolerance.
  std::optional<double> margin;
};

/// The right-hand grid spacing (largest distance between grid neighbours)
/// is both gap_observed and the tolerance.
///
/// Throws HypothesisError if eps = 0, if the curve is not recentered on its
/// eps-disc, or in ell mode unless b lambda > L / (Delta (1 - lambda)).
InclusionReport verify_covering_inclusion(const PeriodicCurve& curve, const CurveConstants& constants, double lambda,
                                          const CoveringMode& mode, const CoveringSampling& sampling = {});

enum class DiscVariant { kPlain, kEll };

struct DiscSampling {
  std::size_t lhs_curve{256};
  std::size_t rings{8};
  std::size_t angles{32};
  /// Lattice points of W on the interval, rounded up to a lattice size
  /// (see IntervalSampler).
  std::uint64_t image_samples{std::uint64_t{1} << 18};
  std::uint64_t seed{0};
  /// Disc shrink; defaults to one ring spacing.
  std::optional<double> margin;
};

/// Disc-in-image inclusion at (n, k):
///   W(k/b^n) - lambda^n/(1-lambda) phi(0) + lambda^n (g^ + B(0, eps lambda))
/// inside {W(s) : s in [k/b^n, (k+1)/b^n]}, with g = phi (plain) or
/// g = ell_{k/b} (ell). tolerance = gap_observed / 2 + margin.
///
/// Throws HypothesisError when eps = 0, when the curve is not recentered, or
/// when the variant's hypothesis fails: b lambda^3 > c0 (plain), or
/// lambda < 1/2 and b lambda^2 > c2 (ell).
InclusionReport verify_disc_in_image(const PeriodicCurve& curve, const CurveConstants& constants,
                                     const WeierstrassParams& params, int n, std::int64_t k, DiscVariant variant,
                                     const DiscSampling& sampling = {});

/// Same check for several k at one level; the tabulated W values are shared.
std::vector<InclusionReport> verify_disc_in_image(const PeriodicCurve& curve, const CurveConstants& constants,
                                                  const WeierstrassParams& params, int n,
                                                  const std::vector<std::int64_t>& ks, DiscVariant variant,
                                                  const DiscSampling& sampling = {});

}  // namespace weierbox

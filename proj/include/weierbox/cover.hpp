#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "weierbox/curve.hpp"
#include "weierbox/series.hpp"

namespace weierbox {

/// Index of the level-n b-adic cube [k/b^n, (k+1)/b^n)^d containing a point.
struct BAdicIndex {
  int level{0};
  std::vector<std::int64_t> coords;

  friend bool operator==(const BAdicIndex&, const BAdicIndex&) = default;
};

/// coords_i = floor(p_i * b^n); points on a cell boundary belong to the cell
/// on their right.
BAdicIndex cube_index(std::span<const double> p, int n, int b);

/// Number of distinct level-n b-adic cells met by the points.
std::uint64_t count_occupied(std::span<const std::array<double, 2>> points, int n, int b);
std::uint64_t count_occupied(std::span<const std::array<double, 3>> points, int n, int b);

/// How count_graph_cubes samples each b-adic interval.
///
/// Interval k is sampled on the lattice of IntervalSampler plus both
/// endpoints. Lattice sizes are powers of p, the smallest prime not dividing
/// b (p = 2 for odd b): the first size is the smallest power >= initial_samples
/// and each refinement multiplies it by p while it stays <= max_samples.
/// The lattice shift is drawn from `seed` (seed 0 gives no shift).
struct SamplingPolicy {
  double rel_tol{0.01};
  std::uint64_t initial_samples{256};
  std::uint64_t max_samples{std::uint64_t{1} << 16};
  std::uint64_t seed{0};
  /// Evaluate only the first lattice, no refinement.
  bool fixed_grid{false};
  bool keep_per_interval{false};
};

struct BoxCountResult {
  int n{0};
  int b{0};
  std::uint64_t count{0};
  std::uint64_t samples_used{0};
  /// Every interval stopped on the relative-increase criterion.
  bool converged{false};
  std::vector<std::uint64_t> per_interval_counts;
};

/// Lower bound on N(graph W, level-n b-adic cubes of R^3).
///
/// Each interval [k/b^n, (k+1)/b^n) is handled separately: W is sampled on
/// the policy lattice, and the level-n squares met by the values are counted.
/// A sample is used only when its whole error interval (series tail plus
/// rounding) lies inside one square, so every counted cube is met by the
/// graph. With an adaptive policy the per-interval lattice is refined until the
/// count grows by less than rel_tol or max_samples is reached.
///
/// Uses W((k+u)/b^n) = sum_{t<n} lambda^t phi(b^t x) + lambda^n W(u), so the
/// full series is evaluated only once per lattice point.
BoxCountResult count_graph_cubes(const PeriodicCurve& curve, const WeierstrassParams& params, int n,
                                 const SamplingPolicy& policy = {});

/// Same count on the fixed lattice of lattice_size(b, samples) points per
/// interval (plus endpoints), by
/// evaluating the full series at every sample and sorting all (k, i, j)
/// indices globally. Test oracle for count_graph_cubes.
std::uint64_t naive_count_oracle(const PeriodicCurve& curve, const WeierstrassParams& params, int n,
                                 std::uint64_t samples, std::uint64_t seed = 0);

/// Half-width of the error interval used to accept a graph sample.
double graph_value_margin(const PeriodicCurve& curve, const WeierstrassParams& params);

inline constexpr const char* kBoxCountCsvHeader = "n,b,count,samples_used,converged";
std::string to_csv_row(const BoxCountResult& r);

}  // namespace weierbox

#pragma once

#include <cstdint>
#include <vector>

#include "weierbox/curve.hpp"
#include "weierbox/series.hpp"

namespace weierbox {

/// Exact rational sample points inside the level-n b-adic intervals.
///
/// Interval k is sampled at x = (k + u) / b^n with u = frac(q / J + i / M),
/// i < M. M and J are powers of p, the smallest prime not dividing b; the
/// orbit of u under u -> b u mod 1 never reaches 0 and every sample keeps its
/// own tail. q < J is derived from the seed (seed 0 gives q = 0).
/// Arguments are rationals with denominator b^n M J, so the reduction
/// b^t x mod 1 is exact. W(u) is tabulated once per lattice point and
/// shared by every interval through
///   W(x) = sum_{t<n} lambda^t phi(b^t x) + lambda^n W(u).
/// The lattice for p M contains the lattice for M, and the table grows by
/// evaluating only the new points.
class IntervalSampler {
 public:
  IntervalSampler(const PeriodicCurve& curve, const WeierstrassParams& params, int n, std::uint64_t seed);

  [[nodiscard]] int level() const noexcept { return n_; }
  [[nodiscard]] std::uint64_t intervals() const noexcept { return bn_; }
  [[nodiscard]] std::uint64_t shift() const noexcept { return q_; }
  [[nodiscard]] std::uint64_t shift_grid() const noexcept { return j_; }

  /// Smallest prime not dividing b; the lattice refinement factor.
  static std::uint64_t refinement_factor(int b);
  /// Smallest power of refinement_factor(b) that is >= requested.
  static std::uint64_t lattice_size(int b, std::uint64_t requested);
  /// Largest power of refinement_factor(b) that is <= 4096.
  static std::uint64_t shift_grid(int b);
  /// q for this seed: 0 for seed 0, otherwise a mixed value below shift_grid(b).
  static std::uint64_t shift_for_seed(int b, std::uint64_t seed);

  /// u_i of the size-m lattice as a fraction of 1.
  [[nodiscard]] double lattice_u(std::uint64_t m, std::uint64_t i) const noexcept;

  /// W at lattice point i of the size-m lattice in interval k. Sizes must be
  /// powers of refinement_factor(b).
  Point2 lattice_value(std::uint64_t k, std::uint64_t m, std::uint64_t i);

  /// W(k / b^n) or W((k + 1) / b^n).
  [[nodiscard]] Point2 endpoint_value(std::uint64_t k, bool right) const;

  /// Throws std::invalid_argument if a size-m lattice at this level would
  /// overflow the exact integer arithmetic.
  static void check_capacity(const WeierstrassParams& params, int n, std::uint64_t m);

 private:
  void ensure_table(std::uint64_t m);
  [[nodiscard]] u128 numerator(std::uint64_t m, std::uint64_t i) const noexcept;
  [[nodiscard]] Point2 head(u128 num, u128 den) const;

  const PeriodicCurve& curve_;
  const WeierstrassParams& params_;
  int n_;
  std::uint64_t bn_;
  std::uint64_t p_;
  std::uint64_t j_;
  std::uint64_t q_;
  double lambda_n_;
  Point2 w_at_zero_;
  std::vector<Point2> table_;
  std::uint64_t table_m_{0};
};

}  // namespace weierbox

#pragma once

#include <cstdint>

#include "weierbox/curve.hpp"
#include "weierbox/geometry.hpp"

namespace weierbox {

__extension__ typedef unsigned __int128 u128;

/// Parameters (lambda, b) of W(x) = sum_n lambda^n phi(b^n x).
class WeierstrassParams {
 public:
  /// Throws std::invalid_argument unless b >= 2, 0 < lambda < 1 and
  /// tail_tol > 0. Evaluation needs nothing more; the residual bounds also
  /// need b lambda > 1 (see contracting()).
  WeierstrassParams(double lambda, int b, double tail_tol = 1e-12);

  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] int b() const noexcept { return b_; }
  [[nodiscard]] double tail_tol() const noexcept { return tail_tol_; }
  /// gamma = 1 / (b lambda).
  [[nodiscard]] double gamma() const noexcept { return 1.0 / (b_ * lambda_); }
  /// 1/b < lambda, i.e. gamma < 1.
  [[nodiscard]] bool contracting() const noexcept { return b_ * lambda_ > 1.0; }

  /// Smallest N with sup_norm * lambda^(N+1) / (1 - lambda) <= tail_tol.
  [[nodiscard]] int truncation_index(double sup_norm) const;

 private:
  double lambda_;
  int b_;
  double tail_tol_;
};

struct WValue {
  Point2 value;
  /// |value - W(x)| <= tail_bound, up to floating-point rounding.
  double tail_bound{0.0};
};

/// W(x) summed through the truncation index. The reduction b^n x mod 1 is
/// carried out exactly on the binary expansion of x; if it reaches zero the
/// remaining geometric tail is added in closed form and tail_bound is 0.
WValue w_eval(const PeriodicCurve& curve, const WeierstrassParams& params, double x);

/// W(num / den) for an exact rational argument. The reduction uses integer
/// arithmetic, so b-adic arguments (den = b^n) terminate exactly with a
/// closed-form tail. Requires den > 0 and den * b < 2^127.
WValue w_eval_rational(const PeriodicCurve& curve, const WeierstrassParams& params, u128 num, u128 den);

/// b^n as an integer; throws std::overflow_error past 2^62.
std::uint64_t ipow(std::uint64_t b, int n);

/// z_{n,k} = k / b^n. Throws std::out_of_range unless 0 <= k < b^n.
double badic_point(int n, std::int64_t k, int b);

/// W(z_{n,k}), evaluated exactly through the b-adic digits of k.
WValue w_badic(const PeriodicCurve& curve, const WeierstrassParams& params, int n, std::int64_t k);

struct Residual {
  Point2 residual;
  /// L gamma / (1 - gamma) (first order) or L gamma^2 / (1 - gamma) (second).
  double bound{0.0};
  /// Allowance for truncation, 2 tail_tol / lambda^n.
  double slack{0.0};

  [[nodiscard]] bool within_bound() const noexcept { return residual.norm() <= bound + slack; }
};

/// (W(z_{n+1,kb+j}) - W(z_{n,k})) / lambda^n - (phi(j/b) - phi(0)).
/// Requires n >= 1, 0 <= k < b^n and 0 <= j < b; throws std::out_of_range.
Residual residual_first_order(const PeriodicCurve& curve, const WeierstrassParams& params, int n,
                              std::int64_t k, int j);

/// The first-order residual with lambda^-1 (phi(k/b + j/b^2) - phi(k/b))
/// also removed.
Residual residual_second_order(const PeriodicCurve& curve, const WeierstrassParams& params, int n,
                               std::int64_t k, int j);

struct HolderData {
  /// log_b(1 / lambda)
  double alpha{0.0};
  /// L / (lambda b - 1) + delta / (1 - lambda); infinite unless 1/b < lambda.
  double c_holder{0.0};
};

HolderData holder_data(double lipschitz, double delta, const WeierstrassParams& params);
HolderData holder_data(const PeriodicCurve& curve, const WeierstrassParams& params);

}  // namespace weierbox

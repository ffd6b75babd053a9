#include "weierbox/series.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace weierbox {

namespace {


constexpr std::size_t kLipschitzSamples = 4096;

// Fraction r / 2^bits with r held in 64-bit limbs; multiplying by b and
// dropping the integer part is exact.
class BinaryFraction {
 public:
  explicit BinaryFraction(double f) {
    int exp = 0;
    const double mant = std::frexp(f, &exp);  // f = mant * 2^exp, mant in [0.5, 1)
    auto m = static_cast<std::uint64_t>(std::ldexp(mant, 53));
    bits_ = 53 - exp;
    while (bits_ > 0 && (m & 1u) == 0) {
      m >>= 1;
      --bits_;
    }
    limbs_.assign(static_cast<std::size_t>(bits_ / 64 + 1), 0);
    limbs_[0] = m;
  }

  [[nodiscard]] bool is_zero() const noexcept {
    for (auto l : limbs_)
      if (l != 0) return false;
    return true;
  }

  void times(std::uint64_t b) noexcept {
    std::uint64_t carry = 0;
    for (auto& l : limbs_) {
      const u128 p = static_cast<u128>(l) * b + carry;
      l = static_cast<std::uint64_t>(p);
      carry = static_cast<std::uint64_t>(p >> 64);
    }
    const int top_bits = bits_ % 64;
    const std::size_t top = static_cast<std::size_t>(bits_ / 64);
    limbs_[top] &= (std::uint64_t{1} << top_bits) - 1;
    for (std::size_t i = top + 1; i < limbs_.size(); ++i) limbs_[i] = 0;
  }

  [[nodiscard]] double value() const noexcept {
    double v = 0.0;
    for (std::size_t i = limbs_.size(); i-- > 0;)
      v += std::ldexp(static_cast<double>(limbs_[i]), static_cast<int>(64 * i) - bits_);
    return v;
  }

 private:
  std::vector<std::uint64_t> limbs_;
  int bits_{0};
};

double to_double(u128 v) noexcept { return static_cast<double>(v); }

double lipschitz_of(const PeriodicCurve& curve) { return lipschitz_constant(curve, kLipschitzSamples).value; }

void require_contracting(const WeierstrassParams& params) {
  if (!params.contracting()) throw std::invalid_argument("residual and Hoelder bounds need 1/b < lambda");
}

void check_triple(const WeierstrassParams& params, int n, std::int64_t k, int j) {
  require_contracting(params);
  if (n < 1) throw std::out_of_range("residual needs n >= 1");
  const auto bn = ipow(static_cast<std::uint64_t>(params.b()), n);
  if (k < 0 || static_cast<std::uint64_t>(k) >= bn)
    throw std::out_of_range("k = " + std::to_string(k) + " outside [0, b^n)");
  if (j < 0 || j >= params.b()) throw std::out_of_range("digit j = " + std::to_string(j) + " outside [0, b)");
}

Point2 first_order_increment(const PeriodicCurve& curve, const WeierstrassParams& params, int n,
                             std::int64_t k, int j) {
  const WValue fine = w_badic(curve, params, n + 1, k * params.b() + j);
  const WValue coarse = w_badic(curve, params, n, k);
  return (fine.value - coarse.value) * std::pow(params.lambda(), -n);
}

}  // namespace

WeierstrassParams::WeierstrassParams(double lambda, int b, double tail_tol)
    : lambda_(lambda), b_(b), tail_tol_(tail_tol) {
  if (b < 2) throw std::invalid_argument("b must be an integer >= 2");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0, 1)");
  if (!(tail_tol > 0.0)) throw std::invalid_argument("tail_tol must be positive");
}

int WeierstrassParams::truncation_index(double sup_norm) const {
  if (sup_norm <= 0.0) return 0;
  const double ratio = tail_tol_ * (1.0 - lambda_) / sup_norm;
  int n = std::max(0, static_cast<int>(std::ceil(std::log(ratio) / std::log(lambda_))) - 2);
  while (sup_norm * std::pow(lambda_, n + 1) / (1.0 - lambda_) > tail_tol_) ++n;
  return n;
}

WValue w_eval_rational(const PeriodicCurve& curve, const WeierstrassParams& params, u128 num, u128 den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  const double sup = curve.sup_norm();
  const int last = params.truncation_index(sup);
  const double lambda = params.lambda();
  const auto b = static_cast<u128>(params.b());
  const double dden = to_double(den);

  u128 r = num % den;
  WValue out;
  double weight = 1.0;
  for (int t = 0; t <= last; ++t) {
    if (r == 0) {
      out.value += curve.eval(0.0) * (weight / (1.0 - lambda));
      return out;
    }
    out.value += curve.eval(to_double(r) / dden) * weight;
    r = (r * b) % den;
    weight *= lambda;
  }
  out.tail_bound = sup * weight / (1.0 - lambda);
  return out;
}

WValue w_eval(const PeriodicCurve& curve, const WeierstrassParams& params, double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("w_eval needs a finite x");
  const double f = x - std::floor(x);
  const double sup = curve.sup_norm();
  const int last = params.truncation_index(sup);
  const double lambda = params.lambda();

  WValue out;
  if (f == 0.0) {
    out.value = curve.eval(0.0) * (1.0 / (1.0 - lambda));
    return out;
  }
  BinaryFraction r(f);
  double weight = 1.0;
  for (int t = 0; t <= last; ++t) {
    if (r.is_zero()) {
      out.value += curve.eval(0.0) * (weight / (1.0 - lambda));
      return out;
    }
    out.value += curve.eval(r.value()) * weight;
    r.times(static_cast<std::uint64_t>(params.b()));
    weight *= lambda;
  }
  out.tail_bound = sup * weight / (1.0 - lambda);
  return out;
}

std::uint64_t ipow(std::uint64_t b, int n) {
  if (n < 0) throw std::invalid_argument("negative exponent");
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > (std::uint64_t{1} << 62) / b) throw std::overflow_error("b^n exceeds 2^62");
    r *= b;
  }
  return r;
}

double badic_point(int n, std::int64_t k, int b) {
  if (b < 2) throw std::invalid_argument("b must be >= 2");
  if (n < 0) throw std::out_of_range("level n must be >= 0");
  const std::uint64_t bn = ipow(static_cast<std::uint64_t>(b), n);
  if (k < 0 || static_cast<std::uint64_t>(k) >= bn)
    throw std::out_of_range("k = " + std::to_string(k) + " outside [0, b^n)");
  return static_cast<double>(k) / static_cast<double>(bn);
}

WValue w_badic(const PeriodicCurve& curve, const WeierstrassParams& params, int n, std::int64_t k) {
  badic_point(n, k, params.b());  // range check
  return w_eval_rational(curve, params, static_cast<u128>(k),
                         ipow(static_cast<std::uint64_t>(params.b()), n));
}

Residual residual_first_order(const PeriodicCurve& curve, const WeierstrassParams& params, int n,
                              std::int64_t k, int j) {
  check_triple(params, n, k, j);
  const double b = params.b();
  const double g = params.gamma();
  Residual out;
  out.residual = first_order_increment(curve, params, n, k, j) - (curve.eval(j / b) - curve.eval(0.0));
  out.bound = lipschitz_of(curve) * g / (1.0 - g);
  out.slack = 2.0 * params.tail_tol() * std::pow(params.lambda(), -n);
  return out;
}

Residual residual_second_order(const PeriodicCurve& curve, const WeierstrassParams& params, int n,
                               std::int64_t k, int j) {
  check_triple(params, n, k, j);
  const int bi = params.b();
  const double b = bi;
  const double g = params.gamma();
  const auto digit = static_cast<double>(k % bi);
  const Point2 second = (curve.eval((digit * b + j) / (b * b)) - curve.eval(digit / b)) * (1.0 / params.lambda());
  Residual out;
  out.residual =
      first_order_increment(curve, params, n, k, j) - (curve.eval(j / b) - curve.eval(0.0)) - second;
  out.bound = lipschitz_of(curve) * g * g / (1.0 - g);
  out.slack = 2.0 * params.tail_tol() * std::pow(params.lambda(), -n);
  return out;
}

HolderData holder_data(double lipschitz, double delta, const WeierstrassParams& params) {
  const double lambda = params.lambda();
  const double b = params.b();
  const double alpha = std::log(1.0 / lambda) / std::log(b);
  if (!params.contracting()) return {alpha, std::numeric_limits<double>::infinity()};
  return {alpha, lipschitz / (lambda * b - 1.0) + delta / (1.0 - lambda)};
}

HolderData holder_data(const PeriodicCurve& curve, const WeierstrassParams& params) {
  return holder_data(lipschitz_of(curve), oscillation(curve, kLipschitzSamples).value, params);
}

}  // namespace weierbox

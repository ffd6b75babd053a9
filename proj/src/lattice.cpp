#include "weierbox/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace weierbox {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool is_power_of(std::uint64_t m, std::uint64_t p) noexcept {
  if (m == 0) return false;
  while (m % p == 0) m /= p;
  return m == 1;
}

}  // namespace

std::uint64_t IntervalSampler::refinement_factor(int b) {
  if (b < 2) throw std::invalid_argument("b must be >= 2");
  for (std::uint64_t p = 2;; ++p) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= p; ++d) prime = prime && p % d != 0;
    if (prime && static_cast<std::uint64_t>(b) % p != 0) return p;
  }
}

std::uint64_t IntervalSampler::lattice_size(int b, std::uint64_t requested) {
  const std::uint64_t p = refinement_factor(b);
  std::uint64_t m = 1;
  while (m < requested) {
    if (m > (std::uint64_t{1} << 62) / p) throw std::overflow_error("lattice size overflow");
    m *= p;
  }
  return m;
}

std::uint64_t IntervalSampler::shift_grid(int b) {
  const std::uint64_t p = refinement_factor(b);
  std::uint64_t j = 1;
  while (j * p <= 4096) j *= p;
  return j;
}

std::uint64_t IntervalSampler::shift_for_seed(int b, std::uint64_t seed) {
  return seed == 0 ? 0 : splitmix64(seed) % shift_grid(b);
}

IntervalSampler::IntervalSampler(const PeriodicCurve& curve, const WeierstrassParams& params, int n,
                                 std::uint64_t seed)
    : curve_(curve),
      params_(params),
      n_(n),
      bn_(ipow(static_cast<std::uint64_t>(params.b()), n)),
      p_(refinement_factor(params.b())),
      j_(shift_grid(params.b())),
      q_(shift_for_seed(params.b(), seed)),
      lambda_n_(std::pow(params.lambda(), n)),
      w_at_zero_(w_eval_rational(curve, params, 0, 1).value) {}

void IntervalSampler::check_capacity(const WeierstrassParams& params, int n, std::uint64_t m) {
  if (n < 0) throw std::invalid_argument("level n must be >= 0");
  if (m < 1) throw std::invalid_argument("lattice needs at least one point");
  const double lb = std::log2(static_cast<double>(params.b()));
  const double bits = (n + 1) * lb + std::log2(static_cast<double>(m)) +
                      std::log2(static_cast<double>(shift_grid(params.b())));
  if (bits > 120.0) throw std::invalid_argument("level and sample budget too large for exact arguments");
}

u128 IntervalSampler::numerator(std::uint64_t m, std::uint64_t i) const noexcept {
  const u128 den = static_cast<u128>(m) * j_;
  return (static_cast<u128>(q_) * m + static_cast<u128>(i) * j_) % den;
}

double IntervalSampler::lattice_u(std::uint64_t m, std::uint64_t i) const noexcept {
  return static_cast<double>(numerator(m, i)) / (static_cast<double>(m) * static_cast<double>(j_));
}

void IntervalSampler::ensure_table(std::uint64_t m) {
  if (!is_power_of(m, p_)) throw std::invalid_argument("lattice size must be a power of the refinement factor");
  if (table_m_ == 0) {
    table_.resize(m);
    const u128 den = static_cast<u128>(m) * j_;
    for (std::uint64_t i = 0; i < m; ++i) table_[i] = w_eval_rational(curve_, params_, numerator(m, i), den).value;
    table_m_ = m;
    return;
  }
  while (table_m_ < m) {
    const std::uint64_t next_m = p_ * table_m_;
    const u128 den = static_cast<u128>(next_m) * j_;
    std::vector<Point2> next(next_m);
    for (std::uint64_t i = 0; i < next_m; ++i)
      next[i] = i % p_ == 0 ? table_[i / p_] : w_eval_rational(curve_, params_, numerator(next_m, i), den).value;
    table_.swap(next);
    table_m_ = next_m;
  }
}

Point2 IntervalSampler::head(u128 num, u128 den) const {
  Point2 sum;
  double weight = 1.0;
  const auto b = static_cast<u128>(params_.b());
  const double dden = static_cast<double>(den);
  u128 r = num % den;
  for (int t = 0; t < n_; ++t) {
    sum += curve_.eval(static_cast<double>(r) / dden) * weight;
    r = (r * b) % den;
    weight *= params_.lambda();
  }
  return sum;
}

Point2 IntervalSampler::lattice_value(std::uint64_t k, std::uint64_t m, std::uint64_t i) {
  ensure_table(m);
  const u128 den = static_cast<u128>(m) * j_;
  return head(static_cast<u128>(k) * den + numerator(m, i), den * bn_) + table_[i * (table_m_ / m)] * lambda_n_;
}

Point2 IntervalSampler::endpoint_value(std::uint64_t k, bool right) const {
  return head(static_cast<u128>(right ? k + 1 : k), bn_) + w_at_zero_ * lambda_n_;
}

}  // namespace weierbox

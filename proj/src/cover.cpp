#include "weierbox/cover.hpp"

#include "weierbox/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace weierbox {

namespace {

constexpr double kMaxCellIndex = 1073741824.0;  // 2^30

// u = frac(q / J + i / M) = r / (M J) with r = (q M + i J) mod M J.
struct Lattice {
  std::uint64_t m;
  std::uint64_t j;
  std::uint64_t q;

  [[nodiscard]] u128 denominator() const noexcept { return static_cast<u128>(m) * j; }
  [[nodiscard]] u128 numerator(std::uint64_t i) const noexcept {
    return (static_cast<u128>(q) * m + static_cast<u128>(i) * j) % denominator();
  }
};

// Accepts a value only if its whole error interval sits in one half-open
// level-n square.
class CellRule {
 public:
  CellRule(double bn, double margin) : bn_(bn), margin_(margin * bn) {}

  bool index(Point2 v, std::int64_t& cx, std::int64_t& cy) const noexcept {
    return axis(v.x, cx) && axis(v.y, cy);
  }

 private:
  bool axis(double v, std::int64_t& c) const noexcept {
    const double s = v * bn_;
    const double e = margin_ + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(s);
    const double f = std::floor(s);
    if (s - e < f || s + e >= f + 1.0) return false;
    c = static_cast<std::int64_t>(f);
    return true;
  }

  double bn_;
  double margin_;
};

std::uint64_t pack(std::int64_t cx, std::int64_t cy) noexcept {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(static_cast<std::int32_t>(cx))) << 32) |
         static_cast<std::uint32_t>(static_cast<std::int32_t>(cy));
}

void merge_into(std::vector<std::uint64_t>& set, std::vector<std::uint64_t>& batch) {
  std::sort(batch.begin(), batch.end());
  batch.erase(std::unique(batch.begin(), batch.end()), batch.end());
  const auto mid = static_cast<std::ptrdiff_t>(set.size());
  set.insert(set.end(), batch.begin(), batch.end());
  std::inplace_merge(set.begin(), set.begin() + mid, set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  batch.clear();
}

void validate_level(const PeriodicCurve& curve, const WeierstrassParams& params, int n, std::uint64_t samples) {
  if (n < 1) throw std::invalid_argument("box counting needs level n >= 1");
  if (samples < 1) throw std::invalid_argument("box counting needs at least one sample per interval");
  const std::uint64_t bn = ipow(static_cast<std::uint64_t>(params.b()), n);
  const double reach = static_cast<double>(bn) * (curve.sup_norm() / (1.0 - params.lambda()) + 1.0);
  if (reach >= kMaxCellIndex) throw std::invalid_argument("level too deep: cell indices exceed 2^30");
  IntervalSampler::check_capacity(params, n, IntervalSampler::lattice_size(params.b(), samples));
}

template <class Index>
std::uint64_t count_distinct(std::span<const Index> points, int n, int b) {
  std::vector<std::vector<std::int64_t>> cells;
  cells.reserve(points.size());
  for (const auto& p : points) cells.push_back(cube_index(p, n, b).coords);
  std::sort(cells.begin(), cells.end());
  return static_cast<std::uint64_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

}  // namespace

BAdicIndex cube_index(std::span<const double> p, int n, int b) {
  if (b < 2) throw std::invalid_argument("cube_index needs b >= 2");
  if (n < 0) throw std::invalid_argument("cube_index needs n >= 0");
  const auto bn = static_cast<double>(ipow(static_cast<std::uint64_t>(b), n));
  BAdicIndex out{n, {}};
  out.coords.reserve(p.size());
  for (double v : p) out.coords.push_back(static_cast<std::int64_t>(std::floor(v * bn)));
  return out;
}

std::uint64_t count_occupied(std::span<const std::array<double, 2>> points, int n, int b) {
  return count_distinct(points, n, b);
}

std::uint64_t count_occupied(std::span<const std::array<double, 3>> points, int n, int b) {
  return count_distinct(points, n, b);
}

double graph_value_margin(const PeriodicCurve& curve, const WeierstrassParams& params) {
  const double sup = curve.sup_norm();
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * sup / (1.0 - params.lambda());
  return (sup > 0.0 ? params.tail_tol() : 0.0) + rounding;
}

BoxCountResult count_graph_cubes(const PeriodicCurve& curve, const WeierstrassParams& params, int n,
                                 const SamplingPolicy& policy) {
  validate_level(curve, params, n, policy.fixed_grid ? policy.initial_samples : policy.max_samples);
  if (!policy.fixed_grid && policy.max_samples < policy.initial_samples)
    throw std::invalid_argument("max_samples must be at least initial_samples");
  if (!(policy.rel_tol >= 0.0)) throw std::invalid_argument("rel_tol must be non-negative");

  const int b = params.b();
  const std::uint64_t bn = ipow(static_cast<std::uint64_t>(b), n);
  const CellRule rule(static_cast<double>(bn), graph_value_margin(curve, params));
  IntervalSampler sampler(curve, params, n, policy.seed);
  const std::uint64_t p = IntervalSampler::refinement_factor(b);
  const std::uint64_t first_m = IntervalSampler::lattice_size(b, policy.initial_samples);

  BoxCountResult result;
  result.n = n;
  result.b = b;
  result.converged = !policy.fixed_grid;
  if (policy.keep_per_interval) result.per_interval_counts.reserve(bn);

  std::vector<std::uint64_t> cells, batch;
  for (std::uint64_t k = 0; k < bn; ++k) {
    cells.clear();
    std::uint64_t used = 0;
    auto add = [&](Point2 v) {
      ++used;
      std::int64_t cx = 0, cy = 0;
      if (rule.index(v, cx, cy)) batch.push_back(pack(cx, cy));
    };
    // Adds the points of the size-m lattice that are not in the size-coarse one.
    auto add_lattice = [&](std::uint64_t m, std::uint64_t coarse) {
      const std::uint64_t ratio = coarse == 0 ? 0 : m / coarse;
      for (std::uint64_t i = 0; i < m; ++i)
        if (ratio == 0 || i % ratio != 0) add(sampler.lattice_value(k, m, i));
      merge_into(cells, batch);
    };

    std::uint64_t m = first_m;
    add(sampler.endpoint_value(k, true));
    if (sampler.shift() != 0) add(sampler.endpoint_value(k, false));
    add_lattice(m, 0);

    if (!policy.fixed_grid) {
      bool interval_converged = false;
      std::size_t previous = cells.size();
      while (m * p <= policy.max_samples) {
        m *= p;
        add_lattice(m, m / p);
        const std::size_t now = cells.size();
        if (static_cast<double>(now - previous) < policy.rel_tol * static_cast<double>(previous)) {
          interval_converged = true;
          break;
        }
        previous = now;
      }
      result.converged = result.converged && interval_converged;
    }

    result.count += cells.size();
    result.samples_used += used;
    if (policy.keep_per_interval) result.per_interval_counts.push_back(cells.size());
  }
  return result;
}

std::uint64_t naive_count_oracle(const PeriodicCurve& curve, const WeierstrassParams& params, int n,
                                 std::uint64_t samples, std::uint64_t seed) {
  validate_level(curve, params, n, samples);
  const std::uint64_t bn = ipow(static_cast<std::uint64_t>(params.b()), n);
  const CellRule rule(static_cast<double>(bn), graph_value_margin(curve, params));
  const int b = params.b();
  const Lattice lat{IntervalSampler::lattice_size(b, samples), IntervalSampler::shift_grid(b),
                    IntervalSampler::shift_for_seed(b, seed)};
  const u128 den = lat.denominator();
  const u128 full = den * bn;

  std::vector<std::array<std::int64_t, 3>> hits;
  auto visit = [&](std::uint64_t k, u128 num) {
    std::int64_t cx = 0, cy = 0;
    if (rule.index(w_eval_rational(curve, params, num, full).value, cx, cy))
      hits.push_back({static_cast<std::int64_t>(k), cx, cy});
  };
  for (std::uint64_t k = 0; k < bn; ++k) {
    for (std::uint64_t i = 0; i < lat.m; ++i) visit(k, static_cast<u128>(k) * den + lat.numerator(i));
    visit(k, static_cast<u128>(k + 1) * den);
    if (lat.q != 0) visit(k, static_cast<u128>(k) * den);
  }
  std::sort(hits.begin(), hits.end());
  return static_cast<std::uint64_t>(std::unique(hits.begin(), hits.end()) - hits.begin());
}

std::string to_csv_row(const BoxCountResult& r) {
  std::ostringstream os;
  os << r.n << ',' << r.b << ',' << r.count << ',' << r.samples_used << ',' << (r.converged ? "true" : "false");
  return os.str();
}

}  // namespace weierbox

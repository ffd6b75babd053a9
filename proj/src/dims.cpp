#include "weierbox/dims.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace weierbox {

namespace {

// Root > 1 of c = r (a + 1 / (c - 1)), i.e. c^2 - (1 + a r) c + r (a - 1) = 0.
// The quadratic is -r at c = 1, so exactly one root exceeds 1: the larger.
double threshold_root(double r, double a, double& residual) {
  const double p = 1.0 + a * r;
  const double disc = p * p - 4.0 * r * (a - 1.0);
  if (!(disc >= 0.0)) {
    std::ostringstream os;
    os << "no real threshold root (L/eps = " << r << ", a = " << a << ", discriminant " << disc << ")";
    throw std::domain_error(os.str());
  }
  double c = 0.5 * (p + std::sqrt(disc));
  auto g = [r, a](double x) { return x - r * (a + 1.0 / (x - 1.0)); };
  for (int i = 0; i < 8; ++i) {
    const double slope = 1.0 + r / ((c - 1.0) * (c - 1.0));
    const double step = g(c) / slope;
    c -= step;
    if (std::abs(step) <= 1e-16 * c) break;
  }
  if (!(c > 1.0)) {
    std::ostringstream os;
    os << "no threshold root above 1 (L/eps = " << r << ", a = " << a << ", root " << c << ")";
    throw std::domain_error(os.str());
  }
  residual = std::abs(g(c));
  return c;
}

}  // namespace

std::string to_string(Regime r) {
  return r == Regime::kSubCritical ? "sub-critical" : "super-critical";
}

TheoreticalDimension theoretical_dimension(int b, double lambda) {
  if (b < 2) throw std::invalid_argument("b must be >= 2");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0, 1)");
  const double lb = std::log(static_cast<double>(b));
  if (b * lambda * lambda < 1.0) return {Regime::kSubCritical, lb / std::log(1.0 / lambda)};
  return {Regime::kSuperCritical, 3.0 + 2.0 * std::log(lambda) / lb};
}

ThresholdConstants solve_threshold_constants(double L, double delta, double epsilon) {
  if (!(epsilon > 0.0)) throw HypothesisError("hypothesis fails: epsilon = 0 (complement connected)");
  if (!(L > 0.0)) throw std::invalid_argument("Lipschitz constant must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("oscillation must be positive");
  const double r = L / epsilon;
  ThresholdConstants t;
  t.c0 = threshold_root(r, 2.0, t.c0_residual);
  t.c1 = threshold_root(r, 4.0, t.c1_residual);
  t.c2 = std::max(t.c1, 2.0 * L / delta);
  t.c = std::max(2.0 * t.c0, t.c1);
  return t;
}

DimensionEstimate fit_box_dimension(std::span<const BoxCountResult> results, std::optional<double> lambda) {
  if (results.size() < 2) throw std::invalid_argument("dimension fit needs at least two levels");
  const int b = results.front().b;
  std::set<int> levels;
  for (const auto& r : results) {
    if (r.b != b) throw std::invalid_argument("dimension fit needs a single base b");
    if (r.count == 0) throw std::invalid_argument("dimension fit needs positive counts");
    if (!levels.insert(r.n).second) throw std::invalid_argument("dimension fit needs distinct levels");
  }

  const double lb = std::log(static_cast<double>(b));
  const auto m = static_cast<double>(results.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& r : results) {
    sx += r.n;
    sy += std::log(static_cast<double>(r.count)) / lb;
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& r : results) {
    const double dx = r.n - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(static_cast<double>(r.count)) / lb - my);
  }

  DimensionEstimate out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss = 0.0;
  for (const auto& r : results) {
    const double e = std::log(static_cast<double>(r.count)) / lb - (out.intercept + out.slope * r.n);
    ss += e * e;
  }
  out.residual_rms = std::sqrt(ss / m);
  out.n_min = *levels.begin();
  out.n_max = *levels.rbegin();
  if (lambda) out.theoretical = theoretical_dimension(b, *lambda);
  return out;
}

}  // namespace weierbox

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "weierbox/curve.hpp"

namespace weierbox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxCurveSamples = std::size_t{1} << 24;
constexpr std::size_t kMaxRefineCandidates = 512;
constexpr std::size_t kPolishSamples = std::size_t{1} << 20;
constexpr int kPolishEvaluations = 400;

enum Cell : std::uint8_t { kFree = 0, kCurve = 1, kOutside = 2, kBounded = 3 };

// Exact squared Euclidean distance transform of a sampled function in one
// dimension (lower envelope of parabolas). Infinite entries are not sites.
void distance_1d(const double* f, std::size_t stride, std::size_t n, double* out, std::vector<int>& v,
                 std::vector<double>& z, std::vector<double>& buf) {
  buf.resize(n);
  for (std::size_t q = 0; q < n; ++q) buf[q] = f[q * stride];
  v.resize(n);
  z.resize(n + 1);
  int k = -1;
  for (int q = 0; q < static_cast<int>(n); ++q) {
    if (buf[q] == kInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s = 0.0;
    for (;;) {
      const int p = v[k];
      s = ((buf[q] + double(q) * q) - (buf[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[k] && k > 0) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    for (std::size_t q = 0; q < n; ++q) out[q * stride] = kInf;
    return;
  }
  int j = 0;
  for (int q = 0; q < static_cast<int>(n); ++q) {
    while (z[j + 1] < q) ++j;
    const double d = q - v[j];
    out[q * stride] = d * d + buf[v[j]];
  }
}

}  // namespace

ComplementAnalysis complement_analysis(const PeriodicCurve& curve, int resolution) {
  if (resolution < 64) throw std::invalid_argument("complement_analysis needs resolution >= 64");

  const double L = lipschitz_constant(curve, 4096).value;
  const auto res = static_cast<std::size_t>(resolution);

  auto sample = [&curve](std::size_t m) {
    std::vector<Point2> pts(m);
    for (std::size_t i = 0; i < m; ++i) pts[i] = curve.eval(static_cast<double>(i) / static_cast<double>(m));
    return pts;
  };
  auto bbox = [](const std::vector<Point2>& pts) {
    Point2 lo{kInf, kInf}, hi{-kInf, -kInf};
    for (const Point2& p : pts) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    return std::pair{lo, hi};
  };

  std::vector<Point2> pts = sample(4 * res);
  auto [lo, hi] = bbox(pts);
  const double extent = std::max(hi.x - lo.x, hi.y - lo.y);

  ComplementAnalysis out;
  if (!(extent > 1e-12 * std::max(1.0, curve.sup_norm())) || L == 0.0) {
    out.center = pts.front();
    return out;
  }

  const double h = extent / static_cast<double>(res);
  // Consecutive samples at most half a cell apart: their cells are 8-adjacent.
  const auto wanted = static_cast<std::size_t>(std::ceil(2.0 * L / h));
  const std::size_t m = std::clamp(wanted, 4 * res, kMaxCurveSamples);
  if (m != pts.size()) {
    pts = sample(m);
    std::tie(lo, hi) = bbox(pts);
  }
  // Every point of the curve lies within this chord bound of some sample.
  const double thicken = L / (2.0 * static_cast<double>(m));

  constexpr std::size_t pad = 2;
  const std::size_t nx = static_cast<std::size_t>(std::ceil((hi.x - lo.x) / h)) + 2 * pad + 1;
  const std::size_t ny = static_cast<std::size_t>(std::ceil((hi.y - lo.y) / h)) + 2 * pad + 1;
  const Point2 origin{lo.x - pad * h, lo.y - pad * h};
  out.grid_width = nx;
  out.grid_height = ny;
  out.resolution_error = h * std::sqrt(2.0);

  std::vector<std::uint8_t> state(nx * ny, kFree);
  auto cell_of = [&](double v, double o, std::size_t n) {
    const auto c = static_cast<std::ptrdiff_t>(std::floor((v - o) / h));
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(c, 0, static_cast<std::ptrdiff_t>(n) - 1));
  };
  for (const Point2& p : pts) {
    const std::size_t x0 = cell_of(p.x - thicken, origin.x, nx), x1 = cell_of(p.x + thicken, origin.x, nx);
    const std::size_t y0 = cell_of(p.y - thicken, origin.y, ny), y1 = cell_of(p.y + thicken, origin.y, ny);
    for (std::size_t y = y0; y <= y1; ++y)
      for (std::size_t x = x0; x <= x1; ++x) state[y * nx + x] = kCurve;
  }

  // 4-connected fill; an 8-connected wall of curve cells blocks it.
  std::vector<std::size_t> stack;
  auto fill = [&](std::size_t seed, std::uint8_t tag, std::vector<std::size_t>* members) {
    state[seed] = tag;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      if (members) members->push_back(i);
      const std::size_t x = i % nx, y = i / nx;
      const std::size_t nbr[4] = {x > 0 ? i - 1 : i, x + 1 < nx ? i + 1 : i, y > 0 ? i - nx : i,
                                  y + 1 < ny ? i + nx : i};
      for (std::size_t j : nbr) {
        if (state[j] == kFree) {
          state[j] = tag;
          stack.push_back(j);
        }
      }
    }
  };
  for (std::size_t x = 0; x < nx; ++x) {
    if (state[x] == kFree) fill(x, kOutside, nullptr);
    if (state[(ny - 1) * nx + x] == kFree) fill((ny - 1) * nx + x, kOutside, nullptr);
  }
  for (std::size_t y = 0; y < ny; ++y) {
    if (state[y * nx] == kFree) fill(y * nx, kOutside, nullptr);
    if (state[y * nx + nx - 1] == kFree) fill(y * nx + nx - 1, kOutside, nullptr);
  }

  std::vector<std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < nx * ny; ++i) {
    if (state[i] == kFree) {
      components.emplace_back();
      fill(i, kBounded, &components.back());
    }
  }
  if (components.empty()) return out;

  // Squared distance (in cells) from every bounded cell to the nearest cell
  // outside the bounded components.
  std::vector<double> dist(nx * ny);
  for (std::size_t i = 0; i < nx * ny; ++i) dist[i] = state[i] == kBounded ? kInf : 0.0;
  {
    std::vector<int> v;
    std::vector<double> z, buf;
    for (std::size_t x = 0; x < nx; ++x) distance_1d(&dist[x], nx, ny, &dist[x], v, z, buf);
    for (std::size_t y = 0; y < ny; ++y) distance_1d(&dist[y * nx], 1, nx, &dist[y * nx], v, z, buf);
  }

  // Components no wider than the raster error cannot be told apart from
  // thickening artifacts.
  double best_raster = 0.0;
  std::vector<std::size_t> kept;
  for (const auto& comp : components) {
    double m2 = 0.0;
    for (std::size_t i : comp) m2 = std::max(m2, dist[i]);
    if (std::sqrt(m2) * h < out.resolution_error) continue;
    ++out.bounded_components;
    best_raster = std::max(best_raster, std::sqrt(m2) * h);
    kept.insert(kept.end(), comp.begin(), comp.end());
  }
  if (out.bounded_components == 0) return out;
  out.complement_connected = false;

  // Refine near-maximal cells against the curve samples themselves.
  std::vector<std::pair<double, std::size_t>> candidates;
  for (std::size_t i : kept) {
    const double d = std::sqrt(dist[i]) * h;
    if (d >= best_raster - 2.0 * h) candidates.emplace_back(d, i);
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  if (candidates.size() > kMaxRefineCandidates) candidates.resize(kMaxRefineCandidates);

  double best = -1.0;
  for (const auto& [d, i] : candidates) {
    const Point2 c{origin.x + (static_cast<double>(i % nx) + 0.5) * h,
                   origin.y + (static_cast<double>(i / nx) + 0.5) * h};
    double nearest2 = kInf;
    for (const Point2& p : pts) nearest2 = std::min(nearest2, (p - c).norm2());
    const double r = std::sqrt(nearest2) - thicken;
    if (r > best) {
      best = r;
      out.center = c;
    }
  }
  if (best <= 0.0) return out;

  // Pattern search on the clearance against a denser sampling. Steps stay
  // below the current clearance, so the centre never leaves its component.
  if (pts.size() < kPolishSamples) pts = sample(kPolishSamples);
  const double fine_thicken = L / (2.0 * static_cast<double>(pts.size()));
  auto clearance = [&](Point2 c) {
    double nearest2 = kInf;
    for (const Point2& p : pts) nearest2 = std::min(nearest2, (p - c).norm2());
    return std::sqrt(nearest2) - fine_thicken;
  };
  Point2 c = out.center;
  double f = clearance(c);
  double step = h;
  const double floor_step = 1e-9 * extent;
  int evaluations = 1;
  while (step > floor_step && evaluations < kPolishEvaluations) {
    bool moved = false;
    if (step < f) {
      for (int d = 0; d < 8 && evaluations < kPolishEvaluations; ++d) {
        const double th = kTwoPi * d / 8.0;
        const Point2 trial{c.x + step * std::cos(th), c.y + step * std::sin(th)};
        const double ft = clearance(trial);
        ++evaluations;
        if (ft > f) {
          c = trial;
          f = ft;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  out.center = c;
  out.epsilon = std::max(0.0, f);
  return out;
}

}  // namespace weierbox

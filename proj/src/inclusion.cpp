#include "weierbox/inclusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "weierbox/dims.hpp"
#include "weierbox/lattice.hpp"

namespace weierbox {

namespace {

// Uniform bucket grid answering exact nearest-neighbour distance queries.
class PointIndex {
 public:
  explicit PointIndex(const std::vector<Point2>& points) : points_(points) {
    if (points.empty()) throw std::invalid_argument("nearest-neighbour index needs points");
    lo_ = hi_ = points.front();
    for (const auto& p : points) {
      lo_.x = std::min(lo_.x, p.x);
      lo_.y = std::min(lo_.y, p.y);
      hi_.x = std::max(hi_.x, p.x);
      hi_.y = std::max(hi_.y, p.y);
    }
    const double w = std::max(hi_.x - lo_.x, 1e-300);
    const double h = std::max(hi_.y - lo_.y, 1e-300);
    cell_ = std::max(std::sqrt(2.0 * w * h / static_cast<double>(points.size())), std::max(w, h) / 4096.0);
    nx_ = static_cast<std::int64_t>(w / cell_) + 1;
    ny_ = static_cast<std::int64_t>(h / cell_) + 1;

    start_.assign(static_cast<std::size_t>(nx_ * ny_) + 1, 0);
    for (const auto& p : points) ++start_[bucket(p) + 1];
    std::partial_sum(start_.begin(), start_.end(), start_.begin());
    order_.resize(points.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < points.size(); ++i) order_[fill[bucket(points[i])]++] = i;
  }

  [[nodiscard]] double nearest(Point2 q) const {
    const std::int64_t cx = clamp_axis(q.x - lo_.x, nx_);
    const std::int64_t cy = clamp_axis(q.y - lo_.y, ny_);
    double best2 = std::numeric_limits<double>::infinity();
    const std::int64_t rmax = std::max(nx_, ny_);
    for (std::int64_t r = 0; r <= rmax; ++r) {
      for (std::int64_t ix = cx - r; ix <= cx + r; ++ix) {
        if (ix < 0 || ix >= nx_) continue;
        const bool edge = ix == cx - r || ix == cx + r;
        for (std::int64_t iy = cy - r; iy <= cy + r; iy += edge ? 1 : 2 * r) {
          if (iy >= 0 && iy < ny_) scan(ix, iy, q, best2);
          if (r == 0) break;
        }
      }
      const double reach = static_cast<double>(r) * cell_;
      if (best2 <= reach * reach) break;
    }
    return std::sqrt(best2);
  }

 private:
  [[nodiscard]] std::int64_t clamp_axis(double offset, std::int64_t n) const noexcept {
    const double c = std::floor(offset / cell_);
    if (!(c >= 0.0)) return 0;
    return std::min(static_cast<std::int64_t>(c), n - 1);
  }

  [[nodiscard]] std::size_t bucket(Point2 p) const noexcept {
    return static_cast<std::size_t>(clamp_axis(p.y - lo_.y, ny_) * nx_ + clamp_axis(p.x - lo_.x, nx_));
  }

  void scan(std::int64_t ix, std::int64_t iy, Point2 q, double& best2) const {
    const auto b = static_cast<std::size_t>(iy * nx_ + ix);
    for (std::size_t j = start_[b]; j < start_[b + 1]; ++j) best2 = std::min(best2, (points_[order_[j]] - q).norm2());
  }

  const std::vector<Point2>& points_;
  Point2 lo_, hi_;
  double cell_{1.0};
  std::int64_t nx_{1}, ny_{1};
  std::vector<std::size_t> start_;
  std::vector<std::size_t> order_;
};

void require_separating(const CurveConstants& constants) {
  if (constants.complement_connected || !(constants.epsilon > 0.0))
    throw HypothesisError("hypothesis fails: complement connected");
  if (constants.center.norm() > 2.0 * constants.resolution_error) {
    std::ostringstream os;
    os << "hypothesis fails: curve not recentered (eps-disc centre at " << constants.center.x << ", "
       << constants.center.y << ")";
    throw HypothesisError(os.str());
  }
}

// Offsets covering the closed disc of the given radius: centre plus rings.
std::vector<Point2> disc_offsets(double radius, std::size_t rings, std::size_t angles) {
  std::vector<Point2> out{{0.0, 0.0}};
  if (!(radius > 0.0)) return out;
  for (std::size_t j = 1; j <= rings; ++j) {
    const double rho = radius * static_cast<double>(j) / static_cast<double>(rings);
    for (std::size_t a = 0; a < angles; ++a) {
      const double th = kTwoPi * static_cast<double>(a) / static_cast<double>(angles);
      out.push_back({rho * std::cos(th), rho * std::sin(th)});
    }
  }
  return out;
}

double max_defect(const std::vector<Point2>& lhs_base, const std::vector<Point2>& offsets, const PointIndex& index,
                  std::uint64_t& checked) {
  double worst = 0.0;
  for (const auto& c : lhs_base)
    for (const auto& o : offsets) {
      worst = std::max(worst, index.nearest(c + o));
      ++checked;
    }
  return worst;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(InclusionKind kind) {
  switch (kind) {
    case InclusionKind::kCoveringPlain: return "covering-plain";
    case InclusionKind::kCoveringEll: return "covering-ell";
    case InclusionKind::kDiscInImagePlain: return "disc-in-image-plain";
    case InclusionKind::kDiscInImageEll: return "disc-in-image-ell";
  }
  return "unknown";
}

InclusionReport verify_covering_inclusion(const PeriodicCurve& curve, const CurveConstants& constants, double lambda,
                                          const CoveringMode& mode, const CoveringSampling& sampling) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0, 1)");
  if (sampling.lhs_curve < 1 || sampling.rings < 1 || sampling.angles < 1 || sampling.rhs_s < 2 ||
      sampling.rhs_t < 2)
    throw std::invalid_argument("covering check needs a non-empty sampling grid");
  require_separating(constants);

  InclusionReport rep;
  rep.hypothesis = "epsilon = " + fmt(constants.epsilon) + " > 0";
  if (mode.ell) {
    if (mode.b < 2) throw std::invalid_argument("b must be >= 2");
    const double lhs = mode.b * lambda;
    const double rhs = constants.L / (constants.delta * (1.0 - lambda));
    if (!(lhs > rhs))
      throw HypothesisError("hypothesis fails: b*lambda > L/(Delta*(1-lambda)) needed, got " + fmt(lhs) +
                            " <= " + fmt(rhs));
    const std::string ineq = "b*lambda = " + fmt(lhs) + " > L/(Delta*(1-lambda)) = " + fmt(rhs);
    rep.kind = InclusionKind::kCoveringEll;
    rep.beta = mode.beta;
    rep.variant = "covering-ell(" + fmt(mode.beta) + ")";
    rep.hypothesis += "; " + ineq + " (Delta(phi) stands for D(phi))";
  } else {
    rep.kind = InclusionKind::kCoveringPlain;
    rep.variant = "covering-plain";
  }

  auto g = [&](double s) {
    return mode.ell ? ell_beta(curve, lambda, mode.b, mode.beta, s) : curve.eval(s);
  };

  std::vector<Point2> base(sampling.rhs_s), phi(sampling.rhs_t);
  for (std::size_t a = 0; a < sampling.rhs_s; ++a) base[a] = g(static_cast<double>(a) / sampling.rhs_s);
  for (std::size_t t = 0; t < sampling.rhs_t; ++t) phi[t] = curve.eval(static_cast<double>(t) / sampling.rhs_t) * lambda;
  double gap = 0.0;
  for (std::size_t a = 0; a < base.size(); ++a) gap = std::max(gap, distance(base[a], base[(a + 1) % base.size()]));
  for (std::size_t t = 0; t < phi.size(); ++t) gap = std::max(gap, distance(phi[t], phi[(t + 1) % phi.size()]));

  std::vector<Point2> rhs;
  rhs.reserve(base.size() * phi.size());
  for (const auto& p : base)
    for (const auto& q : phi) rhs.push_back(p + q);
  const PointIndex index(rhs);

  rep.gap_observed = gap;
  rep.tolerance = gap;
  rep.margin = sampling.margin.value_or(rep.tolerance);
  if (rep.margin < 0.0) throw std::invalid_argument("margin must be non-negative");

  std::vector<Point2> lhs_base(sampling.lhs_curve);
  for (std::size_t i = 0; i < sampling.lhs_curve; ++i) lhs_base[i] = g(static_cast<double>(i) / sampling.lhs_curve);
  const auto offsets = disc_offsets(constants.epsilon * lambda - rep.margin, sampling.rings, sampling.angles);
  rep.max_defect = max_defect(lhs_base, offsets, index, rep.points_checked);
  rep.passed = rep.max_defect <= rep.tolerance;
  return rep;
}

std::vector<InclusionReport> verify_disc_in_image(const PeriodicCurve& curve, const CurveConstants& constants,
                                                  const WeierstrassParams& params, int n,
                                                  const std::vector<std::int64_t>& ks, DiscVariant variant,
                                                  const DiscSampling& sampling) {
  if (n < 1) throw std::invalid_argument("level n must be >= 1");
  const int b = params.b();
  const std::uint64_t bn = ipow(static_cast<std::uint64_t>(b), n);
  for (const auto k : ks)
    if (k < 0 || static_cast<std::uint64_t>(k) >= bn) throw std::out_of_range("k must lie in [0, b^n - 1]");
  if (sampling.lhs_curve < 1 || sampling.rings < 1 || sampling.angles < 1)
    throw std::invalid_argument("disc check needs a non-empty sampling grid");
  if (sampling.image_samples < 2) throw std::invalid_argument("image_samples must be >= 2");
  const std::uint64_t m = IntervalSampler::lattice_size(b, sampling.image_samples);
  IntervalSampler::check_capacity(params, n, m);
  require_separating(constants);

  const double lambda = params.lambda();
  const ThresholdConstants th = solve_threshold_constants(constants.L, constants.delta, constants.epsilon);
  std::string hypothesis;
  if (variant == DiscVariant::kPlain) {
    const double lhs = b * lambda * lambda * lambda;
    if (!(lhs > th.c0))
      throw HypothesisError("hypothesis fails: b*lambda^3 > c0 needed, got " + fmt(lhs) + " <= " + fmt(th.c0));
    hypothesis = "b*lambda^3 = " + fmt(lhs) + " > c0 = " + fmt(th.c0);
  } else {
    if (!(lambda < 0.5)) throw HypothesisError("hypothesis fails: lambda < 1/2 needed, got " + fmt(lambda));
    const double lhs = b * lambda * lambda;
    if (!(lhs > th.c2))
      throw HypothesisError("hypothesis fails: b*lambda^2 > c2 needed, got " + fmt(lhs) + " <= " + fmt(th.c2));
    hypothesis = "lambda = " + fmt(lambda) + " < 1/2; b*lambda^2 = " + fmt(lhs) + " > c2 = " + fmt(th.c2) +
                 " (Delta(phi) stands for D(phi))";
  }

  IntervalSampler sampler(curve, params, n, sampling.seed);
  const double lambda_n = std::pow(lambda, n);
  const double radius = lambda_n * constants.epsilon * lambda;
  const double margin = sampling.margin.value_or(radius / static_cast<double>(sampling.rings));
  if (margin < 0.0) throw std::invalid_argument("margin must be non-negative");
  const auto offsets = disc_offsets(radius - margin, sampling.rings, sampling.angles);

  std::vector<InclusionReport> reports;
  for (const auto k : ks) {
    InclusionReport rep;
    rep.n = n;
    rep.k = k;
    rep.hypothesis = hypothesis;
    rep.margin = margin;
    const std::string where = "(" + std::to_string(n) + "," + std::to_string(k) + ")";
    if (variant == DiscVariant::kPlain) {
      rep.kind = InclusionKind::kDiscInImagePlain;
      rep.variant = "disc-in-image-plain" + where;
    } else {
      rep.kind = InclusionKind::kDiscInImageEll;
      rep.beta = static_cast<double>(k % b) / b;
      rep.variant = "disc-in-image-ell" + where;
    }

    // Right-hand side: W on the closed interval, ordered by argument.
    const auto uk = static_cast<std::uint64_t>(k);
    std::vector<std::pair<double, Point2>> image;
    image.reserve(m + 2);
    for (std::uint64_t i = 0; i < m; ++i) image.emplace_back(sampler.lattice_u(m, i), sampler.lattice_value(uk, m, i));
    if (sampler.shift() != 0) image.emplace_back(0.0, sampler.endpoint_value(uk, false));
    image.emplace_back(1.0, sampler.endpoint_value(uk, true));
    std::sort(image.begin(), image.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<Point2> rhs;
    rhs.reserve(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
      rhs.push_back(image[i].second);
      if (i > 0) rep.gap_observed = std::max(rep.gap_observed, distance(image[i - 1].second, image[i].second));
    }
    const PointIndex index(rhs);
    rep.tolerance = rep.gap_observed / 2.0 + margin;

    const Point2 anchor = w_badic(curve, params, n, k).value - curve.eval(0.0) * (lambda_n / (1.0 - lambda));
    std::vector<Point2> lhs_base(sampling.lhs_curve);
    for (std::size_t i = 0; i < sampling.lhs_curve; ++i) {
      const double s = static_cast<double>(i) / sampling.lhs_curve;
      const Point2 g = variant == DiscVariant::kPlain ? curve.eval(s) : ell_beta(curve, lambda, b, *rep.beta, s);
      lhs_base[i] = anchor + g * lambda_n;
    }
    rep.max_defect = max_defect(lhs_base, offsets, index, rep.points_checked);
    rep.passed = rep.max_defect <= rep.tolerance;
    reports.push_back(std::move(rep));
  }
  return reports;
}

InclusionReport verify_disc_in_image(const PeriodicCurve& curve, const CurveConstants& constants,
                                     const WeierstrassParams& params, int n, std::int64_t k, DiscVariant variant,
                                     const DiscSampling& sampling) {
  return verify_disc_in_image(curve, constants, params, n, std::vector<std::int64_t>{k}, variant, sampling).front();
}

}  // namespace weierbox

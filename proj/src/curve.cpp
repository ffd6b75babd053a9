#include "weierbox/curve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace weierbox {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double fractional(double s) noexcept {
  const double f = s - std::floor(s);
  // s slightly below an integer can round up to exactly 1.
  return f >= 1.0 ? 0.0 : f;
}

Point2 unit_phase(double s) noexcept {
  const double a = kTwoPi * fractional(s);
  return {std::cos(a), std::sin(a)};
}

std::vector<PolylineVertex> square_vertices(double side) {
  const double h = 0.5 * side;
  return {{0.0, {-h, -h}}, {0.25, {h, -h}}, {0.5, {h, h}}, {0.75, {-h, h}}};
}

Point2 eval_polyline(const std::vector<PolylineVertex>& v, double s) noexcept {
  if (v.size() == 1) return v.front().p;
  const auto it = std::upper_bound(v.begin(), v.end(), s,
                                   [](double value, const PolylineVertex& vx) { return value < vx.s; });
  PolylineVertex a, b;
  if (it == v.begin()) {
    a = v.back();
    a.s -= 1.0;
    b = v.front();
  } else if (it == v.end()) {
    a = v.back();
    b = v.front();
    b.s += 1.0;
  } else {
    a = *(it - 1);
    b = *it;
  }
  const double t = (s - a.s) / (b.s - a.s);
  return a.p + t * (b.p - a.p);
}

double polyline_lipschitz(const std::vector<PolylineVertex>& v) {
  if (v.size() < 2) return 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const PolylineVertex& a = v[i];
    const PolylineVertex& b = v[(i + 1) % v.size()];
    const double ds = (i + 1 == v.size()) ? (b.s + 1.0 - a.s) : (b.s - a.s);
    best = std::max(best, distance(a.p, b.p) / ds);
  }
  return best;
}

void validate_polyline(const std::vector<PolylineVertex>& v) {
  if (v.empty()) throw std::invalid_argument("polyline needs at least one vertex");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& vx = v[i];
    if (!std::isfinite(vx.s) || !std::isfinite(vx.p.x) || !std::isfinite(vx.p.y))
      throw std::invalid_argument("polyline vertex " + std::to_string(i) + " is not finite");
    if (vx.s < 0.0 || vx.s >= 1.0)
      throw std::invalid_argument("polyline vertex " + std::to_string(i) + " has s outside [0,1)");
    if (i > 0 && !(vx.s > v[i - 1].s))
      throw std::invalid_argument("polyline s values must be strictly increasing (vertex " +
                                  std::to_string(i) + ")");
  }
}

double cross(Point2 o, Point2 a, Point2 b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Rotating calipers over a counter-clockwise hull.
double hull_diameter(const std::vector<Point2>& h) {
  const std::size_t n = h.size();
  if (n < 2) return 0.0;
  if (n == 2) return distance(h[0], h[1]);
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ni = (i + 1) % n;
    const Point2 edge = h[ni] - h[i];
    for (;;) {
      const std::size_t nj = (j + 1) % n;
      const Point2 next = h[nj] - h[j];
      if (edge.x * next.y - edge.y * next.x > 0.0) {
        j = nj;
      } else {
        break;
      }
    }
    best = std::max({best, distance(h[i], h[j]), distance(h[ni], h[j])});
  }
  return best;
}

}  // namespace

PeriodicCurve::PeriodicCurve(CurveShape shape, Point2 shift) : shape_(std::move(shape)), shift_(shift) {
  std::visit(Overloaded{
                 [](const UnitCircle&) {},
                 [](const Ellipse& e) {
                   if (!std::isfinite(e.rx) || !std::isfinite(e.ry))
                     throw std::invalid_argument("ellipse radii must be finite");
                 },
                 [](const SquareLoop& q) {
                   if (!std::isfinite(q.side) || q.side < 0.0)
                     throw std::invalid_argument("square side must be finite and non-negative");
                 },
                 [](const Polyline& p) { validate_polyline(p.vertices); },
                 [](const Counterexample& c) {
                   if (c.b < 2) throw std::invalid_argument("counterexample needs b >= 2");
                   if (!(c.lambda > 1.0 / c.b && c.lambda < 1.0))
                     throw std::invalid_argument("counterexample needs 1/b < lambda < 1");
                   if (c.truncation < 1) throw std::invalid_argument("counterexample needs truncation >= 1");
                 },
             },
             shape_);
}

PeriodicCurve PeriodicCurve::unit_circle() { return PeriodicCurve(UnitCircle{}); }
PeriodicCurve PeriodicCurve::ellipse(double rx, double ry) { return PeriodicCurve(Ellipse{rx, ry}); }
PeriodicCurve PeriodicCurve::square_loop(double side) { return PeriodicCurve(SquareLoop{side}); }
PeriodicCurve PeriodicCurve::polyline(std::vector<PolylineVertex> vertices) {
  return PeriodicCurve(Polyline{std::move(vertices)});
}
PeriodicCurve PeriodicCurve::constant(Point2 value) { return polyline({{0.0, value}}); }

Point2 PeriodicCurve::eval(double s) const noexcept {
  const double u = fractional(s);
  const Point2 base = std::visit(
      Overloaded{
          [u](const UnitCircle&) { return unit_phase(u); },
          [u](const Ellipse& e) {
            const Point2 c = unit_phase(u);
            return Point2{e.rx * c.x, e.ry * c.y};
          },
          [u](const SquareLoop& q) {
            const double h = 0.5 * q.side;
            const double t = 4.0 * u;
            const int edge = std::min(3, static_cast<int>(t));
            const double f = t - edge;
            switch (edge) {
              case 0: return Point2{-h + 2.0 * h * f, -h};
              case 1: return Point2{h, -h + 2.0 * h * f};
              case 2: return Point2{h - 2.0 * h * f, h};
              default: return Point2{-h, h - 2.0 * h * f};
            }
          },
          [u](const Polyline& p) { return eval_polyline(p.vertices, u); },
          [u](const Counterexample& c) {
            // b * u is reduced as an integer multiple before the phase.
            const double bu = static_cast<double>(c.b) * u;
            return unit_phase(u) - c.lambda * unit_phase(bu - std::floor(bu));
          },
      },
      shape_);
  return base - shift_;
}

std::string PeriodicCurve::kind_name() const {
  return std::visit(Overloaded{
                        [](const UnitCircle&) { return std::string("unit-circle"); },
                        [](const Ellipse&) { return std::string("ellipse"); },
                        [](const SquareLoop&) { return std::string("square-loop"); },
                        [](const Polyline&) { return std::string("polyline"); },
                        [](const Counterexample&) { return std::string("counterexample"); },
                    },
                    shape_);
}

std::optional<double> PeriodicCurve::analytic_lipschitz() const {
  return std::visit(Overloaded{
                        [](const UnitCircle&) -> std::optional<double> { return kTwoPi; },
                        [](const Ellipse& e) -> std::optional<double> {
                          return kTwoPi * std::max(std::abs(e.rx), std::abs(e.ry));
                        },
                        [](const SquareLoop& q) -> std::optional<double> { return 4.0 * q.side; },
                        [](const Polyline& p) -> std::optional<double> {
                          return polyline_lipschitz(p.vertices);
                        },
                        // |phi'| = 2 pi |1 - lambda b e^{2 pi i (b-1) s}| peaks at 2 pi (1 + lambda b).
                        [](const Counterexample& c) -> std::optional<double> {
                          return kTwoPi * (1.0 + c.lambda * c.b);
                        },
                    },
                    shape_);
}

double PeriodicCurve::sup_norm() const {
  const double shift = shift_.norm();
  const auto max_vertex = [this](const std::vector<PolylineVertex>& v) {
    double m = 0.0;
    for (const auto& vx : v) m = std::max(m, (vx.p - shift_).norm());
    return m;
  };
  return std::visit(Overloaded{
                        [&](const UnitCircle&) { return 1.0 + shift; },
                        [&](const Ellipse& e) { return std::max(std::abs(e.rx), std::abs(e.ry)) + shift; },
                        [&](const SquareLoop& q) { return max_vertex(square_vertices(q.side)); },
                        [&](const Polyline& p) { return max_vertex(p.vertices); },
                        [&](const Counterexample& c) { return 1.0 + c.lambda + shift; },
                    },
                    shape_);
}

std::vector<double> PeriodicCurve::breakpoints() const {
  if (const auto* p = std::get_if<Polyline>(&shape_)) {
    std::vector<double> out;
    out.reserve(p->vertices.size());
    for (const auto& v : p->vertices) out.push_back(v.s);
    return out;
  }
  if (std::holds_alternative<SquareLoop>(shape_)) return {0.0, 0.25, 0.5, 0.75};
  return {};
}

PeriodicCurve recenter(const PeriodicCurve& curve, Point2 z0) {
  return PeriodicCurve(curve.shape(), curve.shift() + z0);
}

PeriodicCurve make_counterexample_curve(int b, double lambda, int truncation) {
  return PeriodicCurve(Counterexample{b, lambda, truncation});
}

Point2 ell_beta(const PeriodicCurve& curve, double lambda, int b, double beta, double s) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("ell_beta needs 0 < lambda < 1");
  if (b < 2) throw std::invalid_argument("ell_beta needs b >= 2");
  return curve.eval(s) + (curve.eval(beta + s / b) - curve.eval(beta)) * (1.0 / lambda);
}

PeriodicCurve read_polyline(std::istream& in) {
  std::vector<PolylineVertex> vertices;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    PolylineVertex v;
    std::string extra;
    if (!(fields >> v.s >> v.p.x >> v.p.y) || (fields >> extra))
      throw std::runtime_error("polyline line " + std::to_string(line_no) + ": expected `s x y`");
    vertices.push_back(v);
  }
  try {
    return PeriodicCurve::polyline(std::move(vertices));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("polyline: ") + e.what());
  }
}

PeriodicCurve load_polyline_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open polyline file " + path.string());
  return read_polyline(in);
}

double sampled_lipschitz(const PeriodicCurve& curve, std::size_t samples) {
  const std::size_t n = std::bit_ceil(std::max<std::size_t>(samples, 2));
  std::vector<Point2> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = curve.eval(static_cast<double>(i) / static_cast<double>(n));

  double best = 0.0;
  for (std::size_t step = 1; step <= n / 2; step *= 2) {
    const double h = static_cast<double>(step) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, distance(pts[i], pts[(i + step) % n]) / h);
  }
  auto bp = curve.breakpoints();
  for (std::size_t i = 0; i + 1 < bp.size(); ++i)
    best = std::max(best, distance(curve.eval(bp[i]), curve.eval(bp[i + 1])) / (bp[i + 1] - bp[i]));
  if (bp.size() >= 2) {
    const double h = bp.front() + 1.0 - bp.back();
    best = std::max(best, distance(curve.eval(bp.back()), curve.eval(bp.front())) / h);
  }
  return best;
}

Estimate lipschitz_constant(const PeriodicCurve& curve, std::size_t samples) {
  if (const auto analytic = curve.analytic_lipschitz()) return {*analytic, 0.0, true};
  return {sampled_lipschitz(curve, samples), std::numeric_limits<double>::infinity(), false};
}

Estimate oscillation(const PeriodicCurve& curve, std::size_t samples) {
  samples = std::max<std::size_t>(samples, 2);
  std::vector<Point2> pts;
  pts.reserve(samples + 8);
  for (std::size_t i = 0; i < samples; ++i)
    pts.push_back(curve.eval(static_cast<double>(i) / static_cast<double>(samples)));
  for (double s : curve.breakpoints()) pts.push_back(curve.eval(s));

  Estimate out;
  out.value = hull_diameter(convex_hull(std::move(pts)));
  // The hull of a polygonal image is the hull of its corners.
  const bool polygonal = std::holds_alternative<Polyline>(curve.shape()) ||
                         std::holds_alternative<SquareLoop>(curve.shape());
  if (polygonal) {
    out.exact = true;
  } else {
    out.error_bound = 2.0 * lipschitz_constant(curve, samples).value / static_cast<double>(samples);
  }
  return out;
}

CurveConstants compute_constants(const PeriodicCurve& curve, int resolution, std::size_t samples) {
  CurveConstants c;
  c.L = lipschitz_constant(curve, samples).value;
  c.delta = oscillation(curve, samples).value;
  const ComplementAnalysis ca = complement_analysis(curve, resolution);
  c.epsilon = ca.epsilon;
  c.center = ca.center;
  c.complement_connected = ca.complement_connected;
  c.resolution_error = ca.resolution_error;
  return c;
}

}  // namespace weierbox

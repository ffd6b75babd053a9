#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "weierbox/geometry.hpp"

namespace weierbox {

// Shapes a periodic curve can take. Every shape is evaluated on s in [0, 1)
// and extended with period 1.

/// phi(s) = (cos 2 pi s, sin 2 pi s)
struct UnitCircle {};

/// phi(s) = (rx cos 2 pi s, ry sin 2 pi s); ry = 0 gives a doubly traversed segment.
struct Ellipse {
  double rx{1.0};
  double ry{1.0};
};

/// Boundary of the axis-aligned square of the given side, centered at the
/// origin, traversed counter-clockwise at constant speed 4 * side starting
/// from the lower-left corner.
struct SquareLoop {
  double side{1.0};
};

struct PolylineVertex {
  double s{0.0};
  Point2 p;
};

/// Piecewise-linear interpolation of (s, point) pairs with s strictly
/// increasing in [0, 1); the last vertex joins the first at s + 1.
/// A single vertex gives a constant curve.
struct Polyline {
  std::vector<PolylineVertex> vertices;
};

/// phi(s) = W0(s) - lambda W0(b s) with W0(s) = exp(2 pi i s). Its
/// Weierstrass-type sum telescopes back to W0.
struct Counterexample {
  int b{2};
  double lambda{0.5};
  int truncation{1};
};

using CurveShape = std::variant<UnitCircle, Ellipse, SquareLoop, Polyline, Counterexample>;

/// A Z-periodic Lipschitz map R -> R^2. Immutable value type.
class PeriodicCurve {
 public:
  static PeriodicCurve unit_circle();
  static PeriodicCurve ellipse(double rx, double ry);
  static PeriodicCurve square_loop(double side);
  static PeriodicCurve polyline(std::vector<PolylineVertex> vertices);
  static PeriodicCurve constant(Point2 value);

  explicit PeriodicCurve(CurveShape shape, Point2 shift = {});

  /// phi(s - floor(s)) minus the recentering shift.
  [[nodiscard]] Point2 eval(double s) const noexcept;
  [[nodiscard]] Point2 operator()(double s) const noexcept { return eval(s); }

  [[nodiscard]] const CurveShape& shape() const noexcept { return shape_; }
  /// Point subtracted from every evaluation (see recenter()).
  [[nodiscard]] Point2 shift() const noexcept { return shift_; }
  [[nodiscard]] std::string kind_name() const;

  /// Closed-form Lipschitz constant. Every built-in shape has one; polylines
  /// use their steepest segment.
  [[nodiscard]] std::optional<double> analytic_lipschitz() const;

  /// Upper bound on sup |phi|; exact for circles, squares and polylines.
  [[nodiscard]] double sup_norm() const;

  /// Parameters where the curve has corners (polyline vertices, square
  /// corners). Sampling routines always include them.
  [[nodiscard]] std::vector<double> breakpoints() const;

 private:
  CurveShape shape_;
  Point2 shift_;
};

/// The curve s -> phi(s) - z0. L and the oscillation are unchanged.
PeriodicCurve recenter(const PeriodicCurve& curve, Point2 z0);

/// phi(s) = W0(s) - lambda W0(b s). Requires b >= 2, 1/b < lambda < 1 and
/// truncation >= 1; throws std::invalid_argument otherwise.
PeriodicCurve make_counterexample_curve(int b, double lambda, int truncation);

/// l_beta(s) = phi(s) + (phi(beta + s/b) - phi(beta)) / lambda.
Point2 ell_beta(const PeriodicCurve& curve, double lambda, int b, double beta, double s);

/// Reads `s x y` triples, one per line. Blank lines and lines starting with
/// '#' are skipped. Throws std::runtime_error naming the offending line.
PeriodicCurve read_polyline(std::istream& in);
PeriodicCurve load_polyline_file(const std::filesystem::path& path);

/// A computed quantity together with the half-width of its error interval.
struct Estimate {
  double value{0.0};
  double error_bound{0.0};
  bool exact{false};
};

/// Largest chord quotient |phi(a) - phi(b)| / |a - b| seen over a nested,
/// multiscale family of pairs: grid points i / S with S = samples rounded up
/// to a power of two, separations 2^j / S, plus adjacent breakpoints. A lower
/// estimate of L, non-decreasing in `samples`.
double sampled_lipschitz(const PeriodicCurve& curve, std::size_t samples);

/// Returns the analytic constant when the shape has one, otherwise the
/// sampled lower estimate.
Estimate lipschitz_constant(const PeriodicCurve& curve, std::size_t samples);

/// Diameter of the sampled image (grid of `samples` points plus
/// breakpoints), with error bound 2 L / samples. Exact for polylines.
Estimate oscillation(const PeriodicCurve& curve, std::size_t samples);

struct ComplementAnalysis {
  bool complement_connected{true};
  double epsilon{0.0};
  Point2 center;
  double resolution_error{0.0};
  std::size_t bounded_components{0};
  std::size_t grid_width{0};
  std::size_t grid_height{0};
};

/// Rasterizes the image of the curve, finds the unbounded complementary
/// component by flood fill from the grid border and returns the largest disc
/// inscribed in a bounded component. `resolution` is the number of cells
/// along the longer side of the bounding box; must be at least 64.
ComplementAnalysis complement_analysis(const PeriodicCurve& curve, int resolution);

struct CurveConstants {
  double L{0.0};
  double delta{0.0};
  double epsilon{0.0};
  Point2 center;
  bool complement_connected{true};
  double resolution_error{0.0};
};

CurveConstants compute_constants(const PeriodicCurve& curve, int resolution = 2048,
                                 std::size_t samples = 4096);

}  // namespace weierbox

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace weierbox {

/// A point (or vector) in the plane.
struct Point2 {
  double x{0.0};
  double y{0.0};

  constexpr Point2& operator+=(Point2 o) noexcept {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Point2& operator-=(Point2 o) noexcept {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Point2& operator*=(double s) noexcept {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Point2 operator+(Point2 a, Point2 b) noexcept { return a += b; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) noexcept { return a -= b; }
  friend constexpr Point2 operator-(Point2 a) noexcept { return {-a.x, -a.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) noexcept { return a *= s; }
  friend constexpr Point2 operator*(Point2 a, double s) noexcept { return a *= s; }
  friend constexpr bool operator==(Point2, Point2) noexcept = default;

  [[nodiscard]] double norm() const noexcept { return std::hypot(x, y); }
  [[nodiscard]] constexpr double norm2() const noexcept { return x * x + y * y; }
};

inline double distance(Point2 a, Point2 b) noexcept { return (a - b).norm(); }

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Raised when a hypothesis of one of the dimension results is not met by the
/// supplied curve or parameters (connected complement, threshold inequality).
class HypothesisError : public std::domain_error {
 public:
  explicit HypothesisError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace weierbox

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "support.hpp"
#include "weierbox/curve.hpp"
#include "weierbox/series.hpp"

using namespace weierbox;
using weierbox::testing::kSeed;

namespace {

// W(m / 2^40) for odd b: b^n m mod 2^40 is exact in wrapping 64-bit arithmetic.
Point2 dyadic_oracle(const PeriodicCurve& c, double lambda, std::uint64_t b, std::uint64_t m, int terms) {
  constexpr std::uint64_t mask = (std::uint64_t{1} << 40) - 1;
  long double x = 0, y = 0, w = 1;
  std::uint64_t r = m & mask;
  for (int n = 0; n < terms; ++n) {
    const Point2 p = c.eval(static_cast<double>(r) / static_cast<double>(mask + 1));
    x += w * p.x;
    y += w * p.y;
    w *= lambda;
    r = (r * b) & mask;
  }
  return {static_cast<double>(x), static_cast<double>(y)};
}

// W(m / b^d): the orbit reaches 0 after d steps, then the tail is phi(0) lambda^d / (1 - lambda).
Point2 badic_oracle(const PeriodicCurve& c, double lambda, std::int64_t b, std::int64_t m, int d) {
  std::int64_t den = 1;
  for (int i = 0; i < d; ++i) den *= b;
  long double x = 0, y = 0, w = 1;
  std::int64_t r = ((m % den) + den) % den;
  for (int n = 0; n < d; ++n) {
    const Point2 p = c.eval(static_cast<double>(r) / static_cast<double>(den));
    x += w * p.x;
    y += w * p.y;
    w *= lambda;
    r = (r * b) % den;
  }
  const Point2 z = c.eval(0.0);
  x += w * z.x / (1 - lambda);
  y += w * z.y / (1 - lambda);
  return {static_cast<double>(x), static_cast<double>(y)};
}

struct Triple {
  int n;
  std::int64_t k;
  int j;
};

std::vector<Triple> random_triples(std::mt19937_64& rng, int b, int count, int max_n = 6) {
  std::vector<Triple> out;
  std::uniform_int_distribution<int> level(1, max_n), digit(0, b - 1);
  for (int i = 0; i < count; ++i) {
    const int n = level(rng);
    std::uniform_int_distribution<std::int64_t> index(0, static_cast<std::int64_t>(ipow(b, n)) - 1);
    out.push_back({n, index(rng), digit(rng)});
  }
  return out;
}

}  // namespace

TEST_CASE("params validation") {
  CHECK_NOTHROW(WeierstrassParams(0.5, 2));
  CHECK_THROWS_AS(WeierstrassParams(0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(WeierstrassParams(1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(WeierstrassParams(0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(WeierstrassParams(0.5, 2, 0.0), std::invalid_argument);
  const WeierstrassParams p(0.9, 33);
  CHECK(p.gamma() == doctest::Approx(1.0 / 29.7));
  CHECK(p.contracting());
  CHECK_FALSE(WeierstrassParams(0.5, 2).contracting());
}

TEST_CASE("w_eval examples") {
  const auto circle = PeriodicCurve::unit_circle();
  const WeierstrassParams p(0.5, 2);
  const auto w = w_eval(circle, p, 0.0);
  CHECK(std::abs(w.value.x - 2.0) <= 1e-12);
  CHECK(std::abs(w.value.y) <= 1e-12);

  const WeierstrassParams q(0.7, 3);
  for (const auto& c : {PeriodicCurve::square_loop(1.0), PeriodicCurve::ellipse(2.0, 0.5)}) {
    const auto z = w_eval(c, q, 0.0).value;
    CHECK(distance(z, c.eval(0.0) * (1.0 / 0.3)) <= q.tail_tol());
  }

  std::mt19937_64 rng(kSeed);
  // 40-bit mantissas: x + 1 is exact.
  std::uniform_int_distribution<std::uint64_t> mant(0, (std::uint64_t{1} << 40) - 1);
  for (int i = 0; i < 200; ++i) {
    const double x = std::ldexp(static_cast<double>(mant(rng)), -40);
    const auto a = w_eval(circle, q, x);
    const auto b = w_eval(circle, q, x + 1.0);
    CHECK(a.tail_bound <= q.tail_tol());
    CHECK(distance(a.value, b.value) <= 2.0 * q.tail_tol() + 1e-12);
  }
}

TEST_CASE("badic_point") {
  CHECK(badic_point(2, 3, 2) == 0.75);
  CHECK(badic_point(0, 0, 7) == 0.0);
  CHECK(badic_point(3, 7, 2) == 0.875);
  CHECK(badic_point(5, 100, 3) == 100.0 / 243.0);
  CHECK_THROWS_AS(badic_point(2, 4, 2), std::out_of_range);
  CHECK_THROWS_AS(badic_point(2, -1, 2), std::out_of_range);
}

TEST_CASE("w_eval on dyadic arguments matches a wrapping-integer oracle") {
  std::mt19937_64 rng(kSeed + 1);
  std::uniform_int_distribution<std::uint64_t> mant(0, (std::uint64_t{1} << 40) - 1);
  for (const auto& [lambda, b] : std::vector<std::pair<double, int>>{{0.7, 3}, {0.9, 33}, {0.4, 5}}) {
    const WeierstrassParams p(lambda, b);
    for (const auto& c : {PeriodicCurve::unit_circle(), PeriodicCurve::square_loop(2.0)}) {
      for (int i = 0; i < 200; ++i) {
        const std::uint64_t m = mant(rng);
        const double x = std::ldexp(static_cast<double>(m), -40);
        const auto got = w_eval(c, p, x);
        const auto want = dyadic_oracle(c, lambda, static_cast<std::uint64_t>(b), m, 2000);
        CHECK(distance(got.value, want) <= got.tail_bound + 1e-11);
      }
    }
  }
}

TEST_CASE("exact rational and b-adic evaluation match a digit-shift oracle") {
  std::mt19937_64 rng(kSeed + 2);
  const auto star = testing::random_star(rng, 9);
  for (const auto& [lambda, b] : std::vector<std::pair<double, int>>{{0.7, 3}, {0.9, 33}, {0.6, 2}}) {
    const WeierstrassParams p(lambda, b);
    for (const auto& c : {PeriodicCurve::unit_circle(), star}) {
      for (int d = 0; d <= 5; ++d) {
        const auto den = static_cast<std::int64_t>(ipow(b, d));
        std::uniform_int_distribution<std::int64_t> idx(0, den - 1);
        for (int i = 0; i < 30; ++i) {
          const std::int64_t k = idx(rng);
          const Point2 want = badic_oracle(c, lambda, b, k, d);
          const auto exact = w_badic(c, p, d, k);
          CHECK(exact.tail_bound == 0.0);
          CHECK(distance(exact.value, want) <= 1e-11);
          const auto rat = w_eval_rational(c, p, static_cast<u128>(k), static_cast<u128>(den));
          CHECK(distance(rat.value, want) <= 1e-11);
        }
      }
    }
  }
}

TEST_CASE("truncation index is the smallest admissible") {
  for (const auto& [lambda, b, tol] :
       std::vector<std::tuple<double, int, double>>{{0.5, 2, 1e-12}, {0.9, 33, 1e-12}, {0.99, 2, 1e-6}, {0.3, 7, 1e-3}}) {
    const WeierstrassParams p(lambda, b, tol);
    for (double sup : {0.5, 1.0, 3.0}) {
      const int n = p.truncation_index(sup);
      CHECK(sup * std::pow(lambda, n + 1) / (1 - lambda) <= tol);
      if (n > 0) CHECK(sup * std::pow(lambda, n) / (1 - lambda) > tol);
    }
  }
  CHECK(WeierstrassParams(0.5, 2).truncation_index(0.0) == 0);
}

TEST_CASE("residual examples") {
  const auto circle = PeriodicCurve::unit_circle();
  const WeierstrassParams p(0.9, 33);
  const double gamma = 1.0 / 29.7;
  for (int n : {1, 3, 5}) {
    const auto r1 = residual_first_order(circle, p, n, 0, 0);
    CHECK(r1.residual.norm() <= 1e-12);
    const auto r2 = residual_second_order(circle, p, n, 0, 0);
    CHECK(r2.residual.norm() <= 1e-12);
  }
  const auto r1 = residual_first_order(circle, p, 2, 17, 5);
  CHECK(r1.bound == doctest::Approx(kTwoPi * gamma / (1 - gamma)).epsilon(1e-12));
  CHECK(std::abs(r1.bound - 0.2189) <= 5e-5);
  const auto r2 = residual_second_order(circle, p, 2, 17, 5);
  CHECK(r2.bound == doctest::Approx(kTwoPi * gamma * gamma / (1 - gamma)).epsilon(1e-12));
  CHECK(std::abs(r2.bound - 0.00737) <= 5e-6);

  const auto flat = PeriodicCurve::constant({1.0, -1.0});
  const WeierstrassParams q(0.7, 3);
  for (const auto& [n, k, j] : std::vector<Triple>{{1, 2, 1}, {3, 20, 2}}) {
    const auto a = residual_first_order(flat, q, n, k, j);
    CHECK(a.residual.norm() <= 1e-12);
    CHECK(a.bound == 0.0);
    CHECK(residual_second_order(flat, q, n, k, j).residual.norm() <= 1e-12);
  }

  CHECK_THROWS_AS(residual_first_order(circle, p, 0, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(residual_first_order(circle, p, 2, 33 * 33, 0), std::out_of_range);
  CHECK_THROWS_AS(residual_first_order(circle, p, 2, 0, 33), std::out_of_range);
  CHECK_THROWS_AS(residual_second_order(circle, WeierstrassParams(0.5, 2), 1, 0, 1), std::invalid_argument);
}

TEST_CASE("residual inequalities on random triples") {
  std::mt19937_64 rng(kSeed + 3);
  const auto star = testing::random_star(rng, 10);
  struct Case {
    PeriodicCurve curve;
    double lambda;
    int b;
  };
  const std::vector<Case> cases{{PeriodicCurve::unit_circle(), 0.9, 33},
                                {PeriodicCurve::square_loop(1.0), 0.7, 3},
                                {star, 0.6, 5},
                                {PeriodicCurve::unit_circle(), 0.8, 2}};
  for (const auto& c : cases) {
    const WeierstrassParams p(c.lambda, c.b);
    for (const auto& t : random_triples(rng, c.b, 1000)) {
      const auto r1 = residual_first_order(c.curve, p, t.n, t.k, t.j);
      const auto r2 = residual_second_order(c.curve, p, t.n, t.k, t.j);
      const double slack = 2.0 * p.tail_tol() / std::pow(c.lambda, t.n);
      CHECK(r1.slack == doctest::Approx(slack));
      CHECK(r1.residual.norm() <= r1.bound + slack);
      CHECK(r2.residual.norm() <= r2.bound + slack);
    }
  }
}

TEST_CASE("second order refines first order") {
  const auto circle = PeriodicCurve::unit_circle();
  const WeierstrassParams p(0.9, 33);
  std::mt19937_64 rng(kSeed + 4);
  double first = 0.0, second = 0.0;
  const auto triples = random_triples(rng, 33, 1000);
  for (const auto& t : triples) {
    first += residual_first_order(circle, p, t.n, t.k, t.j).residual.norm();
    second += residual_second_order(circle, p, t.n, t.k, t.j).residual.norm();
  }
  CHECK(second / triples.size() <= first / triples.size());
}

TEST_CASE("holder data") {
  const auto circle = PeriodicCurve::unit_circle();
  CHECK(holder_data(circle, WeierstrassParams(0.5, 2)).alpha == doctest::Approx(1.0));
  CHECK(holder_data(circle, WeierstrassParams(0.9, 33)).alpha == doctest::Approx(std::log(1.0 / 0.9) / std::log(33.0)));
  CHECK(std::abs(holder_data(circle, WeierstrassParams(0.9, 33)).alpha - 0.030137) <= 5e-6);
  CHECK(std::abs(holder_data(circle, WeierstrassParams(0.7, 3)).alpha - 0.3247) <= 5e-5);
  const auto h = holder_data(circle, WeierstrassParams(0.7, 3));
  CHECK(h.c_holder == doctest::Approx(kTwoPi / (0.7 * 3 - 1) + 2.0 / 0.3));
  CHECK(h.alpha > 0.0);
  CHECK(h.alpha < 1.0);
  CHECK(h.c_holder > 0.0);
}

TEST_CASE("sampled Holder modulus") {
  std::mt19937_64 rng(kSeed + 5);
  const auto star = testing::random_star(rng, 8);
  struct Case {
    PeriodicCurve curve;
    double lambda;
    int b;
  };
  const std::vector<Case> cases{{PeriodicCurve::unit_circle(), 0.7, 3},
                                {PeriodicCurve::square_loop(1.0), 0.6, 5},
                                {star, 0.8, 4},
                                {PeriodicCurve::unit_circle(), 0.9, 33}};
  std::uniform_real_distribution<double> unit(0.0, 1.0), scale(-7.0, 0.0);
  for (const auto& c : cases) {
    const WeierstrassParams p(c.lambda, c.b);
    const auto h = holder_data(c.curve, p);
    for (int i = 0; i < 2500; ++i) {
      const double x = unit(rng);
      const double y = x + (unit(rng) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, scale(rng));
      const double gap = std::abs(x - y);
      const double lhs = distance(w_eval(c.curve, p, x).value, w_eval(c.curve, p, y).value);
      CHECK(lhs <= h.c_holder * std::pow(gap, h.alpha) + 2.0 * p.tail_tol());
    }
  }
}

TEST_CASE("telescoping counterexample reproduces the circle") {
  std::mt19937_64 rng(kSeed + 6);
  std::uniform_real_distribution<double> unit(-1.0, 2.0);
  for (const auto& [b, lambda] : std::vector<std::pair<int, double>>{{2, 0.8}, {3, 0.5}, {5, 0.95}}) {
    const auto phi = make_counterexample_curve(b, lambda, 1);
    const WeierstrassParams p(lambda, b);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = unit(rng);
      const Point2 w0{std::cos(kTwoPi * x), std::sin(kTwoPi * x)};
      worst = std::max(worst, distance(w_eval(phi, p, x).value, w0));
    }
    CHECK(worst <= 3.0 * p.tail_tol());
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>

#include "support.hpp"
#include "weierbox/inclusion.hpp"
#include "weierbox/report.hpp"

using namespace weierbox;

namespace {

const CurveConstants& circle_constants() {
  static const CurveConstants k = compute_constants(PeriodicCurve::unit_circle());
  return k;
}

std::string hypothesis_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const HypothesisError& e) {
    return e.what();
  }
  return "";
}

CoveringSampling small_covering(std::size_t grid) {
  CoveringSampling s;
  s.lhs_curve = 128;
  s.rings = 6;
  s.angles = 24;
  s.rhs_s = grid;
  s.rhs_t = grid;
  return s;
}

}  // namespace

TEST_CASE("covering, unit circle: annulus geometry") {
  const auto circle = PeriodicCurve::unit_circle();
  const auto& k = circle_constants();
  for (double lambda : {0.2, 0.5, 0.9}) {
    const auto rep = verify_covering_inclusion(circle, k, lambda, CoveringMode::plain());
    // Grid neighbours on the outer circle sit 2 sin(pi / 1024) apart; the lambda-scaled ones are closer.
    const double spacing = 2.0 * std::sin(M_PI / 1024.0);
    CHECK(rep.gap_observed == doctest::Approx(spacing).epsilon(1e-9));
    CHECK(rep.tolerance == rep.gap_observed);
    CHECK(rep.margin == rep.tolerance);
    CHECK(rep.passed);
    CHECK(rep.max_defect <= spacing);
    CHECK(rep.points_checked > 0);
    CHECK(rep.kind == InclusionKind::kCoveringPlain);
    CHECK(rep.variant == "covering-plain");
  }
}

TEST_CASE("covering holds for other separating loops") {
  const auto square = PeriodicCurve::square_loop(1.0);
  const auto ks = compute_constants(square);
  REQUIRE(ks.center.norm() <= 2.0 * ks.resolution_error);
  for (double lambda : {0.3, 0.7}) CHECK(verify_covering_inclusion(square, ks, lambda, CoveringMode::plain()).passed);
}

TEST_CASE("covering errors") {
  const auto flat = PeriodicCurve::constant({0.0, 0.0});
  const auto kf = compute_constants(flat);
  CHECK(hypothesis_message([&] { verify_covering_inclusion(flat, kf, 0.5, CoveringMode::plain()); }) ==
        "hypothesis fails: complement connected");

  const auto circle = PeriodicCurve::unit_circle();
  // b lambda = 29.7 against L / (Delta (1 - lambda)) = 2 pi / 0.2 = 31.4.
  const auto msg = hypothesis_message(
      [&] { verify_covering_inclusion(circle, circle_constants(), 0.9, CoveringMode::ell_mode(0.0, 33)); });
  CHECK(msg.find("b*lambda > L/(Delta*(1-lambda)) needed") != std::string::npos);

  const PeriodicCurve off(UnitCircle{}, {-0.3, 0.2});
  const auto koff = compute_constants(off);
  CHECK(hypothesis_message([&] { verify_covering_inclusion(off, koff, 0.5, CoveringMode::plain()); })
            .find("not recentered") != std::string::npos);
  const auto moved = recenter(off, koff.center);
  auto kmoved = koff;
  kmoved.center = {0.0, 0.0};
  CHECK(verify_covering_inclusion(moved, kmoved, 0.5, CoveringMode::plain(), small_covering(512)).passed);

  CHECK_THROWS_AS(verify_covering_inclusion(circle, circle_constants(), 1.0, CoveringMode::plain()),
                  std::invalid_argument);
}

TEST_CASE("covering, ell mode") {
  const auto circle = PeriodicCurve::unit_circle();
  // b lambda = 8 > 2 pi / (2 * 0.5) = 6.28.
  for (double beta : {0.0, 0.25, 0.6}) {
    const auto rep = verify_covering_inclusion(circle, circle_constants(), 0.5, CoveringMode::ell_mode(beta, 16));
    CHECK(rep.passed);
    CHECK(rep.kind == InclusionKind::kCoveringEll);
    REQUIRE(rep.beta.has_value());
    CHECK(*rep.beta == beta);
    CHECK(rep.hypothesis.find("b*lambda") != std::string::npos);
  }
}

TEST_CASE("refining the right-hand grid never increases the defect") {
  const auto circle = PeriodicCurve::unit_circle();
  auto coarse = small_covering(256);
  auto fine = small_covering(512);
  coarse.margin = fine.margin = 0.02;
  for (double lambda : {0.3, 0.6}) {
    const auto a = verify_covering_inclusion(circle, circle_constants(), lambda, CoveringMode::plain(), coarse);
    const auto b = verify_covering_inclusion(circle, circle_constants(), lambda, CoveringMode::plain(), fine);
    CHECK(b.max_defect <= a.max_defect);
    CHECK(b.gap_observed <= a.gap_observed);
  }
}

TEST_CASE("disc in image: hypotheses") {
  const auto circle = PeriodicCurve::unit_circle();
  const auto& k = circle_constants();
  // b lambda^3 = 1.029 against c0 = 13.09.
  CHECK(hypothesis_message([&] {
          verify_disc_in_image(circle, k, WeierstrassParams(0.7, 3), 1, 0, DiscVariant::kPlain);
        }).find("b*lambda^3 > c0 needed") != std::string::npos);
  CHECK(hypothesis_message([&] {
          verify_disc_in_image(circle, k, WeierstrassParams(0.6, 200), 1, 0, DiscVariant::kEll);
        }).find("lambda < 1/2 needed") != std::string::npos);
  CHECK(hypothesis_message([&] {
          verify_disc_in_image(circle, k, WeierstrassParams(0.4, 100), 1, 0, DiscVariant::kEll);
        }).find("b*lambda^2 > c2 needed") != std::string::npos);

  const auto flat = PeriodicCurve::constant({1.0, 1.0});
  CHECK(hypothesis_message([&] {
          verify_disc_in_image(flat, compute_constants(flat), WeierstrassParams(0.95, 40), 1, 0, DiscVariant::kPlain);
        }) == "hypothesis fails: complement connected");

  CHECK_THROWS_AS(verify_disc_in_image(circle, k, WeierstrassParams(0.95, 40), 1, 40, DiscVariant::kPlain),
                  std::out_of_range);
  CHECK_THROWS_AS(verify_disc_in_image(circle, k, WeierstrassParams(0.95, 40), 1, -1, DiscVariant::kPlain),
                  std::out_of_range);
  CHECK_THROWS_AS(verify_disc_in_image(circle, k, WeierstrassParams(0.95, 40), 0, 0, DiscVariant::kPlain),
                  std::invalid_argument);
}

TEST_CASE("disc in image: unit circle, b = 40, lambda = 0.95") {
  const auto circle = PeriodicCurve::unit_circle();
  DiscSampling s;
  s.image_samples = std::uint64_t{1} << 16;
  const auto reps =
      verify_disc_in_image(circle, circle_constants(), WeierstrassParams(0.95, 40), 1, {0, 7}, DiscVariant::kPlain, s);
  REQUIRE(reps.size() == 2);
  for (const auto& rep : reps) {
    CHECK(rep.passed);
    CHECK(rep.max_defect <= rep.tolerance);
    CHECK(rep.max_defect <= rep.margin);
    CHECK(rep.tolerance == doctest::Approx(rep.gap_observed / 2.0 + rep.margin));
    CHECK(rep.kind == InclusionKind::kDiscInImagePlain);
    CHECK(rep.n == 1);
  }
  CHECK(reps[0].variant == "disc-in-image-plain(1,0)");
  CHECK(reps[1].variant == "disc-in-image-plain(1,7)");

  const auto single =
      verify_disc_in_image(circle, circle_constants(), WeierstrassParams(0.95, 40), 1, 7, DiscVariant::kPlain, s);
  CHECK(single.max_defect == reps[1].max_defect);
  CHECK(single.passed == reps[1].passed);
}

TEST_CASE("disc in image: ell and plain agree when both hypotheses hold") {
  // lambda = 0.49, b = 128: b lambda^3 = 15.1 > c0 and b lambda^2 = 30.7 > c2.
  const auto circle = PeriodicCurve::unit_circle();
  const WeierstrassParams p(0.49, 128);
  DiscSampling s;
  s.image_samples = std::uint64_t{1} << 16;
  const std::vector<std::int64_t> ks{0, 5, 77};
  const auto plain = verify_disc_in_image(circle, circle_constants(), p, 1, ks, DiscVariant::kPlain, s);
  const auto ell = verify_disc_in_image(circle, circle_constants(), p, 1, ks, DiscVariant::kEll, s);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CHECK(plain[i].passed == ell[i].passed);
    CHECK(ell[i].kind == InclusionKind::kDiscInImageEll);
    REQUIRE(ell[i].beta.has_value());
    CHECK(*ell[i].beta == static_cast<double>(ks[i] % 128) / 128.0);
  }
}

TEST_CASE("reports serialize completely and reproduce") {
  const auto circle = PeriodicCurve::unit_circle();
  DiscSampling s;
  s.image_samples = 4096;
  s.seed = 99;
  const auto a = verify_disc_in_image(circle, circle_constants(), WeierstrassParams(0.95, 40), 1, 3, DiscVariant::kPlain, s);
  const auto b = verify_disc_in_image(circle, circle_constants(), WeierstrassParams(0.95, 40), 1, 3, DiscVariant::kPlain, s);
  CHECK(a.passed == b.passed);
  CHECK(to_json(a).dump() == to_json(b).dump());
  const auto j = to_json(a);
  for (const char* key : {"variant", "points_checked", "max_defect", "tolerance", "passed", "gap_observed", "margin",
                          "hypothesis", "n", "k"})
    CHECK(j.contains(key));

  const auto c = verify_covering_inclusion(circle, circle_constants(), 0.5, CoveringMode::ell_mode(0.25, 16),
                                           small_covering(256));
  const auto jc = to_json(c);
  for (const char* key : {"variant", "points_checked", "max_defect", "tolerance", "passed", "gap_observed", "margin",
                          "hypothesis", "beta"})
    CHECK(jc.contains(key));
  CHECK(jc["passed"].get<bool>() == (c.max_defect <= c.tolerance));
}

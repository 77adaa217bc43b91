#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

#include "kalpha/translator.hpp"
#include "support.hpp"

using namespace kalpha;
using Quad = boost::multiprecision::cpp_bin_float_quad;

TEST_CASE("translator curvature examples") {
  CHECK(translator_curvature(0.0, 0.75) == 1.0);
  CHECK(translator_curvature(0.0, 0.6) == 1.0);
  CHECK(translator_curvature(oracle::pi / 3, 0.75) == doctest::Approx(std::pow(0.5, 4.0 / 3.0)).epsilon(1e-14));
  double prev = 2.0;
  for (double th = 0.0; th < 1.5707; th += 0.01) {
    const double k = translator_curvature(th, 0.75);
    CHECK(k < prev);
    prev = k;
  }
  CHECK(translator_curvature(1.5707963, 0.75) < 1e-9);
  CHECK_THROWS_AS(translator_curvature(oracle::pi / 2, 0.75), DomainError);
  CHECK_THROWS_AS(translator_curvature(0.1, 0.5), DomainError);
}

TEST_CASE("translator equation holds pointwise") {
  for (double alpha : {0.55, 0.6, 0.75, 0.9, 1.0}) {
    for (double th = -1.5; th <= 1.5; th += 0.05) {
      CHECK(std::abs(std::pow(translator_curvature(th, alpha), alpha) - std::cos(th)) <= 1e-14);
    }
  }
}

TEST_CASE("slab width against the Gamma closed form") {
  for (double alpha : {0.55, 0.6, 2.0 / 3.0, 0.75, 0.9, 1.0}) {
    const SlabWidth w = slab_width(alpha);
    CHECK(w.discrepancy <= 1e-8);
    CHECK(w.value == doctest::Approx(oracle::slab_width_gamma(alpha)).epsilon(1e-12));
  }
  CHECK(slab_width(1.0).value == doctest::Approx(oracle::pi).epsilon(1e-14));
  CHECK_THROWS_AS(slab_width(0.5), DomainError);
}

TEST_CASE("slab width decreases in alpha") {
  double prev = HUGE_VAL;
  for (double alpha = 0.52; alpha <= 1.0; alpha += 0.02) {
    const double w = slab_width(alpha).value;
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("cap depth examples") {
  CHECK(cap_depth(0.0, 0.75) == 0.0);
  CHECK(cap_depth(oracle::pi / 3, 0.75) == doctest::Approx(3.0 * (std::cbrt(2.0) - 1.0)).epsilon(1e-14));
  for (double th : {0.1, 0.7, 1.2, 1.5}) {
    CHECK(cap_depth(th, 1.0) == doctest::Approx(-std::log(std::cos(th))).epsilon(1e-14));
  }
  CHECK_THROWS_AS(cap_depth(2.0, 0.75), DomainError);
}

TEST_CASE("cap angle examples") {
  CHECK(cap_angle(0.0, 0.75) == 0.0);
  CHECK(cap_angle(3.0 * (std::cbrt(2.0) - 1.0), 0.75) == doctest::Approx(oracle::pi / 3).epsilon(1e-14));
  for (double R : {0.5, 2.0, 10.0}) {
    CHECK(cap_angle(R, 1.0) == doctest::Approx(std::acos(std::exp(-R))).epsilon(1e-14));
  }
  CHECK_THROWS_AS(cap_angle(-1.0, 0.75), DomainError);
}

TEST_CASE("cap angle against a bisection root of the depth") {
  for (double R : {0.3, 4.0, 50.0}) {
    double lo = 0.0, hi = oracle::pi / 2 - 1e-15;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (cap_depth(mid, 0.75) < R ? lo : hi) = mid;
    }
    CHECK(cap_angle(R, 0.75) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));
  }
}

TEST_CASE("depth and angle are inverse on [0, 1000]") {
  for (double alpha : {0.55, 0.6, 0.75, 0.9, 1.0}) {
    double worst = 0.0;
    for (int k = 1; k <= 1000; ++k) {
      const Quad R(k), a(alpha);
      worst = std::max(worst, static_cast<double>(abs(cap_depth_complement(cap_angle_complement(R, a), a) - R) / R));
    }
    CHECK(worst <= 1e-12);
  }
  // Through theta itself the closed forms need extended precision once R is large.
  for (int k = 0; k <= 1000; k += 50) {
    const Quad R(k), a(0.75);
    CHECK(static_cast<double>(abs(cap_depth(cap_angle(R, a), a) - R)) <= 1e-12 * std::max(1, k));
  }
  for (int k = 0; k <= 600; k += 25) {
    const double R = k;
    if (k > 0) {
      CHECK(std::abs(cap_depth_complement(cap_angle_complement(R, 0.75), 0.75) - R) <= 1e-12 * R);
    }
  }
}

TEST_CASE("half width examples") {
  CHECK(cap_halfwidth(0.0, 0.75) == 0.0);
  for (double alpha : {0.6, 0.75, 0.9}) {
    CHECK(cap_halfwidth(oracle::pi / 2, alpha) == doctest::Approx(0.5 * slab_width(alpha).value).epsilon(1e-10));
  }
  for (double th : {0.2, 1.0, 1.5}) CHECK(cap_halfwidth(th, 1.0) == doctest::Approx(th).epsilon(1e-14));
  // Smooth range: independent Simpson quadrature.
  const double simpson = oracle::simpson([](double u) { return std::pow(std::cos(u), -1.0 / 3.0); }, 0.0, 1.0, 2000);
  CHECK(cap_halfwidth(1.0, 0.75) == doctest::Approx(simpson).epsilon(1e-12));
  CHECK(cap_halfwidth(-1.0, 0.75) == -cap_halfwidth(1.0, 0.75));
  CHECK(cap_halfwidth_complement(1e-9, 0.75) == doctest::Approx(0.5 * slab_width(0.75).value - 3.0 * std::pow(1e-9, 2.0 / 3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("width deficit bound examples and property") {
  CHECK(width_deficit_bound(oracle::pi / 3, 0.75) == doctest::Approx(3.0 * std::pow(3.0, -1.0 / 3.0)).epsilon(1e-14));
  CHECK(width_deficit_bound(oracle::pi / 2 - 1e-8, 0.75) < 1e-4);
  const double w = slab_width(0.75).value;
  CHECK(w - 2.0 * cap_halfwidth(oracle::pi / 3, 0.75) <= width_deficit_bound(oracle::pi / 3, 0.75));
  gen::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const double alpha = gen::uniform(rng, 0.52, 0.99);
    const double th = gen::uniform(rng, 0.05, 1.55);
    CHECK(slab_width(alpha).value - 2.0 * cap_halfwidth(th, alpha) <= width_deficit_bound(th, alpha));
  }
  CHECK_THROWS_AS(width_deficit_bound(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(width_deficit_bound(0.0, 0.75), DomainError);
}

TEST_CASE("profile object") {
  const TranslatorProfile p(0.75);
  CHECK(p.w_alpha() == slab_width(0.75).value);
  CHECK(p.kappa(0.3) == translator_curvature(0.3, 0.75));
  CHECK(p.X(-0.4) == -p.X(0.4));
  CHECK(p.Y(-0.4) == p.Y(0.4));
}

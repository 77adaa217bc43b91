#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "kalpha/geometry.hpp"
#include "kalpha/initcurve.hpp"
#include "kalpha/translator.hpp"
#include "support.hpp"

using namespace kalpha;

TEST_CASE("radius of curvature examples") {
  const ThetaGrid g(256);
  CHECK((radius_of_curvature(CurveState(g, Samples::Constant(256, 1.7))) - 1.7).abs().maxCoeff() <= 1e-13);
  const Samples point = point_support(g, Eigen::Vector2d(0.3, -1.2));
  CHECK(radius_of_curvature(CurveState(g, point)).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("radius of the translator cap matches cos^(-1/alpha)") {
  const double alpha = 0.75;
  double err[2];
  for (int j = 0; j < 2; ++j) {
    const ThetaGrid g(512 << j);
    Samples h = Samples::Zero(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const double th = g.node(i);
      if (std::abs(th) < 1.4) h[i] = oracle::translator_support(th, cap_halfwidth(th, alpha), cap_depth(th, alpha));
    }
    const Samples r = radius_of_curvature(CurveState(g, h));
    err[j] = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const double th = g.node(i);
      if (std::abs(th) <= 1.2) err[j] = std::max(err[j], std::abs(r[i] * std::pow(std::cos(th), 1.0 / alpha) - 1.0));
    }
  }
  const double dt = ThetaGrid(512).spacing();
  CHECK(err[0] < 4.0 * dt * dt);
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("solve_support_from_radius examples") {
  const ThetaGrid g(256);
  const SupportSolution unit = solve_support_from_radius(Samples::Ones(256), g);
  CHECK((unit.h - 1.0).abs().maxCoeff() <= 1e-13);
  // Oracle: r = 1 + 0.3 cos 2 theta, mode 2 divides by 1 - 4.
  const Samples r = 1.0 + 0.3 * (2.0 * g.nodes()).cos();
  const SupportSolution s = solve_support_from_radius(r, g);
  CHECK((s.h - (1.0 - 0.1 * (2.0 * g.nodes()).cos())).abs().maxCoeff() <= 1e-4);
  CHECK((radius_of_curvature(CurveState(g, s.h)) - r).abs().maxCoeff() <= 1e-12);
  CHECK(s.residual <= 1e-12);
  const Samples open = Samples::Ones(256) + 1e-3 * g.nodes().cos();
  CHECK_THROWS_AS(solve_support_from_radius(open, g), ClosureError);
}

TEST_CASE("area examples") {
  const ThetaGrid g(256);
  CHECK(area(CurveState(g, Samples::Ones(256))) == doctest::Approx(oracle::pi).epsilon(1e-12));
  CHECK(area(CurveState(g, Samples::Constant(256, 2.0))) == doctest::Approx(4.0 * oracle::pi).epsilon(1e-12));
  double err[2];
  for (int j = 0; j < 2; ++j) {
    const ThetaGrid gj(256 << j);
    err[j] = std::abs(area(CurveState(gj, ellipse_support(gj, 2.0, 1.0))) - 2.0 * oracle::pi);
  }
  CHECK(err[0] <= 10.0 * g.spacing() * g.spacing());
}

TEST_CASE("area agrees with the shoelace area of the reconstructed polyline") {
  gen::Rng rng(3);
  const ThetaGrid g(1024);
  for (int trial = 0; trial < 5; ++trial) {
    const CurveState s = gen::random_convex(rng, g);
    const double a = area(s);
    CHECK(oracle::shoelace(reconstruct_polyline(s)) == doctest::Approx(a).epsilon(1e-4));
  }
}

TEST_CASE("polyline examples") {
  const ThetaGrid g(256);
  const Eigen::Matrix2Xd p = reconstruct_polyline(CurveState(g, Samples::Ones(256)));
  for (Eigen::Index i = 0; i < 256; ++i) {
    CHECK(std::abs(p(0, i) - std::sin(g.node(i))) <= 1e-12);
    CHECK(std::abs(p(1, i) + std::cos(g.node(i))) <= 1e-12);
  }
  const Eigen::Vector2d c(0.7, -0.4);
  const Eigen::Matrix2Xd q = reconstruct_polyline(CurveState(g, point_support(g, c) + 1.0));
  CHECK((q.colwise() - c).colwise().norm().maxCoeff() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(reconstruct_polyline(CurveState(g, point_support(g, c))), ConvexityError);

  DoubledCapSpec spec;
  spec.R = 5.0;
  spec.grid = ThetaGrid(1024);
  const Eigen::Matrix2Xd cap = reconstruct_polyline(build_doubled_cap(spec));
  const ThetaGrid& gc = spec.grid;
  const Eigen::Index n = gc.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index m = gc.mirror(i), j = (3 * n / 2 - i) % n;
    CHECK(std::abs(cap(0, i) + cap(0, m)) <= 1e-12 * 5.0);
    CHECK(std::abs(cap(1, i) - cap(1, m)) <= 1e-12 * 5.0);
    CHECK(std::abs(cap(0, i) - cap(0, j)) <= 1e-12 * 5.0);
    CHECK(std::abs(cap(1, i) + cap(1, j)) <= 1e-12 * 5.0);
  }
}

TEST_CASE("polyline edges follow cos u / kappa(u) quadrature") {
  // Successive x differences equal the integral of cos(u) r(u) over the cell, to second order.
  const ThetaGrid g(512);
  const CurveState s(g, ellipse_support(g, 2.0, 1.0));
  const Eigen::Matrix2Xd p = reconstruct_polyline(s);
  const Samples r = radius_of_curvature(s);
  double worst = 0.0;
  for (Eigen::Index i = 0; i + 1 < g.size(); ++i) {
    const double dx = p(0, i + 1) - p(0, i);
    const double mid = 0.5 * (std::cos(g.node(i)) * r[i] + std::cos(g.node(i + 1)) * r[i + 1]) * g.spacing();
    worst = std::max(worst, std::abs(dx - mid));
  }
  CHECK(worst <= 20.0 * std::pow(g.spacing(), 3));
}

TEST_CASE("diagnostics examples") {
  const ThetaGrid g(256);
  const Diagnostics d = diagnostics(CurveState(g, Samples::Constant(256, 1.5)));
  CHECK(d.ell == doctest::Approx(1.5));
  CHECK(d.width_h == doctest::Approx(1.5));
  CHECK(d.area == doctest::Approx(oracle::pi * 2.25).epsilon(1e-12));
  CHECK(d.L == doctest::Approx(3.0));
  CHECK(d.tip_curvature == doctest::Approx(1.0 / 1.5));
  const Diagnostics e = diagnostics(CurveState(g, point_support(g, {0.0, 0.4}) + 1.0));
  CHECK(e.ell == doctest::Approx(1.4).epsilon(1e-14));
  CHECK(e.ell_minus == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("hausdorff examples") {
  const ThetaGrid g(256);
  const CurveState a(g, Samples::Ones(256));
  CHECK(hausdorff_distance(a, a) == 0.0);
  CHECK(hausdorff_distance(a, CurveState(g, Samples::Constant(256, 1.25))) == doctest::Approx(0.25));
  CHECK(hausdorff_distance(a, translated(a, {0.0, 0.3})) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("property: centred round trip through the radius") {
  gen::Rng rng(17);
  const ThetaGrid g(512);
  for (int trial = 0; trial < 20; ++trial) {
    const CurveState s = gen::random_convex(rng, g);
    const Samples back = solve_support_from_radius(radius_of_curvature(s), g).h;
    const CurveState c = centered(s);
    CHECK((back - c.h).abs().maxCoeff() <= 1e-10 * c.h.abs().maxCoeff());
  }
}

TEST_CASE("property: area is translation invariant") {
  gen::Rng rng(19);
  const ThetaGrid g(512);
  for (int trial = 0; trial < 20; ++trial) {
    const CurveState s = gen::random_convex(rng, g);
    const Eigen::Vector2d p(gen::uniform(rng, -10, 10), gen::uniform(rng, -10, 10));
    CHECK(std::abs(area(translated(s, p)) / area(s) - 1.0) <= 1e-10);
  }
}

TEST_CASE("property: polyline winds once counterclockwise") {
  gen::Rng rng(23);
  const ThetaGrid g(512);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Matrix2Xd p = reconstruct_polyline(gen::random_convex(rng, g));
    double turn = 0.0;
    const Eigen::Index n = p.cols();
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Vector2d a = p.col((i + 1) % n) - p.col(i);
      const Eigen::Vector2d b = p.col((i + 2) % n) - p.col((i + 1) % n);
      turn += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    }
    CHECK(turn == doctest::Approx(2.0 * oracle::pi).epsilon(1e-6));
    CHECK(oracle::shoelace(p) > 0.0);
  }
}

TEST_CASE("property: hausdorff distance is a metric on centred states") {
  gen::Rng rng(29);
  const ThetaGrid g(256);
  for (int trial = 0; trial < 20; ++trial) {
    const CurveState a = centered(gen::random_convex(rng, g));
    const CurveState b = centered(gen::random_convex(rng, g));
    const CurveState c = centered(gen::random_convex(rng, g));
    CHECK(hausdorff_distance(a, b) == hausdorff_distance(b, a));
    CHECK(hausdorff_distance(a, c) <= hausdorff_distance(a, b) + hausdorff_distance(b, c) + 1e-15);
    CHECK(hausdorff_distance(a, b) > 0.0);
  }
}

TEST_CASE("snapshot files round-trip exactly") {
  gen::Rng rng(31);
  const ThetaGrid g(256);
  const CurveState s(g, gen::random_convex(rng, g).h, -3.25);
  const auto path = std::filesystem::temp_directory_path() / "kalpha_test_snapshot.snap";
  write_snapshot(path, s, 0.75);
  const Snapshot back = read_snapshot(path);
  CHECK(back.alpha == 0.75);
  CHECK(back.state.t == -3.25);
  CHECK((back.state.h == s.h).all());
  std::filesystem::remove(path);
}

#pragma once

// Independent oracles and hand-rolled generators shared by the test programs.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>

#include "kalpha/flow.hpp"
#include "kalpha/geometry.hpp"
#include "kalpha/grid.hpp"

namespace oracle {

constexpr double pi = std::numbers::pi;

// Exact radius of the shrinking circle with extinction at T.
inline double circle_radius(double t, double alpha, double T) {
  return std::pow((1.0 + alpha) * (T - t), 1.0 / (1.0 + alpha));
}

// w_alpha = 2 int_0^{pi/2} cos^p with p = 1 - 1/alpha, through the Beta function.
inline double slab_width_gamma(double alpha) {
  const double p = 1.0 - 1.0 / alpha;
  return std::sqrt(pi) * std::tgamma(0.5 * (p + 1.0)) / std::tgamma(0.5 * p + 1.0);
}

// Composite Simpson rule with m (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m) {
  const double hs = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * hs);
  return s * hs / 3.0;
}

// Shoelace area of a closed polygon stored as columns.
inline double shoelace(const Eigen::Matrix2Xd& p) {
  double s = 0.0;
  const Eigen::Index n = p.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = (i + 1) % n;
    s += p(0, i) * p(1, j) - p(0, j) * p(1, i);
  }
  return 0.5 * s;
}

// Support function of the translator cap with tip at the origin, sampled at theta in (-pi/2, pi/2):
// the point with turning angle theta is (X, Y) and h = X sin theta - Y cos theta.
inline double translator_support(double theta, double X, double Y) {
  return X * std::sin(theta) - Y * std::cos(theta);
}

}  // namespace oracle

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

// r = 1 + sum_{k=2..6} (a_k cos k theta + b_k sin k theta) with sum |a_k| + |b_k| <= amp < 1, so r > 0
// and modes +-1 vanish; the body is then moved by a random offset.
inline kalpha::CurveState random_convex(Rng& rng, const kalpha::ThetaGrid& g, double amp = 0.6, double scale = 1.0) {
  double c[5][2];
  double total = 0.0;
  for (auto& ck : c) {
    ck[0] = uniform(rng, -1.0, 1.0);
    ck[1] = uniform(rng, -1.0, 1.0);
    total += std::abs(ck[0]) + std::abs(ck[1]);
  }
  kalpha::Samples r = kalpha::Samples::Ones(g.size());
  for (int k = 2; k <= 6; ++k) {
    const kalpha::Samples arg = double(k) * g.nodes();
    r += amp / total * (c[k - 2][0] * arg.cos() + c[k - 2][1] * arg.sin());
  }
  kalpha::Samples h = scale * kalpha::solve_support_from_radius(r, g).h;
  const Eigen::Vector2d p(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
  return kalpha::translated(kalpha::CurveState(g, h), p);
}

// A random body symmetric under both axis reflections: only even cosine modes.
inline kalpha::CurveState random_symmetric(Rng& rng, const kalpha::ThetaGrid& g, double amp = 0.6) {
  double c[3];
  double total = 0.0;
  for (double& ck : c) {
    ck = uniform(rng, -1.0, 1.0);
    total += std::abs(ck);
  }
  kalpha::Samples r = kalpha::Samples::Ones(g.size());
  for (int j = 0; j < 3; ++j) r += amp / total * c[j] * (double(2 * j + 2) * g.nodes()).cos();
  return kalpha::CurveState(g, kalpha::solve_support_from_radius(r, g).h);
}

}  // namespace gen

#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <string>

#include "kalpha/grid.hpp"

namespace kalpha {

/// A convex curve at one instant, stored through its support function
/// h(theta) = <gamma(theta), nu(theta)> with nu(theta) = (sin theta, -cos theta).
struct CurveState {
  ThetaGrid grid;
  Samples h;
  double t = 0.0;

  CurveState(ThetaGrid g, Samples support, double time = 0.0)
      : grid(std::move(g)), h(std::move(support)), t(time) {
    detail::require_length(grid, h, "CurveState");
  }
};

/// Scalar quantities read off a state at the distinguished angles.
struct Diagnostics {
  double ell = 0.0;            // h(pi): highest point
  double ell_minus = 0.0;      // h(0): minus the lowest point
  double width_h = 0.0;        // h(pi/2): rightmost point
  double width_h_minus = 0.0;  // h(-pi/2)
  double area = 0.0;
  double tip_curvature = 0.0;  // kappa(0)
  double L = 0.0;              // ell + ell_minus
};

/// r = h + (h_{i+1} - 2 h_i + h_{i-1}) / (4 sin^2(dtheta / 2)).
///
/// This is the second difference rescaled so that constants and the first
/// Fourier modes are treated exactly: circles have r == h, and translations
/// (modes +-1 of h) contribute nothing to r. It is also the facet length, per
/// unit angle, of the polygon circumscribed by the support lines at the nodes.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> support_radius(
    const ThetaGrid& grid, const Eigen::ArrayBase<Derived>& h) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(grid, h, "radius_of_curvature");
  const Eigen::Index n = grid.size();
  const double s = std::sin(0.5 * grid.spacing());
  const Scalar inv = Scalar(1) / Scalar(4.0 * s * s);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = h[i] + (h[(i + 1) % n] - Scalar(2) * h[i] + h[(i + n - 1) % n]) * inv;
  }
  return out;
}

Samples radius_of_curvature(const CurveState& state);

struct SupportSolution {
  Samples h;
  double residual = 0.0;  // max |r(h) - r| over the nodes
};

/// Inverts r = h_thetatheta + h mode by mode. Modes +-1 of h are set to zero.
/// Throws ClosureError when modes +-1 of r exceed 1e-8 max|r|.
SupportSolution solve_support_from_radius(const Samples& r, const ThetaGrid& grid);

/// Enclosed area, (1/2) quad(h r). Equals (1/2) quad(h^2 - h_theta^2) after
/// summation by parts; translation invariant to round-off.
double area(const CurveState& state);

/// Perimeter, quad(h).
double perimeter(const CurveState& state);

/// Points gamma_i = h nu + h_theta tau, tau = (cos theta, sin theta), as columns.
/// Throws ConvexityError if r <= 0 anywhere.
Eigen::Matrix2Xd reconstruct_polyline(const CurveState& state);

Diagnostics diagnostics(const CurveState& state);

/// Sup distance of support functions; the Hausdorff distance for convex bodies.
double hausdorff_distance(const CurveState& a, const CurveState& b);

/// Steiner point (1/pi) quad(h nu).
Eigen::Vector2d steiner_point(const CurveState& state);

/// The state moved by p: h + <p, nu>.
CurveState translated(const CurveState& state, const Eigen::Vector2d& p);

/// The state moved so that its Steiner point is the origin.
CurveState centered(const CurveState& state);

/// Support function of a point p, <p, nu(theta)>.
Samples point_support(const ThetaGrid& grid, const Eigen::Vector2d& p);

/// Support function of the ellipse x^2/a^2 + y^2/b^2 <= 1.
Samples ellipse_support(const ThetaGrid& grid, double a, double b);

struct Snapshot {
  CurveState state;
  double alpha = 0.0;
};

/// Header `theta_nodes=<n> alpha=<alpha> t=<t>`, then n lines `theta h r x y`,
/// every number at 17 significant digits.
void write_snapshot(const std::filesystem::path& path, const CurveState& state, double alpha);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace kalpha

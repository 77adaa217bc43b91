#pragma once

#include <vector>

#include "kalpha/geometry.hpp"
#include "kalpha/report.hpp"

namespace kalpha {

/// The translator cap of depth R below the x-axis, doubled by reflection,
/// with both corners rounded off by discs of radius epsilon.
struct DoubledCapSpec {
  double R = 0.0;
  double alpha = 0.75;
  double epsilon = 0.0;  // <= 0 selects the default 10 dtheta
  ThetaGrid grid{512};

  double resolved_epsilon() const { return epsilon > 0.0 ? epsilon : 10.0 * grid.spacing(); }
};

/// Where the rounded corners meet the caps.
struct CapCorner {
  double theta_R = 0.0;     // cap_angle(R): turning angle at the unrounded corner
  double theta_a = 0.0;     // turning angle where the caps hand over to the arc
  double s_a = 0.0;         // pi/2 - theta_a
  double center_x = 0.0;    // arc centre (center_x, 0), radius epsilon
};

/// Solves Y(theta_a) = R - epsilon cos(theta_a). Throws SpecError when
/// epsilon >= 1, R <= epsilon or the arc centre would not lie right of the axis.
CapCorner cap_corner(double R, double alpha, double epsilon);

/// Support function of the rounded doubled cap, sampled exactly at the nodes.
///
/// On the caps h = X sin(phi) + (R - Y) cos(phi) with phi the angle to the
/// nearer tip, on the arcs h = center_x |sin theta| + epsilon. The body is the
/// opening of the doubled cap by an epsilon disc, so it stays inside the slab,
/// its radius of curvature is epsilon on the arcs, and it is symmetric under
/// theta -> -theta and theta -> pi - theta bit for bit. t = 0.
/// Throws ResolutionError when fewer than 8 nodes fall on each cap.
CurveState build_doubled_cap(const DoubledCapSpec& spec);

/// The same support function at any angle, for normals off the grid.
class DoubledCapSupport {
 public:
  explicit DoubledCapSupport(const DoubledCapSpec& spec);
  double operator()(double theta) const;

 private:
  double R_, alpha_, eps_, half_w_;
  CapCorner corner_;
};

/// Exact area enclosed by the unrounded doubled cap,
/// 2 w R - 4 int_0^R tail(pi/2 - theta(y)) dy, by quadrature.
double doubled_cap_area(double R, double alpha);

/// Fits of the initial-data deficits over a ladder of depths:
///   h deficit  w/2 - h(pi/2)      against R, expected exponent (1-2a)/(1-a),
///   area deficit 2wR - A         through its increments dA/dR, expected (2-3a)/(1-a).
/// Needs at least 3 states, else UsageError. alpha = 1 is reported as exempt.
std::vector<CheckReport> initial_data_checks(const std::vector<CurveState>& states,
                                             const std::vector<DoubledCapSpec>& specs);

}  // namespace kalpha

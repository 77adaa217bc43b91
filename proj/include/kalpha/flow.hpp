#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kalpha/geometry.hpp"

namespace kalpha {

enum class Scheme { Euler, Midpoint };

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

struct FlowParams {
  double alpha = 0.75;
  double cfl_safety = 0.4;
  double area_stop_fraction = 1e-3;
  long snapshot_stride = 0;  // 0: keep only the first and last states
  long diag_stride = 10;
  long max_steps = 200'000'000;
  Scheme scheme = Scheme::Euler;
  // Extra normals at pi/2 +- dtheta ratio^-k and -pi/2 +- dtheta ratio^-k, k = 1..side_levels.
  int side_levels = 0;
  double side_ratio = 1.5;

  /// Throws UsageError naming the violated range.
  void validate() const;
};

struct FlowTrace {
  double alpha = 0.0;
  std::vector<double> times;
  std::vector<Diagnostics> diags;
  std::vector<Eigen::Vector2d> steiner;  // Steiner point at each recorded time
  std::vector<CurveState> snapshots;
  double T_extinction = 0.0;
  Eigen::Vector2d extinction_point = Eigen::Vector2d::Zero();
  double fit_residual = 0.0;   // max residual of the extinction fit, in time units
  double initial_area = 0.0;
  double min_dt = 0.0;
  double max_dt = 0.0;
  long steps = 0;
  long rejections = 0;
  bool complete = false;       // area target reached before max_steps
  bool renormalized = false;
};

/// cfl dtheta^2 / (2 alpha max kappa^(alpha+1)). Throws ConvexityError if min r <= 0.
double stable_dt(const CurveState& state, const FlowParams& params);

/// One explicit step of h_t = -r^-alpha. Throws StepRejected when the result,
/// or the midpoint stage, has r <= 0 somewhere.
CurveState step(const CurveState& state, double dt, const FlowParams& params);

/// Support function at an arbitrary angle, used to seed the side normals.
using SupportFunction = std::function<double(double)>;

/// Flows until the area drops below area_stop_fraction of the initial area,
/// then extrapolates the extinction time from A^((1+alpha)/2) being linear in t
/// over the last decade of recorded areas and shifts time and space so that
/// extinction happens at t = 0 at the origin.
///
/// With side_levels > 0 the support lines at the grid nodes are joined by
/// geometrically graded extra normals next to +-pi/2, seeded from `support`,
/// and the flow runs on that polygon: r_i is the facet length over
/// tan(d-/2) + tan(d+/2), which reduces to support_radius on the plain grid.
/// A level is dropped, innermost first, as soon as a node it touches would
/// limit the step more than the plain nodes do. Snapshots and diagnostics are
/// reported on the grid nodes; area is that of the refined polygon.
/// Throws SchemeError after 40 consecutive rejections or on area growth,
/// UsageError when side_levels > 0 and no support function is given.
FlowTrace flow_to_extinction(const CurveState& state0, const FlowParams& params,
                             const SupportFunction& support = {});

/// Least squares extinction time and point from recorded areas and Steiner
/// points; fills T_extinction, extinction_point, fit_residual.
void fit_extinction(FlowTrace& trace);

/// Shifts times by -T_extinction and positions by -extinction_point.
void renormalize(FlowTrace& trace);

/// Max over consecutive snapshot pairs of |kappa_t - kappa^2 (kappa^alpha)_thth
/// - kappa^(alpha+2)| / max kappa^(alpha+2), restricted to nodes with |theta|
/// or pi - |theta| inside `window` when given. Needs 2 snapshots.
double kappa_gauge_residual(const FlowTrace& trace, std::optional<double> window = std::nullopt);

/// kappa = 1/r at the nodes.
Samples curvature(const CurveState& state);

/// CSV with header t,ell,ell_minus,h,area,kappa_tip,L.
void write_trace_csv(const std::filesystem::path& path, const FlowTrace& trace);
void read_trace_csv(const std::filesystem::path& path, FlowTrace& trace);

/// Trace CSV, snapshot files snap_<index>_t=<t>.snap and meta.cfg in `dir`.
void write_trace_dir(const std::filesystem::path& dir, const FlowTrace& trace);
FlowTrace read_trace_dir(const std::filesystem::path& dir);

}  // namespace kalpha

#pragma once

#include <filesystem>
#include <numbers>
#include <optional>
#include <vector>

#include "kalpha/flow.hpp"
#include "kalpha/report.hpp"

namespace kalpha {

/// A ladder of doubled caps flowed to extinction at one alpha.
struct SweepSpec {
  double alpha = 0.75;
  std::vector<double> R_values;
  double epsilon = 0.0;  // <= 0: 10 dtheta
  long n = 512;
  std::vector<double> comparison_times;
  double snapshot_dt = 0.25;  // time between stored snapshots on the translating part

  ThetaGrid grid() const { return ThetaGrid(n); }
  double resolved_epsilon() const;
  /// Throws UsageError on fewer than 3 depths, decreasing depths, positive times;
  /// DomainError on alpha outside (1/2, 1].
  void validate() const;
};

/// Snapshot stride in steps giving about spec.snapshot_dt between snapshots
/// when the largest curvature is 1.
long snapshot_stride_for(const SweepSpec& spec, const FlowParams& params);

/// dtheta^2 + epsilon + dt_max, the discretization scale every margin is judged against.
double tol_disc(const SweepSpec& spec, const FlowTrace& trace);

/// Interpolates the snapshots linearly in t on h. Empty outside the stored range.
std::optional<CurveState> interpolate_snapshot(const FlowTrace& trace, double t);

struct AncientSliceSet {
  std::vector<double> times;
  std::vector<double> R_values;
  /// slices[i][k]: Steiner-centred slice at times[i] from the run with R_values[k];
  /// empty when t precedes that run's initial time.
  std::vector<std::vector<std::optional<CurveState>>> slices;
  /// distances[i][k]: Hausdorff distance between consecutive available slices at times[i].
  std::vector<std::vector<double>> distances;
  /// ell(t) and the half width h(t) per run, and their Aitken limits over the ladder.
  std::vector<std::vector<double>> ell;
  std::vector<std::vector<double>> half_width;
  std::vector<double> ell_limit;
  std::vector<double> half_width_limit;
};

/// Aitken delta-squared limit of the last three entries; the last entry when
/// fewer than three are given or the differences do not contract.
double aitken_limit(const std::vector<double>& v);

/// Builds, flows and renormalizes every depth. Runs concurrently, one flow per task;
/// results are ordered by R.
std::vector<FlowTrace> run_sweep_flows(const SweepSpec& spec, const FlowParams& params);

/// Slices at the comparison times from renormalized traces.
AncientSliceSet make_slices(const SweepSpec& spec, const std::vector<FlowTrace>& traces);

struct SweepResult {
  std::vector<FlowTrace> traces;
  AncientSliceSet slices;
  bool complete = true;  // false when any run hit max_steps
};

/// Throws IncompleteRun when any run hits max_steps.
SweepResult run_sweep(const SweepSpec& spec, const FlowParams& params);

// Checks. Every margin is a signed slack; tol is tol_disc of the run involved.

/// h(t) >= w/2 - 2 (-t)^(1-2alpha) for 5 <= -t <= 0.8 R on the largest-R run.
CheckReport check_h_asymptotics(const SweepSpec& spec, const std::vector<FlowTrace>& traces);

/// ell(t) >= -t on every run; sup (ell + t) bounded across the ladder for
/// alpha >= 2/3 (spread below 20%), growing like R^((2-3alpha)/(1-alpha)) below 2/3.
std::vector<CheckReport> check_ell_asymptotics(const SweepSpec& spec, const std::vector<FlowTrace>& traces);

/// Sup relative error of kappa against cos^(1/alpha) near the top tip at each
/// time, which must decrease as -t grows.
CheckReport check_tip_convergence(const SweepSpec& spec, const FlowTrace& trace, const std::vector<double>& times,
                                  double window = std::numbers::pi / 3);

/// kappa^alpha >= |cos theta|, quadrant monotonicity of kappa^alpha, tip speed
/// bounds and both Harnack monotonicities on one run, after the transient 10 eps^(1+alpha).
std::vector<CheckReport> check_speed_and_monotonicity(const SweepSpec& spec, const FlowTrace& trace);

/// A(t) <= 2 w (-t) and the exponent of 2 w (-t) - A(t).
std::vector<CheckReport> check_area_bounds(const SweepSpec& spec, const FlowTrace& trace);

/// x(pi/2) - x(theta) <= X(pi/2) - X(theta) for theta in [-pi/2, pi/2] on every snapshot.
CheckReport check_displacement(const SweepSpec& spec, const FlowTrace& trace);

/// Consecutive distances decrease along the ladder at every comparison time.
CheckReport check_cauchy(const SweepSpec& spec, const AncientSliceSet& slices);

/// -T_R <= R + tol and R - (-T_R) = C (1 + R^((2-3alpha)/(1-alpha))) with C within 25% of its mean.
CheckReport check_extinction_time(const SweepSpec& spec, const std::vector<FlowTrace>& traces);

/// Every check above, in a fixed order.
std::vector<CheckReport> sweep_checks(const SweepSpec& spec, const std::vector<FlowTrace>& traces,
                                      const AncientSliceSet& slices);

/// Sweep directory: sweep.cfg, R_<R>/{trace.csv, meta.cfg, snapshots/}, slices/, report.json.
void write_sweep_dir(const std::filesystem::path& dir, const SweepSpec& spec, const FlowParams& params,
                     const SweepResult& result, const std::vector<CheckReport>& reports);
void write_sweep_config(const std::filesystem::path& path, const SweepSpec& spec, const FlowParams& params);
std::pair<SweepSpec, FlowParams> read_sweep_config(const std::filesystem::path& path);
std::vector<FlowTrace> read_sweep_traces(const std::filesystem::path& dir, const SweepSpec& spec);

}  // namespace kalpha

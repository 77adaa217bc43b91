#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "kalpha/flow.hpp"
#include "kalpha/io.hpp"
#include "kalpha/report.hpp"

namespace kalpha::cli {

// Exit statuses.
constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIncomplete = 4;

struct RunConfig {
  std::string command;  // translator, construct, flow, sweep, verify, circle-oracle
  io::KeyValues values;  // every key of the command, defaults filled
  std::filesystem::path out;  // empty: print only
};

/// Parses `kalpha <command> [--config file] [--key value ...]`. Keys from the
/// config file override defaults and flags override both. Throws UsageError
/// on unknown keys, malformed numbers and out-of-range values, naming the
/// violated condition. Returns a config with an empty command when help was printed.
RunConfig parse_config(const std::vector<std::string>& args, std::ostream& out);

/// Executes a parsed config and returns the exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config then run, mapping every exception to an exit status.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Slab width by both integrals and by the Gamma closed form, the depth/angle
/// round trip on [0, 1000] and, at alpha = 1, the grim reaper closed forms.
std::vector<CheckReport> translator_checks(double alpha);

/// Circle of radius 1 flowed to extinction against rho(t) = ((1+alpha)(T-t))^(1/(1+alpha)).
struct CircleOracle {
  FlowTrace trace;  // renormalized
  double T_exact = 0.0;
  double max_radius_error = 0.0;  // relative, down to `area_floor` of the initial area
  double max_radius_error_exact_T = 0.0;  // the same with T = 1/(1+alpha) in place of the fitted T
  double area_floor = 0.01;
};
CircleOracle circle_oracle(double alpha, long n, const FlowParams& params, double area_floor = 0.01);
std::vector<CheckReport> circle_checks(const CircleOracle& oracle, double tol = 1e-3);

/// Checks that apply to any symmetric flow: area decrease, reflection symmetry
/// of the centred snapshots and the extinction fit.
std::vector<CheckReport> flow_checks(const FlowTrace& trace);

/// Relative asymmetry max |h(theta) - h(-theta)|, |h(theta) - h(pi - theta)|
/// over max |h| of the Steiner-centred state.
double reflection_asymmetry(const CurveState& state);

/// Names of the failed reports whose name starts with one of `prefixes`
/// (every report when `prefixes` is empty).
std::vector<std::string> failed_checks(const std::vector<CheckReport>& reports,
                                       const std::vector<std::string>& prefixes);

}  // namespace kalpha::cli

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace kalpha {

/// Outcome of one verification check. `margins` are signed slacks: a check
/// passes when every margin is >= -tolerance (the tolerance is recorded in
/// `fitted` under "tol_disc" when it applies).
struct CheckReport {
  std::string name;
  std::string paper_ref;  // the mathematical statement being checked
  bool pass = false;
  std::vector<double> margins;
  std::map<std::string, double> fitted;
  std::string note;
};

/// JSON array of {name, paper_ref, pass, margins, fitted}, plus `note` when non-empty.
std::string reports_to_json(const std::vector<CheckReport>& reports);
std::vector<CheckReport> reports_from_json(const std::string& text);

/// Least squares slope and intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log y against log x; entries with y <= 0 raise UsageError.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kalpha

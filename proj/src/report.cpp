#include "kalpha/report.hpp"

#include <json.hpp>

#include <cmath>

#include "kalpha/errors.hpp"

namespace kalpha {

std::string reports_to_json(const std::vector<CheckReport>& reports) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const CheckReport& r : reports) {
    nlohmann::ordered_json e;
    e["name"] = r.name;
    e["paper_ref"] = r.paper_ref;
    e["pass"] = r.pass;
    nlohmann::ordered_json margins = nlohmann::ordered_json::array();
    // JSON has no inf/nan; encode them as strings so replay stays lossless.
    for (double m : r.margins) {
      if (std::isfinite(m)) {
        margins.push_back(m);
      } else {
        margins.push_back(std::isnan(m) ? "nan" : (m > 0 ? "inf" : "-inf"));
      }
    }
    e["margins"] = margins;
    nlohmann::ordered_json fitted = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.fitted) {
      if (std::isfinite(v)) {
        fitted[k] = v;
      } else {
        fitted[k] = std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
      }
    }
    e["fitted"] = fitted;
    if (!r.note.empty()) e["note"] = r.note;
    out.push_back(e);
  }
  return out.dump(2) + "\n";
}

namespace {

double number_or_special(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  const std::string s = v.get<std::string>();
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  return std::nan("");
}

}  // namespace

std::vector<CheckReport> reports_from_json(const std::string& text) {
  std::vector<CheckReport> out;
  const nlohmann::json doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw UsageError("report: expected a JSON array");
  for (const auto& e : doc) {
    CheckReport r;
    r.name = e.at("name").get<std::string>();
    r.paper_ref = e.at("paper_ref").get<std::string>();
    r.pass = e.at("pass").get<bool>();
    for (const auto& m : e.at("margins")) r.margins.push_back(number_or_special(m));
    for (const auto& [k, v] : e.at("fitted").items()) r.fitted[k] = number_or_special(v);
    if (e.contains("note")) r.note = e.at("note").get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("fit_line: need at least 2 points");
  const double n = double(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw UsageError("fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.max_residual = std::max(f.max_residual, std::abs(y[i] - f.intercept - f.slope * x[i]));
  }
  return f;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw UsageError("fit_loglog: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly);
}

}  // namespace kalpha

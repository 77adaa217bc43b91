#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "kalpha/ancient.hpp"
#include "kalpha/errors.hpp"
#include "kalpha/io.hpp"
#include "kalpha/translator.hpp"
#include "support.hpp"

using namespace kalpha;

namespace {

SweepSpec small_spec(double alpha) {
  SweepSpec s;
  s.alpha = alpha;
  s.R_values = {10.0, 20.0, 40.0};
  s.n = 256;
  s.comparison_times = {-3.0, -5.0};
  return s;
}

FlowParams sweep_params(const SweepSpec& spec) {
  FlowParams p;
  p.alpha = spec.alpha;
  p.side_levels = 12;
  p.diag_stride = 200;
  return p;
}

// One small sweep per alpha, shared by the test cases below.
const SweepResult& small_sweep(double alpha) {
  static std::map<double, SweepResult> cache;
  auto it = cache.find(alpha);
  if (it == cache.end()) {
    const SweepSpec spec = small_spec(alpha);
    it = cache.emplace(alpha, run_sweep(spec, sweep_params(spec))).first;
  }
  return it->second;
}

const CheckReport& named(const std::vector<CheckReport>& reps, const std::string& name) {
  for (const CheckReport& r : reps) {
    if (r.name.rfind(name, 0) == 0) return r;
  }
  FAIL("no report named " << name);
  return reps.front();
}

}  // namespace

TEST_CASE("sweep validation") {
  SweepSpec s = small_spec(0.75);
  CHECK_NOTHROW(s.validate());
  s.R_values = {10.0, 20.0};
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.R_values = {20.0, 10.0, 40.0};
  CHECK_THROWS_AS(s.validate(), UsageError);
  s = small_spec(0.75);
  s.comparison_times = {-1.0, 0.5};
  CHECK_THROWS_AS(s.validate(), UsageError);
  s = small_spec(0.45);
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = small_spec(0.75);
  s.n = 130;
  CHECK_THROWS_AS(s.validate(), UsageError);
}

TEST_CASE("tol_disc and epsilon default") {
  SweepSpec s = small_spec(0.75);
  s.n = 512;
  const double dth = 2.0 * oracle::pi / 512;
  CHECK(s.resolved_epsilon() == doctest::Approx(10.0 * dth).epsilon(1e-15));
  FlowTrace tr;
  tr.max_dt = 0.003;
  CHECK(tol_disc(s, tr) == doctest::Approx(dth * dth + 10.0 * dth + 0.003).epsilon(1e-15));
  s.epsilon = 0.02;
  CHECK(tol_disc(s, tr) == doctest::Approx(dth * dth + 0.02 + 0.003).epsilon(1e-15));
}

TEST_CASE("aitken limit examples") {
  std::vector<double> v;
  for (int k = 1; k <= 5; ++k) v.push_back(3.0 + std::pow(0.5, k));
  CHECK(aitken_limit(v) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(aitken_limit({1.0, 2.0}) == 2.0);
  CHECK(aitken_limit({1.0, 2.0, 4.0}) == 4.0);
  CHECK(std::isnan(aitken_limit({})));
}

TEST_CASE("snapshot interpolation is linear in t") {
  const ThetaGrid g(128);
  FlowTrace tr;
  tr.snapshots.emplace_back(g, Samples::Constant(128, 2.0), -4.0);
  tr.snapshots.emplace_back(g, Samples::Constant(128, 1.0), -2.0);
  const auto mid = interpolate_snapshot(tr, -3.5);
  REQUIRE(mid);
  CHECK(mid->t == -3.5);
  CHECK((mid->h - 1.75).abs().maxCoeff() <= 1e-15);
  CHECK((interpolate_snapshot(tr, -2.0)->h == 1.0).all());
  CHECK_FALSE(interpolate_snapshot(tr, -5.0));
  CHECK_FALSE(interpolate_snapshot(tr, 0.0));
}

TEST_CASE("snapshot stride targets snapshot_dt") {
  SweepSpec s = small_spec(0.75);
  FlowParams p;
  const double dth = s.grid().spacing();
  const double dt = 0.4 * dth * dth / 1.5;
  CHECK(snapshot_stride_for(s, p) == std::lround(0.25 / dt));
  s.snapshot_dt = 1e-12;
  CHECK(snapshot_stride_for(s, p) == 1);
}

TEST_CASE("small alpha = 3/4 ladder") {
  const SweepSpec spec = small_spec(0.75);
  const SweepResult& res = small_sweep(0.75);
  REQUIRE(res.complete);
  REQUIRE(res.traces.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    const FlowTrace& tr = res.traces[k];
    CHECK(tr.renormalized);
    // Started at depth R, the run lasts a little under R.
    CHECK(-tr.times.front() <= spec.R_values[k] + tol_disc(spec, tr));
    CHECK(-tr.times.front() >= 0.8 * spec.R_values[k]);
  }
  const AncientSliceSet& sl = res.slices;
  CHECK(sl.times == spec.comparison_times);
  REQUIRE(sl.slices.size() == 2);
  for (const auto& row : sl.slices) {
    for (const auto& s : row) CHECK(s.has_value());
  }

  const CheckReport cauchy = check_cauchy(spec, sl);
  CHECK(cauchy.pass);
  CHECK(check_extinction_time(spec, res.traces).pass);
  const std::vector<CheckReport> ell = check_ell_asymptotics(spec, res.traces);
  for (const CheckReport& r : ell) CHECK_MESSAGE(r.pass, r.name);
  CHECK(check_displacement(spec, res.traces.back()).pass);
  const std::vector<CheckReport> sm = check_speed_and_monotonicity(spec, res.traces.back());
  CHECK(named(sm, "speed_lower_bound").pass);
  CHECK(named(sm, "harnack_tip_from_start").pass);
  const std::vector<CheckReport> ab = check_area_bounds(spec, res.traces.back());
  CHECK(ab[0].pass);

  // Half widths approach w/2 from below.
  const double half = 0.5 * slab_width(0.75).value;
  for (const auto& row : sl.half_width) {
    for (double hw : row) CHECK(hw < half + tol_disc(spec, res.traces.back()));
  }
}

TEST_CASE("all sweep checks come back in a fixed order") {
  const SweepSpec spec = small_spec(0.75);
  const SweepResult& res = small_sweep(0.75);
  const std::vector<CheckReport> a = sweep_checks(spec, res.traces, res.slices);
  const std::vector<CheckReport> b = sweep_checks(spec, res.traces, res.slices);
  REQUIRE(a.size() == b.size());
  CHECK(a.size() >= 8);
  CHECK(reports_to_json(a) == reports_to_json(b));
  for (const CheckReport& r : a) {
    CHECK_FALSE(r.name.empty());
    CHECK_FALSE(r.paper_ref.empty());
  }
}

TEST_CASE("grim reaper ladder: the half width reaches pi/2") {
  const SweepSpec spec = small_spec(1.0);
  const SweepResult& res = small_sweep(1.0);
  REQUIRE(res.complete);
  const double tol = tol_disc(spec, res.traces.back());
  for (double hw : res.slices.half_width_limit) CHECK(std::abs(hw - oracle::pi / 2) <= tol);
  CHECK(check_cauchy(spec, res.slices).pass);
}

TEST_CASE("trivial ladder has zero Cauchy distances") {
  SweepSpec spec = small_spec(0.75);
  spec.R_values = {10.0, 10.0, 10.0};
  spec.comparison_times = {-3.0};
  const SweepResult res = run_sweep(spec, sweep_params(spec));
  for (double d : res.slices.distances[0]) CHECK(d == 0.0);
  CHECK(res.traces[0].times == res.traces[2].times);
}

TEST_CASE("incomplete sweep raises") {
  SweepSpec spec = small_spec(0.75);
  FlowParams p = sweep_params(spec);
  p.max_steps = 100;
  CHECK_THROWS_AS(run_sweep(spec, p), IncompleteRun);
}

TEST_CASE("sweep directory round-trips") {
  const SweepSpec spec = small_spec(0.75);
  const FlowParams params = sweep_params(spec);
  const SweepResult& res = small_sweep(0.75);
  const auto dir = std::filesystem::temp_directory_path() / "kalpha_test_sweep";
  std::filesystem::remove_all(dir);
  const std::vector<CheckReport> reps = sweep_checks(spec, res.traces, res.slices);
  write_sweep_dir(dir, spec, params, res, reps);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "slices"));

  const auto [spec2, params2] = read_sweep_config(dir / "sweep.cfg");
  CHECK(spec2.R_values == spec.R_values);
  CHECK(spec2.comparison_times == spec.comparison_times);
  CHECK(spec2.alpha == spec.alpha);
  CHECK(spec2.n == spec.n);
  CHECK(params2.side_levels == params.side_levels);
  CHECK(params2.snapshot_stride == params.snapshot_stride);

  const std::vector<FlowTrace> back = read_sweep_traces(dir, spec2);
  REQUIRE(back.size() == res.traces.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].times == res.traces[k].times);
    CHECK(back[k].snapshots.size() == res.traces[k].snapshots.size());
  }
  // Checks recomputed from the files agree with the stored report.
  const std::vector<CheckReport> from_files = sweep_checks(spec2, back, make_slices(spec2, back));
  REQUIRE(from_files.size() == reps.size());
  for (std::size_t k = 0; k < reps.size(); ++k) {
    CHECK(from_files[k].name == reps[k].name);
    CHECK(from_files[k].pass == reps[k].pass);
  }
  CHECK(reports_from_json(io::read_file(dir / "report.json")).size() == reps.size());
  std::filesystem::remove_all(dir);
}

TEST_CASE("report json round-trips") {
  CheckReport r;
  r.name = "x";
  r.paper_ref = "a <= b";
  r.pass = true;
  r.margins = {0.1, -1e-300, 3.0};
  r.fitted["slope"] = -0.123456789012345678;
  r.note = "n";
  const std::vector<CheckReport> back = reports_from_json(reports_to_json({r}));
  REQUIRE(back.size() == 1);
  CHECK(back[0].name == r.name);
  CHECK(back[0].paper_ref == r.paper_ref);
  CHECK(back[0].pass);
  CHECK(back[0].margins == r.margins);
  CHECK(back[0].fitted.at("slope") == r.fitted.at("slope"));
  CHECK(back[0].note == "n");
}

TEST_CASE("line fits") {
  const LineFit f = fit_line({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.max_residual <= 1e-14);
  CHECK(fit_loglog({1.0, 2.0, 4.0}, {3.0, 12.0, 48.0}).slope == doctest::Approx(2.0));
  CHECK_THROWS_AS(fit_loglog({1.0, 2.0}, {1.0, 0.0}), UsageError);
}

#include "cli.hpp"

#include <CLI11.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include "kalpha/ancient.hpp"
#include "kalpha/errors.hpp"
#include "kalpha/geometry.hpp"
#include "kalpha/initcurve.hpp"
#include "kalpha/translator.hpp"

namespace kalpha::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Key {
  std::string name;
  std::string def;
  std::string help;
  std::string alias = {};  // extra flag spelling
};

const Key kAlpha{"alpha", "0.75", "exponent of the normal speed kappa^alpha; alpha in (1/2, 1]"};

std::vector<Key> flow_keys(const std::string& side_levels, const std::string& diag_stride) {
  return {
      {"cfl", "0.4", "safety factor on the explicit step cfl dtheta^2 / (2 alpha max kappa^(alpha+1)); in (0, 1)"},
      {"scheme", "euler", "time integrator for h_t = -kappa^alpha: euler or midpoint"},
      {"area_stop", "1e-3", "stop once the area falls below this fraction of the initial area; the extinction "
                            "time is extrapolated from A^((1+alpha)/2) being linear in t"},
      {"diag_stride", diag_stride, "steps between recorded diagnostics"},
      {"max_steps", "200000000", "step budget; a run that exhausts it is incomplete"},
      {"snapshot_stride", "0", "steps between stored support functions; 0 keeps the first and last only"},
      {"side_levels", side_levels, "graded extra normals next to theta = +-pi/2, where the translating "
                                   "tips meet the nearly flat sides; 0 runs on the plain grid"},
      {"side_ratio", "1.5", "grading ratio of the extra normals; in (1, 2]"},
  };
}

std::vector<Key> keys_for(const std::string& cmd) {
  const Key n512{"n", "512", "turning-angle nodes; a multiple of 4, at least 128"};
  const Key eps{"epsilon", "0", "radius of the discs rounding the two corners of the doubled cap; 0 selects 10 dtheta",
                "--eps"};
  const Key select{"select", "", "comma separated check-name prefixes deciding the exit status; empty selects all"};
  std::vector<Key> k;
  if (cmd == "translator") {
    k = {kAlpha,
         {"n", "1024", "sample count of the emitted profile"},
         {"emit", "", "CSV path for the profile theta,kappa,X,Y of the translator kappa^alpha = cos theta"}};
  } else if (cmd == "construct") {
    k = {kAlpha,
         {"depths", "20,40,80,160", "depths R of the doubled translator caps; the h and area deficits of the "
                                    "initial data decay like powers of R",
          "--depth"},
         eps, n512,
         {"emit", "", "snapshot path for the cap of the first depth"}};
  } else if (cmd == "flow") {
    k = {kAlpha, n512,
         {"shape", "circle", "initial curve: circle, ellipse or cap (the rounded doubled translator cap)"},
         {"radius", "1", "circle radius"},
         {"a", "2", "ellipse semi-axis along x"},
         {"b", "1", "ellipse semi-axis along y"},
         {"R", "20", "depth of the doubled cap"},
         eps};
    const auto f = flow_keys("0", "10");
    k.insert(k.end(), f.begin(), f.end());
  } else if (cmd == "sweep") {
    k = {kAlpha,
         {"depths", "20,40,80", "ladder of cap depths R; the flows approximate the ancient oval as R grows"},
         {"times", "-5,-10,-20", "negative comparison times at which the ladder must be Cauchy in Hausdorff distance"},
         eps, n512,
         {"snapshot_dt", "0.25", "time between stored support functions"},
         select};
    const auto f = flow_keys("12", "200");
    k.insert(k.end(), f.begin(), f.end());
  } else if (cmd == "verify") {
    k = {{"in", "", "directory written by flow or sweep; its checks are recomputed from the stored files"},
         select};
  } else if (cmd == "circle-oracle") {
    k = {kAlpha, {"n", "256", "turning-angle nodes"}};
    const auto f = flow_keys("0", "10");
    k.insert(k.end(), f.begin(), f.end());
  }
  return k;
}

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"translator", "closed forms and slab width of the translating soliton"},
    {"construct", "build rounded doubled caps and fit the decay of their deficits"},
    {"flow", "flow one convex curve to extinction"},
    {"sweep", "flow a ladder of doubled caps and check the ancient-limit estimates"},
    {"verify", "recompute report.json from a flow or sweep directory"},
    {"circle-oracle", "flow the unit circle against the exact shrinking radius"},
};

std::string flag_of(const std::string& key) {
  std::string f = key;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

const std::string& get(const io::KeyValues& v, const std::string& key) {
  const auto it = v.find(key);
  if (it == v.end()) throw UsageError("missing key " + key);
  return it->second;
}

double num(const io::KeyValues& v, const std::string& key) {
  try {
    return io::parse_double(get(v, key));
  } catch (const UsageError&) {
    throw UsageError(flag_of(key) + ": expected a number, got '" + get(v, key) + "'");
  }
}

long integer(const io::KeyValues& v, const std::string& key) {
  const double x = num(v, key);
  if (x != std::floor(x) || std::abs(x) > 9e15) throw UsageError(flag_of(key) + ": expected an integer");
  return long(x);
}

std::vector<double> numbers(const io::KeyValues& v, const std::string& key) {
  try {
    return io::parse_list(get(v, key));
  } catch (const UsageError&) {
    throw UsageError(flag_of(key) + ": expected comma separated numbers, got '" + get(v, key) + "'");
  }
}

std::vector<std::string> words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void require_alpha(double alpha) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw UsageError("--alpha: alpha must lie in (1/2, 1]");
}

ThetaGrid grid_of(const io::KeyValues& v) {
  const long n = integer(v, "n");
  if (n < 128 || n % 4 != 0) throw UsageError("--n: must be a multiple of 4 and >= 128");
  return ThetaGrid(n);
}

FlowParams flow_params(const io::KeyValues& v) {
  FlowParams p;
  p.alpha = num(v, "alpha");
  require_alpha(p.alpha);
  p.cfl_safety = num(v, "cfl");
  p.area_stop_fraction = num(v, "area_stop");
  p.diag_stride = integer(v, "diag_stride");
  p.max_steps = integer(v, "max_steps");
  p.snapshot_stride = integer(v, "snapshot_stride");
  p.side_levels = int(integer(v, "side_levels"));
  p.side_ratio = num(v, "side_ratio");
  p.scheme = parse_scheme(get(v, "scheme"));
  p.validate();
  return p;
}

SweepSpec sweep_spec(const io::KeyValues& v) {
  SweepSpec s;
  s.alpha = num(v, "alpha");
  require_alpha(s.alpha);
  s.R_values = numbers(v, "depths");
  s.comparison_times = numbers(v, "times");
  s.epsilon = num(v, "epsilon");
  s.n = integer(v, "n");
  s.snapshot_dt = num(v, "snapshot_dt");
  s.validate();
  return s;
}

DoubledCapSpec cap_spec(const io::KeyValues& v, double R) {
  DoubledCapSpec c;
  c.R = R;
  c.alpha = num(v, "alpha");
  c.epsilon = num(v, "epsilon");
  c.grid = grid_of(v);
  return c;
}

// Builds every module parameter of the command so that range errors surface before any work.
void validate(const RunConfig& c) {
  const io::KeyValues& v = c.values;
  if (c.command == "translator") {
    require_alpha(num(v, "alpha"));
    if (integer(v, "n") < 2) throw UsageError("--n: need at least 2 profile samples");
  } else if (c.command == "construct") {
    require_alpha(num(v, "alpha"));
    grid_of(v);
    const auto R = numbers(v, "depths");
    if (R.empty()) throw UsageError("--depths: need at least one depth");
    for (double r : R) {
      if (!(r > 0.0)) throw UsageError("--depths: depths must be > 0");
    }
    if (!(num(v, "epsilon") < 1.0)) throw UsageError("--epsilon: must be < 1");
  } else if (c.command == "flow") {
    flow_params(v);
    grid_of(v);
    const std::string shape = get(v, "shape");
    if (shape != "circle" && shape != "ellipse" && shape != "cap") {
      throw UsageError("--shape: must be circle, ellipse or cap");
    }
    for (const char* k : {"radius", "a", "b", "R"}) {
      if (!(num(v, k) > 0.0)) throw UsageError(flag_of(k) + ": must be > 0");
    }
    if (!(num(v, "epsilon") < 1.0)) throw UsageError("--epsilon: must be < 1");
  } else if (c.command == "sweep") {
    sweep_spec(v);
    flow_params(v);
    if (c.out.empty()) throw UsageError("sweep: --out is required");
  } else if (c.command == "verify") {
    if (get(v, "in").empty()) throw UsageError("verify: --in is required");
    if (!fs::is_directory(get(v, "in"))) throw UsageError("verify: --in " + get(v, "in") + " is not a directory");
  } else if (c.command == "circle-oracle") {
    flow_params(v);
    grid_of(v);
  }
}

std::string summary_line(const CheckReport& r) {
  std::string line = (r.pass ? "PASS " : "FAIL ") + r.name;
  for (const auto& [k, x] : r.fitted) line += " " + k + "=" + io::fmt17(x);
  if (!r.note.empty()) line += " (" + r.note + ")";
  return line;
}

int finish(const std::vector<CheckReport>& reports, const std::vector<std::string>& prefixes, std::ostream& out,
           std::ostream& err) {
  for (const CheckReport& r : reports) out << summary_line(r) << "\n";
  const std::vector<std::string> failed = failed_checks(reports, prefixes);
  if (failed.empty()) return kExitPass;
  err << "{\"failed\": [";
  for (std::size_t i = 0; i < failed.size(); ++i) err << (i ? ", " : "") << "\"" << failed[i] << "\"";
  err << "]}\n";
  return kExitCheckFailed;
}

CheckReport bound_report(const std::string& name, const std::string& ref, double error, double tol,
                         const std::string& error_key = "error") {
  CheckReport r;
  r.name = name;
  r.paper_ref = ref;
  r.fitted[error_key] = error;
  r.fitted["tolerance"] = tol;
  r.margins = {tol - error};
  r.pass = error <= tol;
  return r;
}

}  // namespace

std::vector<CheckReport> translator_checks(double alpha) {
  std::vector<CheckReport> out;
  const SlabWidth w = slab_width(alpha);
  CheckReport dual = bound_report("slab_width_dual", "the angle and graph integrals of the slab width agree",
                                  w.discrepancy, 1e-8, "discrepancy");
  dual.fitted["w_alpha"] = w.value;
  dual.fitted["graph_form"] = w.graph_form;
  out.push_back(dual);

  const double a = 1.0 / (2.0 * alpha);
  const double gamma_form = std::sqrt(kPi) * std::tgamma(1.0 - a) / std::tgamma(1.5 - a);
  out.push_back(bound_report("slab_width_gamma",
                             "w_alpha = sqrt(pi) Gamma(1 - 1/(2alpha)) / Gamma(3/2 - 1/(2alpha))",
                             std::abs(w.value - gamma_form) / gamma_form, 1e-10));

  // In quad precision through the complement angle: at alpha = 1, pi/2 - theta_R = e^-R underflows a double.
  using Quad = boost::multiprecision::cpp_bin_float_quad;
  const Quad qa(alpha);
  double trip = 0.0;
  for (int k = 1; k <= 1000; ++k) {
    const Quad R(k);
    const Quad back = cap_depth_complement(cap_angle_complement(R, qa), qa);
    trip = std::max(trip, static_cast<double>(abs(back - R) / R));
  }
  out.push_back(bound_report("depth_angle_round_trip", "cap depth and cap angle are mutually inverse on [0, 1000]",
                             trip, 1e-12));
  if (detail::is_grim_reaper(alpha)) {
    double err = std::abs(w.value - kPi) / kPi;
    for (double theta : {0.1, 0.5, 1.0, 1.3, 1.5, 1.57}) {
      const double exact = -std::log(std::cos(theta));
      err = std::max(err, std::abs(cap_depth(theta, alpha) - exact) / std::max(1.0, exact));
    }
    out.push_back(bound_report("grim_reaper_branch", "alpha = 1 gives w = pi and depth -log cos theta", err, 1e-12));
  }
  return out;
}

namespace {

void emit_profile(const fs::path& path, double alpha, long count) {
  std::string text = "theta,kappa,X,Y\n";
  for (long j = 0; j < count; ++j) {
    const double theta = -0.5 * kPi + kPi * (double(j) + 0.5) / double(count);
    text += io::fmt17(theta) + "," + io::fmt17(translator_curvature(theta, alpha)) + "," +
            io::fmt17(cap_halfwidth(theta, alpha)) + "," + io::fmt17(cap_depth(theta, alpha)) + "\n";
  }
  io::write_file(path, text);
}

int run_translator(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const double alpha = num(c.values, "alpha");
  const std::vector<CheckReport> reports = translator_checks(alpha);
  const std::string emit = get(c.values, "emit");
  if (!emit.empty()) emit_profile(emit, alpha, integer(c.values, "n"));
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    io::write_file(c.out / "report.json", reports_to_json(reports));
  }
  return finish(reports, {}, out, err);
}

// Construct.

int run_construct(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<CurveState> states;
  std::vector<DoubledCapSpec> specs;
  for (double R : numbers(c.values, "depths")) {
    specs.push_back(cap_spec(c.values, R));
    states.push_back(build_doubled_cap(specs.back()));
  }
  const std::string emit = get(c.values, "emit");
  if (!emit.empty()) write_snapshot(emit, states.front(), specs.front().alpha);
  std::vector<CheckReport> reports;
  if (states.size() >= 3) reports = initial_data_checks(states, specs);
  CheckReport sym;
  sym.name = "initial_reflection_symmetry";
  sym.paper_ref = "the doubled cap is symmetric under x -> -x and y -> -y";
  double worst = 0.0;
  for (const CurveState& s : states) worst = std::max(worst, reflection_asymmetry(s));
  sym.fitted["asymmetry"] = worst;
  sym.margins = {1e-11 - worst};
  sym.pass = worst <= 1e-11;
  reports.push_back(sym);
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    for (std::size_t k = 0; k < states.size(); ++k) {
      write_snapshot(c.out / ("cap_R=" + io::fmt17(specs[k].R) + "_" + std::to_string(k) + ".snap"), states[k],
                     specs[k].alpha);
    }
    io::write_file(c.out / "report.json", reports_to_json(reports));
  }
  return finish(reports, {}, out, err);
}

// Flow.

std::pair<CurveState, SupportFunction> initial_curve(const io::KeyValues& v) {
  const ThetaGrid g = grid_of(v);
  const std::string shape = get(v, "shape");
  if (shape == "circle") {
    const double rho = num(v, "radius");
    return {CurveState(g, Samples::Constant(g.size(), rho)), [rho](double) { return rho; }};
  }
  if (shape == "ellipse") {
    const double a = num(v, "a"), b = num(v, "b");
    return {CurveState(g, ellipse_support(g, a, b)), [a, b](double th) {
              const double s = std::sin(th), co = std::cos(th);
              return std::sqrt(a * a * s * s + b * b * co * co);
            }};
  }
  const DoubledCapSpec spec = cap_spec(v, num(v, "R"));
  return {build_doubled_cap(spec), DoubledCapSupport(spec)};
}

std::vector<CheckReport> replay_flow(const fs::path& dir) {
  return flow_checks(read_trace_dir(dir / "trace"));
}

int run_flow(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const FlowParams params = flow_params(c.values);
  const auto [s0, support] = initial_curve(c.values);
  const FlowTrace trace = flow_to_extinction(s0, params, support);
  out << "T_extinction=" << io::fmt17(trace.T_extinction) << " steps=" << trace.steps << "\n";
  if (!trace.complete) throw IncompleteRun("flow: hit max_steps before the area target");
  std::vector<CheckReport> reports;
  if (c.out.empty()) {
    reports = flow_checks(trace);
  } else {
    fs::create_directories(c.out);
    io::write_key_values(c.out / "flow.cfg", c.values);
    write_trace_dir(c.out / "trace", trace);
    reports = replay_flow(c.out);
    io::write_file(c.out / "report.json", reports_to_json(reports));
  }
  return finish(reports, {}, out, err);
}

// Sweep.

std::vector<CheckReport> replay_sweep(const fs::path& dir) {
  const auto [spec, params] = read_sweep_config(dir / "sweep.cfg");
  const std::vector<FlowTrace> traces = read_sweep_traces(dir, spec);
  return sweep_checks(spec, traces, make_slices(spec, traces));
}

int run_sweep_command(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const SweepSpec spec = sweep_spec(c.values);
  const FlowParams params = flow_params(c.values);
  const SweepResult result = run_sweep(spec, params);
  for (std::size_t k = 0; k < result.traces.size(); ++k) {
    out << "R=" << io::fmt17(spec.R_values[k]) << " T_extinction=" << io::fmt17(result.traces[k].T_extinction)
        << " steps=" << result.traces[k].steps << "\n";
  }
  write_sweep_dir(c.out, spec, params, result, {});
  const std::vector<CheckReport> reports = replay_sweep(c.out);
  io::write_file(c.out / "report.json", reports_to_json(reports));
  return finish(reports, words(get(c.values, "select")), out, err);
}

// Verify.

int run_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const fs::path dir = get(c.values, "in");
  std::vector<CheckReport> reports;
  if (fs::exists(dir / "sweep.cfg")) {
    reports = replay_sweep(dir);
  } else if (fs::exists(dir / "flow.cfg")) {
    reports = replay_flow(dir);
  } else {
    throw UsageError("verify: " + dir.string() + " has neither sweep.cfg nor flow.cfg");
  }
  const std::string text = reports_to_json(reports);
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    io::write_file(c.out / "report.json", text);
  }
  const bool identical = fs::exists(dir / "report.json") && io::read_file(dir / "report.json") == text;
  CheckReport replay;
  replay.name = "replay_identical";
  replay.paper_ref = "recomputing the checks from stored files reproduces report.json byte for byte";
  replay.pass = identical;
  replay.margins = {identical ? 0.0 : -1.0};
  reports.push_back(replay);
  std::vector<std::string> prefixes = words(get(c.values, "select"));
  if (!prefixes.empty()) prefixes.push_back("replay_identical");
  return finish(reports, prefixes, out, err);
}

// Circle oracle.

int run_circle(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const FlowParams params = flow_params(c.values);
  const CircleOracle oracle = circle_oracle(params.alpha, grid_of(c.values).size(), params);
  const std::vector<CheckReport> reports = circle_checks(oracle);
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    write_trace_dir(c.out / "trace", oracle.trace);
    io::write_file(c.out / "report.json", reports_to_json(reports));
  }
  return finish(reports, {}, out, err);
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"kalpha: kappa^alpha curve flow, doubled translator caps and their ancient limit"};
  app.name("kalpha");
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> flags;
  std::map<std::string, std::string> config_file, out_dir;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> options;
  for (const auto& [cmd, desc] : kCommands) {
    CLI::App* sub = app.add_subcommand(cmd, desc);
    sub->add_option("--config", config_file[cmd], "flat key = value file; flags override its entries");
    sub->add_option("--out", out_dir[cmd], "output directory");
    for (const Key& k : keys_for(cmd)) {
      const std::string names = k.alias.empty() ? flag_of(k.name) : flag_of(k.name) + "," + k.alias;
      CLI::Option* o = sub->add_option(names, flags[cmd][k.name], k.help);
      o->type_name("VALUE");
      if (!k.def.empty()) o->default_str(k.def);
      options[cmd].push_back({k.name, o});
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return {};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig c;
  c.command = app.get_subcommands().front()->get_name();
  for (const Key& k : keys_for(c.command)) c.values[k.name] = k.def;
  if (!config_file[c.command].empty()) {
    for (const auto& [key, value] : io::read_key_values(config_file[c.command])) {
      if (key == "out") {
        c.out = value;
        continue;
      }
      if (!c.values.count(key)) throw UsageError(config_file[c.command] + ": unknown key " + key);
      c.values[key] = value;
    }
  }
  for (const auto& [key, opt] : options[c.command]) {
    if (opt->count() > 0) c.values[key] = flags[c.command][key];
  }
  if (!out_dir[c.command].empty()) c.out = out_dir[c.command];
  validate(c);
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.command == "translator") return run_translator(c, out, err);
  if (c.command == "construct") return run_construct(c, out, err);
  if (c.command == "flow") return run_flow(c, out, err);
  if (c.command == "sweep") return run_sweep_command(c, out, err);
  if (c.command == "verify") return run_verify(c, out, err);
  if (c.command == "circle-oracle") return run_circle(c, out, err);
  throw UsageError("unknown command " + c.command);
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c = parse_config(args, out);
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (c.command.empty()) return kExitPass;
  try {
    return run(c, out, err);
  } catch (const IncompleteRun& e) {
    err << "incomplete: " << e.what() << "\n";
    return kExitIncomplete;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

CircleOracle circle_oracle(double alpha, long n, const FlowParams& params, double area_floor) {
  FlowParams p = params;
  p.alpha = alpha;
  const ThetaGrid g(n);
  CircleOracle o;
  o.area_floor = area_floor;
  o.trace = flow_to_extinction(CurveState(g, Samples::Ones(n)), p, [](double) { return 1.0; });
  o.T_exact = 1.0 / (1.0 + alpha);
  const double A0 = o.trace.initial_area;
  for (std::size_t k = 0; k < o.trace.times.size(); ++k) {
    const double A = o.trace.diags[k].area;
    if (A < area_floor * A0) continue;
    const double rho = std::sqrt(A / kPi);
    const double exact = std::pow((1.0 + alpha) * -o.trace.times[k], 1.0 / (1.0 + alpha));
    o.max_radius_error = std::max(o.max_radius_error, std::abs(rho / exact - 1.0));
    const double t_abs = o.trace.times[k] + o.trace.T_extinction;
    const double exact_T = std::pow((1.0 + alpha) * (o.T_exact - t_abs), 1.0 / (1.0 + alpha));
    o.max_radius_error_exact_T = std::max(o.max_radius_error_exact_T, std::abs(rho / exact_T - 1.0));
  }
  return o;
}

std::vector<CheckReport> circle_checks(const CircleOracle& o, double tol) {
  CheckReport rho = bound_report("circle_radius", "rho(t) = ((1+alpha)(T-t))^(1/(1+alpha)) for the shrinking circle",
                                 o.max_radius_error, tol, "max_relative_error");
  rho.fitted["area_floor"] = o.area_floor;
  rho.fitted["max_relative_error_exact_T"] = o.max_radius_error_exact_T;
  const double T = o.trace.T_extinction;
  CheckReport ext = bound_report("circle_extinction_time", "the unit circle vanishes at T = 1/(1+alpha)",
                                 std::abs(T - o.T_exact) / o.T_exact, tol, "relative_error");
  ext.fitted["T_extinction"] = T;
  ext.fitted["T_exact"] = o.T_exact;
  return {rho, ext};
}

double reflection_asymmetry(const CurveState& state) {
  const CurveState c = centered(state);
  const Eigen::Index n = c.grid.size();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = (3 * n / 2 - i) % n;
    worst = std::max({worst, std::abs(c.h[i] - c.h[c.grid.mirror(i)]), std::abs(c.h[i] - c.h[j])});
  }
  return worst / c.h.abs().maxCoeff();
}

std::vector<CheckReport> flow_checks(const FlowTrace& trace) {
  CheckReport area;
  area.name = "area_decreasing";
  area.paper_ref = "the enclosed area decreases along the flow";
  std::vector<double> drop;
  const double A0 = trace.diags.front().area;
  for (std::size_t k = 1; k < trace.diags.size(); ++k) {
    drop.push_back((trace.diags[k - 1].area - trace.diags[k].area) / A0);
  }
  const double worst = drop.empty() ? 0.0 : *std::min_element(drop.begin(), drop.end());
  area.margins = {worst + 1e-12};
  area.fitted["min_relative_decrease"] = worst;
  area.pass = !drop.empty() && worst >= -1e-12;

  double asym = 0.0;
  for (const CurveState& s : trace.snapshots) asym = std::max(asym, reflection_asymmetry(s));
  CheckReport sym = bound_report("reflection_symmetry",
                                 "a curve symmetric under both axis reflections stays symmetric", asym, 1e-11,
                                 "asymmetry");
  if (trace.snapshots.empty()) {
    sym.pass = false;
    sym.note = "no snapshots";
  }

  const double T = std::abs(trace.T_extinction);
  CheckReport fit = bound_report("extinction_fit", "A^((1+alpha)/2) is asymptotically linear in T - t",
                                 trace.fit_residual / T, 1e-3, "relative_residual");
  fit.fitted["T_extinction"] = trace.T_extinction;
  return {area, sym, fit};
}

std::vector<std::string> failed_checks(const std::vector<CheckReport>& reports,
                                       const std::vector<std::string>& prefixes) {
  std::vector<std::string> out;
  for (const CheckReport& r : reports) {
    if (r.pass) continue;
    const bool selected = prefixes.empty() || std::any_of(prefixes.begin(), prefixes.end(), [&](const auto& p) {
                            return r.name.rfind(p, 0) == 0;
                          });
    if (selected) out.push_back(r.name);
  }
  return out;
}

}  // namespace kalpha::cli

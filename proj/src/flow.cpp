#include "kalpha/flow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <tuple>

#include "kalpha/io.hpp"
#include "kalpha/report.hpp"

namespace kalpha {

Scheme parse_scheme(const std::string& name) {
  if (name == "euler") return Scheme::Euler;
  if (name == "midpoint") return Scheme::Midpoint;
  throw UsageError("scheme must be euler or midpoint, got '" + name + "'");
}

std::string scheme_name(Scheme s) { return s == Scheme::Euler ? "euler" : "midpoint"; }

void FlowParams::validate() const {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw UsageError("alpha must lie in (1/2, 1]");
  if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) throw UsageError("cfl_safety must lie in (0, 1)");
  if (!(area_stop_fraction > 0.0 && area_stop_fraction < 1.0)) {
    throw UsageError("area_stop_fraction must lie in (0, 1)");
  }
  if (snapshot_stride < 0) throw UsageError("snapshot_stride must be >= 0");
  if (diag_stride < 1) throw UsageError("diag_stride must be >= 1");
  if (max_steps < 1) throw UsageError("max_steps must be >= 1");
  if (side_levels < 0 || side_levels > 40) throw UsageError("side_levels must lie in [0, 40]");
  if (!(side_ratio > 1.0 && side_ratio <= 2.0)) throw UsageError("side_ratio must lie in (1, 2]");
}

namespace {

double dt_from_min_radius(double rmin, double dtheta, const FlowParams& p) {
  return p.cfl_safety * dtheta * dtheta / (2.0 * p.alpha) * std::pow(rmin, p.alpha + 1.0);
}

// Support lines at sorted normals: the grid nodes plus optional side levels.
struct Polygon {
  std::vector<double> theta;
  std::vector<int> level;  // 0 on grid nodes
  std::vector<Eigen::Index> grid_pos;
  std::vector<char> touched;
  Samples a, b, weight, d2;
  int inner = 0;

  void rebuild() {
    const Eigen::Index m = Eigen::Index(theta.size());
    a.resize(m);
    b.resize(m);
    weight.resize(m);
    d2.resize(m);
    touched.assign(std::size_t(m), 0);
    grid_pos.clear();
    inner = 0;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index im = (i + m - 1) % m, ip = (i + 1) % m;
      const double dm = i == 0 ? theta[0] - theta[std::size_t(m - 1)] + two_pi : theta[i] - theta[im];
      const double dp = i == m - 1 ? theta[0] + two_pi - theta[i] : theta[ip] - theta[i];
      const double l = std::tan(0.5 * dm) + std::tan(0.5 * dp);
      a[i] = 1.0 / (std::sin(dm) * l);
      b[i] = 1.0 / (std::sin(dp) * l);
      weight[i] = 0.5 * (dm + dp);
      d2[i] = dm * dp;
      touched[std::size_t(i)] = level[i] != 0 || level[im] != 0 || level[ip] != 0;
      if (level[i] == 0) grid_pos.push_back(i);
      inner = std::max(inner, level[i]);
    }
  }

  void radius(const Samples& h, Samples& r) const {
    const Eigen::Index m = h.size();
    r.resize(m);
    r[0] = h[0] + a[0] * (h[m - 1] - h[0]) + b[0] * (h[1] - h[0]);
    for (Eigen::Index i = 1; i + 1 < m; ++i) r[i] = h[i] + a[i] * (h[i - 1] - h[i]) + b[i] * (h[i + 1] - h[i]);
    r[m - 1] = h[m - 1] + a[m - 1] * (h[m - 2] - h[m - 1]) + b[m - 1] * (h[0] - h[m - 1]);
  }

  double area(const Samples& h, const Samples& r) const { return 0.5 * (weight * h * r).sum(); }

  Samples on_grid(const Samples& h) const {
    Samples out(Eigen::Index(grid_pos.size()));
    for (std::size_t k = 0; k < grid_pos.size(); ++k) out[Eigen::Index(k)] = h[grid_pos[k]];
    return out;
  }

  // Removes the innermost side level from the polygon and from h.
  void drop_inner(Samples& h) {
    const int lv = inner;
    std::vector<double> th;
    std::vector<int> le;
    std::vector<double> hv;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (level[i] == lv) continue;
      th.push_back(theta[i]);
      le.push_back(level[i]);
      hv.push_back(h[Eigen::Index(i)]);
    }
    theta.swap(th);
    level.swap(le);
    h = Eigen::Map<const Samples>(hv.data(), Eigen::Index(hv.size()));
    rebuild();
  }
};

Polygon make_polygon(const CurveState& s0, const FlowParams& p, const SupportFunction& support, Samples& h) {
  const ThetaGrid& g = s0.grid;
  struct Node {
    double theta;
    int level;
    double h;
  };
  std::vector<Node> nodes;
  for (Eigen::Index i = 0; i < g.size(); ++i) nodes.push_back({g.node(i), 0, s0.h[i]});
  constexpr double half_pi = 0.5 * std::numbers::pi;
  for (int k = 1; k <= p.side_levels; ++k) {
    const double s = g.spacing() * std::pow(p.side_ratio, -double(k));
    for (double th : {-half_pi - s, -half_pi + s, half_pi - s, half_pi + s}) nodes.push_back({th, k, support(th)});
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& x, const Node& y) { return x.theta < y.theta; });
  Polygon poly;
  h.resize(Eigen::Index(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    poly.theta.push_back(nodes[i].theta);
    poly.level.push_back(nodes[i].level);
    h[Eigen::Index(i)] = nodes[i].h;
  }
  poly.rebuild();
  return poly;
}

// Explicit update of h into h_out, leaving the radius of h_out in r_out.
// Returns false when a stage loses convexity.
bool advance(const Polygon& poly, const Samples& h, const Samples& r, double dt, const FlowParams& p,
             Samples& h_out, Samples& r_out, Samples& work) {
  if (p.scheme == Scheme::Euler) {
    h_out = h - dt * r.pow(-p.alpha);
  } else {
    work = h - 0.5 * dt * r.pow(-p.alpha);
    poly.radius(work, r_out);
    if (!(r_out.minCoeff() > 0.0)) return false;
    h_out = h - dt * r_out.pow(-p.alpha);
  }
  poly.radius(h_out, r_out);
  return r_out.minCoeff() > 0.0;
}

// Largest stable step on the plain nodes and on the nodes next to side levels.
std::pair<double, double> stable_steps(const Polygon& poly, const Samples& r, const FlowParams& p) {
  double plain = HUGE_VAL, side = HUGE_VAL;
  double rmin = HUGE_VAL;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (!poly.touched[std::size_t(i)]) {
      rmin = std::min(rmin, r[i]);
    } else {
      side = std::min(side, p.cfl_safety * poly.d2[i] / (2.0 * p.alpha) * std::pow(r[i], p.alpha + 1.0));
    }
  }
  if (rmin < HUGE_VAL) plain = p.cfl_safety * poly.d2[poly.grid_pos.front()] / (2.0 * p.alpha) * std::pow(rmin, p.alpha + 1.0);
  return {plain, side};
}

}  // namespace

Samples curvature(const CurveState& state) { return radius_of_curvature(state).inverse(); }

double stable_dt(const CurveState& state, const FlowParams& params) {
  const double rmin = radius_of_curvature(state).minCoeff();
  if (!(rmin > 0.0)) throw ConvexityError("stable_dt: min r = " + io::fmt17(rmin));
  return dt_from_min_radius(rmin, state.grid.spacing(), params);
}

CurveState step(const CurveState& state, double dt, const FlowParams& params) {
  FlowParams plain = params;
  plain.side_levels = 0;
  Samples h;
  const Polygon poly = make_polygon(state, plain, {}, h);
  Samples r, r_out, h_out, work;
  poly.radius(h, r);
  if (!(r.minCoeff() > 0.0)) throw ConvexityError("step: min r <= 0 before the step");
  if (!advance(poly, h, r, dt, params, h_out, r_out, work)) {
    throw StepRejected("step: convexity lost with dt = " + io::fmt17(dt));
  }
  return CurveState(state.grid, h_out, state.t + dt);
}

FlowTrace flow_to_extinction(const CurveState& state0, const FlowParams& params, const SupportFunction& support) {
  params.validate();
  if (params.side_levels > 0 && !support) {
    throw UsageError("flow_to_extinction: side_levels > 0 needs a support function");
  }
  const ThetaGrid& g = state0.grid;
  if (params.side_levels > 0 && g.size() % 4 != 0) {
    throw UsageError("flow_to_extinction: side levels need nodes at +-pi/2");
  }

  FlowTrace trace;
  trace.alpha = params.alpha;

  Samples h;
  Polygon poly = make_polygon(state0, params, support, h);
  Samples r, h_new, r_new, work;
  poly.radius(h, r);
  if (!(r.minCoeff() > 0.0)) throw ConvexityError("flow_to_extinction: initial state not convex");
  double t = state0.t;
  double A = poly.area(h, r);
  trace.initial_area = A;
  const double target = params.area_stop_fraction * A;

  long last_recorded = -1;
  long last_snapshot = -1;
  auto record = [&](long step_index) {
    const CurveState s(g, poly.on_grid(h), t);
    Diagnostics d = diagnostics(s);
    d.area = A;
    trace.times.push_back(t);
    trace.diags.push_back(d);
    trace.steiner.push_back(steiner_point(s));
    last_recorded = step_index;
  };
  auto snapshot = [&](long step_index) {
    trace.snapshots.emplace_back(g, poly.on_grid(h), t);
    last_snapshot = step_index;
  };

  // Side levels that already limit the step at t0 (nodes on a corner arc) go first.
  for (;;) {
    const auto [plain, side] = stable_steps(poly, r, params);
    if (poly.inner == 0 || side >= plain) break;
    poly.drop_inner(h);
    poly.radius(h, r);
  }
  A = poly.area(h, r);
  trace.initial_area = A;
  record(0);
  snapshot(0);

  trace.min_dt = HUGE_VAL;
  trace.max_dt = 0.0;
  long steps = 0;
  while (A > target && steps < params.max_steps) {
    auto [plain, side] = stable_steps(poly, r, params);
    while (poly.inner > 0 && side < plain) {
      poly.drop_inner(h);
      poly.radius(h, r);
      A = poly.area(h, r);
      std::tie(plain, side) = stable_steps(poly, r, params);
    }
    double dt = std::min(plain, side);
    int rejected = 0;
    while (!advance(poly, h, r, dt, params, h_new, r_new, work)) {
      if (++rejected > 40) {
        throw SchemeError("flow: 40 consecutive step rejections at t = " + io::fmt17(t));
      }
      dt *= 0.5;
    }
    trace.rejections += rejected;
    const double A_new = poly.area(h_new, r_new);
    if (A_new > A * (1.0 + 1e-12)) {
      throw SchemeError("flow: area increased from " + io::fmt17(A) + " to " + io::fmt17(A_new) +
                        " at t = " + io::fmt17(t));
    }
    h.swap(h_new);
    r.swap(r_new);
    A = A_new;
    t += dt;
    ++steps;
    trace.min_dt = std::min(trace.min_dt, dt);
    trace.max_dt = std::max(trace.max_dt, dt);
    if (steps % params.diag_stride == 0) record(steps);
    if (params.snapshot_stride > 0 && steps % params.snapshot_stride == 0) snapshot(steps);
  }
  if (last_recorded != steps) record(steps);
  if (last_snapshot != steps) snapshot(steps);
  trace.steps = steps;
  trace.complete = A <= target;
  if (trace.complete) {
    fit_extinction(trace);
    renormalize(trace);
  }
  return trace;
}

void fit_extinction(FlowTrace& trace) {
  const std::size_t m = trace.times.size();
  if (m < 3) throw UsageError("fit_extinction: fewer than 3 recorded times");
  const double A_last = trace.diags.back().area;
  std::size_t first = m;
  while (first > 0 && trace.diags[first - 1].area <= 10.0 * A_last) --first;
  first = std::min(first, m - 3);

  const double e = 0.5 * (1.0 + trace.alpha);
  std::vector<double> t, u, px, py;
  for (std::size_t k = first; k < m; ++k) {
    t.push_back(trace.times[k]);
    u.push_back(std::pow(trace.diags[k].area, e));
    px.push_back(trace.steiner[k].x());
    py.push_back(trace.steiner[k].y());
  }
  const LineFit fu = fit_line(t, u);
  if (!(fu.slope < 0.0)) throw SchemeError("fit_extinction: area not decreasing over the last decade");
  trace.T_extinction = -fu.intercept / fu.slope;
  trace.fit_residual = fu.max_residual / -fu.slope;
  const LineFit fx = fit_line(t, px);
  const LineFit fy = fit_line(t, py);
  trace.extinction_point = {fx.intercept + fx.slope * trace.T_extinction,
                            fy.intercept + fy.slope * trace.T_extinction};
}

void renormalize(FlowTrace& trace) {
  if (trace.renormalized) return;
  const double T = trace.T_extinction;
  const Eigen::Vector2d p = trace.extinction_point;
  for (double& t : trace.times) t -= T;
  for (Diagnostics& d : trace.diags) {
    d.ell -= p.y();
    d.ell_minus += p.y();
    d.width_h -= p.x();
    d.width_h_minus += p.x();
  }
  for (Eigen::Vector2d& s : trace.steiner) s -= p;
  for (CurveState& s : trace.snapshots) {
    s = translated(s, -p);
    s.t -= T;
  }
  trace.renormalized = true;
}

double kappa_gauge_residual(const FlowTrace& trace, std::optional<double> window) {
  if (trace.snapshots.size() < 2) throw UsageError("kappa_gauge_residual: need at least 2 snapshots");
  const double a = trace.alpha;
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < trace.snapshots.size(); ++k) {
    const CurveState& s0 = trace.snapshots[k];
    const CurveState& s1 = trace.snapshots[k + 1];
    const ThetaGrid& g = s0.grid;
    const double dt = s1.t - s0.t;
    if (!(dt > 0.0)) continue;
    const Samples k0 = curvature(s0);
    const Samples k1 = curvature(s1);
    const Samples rhs0 = k0.square() * d2(g, k0.pow(a).eval()) + k0.pow(a + 2.0);
    const Samples rhs1 = k1.square() * d2(g, k1.pow(a).eval()) + k1.pow(a + 2.0);
    const Samples res = ((k1 - k0) / dt - 0.5 * (rhs0 + rhs1)).abs();
    const double scale = std::max(k0.pow(a + 2.0).maxCoeff(), k1.pow(a + 2.0).maxCoeff());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (window) {
        const double th = std::abs(g.node(i));
        if (std::min(th, std::numbers::pi - th) > *window) continue;
      }
      worst = std::max(worst, res[i] / scale);
    }
  }
  return worst;
}

void write_trace_csv(const std::filesystem::path& path, const FlowTrace& trace) {
  std::ostringstream os;
  os << "t,ell,ell_minus,h,area,kappa_tip,L\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const Diagnostics& d = trace.diags[k];
    os << io::fmt17(trace.times[k]) << ',' << io::fmt17(d.ell) << ',' << io::fmt17(d.ell_minus) << ','
       << io::fmt17(d.width_h) << ',' << io::fmt17(d.area) << ',' << io::fmt17(d.tip_curvature) << ','
       << io::fmt17(d.L) << '\n';
  }
  io::write_file(path, os.str());
}

void read_trace_csv(const std::filesystem::path& path, FlowTrace& trace) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open trace " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "t,ell,ell_minus,h,area,kappa_tip,L") throw UsageError("bad trace header in " + path.string());
  trace.times.clear();
  trace.diags.clear();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(io::parse_double(cell));
    if (v.size() != 7) throw UsageError("bad trace row in " + path.string());
    Diagnostics d;
    d.ell = v[1];
    d.ell_minus = v[2];
    d.width_h = v[3];
    d.area = v[4];
    d.tip_curvature = v[5];
    d.L = v[6];
    d.width_h_minus = std::nan("");  // not stored
    trace.times.push_back(v[0]);
    trace.diags.push_back(d);
  }
}

namespace {

std::string snapshot_name(std::size_t index, double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%06zu_t=", index);
  return std::string(buf) + io::fmt17(t) + ".snap";
}

}  // namespace

void write_trace_dir(const std::filesystem::path& dir, const FlowTrace& trace) {
  std::filesystem::create_directories(dir);
  write_trace_csv(dir / "trace.csv", trace);
  io::KeyValues meta;
  meta["alpha"] = io::fmt17(trace.alpha);
  meta["T_extinction"] = io::fmt17(trace.T_extinction);
  meta["extinction_x"] = io::fmt17(trace.extinction_point.x());
  meta["extinction_y"] = io::fmt17(trace.extinction_point.y());
  meta["fit_residual"] = io::fmt17(trace.fit_residual);
  meta["initial_area"] = io::fmt17(trace.initial_area);
  meta["min_dt"] = io::fmt17(trace.min_dt);
  meta["max_dt"] = io::fmt17(trace.max_dt);
  meta["steps"] = std::to_string(trace.steps);
  meta["rejections"] = std::to_string(trace.rejections);
  meta["complete"] = trace.complete ? "1" : "0";
  meta["renormalized"] = trace.renormalized ? "1" : "0";
  meta["snapshots"] = std::to_string(trace.snapshots.size());
  io::write_key_values(dir / "meta.cfg", meta);
  const std::filesystem::path sdir = dir / "snapshots";
  std::filesystem::create_directories(sdir);
  for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
    write_snapshot(sdir / snapshot_name(k, trace.snapshots[k].t), trace.snapshots[k], trace.alpha);
  }
}

FlowTrace read_trace_dir(const std::filesystem::path& dir) {
  FlowTrace trace;
  read_trace_csv(dir / "trace.csv", trace);
  const io::KeyValues meta = io::read_key_values(dir / "meta.cfg");
  auto num = [&](const char* key) {
    const auto it = meta.find(key);
    if (it == meta.end()) throw UsageError("meta.cfg lacks " + std::string(key));
    return io::parse_double(it->second);
  };
  trace.alpha = num("alpha");
  trace.T_extinction = num("T_extinction");
  trace.extinction_point = {num("extinction_x"), num("extinction_y")};
  trace.fit_residual = num("fit_residual");
  trace.initial_area = num("initial_area");
  trace.min_dt = num("min_dt");
  trace.max_dt = num("max_dt");
  trace.steps = long(num("steps"));
  trace.rejections = long(num("rejections"));
  trace.complete = num("complete") != 0.0;
  trace.renormalized = num("renormalized") != 0.0;
  const long count = long(num("snapshots"));

  std::vector<std::filesystem::path> files;
  const std::filesystem::path sdir = dir / "snapshots";
  if (std::filesystem::exists(sdir)) {
    for (const auto& e : std::filesystem::directory_iterator(sdir)) {
      if (e.path().extension() == ".snap") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (long(files.size()) != count) throw UsageError("snapshot count mismatch in " + dir.string());
  for (const auto& f : files) trace.snapshots.push_back(read_snapshot(f).state);
  return trace;
}

}  // namespace kalpha

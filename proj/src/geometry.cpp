#include "kalpha/geometry.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>
#include <fstream>
#include <sstream>
#include <vector>

#include "kalpha/io.hpp"

namespace kalpha {

Samples radius_of_curvature(const CurveState& state) { return support_radius(state.grid, state.h); }

SupportSolution solve_support_from_radius(const Samples& r, const ThetaGrid& grid) {
  detail::require_length(grid, r, "solve_support_from_radius");
  const auto [a1, b1] = fourier_mode(grid, r, 1);
  const double scale = r.abs().maxCoeff();
  if (std::abs(a1) > 1e-8 * scale || std::abs(b1) > 1e-8 * scale) {
    throw ClosureError("radius profile does not close: mode 1 = (" + io::fmt17(a1) + ", " +
                       io::fmt17(b1) + ")");
  }

  const Eigen::Index n = grid.size();
  std::vector<double> in(r.data(), r.data() + n);
  std::vector<std::complex<double>> spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, in);

  // Symbol of r(h) on e^{ik theta}: 1 - sin^2(k dtheta/2) / sin^2(dtheta/2).
  const double s1 = std::sin(0.5 * grid.spacing());
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == 1 || k == n - 1) {
      spectrum[std::size_t(k)] = 0.0;
      continue;
    }
    const double sk = std::sin(std::numbers::pi * double(k) / double(n));
    spectrum[std::size_t(k)] /= 1.0 - (sk * sk) / (s1 * s1);
  }
  std::vector<double> out;
  fft.inv(out, spectrum);

  SupportSolution sol;
  sol.h = Eigen::Map<const Samples>(out.data(), n);
  sol.residual = (support_radius(grid, sol.h) - r).abs().maxCoeff();
  return sol;
}

double area(const CurveState& state) {
  return 0.5 * quad(state.grid, (state.h * radius_of_curvature(state)).eval());
}

double perimeter(const CurveState& state) { return quad(state.grid, state.h); }

namespace {

Eigen::Matrix2Xd polyline_points(const CurveState& state) {
  const ThetaGrid& g = state.grid;
  const Samples dh = d1(g, state.h);
  Eigen::Matrix2Xd pts(2, g.size());
  pts.row(0) = (state.h * g.sin_nodes() + dh * g.cos_nodes()).matrix().transpose();
  pts.row(1) = (-state.h * g.cos_nodes() + dh * g.sin_nodes()).matrix().transpose();
  return pts;
}

}  // namespace

Eigen::Matrix2Xd reconstruct_polyline(const CurveState& state) {
  const Samples r = radius_of_curvature(state);
  if (!(r > 0.0).all()) {
    throw ConvexityError("reconstruct_polyline: radius of curvature not positive (min " +
                         io::fmt17(r.minCoeff()) + ")");
  }
  return polyline_points(state);
}

Diagnostics diagnostics(const CurveState& state) {
  const ThetaGrid& g = state.grid;
  Diagnostics d;
  d.ell = state.h[g.index_pi()];
  d.ell_minus = state.h[g.index_zero()];
  d.width_h = state.h[g.index_half_pi()];
  d.width_h_minus = state.h[g.index_minus_half_pi()];
  d.area = area(state);
  const Eigen::Index i0 = g.index_zero();
  const Eigen::Index n = g.size();
  const double s = std::sin(0.5 * g.spacing());
  const double r0 =
      state.h[i0] + (state.h[i0 + 1] - 2.0 * state.h[i0] + state.h[(i0 + n - 1) % n]) / (4.0 * s * s);
  d.tip_curvature = 1.0 / r0;
  d.L = d.ell + d.ell_minus;
  return d;
}

double hausdorff_distance(const CurveState& a, const CurveState& b) {
  if (!(a.grid == b.grid)) throw UsageError("hausdorff_distance: grids differ");
  return (a.h - b.h).abs().maxCoeff();
}

Eigen::Vector2d steiner_point(const CurveState& state) {
  const auto [a, b] = fourier_mode(state.grid, state.h, 1);
  return {b, -a};
}

Samples point_support(const ThetaGrid& grid, const Eigen::Vector2d& p) {
  return p.x() * grid.sin_nodes() - p.y() * grid.cos_nodes();
}

CurveState translated(const CurveState& state, const Eigen::Vector2d& p) {
  return CurveState(state.grid, state.h + point_support(state.grid, p), state.t);
}

CurveState centered(const CurveState& state) { return translated(state, -steiner_point(state)); }

Samples ellipse_support(const ThetaGrid& grid, double a, double b) {
  const Samples& s = grid.sin_nodes();
  const Samples& c = grid.cos_nodes();
  return (a * a * s * s + b * b * c * c).sqrt();
}

void write_snapshot(const std::filesystem::path& path, const CurveState& state, double alpha) {
  const Samples r = radius_of_curvature(state);
  const Eigen::Matrix2Xd pts = polyline_points(state);
  std::ostringstream os;
  os << "theta_nodes=" << state.grid.size() << " alpha=" << io::fmt17(alpha)
     << " t=" << io::fmt17(state.t) << '\n';
  for (Eigen::Index i = 0; i < state.grid.size(); ++i) {
    os << io::fmt17(state.grid.node(i)) << ' ' << io::fmt17(state.h[i]) << ' ' << io::fmt17(r[i])
       << ' ' << io::fmt17(pts(0, i)) << ' ' << io::fmt17(pts(1, i)) << '\n';
  }
  io::write_file(path, os.str());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open snapshot " + path.string());
  std::string header;
  std::getline(in, header);
  Eigen::Index n = 0;
  double alpha = 0.0;
  double t = 0.0;
  {
    std::istringstream hs(header);
    std::string field;
    int seen = 0;
    while (hs >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "theta_nodes") {
        n = std::stol(value);
        ++seen;
      } else if (key == "alpha") {
        alpha = io::parse_double(value);
        ++seen;
      } else if (key == "t") {
        t = io::parse_double(value);
        ++seen;
      }
    }
    if (seen != 3) throw UsageError("malformed snapshot header in " + path.string());
  }
  ThetaGrid grid(n);
  Samples h(n);
  std::string line;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw UsageError("truncated snapshot " + path.string());
    std::istringstream ls(line);
    std::string theta, hv;
    ls >> theta >> hv;
    h[i] = io::parse_double(hv);
  }
  return Snapshot{CurveState(grid, h, t), alpha};
}

}  // namespace kalpha

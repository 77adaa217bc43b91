#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "kalpha/errors.hpp"

namespace kalpha {

using Samples = Eigen::ArrayXd;

/// Uniform periodic grid over the turning angle, theta_i = -pi + 2 pi i / n.
///
/// n must be a multiple of 4 and at least 128 so that theta = 0, +-pi/2 and
/// pi are nodes. Node 0 is theta = -pi, which is identified with pi.
class ThetaGrid {
 public:
  explicit ThetaGrid(Eigen::Index n);

  Eigen::Index size() const { return n_; }
  double spacing() const { return spacing_; }

  /// theta_i, computed as (2i - n) pi / n so that mirrored nodes are exact negatives.
  double node(Eigen::Index i) const { return nodes_[i]; }
  const Samples& nodes() const { return nodes_; }

  /// sin and cos at the nodes, tabulated so the reflections theta -> -theta and
  /// theta -> pi - theta hold bit for bit.
  const Samples& sin_nodes() const { return sin_; }
  const Samples& cos_nodes() const { return cos_; }

  Eigen::Index index_pi() const { return 0; }
  Eigen::Index index_minus_half_pi() const { return n_ / 4; }
  Eigen::Index index_zero() const { return n_ / 2; }
  Eigen::Index index_half_pi() const { return 3 * n_ / 4; }

  /// Index of -theta_i.
  Eigen::Index mirror(Eigen::Index i) const { return (n_ - i) % n_; }

  /// Distance |theta_i| expressed as an integer multiple m of pi/n, m in [0, n].
  Eigen::Index abs_multiple(Eigen::Index i) const {
    const Eigen::Index k = 2 * i - n_;
    return k < 0 ? -k : k;
  }

  bool operator==(const ThetaGrid& other) const { return n_ == other.n_; }

 private:
  Eigen::Index n_;
  double spacing_;
  Samples nodes_;
  Samples sin_;
  Samples cos_;
};

namespace detail {

template <typename Derived>
void require_length(const ThetaGrid& grid, const Eigen::ArrayBase<Derived>& v, const char* op) {
  if (v.size() != grid.size()) {
    throw UsageError(std::string(op) + ": expected " + std::to_string(grid.size()) +
                     " samples, got " + std::to_string(v.size()));
  }
}

}  // namespace detail

/// Centered first difference (v_{i+1} - v_{i-1}) / (2 dtheta), periodic.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> d1(const ThetaGrid& grid,
                                                             const Eigen::ArrayBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(grid, v, "d1");
  const Eigen::Index n = grid.size();
  const Scalar inv = Scalar(1) / (Scalar(2) * Scalar(grid.spacing()));
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = (v[(i + 1) % n] - v[(i + n - 1) % n]) * inv;
  }
  return out;
}

/// Centered second difference (v_{i+1} - 2 v_i + v_{i-1}) / dtheta^2, periodic.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> d2(const ThetaGrid& grid,
                                                             const Eigen::ArrayBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(grid, v, "d2");
  const Eigen::Index n = grid.size();
  const Scalar inv = Scalar(1) / (Scalar(grid.spacing()) * Scalar(grid.spacing()));
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = (v[(i + 1) % n] - Scalar(2) * v[i] + v[(i + n - 1) % n]) * inv;
  }
  return out;
}

/// Periodic trapezoid rule, dtheta * sum(v).
template <typename Derived>
typename Derived::Scalar quad(const ThetaGrid& grid, const Eigen::ArrayBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  detail::require_length(grid, v, "quad");
  return Scalar(grid.spacing()) * v.sum();
}

/// (1/pi) quad(v cos k theta), (1/pi) quad(v sin k theta).
template <typename Derived>
std::pair<double, double> fourier_mode(const ThetaGrid& grid, const Eigen::ArrayBase<Derived>& v,
                                       int k) {
  detail::require_length(grid, v, "fourier_mode");
  if (k == 1) {
    return {quad(grid, (v * grid.cos_nodes()).eval()) / std::numbers::pi,
            quad(grid, (v * grid.sin_nodes()).eval()) / std::numbers::pi};
  }
  const Samples arg = double(k) * grid.nodes();
  return {quad(grid, (v * arg.cos()).eval()) / std::numbers::pi,
          quad(grid, (v * arg.sin()).eval()) / std::numbers::pi};
}

}  // namespace kalpha

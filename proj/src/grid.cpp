#include "kalpha/grid.hpp"

#include <vector>

namespace kalpha {

ThetaGrid::ThetaGrid(Eigen::Index n) : n_(n), spacing_(0.0) {
  if (n < 128 || n % 4 != 0) {
    throw UsageError("ThetaGrid: n must be a multiple of 4 and >= 128, got " + std::to_string(n));
  }
  spacing_ = 2.0 * std::numbers::pi / double(n);

  // sin(m pi / n) for m in [0, n/2]; every other value follows by reflection.
  const Eigen::Index half = n / 2;
  std::vector<double> quarter(std::size_t(half) + 1);
  for (Eigen::Index m = 0; m <= half; ++m) {
    quarter[std::size_t(m)] = std::sin(double(m) * std::numbers::pi / double(n));
  }
  quarter[0] = 0.0;
  quarter[std::size_t(half)] = 1.0;

  nodes_.resize(n);
  sin_.resize(n);
  cos_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index k = 2 * i - n;
    const Eigen::Index m = k < 0 ? -k : k;
    nodes_[i] = double(k) * std::numbers::pi / double(n);
    const double s = m <= half ? quarter[std::size_t(m)] : quarter[std::size_t(n - m)];
    sin_[i] = k < 0 ? -s : s;
    cos_[i] = m <= half ? quarter[std::size_t(half - m)] : -quarter[std::size_t(m - half)];
  }
}

}  // namespace kalpha

#pragma once

// Closed forms for the convex translating soliton moving with unit speed in
// the e2 direction, kappa^alpha = cos(theta), tip at the origin, opening
// upwards. The closed forms are templated on the scalar type so that the
// ill-conditioned depth <-> angle round trip can be checked in extended
// precision; the quadratures are double only.

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/expm1.hpp>
#include <boost/math/special_functions/log1p.hpp>

#include <cmath>
#include <string>

#include "kalpha/errors.hpp"

namespace kalpha {

namespace detail {

/// alpha within 1e-12 of 1 uses the grim reaper closed forms.
template <typename Scalar>
bool is_grim_reaper(const Scalar& alpha) {
  using std::abs;
  return abs(alpha - Scalar(1)) < Scalar(1e-12);
}

template <typename Scalar>
void require_alpha(const Scalar& alpha, const char* op) {
  if (!(alpha > Scalar(0.5) && alpha <= Scalar(1))) {
    throw DomainError(std::string(op) + ": alpha must lie in (1/2, 1]");
  }
}

template <typename Scalar>
void require_open_angle(const Scalar& theta, const char* op) {
  using std::abs;
  if (!(abs(theta) < boost::math::constants::half_pi<Scalar>())) {
    throw DomainError(std::string(op) + ": |theta| must be < pi/2");
  }
}

/// log cos(theta), accurate near 0 and near pi/2.
template <typename Scalar>
Scalar log_cos(const Scalar& theta) {
  using std::abs;
  using std::cos;
  using std::log;
  using std::sin;
  if (abs(theta) < boost::math::constants::quarter_pi<Scalar>()) {
    const Scalar s = sin(theta);
    return boost::math::log1p(-s * s) / Scalar(2);
  }
  return log(cos(theta));
}

/// alpha/(1-alpha) (cos^{1-1/alpha} - 1) from log cos; -log cos at alpha = 1.
/// expm1 keeps the alpha -> 1 limit free of cancellation.
template <typename Scalar>
Scalar depth_from_log_cos(const Scalar& lc, const Scalar& alpha) {
  if (is_grim_reaper(alpha)) return -lc;
  const Scalar k = (Scalar(1) - alpha) / alpha;
  return boost::math::expm1(-k * lc) / k;
}

/// log cos(theta_R) for the cap of depth R.
template <typename Scalar>
Scalar log_cos_cap_angle(const Scalar& R, const Scalar& alpha) {
  if (is_grim_reaper(alpha)) return -R;
  const Scalar k = (Scalar(1) - alpha) / alpha;
  return -boost::math::log1p(k * R) / k;
}

}  // namespace detail

/// kappa_T(theta) = cos(theta)^{1/alpha}.
template <typename Scalar>
Scalar translator_curvature(const Scalar& theta, const Scalar& alpha) {
  using std::exp;
  detail::require_alpha(alpha, "translator_curvature");
  detail::require_open_angle(theta, "translator_curvature");
  return exp(detail::log_cos(theta) / alpha);
}

/// Height of the translator above its tip at turning angle theta.
template <typename Scalar>
Scalar cap_depth(const Scalar& theta, const Scalar& alpha) {
  detail::require_alpha(alpha, "cap_depth");
  detail::require_open_angle(theta, "cap_depth");
  return detail::depth_from_log_cos(detail::log_cos(theta), alpha);
}

/// cap_depth(pi/2 - s, alpha) for s in (0, pi], exact in the complement angle.
template <typename Scalar>
Scalar cap_depth_complement(const Scalar& s, const Scalar& alpha) {
  using std::log;
  using std::sin;
  detail::require_alpha(alpha, "cap_depth_complement");
  if (!(s > Scalar(0) && s < boost::math::constants::pi<Scalar>())) {
    throw DomainError("cap_depth_complement: s must lie in (0, pi)");
  }
  return detail::depth_from_log_cos(Scalar(log(sin(s))), alpha);
}

/// Turning angle theta_R >= 0 at which the translator reaches height R.
template <typename Scalar>
Scalar cap_angle(const Scalar& R, const Scalar& alpha) {
  using std::atan2;
  using std::exp;
  using std::sqrt;
  detail::require_alpha(alpha, "cap_angle");
  if (!(R >= Scalar(0))) throw DomainError("cap_angle: R must be >= 0");
  const Scalar lc = detail::log_cos_cap_angle(R, alpha);
  const Scalar c = exp(lc);
  const Scalar s = sqrt(-boost::math::expm1(Scalar(2) * lc));
  return atan2(s, c);
}

/// pi/2 - cap_angle(R, alpha), computed without cancellation for large R.
template <typename Scalar>
Scalar cap_angle_complement(const Scalar& R, const Scalar& alpha) {
  using std::atan2;
  using std::exp;
  using std::sqrt;
  detail::require_alpha(alpha, "cap_angle_complement");
  if (!(R >= Scalar(0))) throw DomainError("cap_angle_complement: R must be >= 0");
  const Scalar lc = detail::log_cos_cap_angle(R, alpha);
  const Scalar c = exp(lc);
  const Scalar s = sqrt(-boost::math::expm1(Scalar(2) * lc));
  return atan2(c, s);
}

/// Width of the slab containing the translator, computed by two quadratures.
struct SlabWidth {
  double value = 0.0;        // from the turning-angle integral
  double graph_form = 0.0;   // from the integral over the graph variable y = tan(theta)
  double discrepancy = 0.0;  // |value - graph_form|
};

/// w_alpha = 2 int_0^{pi/2} cos^{1-1/alpha} = int_R (1+y^2)^{-(3-1/alpha)/2} dy.
SlabWidth slab_width(double alpha);

/// int_0^s sin(v)^{1-1/alpha} dv: the part of the half width carried by turning
/// angles within s of pi/2.
double cap_tail(double s, double alpha);

/// X(theta) = int_0^theta cos^{1-1/alpha}: horizontal offset of the translator
/// point with turning angle theta. Odd in theta, theta = +-pi/2 allowed.
double cap_halfwidth(double theta, double alpha);

/// X(pi/2 - s), accurate when s is tiny.
double cap_halfwidth_complement(double s, double alpha);

/// (2 alpha / (2 alpha - 1)) tan(theta0)^{(1-2alpha)/alpha}, an upper bound for
/// w_alpha - 2 X(theta0).
double width_deficit_bound(double theta0, double alpha);

/// Tabulated-on-demand view of the translator for one alpha.
class TranslatorProfile {
 public:
  explicit TranslatorProfile(double alpha);

  double alpha() const { return alpha_; }
  double w_alpha() const { return width_.value; }
  const SlabWidth& slab() const { return width_; }

  double kappa(double theta) const { return translator_curvature(theta, alpha_); }
  double X(double theta) const { return cap_halfwidth(theta, alpha_); }
  double Y(double theta) const { return cap_depth(theta, alpha_); }

 private:
  double alpha_;
  SlabWidth width_;
};

}  // namespace kalpha

#include "kalpha/translator.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

namespace kalpha {

namespace {

constexpr double kQuadTol = 1e-13;

boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  return rule;
}

double exponent_p(double alpha) { return 1.0 - 1.0 / alpha; }

// int_0^s sin(v)^p dv, p in (-1, 0]. The integrand is singular at v = 0 only.
double sine_power_integral(double s, double p) {
  if (s <= 0.0) return 0.0;
  if (p == 0.0) return s;
  auto f = [p](double v) { return v > 0.0 ? std::pow(std::sin(v), p) : 0.0; };
  if (s <= std::numbers::pi / 2) return tanh_sinh_rule().integrate(f, 0.0, s, kQuadTol);
  const double head = tanh_sinh_rule().integrate(f, 0.0, std::numbers::pi / 2, kQuadTol);
  auto g = [p](double u) { return std::pow(std::cos(u), p); };
  return head + boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                    g, 0.0, s - std::numbers::pi / 2, 15, kQuadTol);
}

// int_0^phi cos(u)^p du for phi in [0, pi/4]: smooth integrand.
double cosine_power_head(double phi, double p) {
  if (p == 0.0) return phi;
  auto g = [p](double u) { return std::pow(std::cos(u), p); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, phi, 15, kQuadTol);
}

double half_width_cached(double alpha) {
  thread_local double cached_alpha = 0.0;
  thread_local double cached_half = 0.0;
  if (alpha != cached_alpha) {
    cached_half = 0.5 * slab_width(alpha).value;
    cached_alpha = alpha;
  }
  return cached_half;
}

}  // namespace

SlabWidth slab_width(double alpha) {
  detail::require_alpha(alpha, "slab_width");
  SlabWidth out;
  if (detail::is_grim_reaper(alpha)) {
    out.value = out.graph_form = std::numbers::pi;
    return out;
  }
  const double p = exponent_p(alpha);
  out.value = 2.0 * sine_power_integral(std::numbers::pi / 2, p);

  // Over y = tan(theta): int_0^1 (1+y^2)^{-q} + int_0^1 s^p (1+s^2)^{-q} after y = 1/s.
  const double q = 0.5 * (3.0 - 1.0 / alpha);
  auto near = [q](double y) { return std::pow(1.0 + y * y, -q); };
  auto far = [p, q](double s) { return s > 0.0 ? std::pow(s, p) * std::pow(1.0 + s * s, -q) : 0.0; };
  const double a =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(near, 0.0, 1.0, 15, kQuadTol);
  const double b = tanh_sinh_rule().integrate(far, 0.0, 1.0, kQuadTol);
  out.graph_form = 2.0 * (a + b);
  out.discrepancy = std::abs(out.value - out.graph_form);
  return out;
}

double cap_tail(double s, double alpha) {
  detail::require_alpha(alpha, "cap_tail");
  if (!(s >= 0.0 && s <= std::numbers::pi / 2)) throw DomainError("cap_tail: s must lie in [0, pi/2]");
  return sine_power_integral(s, exponent_p(alpha));
}

double cap_halfwidth_complement(double s, double alpha) {
  detail::require_alpha(alpha, "cap_halfwidth_complement");
  if (!(s >= 0.0 && s <= std::numbers::pi)) {
    throw DomainError("cap_halfwidth_complement: s must lie in [0, pi]");
  }
  const double p = exponent_p(alpha);
  if (s > std::numbers::pi / 2) return -cap_halfwidth_complement(std::numbers::pi - s, alpha);
  if (s < std::numbers::pi / 4) return half_width_cached(alpha) - sine_power_integral(s, p);
  return cosine_power_head(std::numbers::pi / 2 - s, p);
}

double cap_halfwidth(double theta, double alpha) {
  detail::require_alpha(alpha, "cap_halfwidth");
  if (!(std::abs(theta) <= std::numbers::pi / 2)) {
    throw DomainError("cap_halfwidth: |theta| must be <= pi/2");
  }
  const double phi = std::abs(theta);
  const double sign = theta < 0.0 ? -1.0 : 1.0;
  if (phi <= std::numbers::pi / 4) return sign * cosine_power_head(phi, exponent_p(alpha));
  return sign * cap_halfwidth_complement(std::numbers::pi / 2 - phi, alpha);
}

double width_deficit_bound(double theta0, double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw DomainError("width_deficit_bound: alpha must lie in (1/2, 1)");
  if (!(theta0 > 0.0 && theta0 < std::numbers::pi / 2)) {
    throw DomainError("width_deficit_bound: theta0 must lie in (0, pi/2)");
  }
  return 2.0 * alpha / (2.0 * alpha - 1.0) * std::pow(std::tan(theta0), (1.0 - 2.0 * alpha) / alpha);
}

TranslatorProfile::TranslatorProfile(double alpha) : alpha_(alpha), width_(slab_width(alpha)) {}

}  // namespace kalpha

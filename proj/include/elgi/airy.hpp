#ifndef ELGI_AIRY_HPP
#define ELGI_AIRY_HPP

// Airy function Ai(x) for real x.
//
//   x <= -8        asymptotic oscillatory series, truncated at its smallest term
//   -8 < x < 1     Maclaurin series in long double
//   x >= 1         Ai(x) = sqrt(x/3)/pi K_{1/3}(zeta), zeta = 2/3 x^{3/2}, with
//                  K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt by the
//                  trapezoid rule (exponentially convergent for this integrand)

#include <cmath>
#include <numbers>

namespace elgi {

namespace detail {

inline constexpr long double airy_c1 = 0.355028053887817239260063186004183558L;  // Ai(0)
inline constexpr long double airy_c2 = 0.258819403792806798405183560189203963L;  // -Ai'(0)

inline double airy_maclaurin(double xd) {
  const long double x = xd;
  const long double x3 = x * x * x;
  long double f = 0.0L, g = 0.0L, tf = 1.0L, tg = x;
  for (int k = 0; k < 400; ++k) {
    f += tf;
    g += tg;
    tf *= x3 / static_cast<long double>((3 * k + 2) * (3 * k + 3));
    tg *= x3 / static_cast<long double>((3 * k + 3) * (3 * k + 4));
    if (std::abs(tf) + std::abs(tg) < 1e-22L * (std::abs(f) + std::abs(g)) + 1e-300L) break;
  }
  return static_cast<double>(airy_c1 * f - airy_c2 * g);
}

/// exp(zeta) * Ai(x) for x > 0.
inline double airy_scaled_positive(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  // Integrand exp(-zeta (cosh t - 1)) cosh(t/3); stop once it is below 1e-20.
  const double t_max = std::acosh(1.0 + 46.0 / zeta);
  const int steps = 200;
  const double h = t_max / steps;
  double sum = 0.5;
  for (int k = 1; k <= steps; ++k) {
    const double t = k * h;
    sum += std::exp(-zeta * (std::cosh(t) - 1.0)) * std::cosh(t / 3.0);
  }
  return std::sqrt(x / 3.0) / std::numbers::pi * h * sum;
}

/// Ai(-z) for large z from the oscillatory asymptotic expansion.
inline double airy_asymptotic_negative(double z) {
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  // u_k = (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k) u_{k-1}
  double even = 0.0, odd = 0.0;
  double u = 1.0, zpow = 1.0, last = HUGE_VAL;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) u *= (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
    const double term = u / zpow;
    if (term > last) break;  // asymptotic series: stop at the smallest term
    last = term;
    const double sign = ((k / 2) % 2) ? -1.0 : 1.0;
    if (k % 2 == 0) even += sign * term;
    else odd += sign * term;
    zpow *= zeta;
    if (term < 1e-18) break;
  }
  const double phase = zeta + std::numbers::pi / 4.0;
  return (std::sin(phase) * even - std::cos(phase) * odd) / (std::sqrt(std::numbers::pi) * std::pow(z, 0.25));
}

}  // namespace detail

inline constexpr double airy_series_lower = -8.0;
inline constexpr double airy_series_upper = 1.0;

inline double airy_ai(double x) {
  if (std::isnan(x)) return x;
  if (x <= airy_series_lower) return detail::airy_asymptotic_negative(-x);
  if (x < airy_series_upper) return detail::airy_maclaurin(x);
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  return detail::airy_scaled_positive(x) * std::exp(-zeta);
}

/// ln |Ai(x)| for x > 0 without underflow.
inline double log_airy_ai_positive(double x) {
  if (x < airy_series_upper) return std::log(std::abs(airy_ai(x)));
  return std::log(detail::airy_scaled_positive(x)) - 2.0 / 3.0 * x * std::sqrt(x);
}

}  // namespace elgi

#endif  // ELGI_AIRY_HPP

#ifndef ELGI_SEMICLASSICS_HPP
#define ELGI_SEMICLASSICS_HPP

// Large-j (uniform WKB / Airy) description of the d-matrix.
//
// With J = j + 1/2, mu = m/J, nu = n/J the discriminant
//   R(beta) = sin^2 beta - mu^2 - nu^2 + 2 mu nu cos beta
// is positive between the turning points beta_+ <= beta_-.  The action
// S_+ is anchored at beta_+, S_- at beta_-, with dS_pm/dbeta = -+ sqrt|R| / sin beta.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "elgi/airy.hpp"
#include "elgi/shannon_cone.hpp"
#include "elgi/spin.hpp"
#include "elgi/temporal.hpp"

namespace elgi {

struct ReducedIndices {
  double mu = 0.0;
  double nu = 0.0;

  static ReducedIndices of(Spin spin, MagneticIndex m, MagneticIndex n) {
    require_index(spin, m, "ReducedIndices");
    require_index(spin, n, "ReducedIndices");
    return {m.m() / spin.big_j(), n.m() / spin.big_j()};
  }
};

inline double discriminant(double mu, double nu, double beta) {
  const double s = std::sin(beta);
  return s * s - mu * mu - nu * nu + 2.0 * mu * nu * std::cos(beta);
}

inline double discriminant(Spin spin, MagneticIndex m, MagneticIndex n, double beta) {
  const auto r = ReducedIndices::of(spin, m, n);
  return discriminant(r.mu, r.nu, beta);
}

/// J^2 sin^2 beta - m^2 - n^2 + 2 m n cos beta.
inline double discriminant_scaled(Spin spin, MagneticIndex m, MagneticIndex n, double beta) {
  const double big_j = spin.big_j();
  return big_j * big_j * discriminant(spin, m, n, beta);
}

struct TurningPoints {
  double beta_plus = 0.0;   // lower
  double beta_minus = 0.0;  // upper
};

inline TurningPoints turning_points(double mu, double nu) {
  if (!(std::abs(mu) < 1.0) || !(std::abs(nu) < 1.0))
    throw std::domain_error("turning_points: |mu| and |nu| must be below 1");
  const double a = std::sqrt((1.0 - mu * mu) * (1.0 - nu * nu));
  const double p = mu * nu;
  return {std::acos(std::clamp(p + a, -1.0, 1.0)), std::acos(std::clamp(p - a, -1.0, 1.0))};
}

enum class Branch { Plus, Minus };

namespace detail {

// atan(num / (c r)) written so that r = 0 gives the limit.
inline double atan_ratio(double num, double c, double r) {
  return std::atan2(c < 0 ? -num : num, std::abs(c) * r);
}

// -sqrt(R)/sin beta antiderivative on the allowed arm.
inline double action_allowed(double mu, double nu, double beta) {
  const double r = std::sqrt(std::max(discriminant(mu, nu, beta), 0.0));
  const double u = std::cos(beta) - mu * nu;
  const double a2 = (1.0 - mu * mu) * (1.0 - nu * nu);
  double g = std::atan2(u, r);
  if (mu + nu != 0.0) g -= 0.5 * (mu + nu) * atan_ratio(u * (1.0 + mu * nu) + a2, mu + nu, r);
  if (mu - nu != 0.0) g += 0.5 * (mu - nu) * atan_ratio(-u * (1.0 - mu * nu) + a2, mu - nu, r);
  return g;
}

// -sqrt(-R)/sin beta antiderivative on the forbidden arms, zero at both turning points.
inline double action_forbidden(double mu, double nu, double beta) {
  const double r = std::sqrt(std::max(-discriminant(mu, nu, beta), 0.0));
  const double u = std::cos(beta) - mu * nu;
  const double a2 = (1.0 - mu * mu) * (1.0 - nu * nu);
  // arcoth(num / (c r)) = atanh(c r / num)
  double k = -std::atanh(r / u);
  if (mu + nu != 0.0) k += 0.5 * (mu + nu) * std::atanh((mu + nu) * r / (u * (1.0 + mu * nu) + a2));
  if (mu - nu != 0.0) k -= 0.5 * (mu - nu) * std::atanh((mu - nu) * r / (-u * (1.0 - mu * nu) + a2));
  return k;
}

}  // namespace detail

/// S_+ on (0, beta_-], S_- on [beta_+, pi).
inline double action(double mu, double nu, double beta, Branch branch) {
  const auto tp = turning_points(mu, nu);
  if (!(beta > 0.0 && beta < std::numbers::pi)) throw std::domain_error("action: beta must lie in (0, pi)");
  if (branch == Branch::Plus) {
    if (beta > tp.beta_minus) throw std::domain_error("action: beta beyond beta_- on the + branch");
    if (beta == tp.beta_plus) return 0.0;
    if (beta < tp.beta_plus) return detail::action_forbidden(mu, nu, beta);
    return detail::action_allowed(mu, nu, beta) - detail::action_allowed(mu, nu, tp.beta_plus);
  }
  if (beta < tp.beta_plus) throw std::domain_error("action: beta below beta_+ on the - branch");
  if (beta == tp.beta_minus) return 0.0;
  if (beta > tp.beta_minus) return -detail::action_forbidden(mu, nu, beta);
  return detail::action_allowed(mu, nu, tp.beta_minus) - detail::action_allowed(mu, nu, beta);
}

/// zeta < 0 where R > 0, zeta > 0 where R < 0.
inline double zeta(double big_j, double mu, double nu, double beta, Branch branch) {
  const double s = action(mu, nu, beta, branch);
  const double mag = std::cbrt(std::pow(1.5 * big_j * std::abs(s), 2.0));
  return discriminant(mu, nu, beta) > 0.0 ? -mag : mag;
}

struct RegionTag {
  enum class Kind { Allowed, Forbidden, Boundary };
  Kind kind = Kind::Allowed;
  double width = 0.0;  // eps used for the boundary layer

  std::string to_string() const {
    switch (kind) {
      case Kind::Allowed: return "allowed";
      case Kind::Forbidden: return "forbidden";
      case Kind::Boundary: return "boundary";
    }
    return "?";
  }
};

/// Signed distance to the ellipse R = 0 in the radial coordinate of the
/// map x = (mu+nu) sin(beta/2), y = (mu-nu) cos(beta/2); positive outside.
inline double radial_distance(double mu, double nu, double beta) {
  const double x = (mu + nu) * std::sin(0.5 * beta);
  const double y = (mu - nu) * std::cos(0.5 * beta);
  return std::hypot(x, y) - std::abs(std::sin(beta));
}

inline double default_boundary_width(Spin spin) { return std::pow(spin.big_j(), -2.0 / 3.0); }

inline RegionTag classify_region(Spin spin, MagneticIndex m, MagneticIndex n, double beta, double eps) {
  if (!(eps >= 0.0)) throw std::domain_error("classify_region: eps must be non-negative");
  const auto r = ReducedIndices::of(spin, m, n);
  const double dist = radial_distance(r.mu, r.nu, beta);
  if (eps > 0.0 && std::abs(dist) < eps) return {RegionTag::Kind::Boundary, eps};
  if (eps == 0.0 && dist == 0.0) return {RegionTag::Kind::Forbidden, eps};
  return {dist < 0.0 ? RegionTag::Kind::Allowed : RegionTag::Kind::Forbidden, eps};
}

inline RegionTag classify_region(Spin spin, MagneticIndex m, MagneticIndex n, double beta) {
  return classify_region(spin, m, n, beta, default_boundary_width(spin));
}

struct WkbElement {
  double value = 0.0;
  double zeta = 0.0;
  double action = 0.0;
  RegionTag region;
  Branch branch = Branch::Plus;
  bool reliable = true;
};

/// Switch to the analytic limit of (-zeta/R) this close to the anchor.
inline constexpr double turning_point_switch = 1e-4;

inline WkbElement d_wkb(Spin spin, MagneticIndex m, MagneticIndex n, double beta) {
  if (!(beta > 0.0 && beta < std::numbers::pi)) throw std::domain_error("d_wkb: beta must lie in (0, pi)");
  const auto ri = ReducedIndices::of(spin, m, n);
  const double mu = ri.mu, nu = ri.nu, big_j = spin.big_j();
  const auto tp = turning_points(mu, nu);

  WkbElement out;
  if (beta <= tp.beta_plus) out.branch = Branch::Plus;
  else if (beta >= tp.beta_minus) out.branch = Branch::Minus;
  else out.branch = (beta - tp.beta_plus <= tp.beta_minus - beta) ? Branch::Plus : Branch::Minus;
  const double anchor = out.branch == Branch::Plus ? tp.beta_plus : tp.beta_minus;

  out.action = action(mu, nu, beta, out.branch);
  out.zeta = zeta(big_j, mu, nu, beta, out.branch);
  out.region = classify_region(spin, m, n, beta);

  const double r = discriminant(mu, nu, beta);
  const double sin_anchor = std::sin(anchor);
  double ratio;  // -zeta / R
  if (std::abs(beta - anchor) < turning_point_switch && sin_anchor > 1e-8) {
    const double slope = std::abs(2.0 * sin_anchor * (std::cos(anchor) - mu * nu));
    ratio = std::cbrt(big_j * big_j / (slope * slope * sin_anchor * sin_anchor));
  } else {
    ratio = (r == 0.0) ? 0.0 : -out.zeta / r;
  }

  const int diff = (n.twice_m() - m.twice_m()) / 2;
  double sign = (diff > 0 && diff % 2 != 0) ? -1.0 : 1.0;
  // The beta_- solution differs from the beta_+ one by the parity of the
  // number of nodes on (0, pi), j - max(|m|, |n|).
  const int nodes = (spin.twice_j() - std::max(std::abs(m.twice_m()), std::abs(n.twice_m()))) / 2;
  if (out.branch == Branch::Minus && nodes % 2 != 0) sign = -sign;
  out.value = sign * std::sqrt(2.0 / big_j) * airy_ai(out.zeta) * std::pow(std::max(ratio, 0.0), 0.25);
  // Airy width of the transition layer at the anchor
  const double a = std::sqrt((1.0 - mu * mu) * (1.0 - nu * nu));
  const double width = std::cbrt(std::pow(sin_anchor / (big_j * std::sqrt(2.0 * sin_anchor * a)), 2.0));
  out.reliable = (tp.beta_minus - tp.beta_plus) > 4.0 * width && std::sin(beta) > 1.0 / big_j;
  return out;
}

/// Locally averaged |d|^2 in the allowed interior.
inline double allowed_envelope(double big_j, double r) {
  return 1.0 / (std::numbers::pi * big_j * std::sqrt(r));
}

/// Leading |d|^2 decay scale in the forbidden region, exp(-2J|S|)/(pi J sqrt|R|),
/// returned as its natural log.
inline double log_forbidden_bound(double big_j, double s, double r) {
  return -2.0 * big_j * std::abs(s) - std::log(std::numbers::pi * big_j * std::sqrt(std::abs(r)));
}

inline double entropy_asymptotic(Spin spin, double beta) {
  return std::log(spin.dim() * std::numbers::pi) + std::log(std::abs(std::sin(beta))) - 2.5;
}

namespace detail {

inline double log_sin_checked(double x, const char* what) {
  const double s = std::abs(std::sin(x));
  if (s < 1e-12) throw std::domain_error(std::string(what) + ": angle at a multiple of pi");
  return std::log(s);
}

}  // namespace detail

/// The large-j limit of the maximally mixed D_i or D_{i,k}: every H_j in the
/// closed form replaced by entropy_asymptotic.  Pair targets are j-independent.
inline double asymptotic_D(Spin spin, const Schedule& schedule, DTarget t) {
  const double c = std::log(spin.dim() * std::numbers::pi) - 2.5;
  return detail::closed_form(schedule.n(), t, std::log(static_cast<double>(spin.dim())), [&](int a, int b) {
    return c + detail::log_sin_checked(schedule.beta(a, b), "asymptotic_D");
  });
}

/// ln|sin b_{i-1,i+1} sin b_{i,i+2} / (sin b_{i-1,i+2} sin b_{i,i+1})| for interior pairs.
inline double asymptotic_D_pair(const Schedule& schedule, int i) {
  return asymptotic_D(Spin(1), schedule, DTarget::pair(i, i + 1));
}

}  // namespace elgi

#endif  // ELGI_SEMICLASSICS_HPP

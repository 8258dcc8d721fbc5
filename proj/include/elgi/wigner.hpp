#ifndef ELGI_WIGNER_HPP
#define ELGI_WIGNER_HPP

// Real Wigner d-matrices d^j(beta) for rotations about the y axis.
//
// Convention: d(m, n, beta) = <j,n| exp(-i beta J_y) |j,m>, so m labels the
// ket and n the bra.  A DMatrix stores row n, column m, both in descending
// order +j ... -j.  The sign convention makes
//   d^{1/2}(beta) = [[cos(beta/2), -sin(beta/2)], [sin(beta/2), cos(beta/2)]].

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "elgi/spin.hpp"

namespace elgi {

class DMatrix {
public:
  DMatrix() = default;
  DMatrix(Spin spin, double beta, std::vector<double> elems)
      : spin_(spin), beta_(beta), elems_(std::move(elems)) {
    if (elems_.size() != static_cast<std::size_t>(spin_.dim()) * spin_.dim())
      throw std::invalid_argument("DMatrix: element count does not match spin");
  }

  Spin spin() const { return spin_; }
  double beta() const { return beta_; }
  int dim() const { return spin_.dim(); }

  /// Entry by position: row = bra index, col = ket index, 0 <-> m = +j.
  double operator()(int row, int col) const { return elems_[static_cast<std::size_t>(row) * dim() + col]; }

  /// d^j_{mn}(beta) with m the ket label and n the bra label.
  double element(MagneticIndex m, MagneticIndex n) const {
    return (*this)(n.row(spin_), m.row(spin_));
  }

  std::span<const double> row(int r) const {
    return {elems_.data() + static_cast<std::size_t>(r) * dim(), static_cast<std::size_t>(dim())};
  }
  std::span<const double> data() const { return elems_; }

  /// max |d d^T - I|.
  double orthogonality_defect() const {
    const int n = dim();
    double worst = 0.0;
    for (int a = 0; a < n; ++a) {
      const double* ra = elems_.data() + static_cast<std::size_t>(a) * n;
      for (int b = a; b < n; ++b) {
        const double* rb = elems_.data() + static_cast<std::size_t>(b) * n;
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += ra[k] * rb[k];
        worst = std::max(worst, std::abs(acc - (a == b ? 1.0 : 0.0)));
      }
    }
    return worst;
  }

private:
  Spin spin_{};
  double beta_ = 0.0;
  std::vector<double> elems_ = std::vector<double>(1, 1.0);
};

/// Result of mapping an arbitrary (m, n, beta) onto beta' in [0, pi]:
/// d_{mn}(beta) = sign * d_{m'n'}(beta').
struct CanonicalElement {
  MagneticIndex m;
  MagneticIndex n;
  double beta = 0.0;
  int sign = 1;
  bool transposed = false;
};

inline CanonicalElement apply_symmetry(Spin spin, MagneticIndex m, MagneticIndex n, double beta) {
  constexpr double pi = std::numbers::pi;
  if (beta >= 0.0 && beta <= pi) return {m, n, beta, 1, false};

  const double turns = std::floor(beta / (2.0 * pi));
  double reduced = beta - 2.0 * pi * turns;
  long long k = static_cast<long long>(turns);
  if (reduced > pi) {
    reduced -= 2.0 * pi;
    k += 1;
  }
  const int sign = (spin.is_half_integer() && (k & 1LL)) ? -1 : 1;
  if (reduced < 0.0) return {n, m, -reduced, sign, true};
  return {m, n, reduced, sign, false};
}

namespace detail {

inline long double log_factorial(long long k) { return std::lgamma(static_cast<long double>(k) + 1.0L); }

// Level-by-level coupling of spin t/2 = (t-1)/2 (x) 1/2; beta must lie in [0, pi].
inline std::vector<double> coupled_d_matrix(int twice_j, double beta) {
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  const int dim = twice_j + 1;

  std::vector<double> cur(static_cast<std::size_t>(dim) * dim, 0.0);
  std::vector<double> nxt(cur.size(), 0.0);
  std::vector<double> up(dim), down(dim);
  cur[0] = 1.0;

  for (int t = 1; t <= twice_j; ++t) {
    const int d_old = t;
    const int d_new = t + 1;
    for (int a = 0; a < d_new; ++a) {
      up[a] = std::sqrt(static_cast<double>(t - a) / t);
      down[a] = std::sqrt(static_cast<double>(a) / t);
    }
    // Both buffers use the final stride `dim` so no reshuffling is needed.
    for (int r = 0; r < d_new; ++r) {
      const double* old_r = (r < d_old) ? cur.data() + static_cast<std::size_t>(r) * dim : nullptr;
      const double* old_rm = (r > 0) ? cur.data() + static_cast<std::size_t>(r - 1) * dim : nullptr;
      double* out = nxt.data() + static_cast<std::size_t>(r) * dim;
      const double ur = up[r];
      const double dr = down[r];
      for (int k = 0; k < d_new; ++k) {
        double acc = 0.0;
        if (old_r) {
          if (k < d_old) acc += up[k] * old_r[k] * c;
          if (k > 0) acc -= down[k] * old_r[k - 1] * s;
          acc *= ur;
        }
        if (old_rm) {
          double lo = 0.0;
          if (k < d_old) lo += up[k] * old_rm[k] * s;
          if (k > 0) lo += down[k] * old_rm[k - 1] * c;
          acc += dr * lo;
        }
        out[k] = acc;
      }
    }
    std::swap(cur, nxt);
  }
  return cur;
}

}  // namespace detail

/// Full d^j(beta) for any real beta.  Built by repeated coupling with spin
/// 1/2, which keeps the matrix orthogonal to rounding level for large j.
inline DMatrix d_matrix(Spin spin, double beta) {
  const auto canon = apply_symmetry(spin, MagneticIndex(spin.twice_j()), MagneticIndex(spin.twice_j()), beta);
  auto elems = detail::coupled_d_matrix(spin.twice_j(), canon.beta);
  const int dim = spin.dim();
  if (canon.transposed) {
    for (int r = 0; r < dim; ++r)
      for (int c = r + 1; c < dim; ++c)
        std::swap(elems[static_cast<std::size_t>(r) * dim + c], elems[static_cast<std::size_t>(c) * dim + r]);
  }
  if (canon.sign < 0)
    for (auto& e : elems) e = -e;
  return DMatrix(spin, beta, std::move(elems));
}

/// Wigner's explicit sum for a single element, the reference oracle for
/// d_matrix.  Requires beta in [0, pi]; reduce with apply_symmetry first.
/// Terms are accumulated in long double with Neumaier summation, which
/// keeps the absolute error below 1e-10 for 2j <= 60.
inline double d_element_series(Spin spin, MagneticIndex m, MagneticIndex n, double beta) {
  require_index(spin, m, "d_element_series");
  require_index(spin, n, "d_element_series");
  if (!(beta >= 0.0 && beta <= std::numbers::pi))
    throw std::domain_error("d_element_series: beta must lie in [0, pi]");

  const long long tj = spin.twice_j();
  const long long jpm = (tj + m.twice_m()) / 2;
  const long long jmm = (tj - m.twice_m()) / 2;
  const long long jpn = (tj + n.twice_m()) / 2;
  const long long jmn = (tj - n.twice_m()) / 2;
  const long long n_minus_m = (n.twice_m() - m.twice_m()) / 2;

  const long long s_min = std::max(0LL, -n_minus_m);
  const long long s_max = std::min(jpm, jmn);
  if (s_min > s_max) return 0.0;

  const long double c = std::cos(0.5L * static_cast<long double>(beta));
  const long double sn = std::sin(0.5L * static_cast<long double>(beta));
  const long double log_c = std::log(std::abs(c));
  const long double log_s = std::log(std::abs(sn));

  using detail::log_factorial;
  long double log_coef = 0.5L * (log_factorial(jpm) + log_factorial(jmm) + log_factorial(jpn) + log_factorial(jmn)) -
                         log_factorial(jpm - s_min) - log_factorial(s_min) - log_factorial(n_minus_m + s_min) -
                         log_factorial(jmn - s_min);
  int sign = ((n_minus_m + s_min) & 1LL) ? -1 : 1;

  long double sum = 0.0L;
  long double comp = 0.0L;
  for (long long s = s_min; s <= s_max; ++s) {
    const long long cos_pow = jpm + jmn - 2 * s;
    const long long sin_pow = n_minus_m + 2 * s;
    long double log_term = log_coef;
    bool zero = false;
    if (cos_pow > 0) {
      if (c == 0.0L) zero = true;
      else log_term += static_cast<long double>(cos_pow) * log_c;
    }
    if (sin_pow > 0) {
      if (sn == 0.0L) zero = true;
      else log_term += static_cast<long double>(sin_pow) * log_s;
    }
    if (!zero) {
      const long double term = sign * std::exp(log_term);
      const long double t = sum + term;
      if (std::abs(sum) >= std::abs(term)) comp += (sum - t) + term;
      else comp += (term - t) + sum;
      sum = t;
    }
    if (s < s_max) {
      // coef(s+1)/coef(s) = -(j+m-s)(j-n-s) / ((s+1)(n-m+s+1))
      log_coef += std::log(static_cast<long double>(jpm - s)) + std::log(static_cast<long double>(jmn - s)) -
                  std::log(static_cast<long double>(s + 1)) - std::log(static_cast<long double>(n_minus_m + s + 1));
      sign = -sign;
    }
  }
  return static_cast<double>(sum + comp);
}

/// Leading small-angle behaviour of d^j_{mn}(beta): with a = max(m,n),
/// b = min(m,n), magnitude sqrt((j+a)!(j-b)!/((j+b)!(j-a)!)) (beta/2)^{a-b}/(a-b)!.
/// The sign follows the full series, (-1)^{max(0, n-m)}.
inline double small_beta_leading(Spin spin, MagneticIndex m, MagneticIndex n, double beta) {
  require_index(spin, m, "small_beta_leading");
  require_index(spin, n, "small_beta_leading");
  const long long tj = spin.twice_j();
  const long long ta = std::max(m.twice_m(), n.twice_m());
  const long long tb = std::min(m.twice_m(), n.twice_m());
  const long long k = (ta - tb) / 2;
  if (k == 0) return 1.0;
  using detail::log_factorial;
  const long double log_mag = 0.5L * (log_factorial((tj + ta) / 2) + log_factorial((tj - tb) / 2) -
                                      log_factorial((tj + tb) / 2) - log_factorial((tj - ta) / 2)) -
                              log_factorial(k) + static_cast<long double>(k) * std::log(0.5L * std::abs(beta));
  const int sign = (n.twice_m() > m.twice_m() && (k & 1LL)) ? -1 : 1;
  const double beta_sign = (beta < 0.0 && (k & 1LL)) ? -1.0 : 1.0;
  return sign * beta_sign * static_cast<double>(std::exp(log_mag));
}

}  // namespace elgi

#endif  // ELGI_WIGNER_HPP

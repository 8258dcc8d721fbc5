#ifndef ELGI_LP_HPP
#define ELGI_LP_HPP

// Exact-rational feasibility LP: find x >= 0 with A x = b.  Phase-one
// simplex with Bland's rule, so it terminates without cycling.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace elgi {

using Rational = boost::multiprecision::cpp_rational;

/// `rows` is A in row-major form (every row has the same length).  Returns a
/// basic feasible x, or nullopt if none exists.
inline std::optional<std::vector<Rational>> nonnegative_solution(const std::vector<std::vector<Rational>>& rows,
                                                                 const std::vector<Rational>& b) {
  const std::size_t m = rows.size();
  if (b.size() != m) throw std::invalid_argument("nonnegative_solution: size mismatch");
  const std::size_t n = m ? rows.front().size() : 0;
  for (const auto& r : rows)
    if (r.size() != n) throw std::invalid_argument("nonnegative_solution: ragged matrix");

  // Columns: n structural, m artificial, then the right-hand side.
  const std::size_t width = n + m + 1;
  const std::size_t rhs = n + m;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(width));
  std::vector<std::size_t> basis(m);
  std::vector<Rational> cost(width);

  for (std::size_t r = 0; r < m; ++r) {
    const bool flip = b[r] < 0;
    for (std::size_t c = 0; c < n; ++c) t[r][c] = flip ? Rational(-rows[r][c]) : rows[r][c];
    t[r][n + r] = 1;
    t[r][rhs] = flip ? Rational(-b[r]) : b[r];
    basis[r] = n + r;
    for (std::size_t c = 0; c < n; ++c) cost[c] -= t[r][c];
    cost[rhs] -= t[r][rhs];
  }

  for (;;) {
    std::size_t enter = width;
    for (std::size_t c = 0; c < rhs; ++c)
      if (cost[c] < 0) {
        enter = c;
        break;
      }
    if (enter == width) break;

    std::size_t leave = m;
    Rational best;
    for (std::size_t r = 0; r < m; ++r) {
      if (t[r][enter] <= 0) continue;
      Rational ratio = t[r][rhs] / t[r][enter];
      if (leave == m || ratio < best || (ratio == best && basis[r] < basis[leave])) {
        leave = r;
        best = std::move(ratio);
      }
    }
    if (leave == m) break;  // unbounded direction; cannot happen for phase one

    const Rational pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave || t[r][enter] == 0) continue;
      const Rational f = t[r][enter];
      for (std::size_t c = 0; c < width; ++c)
        if (t[leave][c] != 0) t[r][c] -= f * t[leave][c];
    }
    if (cost[enter] != 0) {
      const Rational f = cost[enter];
      for (std::size_t c = 0; c < width; ++c)
        if (t[leave][c] != 0) cost[c] -= f * t[leave][c];
    }
    basis[leave] = enter;
  }

  if (cost[rhs] != 0) return std::nullopt;
  std::vector<Rational> x(n);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) x[basis[r]] = t[r][rhs];
  return x;
}

}  // namespace elgi

#endif  // ELGI_LP_HPP

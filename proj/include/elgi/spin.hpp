#ifndef ELGI_SPIN_HPP
#define ELGI_SPIN_HPP

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace elgi {

/// Total angular momentum j, stored as the integer 2j so half-integers are exact.
class Spin {
public:
  constexpr Spin() = default;
  constexpr explicit Spin(int twice_j) : twice_j_(twice_j) {
    if (twice_j < 0) throw std::domain_error("Spin: twice_j must be non-negative");
  }

  static constexpr Spin from_twice(int twice_j) { return Spin(twice_j); }

  constexpr int twice_j() const { return twice_j_; }
  constexpr int dim() const { return twice_j_ + 1; }
  constexpr double j() const { return 0.5 * twice_j_; }
  /// J = j + 1/2, the semiclassical scale.
  constexpr double big_j() const { return 0.5 * twice_j_ + 0.5; }
  constexpr bool is_half_integer() const { return (twice_j_ & 1) != 0; }

  std::string to_string() const {
    if (is_half_integer()) return std::to_string(twice_j_) + "/2";
    return std::to_string(twice_j_ / 2);
  }

  constexpr auto operator<=>(const Spin&) const = default;

private:
  int twice_j_ = 0;
};

/// Magnetic quantum number m, stored as 2m.
class MagneticIndex {
public:
  constexpr MagneticIndex() = default;
  constexpr explicit MagneticIndex(int twice_m) : twice_m_(twice_m) {}

  constexpr int twice_m() const { return twice_m_; }
  constexpr double m() const { return 0.5 * twice_m_; }

  /// Position in the descending basis m = +j, j-1, ..., -j.
  constexpr int row(Spin s) const { return (s.twice_j() - twice_m_) / 2; }
  static constexpr MagneticIndex from_row(Spin s, int row) {
    return MagneticIndex(s.twice_j() - 2 * row);
  }

  constexpr bool valid_for(Spin s) const {
    return std::abs(twice_m_) <= s.twice_j() && ((s.twice_j() - twice_m_) % 2 == 0);
  }

  constexpr auto operator<=>(const MagneticIndex&) const = default;

private:
  int twice_m_ = 0;
};

inline void require_index(Spin s, MagneticIndex m, const char* what) {
  if (!m.valid_for(s))
    throw std::domain_error(std::string(what) + ": magnetic index 2m=" +
                            std::to_string(m.twice_m()) + " invalid for j=" + s.to_string());
}

}  // namespace elgi

#endif  // ELGI_SPIN_HPP

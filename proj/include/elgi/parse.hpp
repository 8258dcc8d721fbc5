#ifndef ELGI_PARSE_HPP
#define ELGI_PARSE_HPP

// Text input helpers for the command line: angles written as decimals or
// multiples of pi ("pi/3", "2pi/5", "-3*pi/4"), spins as "7/2", "3.5" or "200".

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "elgi/spin.hpp"

namespace elgi {

namespace detail {

inline std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline long double parse_decimal(std::string_view s, const std::string& what) {
  s = strip(s);
  if (s.empty()) throw std::invalid_argument(what + ": empty number");
  // from_chars has no long double overload in every standard library
  std::string buf(s);
  std::size_t used = 0;
  long double v = 0;
  try {
    v = std::stold(buf, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": not a number: '" + buf + "'");
  }
  if (used != buf.size() || !std::isfinite(v)) throw std::invalid_argument(what + ": not a number: '" + buf + "'");
  return v;
}

}  // namespace detail

/// Parses an angle in radians.
inline double parse_angle(std::string_view text) {
  std::string_view s = detail::strip(text);
  const std::string what = "angle '" + std::string(text) + "'";
  const auto p = s.find("pi");
  if (p == std::string_view::npos) return static_cast<double>(detail::parse_decimal(s, what));

  std::string_view coef = detail::strip(s.substr(0, p));
  std::string_view rest = detail::strip(s.substr(p + 2));
  if (!coef.empty() && coef.back() == '*') coef = detail::strip(coef.substr(0, coef.size() - 1));
  long double c = 1.0L;
  if (coef == "-") c = -1.0L;
  else if (coef == "+") c = 1.0L;
  else if (!coef.empty()) c = detail::parse_decimal(coef, what);
  long double den = 1.0L;
  if (!rest.empty()) {
    if (rest.front() != '/') throw std::invalid_argument(what + ": expected '/' after pi");
    den = detail::parse_decimal(rest.substr(1), what);
    if (den == 0) throw std::invalid_argument(what + ": division by zero");
  }
  return static_cast<double>(c * std::numbers::pi_v<long double> / den);
}

/// Parses j as "p/2", an integer, or a decimal half-integer.
inline Spin parse_spin(std::string_view text) {
  const std::string_view s = detail::strip(text);
  const std::string what = "spin '" + std::string(text) + "'";
  int twice = 0;
  const auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    const auto num = detail::strip(s.substr(0, slash));
    const auto den = detail::strip(s.substr(slash + 1));
    int p = 0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), p);
    if (ec != std::errc() || ptr != num.data() + num.size() || den != "2")
      throw std::invalid_argument(what + ": expected p/2");
    twice = p;
  } else {
    const long double v = detail::parse_decimal(s, what);
    const long double t = 2.0L * v;
    if (std::abs(t - std::round(t)) > 1e-9L) throw std::invalid_argument(what + ": j must be a multiple of 1/2");
    twice = static_cast<int>(std::lround(t));
  }
  if (twice < 0) throw std::invalid_argument(what + ": j must be non-negative");
  return Spin(twice);
}

/// Splits on commas, dropping surrounding blanks.
inline std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    const auto item = detail::strip(text.substr(start, end - start));
    if (item.empty()) throw std::invalid_argument("empty entry in list '" + std::string(text) + "'");
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_angle(item));
  return out;
}

inline std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(static_cast<double>(detail::parse_decimal(item, "number")));
  return out;
}

}  // namespace elgi

#endif  // ELGI_PARSE_HPP

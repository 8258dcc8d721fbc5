#ifndef ELGI_SHANNON_CONE_HPP
#define ELGI_SHANNON_CONE_HPP

// Shannon-type entropic inequalities over the joint entropies H(S) of
// measurement times.  All inequality algebra is exact rational arithmetic.
// Time indices are 0-based in the API and 1-based in labels and text.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elgi/lp.hpp"
#include "elgi/spin.hpp"
#include "elgi/temporal.hpp"

namespace elgi {

class size_limit_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using CoefficientMap = std::map<SubsetMask, Rational, CoordinateOrder>;

/// sum_S coeff(S) H(S) >= 0.
class Inequality {
public:
  Inequality(int n, CoefficientMap coeffs, std::string label = {})
      : n_(n), coeffs_(std::move(coeffs)), label_(std::move(label)) {
    if (n_ < 1 || n_ > 31) throw std::domain_error("Inequality: n out of range");
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
      if (it->first.empty()) throw std::domain_error("Inequality: empty subset coordinate");
      if (it->first.highest() >= n_)
        throw std::domain_error("Inequality: coordinate H" + it->first.to_string() + " exceeds n");
      it = (it->second == 0) ? coeffs_.erase(it) : std::next(it);
    }
    if (coeffs_.empty()) throw std::domain_error("Inequality: all coefficients are zero");
  }

  int n() const { return n_; }
  const CoefficientMap& coeffs() const { return coeffs_; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  Rational coeff(SubsetMask s) const {
    auto it = coeffs_.find(s);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  /// Largest cardinality with a nonzero coefficient.
  int order() const { return std::prev(coeffs_.end())->first.cardinality(); }

  /// Positive rescaling to the primitive integer vector.
  Inequality canonical() const {
    using boost::multiprecision::cpp_int;
    cpp_int den_lcm = 1;
    for (const auto& [s, c] : coeffs_) den_lcm = boost::multiprecision::lcm(den_lcm, denominator(c));
    cpp_int num_gcd = 0;
    for (const auto& [s, c] : coeffs_) {
      const cpp_int v = numerator(c) * (den_lcm / denominator(c));
      num_gcd = boost::multiprecision::gcd(num_gcd, v < 0 ? cpp_int(-v) : v);
    }
    CoefficientMap out;
    for (const auto& [s, c] : coeffs_) out.emplace(s, Rational(numerator(c) * (den_lcm / denominator(c)) / num_gcd));
    return Inequality(n_, std::move(out), label_);
  }

  /// Coefficient tuple over every coordinate of n variables in canonical order.
  std::vector<Rational> dense() const {
    std::vector<Rational> v;
    for (SubsetMask s : all_subsets(n_)) v.push_back(coeff(s));
    return v;
  }

  /// "H{1,2,3} - H{1,3} + 3/2*H{2}"
  std::string expression() const {
    std::string out;
    bool first = true;
    for (const auto& [s, c] : coeffs_) {
      const bool neg = c < 0;
      const Rational mag = neg ? Rational(-c) : c;
      if (first) out += neg ? "-" : "";
      else out += neg ? " - " : " + ";
      if (mag != 1) out += mag.str() + "*";
      out += "H" + s.to_string();
      first = false;
    }
    return out;
  }

  std::string to_string() const { return label_ + " : " + expression() + " >= 0"; }

  friend bool operator==(const Inequality& a, const Inequality& b) {
    return a.n_ == b.n_ && a.coeffs_ == b.coeffs_;
  }

private:
  int n_;
  CoefficientMap coeffs_;
  std::string label_;
};

/// a + f*b
inline Inequality combine(const Inequality& a, const Rational& fa, const Inequality& b, const Rational& fb,
                          std::string label) {
  CoefficientMap out;
  for (const auto& [s, c] : a.coeffs()) out[s] += fa * c;
  for (const auto& [s, c] : b.coeffs()) out[s] += fb * c;
  return Inequality(a.n(), std::move(out), std::move(label));
}

struct ViolationReport {
  std::string label;
  double value = 0.0;
  bool violated = false;
  double tolerance = 1e-9;
};

inline constexpr double default_violation_tolerance = 1e-9;

inline ViolationReport evaluate(const Inequality& ineq, const EntropyVector& h,
                                double tol = default_violation_tolerance) {
  double value = 0.0;
  for (const auto& [s, c] : ineq.coeffs()) {
    if (!h.contains(s))
      throw std::domain_error("evaluate: entropy vector has no coordinate H" + s.to_string() + " needed by " +
                              ineq.label());
    value += static_cast<double>(c) * h.at(s);
  }
  return {ineq.label(), value, value < -tol, tol};
}

/// Canonicalized members sorted by their coefficient tuple.
struct InequalityFamily {
  int n = 0;
  int order = 0;
  std::vector<Inequality> members;

  std::size_t size() const { return members.size(); }
  auto begin() const { return members.begin(); }
  auto end() const { return members.end(); }

  /// Every subset coordinate some member uses.
  std::vector<SubsetMask> coordinates() const {
    std::vector<SubsetMask> out;
    for (SubsetMask s : all_subsets(n)) {
      for (const auto& m : members)
        if (m.coeffs().count(s)) {
          out.push_back(s);
          break;
        }
    }
    return out;
  }
};

namespace detail {

inline std::string time_list(SubsetMask s) {
  std::string out;
  for (int i : s.indices()) {
    if (!out.empty()) out += ',';
    out += "Q" + std::to_string(i + 1);
  }
  return out;
}

inline constexpr std::size_t max_label_length = 96;

inline std::string join_labels(const std::string& a, const std::string& b) {
  std::string out = a + " + " + b;
  if (out.size() > max_label_length) out = out.substr(0, max_label_length - 3) + "...";
  return out;
}

inline bool shorter_label(const std::string& a, const std::string& b) {
  return a.size() != b.size() ? a.size() < b.size() : a < b;
}

inline void require_n(int n, const char* what) {
  if (n < 2 || n > 8) throw std::domain_error(std::string(what) + ": n must lie in [2, 8]");
}

}  // namespace detail

/// H(Q_i | Q_K) >= 0.
inline Inequality conditional_entropy(int n, int i, SubsetMask given) {
  CoefficientMap c;
  c[given.with(i)] += 1;
  if (!given.empty()) c[given] -= 1;
  std::string label = "H(Q" + std::to_string(i + 1);
  if (!given.empty()) label += "|" + detail::time_list(given);
  return Inequality(n, std::move(c), label + ")");
}

/// I(Q_i ; Q_j | Q_K) >= 0.
inline Inequality mutual_information(int n, int i, int j, SubsetMask given) {
  if (i == j || given.contains(i) || given.contains(j))
    throw std::domain_error("mutual_information: indices must be distinct");
  CoefficientMap c;
  c[given.with(i)] += 1;
  c[given.with(j)] += 1;
  c[given.with(i).with(j)] -= 1;
  if (!given.empty()) c[given] -= 1;
  std::string label = "I(Q" + std::to_string(std::min(i, j) + 1) + ";Q" + std::to_string(std::max(i, j) + 1);
  if (!given.empty()) label += "|" + detail::time_list(given);
  return Inequality(n, std::move(c), label + ")");
}

/// D_i = H(Q_all) - H(Q_all \ i).
inline Inequality d_single(int n, int i) {
  if (i < 0 || i >= n) throw std::domain_error("d_single: time index out of range");
  auto ineq = conditional_entropy(n, i, SubsetMask::full(n).without(i));
  ineq.set_label("D_" + std::to_string(i + 1));
  return ineq;
}

/// D_{i,k} = I(Q_i ; Q_k | rest).
inline Inequality d_pair(int n, int i, int k) {
  if (i < 0 || k < 0 || i >= n || k >= n || i == k) throw std::domain_error("d_pair: time indices out of range");
  if (i > k) std::swap(i, k);
  auto ineq = mutual_information(n, i, k, SubsetMask::full(n).without(i).without(k));
  ineq.set_label("D_" + std::to_string(i + 1) + "," + std::to_string(k + 1));
  return ineq;
}

/// Canonicalize, drop duplicates (keeping the shortest label) and sort.
inline InequalityFamily make_family(int n, int order, std::vector<Inequality> members) {
  std::map<std::vector<Rational>, Inequality> unique;
  for (const auto& m : members) {
    if (m.n() != n) throw std::domain_error("make_family: member has a different variable count");
    auto c = m.canonical();
    auto key = c.dense();
    auto it = unique.find(key);
    if (it == unique.end()) unique.emplace(std::move(key), std::move(c));
    else if (detail::shorter_label(c.label(), it->second.label())) it->second.set_label(c.label());
  }
  InequalityFamily f{n, order, {}};
  f.members.reserve(unique.size());
  for (auto& [k, v] : unique) f.members.push_back(std::move(v));
  return f;
}

/// Minimal elemental set of the Shannon cone on n variables:
/// H(Q_i | rest) for every i and I(Q_i;Q_j | Q_K) for every pair and K.
inline InequalityFamily elemental_inequalities(int n) {
  detail::require_n(n, "elemental_inequalities");
  const SubsetMask all = SubsetMask::full(n);
  std::vector<Inequality> out;
  for (int i = 0; i < n; ++i) out.push_back(conditional_entropy(n, i, all.without(i)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::uint32_t rest = all.without(i).without(j).bits;
      // Enumerate every K within rest, including the empty set.
      for (std::uint32_t k = rest;; k = (k - 1) & rest) {
        out.push_back(mutual_information(n, i, j, SubsetMask(k)));
        if (k == 0) break;
      }
    }
  return make_family(n, n, std::move(out));
}

/// Elementary inequalities of every sub-experiment: for each set T of at
/// least two times, H(Q_T) - H(Q_{T\i}) and I(Q_i;Q_j | Q_{T\{i,j}}).
/// Unlike the elemental set this family keeps the lower-order members that
/// each smaller experiment contributes on its own.
inline InequalityFamily elementary_family(int n) {
  detail::require_n(n, "elementary_family");
  std::vector<Inequality> out;
  for (SubsetMask t : all_subsets(n)) {
    if (t.cardinality() < 2) continue;
    const auto idx = t.indices();
    for (int i : idx) out.push_back(conditional_entropy(n, i, t.without(i)));
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        out.push_back(mutual_information(n, idx[a], idx[b], t.without(idx[a]).without(idx[b])));
  }
  return make_family(n, n, std::move(out));
}

/// Chain inequalities built from consecutive two-time conditional entropies:
/// H(Q_{i1}|Q_{i0}) + ... + H(Q_{ik}|Q_{ik-1}) - H(Q_{ik}|Q_{i0}) >= 0 for
/// the full chain 1..n and for every time-ordered triple.
inline InequalityFamily chain_family(int n) {
  detail::require_n(n, "chain_family");
  if (n < 3) throw std::domain_error("chain_family: n must be at least 3");
  auto chain = [n](const std::vector<int>& t) {
    CoefficientMap c;
    for (std::size_t a = 1; a < t.size(); ++a) {
      c[SubsetMask::of({t[a - 1], t[a]})] += 1;
      if (a + 1 < t.size()) c[SubsetMask::of({t[a]})] -= 1;
    }
    c[SubsetMask::of({t.front(), t.back()})] -= 1;
    std::string label = "chain(";
    for (std::size_t a = 0; a < t.size(); ++a) label += (a ? "," : "") + std::to_string(t[a] + 1);
    return Inequality(n, std::move(c), label + ")");
  };
  std::vector<Inequality> out;
  std::vector<int> full(static_cast<std::size_t>(n));
  std::iota(full.begin(), full.end(), 0);
  out.push_back(chain(full));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        out.push_back(chain({i, j, k}));
  return make_family(n, 2, std::move(out));
}

enum class RedundancyRule {
  /// A member of order o is dropped iff it is a non-negative combination of
  /// other retained members of order <= o.  Lower-order members are never
  /// explained away by higher-order ones.
  OrderGraded,
  /// A member is dropped iff it is a non-negative combination of all other
  /// retained members.
  Global,
};

/// True iff `target` = sum lambda_i basis_i with lambda >= 0.
inline bool is_conic_combination(const Inequality& target, const std::vector<const Inequality*>& basis) {
  std::vector<SubsetMask> coords;
  {
    std::vector<SubsetMask> all;
    for (const auto& [s, c] : target.coeffs()) all.push_back(s);
    for (const auto* b : basis)
      for (const auto& [s, c] : b->coeffs()) all.push_back(s);
    std::sort(all.begin(), all.end(), CoordinateOrder{});
    all.erase(std::unique(all.begin(), all.end()), all.end());
    coords = std::move(all);
  }
  if (basis.empty()) return false;
  std::vector<std::vector<Rational>> rows(coords.size(), std::vector<Rational>(basis.size()));
  std::vector<Rational> rhs(coords.size());
  for (std::size_t r = 0; r < coords.size(); ++r) {
    rhs[r] = target.coeff(coords[r]);
    for (std::size_t c = 0; c < basis.size(); ++c) rows[r][c] = basis[c]->coeff(coords[r]);
  }
  return nonnegative_solution(rows, rhs).has_value();
}

/// Removes members implied by the others (see RedundancyRule), processing
/// members in canonical order.  Idempotent.
inline InequalityFamily remove_redundant(const InequalityFamily& family,
                                         RedundancyRule rule = RedundancyRule::OrderGraded) {
  if (family.members.empty()) throw std::domain_error("remove_redundant: empty family");
  InequalityFamily f = make_family(family.n, family.order, family.members);
  std::vector<bool> keep(f.members.size(), true);
  for (std::size_t i = 0; i < f.members.size(); ++i) {
    const int o = f.members[i].order();
    std::vector<const Inequality*> basis;
    for (std::size_t k = 0; k < f.members.size(); ++k) {
      if (k == i || !keep[k]) continue;
      if (rule == RedundancyRule::OrderGraded && f.members[k].order() > o) continue;
      basis.push_back(&f.members[k]);
    }
    if (is_conic_combination(f.members[i], basis)) keep[i] = false;
  }
  InequalityFamily out{f.n, f.order, {}};
  for (std::size_t i = 0; i < f.members.size(); ++i)
    if (keep[i]) out.members.push_back(std::move(f.members[i]));
  return out;
}

inline constexpr std::size_t default_fm_cap = 1000000;

/// Fourier-Motzkin elimination of every coordinate with cardinality > k,
/// highest cardinality first and in canonical order within a level, with
/// redundancy removal after each step.
inline InequalityFamily project_to_order(const InequalityFamily& family, int k,
                                         RedundancyRule rule = RedundancyRule::OrderGraded,
                                         std::size_t cap = default_fm_cap) {
  if (k < 1) throw std::domain_error("project_to_order: order must be at least 1");
  if (k >= family.order) return make_family(family.n, family.order, family.members);

  std::vector<SubsetMask> eliminate;
  for (SubsetMask s : all_subsets(family.n))
    if (s.cardinality() > k) eliminate.push_back(s);
  std::stable_sort(eliminate.begin(), eliminate.end(),
                   [](SubsetMask a, SubsetMask b) { return a.cardinality() > b.cardinality(); });

  std::vector<Inequality> cur = family.members;
  for (SubsetMask x : eliminate) {
    std::vector<const Inequality*> pos, neg;
    std::vector<Inequality> next;
    for (const auto& m : cur) {
      const Rational c = m.coeff(x);
      if (c > 0) pos.push_back(&m);
      else if (c < 0) neg.push_back(&m);
      else next.push_back(m);
    }
    if (next.size() + pos.size() * neg.size() > cap)
      throw size_limit_error("project_to_order: Fourier-Motzkin intermediate exceeds " + std::to_string(cap) +
                             " members");
    for (const auto* p : pos)
      for (const auto* q : neg) {
        const Rational cp = p->coeff(x);
        const Rational cq = -q->coeff(x);
        CoefficientMap sum;
        for (const auto& [s, c] : p->coeffs()) sum[s] += cq * c;
        for (const auto& [s, c] : q->coeffs()) sum[s] += cp * c;
        sum.erase(x);
        bool nonzero = false;
        for (const auto& [s, c] : sum)
          if (c != 0) nonzero = true;
        if (!nonzero) continue;
        next.emplace_back(family.n, std::move(sum), detail::join_labels(p->label(), q->label()));
      }
    // Pruning after every step keeps the intermediate systems small and
    // leaves the described cone unchanged.
    if (next.empty()) {
      cur.clear();
      break;
    }
    cur = remove_redundant(InequalityFamily{family.n, family.order, std::move(next)}, rule).members;
  }
  if (cur.empty()) throw std::domain_error("project_to_order: projection is the whole space");
  return remove_redundant(InequalityFamily{family.n, k, std::move(cur)}, rule);
}

/// Pruned ELGI family of order k on n times built from the elementary family.
inline InequalityFamily elgi_family(int n, int k, RedundancyRule rule = RedundancyRule::OrderGraded) {
  detail::require_n(n, "elgi_family");
  if (k < 2 || k > n) throw std::domain_error("elgi_family: order must lie in [2, n]");
  const auto base = elementary_family(n);
  if (k == n) return remove_redundant(base, rule);
  return project_to_order(base, k, rule);
}

// ---------------------------------------------------------------------------
// Maximally mixed closed forms

struct DTarget {
  enum class Kind { Single, Pair } kind = Kind::Single;
  int i = 0;  // 0-based time index
  int k = 0;  // second index for Pair

  static DTarget single(int i) { return {Kind::Single, i, 0}; }
  static DTarget pair(int i, int k) { return {Kind::Pair, std::min(i, k), std::max(i, k)}; }
};

inline Inequality definitional(int n, DTarget t) {
  return t.kind == DTarget::Kind::Single ? d_single(n, t.i) : d_pair(n, t.i, t.k);
}

namespace detail {

/// The closed form written in terms of a pair-entropy function h(a, b).
template <class PairEntropy>
double closed_form(int n, DTarget t, double log_dim, PairEntropy&& h) {
  if (t.kind == DTarget::Kind::Single) {
    const int i = t.i;
    if (i < 0 || i >= n) throw std::domain_error("mixed_state_closed_form: index out of range");
    if (i == 0) return h(0, 1);
    if (i == n - 1) return h(n - 2, n - 1);
    return h(i - 1, i) + h(i, i + 1) - h(i - 1, i + 1);
  }
  const int i = t.i, k = t.k;
  if (i < 0 || k >= n || i >= k) throw std::domain_error("mixed_state_closed_form: index out of range");
  if (k > i + 1) return 0.0;
  if (n == 2) return log_dim - h(0, 1);
  if (i == 0) return h(0, 2) - h(0, 1);
  if (k == n - 1) return h(n - 3, n - 1) - h(n - 2, n - 1);
  return h(i, i + 2) + h(i - 1, i + 1) - h(i, i + 1) - h(i - 1, i + 2);
}

}  // namespace detail

/// D_i or D_{i,k} for the maximally mixed state in terms of H_j of the
/// schedule's pairwise angles.
inline double mixed_state_closed_form(Spin spin, const Schedule& schedule, DTarget t) {
  return detail::closed_form(schedule.n(), t, std::log(static_cast<double>(spin.dim())),
                             [&](int a, int b) { return wigner_entropy(spin, schedule.beta(a, b)); });
}

// ---------------------------------------------------------------------------
// Text format
//
//   # elgi-family n=3 order=2
//   <label> : H{1,2} + H{2,3} - H{2} - H{1,3} >= 0

inline std::string family_header(const InequalityFamily& f) {
  return "# elgi-family n=" + std::to_string(f.n) + " order=" + std::to_string(f.order);
}

inline void write_family(std::ostream& os, const InequalityFamily& f) {
  os << family_header(f) << '\n';
  for (const auto& m : f.members) os << m.to_string() << '\n';
}

inline std::string format_family(const InequalityFamily& f) {
  std::ostringstream os;
  write_family(os, f);
  return os.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline SubsetMask parse_subset(std::string_view body, int n) {
  SubsetMask s;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t comma = body.find(',', pos);
    const auto tok = trim(body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (tok.empty()) throw std::invalid_argument("empty time index in H{...}");
    int v = 0;
    for (char ch : tok) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) throw std::invalid_argument("bad time index in H{...}");
      v = v * 10 + (ch - '0');
      if (v > 31) break;
    }
    if (v < 1 || v > n) throw std::invalid_argument("time index " + std::string(tok) + " outside 1.." + std::to_string(n));
    if (s.contains(v - 1)) throw std::invalid_argument("repeated time index in H{...}");
    s = s.with(v - 1);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return s;
}

inline Rational parse_rational(std::string_view tok) {
  tok = trim(tok);
  const auto slash = tok.find('/');
  auto integer = [](std::string_view d) {
    d = trim(d);
    if (d.empty()) throw std::invalid_argument("empty coefficient");
    for (char ch : d)
      if (!std::isdigit(static_cast<unsigned char>(ch))) throw std::invalid_argument("bad coefficient '" + std::string(d) + "'");
    return boost::multiprecision::cpp_int(std::string(d));
  };
  if (slash == std::string_view::npos) return Rational(integer(tok));
  const auto den = integer(tok.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Rational(integer(tok.substr(0, slash)), den);
}

}  // namespace detail

/// Parses "label : expr >= 0".
inline Inequality parse_inequality(std::string_view line, int n) {
  const auto sep = line.find(" : ");
  if (sep == std::string_view::npos) throw std::invalid_argument("missing ' : ' separator");
  std::string label(detail::trim(line.substr(0, sep)));
  auto expr = detail::trim(line.substr(sep + 3));
  constexpr std::string_view tail = ">= 0";
  if (expr.size() < tail.size() || expr.substr(expr.size() - tail.size()) != tail)
    throw std::invalid_argument("inequality must end with '>= 0'");
  expr = detail::trim(expr.substr(0, expr.size() - tail.size()));

  CoefficientMap coeffs;
  std::size_t pos = 0;
  bool first = true;
  while (pos < expr.size()) {
    while (pos < expr.size() && expr[pos] == ' ') ++pos;
    int sign = 1;
    if (expr[pos] == '+' || expr[pos] == '-') {
      sign = expr[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw std::invalid_argument("expected '+' or '-' between terms");
    }
    while (pos < expr.size() && expr[pos] == ' ') ++pos;
    const auto h = expr.find("H{", pos);
    if (h == std::string_view::npos) throw std::invalid_argument("expected H{...} term");
    Rational c = 1;
    if (h != pos) {
      auto ctok = detail::trim(expr.substr(pos, h - pos));
      if (ctok.empty() || ctok.back() != '*') throw std::invalid_argument("expected '*' after coefficient");
      ctok.remove_suffix(1);
      c = detail::parse_rational(ctok);
    }
    const auto close = expr.find('}', h);
    if (close == std::string_view::npos) throw std::invalid_argument("unterminated H{...}");
    const SubsetMask s = detail::parse_subset(expr.substr(h + 2, close - h - 2), n);
    if (coeffs.count(s)) throw std::invalid_argument("coordinate H" + s.to_string() + " appears twice");
    coeffs[s] = sign * c;
    pos = close + 1;
    first = false;
  }
  return Inequality(n, std::move(coeffs), std::move(label));
}

/// Reads a family written by write_family.  Members are kept as written.
inline InequalityFamily read_family(std::istream& is) {
  std::string line;
  int lineno = 0;
  std::optional<InequalityFamily> f;
  while (std::getline(is, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    try {
      if (t.front() == '#') {
        int n = 0, order = 0;
        if (std::sscanf(std::string(t).c_str(), "# elgi-family n=%d order=%d", &n, &order) == 2) {
          if (f) throw std::invalid_argument("duplicate header");
          if (n < 1 || n > 31 || order < 1) throw std::invalid_argument("bad header values");
          f = InequalityFamily{n, order, {}};
        }
        continue;
      }
      if (!f) throw std::invalid_argument("inequality before '# elgi-family' header");
      f->members.push_back(parse_inequality(t, f->n));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::domain_error& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!f) throw std::invalid_argument("missing '# elgi-family' header");
  return *f;
}

inline InequalityFamily parse_family(const std::string& text) {
  std::istringstream is(text);
  return read_family(is);
}

}  // namespace elgi

#endif  // ELGI_SHANNON_CONE_HPP

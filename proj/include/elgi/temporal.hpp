#ifndef ELGI_TEMPORAL_HPP
#define ELGI_TEMPORAL_HPP

// Sequential projective J_z measurements on a spin driven by H = omega J_y:
// joint outcome distributions, their Shannon entropies (nats) and the
// maximally-mixed shortcut built from the Wigner-matrix entropy H_j(beta).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <iostream>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "elgi/spin.hpp"
#include "elgi/wigner.hpp"

namespace elgi {

/// Set of measurement times, bit i <-> time index i (0-based).
struct SubsetMask {
  std::uint32_t bits = 0;

  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint32_t b) : bits(b) {}

  static SubsetMask of(std::initializer_list<int> indices) {
    SubsetMask s;
    for (int i : indices) s.bits |= (1u << i);
    return s;
  }
  static constexpr SubsetMask full(int n) { return SubsetMask(n >= 32 ? ~0u : ((1u << n) - 1u)); }

  constexpr bool empty() const { return bits == 0; }
  constexpr int cardinality() const { return std::popcount(bits); }
  constexpr bool contains(int i) const { return (bits >> i) & 1u; }
  constexpr int highest() const { return bits ? 31 - std::countl_zero(bits) : -1; }
  constexpr SubsetMask without(int i) const { return SubsetMask(bits & ~(1u << i)); }
  constexpr SubsetMask with(int i) const { return SubsetMask(bits | (1u << i)); }
  constexpr bool subset_of(SubsetMask o) const { return (bits & ~o.bits) == 0; }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::uint32_t b = bits; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  /// "{1,2,3}" with 1-based time labels.
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int i : indices()) {
      if (!first) s += ',';
      s += std::to_string(i + 1);
      first = false;
    }
    return s + "}";
  }

  constexpr auto operator<=>(const SubsetMask&) const = default;
};

/// Canonical coordinate order: by cardinality, then lexicographically on
/// the sorted index list.
struct CoordinateOrder {
  constexpr bool operator()(SubsetMask a, SubsetMask b) const {
    if (a.cardinality() != b.cardinality()) return a.cardinality() < b.cardinality();
    // Equal sizes: the set holding the lowest differing index sorts first.
    const std::uint32_t diff = a.bits ^ b.bits;
    return (a.bits & (diff & (~diff + 1u))) != 0;
  }
};

/// All nonempty subsets of n times in canonical coordinate order.
inline std::vector<SubsetMask> all_subsets(int n) {
  std::vector<SubsetMask> out;
  for (std::uint32_t b = 1; b < (1u << n); ++b) out.emplace_back(b);
  std::sort(out.begin(), out.end(), CoordinateOrder{});
  return out;
}

/// Accumulated rotation angles beta_i = omega t_i of the potential
/// measurement times.
class Schedule {
public:
  explicit Schedule(std::vector<double> angles, bool allow_equal = false)
      : angles_(std::move(angles)), allow_equal_(allow_equal) {
    if (angles_.size() < 2) throw std::domain_error("Schedule: need at least two measurement times");
    if (angles_.size() > 31) throw std::domain_error("Schedule: at most 31 measurement times");
    for (std::size_t i = 1; i < angles_.size(); ++i) {
      const bool ok = allow_equal_ ? angles_[i] >= angles_[i - 1] : angles_[i] > angles_[i - 1];
      if (!ok)
        throw std::domain_error(allow_equal_ ? "Schedule: angles must be non-decreasing"
                                             : "Schedule: angles must be strictly increasing");
    }
  }

  static Schedule from_times(double omega, std::span<const double> times, bool allow_equal = false) {
    std::vector<double> a(times.begin(), times.end());
    for (auto& t : a) t *= omega;
    return Schedule(std::move(a), allow_equal);
  }

  /// n times with identical spacing beta_{i,i+1} = step.
  static Schedule equally_spaced(int n, double step) {
    std::vector<double> a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = step * i;
    return Schedule(std::move(a), step == 0.0);
  }

  int n() const { return static_cast<int>(angles_.size()); }
  double angle(int i) const { return angles_.at(static_cast<std::size_t>(i)); }
  std::span<const double> angles() const { return angles_; }
  bool allows_equal() const { return allow_equal_; }

  /// beta_{ik} = beta_k - beta_i.
  double beta(int i, int k) const { return angle(k) - angle(i); }

private:
  std::vector<double> angles_;
  bool allow_equal_ = false;
};

/// Diagonal of the initial density matrix in the J_z basis, m = +j ... -j.
class InitialState {
public:
  InitialState(Spin spin, std::vector<double> diag) : spin_(spin), diag_(std::move(diag)) {
    if (diag_.size() != static_cast<std::size_t>(spin_.dim()))
      throw std::domain_error("InitialState: expected " + std::to_string(spin_.dim()) + " weights");
    double total = 0.0;
    for (double p : diag_) {
      if (!(p >= 0.0)) throw std::domain_error("InitialState: weights must be non-negative");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::domain_error("InitialState: weights must sum to 1");
  }

  static InitialState maximally_mixed(Spin spin) {
    return InitialState(spin, std::vector<double>(static_cast<std::size_t>(spin.dim()), 1.0 / spin.dim()));
  }

  /// Only the diagonal enters the sequential statistics; coherences are
  /// dropped and reported through `dropped_coherence`.
  static InitialState from_density_matrix(Spin spin, const std::vector<std::vector<double>>& rho,
                                          bool* dropped_coherence = nullptr) {
    const auto dim = static_cast<std::size_t>(spin.dim());
    if (rho.size() != dim) throw std::domain_error("InitialState: density matrix has wrong size");
    std::vector<double> diag(dim);
    bool off = false;
    for (std::size_t r = 0; r < dim; ++r) {
      if (rho[r].size() != dim) throw std::domain_error("InitialState: density matrix has wrong size");
      diag[r] = rho[r][r];
      for (std::size_t c = 0; c < dim; ++c)
        if (c != r && rho[r][c] != 0.0) off = true;
    }
    if (off) std::clog << "warning: initial state coherences ignored; only the J_z diagonal is used\n";
    if (dropped_coherence) *dropped_coherence = off;
    return InitialState(spin, std::move(diag));
  }

  Spin spin() const { return spin_; }
  std::span<const double> diag() const { return diag_; }
  bool is_maximally_mixed() const {
    for (double p : diag_)
      if (std::abs(p - 1.0 / spin_.dim()) > 1e-15) return false;
    return true;
  }

private:
  Spin spin_;
  std::vector<double> diag_;
};

/// Probabilities over outcome tuples of the measured times in time order;
/// the first measured time is the most significant digit, digit 0 <-> m = +j.
struct JointDistribution {
  SubsetMask subset;
  int outcomes = 1;
  std::vector<double> probs;

  double total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }
};

/// Joint entropies keyed by measured subset.
class EntropyVector {
public:
  EntropyVector() = default;
  explicit EntropyVector(int n) : n_(n) {}

  int n() const { return n_; }
  void set(SubsetMask s, double h) { values_[s] = h; }
  bool contains(SubsetMask s) const { return values_.count(s) != 0; }
  double at(SubsetMask s) const {
    auto it = values_.find(s);
    if (it == values_.end()) throw std::domain_error("EntropyVector: no entry for H" + s.to_string());
    return it->second;
  }
  const std::map<SubsetMask, double>& values() const { return values_; }

private:
  int n_ = 0;
  std::map<SubsetMask, double> values_;
};

inline constexpr double probability_floor = 1e-300;
inline constexpr double max_joint_outcomes = 1e8;

/// -sum p ln p with 0 ln 0 := 0; p below 1e-300 counts as zero.
inline double entropy_of(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs)
    if (p >= probability_floor) h -= p * std::log(p);
  // rounding can leave a probability a hair above 1
  return std::max(h, 0.0);
}

inline double shannon_entropy(const JointDistribution& dist) { return entropy_of(dist.probs); }

namespace detail {

inline std::vector<double> squared(const DMatrix& d) {
  std::vector<double> out(d.data().begin(), d.data().end());
  for (auto& x : out) x *= x;
  return out;
}

}  // namespace detail

/// p(m_1..m_k) = p_{m_1} prod |d_{m_{i+1} m_i}(beta between consecutive measured times)|^2.
inline JointDistribution joint_distribution(const InitialState& state, const Schedule& schedule, SubsetMask subset) {
  if (subset.empty()) throw std::domain_error("joint_distribution: empty subset");
  if (subset.highest() >= schedule.n())
    throw std::domain_error("joint_distribution: subset " + subset.to_string() + " exceeds schedule of " +
                            std::to_string(schedule.n()) + " times");
  const int dim = state.spin().dim();
  const auto times = subset.indices();
  if (std::pow(static_cast<double>(dim), static_cast<double>(times.size())) > max_joint_outcomes)
    throw std::length_error("joint_distribution: more than 1e8 outcome tuples; use mixed_entropy_vector");

  JointDistribution out;
  out.subset = subset;
  out.outcomes = dim;
  out.probs.assign(state.diag().begin(), state.diag().end());

  for (std::size_t step = 1; step < times.size(); ++step) {
    const auto p2 = detail::squared(d_matrix(state.spin(), schedule.beta(times[step - 1], times[step])));
    std::vector<double> next(out.probs.size() * dim);
    for (std::size_t prefix = 0; prefix < out.probs.size(); ++prefix) {
      const double w = out.probs[prefix];
      const std::size_t last = prefix % dim;
      double* dst = next.data() + prefix * dim;
      for (int b = 0; b < dim; ++b) dst[b] = w * p2[static_cast<std::size_t>(b) * dim + last];
    }
    out.probs = std::move(next);
  }
  return out;
}

/// H_j(beta) = -(2j+1)^{-1} sum_{m,n} |d_{nm}|^2 ln |d_{nm}|^2.
inline double wigner_entropy(const DMatrix& d) {
  double h = 0.0;
  for (double x : d.data()) {
    const double p = x * x;
    if (p >= probability_floor) h -= p * std::log(p);
  }
  return std::max(h, 0.0) / d.dim();
}

inline double wigner_entropy(Spin spin, double beta) { return wigner_entropy(d_matrix(spin, beta)); }

inline EntropyVector entropy_vector(const InitialState& state, const Schedule& schedule,
                                    std::span<const SubsetMask> subsets) {
  EntropyVector h(schedule.n());
  for (SubsetMask s : subsets) h.set(s, shannon_entropy(joint_distribution(state, schedule, s)));
  return h;
}

/// Maximally mixed shortcut: H(S) = ln(2j+1) + sum over consecutive measured
/// pairs of H_j(beta_{s,s'}).  No exponential blow-up in |S|.
inline EntropyVector mixed_entropy_vector(Spin spin, const Schedule& schedule, std::span<const SubsetMask> subsets) {
  const int n = schedule.n();
  std::map<std::pair<int, int>, double> pair_entropy;
  auto pair_h = [&](int a, int b) {
    auto [it, inserted] = pair_entropy.try_emplace({a, b}, 0.0);
    if (inserted) it->second = wigner_entropy(spin, schedule.beta(a, b));
    return it->second;
  };
  EntropyVector h(n);
  const double base = std::log(static_cast<double>(spin.dim()));
  for (SubsetMask s : subsets) {
    if (s.empty()) throw std::domain_error("mixed_entropy_vector: empty subset");
    if (s.highest() >= n) throw std::domain_error("mixed_entropy_vector: subset exceeds schedule");
    const auto t = s.indices();
    double v = base;
    for (std::size_t k = 1; k < t.size(); ++k) v += pair_h(t[k - 1], t[k]);
    h.set(s, v);
  }
  return h;
}

/// Entropy vector of a single classical joint distribution over n variables
/// with `outcomes` values each (variable 0 is the most significant digit).
/// Every subset entropy is a marginal of the same distribution, which is the
/// macrorealist situation.
inline EntropyVector classical_entropy_vector(int n, int outcomes, std::span<const double> joint) {
  std::size_t size = 1;
  for (int i = 0; i < n; ++i) size *= static_cast<std::size_t>(outcomes);
  if (joint.size() != size) throw std::domain_error("classical_entropy_vector: wrong table size");

  EntropyVector h(n);
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (SubsetMask s : all_subsets(n)) {
    const auto idx = s.indices();
    std::vector<double> marginal(static_cast<std::size_t>(std::pow(outcomes, idx.size()) + 0.5), 0.0);
    for (std::size_t flat = 0; flat < size; ++flat) {
      std::size_t rest = flat;
      for (int v = n - 1; v >= 0; --v) {
        digits[static_cast<std::size_t>(v)] = static_cast<int>(rest % outcomes);
        rest /= outcomes;
      }
      std::size_t key = 0;
      for (int v : idx) key = key * outcomes + static_cast<std::size_t>(digits[static_cast<std::size_t>(v)]);
      marginal[key] += joint[flat];
    }
    h.set(s, entropy_of(marginal));
  }
  return h;
}

}  // namespace elgi

#endif  // ELGI_TEMPORAL_HPP

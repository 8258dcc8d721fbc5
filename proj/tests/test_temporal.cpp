#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "elgi/temporal.hpp"
#include "oracles.hpp"

using namespace elgi;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> random_angles(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> step(0.01, 2.0);
  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i < n; ++i) a[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i - 1)] + step(rng);
  return a;
}

}  // namespace

TEST_CASE("subset masks") {
  const auto s = SubsetMask::of({0, 2});
  CHECK(s.to_string() == "{1,3}");
  CHECK(s.cardinality() == 2);
  CHECK(s.highest() == 2);
  CHECK(s.without(0) == SubsetMask::of({2}));
  CHECK(SubsetMask::full(3).bits == 7u);
  const auto all = all_subsets(3);
  REQUIRE(all.size() == 7);
  const char* expect[] = {"{1}", "{2}", "{3}", "{1,2}", "{1,3}", "{2,3}", "{1,2,3}"};
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i].to_string() == expect[i]);
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(Schedule({0.0}), std::domain_error);
  CHECK_THROWS_AS(Schedule({0.0, 1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(Schedule({0.0, 2.0, 1.0}, true), std::domain_error);
  CHECK_NOTHROW(Schedule({0.0, 1.0, 1.0}, true));
  const Schedule s({0.2, 1.0, 2.5});
  CHECK(s.n() == 3);
  CHECK_THAT(s.beta(0, 2), WithinAbs(2.3, 1e-15));
  const double times[] = {0.0, 0.5, 2.0};
  const auto t = Schedule::from_times(2.0, times);
  CHECK(t.angle(2) == 4.0);
  CHECK(Schedule::equally_spaced(3, 0.0).allows_equal());
}

TEST_CASE("initial states") {
  CHECK_THROWS_AS(InitialState(Spin(1), {0.5}), std::domain_error);
  CHECK_THROWS_AS(InitialState(Spin(1), {0.7, 0.2}), std::domain_error);
  CHECK_THROWS_AS(InitialState(Spin(1), {1.5, -0.5}), std::domain_error);
  CHECK(InitialState::maximally_mixed(Spin(4)).is_maximally_mixed());
  bool dropped = false;
  const auto st = InitialState::from_density_matrix(Spin(1), {{0.25, 0.1}, {0.1, 0.75}}, &dropped);
  CHECK(dropped);
  CHECK(st.diag()[1] == 0.75);
}

TEST_CASE("joint distributions") {
  const auto mixed = InitialState::maximally_mixed(Spin(4));
  const Schedule sched({0.0, 0.9, 2.0});
  const auto single = joint_distribution(mixed, sched, SubsetMask::of({1}));
  for (double p : single.probs) CHECK_THAT(p, WithinAbs(0.2, 1e-15));

  const InitialState st(Spin(2), {0.2, 0.5, 0.3});
  const auto same = joint_distribution(st, Schedule({1.0, 1.0}, true), SubsetMask::of({0, 1}));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK_THAT(same.probs[a * 3 + b], WithinAbs(a == b ? st.diag()[a] : 0.0, 1e-13));

  const auto half = joint_distribution(InitialState::maximally_mixed(Spin(1)), Schedule({0.0, pi / 2}),
                                       SubsetMask::of({0, 1}));
  for (double p : half.probs) CHECK_THAT(p, WithinAbs(0.25, 1e-15));
  CHECK_THAT(shannon_entropy(half), WithinAbs(2 * std::log(2.0), 1e-15));

  CHECK_THROWS_AS(joint_distribution(mixed, sched, SubsetMask()), std::domain_error);
  CHECK_THROWS_AS(joint_distribution(mixed, sched, SubsetMask::of({3})), std::domain_error);
  const Schedule long_sched(std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  CHECK_THROWS_AS(joint_distribution(mixed, long_sched, SubsetMask::full(12)), std::length_error);
}

TEST_CASE("normalization and marginal consistency") {
  std::mt19937_64 rng(41);
  for (int tj = 1; tj <= 5; ++tj)
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<double> w(static_cast<std::size_t>(tj + 1));
      double total = 0.0;
      for (auto& x : w) total += (x = std::uniform_real_distribution<double>(0, 1)(rng));
      for (auto& x : w) x /= total;
      const InitialState st(Spin(tj), w);
      const Schedule sched(random_angles(rng, 4));
      for (SubsetMask s : all_subsets(4)) {
        const auto d = joint_distribution(st, sched, s);
        CHECK_THAT(d.total(), WithinAbs(1.0, 1e-12));
        if (s.cardinality() < 2) continue;
        const auto prefix = joint_distribution(st, sched, s.without(s.highest()));
        const int dim = tj + 1;
        for (std::size_t k = 0; k < prefix.probs.size(); ++k) {
          double acc = 0.0;
          for (int b = 0; b < dim; ++b) acc += d.probs[k * dim + b];
          CHECK_THAT(acc, WithinAbs(prefix.probs[k], 1e-12));
        }
      }
    }
}

TEST_CASE("shannon entropy basics") {
  JointDistribution point{SubsetMask::of({0}), 3, {0.0, 1.0, 0.0}};
  CHECK(shannon_entropy(point) == 0.0);
  JointDistribution uniform{SubsetMask::of({0}), 4, {0.25, 0.25, 0.25, 0.25}};
  CHECK_THAT(shannon_entropy(uniform), WithinAbs(std::log(4.0), 1e-15));
  const double tiny[] = {1e-320, 1.0};
  CHECK(entropy_of(tiny) == 0.0);
}

TEST_CASE("Wigner-matrix entropy anchors") {
  for (int tj : {1, 2, 5, 40, 101, 400}) {
    CHECK_THAT(wigner_entropy(Spin(tj), 0.0), WithinAbs(0.0, 1e-12));
    CHECK_THAT(wigner_entropy(Spin(tj), pi), WithinAbs(0.0, 1e-12));
  }
  CHECK_THAT(wigner_entropy(Spin(1), pi / 2), WithinAbs(std::log(2.0), 1e-12));
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> ub(-6.0, 6.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int tj = 1 + static_cast<int>(rng() % 60);
    const double beta = ub(rng);
    const double h = wigner_entropy(Spin(tj), beta);
    CHECK(h >= 0.0);
    CHECK(h <= std::log(tj + 1.0) + 1e-12);
    CHECK_THAT(wigner_entropy(Spin(tj), beta + pi), WithinAbs(h, 1e-10));
    CHECK_THAT(wigner_entropy(Spin(tj), 2 * pi - beta), WithinAbs(h, 1e-10));
    if (tj <= 12) CHECK_THAT(h, WithinAbs(oracle::wigner_entropy_series(tj, beta), 1e-11));
  }
}

TEST_CASE("near-identity entropy is small") {
  for (int tj : {100, 200, 400}) {
    const double big_j = Spin(tj).big_j();
    const double beta = std::pow(big_j, -1.5);
    CHECK(wigner_entropy(Spin(tj), beta) <= std::pow(big_j, -0.5));
  }
}

TEST_CASE("shortcut equals brute force") {
  std::mt19937_64 rng(47);
  for (int tj = 1; tj <= 4; ++tj)
    for (int n = 2; n <= 4; ++n)
      for (int trial = 0; trial < 5; ++trial) {
        const Schedule sched(random_angles(rng, n));
        const auto subsets = all_subsets(n);
        const auto brute = entropy_vector(InitialState::maximally_mixed(Spin(tj)), sched, subsets);
        const auto fast = mixed_entropy_vector(Spin(tj), sched, subsets);
        for (SubsetMask s : subsets) CHECK_THAT(fast.at(s), WithinAbs(brute.at(s), 1e-9));
      }
  const auto h = mixed_entropy_vector(Spin(1), Schedule({0.0, pi / 2, pi}), all_subsets(3));
  CHECK_THAT(h.at(SubsetMask::full(3)), WithinAbs(3 * std::log(2.0), 1e-12));
  CHECK_THAT(h.at(SubsetMask::of({2})), WithinAbs(std::log(2.0), 1e-15));
  // {1,3}: only the angle between the measured times matters.
  CHECK_THAT(h.at(SubsetMask::of({0, 2})), WithinAbs(std::log(2.0) + wigner_entropy(Spin(1), pi), 1e-15));
  CHECK_THROWS_AS(h.at(SubsetMask::of({3})), std::domain_error);
}

TEST_CASE("entropy grows when a later time is measured") {
  // Appending a measurement after the last one cannot disturb the earlier
  // record, so H(S + later time) >= H(S).  Inserting an earlier or middle
  // time can lower the entropy; that is the quantum violation itself.
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const Schedule sched(random_angles(rng, 4));
    const auto h = entropy_vector(InitialState(Spin(2), {0.6, 0.3, 0.1}), sched, all_subsets(4));
    for (SubsetMask a : all_subsets(4))
      for (int x = a.highest() + 1; x < 4; ++x) CHECK(h.at(a) <= h.at(a.with(x)) + 1e-12);
  }
  const auto h = mixed_entropy_vector(Spin(1), Schedule({0.0, 0.1, 0.2}), all_subsets(3));
  CHECK(h.at(SubsetMask::of({0, 2})) > h.at(SubsetMask::full(3)));
}

TEST_CASE("classical entropy vectors") {
  // Two perfectly correlated bits and an independent fair bit.
  std::vector<double> p(8, 0.0);
  p[0b000] = p[0b001] = p[0b110] = p[0b111] = 0.25;
  const auto h = classical_entropy_vector(3, 2, p);
  const double ln2 = std::log(2.0);
  CHECK_THAT(h.at(SubsetMask::of({0})), WithinAbs(ln2, 1e-15));
  CHECK_THAT(h.at(SubsetMask::of({0, 1})), WithinAbs(ln2, 1e-15));
  CHECK_THAT(h.at(SubsetMask::of({0, 2})), WithinAbs(2 * ln2, 1e-15));
  CHECK_THAT(h.at(SubsetMask::full(3)), WithinAbs(2 * ln2, 1e-15));
  CHECK_THROWS_AS(classical_entropy_vector(3, 2, std::vector<double>(7, 0.1)), std::domain_error);
}

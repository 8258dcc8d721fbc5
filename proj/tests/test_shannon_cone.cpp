#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "elgi/shannon_cone.hpp"
#include "paper_families.hpp"

using namespace elgi;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double pi = std::numbers::pi;

const InequalityFamily& cached_family(int n, int k) {
  static std::map<std::pair<int, int>, InequalityFamily> cache;
  auto it = cache.find({n, k});
  if (it == cache.end()) it = cache.emplace(std::make_pair(n, k), elgi_family(n, k)).first;
  return it->second;
}

Inequality from_terms(int n, std::initializer_list<std::pair<std::initializer_list<int>, int>> terms) {
  CoefficientMap c;
  for (auto& [idx, v] : terms) c[SubsetMask::of(idx)] += v;
  return Inequality(n, std::move(c), "t");
}

bool contains(const InequalityFamily& f, const Inequality& ineq) {
  const auto key = ineq.canonical().dense();
  for (const auto& m : f.members)
    if (m.dense() == key) return true;
  return false;
}

published::Vec vec_of(const Inequality& m) {
  return *published::as_vectors(InequalityFamily{m.n(), m.order(), {m}}).begin();
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0) h -= p * std::log(p);
  if (p < 1) h -= (1 - p) * std::log(1 - p);
  return h;
}

std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t size) {
  std::exponential_distribution<double> ex(1.0);
  std::bernoulli_distribution sparse(0.3);
  std::vector<double> p(size);
  double total = 0.0;
  for (auto& x : p) {
    x = sparse(rng) ? 0.0 : ex(rng);
    total += x;
  }
  if (total == 0.0) {
    p[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace

TEST_CASE("inequality construction and formatting") {
  CHECK_THROWS_AS(Inequality(3, {}, "zero"), std::domain_error);
  CoefficientMap zeros;
  zeros[SubsetMask::of({0})] = 0;
  CHECK_THROWS_AS(Inequality(3, zeros, "zero"), std::domain_error);
  CHECK_THROWS_AS(from_terms(2, {{{0, 2}, 1}}), std::domain_error);

  CoefficientMap c;
  c[SubsetMask::of({0, 1, 2})] = 1;
  c[SubsetMask::of({0, 2})] = -1;
  c[SubsetMask::of({1})] = Rational(3, 2);
  const Inequality ineq(3, c, "x");
  CHECK(ineq.order() == 3);
  CHECK(ineq.expression() == "3/2*H{2} - H{1,3} + H{1,2,3}");
  const auto can = ineq.canonical();
  CHECK(can.expression() == "3*H{2} - 2*H{1,3} + 2*H{1,2,3}");

  CoefficientMap neg;
  neg[SubsetMask::of({0})] = -4;
  neg[SubsetMask::of({0, 1})] = 6;
  CHECK(Inequality(2, neg).canonical().expression() == "-2*H{1} + 3*H{1,2}");
}

TEST_CASE("elemental inequalities") {
  CHECK(elemental_inequalities(2).size() == 3);
  CHECK(elemental_inequalities(3).size() == 9);
  CHECK(elemental_inequalities(4).size() == 4 + 6 * 4);
  CHECK(elemental_inequalities(8).size() == 8 + 28 * 64);
  CHECK_THROWS_AS(elemental_inequalities(1), std::domain_error);
  CHECK_THROWS_AS(elemental_inequalities(9), std::domain_error);

  const auto e3 = elemental_inequalities(3);
  CHECK(e3.order == 3);
  CHECK(contains(e3, from_terms(3, {{{0, 1, 2}, 1}, {{0, 1}, -1}})));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) CHECK(contains(e3, from_terms(3, {{{i}, 1}, {{j}, 1}, {{i, j}, -1}})));
}

TEST_CASE("projection of the elemental set for three times") {
  const auto p = project_to_order(elemental_inequalities(3), 2);
  CHECK(p.order == 2);
  for (const auto& m : p.members) CHECK(m.order() <= 2);
  // H(Q_i,Q_k) + H(Q_j,Q_k) - H(Q_k) - H(Q_i,Q_j) for every k.
  CHECK(contains(p, from_terms(3, {{{0, 2}, 1}, {{1, 2}, 1}, {{2}, -1}, {{0, 1}, -1}})));
  CHECK(contains(p, from_terms(3, {{{0, 1}, 1}, {{1, 2}, 1}, {{1}, -1}, {{0, 2}, -1}})));
  CHECK(contains(p, from_terms(3, {{{0, 1}, 1}, {{0, 2}, 1}, {{0}, -1}, {{1, 2}, -1}})));
  CHECK(published::as_vectors(p) == published::family(3, 2));

  const auto same = project_to_order(elemental_inequalities(3), 3);
  CHECK(published::as_vectors(same) == published::as_vectors(elemental_inequalities(3)));
  CHECK_THROWS_AS(project_to_order(elementary_family(4), 2, RedundancyRule::OrderGraded, 5), size_limit_error);
}

TEST_CASE("projection agrees with a completion oracle") {
  // A point over the order <= 2 coordinates lies in the projection iff some
  // value of H{1,2,3} satisfies every elemental inequality.  Each elemental
  // member bounds that coordinate from one side, so the check is an interval.
  const auto proj = project_to_order(elemental_inequalities(3), 2);
  const auto elem = elemental_inequalities(3);
  const SubsetMask top = SubsetMask::full(3);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> num(0, 12);
  int inside = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::map<SubsetMask, Rational> h;
    if (trial % 4 == 0) {
      // Genuine entropy vectors, converted exactly from binary doubles.
      const auto hv = classical_entropy_vector(3, 3, random_distribution(rng, 27));
      for (SubsetMask s : all_subsets(3))
        if (s.cardinality() <= 2) h[s] = Rational(hv.at(s));
    } else {
      for (SubsetMask s : all_subsets(3))
        if (s.cardinality() <= 2) h[s] = Rational(num(rng), 4) + (s.cardinality() == 2 ? Rational(1) : Rational(0));
    }
    bool satisfies = true;
    for (const auto& m : proj.members) {
      Rational v = 0;
      for (const auto& [s, c] : m.coeffs()) v += c * h.at(s);
      if (v < 0) satisfies = false;
    }
    std::optional<Rational> lo, hi;
    bool feasible = true;
    for (const auto& m : elem.members) {
      Rational rest = 0;
      for (const auto& [s, c] : m.coeffs())
        if (s != top) rest += c * h.at(s);
      const Rational a = m.coeff(top);
      if (a == 0) {
        if (rest < 0) feasible = false;
      } else if (a > 0) {
        const Rational bound = -rest / a;
        if (!lo || bound > *lo) lo = bound;
      } else {
        const Rational bound = rest / -a;
        if (!hi || bound < *hi) hi = bound;
      }
    }
    if (lo && hi && *lo > *hi) feasible = false;
    INFO("trial " << trial);
    CHECK(satisfies == feasible);
    inside += feasible;
  }
  CHECK(inside >= 25);
  CHECK(inside < 95);
}

TEST_CASE("remove_redundant") {
  const auto a = from_terms(2, {{{0, 1}, 1}, {{0}, -1}});
  const auto b = from_terms(2, {{{0, 1}, 1}, {{1}, -1}});
  const auto sum = combine(a, 1, b, 1, "a+b");
  const auto twice = combine(a, 2, a, 0, "2a");
  auto f = remove_redundant(InequalityFamily{2, 2, {a, b, sum, twice}});
  CHECK(f.size() == 2);
  CHECK(contains(f, a));
  CHECK(contains(f, b));
  CHECK(published::as_vectors(remove_redundant(f)) == published::as_vectors(f));

  // a + c = H{2} has lower order than a and c, so only the global rule drops it.
  const auto c = from_terms(2, {{{0}, 1}, {{1}, 1}, {{0, 1}, -1}});
  const auto low = combine(a, 1, c, 1, "a+c");
  CHECK(low.order() == 1);
  CHECK(remove_redundant(InequalityFamily{2, 2, {a, c, low}}).size() == 3);
  CHECK(remove_redundant(InequalityFamily{2, 2, {a, c, low}}, RedundancyRule::Global).size() == 2);
  CHECK_THROWS_AS(remove_redundant(InequalityFamily{2, 2, {}}), std::domain_error);

  // Dedup keeps the shortest label.
  auto la = a;
  la.set_label("a-much-longer-label");
  auto g = make_family(2, 2, {la, a});
  REQUIRE(g.size() == 1);
  CHECK(g.members.front().label() == "t");
}

TEST_CASE("published three-time families") {
  CHECK(cached_family(3, 3).size() == 15);
  CHECK(cached_family(3, 2).size() == 12);
  CHECK(published::as_vectors(cached_family(3, 3)) == published::family(3, 3));
  CHECK(published::as_vectors(cached_family(3, 2)) == published::family(3, 2));
  CHECK(published::as_vectors(elgi_family(3, 3, RedundancyRule::Global)) ==
        published::as_vectors(elemental_inequalities(3)));
}

TEST_CASE("published four-time families") {
  CHECK(cached_family(4, 4).size() == 52);
  CHECK(cached_family(4, 3).size() == 54);
  CHECK(published::as_vectors(cached_family(4, 4)) == published::family(4, 4));
  CHECK(published::as_vectors(cached_family(4, 3)) == published::family(4, 3));
}

TEST_CASE("four-time second-order projection has six facets beyond the published list") {
  const auto generated = published::as_vectors(cached_family(4, 2));
  const auto listed = published::family(4, 2);
  CHECK(listed.size() == 30);
  CHECK(generated.size() == 36);
  CHECK(std::includes(generated.begin(), generated.end(), listed.begin(), listed.end()));

  // The extra members pair a partition {a,b}|{c,d}:
  // -H{a} - H{b} - H{a,b} + H{a,c} + H{a,d} + H{b,c} + H{b,d} - H{c,d} >= 0.
  const auto& fam = cached_family(4, 2);
  int extras = 0;
  for (const auto& m : fam.members) {
    if (listed.count(vec_of(m))) continue;
    ++extras;
    CHECK(m.coeffs().size() == 8);
  }
  CHECK(extras == 6);

  // A point that satisfies all 30 listed members but violates an extra one.
  std::map<SubsetMask, double> point = {
      {SubsetMask::of({0}), 2},    {SubsetMask::of({1}), 2},    {SubsetMask::of({2}), 1},
      {SubsetMask::of({3}), 1},    {SubsetMask::of({0, 1}), 3}, {SubsetMask::of({0, 2}), 2},
      {SubsetMask::of({0, 3}), 2}, {SubsetMask::of({1, 2}), 2}, {SubsetMask::of({1, 3}), 2},
      {SubsetMask::of({2, 3}), 2}};
  EntropyVector h(4);
  for (auto [s, v] : point) h.set(s, v);
  int violated = 0;
  for (const auto& m : fam.members) {
    const bool listed_member = listed.count(vec_of(m)) != 0;
    const auto r = evaluate(m, h);
    if (listed_member) CHECK_FALSE(r.violated);
    else violated += r.violated;
  }
  CHECK(violated >= 1);
}

TEST_CASE("every generated member holds for a single global distribution") {
  std::mt19937_64 rng(23);
  for (int n : {2, 3, 4})
    for (int outcomes : {2, 3, 5}) {
      std::vector<InequalityFamily> families = {elemental_inequalities(n)};
      if (n >= 3)
        for (int k = 2; k <= n; ++k) families.push_back(cached_family(n, k));
      for (int trial = 0; trial < 8; ++trial) {
        std::size_t size = 1;
        for (int i = 0; i < n; ++i) size *= static_cast<std::size_t>(outcomes);
        const auto p = random_distribution(rng, size);
        const auto h = classical_entropy_vector(n, outcomes, p);
        for (const auto& f : families)
          for (const auto& m : f.members) {
            INFO(m.to_string());
            CHECK(evaluate(m, h).value >= -1e-9);
          }
      }
    }
}

TEST_CASE("evaluate") {
  const auto d2 = d_single(3, 1);
  CHECK(d2.label() == "D_2");
  EntropyVector partial(3);
  partial.set(SubsetMask::of({0, 1, 2}), 1.0);
  CHECK_THROWS_AS(evaluate(d2, partial), std::domain_error);

  const auto subsets = all_subsets(3);
  // D_3 is a conditional entropy of one experiment's distribution, so it
  // holds for every quantum vector; D_2 compares two different experiments.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> step(0.01, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a1 = step(rng), a2 = a1 + step(rng);
    const auto h = entropy_vector(InitialState(Spin(2), {0.5, 0.3, 0.2}), Schedule({0.0, a1, a2}), subsets);
    const auto r = evaluate(d_single(3, 2), h);
    CHECK(r.value >= -1e-9);
    CHECK_FALSE(r.violated);
    CHECK(r.tolerance == default_violation_tolerance);
  }
  const auto small = mixed_entropy_vector(Spin(1), Schedule({0.0, 0.1, 0.2}), subsets);
  CHECK(evaluate(d2, small).violated);

  // Spin 1/2: H_{1/2}(beta) is the binary entropy of cos^2(beta/2).
  const Schedule sched({0.0, 2 * pi / 3 - 0.02, pi - 0.03});
  const auto hm = mixed_entropy_vector(Spin(1), sched, subsets);
  const double b13 = pi - 0.03, b23 = pi - 0.03 - (2 * pi / 3 - 0.02);
  const double expect = binary_entropy(std::pow(std::cos(b13 / 2), 2)) - binary_entropy(std::pow(std::cos(b23 / 2), 2));
  const auto d23 = evaluate(d_pair(3, 1, 2), hm);
  CHECK_THAT(d23.value, WithinAbs(expect, 1e-12));
  CHECK(d23.violated == (expect < -1e-9));
  CHECK(evaluate(d_pair(3, 1, 2), hm, 10.0).violated == false);
}

TEST_CASE("maximally mixed closed forms") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> step(0.05, 1.6);
  for (int tj = 1; tj <= 4; ++tj)
    for (int n = 2; n <= 4; ++n)
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> a(static_cast<std::size_t>(n), 0.0);
        for (int i = 1; i < n; ++i) a[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i - 1)] + step(rng);
        const Schedule sched(a);
        const auto h = mixed_entropy_vector(Spin(tj), sched, all_subsets(n));
        for (int i = 0; i < n; ++i) {
          INFO("2j=" << tj << " n=" << n << " D_" << i + 1);
          CHECK_THAT(mixed_state_closed_form(Spin(tj), sched, DTarget::single(i)),
                     WithinAbs(evaluate(d_single(n, i), h).value, 1e-10));
          for (int k = i + 1; k < n; ++k) {
            INFO("D_" << i + 1 << "," << k + 1);
            const double closed = mixed_state_closed_form(Spin(tj), sched, DTarget::pair(i, k));
            CHECK_THAT(closed, WithinAbs(evaluate(d_pair(n, i, k), h).value, 1e-10));
            if (k > i + 1) CHECK(closed == 0.0);
          }
        }
      }
  const Schedule at_pi({0.0, pi - 1.0, pi});
  CHECK_THAT(mixed_state_closed_form(Spin(4), at_pi, DTarget::pair(1, 2)),
             WithinAbs(-wigner_entropy(Spin(4), 1.0), 1e-12));
  CHECK_THROWS_AS(mixed_state_closed_form(Spin(2), at_pi, DTarget::single(3)), std::domain_error);
  CHECK_THROWS_AS(mixed_state_closed_form(Spin(2), at_pi, DTarget::pair(1, 3)), std::domain_error);
}

TEST_CASE("chain family") {
  const auto c3 = chain_family(3);
  REQUIRE(c3.size() == 1);
  CHECK(c3.members.front().expression() == "-H{2} + H{1,2} - H{1,3} + H{2,3}");
  CHECK(chain_family(4).size() == 5);
  CHECK(contains(cached_family(3, 2), c3.members.front()));
}

TEST_CASE("text format round trip") {
  for (const auto* f : {&cached_family(3, 2), &cached_family(4, 3)}) {
    const std::string text = format_family(*f);
    const auto back = parse_family(text);
    CHECK(back.n == f->n);
    CHECK(back.order == f->order);
    REQUIRE(back.size() == f->size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back.members[i] == f->members[i]);
      CHECK(back.members[i].label() == f->members[i].label());
    }
    CHECK(format_family(back) == text);
  }
  const auto g = parse_family("# elgi-family n=3 order=3\nmine : 3/2*H{2} - H{1,3} + H{1,2,3} >= 0\n");
  REQUIRE(g.size() == 1);
  CHECK(g.members.front().coeff(SubsetMask::of({1})) == Rational(3, 2));
  CHECK(format_family(g) == "# elgi-family n=3 order=3\nmine : 3/2*H{2} - H{1,3} + H{1,2,3} >= 0\n");

  CHECK_THROWS_AS(parse_family("x : H{1} >= 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("# elgi-family n=2 order=2\nx : H{3} >= 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("# elgi-family n=2 order=2\nx : H{1} - H{1} >= 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("# elgi-family n=2 order=2\nx : H{1} > 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("# elgi-family n=2 order=2\nx : 1/0*H{1} >= 0\n"), std::invalid_argument);
}

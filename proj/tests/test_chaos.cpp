#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "simchaos/chaos.hpp"
#include "simchaos/errors.hpp"
#include "simchaos/fractals.hpp"

using namespace simchaos;

TEST_CASE("tent map branches") {
  CHECK(carpet_tent_1d(0.0) == 0.0);
  CHECK(carpet_tent_1d(1.0 / 3.0) == doctest::Approx(1.0));
  CHECK(carpet_tent_1d(0.4) == doctest::Approx(0.2));
  CHECK(carpet_tent_1d(0.6) == doctest::Approx(0.8));
  CHECK(carpet_tent_1d(2.0 / 3.0) == doctest::Approx(1.0));
  CHECK(carpet_tent_1d(1.0) == 0.0);
  CHECK_THROWS_AS(carpet_tent_1d(1.5), Error);
  CHECK_THROWS_AS(carpet_tent({-0.1, 0.5}), Error);
}

TEST_CASE("carpet center orbit follows the shift") {
  const SpaceDescriptor s = make_carpet();
  const Word w = parse_word(kCarpetOrbitIndex, 8, 1);
  CHECK(w.size() == 68);
  const auto orbit = center_orbit(s, w, 68);
  REQUIRE(orbit.size() == 69);
  // Step j is the center of the cell indexed by digits j+1.. of the word.
  for (std::size_t j = 0; j < orbit.size(); j += 17) {
    const Word rest(w.begin() + static_cast<std::ptrdiff_t>(j), w.end());
    const Point c = region_center(subset_region(s, rest));
    CHECK(orbit[j].x == c.x);
    CHECK(orbit[j].y == c.y);
  }
  CHECK(orbit.back().x == 0.5);
  CHECK_THROWS_AS(center_orbit(s, w, 69), Error);
}

TEST_CASE("seeds and bounded draws") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  std::mt19937_64 rng(3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = uniform_below(rng, 7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("periodic approximation on the string space is exact") {
  const SpaceDescriptor s = make_sigma();
  const Address target = Address::constant(2, {1, 0, 1, 1, 0, 0, 1}, 0);
  for (double eps : {0.5, 0.1, 0.02}) {
    const PeriodicApprox p = periodic_approx(s, target, eps);
    CHECK(p.certified);
    REQUIRE(p.exact);
    CHECK(p.exact->to_double() < eps);
    CHECK(p.periodic.first(static_cast<std::size_t>(p.depth)) == target.first(static_cast<std::size_t>(p.depth)));
  }
  CHECK_THROWS_AS(periodic_approx(s, target, 0.0), Error);
  CHECK_THROWS_AS(periodic_approx(make_carpet(), target, 0.1), Error);
}

TEST_CASE("periodic approximation in the carpet") {
  const SpaceDescriptor s = make_carpet();
  const Address target = Address::constant(8, parse_word("2773113731", 8, 1), 0);
  const PeriodicApprox p = periodic_approx(s, target, 0.02);
  CHECK(p.certified);
  // Both points lie in the same depth-k cell.
  const Point a = point_of(s, target, 1e-9);
  const Point b = point_of(s, p.periodic, 1e-9);
  CHECK(std::hypot(a.x - b.x, a.y - b.y) <= p.bound.to_double() + 1e-9);
}

TEST_CASE("transitive witness schedule") {
  const TransitiveWitness w = transitive_witness(make_gasket(), 3);
  CHECK(w.covers_all);
  CHECK(w.schedule.size() == 3 + 9 + 27);
  for (const Visit& v : w.schedule) {
    CHECK(std::equal(v.block.begin(), v.block.end(), w.prefix.begin() + static_cast<std::ptrdiff_t>(v.shift)));
  }
}

TEST_CASE("sensitivity pairs") {
  const SpaceDescriptor s = make_sigma();
  const SeparationTable t = check_separation(s, 1);
  const SensitivityWitness w = sensitivity_pair(s, &t, Word{1, 0, 1});
  CHECK(w.certified);
  REQUIRE(w.initial_exact);
  // The pair shares three digits and differs in every later one.
  CHECK(*w.initial_exact == ExactRational(BigInt(1), BigInt(4)));
  CHECK(*w.separated_exact == ExactRational(2));
  CHECK_THROWS_AS(sensitivity_pair(s, nullptr, Word{}), Error);

  const SpaceDescriptor koch = make_koch();
  const SeparationTable kt = check_separation(koch, 1);
  const SensitivityWitness kw = sensitivity_pair(koch, &kt, Word{3, 3});
  CHECK(kw.certified);
  CHECK(kw.separation.lower >= kt.epsilon_lower);
}

TEST_CASE("li-yorke pairs") {
  const SpaceDescriptor s = make_sigma();
  const SeparationTable t = check_separation(s, 1);
  const LiYorkePair pair = li_yorke_pair(s, &t, 64);
  CHECK(pair.consistent);
  CHECK(pair.proximal.size() >= 4);
  const LiYorkeVerdict v = evaluate_li_yorke(s, t, pair.a, pair.b, 64);
  CHECK(v.is_pair);
  CHECK(v.longest_agreement >= 16);
  // Identical and disjoint constant strings are not Li-Yorke pairs.
  const Address zero = Address::constant(2, {}, 0);
  CHECK_FALSE(evaluate_li_yorke(s, t, zero, zero, 64).is_pair);
  CHECK_FALSE(evaluate_li_yorke(s, t, zero, Address::constant(2, {}, 1), 64).is_pair);
  CHECK_THROWS_AS(li_yorke_pair(s, &t, 2), Error);
}

TEST_CASE("recurrence of periodic and eventually constant strings") {
  const SpaceDescriptor s = make_sigma();
  const RecurrenceStats r = recurrence_stats(s, Address::repeating(2, {}, {0, 0, 1}), 0.01, 12);
  CHECK(r.returns() == std::vector<std::size_t>{3, 6, 9, 12});
  CHECK(r.indeterminate() == 0);
  // 1 0 0 0 ... never comes back near itself.
  CHECK(recurrence_stats(s, Address::constant(2, {1}, 0), 0.5, 20).returns().empty());

  const SpaceDescriptor carpet = make_carpet();
  const RecurrenceStats c = recurrence_stats(carpet, Address::repeating(8, {}, {2, 5}), 0.01, 10);
  CHECK(c.returns() == std::vector<std::size_t>{2, 4, 6, 8, 10});
}

TEST_CASE("devaney reports are reproducible") {
  const DevaneyReport a = devaney_report(make_cantor(), 4, 12, 99);
  const DevaneyReport b = devaney_report(make_cantor(), 4, 12, 99);
  CHECK(a.pass);
  REQUIRE(a.reports.size() == 3);
  CHECK(a.reports[0].witnesses == b.reports[0].witnesses);
  CHECK(a.reports[2].witnesses == b.reports[2].witnesses);
  CHECK(a.reports[0].witnesses != devaney_report(make_cantor(), 4, 12, 100).reports[0].witnesses);
}

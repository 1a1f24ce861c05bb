#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "simchaos/address.hpp"
#include "simchaos/debruijn.hpp"
#include "simchaos/errors.hpp"
#include "simchaos/exact.hpp"

using namespace simchaos;

namespace {

// sum |a_k - b_k| 2^(1-k) over the first n digits, in long double.
long double partial_sigma(const Address& a, const Address& b, std::size_t n) {
  long double s = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (a.digit(k) != b.digit(k)) s += std::ldexp(1.0L, 1 - static_cast<int>(k));
  }
  return s;
}

Word random_word(std::mt19937_64& rng, std::size_t n, int base) {
  Word w(n);
  for (auto& d : w) d = static_cast<Digit>(rng() % static_cast<std::uint64_t>(base));
  return w;
}

}  // namespace

TEST_CASE("exact rationals") {
  const ExactRational third(BigInt(1), BigInt(3));
  CHECK(third + third + third == ExactRational(1));
  CHECK(ExactRational::parse("-6/8") == ExactRational(BigInt(-3), BigInt(4)));
  CHECK(ExactRational::pow2(-3) == ExactRational(BigInt(1), BigInt(8)));
  CHECK(ExactRational::power(3, -2) == ExactRational(BigInt(1), BigInt(9)));
  CHECK(ExactRational::from_double(0.1).to_double() == 0.1);
  CHECK(third < ExactRational(BigInt(1), BigInt(2)));
  CHECK_THROWS(ExactRational::parse("1/0"));
}

TEST_CASE("exact lengths compare through their squares") {
  const auto a = ExactLength::sqrt_of(ExactRational(BigInt(7), BigInt(81)));
  CHECK(a.to_string() == "sqrt(7)/9");
  CHECK(std::abs(a.to_double() - std::sqrt(7.0) / 9.0) < 1e-16);
  CHECK(ExactLength::hypot(ExactRational(BigInt(1), BigInt(3)), 0) == ExactLength::from_rational(ExactRational(BigInt(1), BigInt(3))));
  CHECK(a.less_than(0.3));
  CHECK_FALSE(a.less_than(0.29));
  CHECK(ExactLength::sqrt_of(2).scaled(ExactRational(BigInt(1), BigInt(3))).square() == ExactRational(BigInt(2), BigInt(9)));
}

TEST_CASE("address text round trip") {
  for (const std::string text : {"2:01|c0", "2:|r01", "8:7215|r03", "3:|c2"}) {
    CHECK(Address::parse(text).to_text() == text);
  }
  CHECK_THROWS_AS(Address::parse("2:02|c0"), Error);
  CHECK_THROWS_AS(Address::parse("2:01|x0"), Error);
  CHECK_THROWS_AS(Address::parse("1:|c0"), Error);
}

TEST_CASE("digits, shift and canonical form") {
  const Address a = Address::repeating(2, {1, 1}, {0, 1});
  CHECK(a.first(6) == Word{1, 1, 0, 1, 0, 1});
  CHECK(shift(a, 3).first(4) == Word{1, 0, 1, 0});
  CHECK(Address::repeating(2, {0, 1, 0, 1}, {0, 1}).canonical().to_text() == "2:|r01");
  CHECK(Address::repeating(2, {}, {1, 1, 1}).canonical().to_text() == "2:|c1");
  CHECK(is_periodic(Address::repeating(2, {}, {0, 1, 1})) == std::optional<std::size_t>(3));
  CHECK_FALSE(is_periodic(Address::constant(2, {1}, 0)).has_value());
  CHECK_THROWS_AS(a.digit(0), Error);
}

TEST_CASE("generator tails have a horizon") {
  const Address g = Address::generated(2, {1}, [](std::size_t k) { return static_cast<Digit>(k % 2); }, 10);
  CHECK(g.digit(1) == 1);
  CHECK(g.digit(4) == 0);
  CHECK(g.horizon() == 10);
  CHECK_THROWS_AS(g.digit(11), Error);
  CHECK_THROWS_AS((void)(g == g), Error);
  CHECK_THROWS_AS(sigma_distance(g, Address::constant(2, {}, 0)), Error);
}

TEST_CASE("string metric matches partial sums") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Address a = Address::repeating(2, random_word(rng, rng() % 6, 2), random_word(rng, 1 + rng() % 5, 2));
    const Address b = Address::repeating(2, random_word(rng, rng() % 6, 2), random_word(rng, 1 + rng() % 5, 2));
    const long double want = partial_sigma(a, b, 60);
    CHECK(std::abs(static_cast<long double>(sigma_distance(a, b).to_double()) - want) < 1e-15L);
    CHECK(sigma_distance(a, b) == sigma_distance(b, a));
  }
  CHECK(sigma_distance(Address::constant(2, {}, 0), Address::constant(2, {}, 1)) == ExactRational(2));
  CHECK(sigma_distance(Address::constant(2, {}, 0), Address::constant(2, {1}, 0)) == ExactRational(1));
  CHECK_THROWS_AS(sigma_distance(Address::constant(3, {}, 0), Address::constant(3, {}, 1)), Error);
}

TEST_CASE("cylinder diameters") {
  for (int n = 0; n <= 40; ++n) {
    // Two strings sharing n digits and differing in every later digit.
    const Address a = Address::constant(2, Word(static_cast<std::size_t>(n), 0), 0);
    const Address b = Address::constant(2, Word(static_cast<std::size_t>(n), 0), 1);
    CHECK(cylinder_diameter(2, n) == sigma_distance(a, b));
  }
  CHECK_THROWS_AS(cylinder_diameter(2, -1), Error);
}

TEST_CASE("words") {
  CHECK(parse_word("2773", 8, 1) == Word{1, 6, 6, 2});
  CHECK(format_word(Word{1, 6, 6, 2}, 1) == "2773");
  CHECK_THROWS_AS(parse_word("9", 8, 1), Error);
  CHECK_THROWS_AS(validate_word(Word{2}, 2), Error);
}

TEST_CASE("de Bruijn cycles contain every block once") {
  for (auto [base, order] : {std::pair{2, 1}, {2, 6}, {3, 4}, {8, 3}, {4, 3}}) {
    const Word cycle = de_bruijn_cycle(base, order);
    const auto count = static_cast<std::size_t>(std::pow(base, order));
    REQUIRE(cycle.size() == count);
    std::set<Word> seen;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      Word w;
      for (int j = 0; j < order; ++j) w.push_back(cycle[(i + static_cast<std::size_t>(j)) % cycle.size()]);
      seen.insert(w);
    }
    CHECK(seen.size() == count);
  }
  CHECK_THROWS_AS(de_bruijn_cycle(8, 12, 1000), Error);
}

TEST_CASE("transitive prefix covers all short blocks") {
  const Word p = debruijn_transitive_prefix(3, 4);
  CHECK(p.size() == 81 + 3);
  for (int len = 1; len <= 4; ++len) {
    std::set<Word> seen;
    for (std::size_t i = 0; i + static_cast<std::size_t>(len) <= p.size(); ++i) {
      seen.emplace(p.begin() + static_cast<std::ptrdiff_t>(i), p.begin() + static_cast<std::ptrdiff_t>(i) + len);
    }
    CHECK(seen.size() == static_cast<std::size_t>(std::pow(3, len)));
  }
}

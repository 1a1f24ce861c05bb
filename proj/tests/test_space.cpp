#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "simchaos/errors.hpp"
#include "simchaos/fractals.hpp"
#include "simchaos/region.hpp"
#include "simchaos/space.hpp"

using namespace simchaos;

namespace {

using C = std::complex<double>;

// Koch curve vertices of the piece with index `w`, refined `extra` more levels.
void koch_points(C a, C b, const Word& w, std::size_t at, int extra, std::vector<C>& out) {
  const C d = (b - a) / 3.0;
  const C apex = a + d + d * std::polar(1.0, M_PI / 3);
  const C pts[5] = {a, a + d, apex, a + 2.0 * d, b};
  if (at < w.size()) {
    koch_points(pts[w[at]], pts[w[at] + 1], w, at + 1, extra, out);
    return;
  }
  if (extra == 0) {
    out.push_back(a);
    out.push_back(b);
    return;
  }
  for (int i = 0; i < 4; ++i) koch_points(pts[i], pts[i + 1], w, at, extra - 1, out);
}

double min_gap(const std::vector<C>& p, const std::vector<C>& q) {
  double best = 1e9;
  for (const auto& x : p) {
    for (const auto& y : q) best = std::min(best, std::abs(x - y));
  }
  return best;
}

ExactRational frac(long p, long q) { return ExactRational(BigInt(p), BigInt(q)); }

}  // namespace

TEST_CASE("space catalogue") {
  CHECK(space_names() == std::vector<std::string>{"sigma", "cantor", "carpet", "gasket", "koch"});
  CHECK(space_by_name("carpet").branching == 8);
  CHECK(space_by_name("koch").branching == 4);
  CHECK(space_by_name("gasket").separation_degree == 2);
  CHECK_THROWS_AS(space_by_name("mandelbrot"), Error);
}

TEST_CASE("depth_for picks the least adequate depth") {
  const SpaceDescriptor carpet = make_carpet();
  for (double tol : {0.5, 0.1, 0.02, 1e-6}) {
    const int k = carpet.depth_for(tol);
    CHECK(carpet.diameter_law(k).to_double() < tol);
    if (k > 0) CHECK(carpet.diameter_law(k - 1).to_double() >= tol);
  }
}

TEST_CASE("carpet boundary agreement") {
  const SpaceDescriptor s = make_carpet();
  CHECK(address_of(s, ExactPoint{frac(1, 3), frac(1, 10)}, 1) == Word{0});
  CHECK(address_of(s, ExactPoint{frac(1, 10), frac(1, 3)}, 1) == Word{0});
  CHECK(address_of(s, ExactPoint{frac(1, 3), frac(1, 3)}, 1) == Word{0});
  CHECK(address_of(s, ExactPoint{frac(2, 3), frac(1, 2)}, 1) == Word{4});
  CHECK(address_of(s, ExactPoint{1, 1}, 2) == Word{7, 7});
  CHECK_THROWS_AS(address_of(s, ExactPoint{frac(1, 2), frac(1, 2)}, 1), Error);
  CHECK_THROWS_AS(address_of(s, ExactPoint{frac(3, 2), 0}, 1), Error);
}

TEST_CASE("cantor membership") {
  const SpaceDescriptor s = make_cantor();
  CHECK(address_of(s, ExactPoint{frac(1, 3), 0}, 1) == Word{0});
  CHECK(address_of(s, ExactPoint{frac(2, 3), 0}, 1) == Word{1});
  CHECK(address_of(s, ExactPoint{frac(1, 4), 0}, 3) == Word{0, 1, 0});
  CHECK_THROWS_AS(address_of(s, ExactPoint{frac(1, 2), 0}, 1), Error);
}

TEST_CASE("centers decode to their own words") {
  for (const auto& name : {"cantor", "carpet", "gasket", "koch"}) {
    const SpaceDescriptor s = space_by_name(name);
    for (const Word& w : all_words(s.branching, 3)) {
      CHECK_MESSAGE(address_of(s, region_center(subset_region(s, w)), 3) == w, name << " " << format_word(w, 1));
    }
  }
}

TEST_CASE("children sit inside their parents") {
  for (const auto& name : {"cantor", "carpet", "gasket", "koch"}) {
    const SpaceDescriptor s = space_by_name(name);
    for (const Word& w : all_words(s.branching, 2)) {
      const Region parent = subset_region(s, w);
      for (int d = 0; d < s.branching; ++d) {
        Word child = w;
        child.push_back(static_cast<Digit>(d));
        CHECK(region_contains(parent, subset_region(s, child)));
      }
    }
  }
}

TEST_CASE("gasket triangles against explicit vertices") {
  const SpaceDescriptor s = make_gasket();
  // G2 G1 (0-based 1, 0): corner (1/2, 0), side 1/4.
  const Region r = subset_region(s, Word{1, 0});
  const auto box = bounding_box(r);
  CHECK(box[0] == doctest::Approx(0.5));
  CHECK(box[1] == doctest::Approx(0.75));
  CHECK(box[3] == doctest::Approx(std::sqrt(3.0) / 8.0));
  CHECK(region_diameter(r)->square() == frac(1, 16));
  // Tie on the shared vertex of G1 and G2 goes to G1.
  CHECK(address_of(s, Point{0.5, 0.0}, 1) == Word{0});
}

TEST_CASE("koch distance brackets contain sampled distances") {
  const SpaceDescriptor s = make_koch();
  for (auto [a, b] : {std::pair<Digit, Digit>{0, 2}, {0, 3}, {1, 3}, {0, 1}}) {
    const DistanceBracket d = set_distance(subset_region(s, Word{a}), subset_region(s, Word{b}), 10);
    std::vector<C> p, q;
    koch_points(0.0, 1.0, Word{a}, 0, 6, p);
    koch_points(0.0, 1.0, Word{b}, 0, 6, q);
    const double sampled = min_gap(p, q);
    CHECK(d.lower <= sampled + 1e-12);
    CHECK(sampled - d.upper < 2.0 * std::pow(3.0, -7));
    CHECK(d.lower <= d.upper);
  }
  const DistanceBracket k13 = set_distance(subset_region(s, Word{0}), subset_region(s, Word{2}), 14);
  CHECK(k13.lower <= std::sqrt(7.0) / 9.0);
  CHECK(k13.upper >= std::sqrt(7.0) / 9.0);
  CHECK(set_distance(subset_region(s, Word{0}), subset_region(s, Word{1}), 6).touching());
}

TEST_CASE("exact distances on rectangles, intervals and triangles") {
  const SpaceDescriptor carpet = make_carpet();
  const DistanceBracket d = set_distance(subset_region(carpet, Word{0}), subset_region(carpet, Word{7}));
  REQUIRE(d.exact);
  CHECK(d.exact->square() == frac(2, 9));
  const SpaceDescriptor cantor = make_cantor();
  CHECK(set_distance(subset_region(cantor, Word{0, 1}), subset_region(cantor, Word{1, 0})).exact->square() ==
        frac(1, 9));
  const SpaceDescriptor gasket = make_gasket();
  const DistanceBracket g = set_distance(subset_region(gasket, Word{0, 1}), subset_region(gasket, Word{1, 2}));
  REQUIRE(g.exact);
  CHECK(g.exact->to_double() == doctest::Approx(std::sqrt(3.0) / 8.0));
}

TEST_CASE("separation tables") {
  const SeparationTable t = check_separation(make_carpet(), 1);
  CHECK(t.pass());
  CHECK(t.prefixes.size() == 8);
  for (const auto& e : t.best_partner) CHECK(e.distance.lower >= t.epsilon_lower);
  // Soundness: the estimate never exceeds any non-touching pair.
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      if (i != j && !t.distances[i][j].touching()) CHECK(t.epsilon_lower <= t.distances[i][j].lower);
    }
  }
  CHECK_THROWS_AS(check_separation(make_carpet(), 4), Error);
  const SeparationTable sigma = check_separation(make_sigma(), 1);
  REQUIRE(sigma.epsilon_exact);
  CHECK(sigma.epsilon_exact->square() == ExactRational(1));
  CHECK(sigma.epsilon_lower <= 1.0);
}

TEST_CASE("diameter condition") {
  for (const auto& name : {"sigma", "cantor", "carpet", "gasket", "koch"}) {
    const DiameterReport r = check_diameter_condition(space_by_name(name), 5);
    CHECK_MESSAGE(r.pass(), name);
  }
}

TEST_CASE("similarity identity with a geometric check") {
  for (const auto& name : {"sigma", "cantor", "carpet", "gasket", "koch"}) {
    const SpaceDescriptor s = space_by_name(name);
    const SimilarityCertificate c = verify_similarity_identity(s, Word{1, 0}, 2);
    CHECK_MESSAGE(c.holds, name);
    CHECK(c.bijection.size() == static_cast<std::size_t>(s.branching * s.branching));
  }
}

TEST_CASE("fast membership agrees with exact decoding") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const SpaceDescriptor carpet = make_carpet();
  for (int i = 0; i < 2000; ++i) {
    const Point p{u(rng), u(rng)};
    bool exact = true;
    try {
      address_of(carpet, ExactPoint{ExactRational::from_double(p.x), ExactRational::from_double(p.y)}, 3);
    } catch (const Error&) {
      exact = false;
    }
    CHECK(contains_at_depth(carpet, p, 3) == exact);
  }
}

TEST_CASE("the string space has no point codec") {
  CHECK_THROWS_AS(point_of(make_sigma(), Address::constant(2, {}, 0), 0.1), Error);
  CHECK(std::holds_alternative<Cylinder>(subset_region(make_sigma(), Word{0, 1})));
}

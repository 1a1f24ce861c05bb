#include <cmath>
#include <sstream>

#include "doctest.h"
#include "simchaos/dass.hpp"
#include "simchaos/errors.hpp"

using namespace simchaos;

namespace {

DassTree logistic_tree(Vec r, Vec mu, int depth, double h, int expect) {
  BuildOptions opt;
  opt.expected_branching = expect;
  return escape_time_tree(logistic_spec(std::move(r), std::move(mu)), depth, h, opt);
}

std::string bytes(const DassTree& t) {
  std::ostringstream s(std::ios::binary);
  write_tree(s, t);
  return s.str();
}

}  // namespace

TEST_CASE("first-level intervals") {
  for (double r : {4.2, 4.3, 4.5, 5.0}) {
    const FirstLevel f = first_level_intervals_1d(r);
    CHECK(f.gap == doctest::Approx(std::sqrt(1.0 - 4.0 / r)).epsilon(1e-15));
    // The interval ends map exactly onto 1.
    CHECK(r * f.left_hi * (1 - f.left_hi) == doctest::Approx(1.0));
    CHECK(r * f.right_lo * (1 - f.right_lo) == doctest::Approx(1.0));
  }
  CHECK(first_level_intervals_1d(4.3).gap == doctest::Approx(0.264135).epsilon(1e-6));
  CHECK(first_level_intervals_1d(4.0).gap == 0.0);
  CHECK_THROWS_AS(first_level_intervals_1d(3.9), Error);
}

TEST_CASE("one-dimensional tree against the closed form") {
  const double h = 1.0 / 4096;
  const DassTree t = logistic_tree({4.3}, {}, 3, h, 2);
  CHECK(t.cluster_count(0) == 1);
  CHECK(t.cluster_count(1) == 2);
  CHECK(t.cluster_count(2) == 4);
  CHECK(t.cluster_count(3) == 8);
  const FirstLevel f = first_level_intervals_1d(4.3);
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    const double x = t.center(c)[0];
    const bool inside = x <= f.left_hi || x >= f.right_lo;
    if (std::min(std::abs(x - f.left_hi), std::abs(x - f.right_lo)) > h) CHECK(t.survives(c, 1) == inside);
  }
  // Level-2 labels are itineraries: digit 1 is the side of x, digit 2 the side of f(x).
  for (std::uint64_t c = 0; c < t.cell_count(); c += 37) {
    if (!t.survives(c, 2)) continue;
    const double x = t.center(c)[0];
    const double fx = 4.3 * x * (1 - x);
    const Word w = t.label_word(t.label(c, 2), 2);
    CHECK(w[0] == (x < 0.5 ? 0 : 1));
    CHECK(w[1] == (fx < 0.5 ? 0 : 1));
  }
}

TEST_CASE("separable tree is the product of one-dimensional trees") {
  const double h = 1.0 / 256;
  const DassTree t = logistic_tree({4.2, 4.3}, {0, 0}, 3, h, 4);
  const DassTree tx = logistic_tree({4.2}, {}, 3, h, 2);
  const DassTree ty = logistic_tree({4.3}, {}, 3, h, 2);
  CHECK(t.cluster_count(3) == 64);
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    const auto xy = t.coords(c);
    const auto cx = static_cast<std::uint64_t>(xy[0]), cy = static_cast<std::uint64_t>(xy[1]);
    const int s = std::min(tx.survival[cx], ty.survival[cy]);
    REQUIRE(t.survival[c] == s);
    if (s == 0) continue;
    const Word w = t.label_word(t.label(c, s), s);
    const Word wx = tx.label_word(tx.label(cx, s), s);
    const Word wy = ty.label_word(ty.label(cy, s), s);
    for (int j = 0; j < s; ++j) {
      CHECK(w[static_cast<std::size_t>(j)] == 2 * wx[static_cast<std::size_t>(j)] + wy[static_cast<std::size_t>(j)]);
    }
  }
  CHECK(label_consistency_check(t).empty());
}

TEST_CASE("permuted labels are caught") {
  DassTree t = logistic_tree({4.2, 4.5}, {0.03, -0.05}, 3, 1.0 / 256, 4);
  REQUIRE(label_consistency_check(t).empty());
  // Rotate the second itinerary digit of every deep cell.
  const std::uint64_t m = static_cast<std::uint64_t>(t.branching);
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    const int s = t.survival[c];
    if (s < 2) continue;
    Word w = t.label_word(t.itinerary[c], s);
    w[1] = static_cast<Digit>((w[1] + 1) % m);
    std::uint64_t packed = 0;
    for (Digit d : w) packed = packed * m + d;
    t.itinerary[c] = packed;
  }
  rebuild_clusters(t);
  CHECK_FALSE(label_consistency_check(t).empty());
}

TEST_CASE("tent tree realizes the carpet levels") {
  const DassTree t = tent_dass_tree(3, 1.0 / 243);
  CHECK(t.branching == 8);
  CHECK(t.cluster_count(1) == 8);
  CHECK(t.cluster_count(2) == 64);
  CHECK(t.cluster_count(3) == 512);
  CHECK(label_consistency_check(t).empty());
  // The middle square never survives.
  CHECK_FALSE(t.survives(*t.cell_at({0.5, 0.5}), 1));
  CHECK(t.survives(*t.cell_at({0.1, 0.1}), 1));
}

TEST_CASE("wrong branching is a labeling error") {
  BuildOptions opt;
  opt.expected_branching = 8;
  CHECK_THROWS_AS(escape_time_tree(logistic_spec({4.2, 4.3}), 2, 1.0 / 128, opt), Error);
  CHECK_THROWS_AS(escape_time_tree(logistic_spec({4.2}), 2, 0.3), Error);
  BuildOptions tiny;
  tiny.cell_cap = 1000;
  CHECK_THROWS_AS(escape_time_tree(logistic_spec({4.2, 4.3}), 2, 1.0 / 128, tiny), Error);
}

TEST_CASE("couplings") {
  const MapSpec s = logistic_spec({4.2, 4.5}, {0.03, -0.05});
  const Vec y = perturbed_step(s, {0.2, 0.3});
  CHECK(y[0] == doctest::Approx(4.2 * 0.2 * 0.8 + 0.03 * 0.3));
  CHECK(y[1] == doctest::Approx(4.5 * 0.3 * 0.7 - 0.05 * 0.2));
  register_coupling("square-test", [](const Vec& x, const Vec& mu) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = mu[i] * x[i] * x[i];
    return out;
  });
  const MapSpec q = logistic_spec({4.2}, {0.5}, "square-test");
  CHECK(map_step(q, {0.5})[0] == doctest::Approx(4.2 * 0.25 + 0.125));
  try {
    logistic_spec({4.2}, {0.0}, "no-such-coupling");
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnresolvedCoupling);
  }
}

TEST_CASE("trajectories stop at the first point outside F") {
  const MapSpec s = logistic_spec({4.2, 4.5}, {0.03, -0.05});
  const Vec start{0.044608921784357, 0.287657531506301};
  const Trajectory t = trajectory(s, start, 1000);
  CHECK(t.points.front() == start);
  REQUIRE(t.escape_step);
  CHECK(t.points.size() == *t.escape_step + 1);
  CHECK_FALSE(s.f.contains(t.points.back()));
  for (std::size_t i = 0; i + 1 < t.points.size(); ++i) CHECK(s.f.contains(t.points[i]));
  CHECK(escape_time(s, start, 1000) < *t.escape_step);
}

TEST_CASE("deep points and sensitivity") {
  const MapSpec s = logistic_spec({4.2, 4.5}, {0.03, -0.05});
  const DassTree t = logistic_tree({4.2, 4.5}, {0.03, -0.05}, 3, 1.0 / 256, 4);
  const auto& cl = t.level(3).clusters.front();
  const Vec start = t.center(cl.cells[cl.cells.size() / 2]);
  const Vec p = deep_point(s, start, 4.0 / 256, 60);
  // Expansion of at least 4.2 per step caps how long a double orbit can stay.
  CHECK(escape_time(s, p, 60) >= 30);
  CHECK(escape_time(s, p, 60) > escape_time(s, start, 60));
  const SensitivityProbe probe = sensitivity_probe(s, p, {p[0] + 1e-10, p[1]}, 60, 0.1);
  CHECK(probe.separated_at.has_value());
  CHECK(probe.separation >= 0.1);
}

TEST_CASE("condition report flags weak separation") {
  const DassTree strong = logistic_tree({4.2, 4.5}, {0.03, -0.05}, 3, 1.0 / 512, 4);
  const DassConditionReport a = dass_condition_report(strong);
  CHECK(a.pass());
  CHECK_FALSE(a.weak_separation);
  CHECK(a.levels.size() == 3);
  const DassTree weak = logistic_tree({4.0001, 4.0001}, {0, 0}, 2, 1.0 / 2048, 4);
  const DassConditionReport b = dass_condition_report(weak);
  CHECK(b.weak_separation);
  CHECK(b.levels.front().epsilon == doctest::Approx(std::sqrt(1 - 4 / 4.0001)).epsilon(0.5));
}

TEST_CASE("tree files round-trip and reject damage") {
  const DassTree t = logistic_tree({4.2, 4.5}, {0.03, -0.05}, 3, 1.0 / 256, 4);
  const std::string b = bytes(t);
  std::istringstream in(b);
  const DassTree back = read_tree(in);
  CHECK(back.survival == t.survival);
  CHECK(back.itinerary == t.itinerary);
  CHECK(back.cluster_count(3) == t.cluster_count(3));
  CHECK(bytes(back) == b);

  std::string bad = b;
  bad[0] = 'X';
  std::istringstream in1(bad);
  CHECK_THROWS_AS(read_tree(in1), Error);
  std::istringstream in2(b.substr(0, b.size() / 2));
  CHECK_THROWS_AS(read_tree(in2), Error);
}

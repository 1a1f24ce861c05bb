#include <cmath>
#include <sstream>

#include "doctest.h"
#include "simchaos/fractals.hpp"
#include "simchaos/render.hpp"
#include "simchaos/report.hpp"

using namespace simchaos;

namespace {

RenderJob square_job(int n) {
  RenderJob job;
  job.width = job.height = n;
  return job;
}

}  // namespace

TEST_CASE("carpet depth 1 has eight filled squares and an empty center") {
  const Raster r = render_space(make_carpet(), 1, square_job(729));
  CHECK(r.count_set() == 8u * 243 * 243);
  CHECK_FALSE(r.set(364, 364));
  for (int cy = 0; cy < 3; ++cy) {
    for (int cx = 0; cx < 3; ++cx) {
      CHECK(r.set(cx * 243 + 121, cy * 243 + 121) == !(cx == 1 && cy == 1));
    }
  }
}

TEST_CASE("cantor depth 2 strip has four runs") {
  RenderJob job;
  job.width = 729;
  job.height = 1;
  job.view = default_viewport(make_cantor());
  const Raster r = render_space(make_cantor(), 2, job);
  int runs = 0;
  for (int x = 0; x < 729; ++x) runs += r.set(x, 0) && (x == 0 || !r.set(x - 1, 0));
  CHECK(runs == 4);
  CHECK(r.count_set() == 4u * 81);
}

TEST_CASE("depth 0 fills the root region") {
  CHECK(render_space(make_carpet(), 0, square_job(81)).count_set() == 81u * 81);
  RenderJob job = square_job(200);
  job.view = default_viewport(make_gasket());
  const Raster g = render_space(make_gasket(), 0, job);
  // Roughly half of the bounding box of a triangle.
  CHECK(static_cast<double>(g.count_set()) / (200.0 * 200.0) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("render jobs are validated") {
  CHECK_THROWS(render_space(make_carpet(), 1, square_job(0)));
  RenderJob job = square_job(10);
  job.view = {1.0, 0.0, 0.0, 1.0};
  CHECK_THROWS(render_space(make_carpet(), 1, job));
  CHECK_THROWS(render_space(make_carpet(), 13, square_job(10)));
  CHECK_THROWS(default_viewport(make_sigma()));
}

TEST_CASE("tree rasters") {
  const DassTree t = escape_time_tree(logistic_spec({4.2, 4.3}), 3, 1.0 / 256, {});
  const Raster l0 = render_tree(t, 0, square_job(64));
  CHECK(l0.count_set() == 64u * 64);
  RenderJob color = square_job(256);
  color.color = true;
  const Raster l1 = render_tree(t, 1, color);
  CHECK(l1.channels == 3);
  CHECK(l1 == render_tree(t, 1, color));
  CHECK_THROWS(render_tree(t, 4, color));
  // A level beyond every survivor renders blank.
  const DassTree thin = escape_time_tree(logistic_spec({9.0, 9.0}), 6, 1.0 / 16, {});
  CHECK(render_tree(thin, 6, square_job(16)).count_set() == 0);
}

TEST_CASE("netpbm headers") {
  const Raster r = render_space(make_carpet(), 1, square_job(9));
  std::ostringstream pgm;
  write_pgm(pgm, r);
  CHECK(pgm.str().rfind("P5\n9 9\n255\n", 0) == 0);
  CHECK(pgm.str().size() == 11 + 81);
  std::ostringstream ppm;
  write_ppm(ppm, r);
  CHECK(ppm.str().rfind("P6\n9 9\n255\n", 0) == 0);
  CHECK(ppm.str().size() == 11 + 243);
}

TEST_CASE("orbit CSV") {
  CHECK(emit_orbit_csv(std::vector<Point>{}) == "step,x,y\n");
  const std::vector<Point> three{{0.1, 0.2}, {1.0 / 3.0, 2.0 / 3.0}, {1e-300, -0.0}};
  const std::string csv = emit_orbit_csv(three);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find('\r') == std::string::npos);
  const auto back = parse_orbit_csv(csv);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].x == three[i].x);
    CHECK(back[i].y == three[i].y);
  }
  CHECK(csv.find("0,0.1,0.2\n") != std::string::npos);
  CHECK(format_double(0.044608921784357) == "0.044608921784357");
  CHECK_THROWS(parse_orbit_csv("x,y\n"));
  CHECK_THROWS(parse_orbit_csv("step,x,y\n0,abc,1\n"));
}

TEST_CASE("config files") {
  const Config c = parse_config("# run settings\nspace = carpet\n\ndepth=3  # inline\nname = \"a b\"\n");
  CHECK(c.at("space") == "carpet");
  CHECK(c.at("depth") == "3");
  CHECK(c.at("name") == "a b");
  CHECK(c.size() == 3);
  CHECK_THROWS(parse_config("depth 3\n"));
  CHECK_THROWS(parse_config("= 3\n"));
}

TEST_CASE("check reports carry the common schema") {
  const auto j = check_report("carpet", "space-verify", 3, nlohmann::json::array(), nlohmann::json::array(), true,
                              Config{{"depth", "3"}});
  for (const char* key : {"space", "check", "depth", "values", "witnesses", "pass", "tool", "config"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["tool"]["version"] == kToolVersion);
  CHECK(dump_report(j).back() == '\n');
  const SeparationTable t = check_separation(make_carpet(), 1);
  const auto s = separation_json(t, 1);
  CHECK(s["epsilon_exact"] == "1/3");
  CHECK(s["best_partner"].size() == 8);
}

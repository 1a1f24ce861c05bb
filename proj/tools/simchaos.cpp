// simchaos: command-line front end for the space checks, chaos witnesses,
// escape-time trees and artifact rendering.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "simchaos/chaos.hpp"
#include "simchaos/dass.hpp"
#include "simchaos/errors.hpp"
#include "simchaos/fractals.hpp"
#include "simchaos/render.hpp"
#include "simchaos/report.hpp"
#include "simchaos/space.hpp"

using namespace simchaos;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Command {
  CLI::App* app = nullptr;
  std::string name;
  std::function<int(const Config&)> run;
};

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

void emit(const json& report, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << dump_report(report);
  } else {
    save_report(out, report);
  }
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path);
  f << text;
}

void write_raster(const Raster& r, const std::string& path) {
  if (path.empty()) throw UsageError("--out is required");
  if (ends_with(path, ".ppm")) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot open " + path);
    write_ppm(f, r);
  } else {
    save_raster(path, r);
  }
}

SpaceDescriptor need_space(const std::string& name) {
  if (name.empty()) throw UsageError("--space is required (" + [] {
    std::string s;
    for (const auto& n : space_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }() + ")");
  return space_by_name(name);
}

// Fills options not given on the command line from the config file.
void apply_config(CLI::App* app, const Config& cfg) {
  for (CLI::Option* opt : app->get_options()) {
    if (opt->count() > 0) continue;
    for (const auto& lname : opt->get_lnames()) {
      const auto it = cfg.find(lname);
      if (it == cfg.end()) continue;
      if (lname == "config" || lname == "help") continue;
      opt->add_result(it->second);
      opt->run_callback();
      break;
    }
  }
}

// Every option that shapes the result. Output destinations are left out so a
// report does not depend on where it was written.
Config resolved(CLI::App* app, const std::string& command) {
  Config out;
  out["command"] = command;
  for (CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "out" || name == "csv" || name == "png") continue;
    if (opt->count() > 0) {
      std::string v;
      for (const auto& r : opt->results()) v += (v.empty() ? "" : ",") + r;
      out[name] = v;
    } else {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SIMCHAOS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("SIMCHAOS_SEED must be an unsigned integer");
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar spaces, similarity-map chaos and escape-time trees"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(kToolVersion));
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; command-line flags take precedence");
  app.require_subcommand(1);
  std::vector<Command> commands;

  // space verify | render
  auto* space = app.add_subcommand("space", "Checks and renders of the bundled spaces");
  space->require_subcommand(1);

  struct {
    std::string space, out;
    int depth = 3, sep_degree = 0, refine = -1;
  } sv;
  auto* verify = space->add_subcommand("verify", "Diameter, separation and similarity checks as a JSON report");
  verify->add_option("--space", sv.space, "sigma, cantor, carpet, gasket or koch");
  verify->add_option("--depth", sv.depth, "Deepest level of the diameter check")->check(CLI::Range(1, 20));
  verify->add_option("--sep-degree", sv.sep_degree, "Separation degree (0 = the space default)")
      ->check(CLI::Range(0, 4));
  verify->add_option("--refine", sv.refine, "Koch hull refinement (-1 = default)");
  verify->add_option("--out", sv.out, "Report path (stdout when omitted)");
  commands.push_back({verify, "space verify", [&](const Config& cfg) {
                        const SpaceDescriptor s = need_space(sv.space);
                        const int degree = sv.sep_degree > 0 ? sv.sep_degree : s.separation_degree;
                        const DiameterReport diam = check_diameter_condition(s, sv.depth);
                        const SeparationTable table = check_separation(s, degree, sv.refine);
                        bool sim_ok = true;
                        std::size_t sim_checked = 0;
                        for (int len = 0; len <= std::min(sv.depth, 2); ++len) {
                          for (const Word& w : all_words(s.branching, len)) {
                            sim_ok = sim_ok && verify_similarity_identity(s, w, 1).holds;
                            ++sim_checked;
                          }
                        }
                        json values = json::array();
                        values.push_back({{"name", "diameter"}, {"result", diameter_json(diam)}});
                        json sep = separation_json(table, s.display_offset);
                        if (s.separation_constant && degree == s.separation_degree) {
                          sep["expected"] = s.separation_constant->to_string();
                          sep["expected_value"] = s.separation_constant->to_double();
                        }
                        values.push_back({{"name", "separation"}, {"result", sep}});
                        values.push_back({{"name", "similarity"},
                                          {"result", {{"prefixes", sim_checked}, {"pass", sim_ok}}}});
                        json witnesses = json::array();
                        for (const auto& e : table.best_partner) {
                          witnesses.push_back(format_word(e.prefix, s.display_offset) + " ~ " +
                                              format_word(e.partner, s.display_offset));
                        }
                        const bool pass = diam.pass() && table.pass() && sim_ok;
                        emit(check_report(s.name, "space-verify", sv.depth, values, witnesses, pass, cfg), sv.out);
                        return pass ? kExitPass : kExitFailed;
                      }});

  struct {
    std::string space, out;
    int depth = 3, width = 729, height = 729;
    bool color = false;
  } sr;
  auto* render = space->add_subcommand("render", "Raster of the depth-n subsets (PGM, or PPM with --color)");
  render->add_option("--space", sr.space, "cantor, carpet, gasket or koch");
  render->add_option("--depth", sr.depth, "Subdivision depth")->check(CLI::Range(0, 12));
  render->add_option("--width", sr.width, "Pixels per row")->check(CLI::PositiveNumber);
  render->add_option("--height", sr.height, "Pixel rows")->check(CLI::PositiveNumber);
  render->add_flag("--color", sr.color, "Color each depth-n subset");
  render->add_option("--out", sr.out, "Output raster path");
  commands.push_back({render, "space render", [&](const Config&) {
                        const SpaceDescriptor s = need_space(sr.space);
                        RenderJob job;
                        job.view = default_viewport(s);
                        job.width = sr.width;
                        job.height = sr.height;
                        job.color = sr.color;
                        write_raster(render_space(s, sr.depth, job), sr.out);
                        return kExitPass;
                      }});

  // orbit
  struct {
    std::string space, prefix, csv, coupling = "linear-cross";
    int steps = -1;
    std::vector<double> r, mu, start;
  } ob;
  auto* orbit = app.add_subcommand("orbit", "Orbit as CSV: subset centers of a space, or a logistic trajectory");
  orbit->add_option("--space", ob.space, "Space whose subset centers are followed");
  orbit->add_option("--prefix", ob.prefix, "Index digits (1-based for the fractals; carpet default is built in)");
  orbit->add_option("--steps", ob.steps, "Number of steps (default: prefix length, or 1000)");
  orbit->add_option("--r", ob.r, "Logistic rates, comma separated")->delimiter(',');
  orbit->add_option("--mu", ob.mu, "Coupling coefficients, comma separated")->delimiter(',');
  orbit->add_option("--coupling", ob.coupling, "Registered coupling name");
  orbit->add_option("--start", ob.start, "Start point, comma separated")->delimiter(',');
  orbit->add_option("--csv", ob.csv, "CSV path (stdout when omitted)");
  commands.push_back({orbit, "orbit", [&](const Config&) {
                        if (!ob.space.empty()) {
                          const SpaceDescriptor s = need_space(ob.space);
                          std::string digits = ob.prefix;
                          if (digits.empty() && s.kind == SpaceKind::Carpet) digits = kCarpetOrbitIndex;
                          if (digits.empty()) throw UsageError("--prefix is required for " + s.name);
                          const Word w = parse_word(digits, s.branching, s.display_offset);
                          const int steps = ob.steps < 0 ? static_cast<int>(w.size()) : ob.steps;
                          write_text(emit_orbit_csv(center_orbit(s, w, steps)), ob.csv);
                          return kExitPass;
                        }
                        if (ob.r.empty() || ob.start.empty()) throw UsageError("give --space, or --r and --start");
                        const MapSpec spec = logistic_spec(ob.r, ob.mu, ob.coupling);
                        const std::size_t steps = ob.steps < 0 ? 1000 : static_cast<std::size_t>(ob.steps);
                        const Trajectory t = trajectory(spec, ob.start, steps);
                        write_text(emit_orbit_csv(t.points), ob.csv);
                        if (t.escape_step) std::cerr << "orbit left F at step " << *t.escape_step << "\n";
                        return kExitPass;
                      }});

  // distance
  struct {
    std::string space, a, b, out;
    int refine = -1;
  } ds;
  auto* distance = app.add_subcommand("distance", "Certified distance between two subsets or two strings");
  distance->add_option("--space", ds.space, "Space name");
  distance->add_option("--a", ds.a, "Subset index (digits) or, for sigma, an address such as 2:01|c0");
  distance->add_option("--b", ds.b, "Second subset index or address");
  distance->add_option("--refine", ds.refine, "Koch hull refinement (-1 = default)");
  distance->add_option("--out", ds.out, "Report path (stdout when omitted)");
  commands.push_back({distance, "distance", [&](const Config& cfg) {
                        const SpaceDescriptor s = need_space(ds.space);
                        if (ds.a.empty() || ds.b.empty()) throw UsageError("--a and --b are required");
                        json values = json::array();
                        if (s.kind == SpaceKind::Sigma && ds.a.find(':') != std::string::npos) {
                          const ExactRational d = sigma_distance(Address::parse(ds.a), Address::parse(ds.b));
                          values.push_back({{"name", "distance"},
                                            {"exact", d.to_string()},
                                            {"lower", d.to_double()},
                                            {"upper", d.to_double()},
                                            {"method", "sigma-series"}});
                        } else {
                          const Word a = parse_word(ds.a, s.branching, s.display_offset);
                          const Word b = parse_word(ds.b, s.branching, s.display_offset);
                          const int refine = ds.refine >= 0 ? ds.refine : s.refine;
                          json d = bracket_json(set_distance(subset_region(s, a), subset_region(s, b), refine));
                          d["name"] = "distance";
                          values.push_back(d);
                        }
                        emit(check_report(s.name, "distance", 0, values, json::array({ds.a, ds.b}), true, cfg),
                             ds.out);
                        return kExitPass;
                      }});

  // chaos report
  auto* chaos = app.add_subcommand("chaos", "Chaos witnesses");
  chaos->require_subcommand(1);
  struct {
    std::string space, out;
    int depth = 4;
    std::size_t samples = 100, horizon = 0;
    std::optional<std::uint64_t> seed;
  } cr;
  auto* creport = chaos->add_subcommand("report", "Periodic, transitive, sensitive (and Li-Yorke) witnesses");
  creport->add_option("--space", cr.space, "Space name");
  creport->add_option("--depth", cr.depth, "Target length scale and transitive block length")
      ->check(CLI::Range(1, 12));
  creport->add_option("--samples", cr.samples, "Random targets and sensitivity pairs");
  creport->add_option("--seed", cr.seed, "Seed (default: SIMCHAOS_SEED, then 1)");
  creport->add_option("--li-yorke-horizon", cr.horizon, "Add a Li-Yorke pair up to this shift (0 = skip)");
  creport->add_option("--out", cr.out, "Report path (stdout when omitted)");
  commands.push_back({creport, "chaos report", [&](const Config& base) {
                        const SpaceDescriptor s = need_space(cr.space);
                        const std::uint64_t seed = resolve_seed(cr.seed);
                        Config cfg = base;
                        cfg["seed"] = std::to_string(seed);
                        const DevaneyReport dev = devaney_report(s, cr.depth, cr.samples, seed);
                        json values = json::array({devaney_json(dev)});
                        json witnesses = json::array();
                        for (const auto& r : dev.reports) {
                          for (const auto& w : r.witnesses) witnesses.push_back(w);
                        }
                        bool pass = dev.pass;
                        if (cr.horizon > 0) {
                          const SeparationTable table = check_separation(s, s.separation_degree);
                          const WitnessReport ly = li_yorke_report(s, table, cr.horizon);
                          values.push_back(witness_json(ly));
                          pass = pass && ly.pass;
                        }
                        emit(check_report(s.name, "chaos-report", cr.depth, values, witnesses, pass, cfg), cr.out);
                        return pass ? kExitPass : kExitFailed;
                      }});

  // dass build | check | render
  auto* dass = app.add_subcommand("dass", "Escape-time trees of logistic and tent maps");
  dass->require_subcommand(1);
  struct {
    std::string map = "logistic", coupling = "linear-cross", out, png;
    int dim = 0, depth = 3, expect = 0, level = -1;
    long grid = 2048;
    std::vector<double> r, mu;
  } db;
  auto* build = dass->add_subcommand("build", "Build and save an escape-time tree");
  build->add_option("--map", db.map, "logistic or tent")->check(CLI::IsMember({"logistic", "tent"}));
  build->add_option("--dim", db.dim, "Dimension (0 = number of rates)");
  build->add_option("--r", db.r, "Logistic rates, comma separated")->delimiter(',');
  build->add_option("--mu", db.mu, "Coupling coefficients, comma separated")->delimiter(',');
  build->add_option("--coupling", db.coupling, "Registered coupling name");
  build->add_option("--depth", db.depth, "Tree depth")->check(CLI::Range(0, 20));
  build->add_option("--grid", db.grid, "Cells per unit length")->check(CLI::PositiveNumber);
  build->add_option("--expect", db.expect, "Required number of level-1 clusters (0 = any)");
  build->add_option("--out", db.out, "Tree file");
  build->add_option("--png", db.png, "Optional label raster of --level (PPM bytes)");
  build->add_option("--level", db.level, "Level drawn by --png (-1 = depth)");
  commands.push_back({build, "dass build", [&](const Config& cfg) {
                        if (db.out.empty()) throw UsageError("--out is required");
                        DassTree tree;
                        const double h = 1.0 / static_cast<double>(db.grid);
                        if (db.map == "tent") {
                          tree = tent_dass_tree(db.depth, h);
                        } else {
                          if (db.r.empty()) throw UsageError("--r is required for the logistic map");
                          if (db.dim != 0 && static_cast<std::size_t>(db.dim) != db.r.size()) {
                            throw UsageError("--dim does not match the number of rates");
                          }
                          BuildOptions opt;
                          opt.expected_branching = db.expect;
                          tree = escape_time_tree(logistic_spec(db.r, db.mu, db.coupling), db.depth, h, opt);
                        }
                        save_tree(db.out, tree);
                        if (!db.png.empty()) {
                          RenderJob job;
                          job.width = job.height = 512;
                          job.color = true;
                          const int level = db.level < 0 ? tree.depth : db.level;
                          write_raster(render_tree(tree, level, job), db.png);
                        }
                        json counts = json::array();
                        for (int k = 1; k <= tree.depth; ++k) counts.push_back(tree.cluster_count(k));
                        json values = json::array({{{"name", "clusters"}, {"per_level", counts}},
                                                   {{"name", "branching"}, {"value", tree.branching}},
                                                   {{"name", "h"}, {"value", tree.h}}});
                        std::cout << dump_report(
                            check_report(db.map, "dass-build", tree.depth, values, json::array(), true, cfg));
                        return kExitPass;
                      }});

  struct {
    std::string in, out;
    double tolerance = -1.0, weak = 0.05;
  } dc;
  auto* check = dass->add_subcommand("check", "Label consistency and condition report of a saved tree");
  check->add_option("--in", dc.in, "Tree file");
  check->add_option("--out", dc.out, "Report path (stdout when omitted)");
  check->add_option("--tolerance", dc.tolerance, "Label check tolerance (-1 = 2 h r_max)");
  check->add_option("--weak", dc.weak, "Weak-separation threshold");
  commands.push_back({check, "dass check", [&](const Config& cfg) {
                        if (dc.in.empty()) throw UsageError("--in is required");
                        const DassTree tree = load_tree(dc.in);
                        const auto violations = label_consistency_check(tree, dc.tolerance);
                        const DassConditionReport cond = dass_condition_report(tree, dc.weak);
                        json listed = json::array();
                        for (std::size_t i = 0; i < violations.size() && i < 20; ++i) {
                          const auto& v = violations[i];
                          listed.push_back({{"level", v.level}, {"cell", v.cell}, {"center", v.center},
                                            {"image", v.image}, {"expected", v.expected}});
                        }
                        json counts = json::array();
                        for (int k = 1; k <= tree.depth; ++k) counts.push_back(tree.cluster_count(k));
                        json values = json::array({{{"name", "clusters"}, {"per_level", counts}},
                                                   {{"name", "label_violations"}, {"count", violations.size()}},
                                                   {{"name", "condition"}, {"result", condition_json(cond)}}});
                        const bool pass = violations.empty() && cond.pass();
                        const std::string map = tree.spec.kind == MapKind::Tent ? "tent" : "logistic";
                        emit(check_report(map, "dass-check", tree.depth, values, listed, pass, cfg), dc.out);
                        return pass ? kExitPass : kExitFailed;
                      }});

  struct {
    std::string in, out;
    int level = -1, width = 512, height = 512;
    bool mono = false;
  } dr;
  auto* drender = dass->add_subcommand("render", "Raster of one tree level");
  drender->add_option("--in", dr.in, "Tree file");
  drender->add_option("--level", dr.level, "Level (-1 = depth)");
  drender->add_option("--width", dr.width, "Pixels per row")->check(CLI::PositiveNumber);
  drender->add_option("--height", dr.height, "Pixel rows")->check(CLI::PositiveNumber);
  drender->add_flag("--mono", dr.mono, "Monochrome PGM instead of per-label colors");
  drender->add_option("--out", dr.out, "Output raster path");
  commands.push_back({drender, "dass render", [&](const Config&) {
                        if (dr.in.empty()) throw UsageError("--in is required");
                        const DassTree tree = load_tree(dr.in);
                        RenderJob job;
                        job.width = dr.width;
                        job.height = dr.height;
                        job.color = !dr.mono;
                        job.view = {tree.spec.f.lo.at(0), tree.spec.f.hi.at(0),
                                    tree.spec.f.lo.size() > 1 ? tree.spec.f.lo[1] : -0.5,
                                    tree.spec.f.hi.size() > 1 ? tree.spec.f.hi[1] : 0.5};
                        write_raster(render_tree(tree, dr.level < 0 ? tree.depth : dr.level, job), dr.out);
                        return kExitPass;
                      }});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    const Config file = config_path.empty() ? Config{} : load_config(config_path);
    for (auto& cmd : commands) {
      if (!cmd.app->parsed()) continue;
      apply_config(cmd.app, file);
      return cmd.run(resolved(cmd.app, cmd.name));
    }
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    std::cerr << "simchaos: bad config value: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "simchaos: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "simchaos: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::ResourceCap: return kExitCap;
      case ErrorKind::LabelingError: return kExitFailed;
      default: return kExitUsage;
    }
  } catch (const std::exception& e) {
    std::cerr << "simchaos: " << e.what() << "\n";
    return kExitUsage;
  }
}

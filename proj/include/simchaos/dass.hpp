#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "simchaos/address.hpp"

namespace simchaos {

using Vec = std::vector<double>;

struct Box {
  Vec lo;
  Vec hi;

  bool contains(const Vec& p) const;
  /// Membership in the open box, used for excluded holes.
  bool contains_open(const Vec& p) const;
  std::size_t dim() const { return lo.size(); }
};

Box unit_box(int dim);

/// Coupling term chi(x; mu) added to the logistic part of each coordinate.
using CouplingFn = std::function<Vec(const Vec& x, const Vec& mu)>;

/// Registers a named coupling; "none" and "linear-cross" are built in.
void register_coupling(const std::string& name, CouplingFn fn);
/// Throws UnresolvedCoupling for unknown names.
const CouplingFn& resolve_coupling(const std::string& name);

enum class MapKind { Logistic, Tent };

struct MapSpec {
  MapKind kind = MapKind::Logistic;
  int dim = 1;
  Vec r;
  Vec mu;
  std::string coupling = "linear-cross";
  /// Escape domain; points leaving it (or entering the open hole) escape.
  Box f0;
  std::optional<Box> f0_hole;
  /// Working box covered by the grid.
  Box f;

  void validate() const;
  bool in_f0(const Vec& p) const;
  double r_max() const;
};

/// Logistic family on the unit box with rates r and coupling coefficients mu
/// (zero when omitted).
MapSpec logistic_spec(Vec r, Vec mu = {}, std::string coupling = "linear-cross");
/// The invariant modified tent map on the unit square; the open middle
/// square is the escape region.
MapSpec tent_spec();

/// r_i x_i (1 - x_i) coordinatewise; requires mu = 0.
Vec logistic_step(const MapSpec& spec, const Vec& x);
/// Logistic part plus the coupling term.
Vec perturbed_step(const MapSpec& spec, const Vec& x);
/// One step of the map (perturbed logistic or tent).
Vec map_step(const MapSpec& spec, const Vec& x);

struct FirstLevel {
  double left_hi = 0.0;   // survivors [0, left_hi]
  double right_lo = 0.0;  // and [right_lo, 1]
  double gap = 0.0;
};

/// Points of [0, 1] whose first image stays in [0, 1], for r >= 4.
FirstLevel first_level_intervals_1d(double r);

struct Cluster {
  std::uint64_t label = 0;
  std::vector<std::uint32_t> cells;
  std::vector<std::int64_t> lo;  // bounding box in cell indices, inclusive
  std::vector<std::int64_t> hi;
};

struct DassLevel {
  int k = 0;
  std::vector<Cluster> clusters;
};

/// Escape-time levels over a uniform grid. A cell survives level k when the
/// k iterates checked for its center stay in F0; labels are itineraries
/// through the level-1 clusters, so the map sends label i w onto label w.
struct DassTree {
  MapSpec spec;
  double h = 0.0;
  int depth = 0;
  /// Number of level-1 clusters (alphabet size of the labels).
  int branching = 1;
  /// First iterate checked: 0 (tent) or 1 (logistic).
  int survival_start = 1;
  /// Level-1 clusters come from the lap partition of the map instead of
  /// grid connectivity.
  bool lap_partition = false;
  std::vector<std::int64_t> extent;
  /// Levels survived per cell.
  std::vector<std::uint8_t> survival;
  /// Base-branching itinerary of length survival[c], first digit most significant.
  std::vector<std::uint64_t> itinerary;
  std::vector<DassLevel> levels;

  std::size_t cell_count() const { return survival.size(); }
  Vec center(std::uint64_t cell) const;
  std::vector<std::int64_t> coords(std::uint64_t cell) const;
  std::uint64_t index(const std::vector<std::int64_t>& coords) const;
  /// Cell holding p (clamped onto the grid), or none outside F.
  std::optional<std::uint64_t> cell_at(const Vec& p) const;
  bool survives(std::uint64_t cell, int k) const { return survival[cell] >= k; }
  std::uint64_t label(std::uint64_t cell, int k) const;
  Word label_word(std::uint64_t label, int k) const;
  std::size_t cluster_count(int k) const;
  const DassLevel& level(int k) const;
};

struct BuildOptions {
  /// Expected number of level-1 clusters (0 skips the check).
  int expected_branching = 0;
  std::size_t cell_cap = std::size_t{1} << 28;
  /// Radius in cells of the nearest-survivor fallback for label lookups.
  int lookup_radius = 3;
};

/// Escape-time tree of depth k over the grid of spacing h on spec.f.
DassTree escape_time_tree(const MapSpec& spec, int depth, double h, const BuildOptions& options = {});
/// Tent-map tree whose level-k clusters approximate the depth-k carpet subsets.
DassTree tent_dass_tree(int depth, double h);

/// Recomputes the clusters from survival and itinerary (after edits).
void rebuild_clusters(DassTree& tree);

struct LabelViolation {
  int level = 0;
  std::uint64_t cell = 0;
  Vec center;
  Vec image;
  std::uint64_t expected = 0;
};

/// Checks that the image of every level-k cell center (k >= 2) lies within
/// tolerance of the level-(k-1) cells carrying its shifted label. The default
/// tolerance is 2 h r_max.
std::vector<LabelViolation> label_consistency_check(const DassTree& tree, double tolerance = -1.0);

struct LevelCondition {
  int level = 0;
  std::size_t clusters = 0;
  /// Largest cluster bounding-box diagonal (upper bound on the diameter).
  double max_diameter = 0.0;
  /// Minimum cell gap over non-touching cluster pairs.
  double epsilon = 0.0;
  std::size_t closest_a = 0;
  std::size_t closest_b = 0;
  /// Per cluster, the partner with the largest bounding-box gap.
  std::vector<std::pair<std::size_t, double>> best_partner;
};

struct DassConditionReport {
  std::vector<LevelCondition> levels;
  bool diameters_decreasing = false;
  bool separated = false;
  bool weak_separation = false;
  double weak_threshold = 0.05;
  bool pass() const { return diameters_decreasing && separated; }
};

DassConditionReport dass_condition_report(const DassTree& tree, double weak_threshold = 0.05);

struct Trajectory {
  std::vector<Vec> points;
  /// Step of the first point outside F; that point is the last one kept.
  std::optional<std::size_t> escape_step;
};

Trajectory trajectory(const MapSpec& spec, const Vec& x0, std::size_t steps);

/// Number of iterates that stay in F0, capped at max_steps.
std::size_t escape_time(const MapSpec& spec, const Vec& x, std::size_t max_steps);

/// Zooms into `window` around `start` keeping the sample with the longest
/// escape time; returns a point that survives at least `target` iterates
/// when one is found.
Vec deep_point(const MapSpec& spec, const Vec& start, double window, std::size_t target = 80);

struct SensitivityProbe {
  Vec p;
  Vec q;
  double initial = 0.0;
  std::optional<std::size_t> separated_at;
  double separation = 0.0;
};

/// Iterates p and q for at most max_steps and reports the first step at
/// which their distance reaches threshold.
SensitivityProbe sensitivity_probe(const MapSpec& spec, const Vec& p, const Vec& q, std::size_t max_steps,
                                   double threshold);

/// Deterministic binary serialization: header, then per level a run-length
/// coded survivor bitmap and the run-length coded last label digit of each survivor.
void write_tree(std::ostream& out, const DassTree& tree);
DassTree read_tree(std::istream& in);
void save_tree(const std::string& path, const DassTree& tree);
DassTree load_tree(const std::string& path);

}  // namespace simchaos

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "simchaos/address.hpp"
#include "simchaos/exact.hpp"

namespace simchaos {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct ExactPoint {
  ExactRational x;
  ExactRational y;
};

/// Point a*e1 + b*e2 of the triangular lattice, e1 = (1, 0) and
/// e2 = (1/2, sqrt(3)/2), scaled by 1/denominator of the owning region.
struct LatticePoint {
  std::int64_t a = 0;
  std::int64_t b = 0;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct Interval {
  ExactRational lo;
  ExactRational hi;
};

struct AxisRectangle {
  ExactRational x_lo;
  ExactRational x_hi;
  ExactRational y_lo;
  ExactRational y_hi;
};

struct OrientedTriangle {
  std::array<LatticePoint, 3> vertices;
  std::int64_t denominator = 1;
  bool up = true;
};

/// Koch sub-curve carrier: consecutive chain vertices span Koch pieces that
/// bulge to the left of their direction; each piece lies in the isosceles
/// triangle with 30-degree base angles over its chord.
struct PolylineHull {
  std::vector<LatticePoint> chain;
  std::int64_t denominator = 1;
};

/// Raster cells (i, j) of side h anchored at origin.
struct CellSet {
  std::vector<std::array<std::int64_t, 2>> cells;
  double h = 1.0;
  Point origin;
};

/// Cylinder of the binary string space: all strings starting with prefix.
struct Cylinder {
  Word prefix;
};

using Region = std::variant<Interval, AxisRectangle, OrientedTriangle, PolylineHull, CellSet, Cylinder>;

/// Certified bracket [lower, upper] for the infimum distance of two sets.
struct DistanceBracket {
  double lower = 0.0;
  double upper = 0.0;
  /// Present when the distance is known exactly.
  std::optional<ExactLength> exact;
  std::string method;

  bool touching() const { return upper == 0.0; }
  double width() const { return upper - lower; }
};

Point to_point(const LatticePoint& p, std::int64_t denominator);
ExactRational lattice_norm2(std::int64_t a, std::int64_t b);  // |a e1 + b e2|^2 = a^2 + ab + b^2

/// Representative point used by the point codec.
Point region_center(const Region& region);
/// Axis bounding box as {x_lo, x_hi, y_lo, y_hi}.
std::array<double, 4> bounding_box(const Region& region);
/// Exact diameter where the carrier permits it (everything but CellSet).
std::optional<ExactLength> region_diameter(const Region& region);
/// Closed containment of `inner` in `outer` (same variant required).
bool region_contains(const Region& outer, const Region& inner);
std::string describe(const Region& region);

/// Isosceles 30-degree hull apex over a Koch chord, on the lattice scaled by 3.
LatticePoint koch_hull_apex(const LatticePoint& start, const LatticePoint& end);
/// The four child chords of a Koch chord; coordinates are rescaled by 3.
std::array<LatticePoint, 5> koch_children(const LatticePoint& start, const LatticePoint& end);

/// Infimum distance bracket. Intervals, rectangles, lattice triangles and
/// cylinders are exact; Koch hulls are refined `refine` levels by branch and
/// bound; cell sets use cell gaps (lower) and center distances (upper).
DistanceBracket set_distance(const Region& a, const Region& b, int refine = 0);

}  // namespace simchaos

#pragma once

#include <string>
#include <vector>

#include "simchaos/space.hpp"

namespace simchaos {

/// Binary string space with d(s, t) = sum |s_k - t_k| / 2^(k-1).
SpaceDescriptor make_sigma();
/// Middle-third Cantor set on [0, 1].
SpaceDescriptor make_cantor();
/// Sierpinski carpet on the unit square, eight children per level.
SpaceDescriptor make_carpet();
/// Sierpinski gasket on the unit equilateral triangle.
SpaceDescriptor make_gasket();
/// Koch curve over the segment (0, 0)-(1, 0).
SpaceDescriptor make_koch();

/// Looks a space up by name ("sigma", "cantor", "carpet", "gasket", "koch").
SpaceDescriptor space_by_name(const std::string& name);
std::vector<std::string> space_names();

/// One coordinate of the invariant modified tent map of the carpet.
double carpet_tent_1d(double x);
/// Coordinatewise tent map on the unit square; throws OutsideRoot off it.
Point carpet_tent(const Point& p);

/// Centers of F_{shift^j(prefix)} for j = 0..steps.
std::vector<Point> center_orbit(const SpaceDescriptor& space, const Word& prefix, int steps);

/// Carpet index whose center orbit is the classic trajectory figure
/// (1-based digits as printed).
inline constexpr const char* kCarpetOrbitIndex =
    "27731137313277182431515822461784764852656358462545627125423317216244";

}  // namespace simchaos

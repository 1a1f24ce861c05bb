#include "simchaos/fractals.hpp"

#include <cmath>

#include "simchaos/errors.hpp"

namespace simchaos {

namespace {

ExactRational third() { return ExactRational(BigInt(1), BigInt(3)); }

}  // namespace

SpaceDescriptor make_sigma() {
  SpaceDescriptor s;
  s.name = "sigma";
  s.kind = SpaceKind::Sigma;
  s.branching = 2;
  s.metric = MetricKind::Sigma;
  s.display_offset = 0;
  s.separation_degree = 1;
  s.separation_constant = ExactLength::from_rational(1);
  s.boundary_agreement = "none";
  s.root_diameter = ExactLength::from_rational(2);
  s.ratio = ExactRational(BigInt(1), BigInt(2));
  return s;
}

SpaceDescriptor make_cantor() {
  SpaceDescriptor s;
  s.name = "cantor";
  s.kind = SpaceKind::Cantor;
  s.branching = 2;
  s.metric = MetricKind::Euclidean1D;
  s.display_offset = 1;
  s.separation_degree = 1;
  s.separation_constant = ExactLength::from_rational(third());
  s.boundary_agreement = "none";
  s.root_diameter = ExactLength::from_rational(1);
  s.ratio = third();
  return s;
}

SpaceDescriptor make_carpet() {
  SpaceDescriptor s;
  s.name = "carpet";
  s.kind = SpaceKind::Carpet;
  s.branching = 8;
  s.metric = MetricKind::Euclidean2D;
  s.display_offset = 1;
  s.separation_degree = 1;
  s.separation_constant = ExactLength::from_rational(third());
  s.boundary_agreement = "left-then-lower";
  s.root_diameter = ExactLength::sqrt_of(2);
  s.ratio = third();
  return s;
}

SpaceDescriptor make_gasket() {
  SpaceDescriptor s;
  s.name = "gasket";
  s.kind = SpaceKind::Gasket;
  s.branching = 3;
  s.metric = MetricKind::Euclidean2D;
  s.display_offset = 1;
  s.separation_degree = 2;
  s.separation_constant = ExactLength::sqrt_of(ExactRational(BigInt(3), BigInt(64)));
  s.boundary_agreement = "left-then-lower";
  s.root_diameter = ExactLength::from_rational(1);
  s.ratio = ExactRational(BigInt(1), BigInt(2));
  return s;
}

SpaceDescriptor make_koch() {
  SpaceDescriptor s;
  s.name = "koch";
  s.kind = SpaceKind::Koch;
  s.branching = 4;
  s.metric = MetricKind::Euclidean2D;
  s.display_offset = 1;
  s.separation_degree = 1;
  s.separation_constant = ExactLength::sqrt_of(ExactRational(BigInt(7), BigInt(81)));
  s.boundary_agreement = "right-endpoint";
  s.root_diameter = ExactLength::from_rational(1);
  s.ratio = third();
  return s;
}

std::vector<std::string> space_names() { return {"sigma", "cantor", "carpet", "gasket", "koch"}; }

SpaceDescriptor space_by_name(const std::string& name) {
  if (name == "sigma") return make_sigma();
  if (name == "cantor") return make_cantor();
  if (name == "carpet") return make_carpet();
  if (name == "gasket") return make_gasket();
  if (name == "koch") return make_koch();
  throw Error(ErrorKind::InvalidArgument, "unknown space '" + name + "'");
}

double carpet_tent_1d(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::OutsideRoot, "tent map input outside [0, 1]");
  if (x <= 1.0 / 3.0) return 3.0 * x;
  if (x <= 0.5) return 3.0 * x - 1.0;
  if (x < 2.0 / 3.0) return 2.0 - 3.0 * (1.0 - x);
  return 3.0 * (1.0 - x);
}

Point carpet_tent(const Point& p) { return {carpet_tent_1d(p.x), carpet_tent_1d(p.y)}; }

std::vector<Point> center_orbit(const SpaceDescriptor& space, const Word& prefix, int steps) {
  if (steps < 0 || static_cast<std::size_t>(steps) > prefix.size()) {
    throw Error(ErrorKind::InvalidArgument, "steps must lie in [0, prefix length]");
  }
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  for (int j = 0; j <= steps; ++j) {
    const Word rest(prefix.begin() + j, prefix.end());
    out.push_back(region_center(subset_region(space, rest)));
  }
  return out;
}

}  // namespace simchaos

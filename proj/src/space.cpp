#include "simchaos/space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "simchaos/errors.hpp"

namespace simchaos {

namespace {

constexpr double kSqrt3 = 1.73205080756887729353;

// (column, row) of carpet children in the 3x3 grid.
constexpr std::array<std::array<int, 2>, 8> kCarpetCells{
    {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {2, 1}, {0, 2}, {1, 2}, {2, 2}}};

// Lattice offset of gasket children, in units of the child side.
constexpr std::array<LatticePoint, 3> kGasketOffsets{{{0, 0}, {1, 0}, {0, 1}}};

int carpet_digit(int col, int row) {
  for (int d = 0; d < 8; ++d) {
    if (kCarpetCells[d][0] == col && kCarpetCells[d][1] == row) return d;
  }
  return -1;
}

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

void check_lattice_depth(const SpaceDescriptor& space, std::size_t depth) {
  const std::size_t limit = space.kind == SpaceKind::Gasket ? 40 : 25;
  if (depth > limit) {
    throw Error(ErrorKind::ResourceCap, space.name + " regions are limited to depth " + std::to_string(limit));
  }
}

OrientedTriangle gasket_triangle(const Word& prefix) {
  LatticePoint v0;
  std::int64_t den = 1;
  for (Digit d : prefix) {
    v0 = {v0.a * 2 + kGasketOffsets[d].a, v0.b * 2 + kGasketOffsets[d].b};
    den *= 2;
  }
  return {{v0, {v0.a + 1, v0.b}, {v0.a, v0.b + 1}}, den, true};
}

PolylineHull koch_hull(const Word& prefix) {
  LatticePoint s{0, 0};
  LatticePoint e{1, 0};
  std::int64_t den = 1;
  for (Digit d : prefix) {
    const auto ch = koch_children(s, e);
    s = ch[d];
    e = ch[d + 1];
    den *= 3;
  }
  return {{s, e}, den};
}

// Eisenstein product with e2 = exp(i pi / 3), e2^2 = e2 - 1.
LatticePoint lattice_mul(const LatticePoint& p, const LatticePoint& q) {
  return {p.a * q.a - p.b * q.b, p.a * q.b + p.b * q.a + p.b * q.b};
}

struct Tri {
  double x[3];
  double y[3];
};

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double sx = bx - ax, sy = by - ay;
  const double ux = px - ax, uy = py - ay;
  const double ss = sx * sx + sy * sy;
  const double t = ss > 0 ? std::clamp((ux * sx + uy * sy) / ss, 0.0, 1.0) : 0.0;
  return std::hypot(ux - t * sx, uy - t * sy);
}

double triangle_point_distance(const Tri& t, double px, double py) {
  double s[3];
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    s[i] = (t.x[j] - t.x[i]) * (py - t.y[i]) - (t.y[j] - t.y[i]) * (px - t.x[i]);
  }
  if ((s[0] >= 0 && s[1] >= 0 && s[2] >= 0) || (s[0] <= 0 && s[1] <= 0 && s[2] <= 0)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    best = std::min(best, segment_distance(px, py, t.x[i], t.y[i], t.x[j], t.y[j]));
  }
  return best;
}

Tri koch_hull_tri(const LatticePoint& s, const LatticePoint& e, std::int64_t den) {
  const Point a = to_point(s, den);
  const Point b = to_point(e, den);
  const Point c = to_point(koch_hull_apex(s, e), den * 3);
  return {{a.x, b.x, c.x}, {a.y, b.y, c.y}};
}

// Nearest-integer snap that keeps exact boundary points on the boundary.
double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-9 ? r : v;
}

Word gasket_address(const Point& p, int depth) {
  double u = p.x - p.y / kSqrt3;
  double v = 2.0 * p.y / kSqrt3;
  u = snap(u);
  v = snap(v);
  if (u < 0 || v < 0 || snap(u + v) > 1) {
    throw Error(ErrorKind::OutsideRoot, "point outside the unit triangle");
  }
  Word out;
  for (int level = 0; level < depth; ++level) {
    u = snap(2 * u);
    v = snap(2 * v);
    if (snap(u + v) <= 1) {
      out.push_back(0);
    } else if (v >= 1) {
      out.push_back(2);
      v -= 1;
    } else if (u >= 1) {
      out.push_back(1);
      u -= 1;
    } else {
      throw Error(ErrorKind::NotInSet, "point lies in a removed gasket hole");
    }
  }
  return out;
}

Word koch_address(const Point& p, int depth) {
  LatticePoint s{0, 0};
  LatticePoint e{1, 0};
  std::int64_t den = 1;
  if (triangle_point_distance(koch_hull_tri(s, e, den), p.x, p.y) > 1e-9) {
    throw Error(ErrorKind::OutsideRoot, "point outside the Koch hull");
  }
  Word out;
  for (int level = 0; level < depth; ++level) {
    const auto ch = koch_children(s, e);
    den *= 3;
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int d = 0; d < 4; ++d) {
      const double dist = triangle_point_distance(koch_hull_tri(ch[d], ch[d + 1], den), p.x, p.y);
      // Later children win ties: shared endpoints belong to the right piece.
      if (dist <= best_d + 1e-12) {
        best = d;
        best_d = std::min(best_d, dist);
      }
    }
    if (best_d > 1e-9) throw Error(ErrorKind::NotInSet, "point off the Koch curve");
    out.push_back(static_cast<Digit>(best));
    s = ch[best];
    e = ch[best + 1];
  }
  return out;
}

bool koch_contains(LatticePoint s, LatticePoint e, std::int64_t den, const Point& p, int depth) {
  if (triangle_point_distance(koch_hull_tri(s, e, den), p.x, p.y) > 1e-12) return false;
  if (depth == 0) return true;
  const auto ch = koch_children(s, e);
  for (int d = 0; d < 4; ++d) {
    if (koch_contains(ch[d], ch[d + 1], den * 3, p, depth - 1)) return true;
  }
  return false;
}

}  // namespace

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Sigma: return "sigma";
    case SpaceKind::Cantor: return "cantor";
    case SpaceKind::Carpet: return "carpet";
    case SpaceKind::Gasket: return "gasket";
    case SpaceKind::Koch: return "koch";
  }
  return "?";
}

const char* to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Sigma: return "sigma-metric";
    case MetricKind::Euclidean1D: return "euclidean-1d";
    case MetricKind::Euclidean2D: return "euclidean-2d";
  }
  return "?";
}

ExactLength SpaceDescriptor::diameter_law(int depth) const {
  if (depth < 0) throw Error(ErrorKind::InvalidArgument, "depth must be nonnegative");
  ExactRational factor = 1;
  for (int i = 0; i < depth; ++i) factor *= ratio;
  return root_diameter.scaled(factor);
}

int SpaceDescriptor::depth_for(double tol) const {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  for (int k = 0; k < 4096; ++k) {
    if (diameter_law(k).less_than(tol)) return k;
  }
  throw Error(ErrorKind::ResourceCap, "tolerance too small");
}

std::vector<Word> all_words(int base, int length, std::size_t cap) {
  std::size_t total = 1;
  for (int i = 0; i < length; ++i) {
    if (total > cap / static_cast<std::size_t>(base)) {
      throw Error(ErrorKind::ResourceCap, std::to_string(base) + "^" + std::to_string(length) +
                                              " words exceed the cap of " + std::to_string(cap));
    }
    total *= static_cast<std::size_t>(base);
  }
  std::vector<Word> out;
  out.reserve(total);
  Word w(static_cast<std::size_t>(length), 0);
  for (std::size_t n = 0; n < total; ++n) {
    out.push_back(w);
    for (int i = length - 1; i >= 0; --i) {
      if (++w[i] < base) break;
      w[i] = 0;
    }
  }
  return out;
}

Region subset_region(const SpaceDescriptor& space, const Word& prefix) {
  validate_word(prefix, space.branching);
  const int n = static_cast<int>(prefix.size());
  switch (space.kind) {
    case SpaceKind::Sigma:
      return Cylinder{prefix};
    case SpaceKind::Cantor: {
      BigInt num = 0;
      for (Digit d : prefix) num = num * 3 + 2 * d;
      const ExactRational lo = ExactRational(num, 1) * ExactRational::power(3, -n);
      return Interval{lo, lo + ExactRational::power(3, -n)};
    }
    case SpaceKind::Carpet: {
      BigInt cx = 0, cy = 0;
      for (Digit d : prefix) {
        cx = cx * 3 + kCarpetCells[d][0];
        cy = cy * 3 + kCarpetCells[d][1];
      }
      const ExactRational side = ExactRational::power(3, -n);
      const ExactRational x = ExactRational(cx, 1) * side;
      const ExactRational y = ExactRational(cy, 1) * side;
      return AxisRectangle{x, x + side, y, y + side};
    }
    case SpaceKind::Gasket:
      check_lattice_depth(space, prefix.size());
      return gasket_triangle(prefix);
    case SpaceKind::Koch:
      check_lattice_depth(space, prefix.size());
      return koch_hull(prefix);
  }
  throw Error(ErrorKind::UnsupportedSpace, "unknown space kind");
}

Point point_of(const SpaceDescriptor& space, const Address& a, double tol) {
  if (space.kind == SpaceKind::Sigma) {
    throw Error(ErrorKind::UnsupportedSpace, "the string space has no planar embedding");
  }
  if (a.base() != space.branching) {
    throw Error(ErrorKind::UnsupportedBase, "address base differs from the space branching");
  }
  const int k = space.depth_for(tol);
  return region_center(subset_region(space, a.first(static_cast<std::size_t>(k))));
}

Word address_of(const SpaceDescriptor& space, const ExactPoint& p, int depth) {
  if (depth < 0) throw Error(ErrorKind::InvalidArgument, "depth must be nonnegative");
  switch (space.kind) {
    case SpaceKind::Sigma:
      throw Error(ErrorKind::UnsupportedSpace, "the string space has no planar embedding");
    case SpaceKind::Cantor: {
      ExactRational x = p.x;
      if (x < ExactRational(0) || x > ExactRational(1) || !p.y.is_zero()) {
        throw Error(ErrorKind::OutsideRoot, "point outside [0, 1]");
      }
      const ExactRational third(BigInt(1), BigInt(3));
      const ExactRational two_thirds(BigInt(2), BigInt(3));
      Word out;
      for (int level = 0; level < depth; ++level) {
        if (x <= third) {
          out.push_back(0);
          x = x * 3;
        } else if (x >= two_thirds) {
          out.push_back(1);
          x = x * 3 - 2;
        } else {
          throw Error(ErrorKind::NotInSet, "point lies in a removed middle third");
        }
      }
      return out;
    }
    case SpaceKind::Carpet: {
      ExactRational x = p.x;
      ExactRational y = p.y;
      const ExactRational zero(0), one(1);
      if (x < zero || x > one || y < zero || y > one) {
        throw Error(ErrorKind::OutsideRoot, "point outside the unit square");
      }
      // Closed cells containing a coordinate: floor(3t), and the cell to the
      // left/below when 3t is an interior grid line.
      auto candidates = [](const ExactRational& t) {
        const ExactRational s = t * 3;
        BigInt f = s.numerator() / s.denominator();
        std::vector<int> out;
        const int fi = static_cast<int>(f);
        if (s.denominator() == 1 && fi > 0) out.push_back(fi - 1);
        if (fi < 3) out.push_back(fi);
        return out;
      };
      Word out;
      for (int level = 0; level < depth; ++level) {
        int chosen = -1;
        int col = 0, row = 0;
        for (int c : candidates(x)) {
          for (int r : candidates(y)) {
            const int d = carpet_digit(c, r);
            if (d >= 0 && chosen < 0) {
              chosen = d;
              col = c;
              row = r;
            }
          }
        }
        if (chosen < 0) throw Error(ErrorKind::NotInSet, "point lies in a removed carpet square");
        out.push_back(static_cast<Digit>(chosen));
        x = x * 3 - col;
        y = y * 3 - row;
      }
      return out;
    }
    case SpaceKind::Gasket:
      return gasket_address({p.x.to_double(), p.y.to_double()}, depth);
    case SpaceKind::Koch:
      return koch_address({p.x.to_double(), p.y.to_double()}, depth);
  }
  throw Error(ErrorKind::UnsupportedSpace, "unknown space kind");
}

Word address_of(const SpaceDescriptor& space, const Point& p, int depth) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw Error(ErrorKind::OutsideRoot, "non-finite point");
  }
  if (space.kind == SpaceKind::Gasket) return gasket_address(p, depth);
  if (space.kind == SpaceKind::Koch) return koch_address(p, depth);
  return address_of(space, ExactPoint{ExactRational::from_double(p.x), ExactRational::from_double(p.y)}, depth);
}

DiameterReport check_diameter_condition(const SpaceDescriptor& space, int max_depth, std::size_t cap) {
  if (max_depth < 1) throw Error(ErrorKind::InvalidArgument, "max depth must be at least 1");
  DiameterReport report;
  std::mt19937_64 rng(0x5eed0fd1a3ULL);
  for (int n = 1; n <= max_depth; ++n) {
    DiameterLevel level;
    level.depth = n;
    level.law = space.diameter_law(n);
    std::vector<Word> words;
    try {
      words = all_words(space.branching, n, cap);
    } catch (const Error&) {
      level.exhaustive = false;
      words.resize(cap);
      for (auto& w : words) {
        w.resize(static_cast<std::size_t>(n));
        for (auto& d : w) d = static_cast<Digit>(rng() % static_cast<std::uint64_t>(space.branching));
      }
    }
    for (const auto& w : words) {
      const auto diam = region_diameter(subset_region(space, w));
      if (diam && (!level.measured || *level.measured < *diam)) level.measured = diam;
    }
    level.regions_checked = words.size();
    if (!level.measured || *level.measured != level.law) report.matches_law = false;
    if (!report.levels.empty()) {
      const auto& prev = report.levels.back();
      if (!(level.law < prev.law)) report.strictly_decreasing = false;
      if (level.measured && prev.measured && !(*level.measured < *prev.measured)) {
        report.strictly_decreasing = false;
      }
    } else if (!(level.law < space.root_diameter)) {
      report.strictly_decreasing = false;
    }
    report.levels.push_back(std::move(level));
  }
  return report;
}

bool SeparationTable::pass() const {
  if (!(epsilon_lower > 0)) return false;
  return std::all_of(best_partner.begin(), best_partner.end(),
                     [&](const SeparationEntry& e) { return e.distance.lower >= epsilon_lower; });
}

std::size_t SeparationTable::index_of(const Word& prefix) const {
  const auto it = std::find(prefixes.begin(), prefixes.end(), prefix);
  if (it == prefixes.end()) {
    throw Error(ErrorKind::InvalidArgument, "prefix " + format_word(prefix) + " not in the separation table");
  }
  return static_cast<std::size_t>(it - prefixes.begin());
}

const DistanceBracket& SeparationTable::between(const Word& a, const Word& b) const {
  return distances[index_of(a)][index_of(b)];
}

SeparationTable check_separation(const SpaceDescriptor& space, int degree, int refine, std::size_t cap) {
  if (degree < 1) throw Error(ErrorKind::InvalidArgument, "separation degree must be at least 1");
  SeparationTable table;
  table.degree = degree;
  table.refine = refine < 0 ? space.refine : refine;
  table.prefixes = all_words(space.branching, degree, cap);
  const std::size_t count = table.prefixes.size();
  std::vector<Region> regions;
  regions.reserve(count);
  for (const auto& w : table.prefixes) regions.push_back(subset_region(space, w));

  DistanceBracket self;
  self.exact = ExactLength{};
  self.method = "identical";
  table.distances.assign(count, std::vector<DistanceBracket>(count, self));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      table.distances[i][j] = set_distance(regions[i], regions[j], table.refine);
      table.distances[j][i] = table.distances[i][j];
    }
  }

  bool found = false;
  bool all_exact = true;
  std::optional<ExactLength> exact_min;
  for (std::size_t i = 0; i < count; ++i) {
    SeparationEntry best{table.prefixes[i], table.prefixes[i], table.distances[i][i]};
    for (std::size_t j = 0; j < count; ++j) {
      const auto& d = table.distances[i][j];
      if (d.lower > best.distance.lower) best = {table.prefixes[i], table.prefixes[j], d};
      if (j <= i || d.touching()) continue;
      if (!found || d.lower < table.epsilon_lower) {
        table.epsilon_lower = d.lower;
        table.closest_i = i;
        table.closest_j = j;
      }
      table.epsilon_upper = found ? std::min(table.epsilon_upper, d.upper) : d.upper;
      found = true;
      if (!d.exact) {
        all_exact = false;
      } else if (!exact_min || *d.exact < *exact_min) {
        exact_min = d.exact;
      }
    }
    table.best_partner.push_back(std::move(best));
  }
  if (all_exact && exact_min) table.epsilon_exact = exact_min;
  return table;
}

SimilarityCertificate verify_similarity_identity(const SpaceDescriptor& space, const Word& prefix, int k,
                                                 std::size_t cap) {
  validate_word(prefix, space.branching);
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "cover depth must be nonnegative");
  SimilarityCertificate cert;
  const auto words = all_words(space.branching, k, cap);
  std::vector<Word> images;
  images.reserve(words.size());
  for (const auto& w : words) {
    Word full = prefix;
    full.insert(full.end(), w.begin(), w.end());
    const Address a = Address::constant(space.branching, full, 0);
    const Word image = shift(a, prefix.size()).first(static_cast<std::size_t>(k));
    cert.bijection.emplace_back(full, image);
    images.push_back(image);
  }
  std::sort(images.begin(), images.end());
  const bool injective = std::adjacent_find(images.begin(), images.end()) == images.end();
  cert.holds = injective && images == words;

  // The similarity of F onto F_prefix must carry F_w onto F_{prefix w}.
  const std::size_t n = prefix.size();
  const Region parent = subset_region(space, prefix);
  bool geometric = true;
  for (const auto& w : words) {
    Word full = prefix;
    full.insert(full.end(), w.begin(), w.end());
    const Region child = subset_region(space, full);
    const Region unit = subset_region(space, w);
    switch (space.kind) {
      case SpaceKind::Sigma:
        geometric = geometric && std::get<Cylinder>(child).prefix == full;
        break;
      case SpaceKind::Cantor: {
        const auto& p = std::get<Interval>(parent);
        const auto& c = std::get<Interval>(child);
        const auto& u = std::get<Interval>(unit);
        const ExactRational s = p.hi - p.lo;
        geometric = geometric && c.lo == p.lo + s * u.lo && c.hi == p.lo + s * u.hi;
        break;
      }
      case SpaceKind::Carpet: {
        const auto& p = std::get<AxisRectangle>(parent);
        const auto& c = std::get<AxisRectangle>(child);
        const auto& u = std::get<AxisRectangle>(unit);
        const ExactRational s = p.x_hi - p.x_lo;
        geometric = geometric && c.x_lo == p.x_lo + s * u.x_lo && c.x_hi == p.x_lo + s * u.x_hi &&
                    c.y_lo == p.y_lo + s * u.y_lo && c.y_hi == p.y_lo + s * u.y_hi;
        break;
      }
      case SpaceKind::Gasket: {
        const auto& p = std::get<OrientedTriangle>(parent);
        const auto& c = std::get<OrientedTriangle>(child);
        const auto& u = std::get<OrientedTriangle>(unit);
        const std::int64_t up = ipow(2, k);
        for (int i = 0; i < 3; ++i) {
          const LatticePoint mapped{p.vertices[0].a * up + u.vertices[i].a, p.vertices[0].b * up + u.vertices[i].b};
          geometric = geometric && mapped == c.vertices[i] && c.denominator == p.denominator * u.denominator;
        }
        break;
      }
      case SpaceKind::Koch: {
        const auto& p = std::get<PolylineHull>(parent);
        const auto& c = std::get<PolylineHull>(child);
        const auto& u = std::get<PolylineHull>(unit);
        const std::int64_t up = ipow(3, k);
        const LatticePoint s = p.chain.front();
        const LatticePoint chord{p.chain.back().a - s.a, p.chain.back().b - s.b};
        for (const auto& [from, to] : {std::pair{u.chain.front(), c.chain.front()}, std::pair{u.chain.back(), c.chain.back()}}) {
          const LatticePoint z = lattice_mul(chord, from);
          const LatticePoint mapped{s.a * up + z.a, s.b * up + z.b};
          geometric = geometric && mapped == to;
        }
        break;
      }
    }
  }
  (void)n;
  cert.geometric = geometric;
  return cert;
}

bool contains_at_depth(const SpaceDescriptor& space, const Point& p, int depth) {
  switch (space.kind) {
    case SpaceKind::Sigma:
      throw Error(ErrorKind::UnsupportedSpace, "the string space has no planar embedding");
    case SpaceKind::Cantor: {
      double x = p.x;
      if (x < 0 || x > 1) return false;
      for (int i = 0; i < depth; ++i) {
        x *= 3;
        if (x <= 1) continue;
        if (x >= 2) {
          x -= 2;
          continue;
        }
        return false;
      }
      return true;
    }
    case SpaceKind::Carpet: {
      double x = p.x, y = p.y;
      if (x < 0 || x > 1 || y < 0 || y > 1) return false;
      for (int i = 0; i < depth; ++i) {
        x *= 3;
        y *= 3;
        const int c = std::min(2, static_cast<int>(x));
        const int r = std::min(2, static_cast<int>(y));
        if (c == 1 && r == 1 && x > 1 && x < 2 && y > 1 && y < 2) return false;
        x -= c;
        y -= r;
      }
      return true;
    }
    case SpaceKind::Gasket: {
      double u = p.x - p.y / kSqrt3;
      double v = 2.0 * p.y / kSqrt3;
      if (u < 0 || v < 0 || u + v > 1) return false;
      for (int i = 0; i < depth; ++i) {
        u *= 2;
        v *= 2;
        if (u + v <= 1) continue;
        if (v >= 1) {
          v -= 1;
        } else if (u >= 1) {
          u -= 1;
        } else {
          return false;
        }
      }
      return true;
    }
    case SpaceKind::Koch:
      return koch_contains({0, 0}, {1, 0}, 1, p, depth);
  }
  return false;
}

}  // namespace simchaos

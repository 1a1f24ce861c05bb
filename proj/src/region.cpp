#include "simchaos/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "simchaos/errors.hpp"

namespace simchaos {

namespace {

constexpr double kHalfSqrt3 = 0.86602540378443864676;

using i128 = __int128;

LatticePoint operator-(const LatticePoint& p, const LatticePoint& q) { return {p.a - q.a, p.b - q.b}; }
LatticePoint operator+(const LatticePoint& p, const LatticePoint& q) { return {p.a + q.a, p.b + q.b}; }
LatticePoint scale(const LatticePoint& p, std::int64_t k) { return {p.a * k, p.b * k}; }
LatticePoint rot60(const LatticePoint& p) { return {-p.b, p.a + p.b}; }

i128 norm2(const LatticePoint& u) {
  return i128(u.a) * u.a + i128(u.a) * u.b + i128(u.b) * u.b;
}
// Twice the Euclidean dot product.
i128 dot2(const LatticePoint& u, const LatticePoint& v) {
  return 2 * i128(u.a) * v.a + i128(u.a) * v.b + i128(u.b) * v.a + 2 * i128(u.b) * v.b;
}
// Euclidean cross product is (sqrt(3)/2) * det.
i128 det(const LatticePoint& u, const LatticePoint& v) { return i128(u.a) * v.b - i128(u.b) * v.a; }

int orient(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) {
  const i128 d = det(b - a, c - a);
  return d > 0 ? 1 : (d < 0 ? -1 : 0);
}

BigInt big(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  BigInt out = static_cast<std::uint64_t>(u >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(u);
  return neg ? BigInt(-out) : out;
}

bool on_segment(const LatticePoint& a, const LatticePoint& b, const LatticePoint& p) {
  return std::min(a.a, b.a) <= p.a && p.a <= std::max(a.a, b.a) && std::min(a.b, b.b) <= p.b &&
         p.b <= std::max(a.b, b.b);
}

bool segments_intersect(const LatticePoint& p1, const LatticePoint& p2, const LatticePoint& q1,
                        const LatticePoint& q2) {
  const int d1 = orient(q1, q2, p1);
  const int d2 = orient(q1, q2, p2);
  const int d3 = orient(p1, p2, q1);
  const int d4 = orient(p1, p2, q2);
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

bool in_triangle(const std::array<LatticePoint, 3>& t, const LatticePoint& p) {
  const int s0 = orient(t[0], t[1], p);
  const int s1 = orient(t[1], t[2], p);
  const int s2 = orient(t[2], t[0], p);
  const bool has_neg = s0 < 0 || s1 < 0 || s2 < 0;
  const bool has_pos = s0 > 0 || s1 > 0 || s2 > 0;
  return !(has_neg && has_pos);
}

bool triangles_intersect(const std::array<LatticePoint, 3>& s, const std::array<LatticePoint, 3>& t) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (segments_intersect(s[i], s[(i + 1) % 3], t[j], t[(j + 1) % 3])) return true;
    }
  }
  return in_triangle(s, t[0]) || in_triangle(t, s[0]);
}

// Squared point-to-segment distance in lattice units (caller divides by D^2).
ExactRational point_segment_norm2(const LatticePoint& p, const LatticePoint& a, const LatticePoint& b) {
  const LatticePoint u = p - a;
  const LatticePoint s = b - a;
  const i128 d = dot2(u, s);
  const i128 ns = norm2(s);
  if (d <= 0 || ns == 0) return ExactRational(big(norm2(u)), 1);
  if (d >= 2 * ns) return ExactRational(big(norm2(p - b)), 1);
  const BigInt cross = big(det(s, u));
  return ExactRational(BigInt(3) * cross * cross, BigInt(4) * big(ns));
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  const std::int64_t g = std::gcd(a, b);
  const i128 l = i128(a / g) * b;
  if (l > std::numeric_limits<std::int64_t>::max() / 64) {
    throw Error(ErrorKind::ResourceCap, "lattice denominators too large to combine");
  }
  return static_cast<std::int64_t>(l);
}

template <typename Points>
void rescale(Points& pts, std::int64_t from, std::int64_t to) {
  const std::int64_t k = to / from;
  for (auto& p : pts) p = scale(p, k);
}

// ---------------------------------------------------------------------------
// Floating triangle geometry for the Koch branch and bound.

struct Vec {
  double x, y;
};
Vec operator-(Vec p, Vec q) { return {p.x - q.x, p.y - q.y}; }
double cross(Vec u, Vec v) { return u.x * v.y - u.y * v.x; }
double dotf(Vec u, Vec v) { return u.x * v.x + u.y * v.y; }

double point_segment_distance(Vec p, Vec a, Vec b) {
  const Vec s = b - a;
  const Vec u = p - a;
  const double ss = dotf(s, s);
  double t = ss > 0 ? dotf(u, s) / ss : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = u.x - t * s.x;
  const double dy = u.y - t * s.y;
  return std::sqrt(dx * dx + dy * dy);
}

bool segments_cross_f(Vec p1, Vec p2, Vec q1, Vec q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool inside_f(const std::array<Vec, 3>& t, Vec p) {
  const double s0 = cross(t[1] - t[0], p - t[0]);
  const double s1 = cross(t[2] - t[1], p - t[1]);
  const double s2 = cross(t[0] - t[2], p - t[2]);
  return (s0 >= 0 && s1 >= 0 && s2 >= 0) || (s0 <= 0 && s1 <= 0 && s2 <= 0);
}

double triangle_distance_f(const std::array<Vec, 3>& s, const std::array<Vec, 3>& t) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (segments_cross_f(s[i], s[(i + 1) % 3], t[j], t[(j + 1) % 3])) return 0.0;
    }
  }
  if (inside_f(s, t[0]) || inside_f(t, s[0])) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      best = std::min(best, point_segment_distance(s[i], t[j], t[(j + 1) % 3]));
      best = std::min(best, point_segment_distance(t[i], s[j], s[(j + 1) % 3]));
    }
  }
  return best;
}

Vec to_vec(const LatticePoint& p, double inv_den) {
  return {(double(p.a) + 0.5 * double(p.b)) * inv_den, kHalfSqrt3 * double(p.b) * inv_den};
}

struct KochPiece {
  LatticePoint start;
  LatticePoint end;
  int level;
};

struct PiecePair {
  double lower;
  KochPiece a;
  KochPiece b;
  bool operator>(const PiecePair& other) const { return lower > other.lower; }
};

// Pieces live on a lattice whose denominator absorbs every level up to the
// deepest hull apex, so child coordinates stay integral.
DistanceBracket koch_distance(const PolylineHull& ha, const PolylineHull& hb, int refine) {
  if (ha.chain.size() < 2 || hb.chain.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "Koch hull needs at least two chain vertices");
  }
  if (refine < 0) throw Error(ErrorKind::InvalidArgument, "refine must be nonnegative");
  std::int64_t den = checked_lcm(ha.denominator, hb.denominator);
  std::int64_t unit = 1;
  for (int i = 0; i <= refine; ++i) {
    if (den > std::numeric_limits<std::int64_t>::max() / 3 / (1 << 12)) {
      throw Error(ErrorKind::ResourceCap, "Koch refinement exceeds lattice range");
    }
    den *= 3;
    unit *= 3;
  }
  auto lift = [&](const PolylineHull& h) {
    std::vector<KochPiece> pieces;
    const std::int64_t k = den / h.denominator;
    for (std::size_t i = 0; i + 1 < h.chain.size(); ++i) {
      pieces.push_back({scale(h.chain[i], k), scale(h.chain[i + 1], k), 0});
    }
    return pieces;
  };
  const auto pieces_a = lift(ha);
  const auto pieces_b = lift(hb);
  const double inv = 1.0 / double(den);

  i128 best_norm2 = -1;
  auto consider = [&](const LatticePoint& p, const LatticePoint& q) {
    const i128 n = norm2(p - q);
    if (best_norm2 < 0 || n < best_norm2) best_norm2 = n;
  };
  auto upper_value = [&] { return std::sqrt(double(best_norm2)) * inv; };
  auto hull = [&](const KochPiece& piece) {
    const LatticePoint s = piece.end - piece.start;
    const LatticePoint apex = piece.start + LatticePoint{(s.a - s.b) / 3, (s.a + 2 * s.b) / 3};
    return std::array<Vec, 3>{to_vec(piece.start, inv), to_vec(piece.end, inv), to_vec(apex, inv)};
  };
  auto lower_of = [&](const KochPiece& x, const KochPiece& y) {
    const double d = triangle_distance_f(hull(x), hull(y));
    return std::max(0.0, d - 1e-12);
  };
  auto children = [&](const KochPiece& piece) {
    const LatticePoint s = piece.end - piece.start;
    const LatticePoint third{s.a / 3, s.b / 3};
    const LatticePoint p1 = piece.start + third;
    const LatticePoint p2 = p1 + rot60(third);
    const LatticePoint p3 = piece.start + scale(third, 2);
    const int lv = piece.level + 1;
    return std::array<KochPiece, 4>{KochPiece{piece.start, p1, lv}, KochPiece{p1, p2, lv},
                                    KochPiece{p2, p3, lv}, KochPiece{p3, piece.end, lv}};
  };

  std::priority_queue<PiecePair, std::vector<PiecePair>, std::greater<>> queue;
  for (const auto& x : pieces_a) {
    for (const auto& y : pieces_b) {
      consider(x.start, y.start);
      consider(x.start, y.end);
      consider(x.end, y.start);
      consider(x.end, y.end);
    }
  }
  for (const auto& x : pieces_a) {
    for (const auto& y : pieces_b) {
      const double lb = lower_of(x, y);
      if (lb < upper_value()) queue.push({lb, x, y});
    }
  }

  double lower = upper_value();
  while (!queue.empty()) {
    const PiecePair top = queue.top();
    queue.pop();
    const double ub = upper_value();
    if (top.lower >= ub) {
      lower = ub;
      break;
    }
    const bool leaf_a = top.a.level >= refine;
    const bool leaf_b = top.b.level >= refine;
    if (leaf_a && leaf_b) {
      lower = top.lower;
      break;
    }
    std::vector<KochPiece> split_a{top.a};
    std::vector<KochPiece> split_b{top.b};
    if (!leaf_a && (leaf_b || top.a.level <= top.b.level)) {
      const auto c = children(top.a);
      split_a.assign(c.begin(), c.end());
    }
    if (!leaf_b && (leaf_a || top.b.level <= top.a.level)) {
      const auto c = children(top.b);
      split_b.assign(c.begin(), c.end());
    }
    for (const auto& x : split_a) {
      for (const auto& y : split_b) {
        consider(x.start, y.start);
        consider(x.start, y.end);
        consider(x.end, y.start);
        consider(x.end, y.end);
      }
    }
    for (const auto& x : split_a) {
      for (const auto& y : split_b) {
        const double lb = lower_of(x, y);
        if (lb < upper_value()) queue.push({lb, x, y});
      }
    }
  }

  DistanceBracket out;
  const ExactLength upper_exact =
      ExactLength::sqrt_of(ExactRational(big(best_norm2), BigInt(den) * BigInt(den)));
  out.upper = upper_exact.to_double();
  out.lower = std::min(lower, out.upper);
  if (best_norm2 == 0) {
    out.lower = 0.0;
    out.upper = 0.0;
    out.exact = ExactLength{};
  }
  out.method = "koch-hull-refinement(depth " + std::to_string(refine) + ")";
  (void)unit;
  return out;
}

DistanceBracket exact_bracket(const ExactLength& value, std::string method) {
  DistanceBracket out;
  out.exact = value;
  out.method = std::move(method);
  if (value.is_zero()) return out;
  const double d = value.to_double();
  out.lower = std::nextafter(d, 0.0);
  out.upper = std::nextafter(d, std::numeric_limits<double>::infinity());
  return out;
}

DistanceBracket triangle_distance(const OrientedTriangle& s, const OrientedTriangle& t) {
  const std::int64_t den = checked_lcm(s.denominator, t.denominator);
  auto sv = s.vertices;
  auto tv = t.vertices;
  rescale(sv, s.denominator, den);
  rescale(tv, t.denominator, den);
  if (triangles_intersect(sv, tv)) return exact_bracket(ExactLength{}, "exact-lattice-triangle");
  std::optional<ExactRational> best;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (const auto& candidate : {point_segment_norm2(sv[i], tv[j], tv[(j + 1) % 3]),
                                    point_segment_norm2(tv[i], sv[j], sv[(j + 1) % 3])}) {
        if (!best || candidate < *best) best = candidate;
      }
    }
  }
  const ExactRational d2 = *best / ExactRational(BigInt(den) * BigInt(den), 1);
  return exact_bracket(ExactLength::sqrt_of(d2), "exact-lattice-triangle");
}

DistanceBracket cell_distance(const CellSet& a, const CellSet& b) {
  if (a.cells.empty() || b.cells.empty()) {
    throw Error(ErrorKind::InvalidArgument, "cell sets must be nonempty");
  }
  if (a.h != b.h || a.origin.x != b.origin.x || a.origin.y != b.origin.y) {
    throw Error(ErrorKind::InvalidArgument, "cell sets must share one grid");
  }
  double best_gap2 = std::numeric_limits<double>::infinity();
  double best_center2 = std::numeric_limits<double>::infinity();
  for (const auto& p : a.cells) {
    for (const auto& q : b.cells) {
      const double dx = double(std::llabs(p[0] - q[0]));
      const double dy = double(std::llabs(p[1] - q[1]));
      const double gx = std::max(0.0, dx - 1.0);
      const double gy = std::max(0.0, dy - 1.0);
      best_gap2 = std::min(best_gap2, gx * gx + gy * gy);
      best_center2 = std::min(best_center2, dx * dx + dy * dy);
    }
  }
  DistanceBracket out;
  out.lower = std::sqrt(best_gap2) * a.h;
  out.upper = std::sqrt(best_center2) * a.h;
  out.method = "cell-gap";
  return out;
}

}  // namespace

ExactRational lattice_norm2(std::int64_t a, std::int64_t b) {
  return ExactRational(big(norm2(LatticePoint{a, b})), 1);
}

Point to_point(const LatticePoint& p, std::int64_t denominator) {
  const Vec v = to_vec(p, 1.0 / double(denominator));
  return {v.x, v.y};
}

LatticePoint koch_hull_apex(const LatticePoint& start, const LatticePoint& end) {
  const LatticePoint s = end - start;
  // start*3 + (s + rot60(s)), i.e. the apex on the lattice scaled by 3.
  return scale(start, 3) + LatticePoint{s.a - s.b, s.a + 2 * s.b};
}

std::array<LatticePoint, 5> koch_children(const LatticePoint& start, const LatticePoint& end) {
  const LatticePoint p0 = scale(start, 3);
  const LatticePoint s = end - start;
  const LatticePoint p1 = p0 + s;
  const LatticePoint p2 = p1 + rot60(s);
  const LatticePoint p3 = p0 + scale(s, 2);
  return {p0, p1, p2, p3, scale(end, 3)};
}

Point region_center(const Region& region) {
  return std::visit(
      [](const auto& r) -> Point {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return {((r.lo + r.hi) / 2).to_double(), 0.0};
        } else if constexpr (std::is_same_v<T, AxisRectangle>) {
          return {((r.x_lo + r.x_hi) / 2).to_double(), ((r.y_lo + r.y_hi) / 2).to_double()};
        } else if constexpr (std::is_same_v<T, OrientedTriangle>) {
          // centroid = (v0 + v1 + v2) / 3
          const LatticePoint sum = r.vertices[0] + r.vertices[1] + r.vertices[2];
          return to_point(sum, r.denominator * 3);
        } else if constexpr (std::is_same_v<T, PolylineHull>) {
          return to_point(koch_hull_apex(r.chain.front(), r.chain.back()), r.denominator * 3);
        } else if constexpr (std::is_same_v<T, CellSet>) {
          if (r.cells.empty()) throw Error(ErrorKind::InvalidArgument, "empty cell set");
          double sx = 0, sy = 0;
          for (const auto& c : r.cells) {
            sx += double(c[0]) + 0.5;
            sy += double(c[1]) + 0.5;
          }
          const double n = double(r.cells.size());
          return {r.origin.x + r.h * sx / n, r.origin.y + r.h * sy / n};
        } else {
          throw Error(ErrorKind::UnsupportedSpace, "string-space cylinders have no geometric center");
        }
      },
      region);
}

std::array<double, 4> bounding_box(const Region& region) {
  return std::visit(
      [](const auto& r) -> std::array<double, 4> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return {r.lo.to_double(), r.hi.to_double(), 0.0, 0.0};
        } else if constexpr (std::is_same_v<T, AxisRectangle>) {
          return {r.x_lo.to_double(), r.x_hi.to_double(), r.y_lo.to_double(), r.y_hi.to_double()};
        } else if constexpr (std::is_same_v<T, OrientedTriangle> || std::is_same_v<T, PolylineHull>) {
          std::vector<Point> pts;
          if constexpr (std::is_same_v<T, OrientedTriangle>) {
            for (const auto& v : r.vertices) pts.push_back(to_point(v, r.denominator));
          } else {
            pts.push_back(to_point(r.chain.front(), r.denominator));
            pts.push_back(to_point(r.chain.back(), r.denominator));
            pts.push_back(to_point(koch_hull_apex(r.chain.front(), r.chain.back()), r.denominator * 3));
          }
          std::array<double, 4> box{pts[0].x, pts[0].x, pts[0].y, pts[0].y};
          for (const auto& p : pts) {
            box[0] = std::min(box[0], p.x);
            box[1] = std::max(box[1], p.x);
            box[2] = std::min(box[2], p.y);
            box[3] = std::max(box[3], p.y);
          }
          return box;
        } else if constexpr (std::is_same_v<T, CellSet>) {
          std::array<std::int64_t, 4> c{std::numeric_limits<std::int64_t>::max(), std::numeric_limits<std::int64_t>::min(),
                                        std::numeric_limits<std::int64_t>::max(), std::numeric_limits<std::int64_t>::min()};
          for (const auto& cell : r.cells) {
            c[0] = std::min(c[0], cell[0]);
            c[1] = std::max(c[1], cell[0] + 1);
            c[2] = std::min(c[2], cell[1]);
            c[3] = std::max(c[3], cell[1] + 1);
          }
          return {r.origin.x + r.h * double(c[0]), r.origin.x + r.h * double(c[1]),
                  r.origin.y + r.h * double(c[2]), r.origin.y + r.h * double(c[3])};
        } else {
          throw Error(ErrorKind::UnsupportedSpace, "string-space cylinders have no bounding box");
        }
      },
      region);
}

std::optional<ExactLength> region_diameter(const Region& region) {
  return std::visit(
      [](const auto& r) -> std::optional<ExactLength> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return ExactLength::from_rational(r.hi - r.lo);
        } else if constexpr (std::is_same_v<T, AxisRectangle>) {
          return ExactLength::hypot(r.x_hi - r.x_lo, r.y_hi - r.y_lo);
        } else if constexpr (std::is_same_v<T, OrientedTriangle>) {
          i128 best = 0;
          for (int i = 0; i < 3; ++i) best = std::max(best, norm2(r.vertices[(i + 1) % 3] - r.vertices[i]));
          return ExactLength::sqrt_of(ExactRational(big(best), BigInt(r.denominator) * r.denominator));
        } else if constexpr (std::is_same_v<T, PolylineHull>) {
          // The curve lies in the 30-degree triangle over its chord, whose
          // diameter is the chord.
          const i128 n = norm2(r.chain.back() - r.chain.front());
          return ExactLength::sqrt_of(ExactRational(big(n), BigInt(r.denominator) * r.denominator));
        } else if constexpr (std::is_same_v<T, Cylinder>) {
          return ExactLength::from_rational(ExactRational::pow2(1 - static_cast<int>(r.prefix.size())));
        } else {
          return std::nullopt;
        }
      },
      region);
}

bool region_contains(const Region& outer, const Region& inner) {
  if (outer.index() != inner.index()) {
    throw Error(ErrorKind::InvalidArgument, "containment needs regions of the same kind");
  }
  if (const auto* o = std::get_if<Interval>(&outer)) {
    const auto& i = std::get<Interval>(inner);
    return o->lo <= i.lo && i.hi <= o->hi;
  }
  if (const auto* o = std::get_if<AxisRectangle>(&outer)) {
    const auto& i = std::get<AxisRectangle>(inner);
    return o->x_lo <= i.x_lo && i.x_hi <= o->x_hi && o->y_lo <= i.y_lo && i.y_hi <= o->y_hi;
  }
  if (const auto* o = std::get_if<OrientedTriangle>(&outer)) {
    const auto& i = std::get<OrientedTriangle>(inner);
    const std::int64_t den = checked_lcm(o->denominator, i.denominator);
    auto ov = o->vertices;
    auto iv = i.vertices;
    rescale(ov, o->denominator, den);
    rescale(iv, i.denominator, den);
    return std::all_of(iv.begin(), iv.end(), [&](const LatticePoint& p) { return in_triangle(ov, p); });
  }
  if (const auto* o = std::get_if<PolylineHull>(&outer)) {
    const auto& i = std::get<PolylineHull>(inner);
    const std::int64_t den = checked_lcm(o->denominator, i.denominator) * 3;
    auto hull_of = [&](const PolylineHull& h) {
      const std::int64_t k = den / (h.denominator * 3);
      const LatticePoint s = scale(h.chain.front(), k);
      const LatticePoint e = scale(h.chain.back(), k);
      return std::array<LatticePoint, 3>{scale(s, 3), scale(e, 3), koch_hull_apex(s, e)};
    };
    const auto ot = hull_of(*o);
    const auto it = hull_of(i);
    return std::all_of(it.begin(), it.end(), [&](const LatticePoint& p) { return in_triangle(ot, p); });
  }
  if (const auto* o = std::get_if<Cylinder>(&outer)) {
    const auto& i = std::get<Cylinder>(inner);
    return o->prefix.size() <= i.prefix.size() &&
           std::equal(o->prefix.begin(), o->prefix.end(), i.prefix.begin());
  }
  const auto& o = std::get<CellSet>(outer);
  const auto& i = std::get<CellSet>(inner);
  auto sorted = o.cells;
  std::sort(sorted.begin(), sorted.end());
  return std::all_of(i.cells.begin(), i.cells.end(),
                     [&](const auto& c) { return std::binary_search(sorted.begin(), sorted.end(), c); });
}

std::string describe(const Region& region) {
  std::ostringstream os;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Interval>) {
          os << "interval [" << r.lo.to_string() << ", " << r.hi.to_string() << "]";
        } else if constexpr (std::is_same_v<T, AxisRectangle>) {
          os << "rectangle [" << r.x_lo.to_string() << ", " << r.x_hi.to_string() << "] x ["
             << r.y_lo.to_string() << ", " << r.y_hi.to_string() << "]";
        } else if constexpr (std::is_same_v<T, OrientedTriangle>) {
          os << (r.up ? "triangle up" : "triangle down");
          for (const auto& v : r.vertices) {
            const Point p = to_point(v, r.denominator);
            os << " (" << p.x << ", " << p.y << ")";
          }
        } else if constexpr (std::is_same_v<T, PolylineHull>) {
          const Point s = to_point(r.chain.front(), r.denominator);
          const Point e = to_point(r.chain.back(), r.denominator);
          os << "koch hull (" << s.x << ", " << s.y << ") -> (" << e.x << ", " << e.y << ")";
        } else if constexpr (std::is_same_v<T, CellSet>) {
          os << "cell set of " << r.cells.size() << " cells, h = " << r.h;
        } else {
          os << "cylinder " << format_word(r.prefix);
        }
      },
      region);
  return os.str();
}

DistanceBracket set_distance(const Region& a, const Region& b, int refine) {
  if (a.index() != b.index()) {
    throw Error(ErrorKind::InvalidArgument, "set distance needs regions of the same kind");
  }
  if (const auto* x = std::get_if<Interval>(&a)) {
    const auto& y = std::get<Interval>(b);
    ExactRational gap = std::max({ExactRational(0), y.lo - x->hi, x->lo - y.hi});
    return exact_bracket(ExactLength::from_rational(gap), "exact-interval");
  }
  if (const auto* x = std::get_if<AxisRectangle>(&a)) {
    const auto& y = std::get<AxisRectangle>(b);
    const ExactRational dx = std::max({ExactRational(0), y.x_lo - x->x_hi, x->x_lo - y.x_hi});
    const ExactRational dy = std::max({ExactRational(0), y.y_lo - x->y_hi, x->y_lo - y.y_hi});
    return exact_bracket(ExactLength::hypot(dx, dy), "exact-rectangle");
  }
  if (const auto* x = std::get_if<OrientedTriangle>(&a)) {
    return triangle_distance(*x, std::get<OrientedTriangle>(b));
  }
  if (const auto* x = std::get_if<PolylineHull>(&a)) {
    return koch_distance(*x, std::get<PolylineHull>(b), refine);
  }
  if (const auto* x = std::get_if<Cylinder>(&a)) {
    const auto& y = std::get<Cylinder>(b);
    // Free digits past the shorter prefix can agree, so only the common
    // part contributes.
    ExactRational sum = 0;
    const std::size_t n = std::min(x->prefix.size(), y.prefix.size());
    for (std::size_t k = 1; k <= n; ++k) {
      if (x->prefix[k - 1] != y.prefix[k - 1]) sum += ExactRational::pow2(1 - static_cast<int>(k));
    }
    return exact_bracket(ExactLength::from_rational(sum), "exact-sigma-cylinder");
  }
  return cell_distance(std::get<CellSet>(a), std::get<CellSet>(b));
}

}  // namespace simchaos

#include "simchaos/dass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "simchaos/errors.hpp"
#include "simchaos/fractals.hpp"

namespace simchaos {

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, CouplingFn>& registry() {
  static std::map<std::string, CouplingFn> r{
      {"none", [](const Vec& x, const Vec&) { return Vec(x.size(), 0.0); }},
      {"linear-cross",
       [](const Vec& x, const Vec& mu) {
         // chi_i = mu_i * x_{i+1 mod n}
         Vec out(x.size());
         for (std::size_t i = 0; i < x.size(); ++i) out[i] = mu[i] * x[(i + 1) % x.size()];
         return out;
       }},
  };
  return r;
}

std::uint64_t checked_power(int base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(base)) {
      throw Error(ErrorKind::ResourceCap, "labels do not fit in 64 bits at this depth");
    }
    out *= static_cast<std::uint64_t>(base);
  }
  return out;
}

int tent_lap(const Vec& p) {
  const int c = std::min(2, static_cast<int>(std::floor(3.0 * p[0])));
  const int r = std::min(2, static_cast<int>(std::floor(3.0 * p[1])));
  if (c == 1 && r == 1) return -1;
  return 3 * c + r;
}

// Neighbour offsets of the (3^n - 1)-connectivity.
std::vector<std::vector<std::int64_t>> neighbour_offsets(std::size_t dim) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> o(dim, -1);
  while (true) {
    if (std::any_of(o.begin(), o.end(), [](std::int64_t v) { return v != 0; })) out.push_back(o);
    std::size_t i = 0;
    while (i < dim && o[i] == 1) o[i++] = -1;
    if (i == dim) break;
    ++o[i];
  }
  return out;
}

// Offsets within `radius` ordered by distance, then lexicographically.
std::vector<std::vector<std::int64_t>> search_offsets(std::size_t dim, int radius) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> o(dim, -radius);
  while (true) {
    out.push_back(o);
    std::size_t i = 0;
    while (i < dim && o[i] == radius) o[i++] = -radius;
    if (i == dim) break;
    ++o[i];
  }
  auto norm = [](const std::vector<std::int64_t>& v) {
    std::int64_t s = 0;
    for (auto x : v) s += x * x;
    return s;
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return norm(a) < norm(b); });
  return out;
}

bool shifted(const DassTree& t, const std::vector<std::int64_t>& base, const std::vector<std::int64_t>& off,
             std::vector<std::int64_t>& out) {
  for (std::size_t a = 0; a < base.size(); ++a) {
    out[a] = base[a] + off[a];
    if (out[a] < 0 || out[a] >= t.extent[a]) return false;
  }
  return true;
}

// Connected components of the cells accepted by `in`, grouped by `key`.
template <typename In, typename Key>
std::vector<Cluster> components(const DassTree& t, In in, Key key) {
  const auto offsets = neighbour_offsets(t.extent.size());
  std::vector<std::uint8_t> seen(t.cell_count(), 0);
  std::vector<Cluster> out;
  std::vector<std::uint64_t> stack;
  std::vector<std::int64_t> nb(t.extent.size());
  for (std::uint64_t c = 0; c < t.cell_count(); ++c) {
    if (seen[c] || !in(c)) continue;
    Cluster cl;
    cl.label = key(c);
    cl.lo = t.coords(c);
    cl.hi = cl.lo;
    seen[c] = 1;
    stack.assign(1, c);
    while (!stack.empty()) {
      const std::uint64_t cur = stack.back();
      stack.pop_back();
      cl.cells.push_back(static_cast<std::uint32_t>(cur));
      const auto xy = t.coords(cur);
      for (std::size_t a = 0; a < xy.size(); ++a) {
        cl.lo[a] = std::min(cl.lo[a], xy[a]);
        cl.hi[a] = std::max(cl.hi[a], xy[a]);
      }
      for (const auto& off : offsets) {
        if (!shifted(t, xy, off, nb)) continue;
        const std::uint64_t n = t.index(nb);
        if (seen[n] || !in(n) || key(n) != cl.label) continue;
        seen[n] = 1;
        stack.push_back(n);
      }
    }
    std::sort(cl.cells.begin(), cl.cells.end());
    out.push_back(std::move(cl));
  }
  return out;
}

double cells_gap(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::max<double>(0.0, double(std::llabs(a[i] - b[i])) - 1.0);
    s += d * d;
  }
  return std::sqrt(s);
}

double box_gap(const Cluster& a, const Cluster& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.lo.size(); ++i) {
    const double sep = double(std::max(b.lo[i] - a.hi[i], a.lo[i] - b.hi[i]));
    const double d = std::max(0.0, sep - 1.0);
    s += d * d;
  }
  return std::sqrt(s);
}

double cell_box_gap(const std::vector<std::int64_t>& c, const Cluster& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double sep = double(std::max(b.lo[i] - c[i], c[i] - b.hi[i]));
    const double d = std::max(0.0, sep - 1.0);
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

bool Box::contains(const Vec& p) const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(p[i] >= lo[i] && p[i] <= hi[i])) return false;
  }
  return true;
}

bool Box::contains_open(const Vec& p) const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(p[i] > lo[i] && p[i] < hi[i])) return false;
  }
  return true;
}

Box unit_box(int dim) { return {Vec(static_cast<std::size_t>(dim), 0.0), Vec(static_cast<std::size_t>(dim), 1.0)}; }

void register_coupling(const std::string& name, CouplingFn fn) {
  if (!fn) throw Error(ErrorKind::InvalidArgument, "coupling '" + name + "' has no function");
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry()[name] = std::move(fn);
}

const CouplingFn& resolve_coupling(const std::string& name) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  const auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorKind::UnresolvedCoupling, "unknown coupling '" + name + "'");
  return it->second;
}

void MapSpec::validate() const {
  const auto n = static_cast<std::size_t>(dim);
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be at least 1");
  if (r.size() != n || mu.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "r and mu must have one entry per dimension");
  }
  if (f0.dim() != n || f.dim() != n || f0.hi.size() != n || f.hi.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "boxes must match the dimension");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(f.lo[i] < f.hi[i]) || f0.lo[i] < f.lo[i] || f0.hi[i] > f.hi[i]) {
      throw Error(ErrorKind::InvalidArgument, "F0 must be a nonempty box inside F");
    }
  }
  if (kind == MapKind::Logistic) resolve_coupling(coupling);
  if (kind == MapKind::Tent && dim != 2) throw Error(ErrorKind::InvalidArgument, "the tent map is planar");
}

bool MapSpec::in_f0(const Vec& p) const {
  if (!f0.contains(p)) return false;
  return !(f0_hole && f0_hole->contains_open(p));
}

double MapSpec::r_max() const { return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end()); }

MapSpec logistic_spec(Vec r, Vec mu, std::string coupling) {
  MapSpec s;
  s.kind = MapKind::Logistic;
  s.dim = static_cast<int>(r.size());
  if (mu.empty()) mu.assign(r.size(), 0.0);
  s.r = std::move(r);
  s.mu = std::move(mu);
  s.coupling = std::move(coupling);
  s.f0 = unit_box(s.dim);
  s.f = unit_box(s.dim);
  s.validate();
  return s;
}

MapSpec tent_spec() {
  MapSpec s;
  s.kind = MapKind::Tent;
  s.dim = 2;
  // Slope of every branch; used as the Lipschitz factor in tolerances.
  s.r = {3.0, 3.0};
  s.mu = {0.0, 0.0};
  s.coupling = "none";
  s.f0 = unit_box(2);
  s.f0_hole = Box{{1.0 / 3.0, 1.0 / 3.0}, {2.0 / 3.0, 2.0 / 3.0}};
  s.f = unit_box(2);
  return s;
}

Vec logistic_step(const MapSpec& spec, const Vec& x) {
  if (x.size() != spec.r.size()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = spec.r[i] * x[i] * (1.0 - x[i]);
  return out;
}

Vec perturbed_step(const MapSpec& spec, const Vec& x) {
  Vec out = logistic_step(spec, x);
  const Vec chi = resolve_coupling(spec.coupling)(x, spec.mu);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += chi[i];
  return out;
}

Vec map_step(const MapSpec& spec, const Vec& x) {
  if (spec.kind == MapKind::Tent) {
    const Point p = carpet_tent({x.at(0), x.at(1)});
    return {p.x, p.y};
  }
  return perturbed_step(spec, x);
}

FirstLevel first_level_intervals_1d(double r) {
  if (!(r >= 4.0)) throw Error(ErrorKind::InvalidArgument, "two first-level intervals need r >= 4");
  const double g = std::sqrt(1.0 - 4.0 / r);
  return {(1.0 - g) / 2.0, (1.0 + g) / 2.0, g};
}

Vec DassTree::center(std::uint64_t cell) const {
  const auto c = coords(cell);
  Vec out(c.size());
  for (std::size_t a = 0; a < c.size(); ++a) out[a] = spec.f.lo[a] + (double(c[a]) + 0.5) * h;
  return out;
}

std::vector<std::int64_t> DassTree::coords(std::uint64_t cell) const {
  std::vector<std::int64_t> out(extent.size());
  for (std::size_t a = 0; a < extent.size(); ++a) {
    out[a] = static_cast<std::int64_t>(cell % static_cast<std::uint64_t>(extent[a]));
    cell /= static_cast<std::uint64_t>(extent[a]);
  }
  return out;
}

std::uint64_t DassTree::index(const std::vector<std::int64_t>& c) const {
  std::uint64_t out = 0;
  for (std::size_t a = extent.size(); a-- > 0;) out = out * static_cast<std::uint64_t>(extent[a]) + static_cast<std::uint64_t>(c[a]);
  return out;
}

std::optional<std::uint64_t> DassTree::cell_at(const Vec& p) const {
  std::vector<std::int64_t> c(extent.size());
  for (std::size_t a = 0; a < extent.size(); ++a) {
    if (!(p[a] >= spec.f.lo[a] && p[a] <= spec.f.hi[a])) return std::nullopt;
    c[a] = std::min<std::int64_t>(extent[a] - 1, static_cast<std::int64_t>(std::floor((p[a] - spec.f.lo[a]) / h)));
  }
  return index(c);
}

std::uint64_t DassTree::label(std::uint64_t cell, int k) const {
  const int sd = survival[cell];
  if (k < 1 || k > sd) throw Error(ErrorKind::InvalidArgument, "cell does not survive to that level");
  return itinerary[cell] / checked_power(branching, sd - k);
}

Word DassTree::label_word(std::uint64_t lab, int k) const {
  Word out(static_cast<std::size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<Digit>(lab % static_cast<std::uint64_t>(branching));
    lab /= static_cast<std::uint64_t>(branching);
  }
  return out;
}

std::size_t DassTree::cluster_count(int k) const {
  if (k == 0) return 1;
  return level(k).clusters.size();
}

const DassLevel& DassTree::level(int k) const {
  if (k < 1 || k > depth) throw Error(ErrorKind::InvalidArgument, "level " + std::to_string(k) + " out of range");
  return levels[static_cast<std::size_t>(k - 1)];
}

void rebuild_clusters(DassTree& tree) {
  tree.levels.clear();
  for (int k = 1; k <= tree.depth; ++k) {
    DassLevel lv;
    lv.k = k;
    lv.clusters = components(
        tree, [&](std::uint64_t c) { return tree.survival[c] >= k; },
        [&](std::uint64_t c) { return tree.label(c, k); });
    std::sort(lv.clusters.begin(), lv.clusters.end(), [](const Cluster& a, const Cluster& b) {
      return a.label != b.label ? a.label < b.label : a.lo < b.lo;
    });
    tree.levels.push_back(std::move(lv));
  }
}

DassTree escape_time_tree(const MapSpec& spec, int depth, double h, const BuildOptions& options) {
  spec.validate();
  if (depth < 0 || depth > 20) throw Error(ErrorKind::InvalidArgument, "depth must lie in [0, 20]");
  if (!(h > 0)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
  DassTree tree;
  tree.spec = spec;
  tree.h = h;
  tree.depth = depth;
  tree.lap_partition = spec.kind == MapKind::Tent;
  tree.survival_start = spec.kind == MapKind::Tent ? 0 : 1;
  std::size_t total = 1;
  for (int a = 0; a < spec.dim; ++a) {
    const double width = spec.f.hi[a] - spec.f.lo[a];
    const auto n = static_cast<std::int64_t>(std::llround(width / h));
    if (n < 1 || std::abs(double(n) * h - width) > 1e-9 * width) {
      throw Error(ErrorKind::InvalidArgument, "grid spacing must divide the working box");
    }
    if (total > options.cell_cap / static_cast<std::size_t>(n)) {
      throw Error(ErrorKind::ResourceCap, "grid exceeds the cell cap of " + std::to_string(options.cell_cap));
    }
    total *= static_cast<std::size_t>(n);
    tree.extent.push_back(n);
  }
  if (total > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorKind::ResourceCap, "grid too large");
  tree.survival.assign(total, 0);
  tree.itinerary.assign(total, 0);
  if (depth == 0) return tree;

  for (std::uint64_t c = 0; c < total; ++c) {
    Vec x = tree.center(c);
    int sd = 0;
    for (int k = 1; k <= depth; ++k) {
      if (k > 1 || tree.survival_start == 1) x = map_step(spec, x);
      if (!spec.in_f0(x)) break;
      sd = k;
    }
    tree.survival[c] = static_cast<std::uint8_t>(sd);
  }

  // Level-1 clusters fix the alphabet; digits follow the lexicographic order
  // of the bounding-box lower corners.
  std::vector<Cluster> first;
  if (tree.lap_partition) {
    first = components(
        tree, [&](std::uint64_t c) { return tree.survival[c] >= 1; },
        [&](std::uint64_t c) { return static_cast<std::uint64_t>(tent_lap(tree.center(c))); });
  } else {
    first = components(
        tree, [&](std::uint64_t c) { return tree.survival[c] >= 1; }, [](std::uint64_t) { return std::uint64_t{0}; });
  }
  std::sort(first.begin(), first.end(), [](const Cluster& a, const Cluster& b) { return a.lo < b.lo; });
  const int m = static_cast<int>(first.size());
  if (m < 2 || (options.expected_branching > 0 && m != options.expected_branching)) {
    throw Error(ErrorKind::LabelingError,
                "level 1 has " + std::to_string(m) + " clusters" +
                    (options.expected_branching > 0 ? ", expected " + std::to_string(options.expected_branching) : "") +
                    "; the map parameters are outside the separated regime");
  }
  if (m > 255) throw Error(ErrorKind::LabelingError, "too many level-1 clusters");
  tree.branching = m;
  checked_power(m, depth);

  std::vector<std::int16_t> digit_of(total, -1);
  std::map<std::uint64_t, int> lap_digit;
  for (int d = 0; d < m; ++d) {
    for (auto c : first[static_cast<std::size_t>(d)].cells) digit_of[c] = static_cast<std::int16_t>(d);
    if (tree.lap_partition) lap_digit[first[static_cast<std::size_t>(d)].label] = d;
  }

  const auto fallback = search_offsets(tree.extent.size(), options.lookup_radius);
  std::vector<std::int64_t> nb(tree.extent.size());
  auto first_digit = [&](const Vec& p) -> int {
    if (tree.lap_partition) {
      const auto it = lap_digit.find(static_cast<std::uint64_t>(tent_lap(p)));
      return it == lap_digit.end() ? -1 : it->second;
    }
    std::vector<std::int64_t> c(tree.extent.size());
    for (std::size_t a = 0; a < c.size(); ++a) {
      const double t = std::floor((p[a] - spec.f.lo[a]) / h);
      c[a] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::clamp(t, -1.0, double(tree.extent[a]))), 0,
                                      tree.extent[a] - 1);
    }
    for (const auto& off : fallback) {
      if (!shifted(tree, c, off, nb)) continue;
      const int d = digit_of[tree.index(nb)];
      if (d >= 0) return d;
    }
    return -1;
  };

  for (std::uint64_t c = 0; c < total; ++c) {
    const int sd = tree.survival[c];
    if (sd == 0) continue;
    Vec x = tree.center(c);
    std::uint64_t packed = 0;
    for (int j = 0; j < sd; ++j) {
      const int d = first_digit(x);
      if (d < 0) {
        throw Error(ErrorKind::LabelingError, "iterate " + std::to_string(j) + " of cell " + std::to_string(c) +
                                                  " is not near any level-1 cluster");
      }
      packed = packed * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(d);
      if (j + 1 < sd) x = map_step(spec, x);
    }
    tree.itinerary[c] = packed;
  }
  rebuild_clusters(tree);
  return tree;
}

DassTree tent_dass_tree(int depth, double h) {
  BuildOptions options;
  options.expected_branching = 8;
  return escape_time_tree(tent_spec(), depth, h, options);
}

std::vector<LabelViolation> label_consistency_check(const DassTree& tree, double tolerance) {
  const double tol = tolerance >= 0 ? tolerance : 2.0 * tree.h * tree.spec.r_max();
  const auto radius = static_cast<int>(std::ceil(tol / tree.h)) + 1;
  const auto window = search_offsets(tree.extent.size(), radius);
  std::vector<LabelViolation> out;
  std::vector<std::int64_t> nb(tree.extent.size());
  for (int k = 2; k <= tree.depth; ++k) {
    const std::uint64_t mod = checked_power(tree.branching, k - 1);
    for (std::uint64_t c = 0; c < tree.cell_count(); ++c) {
      if (tree.survival[c] < k) continue;
      const std::uint64_t expected = tree.label(c, k) % mod;
      const Vec center = tree.center(c);
      const Vec image = map_step(tree.spec, center);
      bool ok = false;
      if (const auto hit = tree.cell_at(image); hit && tree.survival[*hit] >= k - 1) {
        ok = tree.label(*hit, k - 1) == expected;
      }
      if (!ok) {
        std::vector<std::int64_t> base(tree.extent.size());
        for (std::size_t a = 0; a < base.size(); ++a) {
          base[a] = static_cast<std::int64_t>(std::floor((image[a] - tree.spec.f.lo[a]) / tree.h));
        }
        for (const auto& off : window) {
          bool inside = true;
          for (std::size_t a = 0; a < base.size() && inside; ++a) {
            nb[a] = base[a] + off[a];
            inside = nb[a] >= 0 && nb[a] < tree.extent[a];
          }
          if (!inside) continue;
          const std::uint64_t n = tree.index(nb);
          if (tree.survival[n] < k - 1 || tree.label(n, k - 1) != expected) continue;
          double s = 0.0;
          for (std::size_t a = 0; a < base.size(); ++a) {
            const double lo = tree.spec.f.lo[a] + double(nb[a]) * tree.h;
            const double d = std::max({0.0, lo - image[a], image[a] - (lo + tree.h)});
            s += d * d;
          }
          if (std::sqrt(s) <= tol) {
            ok = true;
            break;
          }
        }
      }
      if (!ok) out.push_back({k, c, center, image, expected});
    }
  }
  return out;
}

DassConditionReport dass_condition_report(const DassTree& tree, double weak_threshold) {
  DassConditionReport report;
  report.weak_threshold = weak_threshold;
  double root = 0.0;
  for (std::size_t a = 0; a < tree.extent.size(); ++a) {
    const double w = tree.spec.f.hi[a] - tree.spec.f.lo[a];
    root += w * w;
  }
  double previous = std::sqrt(root);
  bool decreasing = tree.depth >= 1;
  const std::size_t dim = tree.extent.size();

  for (int k = 1; k <= tree.depth; ++k) {
    const auto& clusters = tree.level(k).clusters;
    LevelCondition lc;
    lc.level = k;
    lc.clusters = clusters.size();
    for (const auto& cl : clusters) {
      double s = 0.0;
      for (std::size_t a = 0; a < dim; ++a) {
        const double w = double(cl.hi[a] - cl.lo[a] + 1) * tree.h;
        s += w * w;
      }
      lc.max_diameter = std::max(lc.max_diameter, std::sqrt(s));
    }
    if (!(lc.max_diameter < previous)) decreasing = false;
    previous = lc.max_diameter;

    // Boundary cells carry every minimal gap.
    std::vector<std::vector<std::vector<std::int64_t>>> boundary(clusters.size());
    std::vector<std::int64_t> nb(dim);
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (auto c : clusters[i].cells) {
        const auto xy = tree.coords(c);
        bool edge = false;
        for (std::size_t a = 0; a < dim && !edge; ++a) {
          for (int s : {-1, 1}) {
            nb = xy;
            nb[a] += s;
            if (nb[a] < 0 || nb[a] >= tree.extent[a]) {
              edge = true;
              break;
            }
            const std::uint64_t n = tree.index(nb);
            if (tree.survival[n] < k || tree.label(n, k) != clusters[i].label) {
              edge = true;
              break;
            }
          }
        }
        if (edge) boundary[i].push_back(xy);
      }
    }

    struct PairGap {
      double box;
      std::size_t a, b;
    };
    std::vector<PairGap> pairs;
    lc.best_partner.assign(clusters.size(), {0, -1.0});
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double g = box_gap(clusters[i], clusters[j]);
        pairs.push_back({g, i, j});
        if (g > lc.best_partner[i].second) lc.best_partner[i] = {j, g};
        if (g > lc.best_partner[j].second) lc.best_partner[j] = {i, g};
      }
    }
    for (auto& bp : lc.best_partner) bp.second = std::max(0.0, bp.second) * tree.h;
    std::sort(pairs.begin(), pairs.end(), [](const PairGap& x, const PairGap& y) {
      return x.box != y.box ? x.box < y.box : std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pairs) {
      if (p.box >= best) break;
      std::vector<const std::vector<std::int64_t>*> ca, cb;
      for (const auto& c : boundary[p.a]) {
        if (cell_box_gap(c, clusters[p.b]) < best) ca.push_back(&c);
      }
      for (const auto& c : boundary[p.b]) {
        if (cell_box_gap(c, clusters[p.a]) < best) cb.push_back(&c);
      }
      double g = std::numeric_limits<double>::infinity();
      for (const auto* x : ca) {
        for (const auto* y : cb) g = std::min(g, cells_gap(*x, *y));
        if (g == 0.0) break;
      }
      if (g > 0.0 && g < best) {
        best = g;
        lc.closest_a = p.a;
        lc.closest_b = p.b;
      }
    }
    lc.epsilon = std::isfinite(best) ? best * tree.h : 0.0;
    report.levels.push_back(std::move(lc));
  }
  report.diameters_decreasing = decreasing;
  if (!report.levels.empty()) {
    const double eps = report.levels.front().epsilon;
    report.separated = eps > 0.0;
    report.weak_separation = eps < weak_threshold;
  }
  return report;
}

Trajectory trajectory(const MapSpec& spec, const Vec& x0, std::size_t steps) {
  spec.validate();
  if (x0.size() != static_cast<std::size_t>(spec.dim)) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  Trajectory t;
  t.points.push_back(x0);
  if (!spec.f.contains(x0)) {
    t.escape_step = 0;
    return t;
  }
  Vec x = x0;
  for (std::size_t s = 1; s <= steps; ++s) {
    x = map_step(spec, x);
    t.points.push_back(x);
    if (!spec.f.contains(x)) {
      t.escape_step = s;
      break;
    }
  }
  return t;
}

std::size_t escape_time(const MapSpec& spec, const Vec& x0, std::size_t max_steps) {
  Vec x = x0;
  for (std::size_t s = 0; s < max_steps; ++s) {
    if (!spec.f.contains(x)) return s;
    x = map_step(spec, x);
    if (!spec.in_f0(x)) return s;
  }
  return max_steps;
}

Vec deep_point(const MapSpec& spec, const Vec& start, double window, std::size_t target) {
  const std::size_t dim = start.size();
  constexpr int kSamples = 17;
  Vec best = start;
  std::size_t best_t = escape_time(spec, best, target);
  double w = window;
  for (int round = 0; round < 64 && best_t < target && w > 1e-15; ++round) {
    const Vec centre = best;
    std::size_t total = 1;
    for (std::size_t a = 0; a < dim; ++a) total *= kSamples;
    for (std::size_t n = 0; n < total; ++n) {
      Vec p(dim);
      std::size_t rest = n;
      for (std::size_t a = 0; a < dim; ++a) {
        const auto i = static_cast<double>(rest % kSamples);
        rest /= kSamples;
        p[a] = centre[a] + w * (i / (kSamples - 1) - 0.5);
      }
      const std::size_t t = escape_time(spec, p, target);
      if (t > best_t) {
        best_t = t;
        best = p;
      }
    }
    w /= 4.0;
  }
  return best;
}

SensitivityProbe sensitivity_probe(const MapSpec& spec, const Vec& p, const Vec& q, std::size_t max_steps,
                                   double threshold) {
  auto dist = [](const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  };
  SensitivityProbe out{p, q, dist(p, q), std::nullopt, dist(p, q)};
  Vec x = p, y = q;
  for (std::size_t s = 1; s <= max_steps; ++s) {
    if (!spec.f.contains(x) || !spec.f.contains(y)) break;
    x = map_step(spec, x);
    y = map_step(spec, y);
    if (!spec.f.contains(x) || !spec.f.contains(y)) break;
    const double d = dist(x, y);
    out.separation = std::max(out.separation, d);
    if (d >= threshold) {
      out.separated_at = s;
      break;
    }
  }
  return out;
}

}  // namespace simchaos

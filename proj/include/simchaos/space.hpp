#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "simchaos/address.hpp"
#include "simchaos/exact.hpp"
#include "simchaos/region.hpp"

namespace simchaos {

enum class SpaceKind { Sigma, Cantor, Carpet, Gasket, Koch };
enum class MetricKind { Sigma, Euclidean1D, Euclidean2D };

const char* to_string(SpaceKind kind);
const char* to_string(MetricKind kind);

/// A concrete self-similar space. Geometry is fixed by `kind`; the remaining
/// fields describe the contract the checkers verify.
struct SpaceDescriptor {
  std::string name;
  SpaceKind kind = SpaceKind::Sigma;
  int branching = 2;
  MetricKind metric = MetricKind::Sigma;
  /// Added to digits when rendering labels (1 for the fractals).
  int display_offset = 0;
  int separation_degree = 1;
  /// Expected separation constant; unset means no separation table can be built.
  std::optional<ExactLength> separation_constant;
  std::string boundary_agreement;
  /// diameter_law(n) = root_diameter * ratio^n.
  ExactLength root_diameter;
  ExactRational ratio;
  /// Koch hull refinement used by distance checks.
  int refine = 14;

  ExactLength diameter_law(int depth) const;
  /// Least depth k with diameter_law(k) < tol.
  int depth_for(double tol) const;
};

/// Region of the subset named by `prefix`.
Region subset_region(const SpaceDescriptor& space, const Word& prefix);

/// Center of the subset at the first depth whose diameter is below tol.
Point point_of(const SpaceDescriptor& space, const Address& a, double tol);

/// Depth-n prefix of the subset holding p, resolving shared boundaries by the
/// space's boundary agreement. Throws OutsideRoot or NotInSet.
Word address_of(const SpaceDescriptor& space, const ExactPoint& p, int depth);
Word address_of(const SpaceDescriptor& space, const Point& p, int depth);

struct DiameterLevel {
  int depth = 0;
  ExactLength law;
  std::optional<ExactLength> measured;
  std::size_t regions_checked = 0;
  bool exhaustive = true;
};

struct DiameterReport {
  std::vector<DiameterLevel> levels;
  bool strictly_decreasing = true;
  bool matches_law = true;
  bool pass() const { return strictly_decreasing && matches_law; }
};

/// Max subset diameter per depth 1..max_depth; every prefix when m^n <= cap,
/// otherwise a deterministic sample of cap prefixes.
DiameterReport check_diameter_condition(const SpaceDescriptor& space, int max_depth,
                                        std::size_t cap = 4096);

struct SeparationEntry {
  Word prefix;
  Word partner;
  DistanceBracket distance;
};

struct SeparationTable {
  int degree = 1;
  int refine = 0;
  std::vector<Word> prefixes;
  /// distances[i][j] between prefixes[i] and prefixes[j].
  std::vector<std::vector<DistanceBracket>> distances;
  /// Per prefix, the partner with the largest certified lower bound.
  std::vector<SeparationEntry> best_partner;
  /// Minimum over non-touching pairs.
  double epsilon_lower = 0.0;
  double epsilon_upper = 0.0;
  std::optional<ExactLength> epsilon_exact;
  std::size_t closest_i = 0;
  std::size_t closest_j = 0;

  /// Every prefix has a partner certified at distance >= epsilon_lower.
  bool pass() const;
  const DistanceBracket& between(const Word& a, const Word& b) const;
  std::size_t index_of(const Word& prefix) const;
};

/// Certified pairwise distances of all depth-`degree` subsets. `refine` < 0
/// picks the space default. Throws ResourceCap when m^degree > cap.
SeparationTable check_separation(const SpaceDescriptor& space, int degree, int refine = -1,
                                 std::size_t cap = 512);

struct SimilarityCertificate {
  bool holds = false;
  /// (prefix + w, shifted word) for each depth-k word w.
  std::vector<std::pair<Word, Word>> bijection;
  /// The similarity taking F_prefix onto F carries each F_{prefix w} onto F_w.
  bool geometric = false;
};

SimilarityCertificate verify_similarity_identity(const SpaceDescriptor& space, const Word& prefix, int k,
                                                 std::size_t cap = 1u << 16);

/// Fast membership of p in the union of depth-n regions (used for rasters).
bool contains_at_depth(const SpaceDescriptor& space, const Point& p, int depth);

/// All words of length n over m digits in lexicographic order.
std::vector<Word> all_words(int base, int length, std::size_t cap = 1u << 20);

}  // namespace simchaos

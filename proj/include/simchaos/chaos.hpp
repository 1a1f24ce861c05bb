#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "simchaos/address.hpp"
#include "simchaos/region.hpp"
#include "simchaos/space.hpp"

namespace simchaos {

/// Independent stream seed for task `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
/// Uniform integer in [0, n) by rejection, identical on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

/// Digits 1..limit of an address as text, e.g. "0101..." for generator tails.
std::string address_label(const Address& a, int offset, std::size_t limit = 32);

struct PeriodicApprox {
  Address periodic;
  int depth = 0;
  /// diameter_law(depth): bound on d(target, periodic).
  ExactLength bound;
  /// Exact distance when the string metric applies.
  std::optional<ExactRational> exact;
  bool certified = false;
};

/// Repeats the first k digits of `target`, k least with diameter_law(k) < eps.
PeriodicApprox periodic_approx(const SpaceDescriptor& space, const Address& target, double eps);

struct Visit {
  Word block;
  std::size_t shift = 0;
};

struct TransitiveWitness {
  Word prefix;
  std::vector<Visit> schedule;
  bool covers_all = false;
};

/// Orbit prefix entering every subset of depth <= L, with entry times.
TransitiveWitness transitive_witness(const SpaceDescriptor& space, int max_len,
                                     std::size_t cap = std::size_t{1} << 24);

struct SensitivityWitness {
  Address a;
  Address b;
  std::size_t shifts = 0;
  /// d(a, b) <= diameter_law(|shared prefix|).
  ExactLength initial_bound;
  std::optional<ExactRational> initial_exact;
  /// Distance of the subsets holding shift^n a and shift^n b.
  DistanceBracket separation;
  std::optional<ExactRational> separated_exact;
  double epsilon0 = 0.0;
  bool certified = false;
};

/// Two addresses sharing `shared` whose orbits land in separated subsets
/// after |shared| shifts. Throws MissingWitnessTable when table is null.
SensitivityWitness sensitivity_pair(const SpaceDescriptor& space, const SeparationTable* table,
                                    const Word& shared);

struct ProximalTime {
  std::size_t time = 0;
  std::size_t agreement = 0;
  ExactLength upper;
};

struct SeparatedTime {
  std::size_t time = 0;
  DistanceBracket distance;
};

struct LiYorkePair {
  Address a;
  Address b;
  std::size_t horizon = 0;
  std::vector<ProximalTime> proximal;
  std::vector<SeparatedTime> separated;
  double epsilon0 = 0.0;
  /// Proximal bounds strictly decrease and every separated time reaches epsilon0.
  bool consistent = false;
};

/// Alternates separation markers from the table with agreement blocks of
/// length 1, 2, 4, ... up to the horizon.
LiYorkePair li_yorke_pair(const SpaceDescriptor& space, const SeparationTable* table, std::size_t horizon);

struct LiYorkeVerdict {
  std::size_t separated_times = 0;
  std::size_t longest_agreement = 0;
  ExactLength best_proximal;
  bool is_pair = false;
};

/// Scans shift times 0..horizon of an arbitrary pair. A pair qualifies when
/// it is separated at some time and proximal below diam(root) / 256.
LiYorkeVerdict evaluate_li_yorke(const SpaceDescriptor& space, const SeparationTable& table, const Address& a,
                                 const Address& b, std::size_t horizon);

enum class ReturnClass { Return, NoReturn, Indeterminate };
const char* to_string(ReturnClass c);

struct ReturnEntry {
  std::size_t time = 0;
  double lower = 0.0;
  double upper = 0.0;
  ReturnClass verdict = ReturnClass::NoReturn;
};

struct RecurrenceStats {
  std::vector<ReturnEntry> entries;
  std::vector<std::size_t> returns() const;
  std::size_t indeterminate() const;
};

/// Classifies d(shift^t a, a) < eps for t = 1..horizon. Comparisons that the
/// available precision cannot settle are marked Indeterminate.
RecurrenceStats recurrence_stats(const SpaceDescriptor& space, const Address& a, double eps, std::size_t horizon);

enum class WitnessKind { PeriodicDensity, Transitivity, Sensitivity, LiYorke, Recurrence };
const char* to_string(WitnessKind kind);

struct Quantity {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  std::string exact;
  std::string method;
};

struct WitnessReport {
  WitnessKind kind = WitnessKind::PeriodicDensity;
  std::string space;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::string> witnesses;
  std::vector<Quantity> quantities;
  std::size_t horizon = 0;
  bool pass = false;
};

struct DevaneyReport {
  std::string space;
  int depth = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<WitnessReport> reports;
  bool pass = false;
};

/// Periodic approximation of `samples` random targets, one transitive orbit of
/// block length `depth`, and `samples` random sensitivity pairs.
DevaneyReport devaney_report(const SpaceDescriptor& space, int depth, std::size_t samples, std::uint64_t seed);

WitnessReport li_yorke_report(const SpaceDescriptor& space, const SeparationTable& table, std::size_t horizon);
WitnessReport recurrence_report(const SpaceDescriptor& space, const Address& a, double eps, std::size_t horizon);

}  // namespace simchaos

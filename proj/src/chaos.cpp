#include "simchaos/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_map>

#include "simchaos/debruijn.hpp"
#include "simchaos/errors.hpp"

namespace simchaos {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

const SeparationEntry& widest_entry(const SeparationTable& table) {
  if (table.best_partner.empty()) {
    throw Error(ErrorKind::MissingWitnessTable, "separation table has no entries");
  }
  const SeparationEntry* best = &table.best_partner.front();
  for (const auto& e : table.best_partner) {
    if (e.distance.lower > best->distance.lower) best = &e;
  }
  return *best;
}

Quantity quantity(std::string name, const ExactLength& v, std::string method) {
  const double d = v.to_double();
  return {std::move(name), d, d, v.to_string(), std::move(method)};
}

Quantity quantity(std::string name, const DistanceBracket& b) {
  return {std::move(name), b.lower, b.upper, b.exact ? b.exact->to_string() : std::string(), b.method};
}

Address random_address(const SpaceDescriptor& space, std::mt19937_64& rng, std::size_t length) {
  Word w(length);
  const auto m = static_cast<std::uint64_t>(space.branching);
  for (auto& d : w) d = static_cast<Digit>(uniform_below(rng, m));
  return Address::constant(space.branching, std::move(w), static_cast<Digit>(uniform_below(rng, m)));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % n;
}

std::string address_label(const Address& a, int offset, std::size_t limit) {
  if (a.has_finite_tail()) return a.display(offset);
  return format_word(a.first(std::min(limit, a.horizon())), offset) + "...";
}

const char* to_string(ReturnClass c) {
  switch (c) {
    case ReturnClass::Return: return "return";
    case ReturnClass::NoReturn: return "no-return";
    case ReturnClass::Indeterminate: return "indeterminate";
  }
  return "?";
}

const char* to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::PeriodicDensity: return "periodic-density";
    case WitnessKind::Transitivity: return "transitivity";
    case WitnessKind::Sensitivity: return "sensitivity";
    case WitnessKind::LiYorke: return "li-yorke";
    case WitnessKind::Recurrence: return "recurrence";
  }
  return "?";
}

PeriodicApprox periodic_approx(const SpaceDescriptor& space, const Address& target, double eps) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  if (target.base() != space.branching) {
    throw Error(ErrorKind::UnsupportedBase, "target base differs from the space branching");
  }
  const int k = std::max(1, space.depth_for(eps));
  const Word block = target.first(static_cast<std::size_t>(k));
  PeriodicApprox out{Address::repeating(space.branching, {}, block).canonical(), k, space.diameter_law(k),
                     std::nullopt, false};
  out.certified = out.bound.less_than(eps) && out.periodic.first(block.size()) == block &&
                  is_periodic(out.periodic).has_value();
  if (space.kind == SpaceKind::Sigma && target.has_finite_tail()) {
    out.exact = sigma_distance(target, out.periodic);
    out.certified = out.certified && ExactLength::from_rational(*out.exact) <= out.bound;
  }
  return out;
}

TransitiveWitness transitive_witness(const SpaceDescriptor& space, int max_len, std::size_t cap) {
  if (max_len < 1) throw Error(ErrorKind::InvalidArgument, "block length must be at least 1");
  TransitiveWitness out;
  const int m = space.branching;
  out.prefix = debruijn_transitive_prefix(m, max_len, cap);
  out.covers_all = true;
  for (int len = 1; len <= max_len; ++len) {
    std::unordered_map<std::uint64_t, std::size_t> first;
    for (std::size_t p = 0; p + static_cast<std::size_t>(len) <= out.prefix.size(); ++p) {
      std::uint64_t code = 0;
      for (int i = 0; i < len; ++i) code = code * static_cast<std::uint64_t>(m) + out.prefix[p + i];
      first.try_emplace(code, p);
    }
    for (const auto& w : all_words(m, len, cap)) {
      std::uint64_t code = 0;
      for (Digit d : w) code = code * static_cast<std::uint64_t>(m) + d;
      const auto it = first.find(code);
      if (it == first.end()) {
        out.covers_all = false;
        continue;
      }
      out.schedule.push_back({w, it->second});
    }
  }
  return out;
}

SensitivityWitness sensitivity_pair(const SpaceDescriptor& space, const SeparationTable* table, const Word& shared) {
  if (table == nullptr) {
    throw Error(ErrorKind::MissingWitnessTable, space.name + " has no separation witness table");
  }
  validate_word(shared, space.branching);
  const SeparationEntry& e = widest_entry(*table);
  const std::size_t n = shared.size();
  SensitivityWitness out{Address::constant(space.branching, concat(shared, e.prefix), e.prefix.back()),
                         Address::constant(space.branching, concat(shared, e.partner), e.partner.back()),
                         n,
                         space.diameter_law(static_cast<int>(n)),
                         std::nullopt,
                         e.distance,
                         std::nullopt,
                         table->epsilon_lower,
                         false};
  bool ok = out.a.first(n) == out.b.first(n) && out.epsilon0 > 0 && out.separation.lower >= out.epsilon0;
  if (space.kind == SpaceKind::Sigma) {
    out.initial_exact = sigma_distance(out.a, out.b);
    out.separated_exact = sigma_distance(shift(out.a, n), shift(out.b, n));
    ok = ok && ExactLength::from_rational(*out.initial_exact) <= out.initial_bound &&
         !out.separated_exact->raw().is_zero() && out.separated_exact->to_double() >= out.epsilon0;
  }
  out.certified = ok;
  return out;
}

LiYorkePair li_yorke_pair(const SpaceDescriptor& space, const SeparationTable* table, std::size_t horizon) {
  if (table == nullptr) {
    throw Error(ErrorKind::MissingWitnessTable, space.name + " has no separation witness table");
  }
  const std::size_t deg = static_cast<std::size_t>(table->degree);
  if (horizon < 4 || horizon < 2 * deg + 1) {
    throw Error(ErrorKind::InvalidArgument, "horizon too small for one agreement and separation cycle");
  }
  const SeparationEntry& e = widest_entry(*table);
  auto da = std::make_shared<Word>();
  auto db = std::make_shared<Word>();
  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // (start, length) of agreement blocks
  std::vector<std::size_t> markers;
  const std::size_t total = 2 * horizon + deg + 2;
  for (std::size_t j = 0, len = 1; da->size() < total; ++j, len *= 2) {
    markers.push_back(da->size());
    da->insert(da->end(), e.prefix.begin(), e.prefix.end());
    db->insert(db->end(), e.partner.begin(), e.partner.end());
    blocks.emplace_back(da->size(), len);
    const auto fill = static_cast<Digit>(j % static_cast<std::size_t>(space.branching));
    da->insert(da->end(), len, fill);
    db->insert(db->end(), len, fill);
  }
  const std::size_t digits = da->size();
  auto gen = [](std::shared_ptr<Word> w) { return [w](std::size_t k) { return (*w)[k - 1]; }; };
  LiYorkePair out{Address::generated(space.branching, {}, gen(da), digits),
                  Address::generated(space.branching, {}, gen(db), digits),
                  horizon,
                  {},
                  {},
                  table->epsilon_lower,
                  false};
  bool ok = out.epsilon0 > 0;
  for (const auto& [start, len] : blocks) {
    if (start > horizon) break;
    ok = ok && std::equal(da->begin() + static_cast<std::ptrdiff_t>(start),
                          da->begin() + static_cast<std::ptrdiff_t>(start + len),
                          db->begin() + static_cast<std::ptrdiff_t>(start));
    const ExactLength upper = space.diameter_law(static_cast<int>(len));
    if (!out.proximal.empty() && !(upper < out.proximal.back().upper)) ok = false;
    out.proximal.push_back({start, len, upper});
  }
  for (std::size_t start : markers) {
    if (start > horizon) break;
    out.separated.push_back({start, e.distance});
    ok = ok && e.distance.lower >= out.epsilon0;
  }
  out.consistent = ok && !out.proximal.empty() && !out.separated.empty();
  return out;
}

LiYorkeVerdict evaluate_li_yorke(const SpaceDescriptor& space, const SeparationTable& table, const Address& a,
                                 const Address& b, std::size_t horizon) {
  const std::size_t deg = static_cast<std::size_t>(table.degree);
  const std::size_t limit = std::min({a.horizon(), b.horizon(), 2 * horizon + deg + 64});
  const Word wa = a.first(limit);
  const Word wb = b.first(limit);
  std::vector<std::size_t> agree(limit + 1, 0);
  for (std::size_t i = limit; i-- > 0;) agree[i] = wa[i] == wb[i] ? agree[i + 1] + 1 : 0;

  LiYorkeVerdict out;
  for (std::size_t t = 0; t <= horizon && t + deg <= limit; ++t) {
    out.longest_agreement = std::max(out.longest_agreement, agree[t]);
    const Word u(wa.begin() + static_cast<std::ptrdiff_t>(t), wa.begin() + static_cast<std::ptrdiff_t>(t + deg));
    const Word v(wb.begin() + static_cast<std::ptrdiff_t>(t), wb.begin() + static_cast<std::ptrdiff_t>(t + deg));
    if (u != v && table.epsilon_lower > 0 && table.between(u, v).lower >= table.epsilon_lower) {
      ++out.separated_times;
    }
  }
  out.best_proximal = space.diameter_law(static_cast<int>(out.longest_agreement));
  const ExactLength target = space.root_diameter.scaled(ExactRational(BigInt(1), BigInt(256)));
  out.is_pair = out.separated_times > 0 && out.best_proximal < target;
  return out;
}

std::vector<std::size_t> RecurrenceStats::returns() const {
  std::vector<std::size_t> out;
  for (const auto& e : entries) {
    if (e.verdict == ReturnClass::Return) out.push_back(e.time);
  }
  return out;
}

std::size_t RecurrenceStats::indeterminate() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const ReturnEntry& e) {
    return e.verdict == ReturnClass::Indeterminate;
  }));
}

RecurrenceStats recurrence_stats(const SpaceDescriptor& space, const Address& a, double eps, std::size_t horizon) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  if (a.base() != space.branching) {
    throw Error(ErrorKind::UnsupportedBase, "address base differs from the space branching");
  }
  RecurrenceStats stats;
  stats.entries.reserve(horizon);
  const ExactRational eps_exact = ExactRational::from_double(eps);
  auto classify = [eps](ReturnEntry& e) {
    if (e.upper < eps) {
      e.verdict = ReturnClass::Return;
    } else if (e.lower >= eps) {
      e.verdict = ReturnClass::NoReturn;
    } else {
      e.verdict = ReturnClass::Indeterminate;
    }
  };

  const Address canon = a.has_finite_tail() ? a.canonical() : a;
  int depth_cap = 40;
  if (space.kind == SpaceKind::Koch) depth_cap = 25;
  const int geo_depth = space.kind == SpaceKind::Sigma ? 0 : std::min(depth_cap, space.depth_for(eps * 1e-6));

  for (std::size_t t = 1; t <= horizon; ++t) {
    ReturnEntry e;
    e.time = t;
    if (a.has_finite_tail()) {
      const Address s = shift(canon, t);
      if (s == canon) {
        e.verdict = ReturnClass::Return;
        stats.entries.push_back(e);
        continue;
      }
      if (space.kind == SpaceKind::Sigma) {
        const ExactRational d = sigma_distance(s, canon);
        e.lower = e.upper = d.to_double();
        e.verdict = d < eps_exact ? ReturnClass::Return : ReturnClass::NoReturn;
        stats.entries.push_back(e);
        continue;
      }
    }
    const std::size_t available = a.horizon() > t ? a.horizon() - t : 0;
    if (space.kind == SpaceKind::Sigma) {
      // Truncated series: the unseen tail adds at most 2^(1-K).
      const std::size_t k = std::min<std::size_t>(53, available);
      double partial = 0.0;
      for (std::size_t i = 1; i <= k; ++i) {
        if (a.digit(i) != a.digit(i + t)) partial += std::ldexp(1.0, 1 - static_cast<int>(i));
      }
      e.lower = partial;
      e.upper = partial + std::ldexp(1.0, 1 - static_cast<int>(k));
    } else {
      const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(geo_depth), available);
      const Word head = a.first(k);
      Word moved(k);
      for (std::size_t i = 1; i <= k; ++i) moved[i - 1] = a.digit(i + t);
      const Point p = region_center(subset_region(space, head));
      const Point q = region_center(subset_region(space, moved));
      const double dc = std::hypot(p.x - q.x, p.y - q.y);
      const double slack = 2.0 * space.diameter_law(static_cast<int>(k)).to_double() * (1 + 1e-12) + 1e-15;
      e.lower = std::max(0.0, dc - slack);
      e.upper = dc + slack;
    }
    classify(e);
    stats.entries.push_back(e);
  }
  return stats;
}

DevaneyReport devaney_report(const SpaceDescriptor& space, int depth, std::size_t samples, std::uint64_t seed) {
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "depth must be at least 1");
  if (!space.separation_constant) {
    throw Error(ErrorKind::MissingWitnessTable, space.name + " declares no separation constant");
  }
  const SeparationTable table = check_separation(space, space.separation_degree);
  DevaneyReport out;
  out.space = space.name;
  out.depth = depth;
  out.samples = samples;
  out.seed = seed;
  const double eps_values[] = {0.5, 0.1, 0.02};

  WitnessReport periodic;
  periodic.kind = WitnessKind::PeriodicDensity;
  periodic.space = space.name;
  periodic.inputs = {{"samples", std::to_string(samples)}, {"epsilon", "0.5,0.1,0.02"}};
  periodic.pass = true;
  for (std::size_t i = 0; i < samples; ++i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    const Address target = random_address(space, rng, static_cast<std::size_t>(depth) + 4);
    const double eps = eps_values[i % 3];
    const PeriodicApprox p = periodic_approx(space, target, eps);
    periodic.witnesses.push_back(address_label(target, space.display_offset) + " -> " +
                                 address_label(p.periodic, space.display_offset));
    periodic.quantities.push_back(quantity("bound(eps=" + std::to_string(eps) + ")", p.bound, "diameter-law"));
    periodic.pass = periodic.pass && p.certified;
  }
  periodic.horizon = samples;
  out.reports.push_back(std::move(periodic));

  WitnessReport transit;
  transit.kind = WitnessKind::Transitivity;
  transit.space = space.name;
  transit.inputs = {{"block_length", std::to_string(depth)}};
  const TransitiveWitness tw = transitive_witness(space, depth);
  transit.witnesses.push_back(format_word(tw.prefix, space.display_offset));
  transit.horizon = tw.prefix.size();
  transit.quantities.push_back({"subsets_visited", double(tw.schedule.size()), double(tw.schedule.size()),
                                std::to_string(tw.schedule.size()), "substring-search"});
  transit.pass = tw.covers_all;
  out.reports.push_back(std::move(transit));

  WitnessReport sens;
  sens.kind = WitnessKind::Sensitivity;
  sens.space = space.name;
  sens.inputs = {{"samples", std::to_string(samples)}, {"degree", std::to_string(table.degree)}};
  sens.pass = true;
  for (std::size_t i = 0; i < samples; ++i) {
    std::mt19937_64 rng(derive_seed(seed, samples + i));
    const std::size_t len = uniform_below(rng, static_cast<std::uint64_t>(depth) + 1);
    Word shared(len);
    for (auto& d : shared) d = static_cast<Digit>(uniform_below(rng, static_cast<std::uint64_t>(space.branching)));
    const SensitivityWitness s = sensitivity_pair(space, &table, shared);
    sens.witnesses.push_back(address_label(s.a, space.display_offset) + " | " +
                             address_label(s.b, space.display_offset));
    sens.quantities.push_back(quantity("separation@" + std::to_string(s.shifts), s.separation));
    sens.pass = sens.pass && s.certified;
  }
  sens.horizon = static_cast<std::size_t>(depth);
  out.reports.push_back(std::move(sens));

  out.pass = std::all_of(out.reports.begin(), out.reports.end(), [](const WitnessReport& r) { return r.pass; });
  return out;
}

WitnessReport li_yorke_report(const SpaceDescriptor& space, const SeparationTable& table, std::size_t horizon) {
  const LiYorkePair pair = li_yorke_pair(space, &table, horizon);
  WitnessReport r;
  r.kind = WitnessKind::LiYorke;
  r.space = space.name;
  r.inputs = {{"horizon", std::to_string(horizon)}};
  r.witnesses = {address_label(pair.a, space.display_offset, 48), address_label(pair.b, space.display_offset, 48)};
  for (const auto& p : pair.proximal) {
    r.quantities.push_back(quantity("proximal@" + std::to_string(p.time), p.upper, "diameter-law"));
  }
  for (const auto& s : pair.separated) {
    r.quantities.push_back(quantity("separated@" + std::to_string(s.time), s.distance));
  }
  r.horizon = horizon;
  r.pass = pair.consistent;
  return r;
}

WitnessReport recurrence_report(const SpaceDescriptor& space, const Address& a, double eps, std::size_t horizon) {
  const RecurrenceStats stats = recurrence_stats(space, a, eps, horizon);
  WitnessReport r;
  r.kind = WitnessKind::Recurrence;
  r.space = space.name;
  r.inputs = {{"epsilon", std::to_string(eps)}, {"horizon", std::to_string(horizon)}};
  r.witnesses = {address_label(a, space.display_offset)};
  for (const auto& e : stats.entries) {
    if (e.verdict == ReturnClass::NoReturn) continue;
    r.quantities.push_back({std::string(to_string(e.verdict)) + "@" + std::to_string(e.time), e.lower, e.upper, "",
                            space.kind == SpaceKind::Sigma ? "sigma-metric" : "center-distance"});
  }
  r.horizon = horizon;
  r.pass = !stats.returns().empty();
  return r;
}

}  // namespace simchaos

#include "simchaos/debruijn.hpp"

#include "simchaos/errors.hpp"

namespace simchaos {

namespace {

std::size_t checked_power(int base, int order, std::size_t cap) {
  std::size_t total = 1;
  for (int i = 0; i < order; ++i) {
    if (total > cap / static_cast<std::size_t>(base)) {
      throw Error(ErrorKind::ResourceCap, std::to_string(base) + "^" + std::to_string(order) +
                                              " blocks exceed the cap of " + std::to_string(cap));
    }
    total *= static_cast<std::size_t>(base);
  }
  return total;
}

}  // namespace

Word de_bruijn_cycle(int base, int order, std::size_t cap) {
  if (base < 2 || order < 1) {
    throw Error(ErrorKind::InvalidArgument, "de Bruijn sequences need base >= 2 and order >= 1");
  }
  const std::size_t length = checked_power(base, order, cap);

  // Duval's successor rule enumerates Lyndon words in lexicographic order;
  // concatenating those whose length divides the order yields B(base, order).
  Word out;
  out.reserve(length);
  const auto n = static_cast<std::size_t>(order);
  const int top = base - 1;
  std::vector<int> w{-1};
  while (!w.empty()) {
    ++w.back();
    const std::size_t m = w.size();
    if (n % m == 0) {
      for (int d : w) out.push_back(static_cast<Digit>(d));
    }
    while (w.size() < n) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == top) w.pop_back();
  }
  return out;
}

Word debruijn_transitive_prefix(int base, int max_len, std::size_t cap) {
  Word cycle = de_bruijn_cycle(base, max_len, cap);
  Word out = cycle;
  out.insert(out.end(), cycle.begin(), cycle.begin() + (max_len - 1));
  return out;
}

}  // namespace simchaos

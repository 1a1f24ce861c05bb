#pragma once

#include <cstddef>

#include "simchaos/address.hpp"

namespace simchaos {

inline constexpr std::size_t kDefaultBlockCap = std::size_t{1} << 24;

/// Cyclic de Bruijn sequence B(base, order) of length base^order, generated
/// with the Fredricksen-Kessler-Maiorana (Lyndon word) construction.
Word de_bruijn_cycle(int base, int order, std::size_t cap = kDefaultBlockCap);

/// Linear word containing every block of length <= max_len over the alphabet
/// as a contiguous substring: the de Bruijn cycle of order max_len unrolled
/// by max_len - 1 digits (shorter blocks are prefixes of longer ones).
Word debruijn_transitive_prefix(int base, int max_len, std::size_t cap = kDefaultBlockCap);

}  // namespace simchaos

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "simchaos/exact.hpp"

namespace simchaos {

using Digit = std::uint8_t;
using Word = std::vector<Digit>;

struct ConstantTail {
  Digit digit = 0;
};

struct RepeatingTail {
  Word block;
};

/// Digits produced on demand. `digit_at(k)` returns the k-th digit of the
/// whole address (1-based, prefix included) and is only trusted for
/// k <= horizon.
struct GeneratorTail {
  std::function<Digit(std::size_t)> digit_at;
  std::size_t horizon = 0;
};

using Tail = std::variant<ConstantTail, RepeatingTail, GeneratorTail>;

/// Infinite index string i1 i2 i3 ... over {0, ..., base-1}, stored as a
/// finite prefix followed by a tail rule. Digits are 0-based internally.
class Address {
 public:
  static Address constant(int base, Word prefix, Digit digit);
  static Address repeating(int base, Word prefix, Word block);
  /// `digit_at` is called with absolute positions k > prefix.size().
  static Address generated(int base, Word prefix, std::function<Digit(std::size_t)> digit_at,
                           std::size_t horizon);

  int base() const { return base_; }
  const Word& prefix() const { return prefix_; }
  const Tail& tail() const { return tail_; }
  bool has_finite_tail() const { return !std::holds_alternative<GeneratorTail>(tail_); }
  /// Largest k for which digit(k) is defined.
  std::size_t horizon() const;

  /// k-th digit, 1-based.
  Digit digit(std::size_t k) const;
  /// First n digits.
  Word first(std::size_t n) const;

  /// Shortest prefix, primitive block; constant blocks become ConstantTail.
  /// Generator tails are returned unchanged.
  Address canonical() const;

  /// Digitwise equality; throws Undecidable if either tail is a generator.
  friend bool operator==(const Address& a, const Address& b);

  /// `<base>:<prefix>|c<d>` or `<base>:<prefix>|r<block>`.
  std::string to_text() const;
  static Address parse(const std::string& text);
  /// Digits rendered with an offset (1 for the 1-based fractal labels),
  /// e.g. "2773...", followed by the tail in parentheses.
  std::string display(int offset) const;

 private:
  Address(int base, Word prefix, Tail tail);

  int base_ = 2;
  Word prefix_;
  Tail tail_;
};

/// Checks every digit of `word` is below `base`.
void validate_word(const Word& word, int base);

/// Parses a digit string such as "0132" or "2773" (subtracting `offset`).
Word parse_word(const std::string& text, int base, int offset = 0);
std::string format_word(const Word& word, int offset = 0);

/// shift^n: digit k of the result is digit k+n of `a`.
Address shift(const Address& a, std::size_t n);

/// Exact value of sum |a_k - b_k| / 2^(k-1) for binary addresses with
/// constant or repeating tails.
ExactRational sigma_distance(const Address& a, const Address& b);

/// diam of a depth-n cylinder of the binary string space: 2^(1-n).
ExactRational cylinder_diameter(int base, int depth);

/// Least p >= 1 with digit(k) == digit(k+p) for all k.
std::optional<std::size_t> is_periodic(const Address& a);

}  // namespace simchaos

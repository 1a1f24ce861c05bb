#include "simchaos/address.hpp"

#include <algorithm>
#include <numeric>

#include "simchaos/errors.hpp"

namespace simchaos {

namespace {

constexpr const char* kDigitChars = "0123456789abcdefghijklmnopqrstuvwxyz";

int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  return -1;
}

// Least q dividing block.size() with block[i] == block[i % q].
std::size_t primitive_period(const Word& block) {
  const std::size_t p = block.size();
  for (std::size_t q = 1; q < p; ++q) {
    if (p % q != 0) continue;
    bool ok = true;
    for (std::size_t i = q; i < p && ok; ++i) {
      ok = block[i] == block[i - q];
    }
    if (ok) return q;
  }
  return p;
}

std::size_t tail_period(const Tail& tail) {
  if (const auto* r = std::get_if<RepeatingTail>(&tail)) return r->block.size();
  return 1;
}

}  // namespace

void validate_word(const Word& word, int base) {
  for (Digit d : word) {
    if (d >= base) {
      throw Error(ErrorKind::DigitOutOfRange,
                  "digit " + std::to_string(int(d)) + " not below base " + std::to_string(base));
    }
  }
}

Word parse_word(const std::string& text, int base, int offset) {
  Word out;
  out.reserve(text.size());
  for (char c : text) {
    const int v = digit_value(c);
    if (v < 0) {
      throw Error(ErrorKind::Parse, std::string("bad digit character '") + c + "'");
    }
    if (v - offset < 0 || v - offset >= base) {
      throw Error(ErrorKind::DigitOutOfRange, std::string("digit '") + c + "' outside the alphabet");
    }
    out.push_back(static_cast<Digit>(v - offset));
  }
  return out;
}

std::string format_word(const Word& word, int offset) {
  std::string out;
  out.reserve(word.size());
  for (Digit d : word) out.push_back(kDigitChars[d + offset]);
  return out;
}

Address::Address(int base, Word prefix, Tail tail)
    : base_(base), prefix_(std::move(prefix)), tail_(std::move(tail)) {
  if (base_ < 2 || base_ > 36) {
    throw Error(ErrorKind::UnsupportedBase, "base must lie in [2, 36]");
  }
  validate_word(prefix_, base_);
  if (const auto* c = std::get_if<ConstantTail>(&tail_)) {
    validate_word(Word{c->digit}, base_);
  } else if (const auto* r = std::get_if<RepeatingTail>(&tail_)) {
    if (r->block.empty()) {
      throw Error(ErrorKind::InvalidArgument, "repeating block must be nonempty");
    }
    validate_word(r->block, base_);
  } else if (!std::get<GeneratorTail>(tail_).digit_at) {
    throw Error(ErrorKind::InvalidArgument, "generator tail without a digit producer");
  }
}

Address Address::constant(int base, Word prefix, Digit digit) {
  return Address(base, std::move(prefix), ConstantTail{digit});
}

Address Address::repeating(int base, Word prefix, Word block) {
  return Address(base, std::move(prefix), RepeatingTail{std::move(block)});
}

Address Address::generated(int base, Word prefix, std::function<Digit(std::size_t)> digit_at,
                           std::size_t horizon) {
  if (horizon < prefix.size()) {
    throw Error(ErrorKind::InvalidArgument, "generator horizon shorter than its prefix");
  }
  return Address(base, std::move(prefix), GeneratorTail{std::move(digit_at), horizon});
}

std::size_t Address::horizon() const {
  if (const auto* g = std::get_if<GeneratorTail>(&tail_)) return g->horizon;
  return std::numeric_limits<std::size_t>::max();
}

Digit Address::digit(std::size_t k) const {
  if (k == 0) {
    throw Error(ErrorKind::InvalidArgument, "digits are indexed from 1");
  }
  if (k <= prefix_.size()) return prefix_[k - 1];
  const std::size_t j = k - prefix_.size() - 1;
  return std::visit(
      [&](const auto& t) -> Digit {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ConstantTail>) {
          return t.digit;
        } else if constexpr (std::is_same_v<T, RepeatingTail>) {
          return t.block[j % t.block.size()];
        } else {
          if (k > t.horizon) {
            throw Error(ErrorKind::HorizonExceeded,
                        "digit " + std::to_string(k) + " beyond generator horizon " +
                            std::to_string(t.horizon));
          }
          const Digit d = t.digit_at(k);
          if (d >= base_) {
            throw Error(ErrorKind::DigitOutOfRange, "generator produced an out-of-range digit");
          }
          return d;
        }
      },
      tail_);
}

Word Address::first(std::size_t n) const {
  Word out(n);
  for (std::size_t k = 1; k <= n; ++k) out[k - 1] = digit(k);
  return out;
}

Address Address::canonical() const {
  if (std::holds_alternative<GeneratorTail>(tail_)) return *this;
  Word prefix = prefix_;
  Word block;
  if (const auto* c = std::get_if<ConstantTail>(&tail_)) {
    block = {c->digit};
  } else {
    block = std::get<RepeatingTail>(tail_).block;
    block.resize(primitive_period(block));
  }
  while (!prefix.empty() && prefix.back() == block.back()) {
    std::rotate(block.rbegin(), block.rbegin() + 1, block.rend());
    prefix.pop_back();
  }
  if (block.size() == 1) return constant(base_, std::move(prefix), block.front());
  return repeating(base_, std::move(prefix), std::move(block));
}

bool operator==(const Address& a, const Address& b) {
  if (!a.has_finite_tail() || !b.has_finite_tail()) {
    throw Error(ErrorKind::Undecidable, "equality of generator addresses is undecidable");
  }
  if (a.base_ != b.base_) return false;
  const Address ca = a.canonical();
  const Address cb = b.canonical();
  if (ca.prefix_ != cb.prefix_) return false;
  const auto block_of = [](const Address& x) {
    if (const auto* c = std::get_if<ConstantTail>(&x.tail_)) return Word{c->digit};
    return std::get<RepeatingTail>(x.tail_).block;
  };
  return block_of(ca) == block_of(cb);
}

std::string Address::to_text() const {
  std::string out = std::to_string(base_) + ":" + format_word(prefix_) + "|";
  if (const auto* c = std::get_if<ConstantTail>(&tail_)) {
    return out + "c" + kDigitChars[c->digit];
  }
  if (const auto* r = std::get_if<RepeatingTail>(&tail_)) {
    return out + "r" + format_word(r->block);
  }
  throw Error(ErrorKind::InvalidArgument, "generator addresses have no text form");
}

Address Address::parse(const std::string& text) {
  const auto colon = text.find(':');
  const auto bar = text.find('|');
  if (colon == std::string::npos || bar == std::string::npos || bar < colon || bar + 2 > text.size()) {
    throw Error(ErrorKind::Parse, "address must look like '<base>:<prefix>|c<d>' or '|r<block>': " + text);
  }
  int base = 0;
  try {
    base = std::stoi(text.substr(0, colon));
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "bad base in address: " + text);
  }
  if (base < 2 || base > 36) {
    throw Error(ErrorKind::UnsupportedBase, "base must lie in [2, 36]");
  }
  Word prefix = parse_word(text.substr(colon + 1, bar - colon - 1), base);
  const char kind = text[bar + 1];
  Word body = parse_word(text.substr(bar + 2), base);
  if (kind == 'c') {
    if (body.size() != 1) throw Error(ErrorKind::Parse, "constant tail takes exactly one digit");
    return constant(base, std::move(prefix), body.front());
  }
  if (kind == 'r') {
    return repeating(base, std::move(prefix), std::move(body));
  }
  throw Error(ErrorKind::Parse, std::string("unknown tail kind '") + kind + "'");
}

std::string Address::display(int offset) const {
  std::string out = format_word(prefix_, offset);
  if (const auto* c = std::get_if<ConstantTail>(&tail_)) {
    return out + "(" + kDigitChars[c->digit + offset] + ")";
  }
  if (const auto* r = std::get_if<RepeatingTail>(&tail_)) {
    return out + "(" + format_word(r->block, offset) + ")";
  }
  return out + "...";
}

Address shift(const Address& a, std::size_t n) {
  if (n == 0) return a;
  const Word& prefix = a.prefix();
  const std::size_t drop = std::min(n, prefix.size());
  Word rest(prefix.begin() + static_cast<std::ptrdiff_t>(drop), prefix.end());
  const std::size_t into_tail = n - drop;

  if (const auto* c = std::get_if<ConstantTail>(&a.tail())) {
    return Address::constant(a.base(), std::move(rest), c->digit);
  }
  if (const auto* r = std::get_if<RepeatingTail>(&a.tail())) {
    Word block = r->block;
    std::rotate(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(into_tail % block.size()),
                block.end());
    return Address::repeating(a.base(), std::move(rest), std::move(block));
  }
  const auto& g = std::get<GeneratorTail>(a.tail());
  if (g.horizon < n + 1) {
    throw Error(ErrorKind::HorizonExceeded, "shift by " + std::to_string(n) +
                                                " needs horizon >= " + std::to_string(n + 1));
  }
  auto inner = g.digit_at;
  return Address::generated(
      a.base(), std::move(rest), [inner, n](std::size_t k) { return inner(k + n); }, g.horizon - n);
}

ExactRational sigma_distance(const Address& a, const Address& b) {
  if (a.base() != 2 || b.base() != 2) {
    throw Error(ErrorKind::UnsupportedBase, "the string-space metric is defined for binary addresses");
  }
  if (!a.has_finite_tail() || !b.has_finite_tail()) {
    throw Error(ErrorKind::UnsupportedExactDistance,
                "exact distance needs constant or repeating tails; truncate generator addresses");
  }
  const Address ca = a.canonical();
  const Address cb = b.canonical();
  const std::size_t pre = std::max(ca.prefix().size(), cb.prefix().size());
  const std::size_t period = std::lcm(tail_period(ca.tail()), tail_period(cb.tail()));

  // Value = A / 2^(pre-1) + B / (2^(pre-1) (2^period - 1)), where A collects
  // the pre-period digits and B one full common period.
  BigInt head = 0;
  for (std::size_t k = 1; k <= pre; ++k) {
    head = (head << 1) + (ca.digit(k) != cb.digit(k) ? 1 : 0);
  }
  BigInt cycle = 0;
  for (std::size_t k = pre + 1; k <= pre + period; ++k) {
    cycle = (cycle << 1) + (ca.digit(k) != cb.digit(k) ? 1 : 0);
  }
  BigInt geometric = 1;
  geometric <<= static_cast<unsigned>(period);
  geometric -= 1;
  const ExactRational scale = ExactRational::pow2(1 - static_cast<int>(pre));
  return scale * (ExactRational(head * geometric + cycle, geometric));
}

ExactRational cylinder_diameter(int base, int depth) {
  if (base != 2) {
    throw Error(ErrorKind::UnsupportedBase, "cylinder diameters are defined for the binary metric only");
  }
  if (depth < 0) {
    throw Error(ErrorKind::InvalidArgument, "depth must be nonnegative");
  }
  return ExactRational::pow2(1 - depth);
}

std::optional<std::size_t> is_periodic(const Address& a) {
  if (!a.has_finite_tail()) {
    throw Error(ErrorKind::Undecidable, "periodicity of a generator address is undecidable");
  }
  const Address c = a.canonical();
  if (!c.prefix().empty()) return std::nullopt;
  return tail_period(c.tail());
}

}  // namespace simchaos

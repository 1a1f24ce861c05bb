#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "simchaos/dass.hpp"
#include "simchaos/errors.hpp"

namespace simchaos {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'D', 'T'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  // LEB128.
  void var(std::uint64_t v) {
    while (v >= 0x80) {
      u8(static_cast<std::uint8_t>(v | 0x80));
      v >>= 7;
    }
    u8(static_cast<std::uint8_t>(v));
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
  void vec(const Vec& v) {
    for (double x : v) f64(x);
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint8_t u8() {
    const int c = in_.get();
    if (c == std::char_traits<char>::eof()) throw Error(ErrorKind::Parse, "truncated tree file");
    return static_cast<std::uint8_t>(c);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{u8()} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{u8()} << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::uint64_t var() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const std::uint8_t b = u8();
      v |= std::uint64_t{b & 0x7fu} << shift;
      if (!(b & 0x80)) return v;
    }
    throw Error(ErrorKind::Parse, "overlong varint");
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  Vec vec(std::size_t n) {
    Vec v(n);
    for (auto& x : v) x = f64();
    return v;
  }
  std::string str() {
    const std::uint32_t n = u32();
    if (n > (1u << 16)) throw Error(ErrorKind::Parse, "implausible string length");
    std::string s(n, '\0');
    in_.read(s.data(), n);
    if (!in_) throw Error(ErrorKind::Parse, "truncated tree file");
    return s;
  }

 private:
  std::istream& in_;
};

}  // namespace

void write_tree(std::ostream& out, const DassTree& tree) {
  Writer w(out);
  out.write(kMagic, 4);
  w.u32(kVersion);
  const MapSpec& s = tree.spec;
  w.u8(static_cast<std::uint8_t>(s.kind));
  w.u32(static_cast<std::uint32_t>(s.dim));
  w.vec(s.r);
  w.vec(s.mu);
  w.str(s.coupling);
  w.vec(s.f0.lo);
  w.vec(s.f0.hi);
  w.u8(s.f0_hole ? 1 : 0);
  if (s.f0_hole) {
    w.vec(s.f0_hole->lo);
    w.vec(s.f0_hole->hi);
  }
  w.vec(s.f.lo);
  w.vec(s.f.hi);
  for (auto e : tree.extent) w.i64(e);
  w.f64(tree.h);
  w.u32(static_cast<std::uint32_t>(tree.depth));
  w.u32(static_cast<std::uint32_t>(tree.branching));
  w.u8(static_cast<std::uint8_t>(tree.survival_start));
  w.u8(tree.lap_partition ? 1 : 0);

  const auto m = static_cast<std::uint64_t>(tree.branching);
  for (int k = 1; k <= tree.depth; ++k) {
    // Alternating run lengths, starting with a (possibly empty) run of
    // non-survivors.
    std::vector<std::uint64_t> runs;
    bool state = false;
    std::uint64_t run = 0;
    for (std::uint64_t c = 0; c < tree.cell_count(); ++c) {
      const bool alive = tree.survival[c] >= k;
      if (alive != state) {
        runs.push_back(run);
        run = 0;
        state = alive;
      }
      ++run;
    }
    runs.push_back(run);
    w.var(runs.size());
    for (auto r : runs) w.var(r);
    // Labels nest, so level k only adds its last digit; survivors in cell
    // order, run-length coded as (digit, count).
    std::vector<std::pair<std::uint8_t, std::uint64_t>> digits;
    for (std::uint64_t c = 0; c < tree.cell_count(); ++c) {
      if (tree.survival[c] < k) continue;
      const auto d = static_cast<std::uint8_t>(tree.label(c, k) % m);
      if (!digits.empty() && digits.back().first == d) {
        ++digits.back().second;
      } else {
        digits.emplace_back(d, 1);
      }
    }
    w.var(digits.size());
    for (const auto& [d, n] : digits) {
      w.u8(d);
      w.var(n);
    }
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing tree");
}

DassTree read_tree(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorKind::Parse, "not a tree file");
  Reader r(in);
  if (r.u32() != kVersion) throw Error(ErrorKind::Parse, "unsupported tree file version");
  DassTree tree;
  MapSpec& s = tree.spec;
  s.kind = static_cast<MapKind>(r.u8());
  if (s.kind != MapKind::Logistic && s.kind != MapKind::Tent) throw Error(ErrorKind::Parse, "unknown map kind");
  s.dim = static_cast<int>(r.u32());
  if (s.dim < 1 || s.dim > 8) throw Error(ErrorKind::Parse, "implausible dimension");
  const auto n = static_cast<std::size_t>(s.dim);
  s.r = r.vec(n);
  s.mu = r.vec(n);
  s.coupling = r.str();
  s.f0.lo = r.vec(n);
  s.f0.hi = r.vec(n);
  if (r.u8()) {
    Box hole;
    hole.lo = r.vec(n);
    hole.hi = r.vec(n);
    s.f0_hole = hole;
  }
  s.f.lo = r.vec(n);
  s.f.hi = r.vec(n);
  std::uint64_t total = 1;
  for (std::size_t a = 0; a < n; ++a) {
    const std::int64_t e = r.i64();
    if (e < 1 || e > (std::int64_t{1} << 28)) throw Error(ErrorKind::Parse, "implausible grid extent");
    tree.extent.push_back(e);
    total *= static_cast<std::uint64_t>(e);
    if (total > (std::uint64_t{1} << 30)) throw Error(ErrorKind::Parse, "implausible grid size");
  }
  tree.h = r.f64();
  tree.depth = static_cast<int>(r.u32());
  tree.branching = static_cast<int>(r.u32());
  tree.survival_start = r.u8();
  tree.lap_partition = r.u8() != 0;
  if (tree.depth < 0 || tree.depth > 20 || tree.branching < 1 || tree.branching > 255) {
    throw Error(ErrorKind::Parse, "implausible tree header");
  }
  tree.survival.assign(total, 0);
  tree.itinerary.assign(total, 0);

  const auto m = static_cast<std::uint64_t>(tree.branching);
  for (int k = 1; k <= tree.depth; ++k) {
    const std::uint64_t nruns = r.var();
    if (nruns > total + 1) throw Error(ErrorKind::Parse, "implausible run count");
    std::uint64_t pos = 0;
    bool alive = false;
    for (std::uint64_t i = 0; i < nruns; ++i) {
      const std::uint64_t len = r.var();
      if (len > total - pos) throw Error(ErrorKind::Parse, "runs overflow the grid");
      if (alive) {
        for (std::uint64_t c = pos; c < pos + len; ++c) {
          if (tree.survival[c] != k - 1) throw Error(ErrorKind::Parse, "survivor sets are not nested");
          tree.survival[c] = static_cast<std::uint8_t>(k);
        }
      }
      pos += len;
      alive = !alive;
    }
    if (pos != total) throw Error(ErrorKind::Parse, "runs do not cover the grid");
    const std::uint64_t ndigits = r.var();
    if (ndigits > total) throw Error(ErrorKind::Parse, "implausible label run count");
    std::uint64_t c = 0;
    for (std::uint64_t i = 0; i < ndigits; ++i) {
      const std::uint8_t d = r.u8();
      std::uint64_t n = r.var();
      if (d >= m) throw Error(ErrorKind::Parse, "label digit out of range");
      for (; n > 0; --n, ++c) {
        while (c < total && tree.survival[c] < k) ++c;
        if (c >= total) throw Error(ErrorKind::Parse, "label table too long");
        tree.itinerary[c] = tree.itinerary[c] * m + d;
      }
    }
    while (c < total && tree.survival[c] < k) ++c;
    if (c != total) throw Error(ErrorKind::Parse, "label table too short");
  }
  rebuild_clusters(tree);
  return tree;
}

void save_tree(const std::string& path, const DassTree& tree) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
  write_tree(out, tree);
}

DassTree load_tree(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_tree(in);
}

}  // namespace simchaos

#include "simchaos/render.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "simchaos/errors.hpp"

namespace simchaos {

namespace {

void check_job(const RenderJob& job) {
  if (job.width < 1 || job.height < 1) throw Error(ErrorKind::InvalidArgument, "resolution must be positive");
  if (static_cast<std::int64_t>(job.width) * job.height > (std::int64_t{1} << 26)) {
    throw Error(ErrorKind::ResourceCap, "raster too large");
  }
  if (!(job.view.x_lo < job.view.x_hi) || !(job.view.y_lo < job.view.y_hi)) {
    throw Error(ErrorKind::InvalidArgument, "viewport must be nonempty");
  }
}

Raster blank(const RenderJob& job) {
  Raster r;
  r.width = job.width;
  r.height = job.height;
  r.channels = job.color ? 3 : 1;
  r.pixels.assign(static_cast<std::size_t>(job.width) * job.height * r.channels, 0);
  return r;
}

Point pixel_center(const RenderJob& job, int x, int y) {
  const double px = job.view.x_lo + (x + 0.5) * (job.view.x_hi - job.view.x_lo) / job.width;
  const double py = job.view.y_hi - (y + 0.5) * (job.view.y_hi - job.view.y_lo) / job.height;
  return {px, py};
}

void paint(Raster& r, int x, int y, std::uint64_t key) {
  const std::size_t at = (static_cast<std::size_t>(y) * r.width + x) * r.channels;
  if (r.channels == 1) {
    r.pixels[at] = 255;
    return;
  }
  // Bright colors from a mixed key so neighbouring labels differ.
  std::uint64_t z = key * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
  z = (z ^ (z >> 29)) * 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 32;
  for (int c = 0; c < 3; ++c) r.pixels[at + c] = static_cast<std::uint8_t>(64 + ((z >> (8 * c)) & 0xff) % 192);
}

}  // namespace

bool Raster::set(int x, int y) const {
  const std::size_t at = (static_cast<std::size_t>(y) * width + x) * channels;
  for (int c = 0; c < channels; ++c) {
    if (pixels[at + c] != 0) return true;
  }
  return false;
}

std::size_t Raster::count_set() const {
  std::size_t n = 0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) n += set(x, y);
  }
  return n;
}

Viewport default_viewport(const SpaceDescriptor& space) {
  switch (space.kind) {
    case SpaceKind::Cantor: return {0.0, 1.0, -0.5, 0.5};
    case SpaceKind::Carpet: return {0.0, 1.0, 0.0, 1.0};
    case SpaceKind::Gasket: return {0.0, 1.0, 0.0, std::sqrt(3.0) / 2.0};
    case SpaceKind::Koch: return {0.0, 1.0, 0.0, std::sqrt(3.0) / 6.0};
    case SpaceKind::Sigma: break;
  }
  throw Error(ErrorKind::UnsupportedSpace, "the string space has no planar embedding");
}

Raster render_space(const SpaceDescriptor& space, int depth, const RenderJob& job) {
  check_job(job);
  if (depth < 0 || depth > 12) throw Error(ErrorKind::ResourceCap, "render depth must lie in [0, 12]");
  Raster r = blank(job);
  for (int y = 0; y < job.height; ++y) {
    for (int x = 0; x < job.width; ++x) {
      Point p = pixel_center(job, x, y);
      // Cantor strips ignore the vertical coordinate.
      if (space.kind == SpaceKind::Cantor) p.y = 0.0;
      if (!contains_at_depth(space, p, depth)) continue;
      std::uint64_t key = 0;
      if (job.color) {
        for (Digit d : address_of(space, p, depth)) key = key * 131 + d + 1;
      }
      paint(r, x, y, key);
    }
  }
  return r;
}

Raster render_tree(const DassTree& tree, int level, const RenderJob& job) {
  check_job(job);
  if (level < 0 || level > tree.depth) throw Error(ErrorKind::InvalidArgument, "level out of range");
  if (tree.extent.size() > 2) throw Error(ErrorKind::InvalidArgument, "only 1-D and 2-D trees render");
  Raster r = blank(job);
  for (int y = 0; y < job.height; ++y) {
    for (int x = 0; x < job.width; ++x) {
      const Point p = pixel_center(job, x, y);
      Vec q{p.x};
      if (tree.extent.size() == 2) q.push_back(p.y);
      const auto cell = tree.cell_at(q);
      if (!cell || !tree.survives(*cell, level)) continue;
      paint(r, x, y, level == 0 ? 0 : tree.label(*cell, level) + 1);
    }
  }
  return r;
}

void write_pgm(std::ostream& out, const Raster& raster) {
  if (raster.channels != 1) throw Error(ErrorKind::InvalidArgument, "PGM needs a one-channel raster");
  out << "P5\n" << raster.width << ' ' << raster.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(raster.pixels.data()), static_cast<std::streamsize>(raster.pixels.size()));
}

void write_ppm(std::ostream& out, const Raster& raster) {
  out << "P6\n" << raster.width << ' ' << raster.height << "\n255\n";
  if (raster.channels == 3) {
    out.write(reinterpret_cast<const char*>(raster.pixels.data()), static_cast<std::streamsize>(raster.pixels.size()));
    return;
  }
  for (auto v : raster.pixels) {
    const char c = static_cast<char>(v);
    out.put(c).put(c).put(c);
  }
}

void save_raster(const std::string& path, const Raster& raster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
  if (raster.channels == 1) {
    write_pgm(out, raster);
  } else {
    write_ppm(out, raster);
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string emit_orbit_csv(const std::vector<Point>& orbit) {
  std::string out = "step,x,y\n";
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    out += std::to_string(i) + ',' + format_double(orbit[i].x) + ',' + format_double(orbit[i].y) + '\n';
  }
  return out;
}

std::string emit_orbit_csv(const std::vector<Vec>& orbit) {
  std::vector<Point> pts;
  pts.reserve(orbit.size());
  for (const auto& v : orbit) pts.push_back({v.empty() ? 0.0 : v[0], v.size() > 1 ? v[1] : 0.0});
  return emit_orbit_csv(pts);
}

std::vector<Point> parse_orbit_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "step,x,y") throw Error(ErrorKind::Parse, "missing step,x,y header");
  std::vector<Point> out;
  while (std::getline(in, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    if (a == std::string::npos || b == std::string::npos) throw Error(ErrorKind::Parse, "bad CSV row: " + line);
    Point p;
    const char* xs = line.data() + a + 1;
    const char* ys = line.data() + b + 1;
    if (std::from_chars(xs, line.data() + b, p.x).ec != std::errc() ||
        std::from_chars(ys, line.data() + line.size(), p.y).ec != std::errc()) {
      throw Error(ErrorKind::Parse, "bad number in CSV row: " + line);
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace simchaos

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "simchaos/dass.hpp"
#include "simchaos/region.hpp"
#include "simchaos/space.hpp"

namespace simchaos {

struct Viewport {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y_lo = 0.0;
  double y_hi = 1.0;
};

struct RenderJob {
  Viewport view;
  int width = 729;
  int height = 729;
  /// Per-label colors (PPM) instead of a monochrome mask (PGM).
  bool color = false;
};

/// Row-major pixels, row 0 at the top of the viewport.
struct Raster {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;

  bool set(int x, int y) const;
  std::size_t count_set() const;
  friend bool operator==(const Raster&, const Raster&) = default;
};

/// Bounding viewport of the root region.
Viewport default_viewport(const SpaceDescriptor& space);

/// Pixels whose centers lie in the union of depth-n regions.
Raster render_space(const SpaceDescriptor& space, int depth, const RenderJob& job);
/// Surviving cells of a tree level; level 0 is the whole working box.
Raster render_tree(const DassTree& tree, int level, const RenderJob& job);

void write_pgm(std::ostream& out, const Raster& raster);
void write_ppm(std::ostream& out, const Raster& raster);
/// PGM for one channel, PPM for three.
void save_raster(const std::string& path, const Raster& raster);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// "step,x,y" header plus one LF-terminated row per point.
std::string emit_orbit_csv(const std::vector<Point>& orbit);
std::string emit_orbit_csv(const std::vector<Vec>& orbit);
std::vector<Point> parse_orbit_csv(const std::string& text);

}  // namespace simchaos

#pragma once

// Planar realisation of a dihedral composition: the star polygon walk, the
// Reuleaux arc subdivision that yields the equilateral n-gon, metrics and SVG.

#include <span>
#include <string>
#include <vector>

#include "reinhardt/seqcore.hpp"

namespace reinhardt {

inline constexpr double kGeometryTolerance = 1e-9;

struct Point {
  double x = 0;
  double y = 0;
};

struct Metrics {
  double diameter = 0;
  double perimeter = 0;
  double width = 0;
};

class PolygonGeometry {
 public:
  PolygonGeometry(OddComposition comp, std::vector<Point> star, std::vector<Point> vertices,
                  Metrics metrics)
      : comp_(std::move(comp)),
        star_(std::move(star)),
        vertices_(std::move(vertices)),
        metrics_(metrics) {}

  const OddComposition& composition() const noexcept { return comp_; }
  int n() const noexcept { return comp_.n(); }
  // Star points in walk order, unit distance apart.
  std::span<const Point> star() const noexcept { return star_; }
  // Counterclockwise polygon vertices.
  std::span<const Point> vertices() const noexcept { return vertices_; }
  const Metrics& metrics() const noexcept { return metrics_; }

 private:
  OddComposition comp_;
  std::vector<Point> star_;
  std::vector<Point> vertices_;
  Metrics metrics_;
};

// Start at the origin heading along +x; advance 1, then turn left by
// pi - k_i pi/n. Throws InvalidComposition when the walk does not close.
std::vector<Point> star_vertices(const OddComposition& comp);

// Distance from the end of the walk back to the start (no closure check).
double star_closure_residual(const OddComposition& comp);

PolygonGeometry polygon_vertices(const OddComposition& comp);

// Diameter by farthest pair, width by rotating calipers, perimeter as the sum
// of sides. Expects a convex counterclockwise polygon; throws InvalidGeometry
// for fewer than three points or zero area.
Metrics compute_metrics(std::span<const Point> polygon);
Metrics metrics(const PolygonGeometry& geom);

// O(n^2) minimum over edge directions; the caliper cross-check.
double width_by_edges(std::span<const Point> polygon);

double signed_area(std::span<const Point> polygon);
bool is_strictly_convex(std::span<const Point> polygon);

struct SvgOptions {
  int size_px = 480;
  double outline_width = 1.5;
  double skeleton_width = 0.4;
  double star_width = 1.6;
  bool show_skeleton = true;
  bool show_caption = true;
};

std::string render_svg(const PolygonGeometry& geom, const SvgOptions& options = {});

// "n30_10-10-10.svg" style names derived from a canonical composition.
std::string svg_filename(const OddComposition& canonical);

}  // namespace reinhardt

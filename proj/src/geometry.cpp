#include "reinhardt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reinhardt/errors.hpp"

namespace reinhardt {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Headings theta_j of the walk: theta_0 = 0, theta_j = theta_{j-1} + pi - k_j pi/n.
std::vector<double> headings(const OddComposition& comp) {
  const auto parts = comp.parts();
  const double unit = std::numbers::pi / comp.n();
  std::vector<double> out(parts.size() + 1);
  for (std::size_t j = 1; j <= parts.size(); ++j) {
    out[j] = out[j - 1] + std::numbers::pi - parts[j % parts.size()] * unit;
  }
  return out;
}

std::vector<Point> walk(const OddComposition& comp, Point& end) {
  const auto theta = headings(comp);
  std::vector<Point> pts;
  pts.reserve(comp.size());
  Point cur{0, 0};
  for (std::size_t j = 0; j < comp.size(); ++j) {
    pts.push_back(cur);
    cur.x += std::cos(theta[j]);
    cur.y += std::sin(theta[j]);
  }
  end = cur;
  return pts;
}

}  // namespace

double star_closure_residual(const OddComposition& comp) {
  Point end;
  walk(comp, end);
  return std::hypot(end.x, end.y);
}

std::vector<Point> star_vertices(const OddComposition& comp) {
  Point end;
  auto pts = walk(comp, end);
  if (std::hypot(end.x, end.y) > kGeometryTolerance) {
    throw InvalidComposition("star walk does not close for " + comp.str());
  }
  return pts;
}

PolygonGeometry polygon_vertices(const OddComposition& comp) {
  auto star = star_vertices(comp);
  const auto parts = comp.parts();
  const std::size_t len = parts.size();
  const auto theta = headings(comp);
  const double unit = std::numbers::pi / comp.n();

  // Arcs centred at V_0, V_2, V_4, ... (every vertex, as len is odd); the arc
  // at V_c runs from V_{c-1} to V_{c+1} in k_c steps of pi/n.
  std::vector<Point> verts;
  verts.reserve(static_cast<std::size_t>(comp.n()));
  for (std::size_t step = 0; step < len; ++step) {
    const std::size_t c = (2 * step) % len;
    const double start = c == 0 ? theta[len - 1] + std::numbers::pi
                                : theta[c - 1] + std::numbers::pi;
    for (int t = 0; t < parts[c]; ++t) {
      const double a = start - t * unit;
      verts.push_back({star[c].x + std::cos(a), star[c].y + std::sin(a)});
    }
  }
  if (signed_area(verts) < 0) std::reverse(verts.begin(), verts.end());
  const auto m = compute_metrics(verts);
  return PolygonGeometry(comp, std::move(star), std::move(verts), m);
}

double signed_area(std::span<const Point> poly) {
  double twice = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    twice += a.x * b.y - a.y * b.x;
  }
  return twice / 2;
}

bool is_strictly_convex(std::span<const Point> poly) {
  const std::size_t len = poly.size();
  if (len < 3) return false;
  int sign = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const double c = cross(poly[i], poly[(i + 1) % len], poly[(i + 2) % len]);
    if (std::abs(c) <= 1e-15) return false;
    const int s = c > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) return false;
  }
  return true;
}

double width_by_edges(std::span<const Point> poly) {
  const std::size_t len = poly.size();
  double best = INFINITY;
  for (std::size_t i = 0; i < len; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % len];
    const double edge = dist(a, b);
    double far = 0;
    for (const auto& p : poly) far = std::max(far, std::abs(cross(a, b, p)) / edge);
    best = std::min(best, far);
  }
  return best;
}

Metrics compute_metrics(std::span<const Point> poly) {
  const std::size_t len = poly.size();
  if (len < 3 || std::abs(signed_area(poly)) < 1e-12) {
    throw InvalidGeometry("polygon is degenerate");
  }
  Metrics m;
  for (std::size_t i = 0; i < len; ++i) {
    m.perimeter += dist(poly[i], poly[(i + 1) % len]);
    for (std::size_t j = i + 1; j < len; ++j) m.diameter = std::max(m.diameter, dist(poly[i], poly[j]));
  }
  // Rotating calipers: for each edge, advance the antipodal pointer while
  // the distance to the edge line grows.
  const double orient = signed_area(poly) > 0 ? 1.0 : -1.0;
  auto height = [&](std::size_t i, std::size_t k) {
    return orient * cross(poly[i], poly[(i + 1) % len], poly[k % len]) /
           dist(poly[i], poly[(i + 1) % len]);
  };
  m.width = INFINITY;
  std::size_t k = 1;
  for (std::size_t i = 0; i < len; ++i) {
    if (k <= i) k = i + 1;
    while (height(i, k + 1) >= height(i, k)) {
      ++k;
      if (k > i + len) break;
    }
    m.width = std::min(m.width, height(i, k));
  }
  return m;
}

Metrics metrics(const PolygonGeometry& geom) { return compute_metrics(geom.vertices()); }

}  // namespace reinhardt

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "reinhardt/geometry.hpp"

namespace reinhardt {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", std::abs(v) < 5e-5 ? 0.0 : v);
  return buf;
}

// Breaks a long caption into lines of at most `width` characters at commas.
std::vector<std::string> wrap(const std::string& text, std::size_t width) {
  std::vector<std::string> lines;
  std::string cur;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string::npos ? text.size() : comma + 1;
    const std::string piece = text.substr(start, end - start);
    if (!cur.empty() && cur.size() + piece.size() > width) {
      lines.push_back(cur);
      cur.clear();
    }
    cur += piece;
    start = end;
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

}  // namespace

std::string svg_filename(const OddComposition& canonical) {
  std::string name = "n" + std::to_string(canonical.n()) + "_";
  const auto parts = canonical.parts();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) name += '-';
    name += std::to_string(parts[i]);
  }
  return name + ".svg";
}

std::string render_svg(const PolygonGeometry& geom, const SvgOptions& options) {
  const auto verts = geom.vertices();
  double minx = INFINITY, miny = INFINITY, maxx = -INFINITY, maxy = -INFINITY;
  for (const auto& p : verts) {
    minx = std::min(minx, p.x);
    miny = std::min(miny, p.y);
    maxx = std::max(maxx, p.x);
    maxy = std::max(maxy, p.y);
  }
  const double size = options.size_px;
  const double margin = 0.06 * size;
  const double scale = (size - 2 * margin) / std::max(maxx - minx, maxy - miny);
  const double offx = margin + ((size - 2 * margin) - (maxx - minx) * scale) / 2;
  const double offy = margin + ((size - 2 * margin) - (maxy - miny) * scale) / 2;
  auto X = [&](const Point& p) { return fmt(offx + (p.x - minx) * scale); };
  // SVG y grows downwards.
  auto Y = [&](const Point& p) { return fmt(offy + (maxy - p.y) * scale); };

  const auto caption = wrap(geom.composition().str(), 48);
  const double caption_height = options.show_caption ? 16.0 * static_cast<double>(caption.size()) + 8 : 0;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.size_px
      << "\" height=\"" << fmt(size + caption_height) << "\" viewBox=\"0 0 " << options.size_px
      << ' ' << fmt(size + caption_height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (options.show_skeleton) {
    out << "<g stroke=\"#777777\" stroke-width=\"" << fmt(options.skeleton_width) << "\">\n";
    for (std::size_t i = 0; i < verts.size(); ++i) {
      for (std::size_t j = i + 1; j < verts.size(); ++j) {
        const double d = std::hypot(verts[i].x - verts[j].x, verts[i].y - verts[j].y);
        if (std::abs(d - 1.0) < 1e-7) {
          out << "<line x1=\"" << X(verts[i]) << "\" y1=\"" << Y(verts[i]) << "\" x2=\""
              << X(verts[j]) << "\" y2=\"" << Y(verts[j]) << "\"/>\n";
        }
      }
    }
    out << "</g>\n";
  }

  const auto star = geom.star();
  out << "<polygon fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"" << fmt(options.star_width)
      << "\" points=\"";
  for (std::size_t i = 0; i < star.size(); ++i) {
    if (i) out << ' ';
    out << X(star[i]) << ',' << Y(star[i]);
  }
  out << "\"/>\n";

  out << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"" << fmt(options.outline_width)
      << "\" stroke-linejoin=\"round\" points=\"";
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (i) out << ' ';
    out << X(verts[i]) << ',' << Y(verts[i]);
  }
  out << "\"/>\n";

  if (options.show_caption) {
    out << "<text font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">\n";
    for (std::size_t i = 0; i < caption.size(); ++i) {
      out << "<tspan x=\"" << fmt(size / 2) << "\" y=\"" << fmt(size + 16.0 * static_cast<double>(i + 1))
          << "\">" << caption[i] << "</tspan>\n";
    }
    out << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace reinhardt

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

#include "narrascope/error.hpp"
#include "narrascope/render/render.hpp"

namespace narrascope::render {
namespace {

std::string fixed(double v, int precision) {
  if (v == 0.0) v = 0.0;  // no "-0.00"
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  std::string out(buf, res.ptr);
  if (out.starts_with("-") && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

struct Point {
  std::string label;
  bool verb = false;
  double x = 0.0;  // pixel space
  double y = 0.0;
};

struct Box {
  double x0, y0, x1, y1;
  bool overlaps(const Box& o) const {
    return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
  }
};

}  // namespace

std::string axis_label(std::size_t dim_index, double share) {
  return "Dim " + std::to_string(dim_index + 1) + " (" + fixed(share * 100.0, 2) + "%)";
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_biplot(const session::AnalysisSnapshot& snap, const BiplotStyle& style) {
  const auto& ca = snap.ca;
  if (ca.dims() <= std::max(style.x_dim, style.y_dim)) {
    throw Error(ErrorKind::kInvalidArgument, "biplot needs at least " +
                                                 std::to_string(std::max(style.x_dim, style.y_dim) + 1) +
                                                 " dimensions");
  }

  double extent = 0.0;
  for (const auto* m : {&ca.row_coords, &ca.col_coords}) {
    for (std::size_t i = 0; i < m->rows(); ++i) {
      extent = std::max({extent, std::abs((*m)(i, style.x_dim)), std::abs((*m)(i, style.y_dim))});
    }
  }
  if (extent <= 0.0) extent = 1.0;
  const double w = style.width;
  const double h = style.height;
  const double cx = w / 2.0;
  const double cy = h / 2.0;
  const double scale = std::min(w / 2.0 - style.margin, h / 2.0 - style.margin) / (extent * 1.05);

  std::vector<Point> points;
  const auto add = [&](const ca::Matrix& m, const std::vector<std::string>& labels, bool verb) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      points.push_back({labels[i], verb, cx + m(i, style.x_dim) * scale,
                        cy - m(i, style.y_dim) * scale});
    }
  };
  add(ca.row_coords, snap.table.row_labels(), true);
  add(ca.col_coords, snap.table.col_labels(), false);
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    if (a.label != b.label) return a.label < b.label;
    return a.verb > b.verb;
  });

  const double fs = style.font_size;
  const auto share = [&](std::size_t d) {
    return d < ca.inertia_share.size() ? ca.inertia_share[d] : 0.0;
  };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(style.width) + "\" height=\"" + std::to_string(style.height) +
         "\" viewBox=\"0 0 " + std::to_string(style.width) + " " + std::to_string(style.height) +
         "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(style.font_size) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(style.width) + "\" height=\"" +
         std::to_string(style.height) + "\" fill=\"#ffffff\"/>\n";
  out += "<g class=\"axes\" stroke=\"#888888\" stroke-dasharray=\"4 3\">\n";
  out += "<line x1=\"" + fixed(style.margin, 2) + "\" y1=\"" + fixed(cy, 2) + "\" x2=\"" +
         fixed(w - style.margin, 2) + "\" y2=\"" + fixed(cy, 2) + "\"/>\n";
  out += "<line x1=\"" + fixed(cx, 2) + "\" y1=\"" + fixed(style.margin, 2) + "\" x2=\"" +
         fixed(cx, 2) + "\" y2=\"" + fixed(h - style.margin, 2) + "\"/>\n";
  out += "</g>\n";
  out += "<text class=\"axis-label\" x=\"" + fixed(cx, 2) + "\" y=\"" +
         fixed(h - style.margin / 3.0, 2) + "\" text-anchor=\"middle\">" +
         xml_escape(axis_label(style.x_dim, share(style.x_dim))) + "</text>\n";
  out += "<text class=\"axis-label\" x=\"" + fixed(style.margin / 3.0, 2) + "\" y=\"" +
         fixed(cy, 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 " +
         fixed(style.margin / 3.0, 2) + " " + fixed(cy, 2) + ")\">" +
         xml_escape(axis_label(style.y_dim, share(style.y_dim))) + "</text>\n";

  // Labels sit up-right of their marker and move down until clear.
  std::vector<Box> placed;
  const double r = 4.0;
  for (const auto& p : points) {
    const double lw = 0.6 * fs * static_cast<double>(p.label.size());
    double lx = p.x + r + 2.0;
    double ly = p.y - r;
    for (int tries = 0; tries < 50; ++tries) {
      const Box b{lx, ly - fs, lx + lw, ly};
      if (std::none_of(placed.begin(), placed.end(), [&](const Box& o) { return b.overlaps(o); })) {
        break;
      }
      ly += fs + 1.0;
    }
    placed.push_back({lx, ly - fs, lx + lw, ly});

    const std::string& color = p.verb ? style.verb_color : style.noun_color;
    out += std::string("<g class=\"point ") + (p.verb ? "verb" : "noun") + "\">";
    if (p.verb) {
      out += "<rect class=\"marker\" x=\"" + fixed(p.x - r, 2) + "\" y=\"" + fixed(p.y - r, 2) +
             "\" width=\"" + fixed(2 * r, 2) + "\" height=\"" + fixed(2 * r, 2) + "\" fill=\"" +
             color + "\"/>";
    } else {
      out += "<circle class=\"marker\" cx=\"" + fixed(p.x, 2) + "\" cy=\"" + fixed(p.y, 2) +
             "\" r=\"" + fixed(r, 2) + "\" fill=\"" + color + "\"/>";
    }
    out += "<text x=\"" + fixed(lx, 2) + "\" y=\"" + fixed(ly, 2) + "\" fill=\"" + color + "\">" +
           xml_escape(p.label) + "</text></g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace narrascope::render
